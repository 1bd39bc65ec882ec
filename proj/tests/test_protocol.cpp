#include <gtest/gtest.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <atomic>
#include <filesystem>
#include <future>
#include <json.hpp>
#include <sstream>
#include <thread>

#include "tdenv/editor.hpp"
#include "tdenv/protocol.hpp"
#include "tdenv/trajectory.hpp"
#include "test_util.hpp"

using namespace tdenv;
using json = nlohmann::ordered_json;
using tdenv::testing::config_dir;

namespace {

struct Client {
  explicit Client(WallClock clock = {}) : server(ServerOptions{config_dir(), std::move(clock)}) {}

  json call(const std::string& command, json payload = json::object(), const std::string& sid = "") {
    json req = {{"schema_version", kProtocolVersion}, {"id", ++id}, {"command", command}};
    if (!sid.empty()) req["session_id"] = sid;
    req["payload"] = std::move(payload);
    const std::string line = server.handle_line(req.dump());
    EXPECT_EQ(line.find('\n'), std::string::npos);
    return json::parse(line);
  }

  json ok(const std::string& command, json payload = json::object(), const std::string& sid = "") {
    json r = call(command, std::move(payload), sid);
    EXPECT_EQ(r["status"], "ok") << r.dump();
    return r;
  }

  std::string create(json payload) { return ok("create", std::move(payload))["session_id"]; }

  ProtocolServer server;
  int id = 0;
};

std::string error_code(const json& reply) {
  EXPECT_EQ(reply["status"], "error") << reply.dump();
  return reply["error"]["code"];
}

}  // namespace

TEST(Protocol, ReplyEnvelope) {
  Client c;
  const json r = c.ok("create", {{"level", "Lv1"}, {"seed", 4}});
  EXPECT_EQ(r["schema_version"], kProtocolVersion);
  EXPECT_EQ(r["id"], 1);
  EXPECT_EQ(r["session_id"], "s1");
  EXPECT_EQ(r["payload"]["session_id"], "s1");
  EXPECT_EQ(r["payload"]["mode"], "agent");
  EXPECT_TRUE(r["payload"]["observation"]["text"].is_object());
  EXPECT_EQ(c.server.session_count(), 1u);
}

TEST(Protocol, StepMatchesInProcessEnvironment) {
  Client c;
  const std::string sid = c.create({{"level", "Lv2"}, {"seed", 11}, {"modalities", {"text", "structured"}}});
  Environment env = tdenv::testing::make_env("Lv2", EnvOptions{kDefaultActionInterval, {true, true, false}});
  env.reset(11);
  const std::vector<Action> actions = {{-1.0, 0.4, 0}, {0.3, 0.3, 9}, {2.0, 2.0, 3}, {0.0, 0.0, 6}};
  for (const Action& a : actions) {
    const json r = c.ok("step", {{"action", {a.x, a.y, a.c}}}, sid);
    const StepResult s = env.step(a);
    EXPECT_EQ(r["payload"]["observation"]["text"], json::parse(s.observation.text));
    EXPECT_EQ(r["payload"]["observation"]["structured"].size(), static_cast<std::size_t>(s.observation.structured.size()));
    EXPECT_EQ(r["payload"]["reward"], s.reward);
    EXPECT_EQ(r["payload"]["info"]["error_code"], s.info.action.error_code);
    EXPECT_EQ(r["payload"]["done"], s.done);
  }
  const json o = c.ok("observe", json::object(), sid);
  EXPECT_EQ(o["payload"]["observation"]["text"], json::parse(env.observe_text()));
}

TEST(Protocol, ObjectFormActionAndValidation) {
  Client c;
  const std::string sid = c.create({{"level", "Lv1"}});
  EXPECT_EQ(c.ok("step", {{"x", 0.0}, {"y", 0.0}, {"action", 6}}, sid)["payload"]["info"]["error_code"], 0);
  EXPECT_EQ(error_code(c.call("step", {{"x", 0.0}, {"y", 0.0}}, sid)), "bad_request");
  EXPECT_EQ(error_code(c.call("step", {{"action", {0.0, 0.0, 12}}}, sid)), "bad_request");
  EXPECT_EQ(error_code(c.call("step", {{"action", {"1", 0.0, 1}}}, sid)), "bad_request");
  EXPECT_EQ(error_code(c.call("human_input", {{"action", {0.0, 0.0, 6}}}, sid)), "bad_request");
}

TEST(Protocol, ErrorCodes) {
  Client c;
  EXPECT_EQ(error_code(json::parse(c.server.handle_line("{oops"))), "bad_request");
  EXPECT_EQ(error_code(json::parse(c.server.handle_line("[1, 2]"))), "bad_request");
  EXPECT_EQ(error_code(json::parse(c.server.handle_line(R"({"command": "create"})"))), "version_mismatch");
  EXPECT_EQ(error_code(json::parse(c.server.handle_line(R"({"schema_version": 99, "command": "create"})"))),
            "version_mismatch");
  EXPECT_EQ(error_code(c.call("teleport")), "unknown_command");
  EXPECT_EQ(error_code(c.call("step", {{"action", {0, 0, 6}}}, "s42")), "unknown_session");
  EXPECT_EQ(error_code(c.call("step", {{"action", {0, 0, 6}}})), "bad_request");
  EXPECT_EQ(error_code(c.call("create", {{"level", "Lv9"}})), "config_error");
  EXPECT_EQ(error_code(c.call("create", {{"level", "Lv1"}, {"mode", "spectator"}})), "bad_request");
  const json r = c.call("create", {{"level", "Lv1"}, {"action_interval", 0}});
  EXPECT_EQ(error_code(r), "bad_request");
  EXPECT_FALSE(r["error"]["message"].get<std::string>().empty());
  EXPECT_EQ(c.server.session_count(), 0u);
}

TEST(Protocol, EpisodeOverAndClose) {
  Client c;
  const std::string sid = c.create({{"level_document", level_to_json(tdenv::testing::micro_level(1))}});
  json r;
  do r = c.ok("step", {{"action", {0.0, 0.0, 6}}}, sid);
  while (!r["payload"]["done"].get<bool>());
  EXPECT_EQ(error_code(c.call("step", {{"action", {0.0, 0.0, 6}}}, sid)), "episode_over");
  EXPECT_EQ(c.ok("reset", {{"seed", 2}}, sid)["payload"]["observation"]["text"]["Level_Current_Step"], 0);
  c.ok("close", json::object(), sid);
  EXPECT_EQ(error_code(c.call("observe", json::object(), sid)), "unknown_session");
  EXPECT_EQ(c.server.session_count(), 0u);
}

TEST(Protocol, InterleavedSessionsAreIndependent) {
  Client c;
  const std::string a = c.create({{"level", "Lv3"}, {"seed", 5}});
  const std::string b = c.create({{"level", "Lv3"}, {"seed", 5}});
  const std::string other = c.create({{"level", "Lv5"}, {"seed", 1}});
  for (int i = 0; i < 30; ++i) {
    const json act = {{"action", {-2.0 + 0.13 * i, 1.0 - 0.07 * i, i % 12}}};
    c.ok("step", {{"action", {0.5, 0.5, 9}}}, other);
    const json ra = c.ok("step", act, a);
    const json rb = c.ok("step", act, b);
    EXPECT_EQ(ra["payload"], rb["payload"]) << "step " << i;
  }
}

TEST(Protocol, ConcurrentSessionsMatchSequential) {
  Client c;
  std::vector<std::string> sids;
  for (int i = 0; i < 4; ++i) sids.push_back(c.create({{"level", "Lv4"}, {"seed", 8}}));
  std::vector<std::future<std::string>> futs;
  for (const auto& sid : sids)
    futs.push_back(std::async(std::launch::async, [&c, sid] {
      std::string last;
      for (int i = 0; i < 40; ++i) {
        json req = {{"schema_version", 1}, {"command", "step"}, {"session_id", sid},
                    {"payload", {{"action", {0.1 * (i % 7) - 0.3, -0.2, (i * 5) % 12}}}}};
        last = json::parse(c.server.handle_line(req.dump()))["payload"].dump();
      }
      return last;
    }));
  const std::string first = futs[0].get();
  for (std::size_t i = 1; i < futs.size(); ++i) EXPECT_EQ(futs[i].get(), first);
}

TEST(Protocol, RenderFormats) {
  Client c;
  const std::string sid = c.create({{"level", "Lv1"}});
  json r = c.ok("render", json::object(), sid);
  EXPECT_EQ(r["payload"]["width"], 512);
  EXPECT_EQ(r["payload"]["format"], "png");
  EXPECT_EQ(r["payload"]["data"].get<std::string>().rfind("iVBORw0KGgo", 0), 0u);
  r = c.ok("render", {{"format", "raw"}, {"downsample", true}}, sid);
  EXPECT_EQ(r["payload"]["width"], 128);
  EXPECT_EQ(r["payload"]["data"].get<std::string>().size(), 4u * ((128 * 128 * 3 + 2) / 3));
  EXPECT_EQ(error_code(c.call("render", {{"format", "bmp"}}, sid)), "bad_request");
}

TEST(Protocol, HumanSessionPacedByWallClock) {
  auto now = std::make_shared<double>(100.0);
  Client c([now] { return *now; });
  const std::string sid = c.create({{"level", "Lv1"}, {"mode", "human"}, {"seed", 3}, {"record", true}});
  EXPECT_EQ(error_code(c.call("step", {{"action", {0, 0, 6}}}, sid)), "bad_request");

  *now += 1.0;
  json r = c.ok("observe", json::object(), sid);
  EXPECT_EQ(r["payload"]["observation"]["text"]["Level_Current_Step"], 50);
  EXPECT_EQ(r["payload"]["observation"]["text"]["Level_Current_Time"], 1.0);

  *now += 0.5;
  r = c.ok("human_input", {{"action", {0.5, -0.5, 9}}}, sid);
  EXPECT_EQ(r["payload"]["tick"], 75);
  EXPECT_EQ(r["payload"]["error_code"], 0);

  *now += 0.019;
  r = c.ok("observe", json::object(), sid);
  EXPECT_EQ(r["payload"]["observation"]["text"]["Level_Current_Step"], 75);
  *now += 2.0;
  r = c.ok("human_input", {{"x", 1.0}, {"y", 1.0}, {"action", 9}}, sid);
  EXPECT_EQ(r["payload"]["tick"], 175);

  const auto path = std::filesystem::temp_directory_path() / "tdenv_human_trace.jsonl";
  *now += 3.0;
  r = c.ok("record", {{"path", path.string()}}, sid);
  EXPECT_EQ(r["payload"]["records"], 2);
  EXPECT_EQ(r["payload"]["final_tick"], 325);

  const Trajectory t = load_trajectory(path);
  EXPECT_EQ(t.header.level, "Lv1");
  ASSERT_EQ(t.records.size(), 2u);
  EXPECT_EQ(t.records[0].t, 75);
  const ReplayReport rep = replay(t, config_dir());
  EXPECT_TRUE(rep.identical) << rep.mismatch;
  EXPECT_EQ(rep.final_tick, 325);
  std::filesystem::remove(path);
}

TEST(Protocol, RecordRequiresRecording) {
  Client c;
  const std::string sid = c.create({{"level", "Lv1"}});
  EXPECT_EQ(error_code(c.call("record", json::object(), sid)), "bad_request");
  c.ok("reset", {{"record", true}}, sid);
  c.ok("step", {{"action", {0, 0, 6}}}, sid);
  const auto path = std::filesystem::temp_directory_path() / "tdenv_agent_trace.jsonl";
  EXPECT_EQ(c.ok("record", {{"path", path.string()}}, sid)["payload"]["records"], 1);
  EXPECT_TRUE(replay(load_trajectory(path), config_dir()).identical);
  std::filesystem::remove(path);
  EXPECT_EQ(error_code(c.call("record", {{"path", "/proc/definitely/not/here.jsonl"}}, sid)), "io_error");
}

TEST(Protocol, EditorImport) {
  Client c;
  const std::string doc = export_editor_document(*tdenv::testing::level("Lv2"));
  json r = c.ok("editor_import", {{"document", doc}});
  EXPECT_EQ(r["payload"]["roads"], tdenv::testing::level("Lv2")->roads.size());
  const std::string sid = c.create({{"level_document", r["payload"]["level"]}, {"seed", 1}});
  EXPECT_EQ(c.ok("observe", json::object(), sid)["payload"]["observation"]["text"]["Level_Total_Waves_Number"],
            tdenv::testing::level("Lv2")->total_waves());
  json bad = json::parse(doc);
  bad["tower_points"][0]["position"] = {{"X", 5.0}, {"Y", 0.0}};
  EXPECT_EQ(error_code(c.call("editor_import", {{"document", bad}})), "config_error");
}

TEST(Protocol, StreamServerAnswersEachLine) {
  ProtocolServer server(ServerOptions{config_dir(), {}});
  std::istringstream in(
      R"({"schema_version": 1, "id": "a", "command": "create", "payload": {"level": "Lv1"}})"
      "\n\n"
      R"({"schema_version": 1, "id": "b", "session_id": "s1", "command": "close"})"
      "\n");
  std::ostringstream out;
  serve_stream(server, in, out);
  std::istringstream replies(out.str());
  std::string line;
  std::vector<json> rs;
  while (std::getline(replies, line)) rs.push_back(json::parse(line));
  ASSERT_EQ(rs.size(), 2u);
  EXPECT_EQ(rs[0]["id"], "a");
  EXPECT_EQ(rs[1]["payload"]["closed"], true);
}

TEST(Protocol, TcpSmoke) {
  ProtocolServer server(ServerOptions{config_dir(), {}});
  std::atomic<bool> stop{false};
  std::promise<int> bound;
  std::thread t([&] { serve_tcp(server, 0, stop, [&](int port) { bound.set_value(port); }); });
  const int port = bound.get_future().get();

  const int fd = ::socket(AF_INET, SOCK_STREAM, 0);
  ASSERT_GE(fd, 0);
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(static_cast<std::uint16_t>(port));
  addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
  ASSERT_EQ(::connect(fd, reinterpret_cast<sockaddr*>(&addr), sizeof addr), 0);
  const std::string req =
      R"({"schema_version": 1, "id": 7, "command": "create", "payload": {"level": "Lv1", "modalities": ["text"]}})"
      "\n";
  ASSERT_EQ(::send(fd, req.data(), req.size(), 0), static_cast<ssize_t>(req.size()));
  std::string reply;
  char buf[4096];
  while (reply.find('\n') == std::string::npos) {
    const ssize_t n = ::recv(fd, buf, sizeof buf, 0);
    ASSERT_GT(n, 0);
    reply.append(buf, static_cast<std::size_t>(n));
  }
  ::close(fd);
  const json r = json::parse(reply.substr(0, reply.find('\n')));
  EXPECT_EQ(r["status"], "ok");
  EXPECT_EQ(r["id"], 7);
  stop = true;
  t.join();
  EXPECT_EQ(server.session_count(), 1u);
}
