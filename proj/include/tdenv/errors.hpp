#pragma once

#include <stdexcept>
#include <string>

namespace tdenv {

/// A configuration document failed to parse or violated a schema invariant.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An engine operation was invoked outside its contract (e.g. step after done).
class EnvError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace tdenv
