#pragma once

#include <stdexcept>
#include <string>

namespace mpbandit {

// Caller handed in something outside the operation's domain.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Operation called in a state where it is undefined (e.g. update before select).
class InvalidState : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Experiment configuration violates a validation rule.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InsufficientData : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace mpbandit
