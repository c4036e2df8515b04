#pragma once

#include <stdexcept>
#include <string>

namespace hexsse {

/// Invalid user-supplied parameters (sizes, config keys, input files).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An exact method was asked for more than it can enumerate.
class CapacityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A constructed object violates its own invariants. Indicates a bug.
class ConstructionError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class StatisticsError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace hexsse
