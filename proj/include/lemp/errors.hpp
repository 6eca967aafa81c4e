#pragma once

#include <stdexcept>
#include <string>

namespace lemp {

/// Input outside the mathematical domain of an operation (non-positive time
/// constant, channel height exceeded, observation point on the axis, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Inconsistent configuration: bad scenario keys, illegal filter order,
/// probe inside an absorbing layer, mismatched frequency grids.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace lemp
