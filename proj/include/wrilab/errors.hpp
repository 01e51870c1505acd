#pragma once

#include <stdexcept>
#include <string>

namespace wrilab {

// Precondition or grid-compatibility violation.
class DomainError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

// Invalid experiment / run configuration. The message names the violated
// invariant so the CLI can report it verbatim.
class ConfigError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

class UnsupportedMode : public std::logic_error {
public:
  using std::logic_error::logic_error;
};

// Non-finite values encountered inside an iterative solver.
class NumericalBreakdown : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

} // namespace wrilab
