#pragma once

#include <stdexcept>
#include <string>

namespace optolattice {

// Bad or inconsistent user input (maps to CLI exit code 2).
class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// A solver failed to reach its tolerance or hit a singular case (exit code 3).
class NumericalError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Argument outside the domain where a closed form is defined.
class DomainError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

class NoBistabilityError : public NumericalError {
public:
  NoBistabilityError() : NumericalError("no bistability: response curve has no fold in the search window") {}
};

} // namespace optolattice
