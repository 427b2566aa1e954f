#pragma once

#include <stdexcept>
#include <string>

namespace scpseudo {

// Enumeration or table size would exceed a configured cap. Carries the size
// that would have been needed so callers can print a remediation hint.
class budget_error : public std::runtime_error {
public:
  budget_error(const std::string& what, double required, double cap)
      : std::runtime_error(what + " (required " + std::to_string(required) +
                           ", cap " + std::to_string(cap) + ")"),
        required_(required), cap_(cap) {}

  double required() const { return required_; }
  double cap() const { return cap_; }

private:
  double required_;
  double cap_;
};

// A structural invariant that was promised by construction does not hold
// (component shapes disagree, a wrapped word fails its parity checks, ...).
class property_error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

} // namespace scpseudo
