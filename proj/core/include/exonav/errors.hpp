#pragma once

#include <stdexcept>
#include <string>

namespace exonav {

/// Input that violates a documented precondition (bad spec field, bad grid).
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Math-domain failure of the kinematic model for otherwise well-formed input.
class DomainError : public std::domain_error {
 public:
  enum class Reason {
    invalid_input,   // geometric input outside the model's domain
    over_actuated,   // H^2 < 0: no real cylinder height
    non_physical,    // R <= 0 or tendon length <= 0
    unreachable,     // tip farther than the neutral-axis length
  };

  DomainError(Reason reason, const std::string& what)
      : std::domain_error(what), reason_(reason) {}

  [[nodiscard]] Reason reason() const noexcept { return reason_; }

 private:
  Reason reason_;
};

/// Filesystem or parse failure on external files.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace exonav
