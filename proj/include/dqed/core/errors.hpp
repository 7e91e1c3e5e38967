#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace dqed {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define DQED_ERROR(Name)                    \
  class Name : public Error {               \
   public:                                  \
    using Error::Error;                     \
  }

DQED_ERROR(SingularityError);
DQED_ERROR(ModelValidityError);
DQED_ERROR(DimensionError);
DQED_ERROR(ResolutionError);
DQED_ERROR(ContractError);
DQED_ERROR(PositivityError);
DQED_ERROR(IllConditionedError);
DQED_ERROR(UnsupportedError);
DQED_ERROR(LayoutError);
DQED_ERROR(ParameterError);
DQED_ERROR(AccuracyError);
DQED_ERROR(DomainError);
DQED_ERROR(DependencyError);
DQED_ERROR(LossDeficiencyError);

#undef DQED_ERROR

// On-shell hit in a k-space Green tensor; carries the offending denominator.
class PoleError : public Error {
 public:
  PoleError(const std::string& what, std::complex<double> root)
      : Error(what), root_(root) {}
  std::complex<double> root() const { return root_; }

 private:
  std::complex<double> root_;
};

// A ♯-inverse failed: the (q, ω) point sits on a guided-wave resonance.
class GuidedWaveError : public Error {
 public:
  GuidedWaveError(const std::string& what, double q, std::complex<double> w)
      : Error(what), q_(q), w_(w) {}
  double q() const { return q_; }
  std::complex<double> omega() const { return w_; }

 private:
  double q_;
  std::complex<double> w_;
};

// Scenario schema violation; `field` is the dotted path of the culprit.
class ValidationError : public Error {
 public:
  ValidationError(const std::string& field, const std::string& what)
      : Error(field + ": " + what), field_(field) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

}  // namespace dqed
