#pragma once

#include <optional>
#include <stdexcept>
#include <string>

namespace subjet {

/// Base class of every error raised by the library.
///
/// Errors raised inside an integration loop are annotated with the evolution
/// parameter at which they occurred; annotate() keeps the dynamic type so the
/// caller can `throw;` the same object.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& message);

  const char* what() const noexcept override { return what_.c_str(); }

  const std::string& message() const noexcept { return message_; }
  const std::optional<double>& tau() const noexcept { return tau_; }
  const std::string& context() const noexcept { return context_; }

  void annotate_tau(double tau);
  void annotate_context(const std::string& context);

 private:
  void rebuild();

  std::string message_;
  std::string context_;
  std::optional<double> tau_;
  std::string what_;
};

#define SUBJET_DECLARE_ERROR(Name)                                  \
  class Name : public Error {                                       \
   public:                                                          \
    explicit Name(const std::string& message) : Error(message) {}   \
  }

SUBJET_DECLARE_ERROR(InvalidArgument);
SUBJET_DECLARE_ERROR(DomainError);
SUBJET_DECLARE_ERROR(SingularTransition);
SUBJET_DECLARE_ERROR(NonRegularInChart);
SUBJET_DECLARE_ERROR(NonPositiveG);
SUBJET_DECLARE_ERROR(SingularMassMatrix);
SUBJET_DECLARE_ERROR(DriftExceeded);
SUBJET_DECLARE_ERROR(NonPositiveReducedG);
SUBJET_DECLARE_ERROR(SingularReducedHessian);
SUBJET_DECLARE_ERROR(DegenerateWorldsheet);

#undef SUBJET_DECLARE_ERROR

}  // namespace subjet
