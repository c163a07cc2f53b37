#include "subjet/errors.hpp"

#include <sstream>

namespace subjet {

Error::Error(const std::string& message)
    : std::runtime_error(message), message_(message), what_(message) {}

void Error::annotate_tau(double tau) {
  if (tau_) return;
  tau_ = tau;
  rebuild();
}

void Error::annotate_context(const std::string& context) {
  context_ = context_.empty() ? context : context + ": " + context_;
  rebuild();
}

void Error::rebuild() {
  std::ostringstream out;
  if (!context_.empty()) out << context_ << ": ";
  out << message_;
  if (tau_) {
    out.precision(17);
    out << " (at tau=" << *tau_ << ")";
  }
  what_ = out.str();
}

}  // namespace subjet
