#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace edgeworth {

enum class ErrorKind {
  Domain,
  UnsupportedOrder,
  InsufficientSample,
  ZeroVariance,
  InvalidMargin,
  NonConvergence,
  UnsupportedFamily,
  UndefinedRelativeError,
  Parse,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Every failure raised by the library. The kind lets callers (the CLI in
/// particular) map failures to exit codes without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Raised by adaptive quadrature when the subdivision depth limit is hit.
class NonConvergenceError : public Error {
 public:
  NonConvergenceError(const std::string& what, double best_estimate,
                      double error_estimate)
      : Error(ErrorKind::NonConvergence, what),
        best_estimate_(best_estimate),
        error_estimate_(error_estimate) {}

  double best_estimate() const noexcept { return best_estimate_; }
  double error_estimate() const noexcept { return error_estimate_; }

 private:
  double best_estimate_;
  double error_estimate_;
};

}  // namespace edgeworth
