#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace air {

enum class ErrorCode {
  invalid_argument,
  behind_device,
  degenerate_configuration,
  underdetermined,
  convergence,
  decomposition,
  limit,
  empty_observation,
  eye_on_screen_plane,
  empty_intersection,
  stage,
  schema,
  io,
};

std::string_view to_string(ErrorCode code);

/// Exception type for every failure raised by the library. The code is the
/// stable, machine-readable part; the message is for humans.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Raised when an iterative solver hits its iteration cap. Carries the best
/// parameter vector seen so callers can inspect or reuse it.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& message, std::vector<double> best)
      : Error(ErrorCode::convergence, message), best_(std::move(best)) {}

  const std::vector<double>& best_iterate() const noexcept { return best_; }

 private:
  std::vector<double> best_;
};

}  // namespace air
