#pragma once

#include <stdexcept>
#include <string>

namespace wrji {

//! Machine-readable failure categories. The CLI prints the string form.
enum class ErrorCode
{
  invalid_parameter,
  unknown_family,
  parse_error,
  domain_error,
  survival_zero_at_t,
  divergent_integral,
  non_convergence,
  no_data_beyond_t,
  degenerate_sample,
  unreadable_file,
  not_monotone,
};

inline const char* to_string(ErrorCode code)
{
  switch (code) {
    case ErrorCode::invalid_parameter:
      return "invalid-parameter";
    case ErrorCode::unknown_family:
      return "unknown-family";
    case ErrorCode::parse_error:
      return "parse-error";
    case ErrorCode::domain_error:
      return "domain-error";
    case ErrorCode::survival_zero_at_t:
      return "survival-zero-at-t";
    case ErrorCode::divergent_integral:
      return "divergent-integral";
    case ErrorCode::non_convergence:
      return "non-convergence";
    case ErrorCode::no_data_beyond_t:
      return "no-data-beyond-t";
    case ErrorCode::degenerate_sample:
      return "degenerate-sample";
    case ErrorCode::unreadable_file:
      return "unreadable-file";
    case ErrorCode::not_monotone:
      return "not-monotone";
  }
  return "unknown";
}

class Error : public std::runtime_error
{
public:
  Error(ErrorCode code, const std::string& what)
    : std::runtime_error(what)
    , code_(code)
  {}

  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

//! Thrown when adaptive integration gives up; carries the best estimate.
class QuadratureError : public Error
{
public:
  QuadratureError(const std::string& what, double best, double err)
    : Error(ErrorCode::non_convergence, what)
    , best_estimate(best)
    , abs_error_estimate(err)
  {}

  double best_estimate;
  double abs_error_estimate;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what)
{
  throw Error(code, what);
}

inline void require(bool cond, ErrorCode code, const std::string& what)
{
  if (!cond)
    throw Error(code, what);
}

} // namespace wrji
