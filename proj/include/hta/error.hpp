#pragma once

#include <stdexcept>
#include <string>

namespace hta {

// Error categories map onto CLI exit codes: config/parse -> 2,
// infeasible/budget -> 3, io -> 4.
enum class ErrorKind {
  config,
  parse,
  io,
  singular_ventilation,
  singular_temperature,
  access_violation,
  infeasible_schedule,
  budget_exceeded,
  deadlock,
  degenerate_cluster,
  undefined_metric,
  invalid,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string message)
      : std::runtime_error(std::move(message)), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

  int exit_code() const {
    switch (kind_) {
      case ErrorKind::config:
      case ErrorKind::parse:
        return 2;
      case ErrorKind::infeasible_schedule:
      case ErrorKind::budget_exceeded:
      case ErrorKind::deadlock:
        return 3;
      case ErrorKind::io:
        return 4;
      default:
        return 1;
    }
  }

 private:
  ErrorKind kind_;
};

}  // namespace hta
