#pragma once

#include <stdexcept>
#include <string>

namespace kwg {

// Exit-code classes used by the command line front end.
enum class ErrorKind { InvalidArgument = 2, Io = 3, Numerical = 4, Convergence = 5 };

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline Error invalid_argument(const std::string& what) { return {ErrorKind::InvalidArgument, what}; }
inline Error io_error(const std::string& what) { return {ErrorKind::Io, what}; }
inline Error numerical_fault(const std::string& what) { return {ErrorKind::Numerical, what}; }
inline Error convergence_failure(const std::string& what) { return {ErrorKind::Convergence, what}; }

}  // namespace kwg
