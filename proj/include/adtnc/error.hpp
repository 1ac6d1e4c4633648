#pragma once

#include <stdexcept>
#include <string>

namespace adtnc {

/* Error taxonomy shared by the library and the CLI:
 *   UsageError      caller mistake (bad file, bad flag, illegal key) -> exit 1
 *   InfeasibleError well-formed input whose demand provably cannot be met -> exit 2
 *   ArithmeticError algebra faults (division by zero, inverting zero)
 *   SingularError   matrix inversion failure; carries the rank that was achieved
 */
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct UsageError : Error {
  using Error::Error;
};

struct ParseError : UsageError {
  using UsageError::UsageError;
};

struct ArithmeticError : Error {
  using Error::Error;
};

struct SingularError : ArithmeticError {
  int achieved_rank;
  SingularError(const std::string& msg, int rank)
      : ArithmeticError(msg), achieved_rank(rank) {}
};

struct InfeasibleError : Error {
  using Error::Error;
};

}  // namespace adtnc
