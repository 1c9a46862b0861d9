#ifndef GRAPHMATCH_ERROR_H_
#define GRAPHMATCH_ERROR_H_

#include <stdexcept>
#include <string>

namespace graphmatch {

// Malformed or inconsistent input data, I/O failures, and verifier protocol
// violations.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A caller violated an operation's precondition (bad argument or config).
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace graphmatch

#endif  // GRAPHMATCH_ERROR_H_
