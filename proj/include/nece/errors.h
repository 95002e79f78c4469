#ifndef NECE_ERRORS_H_
#define NECE_ERRORS_H_

#include <stdexcept>
#include <string>

namespace nece {

enum class ErrorCode {
  kSyntax,
  kDanglingRef,
  kDuplicate,
  kSpan,
  kDupLemma,
  kBadRow,
  kEmptyCorpus,
  kEmptyChain,
  kBelowMinCount,
  kMismatchedItems,
  kLengthMismatch,
  kBadCsv,
  kIo,
  kBadConfig,
};

// Stable external name, e.g. "E_DANGLING_REF".
const char *ErrorCodeName(ErrorCode code);

// All recoverable failures in the library are reported as an Error carrying
// one of the codes above. what() is "<E_CODE>: <detail>".
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string &detail);

  ErrorCode code() const { return code_; }
  const std::string &detail() const { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

}  // namespace nece

#endif  // NECE_ERRORS_H_
