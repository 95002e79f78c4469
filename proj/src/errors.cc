#include "nece/errors.h"

namespace nece {

const char *ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kSyntax: return "E_SYNTAX";
    case ErrorCode::kDanglingRef: return "E_DANGLING_REF";
    case ErrorCode::kDuplicate: return "E_DUPLICATE";
    case ErrorCode::kSpan: return "E_SPAN";
    case ErrorCode::kDupLemma: return "E_DUP_LEMMA";
    case ErrorCode::kBadRow: return "E_BAD_ROW";
    case ErrorCode::kEmptyCorpus: return "E_EMPTY_CORPUS";
    case ErrorCode::kEmptyChain: return "E_EMPTY_CHAIN";
    case ErrorCode::kBelowMinCount: return "E_BELOW_MIN_COUNT";
    case ErrorCode::kMismatchedItems: return "E_MISMATCHED_ITEMS";
    case ErrorCode::kLengthMismatch: return "E_LENGTH_MISMATCH";
    case ErrorCode::kBadCsv: return "E_BAD_CSV";
    case ErrorCode::kIo: return "E_IO";
    case ErrorCode::kBadConfig: return "E_BAD_CONFIG";
  }
  return "E_UNKNOWN";
}

Error::Error(ErrorCode code, const std::string &detail)
    : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + detail),
      code_(code),
      detail_(detail) {}

}  // namespace nece
