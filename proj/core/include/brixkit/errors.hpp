#pragma once

#include <stdexcept>
#include <string>

namespace brixkit {

/// Every failure the library reports, one code per condition.
enum class ErrorCode {
    // data / validation
    MalformedRow,
    BrixOutOfRange,
    UnknownAtomicSplit,
    UnknownSplitName,
    EmptyInput,
    InvalidConfig,
    InvalidGrid,
    ImageTooSmall,
    EmptyMatrix,
    DimensionMismatch,
    TooFewSamples,
    TooFewRecords,
    LengthMismatch,
    DegenerateVariance,
    InvalidInput,
    // numerical
    SingularSystem,
    // i/o
    IoError,
    DecodeError,
    // command line
    UsageError,
};

/// Process exit categories used by the CLI: 1 usage, 2 data, 3 i/o, 4 numerical.
enum class ErrorCategory { Usage = 1, Data = 2, Io = 3, Numeric = 4 };

constexpr ErrorCategory category_of(ErrorCode code) {
    switch (code) {
        case ErrorCode::SingularSystem: return ErrorCategory::Numeric;
        case ErrorCode::IoError:
        case ErrorCode::DecodeError: return ErrorCategory::Io;
        case ErrorCode::UsageError: return ErrorCategory::Usage;
        default: return ErrorCategory::Data;
    }
}

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message),
          code_(code),
          message_(message) {}

    ErrorCode code() const noexcept { return code_; }
    /// Message without the code prefix, for re-wrapping with extra context.
    const std::string& message() const noexcept { return message_; }
    ErrorCategory category() const noexcept { return category_of(code_); }
    int exit_code() const noexcept { return static_cast<int>(category()); }

private:
    ErrorCode code_;
    std::string message_;
};

inline const char* to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::MalformedRow: return "MalformedRow";
        case ErrorCode::BrixOutOfRange: return "BrixOutOfRange";
        case ErrorCode::UnknownAtomicSplit: return "UnknownAtomicSplit";
        case ErrorCode::UnknownSplitName: return "UnknownSplitName";
        case ErrorCode::EmptyInput: return "EmptyInput";
        case ErrorCode::InvalidConfig: return "InvalidConfig";
        case ErrorCode::InvalidGrid: return "InvalidGrid";
        case ErrorCode::ImageTooSmall: return "ImageTooSmall";
        case ErrorCode::EmptyMatrix: return "EmptyMatrix";
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::TooFewSamples: return "TooFewSamples";
        case ErrorCode::TooFewRecords: return "TooFewRecords";
        case ErrorCode::LengthMismatch: return "LengthMismatch";
        case ErrorCode::DegenerateVariance: return "DegenerateVariance";
        case ErrorCode::InvalidInput: return "InvalidInput";
        case ErrorCode::SingularSystem: return "SingularSystem";
        case ErrorCode::IoError: return "IoError";
        case ErrorCode::DecodeError: return "DecodeError";
        case ErrorCode::UsageError: return "UsageError";
    }
    return "Error";
}

} // namespace brixkit
