#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace cntex {

enum class ErrorCode {
    UnreadableFile,
    UnsupportedFormat,
    DegenerateTarget,
    NonFiniteValue,
    EmptyImage,
    SingleNodeGraph,
    ConvergenceFailure,
    BorderPixel,
    ImageTooSmall,
    BandMismatch,
    DegenerateData,
    InvalidThreshold,
    DimensionMismatch,
    NegativeFeature,
    BadK,
    SingleClass,
    EmptyData,
    LengthMismatch,
    NonFiniteLocal,
    MalformedHeader,
    MalformedRecord,
    RecordDimMismatch,
    TooFewSamples,
    MisalignedLocalVectors,
    InvalidManifest,
    InvalidArgument,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure raised by the library carries one of the codes above so
/// callers (and tests) can branch on the kind without parsing messages.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace cntex
