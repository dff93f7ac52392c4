#include "cntex/error.hpp"

namespace cntex {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::UnreadableFile: return "UnreadableFile";
        case ErrorCode::UnsupportedFormat: return "UnsupportedFormat";
        case ErrorCode::DegenerateTarget: return "DegenerateTarget";
        case ErrorCode::NonFiniteValue: return "NonFiniteValue";
        case ErrorCode::EmptyImage: return "EmptyImage";
        case ErrorCode::SingleNodeGraph: return "SingleNodeGraph";
        case ErrorCode::ConvergenceFailure: return "ConvergenceFailure";
        case ErrorCode::BorderPixel: return "BorderPixel";
        case ErrorCode::ImageTooSmall: return "ImageTooSmall";
        case ErrorCode::BandMismatch: return "BandMismatch";
        case ErrorCode::DegenerateData: return "DegenerateData";
        case ErrorCode::InvalidThreshold: return "InvalidThreshold";
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::NegativeFeature: return "NegativeFeature";
        case ErrorCode::BadK: return "BadK";
        case ErrorCode::SingleClass: return "SingleClass";
        case ErrorCode::EmptyData: return "EmptyData";
        case ErrorCode::LengthMismatch: return "LengthMismatch";
        case ErrorCode::NonFiniteLocal: return "NonFiniteLocal";
        case ErrorCode::MalformedHeader: return "MalformedHeader";
        case ErrorCode::MalformedRecord: return "MalformedRecord";
        case ErrorCode::RecordDimMismatch: return "RecordDimMismatch";
        case ErrorCode::TooFewSamples: return "TooFewSamples";
        case ErrorCode::MisalignedLocalVectors: return "MisalignedLocalVectors";
        case ErrorCode::InvalidManifest: return "InvalidManifest";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
    }
    return "Unknown";
}

}  // namespace cntex
