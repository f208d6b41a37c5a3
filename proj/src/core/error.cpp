#include "core/error.hpp"

namespace rdskit {

const char* to_string(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::DegenerateEmbedding: return "DegenerateEmbedding";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::InvalidLikelihood: return "InvalidLikelihood";
    case ErrorCode::EmptyGeneration: return "EmptyGeneration";
    case ErrorCode::InvalidVector: return "InvalidVector";
    case ErrorCode::DuplicateId: return "DuplicateId";
    case ErrorCode::MalformedRecord: return "MalformedRecord";
    case ErrorCode::SchemaVersionMismatch: return "SchemaVersionMismatch";
    case ErrorCode::Io: return "Io";
    case ErrorCode::Config: return "Config";
    case ErrorCode::EncoderInconsistency: return "EncoderInconsistency";
    case ErrorCode::PartialBatch: return "PartialBatch";
    case ErrorCode::Auth: return "Auth";
    case ErrorCode::Network: return "Network";
    case ErrorCode::OutputExists: return "OutputExists";
    }
    return "Unknown";
}

} // namespace rdskit
