#include "gar/error.hpp"

namespace gar {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::UnknownSource: return "UnknownSource";
        case ErrorCode::UnknownValue: return "UnknownValue";
        case ErrorCode::NonFiniteValue: return "NonFiniteValue";
        case ErrorCode::UnknownContext: return "UnknownContext";
        case ErrorCode::UnknownEvent: return "UnknownEvent";
        case ErrorCode::UnknownGA: return "UnknownGA";
        case ErrorCode::EmptyGA: return "EmptyGA";
        case ErrorCode::MissingLabel: return "MissingLabel";
        case ErrorCode::InvalidThreshold: return "InvalidThreshold";
        case ErrorCode::InsufficientData: return "InsufficientData";
        case ErrorCode::EmptyStore: return "EmptyStore";
        case ErrorCode::VersionMismatch: return "VersionMismatch";
        case ErrorCode::Parse: return "Parse";
        case ErrorCode::InvalidConfig: return "InvalidConfig";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::Io: return "Io";
    }
    return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code), detail_(message) {}

}  // namespace gar
