#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace gar {

enum class ErrorCode {
    UnknownSource,
    UnknownValue,
    NonFiniteValue,
    UnknownContext,
    UnknownEvent,
    UnknownGA,
    EmptyGA,
    MissingLabel,
    InvalidThreshold,
    InsufficientData,
    EmptyStore,
    VersionMismatch,
    Parse,
    InvalidConfig,
    InvalidArgument,
    Io,
};

std::string_view to_string(ErrorCode code);

/// Single exception type for the library; `code()` distinguishes the failure.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message);

    [[nodiscard]] ErrorCode code() const noexcept { return code_; }
    /// Message without the code prefix.
    [[nodiscard]] const std::string& detail() const noexcept { return detail_; }

private:
    ErrorCode code_;
    std::string detail_;
};

}  // namespace gar
