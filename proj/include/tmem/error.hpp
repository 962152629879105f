#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace tmem {

enum class ErrorCode {
    invalid_argument,
    duplicate_unit,
    not_found,
    parse,
    io,
    validation,
    format,
    sizing,
};

std::string_view to_string(ErrorCode code);

/// Every failure raised by the engine carries a machine-readable code; the
/// service maps codes to HTTP statuses and the CLI to exit diagnostics.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

} // namespace tmem
