#pragma once

#include <stdexcept>
#include <string>

namespace dicke {

// Runtime failure with a stable machine-readable code ("moment-cone",
// "no-convergence", ...) next to the human message. Tests match on code().
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& what)
        : std::runtime_error(code + ": " + what), code_(std::move(code)) {}

    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

} // namespace dicke
