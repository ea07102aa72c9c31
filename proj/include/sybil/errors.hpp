#pragma once

#include <stdexcept>
#include <string>

namespace sybil {

// Error categories; numeric values match the CLI exit-code contract
// (0 success, 2 usage, 3 data, 4 numeric).
enum class ErrorKind { Usage = 2, Data = 3, Numeric = 4 };

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, std::string msg)
        : std::runtime_error(std::move(msg)), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void throw_usage(const std::string& msg) {
    throw Error(ErrorKind::Usage, msg);
}
[[noreturn]] inline void throw_data(const std::string& msg) {
    throw Error(ErrorKind::Data, msg);
}
[[noreturn]] inline void throw_numeric(const std::string& msg) {
    throw Error(ErrorKind::Numeric, msg);
}

}  // namespace sybil
