#pragma once

#include <stdexcept>
#include <string>

namespace elf {

// Failure classes map one-to-one onto the CLI exit codes.
enum class ErrorKind { Domain, Numeric, Usage, Io };

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void domain_error(const std::string& msg) { throw Error(ErrorKind::Domain, msg); }
[[noreturn]] inline void numeric_error(const std::string& msg) { throw Error(ErrorKind::Numeric, msg); }

}  // namespace elf
