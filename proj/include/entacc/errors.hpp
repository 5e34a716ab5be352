#pragma once

#include <stdexcept>
#include <string>

namespace entacc {

enum class Errc {
    invalid_argument,
    parse_error,
    indeterminate_limit,
    tower_limit,
    domain_error,
    io_error,
    internal,
};

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
    Errc code() const { return code_; }

private:
    Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

inline const char* errc_name(Errc c) {
    switch (c) {
    case Errc::invalid_argument: return "invalid_argument";
    case Errc::parse_error: return "parse_error";
    case Errc::indeterminate_limit: return "indeterminate_limit";
    case Errc::tower_limit: return "tower_limit";
    case Errc::domain_error: return "domain_error";
    case Errc::io_error: return "io_error";
    case Errc::internal: return "internal";
    }
    return "unknown";
}

} // namespace entacc
