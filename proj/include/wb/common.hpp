#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace wb {

// Error categories surfaced through the C API as distinct codes.
enum class ErrorKind { parse, invalid, limit, internal };

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& msg) : std::runtime_error(msg), kind_(kind) {}
    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(const std::string& msg) { throw Error(ErrorKind::invalid, msg); }
[[noreturn]] inline void fail_parse(const std::string& msg) { throw Error(ErrorKind::parse, msg); }
[[noreturn]] inline void fail_limit(const std::string& msg) { throw Error(ErrorKind::limit, msg); }

// Colour of a state: bitmask over an ordered proposition set (at most 8 letters).
using Colour = std::uint32_t;

inline int popcount64(std::uint64_t x) { return __builtin_popcountll(x); }

}  // namespace wb
