#pragma once

#include <stdexcept>
#include <string>

namespace ecstat {

// Exit-code contract for the CLI: 2 invariant violation, 3 resource ceiling,
// 4 bad input.

struct bad_input_error : std::runtime_error {
    explicit bad_input_error(const std::string& m) : std::runtime_error(m) {}
};

struct coprimality_error : bad_input_error {
    explicit coprimality_error(const std::string& m) : bad_input_error(m) {}
};

struct resource_limit_error : std::runtime_error {
    explicit resource_limit_error(const std::string& m) : std::runtime_error(m) {}
};

// A computed quantity contradicts an identity the library promises to uphold.
struct invariant_violation : std::runtime_error {
    explicit invariant_violation(const std::string& m) : std::runtime_error(m) {}
};

} // namespace ecstat
