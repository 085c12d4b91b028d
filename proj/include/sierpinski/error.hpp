#pragma once

#include <stdexcept>
#include <string>

namespace sierpinski {

// Raised for every domain-level failure: malformed addresses or words,
// level mismatches, requests beyond the oracle scale.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace sierpinski
