#pragma once

#include <stdexcept>
#include <string>

namespace wbell {

// Lengths of a state, setting, or outcome disagree.
struct DimensionMismatchError : std::invalid_argument {
    explicit DimensionMismatchError(const std::string& what)
        : std::invalid_argument(what) {}
};

// Conditioning event has probability zero; the conditional is undefined.
struct UndefinedConditionalError : std::domain_error {
    explicit UndefinedConditionalError(const std::string& what)
        : std::domain_error(what) {}
};

// Requested exhaustive search exceeds the configured ceiling.
struct EnumerationInfeasibleError : std::runtime_error {
    explicit EnumerationInfeasibleError(const std::string& what)
        : std::runtime_error(what) {}
};

}  // namespace wbell
