#pragma once

#include <stdexcept>
#include <string>

namespace bgue {

// Error taxonomy shared by the library and the CLI exit-code mapping.
struct invalid_parameter : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct unsupported_parameter : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct divergence_detected : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct numerical_failure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline void require(bool cond, const char* what) {
    if (!cond) throw invalid_parameter(what);
}

}  // namespace bgue
