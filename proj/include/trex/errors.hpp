#pragma once

#include <stdexcept>

namespace trex {

// Error taxonomy shared by the library and the CLI. Each class carries the
// process exit code the CLI maps it to: 1 usage, 2 configuration, 3 data
// format, 4 infeasible plan.

struct usage_error : std::runtime_error {
    using std::runtime_error::runtime_error;
    static constexpr int exit_code = 1;
};

struct config_error : std::runtime_error {
    using std::runtime_error::runtime_error;
    static constexpr int exit_code = 2;
};

struct format_error : std::runtime_error {
    using std::runtime_error::runtime_error;
    static constexpr int exit_code = 3;
};

struct infeasible_error : std::runtime_error {
    using std::runtime_error::runtime_error;
    static constexpr int exit_code = 4;
};

}  // namespace trex
