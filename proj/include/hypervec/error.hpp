#pragma once

#include <stdexcept>
#include <string>

namespace hypervec {

// Error taxonomy shared by the library and the CLI exit codes:
//   2 usage, 3 data/format, 4 numeric/domain failure.

struct UsageError : std::runtime_error {
    explicit UsageError(const std::string& msg) : std::runtime_error(msg) {}
    static constexpr int exit_code = 2;
};

struct DataError : std::runtime_error {
    explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
    static constexpr int exit_code = 3;
};

struct NumericError : std::runtime_error {
    explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
    static constexpr int exit_code = 4;
};

// Unknown-token lookups are domain failures, not file problems: they map to
// a different exit code than unreadable or malformed inputs.
struct OovError : NumericError {
    explicit OovError(const std::string& token)
        : NumericError("token not in vocabulary: " + token) {}
};

}  // namespace hypervec
