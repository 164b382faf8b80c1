#pragma once

#include <stdexcept>
#include <string>

namespace rft {

/// Malformed or inconsistent input data: CSV cells, model files, schema mismatches.
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid user configuration (bad flags, unknown names, out-of-range options).
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace rft
