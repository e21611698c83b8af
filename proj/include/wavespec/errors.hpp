#pragma once

#include <stdexcept>
#include <string>

namespace wavespec {

/// Malformed or unreadable input: files, shapes, dataset contents.
struct DataError : std::runtime_error {
    explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

/// An estimator could not produce a valid estimate from otherwise valid
/// input (nonnegative dual slope, all-zero energy level, degenerate pool).
struct EstimationError : std::runtime_error {
    explicit EstimationError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace wavespec
