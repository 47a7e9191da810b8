#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace sltm {

// Rejected input: bad config values, dimension mismatches, malformed tables.
// The CLI maps this to exit code 2.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// Failure while producing or moving artifacts. Mapped to exit code 1.
class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

// Optimizer could not reach the requested threshold. Carries the best prefix
// found so callers can fall back to a best-effort sequence.
class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, std::complex<double> mean,
                     std::vector<std::uint32_t> best)
        : std::runtime_error(what), achieved_mean(mean), best_indices(std::move(best)) {}

    std::complex<double> achieved_mean;
    std::vector<std::uint32_t> best_indices;
};

} // namespace sltm
