#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace kdisc {

// Invalid parameters: bandwidths, design parameters, unsupported kernel
// families, incompatible statistic requests.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Problems with the data itself: shape mismatches, non-finite values,
// too few samples, unreadable input files.
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A normalizer fell below the floor, so S_k / sigma_k is undefined.
class DegenerateNormalizerError : public std::runtime_error {
public:
    DegenerateNormalizerError(const std::string& what, std::size_t kernel_index)
        : std::runtime_error(what), kernel_index_(kernel_index) {}

    [[nodiscard]] std::size_t kernel_index() const noexcept { return kernel_index_; }

private:
    std::size_t kernel_index_;
};

}  // namespace kdisc
