#pragma once

#include <cstddef>
#include <functional>
#include <span>

namespace kdisc {

/// Runtime knobs shared by the quadratic-time estimators.
struct ExecutionOptions {
    /// Worker threads; 0 means std::thread::hardware_concurrency().
    unsigned workers = 0;
    /// Complete statistics build the Gram matrix when the number of rows
    /// entering it is at most this; larger inputs are streamed row by row.
    std::size_t materialize_cap = 4096;
};

namespace detail {

/// Pairwise (tree) summation. The tree shape depends only on the length, so
/// the result is a pure function of the input sequence.
double pairwise_sum(std::span<const double> values);

/// Runs `body(chunk_index, begin, end)` for every chunk of [0, count) with a
/// fixed chunk size. Chunk boundaries never depend on the worker count, so
/// callers that write one partial per chunk and reduce them in chunk order
/// get bit-identical results for any number of workers.
void for_each_chunk(std::size_t count, std::size_t chunk_size, unsigned workers,
                    const std::function<void(std::size_t, std::size_t, std::size_t)>& body);

[[nodiscard]] inline std::size_t chunk_count(std::size_t count, std::size_t chunk_size) {
    return (count + chunk_size - 1) / chunk_size;
}

}  // namespace detail
}  // namespace kdisc
