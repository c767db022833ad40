#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

namespace kdisc {

// Index-pair designs over {0, ..., n-1}^2. Indices are zero-based throughout
// the library; the CLI reports them the same way.
namespace design {

/// All n^2 ordered pairs, row-major.
struct V {};
/// All n(n-1) ordered pairs with i != j, row-major.
struct U {};
/// (0,1), (2,3), ...; an odd trailing sample is left out.
struct L {};
/// First r superdiagonals {(i, i+j) : j = 1..r}, diagonal by diagonal.
struct D {
    std::size_t subdiagonals;
};
/// Ordered i != j pairs inside consecutive blocks of the given sizes.
struct B {
    std::vector<std::size_t> block_sizes;
};
/// Cross block {(i, j) : i < split <= j}.
struct X {
    std::size_t split;
};
/// `size` pairs drawn uniformly from {(i, j) : i < j}, reproducible from `seed`.
struct R {
    std::size_t size;
    bool with_replacement = false;
    std::uint64_t seed = 0;
};

}  // namespace design

using Design = std::variant<design::V, design::U, design::L, design::D, design::B, design::X, design::R>;

struct IndexPair {
    std::size_t i;
    std::size_t j;
    friend bool operator==(const IndexPair&, const IndexPair&) = default;
    friend auto operator<=>(const IndexPair&, const IndexPair&) = default;
};

/// Throws ConfigError when the design parameters do not fit n samples.
void validate(const Design& design, std::size_t n);

/// Closed-form |D|.
[[nodiscard]] std::size_t design_cardinality(const Design& design, std::size_t n);

/// The full pair sequence in enumeration order.
[[nodiscard]] std::vector<IndexPair> enumerate_pairs(const Design& design, std::size_t n);

/// Short textual form: "v", "u", "l", "d:3", "b:5,5", "x:4", "r:27:with-replacement".
[[nodiscard]] std::string to_string(const Design& design);

/// True for designs whose pairs never repeat an index (everything but V).
[[nodiscard]] bool is_off_diagonal(const Design& design) noexcept;

/// b blocks of size ceil(n / b); the trailing smaller block is kept when it
/// holds at least two samples and dropped otherwise.
[[nodiscard]] design::B equal_blocks(std::size_t n, std::size_t blocks);

/// Streaming view of a design: random access to any position in the
/// enumeration order, then sequential walking. Used for chunked evaluation
/// without materializing quadratic pair lists.
class PairSequence {
public:
    PairSequence(const Design& design, std::size_t n);

    [[nodiscard]] std::size_t size() const noexcept { return size_; }
    [[nodiscard]] std::size_t sample_count() const noexcept { return n_; }

    /// Calls f(i, j) for positions [begin, end) in order.
    template <typename F>
    void for_range(std::size_t begin, std::size_t end, F&& f) const {
        if (begin >= end) return;
        Cursor c = seek(begin);
        for (std::size_t k = begin; k < end; ++k) {
            f(c.i, c.j);
            if (k + 1 < end) advance(c);
        }
    }

    template <typename F>
    void for_each(F&& f) const {
        for_range(0, size_, std::forward<F>(f));
    }

private:
    enum class Kind { V, U, L, D, B, X, R };

    struct Cursor {
        std::size_t i = 0;
        std::size_t j = 0;
        std::size_t aux = 0;   // D: current offset; B: block index; R: position
        std::size_t lo = 0;    // B: block start
        std::size_t hi = 0;    // B: block end
    };

    [[nodiscard]] Cursor seek(std::size_t k) const;
    void advance(Cursor& c) const;

    Kind kind_;
    std::size_t n_;
    std::size_t size_;
    std::size_t param_ = 0;               // D: r, X: split
    std::vector<std::size_t> blocks_;     // B
    std::vector<IndexPair> drawn_;        // R
};

/// Counter-based 64-bit generator (SplitMix64 finalizer applied to
/// seed + counter * golden-gamma). The stream depends only on the seed.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

    std::uint64_t next() noexcept;
    /// Uniform integer in [0, bound), bound >= 1, by multiply-and-reject.
    std::uint64_t uniform(std::uint64_t bound) noexcept;
    [[nodiscard]] std::uint64_t counter() const noexcept { return counter_; }

private:
    std::uint64_t seed_;
    std::uint64_t counter_ = 0;
};

/// Draws for an R design, in draw order.
[[nodiscard]] std::vector<IndexPair> draw_random_pairs(std::size_t n, const design::R& params);

}  // namespace kdisc
