#include "kdisc/designs.hpp"

#include <cmath>
#include <string>
#include <unordered_map>

#include "kdisc/errors.hpp"

namespace kdisc {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::size_t upper_triangle_size(std::size_t n) { return n * (n - 1) / 2; }

// Offset of row i within the row-major strict upper triangle.
std::size_t row_offset(std::size_t n, std::size_t i) { return i * (2 * n - i - 1) / 2; }

IndexPair upper_triangle_pair(std::size_t n, std::uint64_t t) {
    const double nn = static_cast<double>(2 * n - 1);
    double guess = (nn - std::sqrt(nn * nn - 8.0 * static_cast<double>(t))) / 2.0;
    auto i = static_cast<std::size_t>(std::max(0.0, std::floor(guess)));
    if (i > n - 2) i = n - 2;
    while (i + 1 <= n - 2 && row_offset(n, i + 1) <= t) ++i;
    while (row_offset(n, i) > t) --i;
    return {i, i + 1 + static_cast<std::size_t>(t - row_offset(n, i))};
}

std::string describe_blocks(const std::vector<std::size_t>& sizes) {
    std::string s;
    for (std::size_t k = 0; k < sizes.size(); ++k) {
        if (k) s += ',';
        s += std::to_string(sizes[k]);
    }
    return s;
}

}  // namespace

void validate(const Design& d, std::size_t n) {
    if (n < 2) throw ConfigError("designs need at least 2 samples, got " + std::to_string(n));
    std::visit(overloaded{
                   [](const design::V&) {},
                   [](const design::U&) {},
                   [](const design::L&) {},
                   [n](const design::D& p) {
                       if (p.subdiagonals < 1 || p.subdiagonals > n - 1) {
                           throw ConfigError("D design needs 1 <= r <= n-1 (n = " + std::to_string(n) +
                                             "), got r = " + std::to_string(p.subdiagonals));
                       }
                   },
                   [n](const design::B& p) {
                       if (p.block_sizes.empty()) throw ConfigError("B design needs at least one block");
                       std::size_t total = 0;
                       for (std::size_t s : p.block_sizes) {
                           if (s < 2) throw ConfigError("B design blocks need at least 2 samples each");
                           total += s;
                       }
                       if (total > n) {
                           throw ConfigError("B design blocks cover " + std::to_string(total) + " samples, only " +
                                             std::to_string(n) + " available");
                       }
                   },
                   [n](const design::X& p) {
                       if (p.split < 1 || p.split > n - 1) {
                           throw ConfigError("X design needs 1 <= n1 <= n-1 (n = " + std::to_string(n) +
                                             "), got n1 = " + std::to_string(p.split));
                       }
                   },
                   [n](const design::R& p) {
                       if (p.size < 1) throw ConfigError("R design needs at least one pair");
                       if (!p.with_replacement && p.size > upper_triangle_size(n)) {
                           throw ConfigError("R design without replacement can draw at most " +
                                             std::to_string(upper_triangle_size(n)) + " pairs for n = " +
                                             std::to_string(n));
                       }
                   },
               },
               d);
}

std::size_t design_cardinality(const Design& d, std::size_t n) {
    validate(d, n);
    return std::visit(overloaded{
                          [n](const design::V&) { return n * n; },
                          [n](const design::U&) { return n * (n - 1); },
                          [n](const design::L&) { return n / 2; },
                          [n](const design::D& p) {
                              const std::size_t r = p.subdiagonals;
                              return r * n - r * (r + 1) / 2;
                          },
                          [](const design::B& p) {
                              std::size_t total = 0;
                              for (std::size_t s : p.block_sizes) total += s * (s - 1);
                              return total;
                          },
                          [n](const design::X& p) { return p.split * (n - p.split); },
                          [](const design::R& p) { return p.size; },
                      },
                      d);
}

std::vector<IndexPair> enumerate_pairs(const Design& d, std::size_t n) {
    PairSequence seq(d, n);
    std::vector<IndexPair> out;
    out.reserve(seq.size());
    seq.for_each([&](std::size_t i, std::size_t j) { out.push_back({i, j}); });
    return out;
}

std::string to_string(const Design& d) {
    return std::visit(overloaded{
                          [](const design::V&) -> std::string { return "v"; },
                          [](const design::U&) -> std::string { return "u"; },
                          [](const design::L&) -> std::string { return "l"; },
                          [](const design::D& p) { return "d:" + std::to_string(p.subdiagonals); },
                          [](const design::B& p) { return "b:" + describe_blocks(p.block_sizes); },
                          [](const design::X& p) { return "x:" + std::to_string(p.split); },
                          [](const design::R& p) {
                              return "r:" + std::to_string(p.size) +
                                     (p.with_replacement ? ":with-replacement" : "");
                          },
                      },
                      d);
}

bool is_off_diagonal(const Design& d) noexcept { return !std::holds_alternative<design::V>(d); }

design::B equal_blocks(std::size_t n, std::size_t blocks) {
    if (blocks < 1) throw ConfigError("need at least one block");
    const std::size_t size = (n + blocks - 1) / blocks;
    if (size < 2) {
        throw ConfigError(std::to_string(blocks) + " blocks over " + std::to_string(n) +
                          " samples leave fewer than 2 samples per block");
    }
    design::B out;
    std::size_t remaining = n;
    while (remaining > 0) {
        const std::size_t s = std::min(size, remaining);
        if (s >= 2) out.block_sizes.push_back(s);
        remaining -= s;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Random pairs

std::uint64_t CounterRng::next() noexcept {
    std::uint64_t z = seed_ + (++counter_) * 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

namespace {
__extension__ using Wide = unsigned __int128;
}

std::uint64_t CounterRng::uniform(std::uint64_t bound) noexcept {
    // Lemire's nearly-divisionless bounded draw.
    Wide m = static_cast<Wide>(next()) * bound;
    auto low = static_cast<std::uint64_t>(m);
    if (low < bound) {
        const std::uint64_t threshold = (0 - bound) % bound;
        while (low < threshold) {
            m = static_cast<Wide>(next()) * bound;
            low = static_cast<std::uint64_t>(m);
        }
    }
    return static_cast<std::uint64_t>(m >> 64);
}

std::vector<IndexPair> draw_random_pairs(std::size_t n, const design::R& params) {
    validate(params, n);
    const std::uint64_t total = upper_triangle_size(n);
    CounterRng rng(params.seed);
    std::vector<IndexPair> out;
    out.reserve(params.size);
    if (params.with_replacement) {
        for (std::size_t k = 0; k < params.size; ++k) out.push_back(upper_triangle_pair(n, rng.uniform(total)));
        return out;
    }
    // Partial Fisher-Yates over the virtual array 0..total-1; only touched
    // slots are stored.
    std::unordered_map<std::uint64_t, std::uint64_t> swapped;
    auto slot = [&](std::uint64_t k) {
        auto it = swapped.find(k);
        return it == swapped.end() ? k : it->second;
    };
    for (std::uint64_t k = 0; k < params.size; ++k) {
        const std::uint64_t r = k + rng.uniform(total - k);
        const std::uint64_t picked = slot(r);
        swapped[r] = slot(k);
        out.push_back(upper_triangle_pair(n, picked));
    }
    return out;
}

// ---------------------------------------------------------------------------
// PairSequence

PairSequence::PairSequence(const Design& d, std::size_t n) : n_(n) {
    size_ = design_cardinality(d, n);
    std::visit(overloaded{
                   [this](const design::V&) { kind_ = Kind::V; },
                   [this](const design::U&) { kind_ = Kind::U; },
                   [this](const design::L&) { kind_ = Kind::L; },
                   [this](const design::D& p) {
                       kind_ = Kind::D;
                       param_ = p.subdiagonals;
                   },
                   [this](const design::B& p) {
                       kind_ = Kind::B;
                       blocks_ = p.block_sizes;
                   },
                   [this](const design::X& p) {
                       kind_ = Kind::X;
                       param_ = p.split;
                   },
                   [this, n](const design::R& p) {
                       kind_ = Kind::R;
                       drawn_ = draw_random_pairs(n, p);
                   },
               },
               d);
}

PairSequence::Cursor PairSequence::seek(std::size_t k) const {
    Cursor c;
    switch (kind_) {
        case Kind::V:
            c.i = k / n_;
            c.j = k % n_;
            break;
        case Kind::U: {
            c.i = k / (n_ - 1);
            const std::size_t col = k % (n_ - 1);
            c.j = col + (col >= c.i ? 1 : 0);
            break;
        }
        case Kind::L:
            c.i = 2 * k;
            c.j = 2 * k + 1;
            break;
        case Kind::D: {
            std::size_t offset = 1;
            while (k >= n_ - offset) {
                k -= n_ - offset;
                ++offset;
            }
            c.aux = offset;
            c.i = k;
            c.j = k + offset;
            break;
        }
        case Kind::B: {
            std::size_t lo = 0;
            std::size_t b = 0;
            while (k >= blocks_[b] * (blocks_[b] - 1)) {
                k -= blocks_[b] * (blocks_[b] - 1);
                lo += blocks_[b];
                ++b;
            }
            const std::size_t s = blocks_[b];
            c.aux = b;
            c.lo = lo;
            c.hi = lo + s;
            const std::size_t row = k / (s - 1);
            const std::size_t col = k % (s - 1);
            c.i = lo + row;
            c.j = lo + col + (col >= row ? 1 : 0);
            break;
        }
        case Kind::X: {
            const std::size_t width = n_ - param_;
            c.i = k / width;
            c.j = param_ + k % width;
            break;
        }
        case Kind::R:
            c.aux = k;
            c.i = drawn_[k].i;
            c.j = drawn_[k].j;
            break;
    }
    return c;
}

void PairSequence::advance(Cursor& c) const {
    switch (kind_) {
        case Kind::V:
            if (++c.j == n_) {
                c.j = 0;
                ++c.i;
            }
            break;
        case Kind::U:
            ++c.j;
            if (c.j == c.i) ++c.j;
            if (c.j >= n_) {
                ++c.i;
                c.j = c.i == 0 ? 1 : 0;
            }
            break;
        case Kind::L:
            c.i += 2;
            c.j = c.i + 1;
            break;
        case Kind::D:
            ++c.i;
            c.j = c.i + c.aux;
            if (c.j >= n_) {
                ++c.aux;
                c.i = 0;
                c.j = c.aux;
            }
            break;
        case Kind::B:
            ++c.j;
            if (c.j == c.i) ++c.j;
            if (c.j >= c.hi) {
                ++c.i;
                if (c.i >= c.hi) {
                    ++c.aux;
                    c.lo = c.hi;
                    c.hi = c.lo + (c.aux < blocks_.size() ? blocks_[c.aux] : 0);
                    c.i = c.lo;
                }
                c.j = c.lo == c.i ? c.lo + 1 : c.lo;
            }
            break;
        case Kind::X:
            if (++c.j == n_) {
                c.j = param_;
                ++c.i;
            }
            break;
        case Kind::R:
            ++c.aux;
            if (c.aux < drawn_.size()) {
                c.i = drawn_[c.aux].i;
                c.j = drawn_[c.aux].j;
            }
            break;
    }
}

}  // namespace kdisc
