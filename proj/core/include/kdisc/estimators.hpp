#pragma once

#include <concepts>
#include <cstddef>
#include <optional>
#include <vector>

#include "kdisc/cores.hpp"
#include "kdisc/designs.hpp"
#include "kdisc/kernels.hpp"
#include "kdisc/parallel.hpp"
#include "kdisc/sample.hpp"

namespace kdisc {

/// V-family outputs in [-kClampTolerance, 0) are reported as 0.
inline constexpr double kClampTolerance = 1e-12;

struct StatisticResult {
    double value = 0.0;
    /// Number of index pairs (or kernel-matrix entries) the statistic averages.
    std::size_t cardinality = 0;
    /// Sample count N the statistic is built from (m + n for two-sample MMD).
    std::size_t sample_count = 0;
    /// Core or kernel evaluations actually performed.
    std::size_t evaluations = 0;
    bool biased = false;
    bool clamped = false;
};

// ---------------------------------------------------------------------------
// Complete statistics (quadratic-time closed forms). The kernel parameters
// accept KernelSpec or MeanKernel.

/// w^T K^{ZZ} w with w = (1/m, ..., -1/n, ...). Nonnegative after clamping.
template <KernelFunction K>
[[nodiscard]] double mmd_v(const K& kernel, const SampleMatrix& x, const SampleMatrix& y,
                           const ExecutionOptions& options = {});

/// Unbiased two-sample MMD^2 with diagonal-deleted within-sample sums. m, n >= 2.
template <KernelFunction K>
[[nodiscard]] double mmd_u(const K& kernel, const SampleMatrix& x, const SampleMatrix& y,
                           const ExecutionOptions& options = {});

/// (1/(n(n-1))) sum_{i != j} h^MMD(X_i, X_j; Y_i, Y_j). Depends on how the
/// rows of X and Y are paired.
template <KernelFunction K>
[[nodiscard]] double mmd_u_paired(const K& kernel, const SampleMatrix& x, const SampleMatrix& y,
                                  const ExecutionOptions& options = {});

/// (1/N^2) tr(K^X H K^Y H). Nonnegative after clamping.
template <KernelFunction KX, KernelFunction KY>
[[nodiscard]] double hsic_v(const KX& kx, const KY& ky, const PairedSample& z, const ExecutionOptions& options = {});

/// Quadratic-time closed form of the fourth-order HSIC U-statistic. N >= 4.
template <KernelFunction KX, KernelFunction KY>
[[nodiscard]] double hsic_u(const KX& kx, const KY& ky, const PairedSample& z, const ExecutionOptions& options = {});

/// (1/N^2) sum_{i,j} h^HSIC(Z_i, Z_j, Z_{i+N/2}, Z_{j+N/2}), indices mod N. N even.
template <KernelFunction KX, KernelFunction KY>
[[nodiscard]] double hsic_v_second_order(const KX& kx, const KY& ky, const PairedSample& z,
                                         const ExecutionOptions& options = {});

/// (1/n^2) sum_{i,j} h_P(X_i, X_j). Nonnegative after clamping.
[[nodiscard]] double ksd_v(const KernelSpec& kernel, const ScoreModel& score, const SampleMatrix& x,
                           const ExecutionOptions& options = {});
/// (1/(n(n-1))) sum_{i != j} h_P(X_i, X_j). n >= 2.
[[nodiscard]] double ksd_u(const KernelSpec& kernel, const ScoreModel& score, const SampleMatrix& x,
                           const ExecutionOptions& options = {});

// ---------------------------------------------------------------------------
// One-sample second-order cores for design-averaged statistics.

template <typename C>
concept CoreFunction = requires(const C& c, std::size_t i) {
    { c.size() } -> std::convertible_to<std::size_t>;
    { c(i, i) } -> std::convertible_to<double>;
};

/// h(i, j) = h^MMD(X_i, X_j; Y_i, Y_j) for equal-size samples. Holds
/// references; the kernel and samples must outlive the core.
template <KernelFunction K>
class PairedMmdCore {
public:
    PairedMmdCore(const K& kernel, const SampleMatrix& x, const SampleMatrix& y)
        : kernel_(&kernel), x_(&x), y_(&y) {
        detail::require_same_dimension(x.rows(), y.rows(), "paired MMD core (row counts)");
        detail::require_same_dimension(x.cols(), y.cols(), "paired MMD core");
    }
    [[nodiscard]] std::size_t size() const noexcept { return x_->rows(); }
    [[nodiscard]] double operator()(std::size_t i, std::size_t j) const noexcept {
        return mmd_core_unchecked(*kernel_, x_->row(i), x_->row(j), y_->row(i), y_->row(j));
    }

private:
    const K* kernel_;
    const SampleMatrix* x_;
    const SampleMatrix* y_;
};

/// h(i, j) = h^HSIC(Z_i, Z_j, Z_{i+N/2}, Z_{j+N/2}) with indices mod N.
template <KernelFunction KX, KernelFunction KY>
class ShiftedHsicCore {
public:
    ShiftedHsicCore(const KX& kx, const KY& ky, const PairedSample& z);

    [[nodiscard]] std::size_t size() const noexcept { return z_->size(); }
    [[nodiscard]] std::size_t shift(std::size_t i) const noexcept { return (i + half_) % z_->size(); }
    [[nodiscard]] double operator()(std::size_t i, std::size_t j) const noexcept {
        return hsic_core_unchecked(*kx_, *ky_, pair_at(*z_, i), pair_at(*z_, j), pair_at(*z_, shift(i)),
                                   pair_at(*z_, shift(j)));
    }

private:
    const KX* kx_;
    const KY* ky_;
    const PairedSample* z_;
    std::size_t half_;
};

/// h(i, j) = h_P(X_i, X_j) with the scores evaluated once up front.
class SteinCore {
public:
    SteinCore(const KernelSpec& kernel, const ScoreModel& score, const SampleMatrix& x);

    [[nodiscard]] std::size_t size() const noexcept { return x_->rows(); }
    [[nodiscard]] double operator()(std::size_t i, std::size_t j) const noexcept {
        const std::size_t d = x_->cols();
        return detail::stein_kernel_from_scores(kernel_, x_->row(i), x_->row(j), {scores_.data() + i * d, d},
                                                {scores_.data() + j * d, d});
    }

private:
    KernelSpec kernel_;
    const SampleMatrix* x_;
    std::vector<double> scores_;
};

namespace detail {
inline constexpr std::size_t kPairChunk = 4096;
}

/// (1/|D|) sum_{(i,j) in D} h(i, j). Pairs are summed in enumeration order
/// inside fixed-size chunks and the chunk totals are combined by pairwise
/// summation, so the value does not depend on the worker count.
template <CoreFunction C>
[[nodiscard]] StatisticResult generic_statistic(const C& core, const Design& design,
                                                const ExecutionOptions& options = {}) {
    const PairSequence pairs(design, core.size());
    const std::size_t total = pairs.size();
    std::vector<double> partial(detail::chunk_count(total, detail::kPairChunk));
    detail::for_each_chunk(total, detail::kPairChunk, options.workers,
                           [&](std::size_t c, std::size_t begin, std::size_t end) {
                               double s = 0.0;
                               pairs.for_range(begin, end, [&](std::size_t i, std::size_t j) { s += core(i, j); });
                               partial[c] = s;
                           });
    StatisticResult r;
    r.value = detail::pairwise_sum(partial) / static_cast<double>(total);
    r.cardinality = total;
    r.sample_count = core.size();
    r.evaluations = total;
    r.biased = !is_off_diagonal(design);
    return r;
}

// ---------------------------------------------------------------------------
// Request-level dispatch used by pooling and the CLI.

enum class Discrepancy { Mmd, Hsic, Ksd };

enum class StatisticKind {
    V,             // complete V-statistic
    U,             // complete U-statistic
    PairedU,       // MMD only, m = n: one-sample second-order U over paired rows
    SecondOrderV,  // HSIC only, N even: shifted second-order V-statistic
    Incomplete,    // any design over the one-sample second-order core
};

struct StatisticRequest {
    Discrepancy discrepancy = Discrepancy::Mmd;
    StatisticKind kind = StatisticKind::V;
    /// Required for Incomplete, ignored otherwise.
    std::optional<Design> design;
    /// Required for KSD.
    const ScoreModel* score = nullptr;
};

/// The kernel for MMD/KSD, or the pair (k^X, k^Y) for HSIC.
struct KernelChoice {
    KernelSpec kx;
    std::optional<KernelSpec> ky;
};

/// Data for a request: (X, Y) two-sample for MMD, paired blocks for HSIC,
/// X alone for KSD.
struct StatisticInputs {
    const SampleMatrix* x = nullptr;
    const SampleMatrix* y = nullptr;
};

/// Throws ConfigError when kind, discrepancy and data do not fit together.
void validate(const StatisticRequest& request, const StatisticInputs& inputs);

[[nodiscard]] StatisticResult compute_statistic(const StatisticRequest& request, const KernelChoice& kernels,
                                                const StatisticInputs& inputs, const ExecutionOptions& options = {});

/// The design under which the request is a one-sample second-order
/// statistic, if it has one: PairedU -> U, SecondOrderV -> V, KSD V/U ->
/// V/U, MMD V with m = n -> V, Incomplete -> its design.
[[nodiscard]] std::optional<Design> one_sample_design(const StatisticRequest& request,
                                                      const StatisticInputs& inputs);

/// Calls f(core, design) with the one-sample core matching the request.
/// Throws ConfigError when one_sample_design() is empty.
template <typename F>
decltype(auto) with_one_sample_core(const StatisticRequest& request, const KernelChoice& kernels,
                                    const StatisticInputs& inputs, F&& f);

}  // namespace kdisc

#include "kdisc/estimators_inl.hpp"
