#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "kdisc/designs.hpp"
#include "kdisc/errors.hpp"
#include "kdisc/estimators.hpp"
#include "kdisc/kernels.hpp"
#include "kdisc/sample.hpp"

namespace kdisc {

/// Normalizers below this value raise DegenerateNormalizerError.
inline constexpr double kSigmaFloor = 1e-12;

enum class CollectionProvenance { Explicit, AutoQuantile };

/// An ordered, non-empty list of kernels. For HSIC every entry carries a
/// k^Y kernel as well.
class KernelCollection {
public:
    explicit KernelCollection(std::vector<KernelChoice> entries,
                              CollectionProvenance provenance = CollectionProvenance::Explicit,
                              std::vector<std::string> warnings = {});
    /// One-stream collection from plain specs.
    static KernelCollection from_specs(const std::vector<KernelSpec>& specs,
                                       CollectionProvenance provenance = CollectionProvenance::Explicit);

    [[nodiscard]] const std::vector<KernelChoice>& entries() const noexcept { return entries_; }
    [[nodiscard]] std::size_t size() const noexcept { return entries_.size(); }
    [[nodiscard]] const KernelChoice& operator[](std::size_t k) const { return entries_.at(k); }
    [[nodiscard]] CollectionProvenance provenance() const noexcept { return provenance_; }
    /// Notes produced while building the collection, e.g. a collapsed grid.
    [[nodiscard]] const std::vector<std::string>& warnings() const noexcept { return warnings_; }
    [[nodiscard]] bool is_paired() const noexcept { return entries_.front().ky.has_value(); }

private:
    std::vector<KernelChoice> entries_;
    CollectionProvenance provenance_;
    std::vector<std::string> warnings_;
};

enum class PoolKind { Mean, Max, Fuse };

struct PoolMethod {
    PoolKind kind = PoolKind::Mean;
    /// Fuse temperature. Empty means the default max_k |D_k| / N.
    std::optional<double> nu;

    static PoolMethod mean() { return {PoolKind::Mean, std::nullopt}; }
    static PoolMethod max() { return {PoolKind::Max, std::nullopt}; }
    static PoolMethod fuse(std::optional<double> nu = std::nullopt) { return {PoolKind::Fuse, nu}; }
};

struct PooledResult {
    std::vector<StatisticResult> statistics;
    /// S_k.
    std::vector<double> raw;
    /// sigma_k, all ones when the run is unnormalized.
    std::vector<double> sigmas;
    /// S_k / sigma_k.
    std::vector<double> normalized;
    double value = 0.0;
    PoolMethod method;
    /// The nu actually used (Fuse only).
    std::optional<double> nu;
    /// Index of the largest normalized statistic (first one on ties).
    std::size_t argmax = 0;
    bool normalize = false;
};

/// sigma from the per-row design means of a second-order core:
/// sqrt( (4/|D1|) sum_i row_mean_i^2 - ((2/|D|) sum_D h)^2 ), with negative
/// radicands down to -1e-12 treated as zero. Throws
/// DegenerateNormalizerError (tagged with kernel_index) below kSigmaFloor.
template <CoreFunction C>
[[nodiscard]] double sigma(const C& core, const Design& design, std::size_t kernel_index = 0);

/// Mean, max, or (1/nu) log((1/K) sum exp(nu v_k)) via a max-shifted
/// logsumexp. Throws ConfigError on an empty list, non-finite values, or a
/// fuse method with a missing or non-positive nu.
[[nodiscard]] double pool(std::span<const double> values, const PoolMethod& method);

/// Type-7 quantile of an ascending-sorted, non-empty sample.
[[nodiscard]] double quantile_type7(std::span<const double> sorted, double p);

/// Ascending non-zero distances |Z_i - Z_j|_r over unordered pairs i < j.
/// Throws DataError when every point coincides.
[[nodiscard]] std::vector<double> distance_set(const SampleMatrix& data, double r);

/// Lower median of distance_set(data, r).
[[nodiscard]] double median_bandwidth(const SampleMatrix& data, double r);

/// `points` bandwidths spaced linearly between the 5% and 95% quantiles of a
/// sorted distance set. Collapses to a single value when the two coincide.
[[nodiscard]] std::vector<double> quantile_grid(std::span<const double> sorted_distances, std::size_t points = 10);

[[nodiscard]] std::vector<KernelFamily> default_collection_families();

/// One kernel per family and grid bandwidth. Distances use each family's
/// default order (L1 for Laplace, L2 otherwise).
[[nodiscard]] KernelCollection bandwidth_collection(const SampleMatrix& data,
                                                    const std::vector<KernelFamily>& families =
                                                        default_collection_families(),
                                                    std::size_t points = 10);

/// HSIC collection: for each family, every (k^X, k^Y) bandwidth pair from
/// the per-stream grids, X-bandwidth major.
[[nodiscard]] KernelCollection hsic_bandwidth_collection(const SampleMatrix& x, const SampleMatrix& y,
                                                         const std::vector<KernelFamily>& families =
                                                             default_collection_families(),
                                                         std::size_t points = 10);

/// S_k for every kernel (same design and seed), optional sigma_k from the
/// matching one-sample core, pooled with `method`.
[[nodiscard]] PooledResult adaptive_statistic(const KernelCollection& collection, const StatisticRequest& request,
                                              const StatisticInputs& inputs, const PoolMethod& method,
                                              bool normalize, const ExecutionOptions& options = {});

// ---------------------------------------------------------------------------

template <CoreFunction C>
double sigma(const C& core, const Design& design, std::size_t kernel_index) {
    const PairSequence pairs(design, core.size());
    const std::size_t n = core.size();
    std::vector<double> row_sum(n, 0.0);
    std::vector<std::size_t> row_count(n, 0);
    pairs.for_each([&](std::size_t i, std::size_t j) {
        row_sum[i] += core(i, j);
        ++row_count[i];
    });
    std::vector<double> squared_means;
    squared_means.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (row_count[i] == 0) continue;
        const double mean = row_sum[i] / static_cast<double>(row_count[i]);
        squared_means.push_back(mean * mean);
    }
    const double first = 4.0 * detail::pairwise_sum(squared_means) / static_cast<double>(squared_means.size());
    const double average = 2.0 * detail::pairwise_sum(row_sum) / static_cast<double>(pairs.size());
    double radicand = first - average * average;
    if (radicand < 0.0 && radicand >= -kClampTolerance) radicand = 0.0;
    const double s = radicand > 0.0 ? std::sqrt(radicand) : 0.0;
    if (!(s >= kSigmaFloor)) {
        throw DegenerateNormalizerError(
            "normalizer for kernel " + std::to_string(kernel_index) + " vanished (sigma below 1e-12)", kernel_index);
    }
    return s;
}

}  // namespace kdisc
