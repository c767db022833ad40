#include "kdisc/pooling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace kdisc {

KernelCollection::KernelCollection(std::vector<KernelChoice> entries, CollectionProvenance provenance,
                                   std::vector<std::string> warnings)
    : entries_(std::move(entries)), provenance_(provenance), warnings_(std::move(warnings)) {
    if (entries_.empty()) throw ConfigError("kernel collection is empty");
    const bool paired = entries_.front().ky.has_value();
    for (const auto& e : entries_) {
        if (e.ky.has_value() != paired) {
            throw ConfigError("kernel collection mixes single kernels and (k^X, k^Y) pairs");
        }
    }
}

KernelCollection KernelCollection::from_specs(const std::vector<KernelSpec>& specs, CollectionProvenance provenance) {
    std::vector<KernelChoice> entries;
    entries.reserve(specs.size());
    for (const auto& s : specs) entries.push_back({s, std::nullopt});
    return KernelCollection(std::move(entries), provenance);
}

double pool(std::span<const double> values, const PoolMethod& method) {
    if (values.empty()) throw ConfigError("cannot pool an empty list of statistics");
    for (double v : values) {
        if (!std::isfinite(v)) throw ConfigError("cannot pool a non-finite statistic");
    }
    const double top = *std::max_element(values.begin(), values.end());
    switch (method.kind) {
        case PoolKind::Mean: return detail::pairwise_sum(values) / static_cast<double>(values.size());
        case PoolKind::Max: return top;
        case PoolKind::Fuse: break;
    }
    if (!method.nu || !(*method.nu > 0.0) || !std::isfinite(*method.nu)) {
        throw ConfigError("fuse pooling needs a finite nu > 0");
    }
    const double nu = *method.nu;
    std::vector<double> shifted(values.size());
    for (std::size_t k = 0; k < values.size(); ++k) shifted[k] = std::exp(nu * (values[k] - top));
    const double mean = detail::pairwise_sum(shifted) / static_cast<double>(values.size());
    // The top term contributes exp(0) = 1, so mean >= 1/K and the log is finite.
    return std::min(top, top + std::log(mean) / nu);
}

double quantile_type7(std::span<const double> sorted, double p) {
    if (sorted.empty()) throw DataError("quantile of an empty sample");
    if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("quantile level must lie in [0, 1]");
    const double h = static_cast<double>(sorted.size() - 1) * p;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

std::vector<double> distance_set(const SampleMatrix& data, double r) {
    const std::size_t n = data.rows();
    std::vector<double> d;
    d.reserve(n * (n - 1) / 2);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double v = lr_distance(data.row(i), data.row(j), r);
            if (v > 0.0) d.push_back(v);
        }
    }
    if (d.empty()) throw DataError("all points coincide, so the distance set is empty");
    std::sort(d.begin(), d.end());
    return d;
}

double median_bandwidth(const SampleMatrix& data, double r) {
    const auto d = distance_set(data, r);
    return d[(d.size() - 1) / 2];
}

std::vector<double> quantile_grid(std::span<const double> sorted_distances, std::size_t points) {
    if (points == 0) throw ConfigError("bandwidth grid needs at least one point");
    const double q5 = quantile_type7(sorted_distances, 0.05);
    const double q95 = quantile_type7(sorted_distances, 0.95);
    if (points == 1 || q5 == q95) return {q5};
    std::vector<double> grid(points);
    const double step = (q95 - q5) / static_cast<double>(points - 1);
    for (std::size_t i = 0; i < points; ++i) grid[i] = q5 + static_cast<double>(i) * step;
    grid.back() = q95;
    return grid;
}

std::vector<KernelFamily> default_collection_families() { return {KernelFamily::Gaussian, KernelFamily::Laplace}; }

namespace {

void require_families(const std::vector<KernelFamily>& families) {
    if (families.empty()) throw ConfigError("bandwidth collection needs at least one kernel family");
    for (auto f : families) {
        if (f == KernelFamily::Indicator) throw ConfigError("the indicator kernel has no bandwidth to tune");
    }
}

struct FamilyGrid {
    std::vector<double> bandwidths;
    std::string warning;
};

FamilyGrid family_grid(const SampleMatrix& data, KernelFamily family, std::size_t points,
                       std::string_view stream) {
    const auto d = distance_set(data, default_distance_order(family));
    FamilyGrid g{quantile_grid(d, points), {}};
    if (g.bandwidths.size() == 1 && points > 1) {
        g.warning = std::string(to_string(family)) + std::string(stream) +
                    ": 5% and 95% distance quantiles coincide; using a single bandwidth";
    }
    return g;
}

}  // namespace

KernelCollection bandwidth_collection(const SampleMatrix& data, const std::vector<KernelFamily>& families,
                                      std::size_t points) {
    require_families(families);
    std::vector<KernelChoice> entries;
    std::vector<std::string> warnings;
    for (auto family : families) {
        const auto g = family_grid(data, family, points, "");
        if (!g.warning.empty()) warnings.push_back(g.warning);
        for (double bw : g.bandwidths) entries.push_back({KernelSpec(family, bw), std::nullopt});
    }
    return KernelCollection(std::move(entries), CollectionProvenance::AutoQuantile, std::move(warnings));
}

KernelCollection hsic_bandwidth_collection(const SampleMatrix& x, const SampleMatrix& y,
                                           const std::vector<KernelFamily>& families, std::size_t points) {
    require_families(families);
    std::vector<KernelChoice> entries;
    std::vector<std::string> warnings;
    for (auto family : families) {
        const auto gx = family_grid(x, family, points, " (X)");
        const auto gy = family_grid(y, family, points, " (Y)");
        for (const auto* g : {&gx, &gy}) {
            if (!g->warning.empty()) warnings.push_back(g->warning);
        }
        for (double bx : gx.bandwidths) {
            for (double by : gy.bandwidths) entries.push_back({KernelSpec(family, bx), KernelSpec(family, by)});
        }
    }
    return KernelCollection(std::move(entries), CollectionProvenance::AutoQuantile, std::move(warnings));
}

PooledResult adaptive_statistic(const KernelCollection& collection, const StatisticRequest& request,
                                const StatisticInputs& inputs, const PoolMethod& method, bool normalize,
                                const ExecutionOptions& options) {
    validate(request, inputs);
    if (normalize && !one_sample_design(request, inputs)) {
        throw ConfigError("normalization is only defined for paired-u, second-order-v, ksd v/u, mmd v with m = n, "
                          "and incomplete designs");
    }
    if ((request.discrepancy == Discrepancy::Hsic) != collection.is_paired()) {
        throw ConfigError(collection.is_paired() ? "paired kernel collections are for HSIC only"
                                                 : "HSIC needs a collection of (k^X, k^Y) pairs");
    }
    PooledResult out;
    out.method = method;
    out.normalize = normalize;
    const std::size_t count = collection.size();
    out.statistics.reserve(count);
    for (std::size_t k = 0; k < count; ++k) {
        const KernelChoice& kernels = collection[k];
        out.statistics.push_back(compute_statistic(request, kernels, inputs, options));
        out.raw.push_back(out.statistics.back().value);
        double s = 1.0;
        if (normalize) {
            s = with_one_sample_core(request, kernels, inputs,
                                     [&](const auto& core, const Design& d) { return sigma(core, d, k); });
        }
        out.sigmas.push_back(s);
        out.normalized.push_back(out.raw.back() / s);
    }
    out.argmax = static_cast<std::size_t>(
        std::max_element(out.normalized.begin(), out.normalized.end()) - out.normalized.begin());

    PoolMethod used = method;
    if (used.kind == PoolKind::Fuse) {
        if (!used.nu) {
            std::size_t widest = 0;
            for (const auto& st : out.statistics) widest = std::max(widest, st.cardinality);
            used.nu = static_cast<double>(widest) / static_cast<double>(out.statistics.front().sample_count);
        }
        out.nu = used.nu;
    }
    out.value = pool(out.normalized, used);
    return out;
}

}  // namespace kdisc
