#include <gtest/gtest.h>

#include <cmath>

#include "kdisc/errors.hpp"
#include "kdisc/pooling.hpp"
#include "test_support.hpp"

using namespace kdisc;
using kdisc::testing::Gen;
using kdisc::testing::rel_err;

namespace {

struct ConstantCore {
    std::size_t n;
    double c;
    std::size_t size() const { return n; }
    double operator()(std::size_t, std::size_t) const { return c; }
};

template <typename C>
struct ScaledCore {
    const C& inner;
    double c;
    std::size_t size() const { return inner.size(); }
    double operator()(std::size_t i, std::size_t j) const { return c * inner(i, j); }
};

// Direct transcription with its own loops over the listed pairs.
template <typename C>
double sigma_transcription(const C& core, const std::vector<IndexPair>& pairs, std::size_t n) {
    double total = 0.0;
    for (const auto& p : pairs) total += core(p.i, p.j);
    double first = 0.0;
    std::size_t d1 = 0;
    for (std::size_t i = 0; i < n; ++i) {
        double s = 0.0;
        std::size_t count = 0;
        for (const auto& p : pairs) {
            if (p.i != i) continue;
            s += core(p.i, p.j);
            ++count;
        }
        if (count == 0) continue;
        ++d1;
        first += (s / static_cast<double>(count)) * (s / static_cast<double>(count));
    }
    const double avg = 2.0 * total / static_cast<double>(pairs.size());
    return std::sqrt(4.0 * first / static_cast<double>(d1) - avg * avg);
}

}  // namespace

// ---------------------------------------------------------------------------
// sigma

TEST(Sigma, ConstantCoreIsDegenerate) {
    try {
        (void)sigma(ConstantCore{4, 0.7}, design::U{}, 3);
        FAIL() << "expected a degenerate normalizer";
    } catch (const DegenerateNormalizerError& e) {
        EXPECT_EQ(e.kernel_index(), 3u);
    }
}

TEST(Sigma, MatchesTranscription) {
    Gen g(1);
    const SampleMatrix x = g.matrix(5, 2), y = g.matrix(5, 2, 0.6);
    const KernelSpec k = KernelSpec::gaussian(1.0);
    const PairedMmdCore<KernelSpec> core(k, x, y);
    for (const Design& d : {Design{design::U{}}, Design{design::V{}}, Design{design::D{2}},
                            Design{design::R{7, false, 3}}}) {
        EXPECT_LE(rel_err(sigma(core, d), sigma_transcription(core, enumerate_pairs(d, 5), 5)), 1e-12)
            << to_string(d);
    }
    EXPECT_NE(sigma(core, design::V{}), sigma(core, design::U{}));
}

TEST(Sigma, ScalesWithTheCore) {
    Gen g(2);
    for (int t = 0; t < 20; ++t) {
        const SampleMatrix x = g.matrix(12, 1);
        const SteinCore core(KernelSpec::imq(g.uniform(0.5, 2.0)), IsotropicGaussianScore({0.0}, 1.0), x);
        const double c = g.uniform(0.01, 100.0);
        const ScaledCore<SteinCore> scaled{core, c};
        const Design d = design::D{3};
        const double ratio = generic_statistic(core, d).value / sigma(core, d);
        const double scaled_ratio = generic_statistic(scaled, d).value / sigma(scaled, d);
        EXPECT_LE(rel_err(ratio, scaled_ratio), 1e-12);
    }
}

// ---------------------------------------------------------------------------
// pool

TEST(Pool, Examples) {
    const std::vector<double> same{0.3, 0.3, 0.3};
    for (double nu : {1e-3, 1.0, 1e6}) EXPECT_EQ(pool(same, PoolMethod::fuse(nu)), 0.3);
    EXPECT_EQ(pool(std::vector<double>{1, 3}, PoolMethod::mean()), 2.0);
    EXPECT_EQ(pool(std::vector<double>{1, 3, -2}, PoolMethod::max()), 3.0);
    const double f = pool(std::vector<double>{0, 1}, PoolMethod::fuse(1000));
    EXPECT_GE(f, 1.0 - std::log(2.0) / 1000.0);
    EXPECT_LE(f, 1.0);
}

TEST(Pool, Errors) {
    EXPECT_THROW((void)pool(std::vector<double>{}, PoolMethod::mean()), ConfigError);
    EXPECT_THROW((void)pool(std::vector<double>{1, NAN}, PoolMethod::max()), ConfigError);
    EXPECT_THROW((void)pool(std::vector<double>{1}, PoolMethod::fuse(0.0)), ConfigError);
    EXPECT_THROW((void)pool(std::vector<double>{1}, PoolMethod::fuse(-1.0)), ConfigError);
    EXPECT_THROW((void)pool(std::vector<double>{1}, PoolMethod::fuse()), ConfigError);
}

TEST(Pool, FuseDoesNotOverflow) {
    const std::vector<double> v{700.0, -700.0, 699.0};
    const double f = pool(v, PoolMethod::fuse(1.0));
    EXPECT_TRUE(std::isfinite(f));
    EXPECT_LE(f, 700.0);
}

TEST(PoolProperties, FuseBracket) {
    Gen g(3);
    for (int t = 0; t < 100; ++t) {
        std::vector<double> v(g.index(1, 20));
        for (auto& e : v) e = g.normal(0.0, 3.0);
        const double top = *std::max_element(v.begin(), v.end());
        for (double nu : {0.1, 1.0, 10.0, 1000.0}) {
            const double f = pool(v, PoolMethod::fuse(nu));
            EXPECT_LE(f, top + 1e-12);
            EXPECT_GE(f, top - std::log(static_cast<double>(v.size())) / nu - 1e-12);
        }
    }
}

TEST(PoolProperties, FuseIsMonotone) {
    Gen g(4);
    for (int t = 0; t < 100; ++t) {
        std::vector<double> v(g.index(2, 10));
        for (auto& e : v) e = g.normal();
        const double nu = g.uniform(0.1, 5.0);
        const double before = pool(v, PoolMethod::fuse(nu));
        v[g.index(0, v.size() - 1)] += g.uniform(0.05, 1.0);
        EXPECT_GT(pool(v, PoolMethod::fuse(nu)), before);
    }
}

// ---------------------------------------------------------------------------
// Quantiles and collections

TEST(Quantiles, TypeSevenGrid) {
    const std::vector<double> d{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
    EXPECT_NEAR(quantile_type7(d, 0.05), 1.45, 1e-15);
    EXPECT_NEAR(quantile_type7(d, 0.95), 9.55, 1e-14);
    EXPECT_EQ(quantile_type7(d, 0.0), 1.0);
    EXPECT_EQ(quantile_type7(d, 1.0), 10.0);
    const auto grid = quantile_grid(d);
    ASSERT_EQ(grid.size(), 10u);
    for (std::size_t i = 0; i < 10; ++i) EXPECT_NEAR(grid[i], 1.45 + 0.9 * static_cast<double>(i), 1e-13);
    EXPECT_THROW((void)quantile_type7(std::vector<double>{}, 0.5), DataError);
    EXPECT_THROW((void)quantile_type7(d, 1.5), ConfigError);
}

TEST(Collections, DefaultHasTwentyKernels) {
    Gen g(5);
    const KernelCollection c = bandwidth_collection(g.matrix(30, 3));
    EXPECT_EQ(c.size(), 20u);
    EXPECT_EQ(c.provenance(), CollectionProvenance::AutoQuantile);
    EXPECT_TRUE(c.warnings().empty());
    for (std::size_t k = 0; k < 10; ++k) EXPECT_EQ(c[k].kx.family(), KernelFamily::Gaussian);
    for (std::size_t k = 10; k < 20; ++k) EXPECT_EQ(c[k].kx.family(), KernelFamily::Laplace);
    for (std::size_t k = 1; k < 10; ++k) EXPECT_GT(c[k].kx.bandwidth(), c[k - 1].kx.bandwidth());
}

TEST(Collections, PerFamilyDistanceOrder) {
    const SampleMatrix x{{0, 0}, {3, 4}};
    const KernelCollection c = bandwidth_collection(x);
    ASSERT_EQ(c.size(), 2u);
    EXPECT_EQ(c[0].kx.bandwidth(), 5.0);
    EXPECT_EQ(c[1].kx.bandwidth(), 7.0);
}

TEST(Collections, CollapsedGridIsDeduplicated) {
    const SampleMatrix x{{1.0}, {1.0}, {4.0}};
    const KernelCollection c = bandwidth_collection(x);
    ASSERT_EQ(c.size(), 2u);
    EXPECT_EQ(c[0].kx.bandwidth(), 3.0);
    EXPECT_EQ(c.warnings().size(), 2u);
    EXPECT_THROW((void)bandwidth_collection(SampleMatrix{{2.0}, {2.0}}), DataError);
}

TEST(Collections, HsicGridPairs) {
    Gen g(6);
    const SampleMatrix x = g.matrix(12, 2), y = g.matrix(12, 1);
    const KernelCollection full = hsic_bandwidth_collection(x, y);
    EXPECT_EQ(full.size(), 200u);
    EXPECT_TRUE(full.is_paired());
    const KernelCollection small = hsic_bandwidth_collection(x, y, default_collection_families(), 3);
    EXPECT_EQ(small.size(), 18u);
    EXPECT_EQ(small[0].kx.family(), small[0].ky->family());
}

TEST(Collections, MedianBandwidthIsLowerMedian) {
    // Distances 1, 2, 3.
    const SampleMatrix three{{0}, {1}, {3}};
    EXPECT_EQ(median_bandwidth(three, 2.0), 2.0);
    const SampleMatrix four{{0}, {1}, {3}, {6}};
    // Distances sorted: 1 2 3 3 5 6; lower median is the third entry.
    EXPECT_EQ(median_bandwidth(four, 2.0), 3.0);
    const SampleMatrix two{{0}, {1}, {1}, {5}};
    // Distances without zeros: 1 1 4 4 5; median 4.
    EXPECT_EQ(median_bandwidth(two, 1.0), 4.0);
}

TEST(Collections, RejectsBadInput) {
    EXPECT_THROW(KernelCollection({}), ConfigError);
    EXPECT_THROW(KernelCollection({{KernelSpec::gaussian(1)}, {KernelSpec::gaussian(1), KernelSpec::gaussian(1)}}),
                 ConfigError);
    EXPECT_THROW((void)bandwidth_collection(SampleMatrix{{0}, {1}}, {KernelFamily::Indicator}), ConfigError);
    EXPECT_THROW((void)bandwidth_collection(SampleMatrix{{0}, {1}}, {}), ConfigError);
}

// ---------------------------------------------------------------------------
// adaptive_statistic

TEST(Adaptive, SingleKernelEqualsSingleStatistic) {
    Gen g(7);
    const SampleMatrix x = g.matrix(10, 2), y = g.matrix(10, 2, 0.5);
    const KernelSpec k = KernelSpec::gaussian(1.0);
    const auto one = KernelCollection::from_specs({k});
    const StatisticRequest req{Discrepancy::Mmd, StatisticKind::PairedU};
    for (const PoolMethod& m : {PoolMethod::mean(), PoolMethod::max(), PoolMethod::fuse(3.0), PoolMethod::fuse()}) {
        const PooledResult plain = adaptive_statistic(one, req, {&x, &y}, m, false);
        EXPECT_EQ(plain.value, mmd_u_paired(k, x, y));
        const PooledResult norm = adaptive_statistic(one, req, {&x, &y}, m, true);
        const PairedMmdCore<KernelSpec> core(k, x, y);
        EXPECT_LE(rel_err(norm.value, mmd_u_paired(k, x, y) / sigma(core, design::U{})), 1e-12);
    }
}

TEST(Adaptive, MeanPoolingEqualsMeanKernel) {
    Gen g(8);
    for (int t = 0; t < 20; ++t) {
        const SampleMatrix x = g.matrix(g.index(3, 12), 2), y = g.matrix(g.index(3, 12), 2, 0.4);
        const KernelCollection c = bandwidth_collection(SampleMatrix::vstack(x, y));
        std::vector<KernelSpec> specs;
        for (const auto& e : c.entries()) specs.push_back(e.kx);
        const MeanKernel mean(specs);
        for (StatisticKind kind : {StatisticKind::V, StatisticKind::U}) {
            const PooledResult p = adaptive_statistic(c, {Discrepancy::Mmd, kind}, {&x, &y}, PoolMethod::mean(), false);
            const double direct = kind == StatisticKind::V ? mmd_v(mean, x, y) : mmd_u(mean, x, y);
            EXPECT_LE(rel_err(p.value, direct), 1e-10);
        }
    }
}

TEST(Adaptive, HsicMeanPoolingEqualsMeanKernelWhenKyFixed) {
    Gen g(9);
    for (int t = 0; t < 20; ++t) {
        const std::size_t n = g.index(4, 12);
        const SampleMatrix x = g.matrix(n, 2), y = g.matrix(n, 1);
        const KernelSpec ky = KernelSpec::gaussian(1.0);
        const KernelCollection cx = bandwidth_collection(x);
        std::vector<KernelChoice> entries;
        std::vector<KernelSpec> specs;
        for (const auto& e : cx.entries()) {
            entries.push_back({e.kx, ky});
            specs.push_back(e.kx);
        }
        const KernelCollection c(entries);
        const MeanKernel mean(specs);
        const PairedSample z(x, y);
        for (StatisticKind kind : {StatisticKind::V, StatisticKind::U}) {
            const PooledResult p = adaptive_statistic(c, {Discrepancy::Hsic, kind}, {&x, &y}, PoolMethod::mean(), false);
            const double direct = kind == StatisticKind::V ? hsic_v(mean, ky, z) : hsic_u(mean, ky, z);
            EXPECT_LE(rel_err(p.value, direct, 1e-10), 1e-10);
        }
    }
}

TEST(Adaptive, LargeNuFuseApproachesMax) {
    Gen g(10);
    const SampleMatrix x = g.matrix(12, 1), y = g.matrix(12, 1, 0.8);
    const auto c = KernelCollection::from_specs({KernelSpec::gaussian(0.3), KernelSpec::gaussian(1.0),
                                                 KernelSpec::laplace(0.5), KernelSpec::imq(2.0),
                                                 KernelSpec::matern(1.5, 1.0)});
    const StatisticRequest req{Discrepancy::Mmd, StatisticKind::PairedU};
    const double fused = adaptive_statistic(c, req, {&x, &y}, PoolMethod::fuse(1e6), true).value;
    const PooledResult mx = adaptive_statistic(c, req, {&x, &y}, PoolMethod::max(), true);
    EXPECT_LE(std::abs(fused - mx.value), std::log(5.0) / 1e6 + 1e-12);
    EXPECT_EQ(mx.value, mx.normalized[mx.argmax]);
}

TEST(Adaptive, DefaultNuIsLargestCardinalityOverSampleCount) {
    Gen g(11);
    const SampleMatrix x = g.matrix(10, 1), y = g.matrix(10, 1);
    const auto c = KernelCollection::from_specs({KernelSpec::gaussian(1.0), KernelSpec::laplace(1.0)});
    const auto u = adaptive_statistic(c, {Discrepancy::Mmd, StatisticKind::PairedU}, {&x, &y}, PoolMethod::fuse(), true);
    EXPECT_EQ(*u.nu, 9.0);
    const auto v = adaptive_statistic(c, {Discrepancy::Mmd, StatisticKind::V}, {&x, &y}, PoolMethod::fuse(), false);
    EXPECT_EQ(*v.nu, 20.0);
    const auto d = adaptive_statistic(c, {Discrepancy::Mmd, StatisticKind::Incomplete, Design{design::D{2}}},
                                      {&x, &y}, PoolMethod::fuse(), true);
    EXPECT_EQ(*d.nu, 17.0 / 10.0);
}

TEST(Adaptive, ReproducibleWithRandomDesigns) {
    Gen g(12);
    const SampleMatrix x = g.matrix(40, 2);
    const IsotropicGaussianScore score({0, 0}, 1.0);
    const KernelCollection c = bandwidth_collection(x, {KernelFamily::Gaussian, KernelFamily::Imq});
    const StatisticRequest req{Discrepancy::Ksd, StatisticKind::Incomplete, Design{design::R{300, false, 77}}, &score};
    const PooledResult a = adaptive_statistic(c, req, {&x, nullptr}, PoolMethod::fuse(), true);
    const PooledResult b = adaptive_statistic(c, req, {&x, nullptr}, PoolMethod::fuse(), true);
    EXPECT_EQ(a.raw, b.raw);
    EXPECT_EQ(a.sigmas, b.sigmas);
    EXPECT_EQ(a.value, b.value);
}

TEST(Adaptive, NormalizationOnlyForOneSampleForms) {
    Gen g(13);
    const SampleMatrix x = g.matrix(6, 1), y = g.matrix(7, 1);
    const auto c = KernelCollection::from_specs({KernelSpec::gaussian(1.0)});
    EXPECT_THROW((void)adaptive_statistic(c, {Discrepancy::Mmd, StatisticKind::U}, {&x, &x}, PoolMethod::max(), true),
                 ConfigError);
    EXPECT_THROW((void)adaptive_statistic(c, {Discrepancy::Mmd, StatisticKind::V}, {&x, &y}, PoolMethod::max(), true),
                 ConfigError);
    EXPECT_NO_THROW(
        (void)adaptive_statistic(c, {Discrepancy::Mmd, StatisticKind::V}, {&x, &y}, PoolMethod::max(), false));
    EXPECT_THROW((void)adaptive_statistic(c, {Discrepancy::Hsic, StatisticKind::V}, {&x, &x}, PoolMethod::max(), false),
                 ConfigError);
}

TEST(Adaptive, DegenerateNormalizerNamesTheKernel) {
    const SampleMatrix x{{0}, {1}, {2}, {3}}, y{{10}, {11}, {12}, {13}};
    const auto c = KernelCollection::from_specs({KernelSpec::gaussian(1.0), KernelSpec::indicator()});
    try {
        (void)adaptive_statistic(c, {Discrepancy::Mmd, StatisticKind::PairedU}, {&x, &y}, PoolMethod::max(), true);
        FAIL() << "expected a degenerate normalizer";
    } catch (const DegenerateNormalizerError& e) {
        EXPECT_EQ(e.kernel_index(), 1u);
    }
}
