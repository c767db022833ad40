#include <gtest/gtest.h>

#include <cmath>

#include "kdisc/errors.hpp"
#include "kdisc/oracle.hpp"
#include "test_support.hpp"

using namespace kdisc;
using kdisc::testing::Gen;
using kdisc::testing::rel_err;

TEST(OracleMmd, SingleSampleTerm) {
    const SampleMatrix x{{0.0}}, y{{1.0}};
    const KernelSpec k = KernelSpec::gaussian(1.0);
    EXPECT_NEAR(oracle_mmd_v_tuple(k, x, y), 2.0 - 2.0 * std::exp(-1.0), 1e-15);
}

TEST(OracleMmd, IdenticalSamplesGiveZero) {
    Gen g(1);
    const SampleMatrix x = g.matrix(5, 2);
    const KernelSpec k = KernelSpec::laplace(0.8);
    EXPECT_NEAR(oracle_mmd_v_tuple(k, x, x), 0.0, 1e-15);
    EXPECT_NEAR(oracle_mmd_u_paired(k, x, x), 0.0, 1e-15);
}

TEST(OracleMmd, TupleUOnIdenticalSamplesKeepsTheDiagonal) {
    // With X = Y the cross term averages over every pair including i = j,
    // so the statistic is 2 (A - 1) / m with A the off-diagonal kernel mean.
    Gen g(11);
    const SampleMatrix x = g.matrix(5, 2);
    const KernelSpec k = KernelSpec::laplace(0.8);
    double off = 0.0;
    for (std::size_t i = 0; i < 5; ++i) {
        for (std::size_t j = 0; j < 5; ++j) {
            if (i != j) off += evaluate(k, x.row(i), x.row(j));
        }
    }
    const double a = off / 20.0;
    EXPECT_NEAR(oracle_mmd_u_tuple(k, x, x), 2.0 * (a - 1.0) / 5.0, 1e-14);
}

TEST(OracleMmd, RepeatedRowsReduceToOnePair) {
    const SampleMatrix x{{0.0}, {0.0}, {0.0}}, y{{2.0}, {2.0}};
    const KernelSpec k = KernelSpec::gaussian(2.0);
    EXPECT_NEAR(oracle_mmd_u_tuple(k, x, y), 2.0 - 2.0 * std::exp(-1.0), 1e-15);
    const SampleMatrix same{{3.0}, {3.0}};
    EXPECT_EQ(oracle_mmd_u_tuple(k, same, same), 0.0);
}

TEST(OracleMmd, CapIsEnforced) {
    Gen g(2);
    const KernelSpec k = KernelSpec::gaussian(1.0);
    const SampleMatrix big = g.matrix(9, 1), small = g.matrix(3, 1);
    EXPECT_THROW((void)oracle_mmd_v_tuple(k, big, small), ConfigError);
    EXPECT_NO_THROW((void)oracle_mmd_v_tuple(k, big, small, OracleConfig{9}));
    EXPECT_THROW((void)oracle_mmd_v_tuple(k, small, small, OracleConfig{kOracleHardCap + 1}), ConfigError);
    EXPECT_THROW((void)oracle_mmd_u_tuple(k, SampleMatrix{{1.0}}, small), DataError);
}

TEST(OracleHsic, SumFormsAgree) {
    Gen g(3);
    for (int t = 0; t < 20; ++t) {
        const std::size_t n = g.index(4, 7);
        const PairedSample z(g.matrix(n, 2), g.matrix(n, 1));
        const auto& families = kdisc::testing::radial_families();
        const KernelSpec kx = kdisc::testing::random_kernel(g, families[g.index(0, families.size() - 1)], g.uniform(0.5, 2.0));
        const KernelSpec ky = kdisc::testing::random_kernel(g, families[g.index(0, families.size() - 1)], g.uniform(0.5, 2.0));
        const HsicOracleSums s = oracle_hsic_sums(kx, ky, z);
        EXPECT_LE(rel_err(s.v_fourth_order, s.v_three_term), 1e-12);
        EXPECT_LE(rel_err(s.v_fourth_order, s.v_asymmetric), 1e-12);
        EXPECT_LE(rel_err(s.u_core, s.u_tuple), 1e-12);
    }
}

TEST(OracleHsic, ConstantYGivesZero) {
    Gen g(4);
    const PairedSample z(g.matrix(6, 2), SampleMatrix(6, 1, std::vector<double>(6, 1.5)));
    const HsicOracleSums s = oracle_hsic_sums(KernelSpec::gaussian(1.0), KernelSpec::gaussian(1.0), z);
    EXPECT_NEAR(s.v_fourth_order, 0.0, 1e-15);
    EXPECT_NEAR(s.v_three_term, 0.0, 1e-14);
    EXPECT_NEAR(s.u_tuple, 0.0, 1e-14);
    EXPECT_NEAR(s.u_core, 0.0, 1e-15);
    EXPECT_NEAR(oracle_hsic_second_order(KernelSpec::gaussian(1.0), KernelSpec::gaussian(1.0), z), 0.0, 1e-15);
}

TEST(OracleHsic, SmallSamplesHaveNoUForm) {
    const PairedSample z(SampleMatrix{{0}, {1}, {2}}, SampleMatrix{{1}, {0}, {2}});
    const HsicOracleSums s = oracle_hsic_sums(KernelSpec::gaussian(1.0), KernelSpec::gaussian(1.0), z);
    EXPECT_EQ(s.u_core, 0.0);
    EXPECT_EQ(s.u_tuple, 0.0);
    EXPECT_GT(s.v_fourth_order, 0.0);
}

TEST(OracleKsd, SteinKernelAtCoincidentPoints) {
    // Gaussian kernel, standard normal model, d = 1, x = y = a:
    // h = a^2 + 2 / lambda^2.
    const IsotropicGaussianScore score({0.0}, 1.0);
    const std::vector<double> a{0.7};
    EXPECT_NEAR(oracle_stein_kernel(KernelSpec::gaussian(2.0), score, a, a), 0.49 + 0.5, 1e-14);
}

TEST(OracleKsd, VAndUAreConsistent) {
    Gen g(5);
    const SampleMatrix x = g.matrix(6, 2);
    const IsotropicGaussianScore score({0.0, 0.0}, 1.0);
    const KernelSpec k = KernelSpec::imq(1.3);
    double diag = 0.0;
    for (std::size_t i = 0; i < 6; ++i) diag += oracle_stein_kernel(k, score, x.row(i), x.row(i));
    const double v = oracle_ksd_v(k, score, x), u = oracle_ksd_u(k, score, x);
    EXPECT_LE(rel_err(36.0 * v, 30.0 * u + diag), 1e-12);
}

TEST(OracleDesigns, ListsMatchHandWrittenCases) {
    const std::vector<IndexPair> l{{0, 1}, {2, 3}};
    EXPECT_EQ(oracle_design_pairs(design::L{}, 5), l);
    const std::vector<IndexPair> d{{0, 1}, {1, 2}, {2, 3}, {0, 2}, {1, 3}};
    EXPECT_EQ(oracle_design_pairs(design::D{2}, 4), d);
    const std::vector<IndexPair> x{{0, 2}, {0, 3}, {1, 2}, {1, 3}};
    EXPECT_EQ(oracle_design_pairs(design::X{2}, 4), x);
    EXPECT_EQ(oracle_design_pairs(design::U{}, 3).size(), 6u);
    EXPECT_EQ(oracle_design_pairs(design::V{}, 3).size(), 9u);
}
