#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <cmath>

#include "kdisc/errors.hpp"
#include "kdisc/kernels.hpp"
#include "test_support.hpp"

using namespace kdisc;
using kdisc::testing::Gen;
using kdisc::testing::rel_err;

namespace {

std::vector<double> v1(double a) { return {a}; }

double central_gradient(const KernelSpec& k, std::vector<double> x, const std::vector<double>& y, std::size_t i,
                        double h) {
    const double x0 = x[i];
    x[i] = x0 + h;
    const double up = k(x, y);
    x[i] = x0 - h;
    const double down = k(x, y);
    return (up - down) / (2.0 * h);
}

double fd_cross_trace(const KernelSpec& k, const std::vector<double>& x, const std::vector<double>& y, double h) {
    double total = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        auto xp = x, xm = x, yp = y, ym = y;
        xp[i] += h;
        xm[i] -= h;
        yp[i] += h;
        ym[i] -= h;
        total += (k(xp, yp) - k(xp, ym) - k(xm, yp) + k(xm, ym)) / (4.0 * h * h);
    }
    return total;
}

double norm(const std::vector<double>& v) {
    double s = 0.0;
    for (double e : v) s += e * e;
    return std::sqrt(s);
}

}  // namespace

TEST(KernelEvaluate, GaussianUnitDistance) {
    EXPECT_NEAR(evaluate(KernelSpec::gaussian(1.0), v1(0), v1(1)), 0.36787944117144233, 1e-15);
}

TEST(KernelEvaluate, MaternAtZeroDistanceIsOne) {
    for (double bw : {0.1, 1.0, 17.0}) EXPECT_EQ(evaluate(KernelSpec::matern(1.5, bw), v1(3), v1(3)), 1.0);
}

TEST(KernelEvaluate, LaplaceUsesL1Distance) {
    EXPECT_NEAR(evaluate(KernelSpec::laplace(2.0), v1(0), v1(2)), std::exp(-1.0), 1e-15);
    EXPECT_NEAR(evaluate(KernelSpec::laplace(1.0), std::vector<double>{0, 0}, std::vector<double>{1, 2}),
                std::exp(-3.0), 1e-15);
}

TEST(KernelEvaluate, ImqNormalizedForm) {
    EXPECT_NEAR(evaluate(KernelSpec::imq(2.0), std::vector<double>{0, 0}, std::vector<double>{3, 4}),
                1.0 / std::sqrt(1.0 + 25.0 / 4.0), 1e-15);
}

TEST(KernelEvaluate, MaternClosedForms) {
    const double t = 0.7;
    const double s3 = std::sqrt(3.0), s5 = std::sqrt(5.0), s7 = std::sqrt(7.0);
    EXPECT_NEAR(evaluate(KernelSpec::matern(0.5, 1.0), v1(0), v1(t)), std::exp(-t), 1e-15);
    EXPECT_NEAR(evaluate(KernelSpec::matern(1.5, 1.0), v1(0), v1(t)), (1 + s3 * t) * std::exp(-s3 * t), 1e-15);
    EXPECT_NEAR(evaluate(KernelSpec::matern(2.5, 1.0), v1(0), v1(t)),
                (1 + s5 * t + 5.0 * t * t / 3.0) * std::exp(-s5 * t), 1e-15);
    EXPECT_NEAR(evaluate(KernelSpec::matern(3.5, 1.0), v1(0), v1(t)),
                (1 + s7 * t + 14.0 * t * t / 5.0 + 7.0 * s7 * t * t * t / 15.0) * std::exp(-s7 * t), 1e-15);
    EXPECT_NEAR(evaluate(KernelSpec::matern(4.5, 1.0), v1(0), v1(t)),
                (1 + 3 * t + 27.0 * t * t / 7.0 + 18.0 * t * t * t / 7.0 + 27.0 * t * t * t * t / 35.0) *
                    std::exp(-3 * t),
                1e-15);
}

TEST(KernelEvaluate, MaternAcceptsOtherDistanceOrders) {
    const KernelSpec k = KernelSpec::matern(0.5, 1.0, 1.0);
    EXPECT_NEAR(evaluate(k, std::vector<double>{0, 0}, std::vector<double>{1, 2}), std::exp(-3.0), 1e-15);
}

TEST(KernelEvaluate, IndicatorIsBitwiseEquality) {
    const KernelSpec k = KernelSpec::indicator();
    EXPECT_EQ(evaluate(k, v1(1.5), v1(1.5)), 1.0);
    EXPECT_EQ(evaluate(k, v1(1.5), v1(std::nextafter(1.5, 2.0))), 0.0);
}

TEST(KernelEvaluate, RejectsBadInput) {
    EXPECT_THROW((void)evaluate(KernelSpec::gaussian(1.0), v1(0), std::vector<double>{0, 1}), DataError);
    EXPECT_THROW((void)evaluate(KernelSpec::gaussian(1.0), v1(0), v1(NAN)), DataError);
    EXPECT_THROW(KernelSpec::gaussian(0.0), ConfigError);
    EXPECT_THROW(KernelSpec::gaussian(-1.0), ConfigError);
    EXPECT_THROW(KernelSpec::laplace(INFINITY), ConfigError);
    EXPECT_THROW(KernelSpec(KernelFamily::Gaussian, 1.0, 1.0), ConfigError);
    EXPECT_THROW(KernelSpec(KernelFamily::Laplace, 1.0, 2.0), ConfigError);
    EXPECT_THROW(KernelSpec::matern(0.5, 1.0, 0.5), ConfigError);
    EXPECT_THROW(KernelSpec::matern(2.0, 1.0), ConfigError);
}

TEST(KernelFamilies, NamesRoundTrip) {
    for (auto f : kdisc::testing::radial_families()) EXPECT_EQ(family_from_string(to_string(f)), f);
    EXPECT_EQ(family_from_string("indicator"), KernelFamily::Indicator);
    EXPECT_THROW((void)family_from_string("cauchy"), ConfigError);
}

TEST(PairwiseDistances, Examples) {
    const SampleMatrix a{{0}, {3}};
    const Matrix d = pairwise_distances(a, a, 1.0);
    EXPECT_EQ(d(0, 0), 0.0);
    EXPECT_EQ(d(0, 1), 3.0);
    EXPECT_EQ(d(1, 0), 3.0);
    EXPECT_EQ(d(1, 1), 0.0);
    EXPECT_EQ(pairwise_distances(SampleMatrix{{0, 0}}, SampleMatrix{{3, 4}}, 2.0)(0, 0), 5.0);
    EXPECT_EQ(pairwise_distances(SampleMatrix{{1, 1}}, SampleMatrix{{1, 1}}, 7.0)(0, 0), 0.0);
    EXPECT_THROW((void)pairwise_distances(a, SampleMatrix{{0, 0}}, 2.0), DataError);
}

TEST(PairwiseDistances, SymmetricOnSameSample) {
    Gen g(11);
    const SampleMatrix x = g.matrix(9, 3);
    for (double r : {1.0, 2.0, 3.5}) {
        const Matrix d = pairwise_distances(x, x, r);
        for (std::size_t i = 0; i < 9; ++i)
            for (std::size_t j = 0; j < 9; ++j) EXPECT_EQ(d(i, j), d(j, i));
    }
}

TEST(Gram, Examples) {
    const SampleMatrix x{{0}, {1}};
    const GramMatrix g = gram(KernelSpec::gaussian(1.0), x, x);
    EXPECT_EQ(g.values(0, 0), 1.0);
    EXPECT_EQ(g.values(1, 1), 1.0);
    EXPECT_NEAR(g.values(0, 1), std::exp(-1.0), 1e-16);
    EXPECT_EQ(g.values(0, 1), g.values(1, 0));
    EXPECT_EQ(g.kernel, KernelSpec::gaussian(1.0));

    const SampleMatrix p{{1}, {2}};
    const Matrix id = gram(KernelSpec::indicator(), p, p).values;
    EXPECT_EQ(id(0, 0), 1.0);
    EXPECT_EQ(id(0, 1), 0.0);
    EXPECT_EQ(id(1, 0), 0.0);
    EXPECT_EQ(id(1, 1), 1.0);

    for (auto f : kdisc::testing::radial_families()) {
        const SampleMatrix one{{0.3, -2.0}};
        EXPECT_EQ(gram(KernelSpec(f, 0.8), one, one).values(0, 0), 1.0);
    }
}

TEST(Gram, BitIdenticalToElementwiseEvaluate) {
    Gen g(5);
    const SampleMatrix x = g.matrix(7, 2), y = g.matrix(4, 2);
    for (auto f : kdisc::testing::radial_families()) {
        const KernelSpec k(f, 1.3);
        const Matrix m = gram(k, x, y).values;
        for (std::size_t i = 0; i < 7; ++i)
            for (std::size_t j = 0; j < 4; ++j) EXPECT_EQ(m(i, j), evaluate(k, x.row(i), y.row(j)));
    }
}

TEST(Gram, MeanKernelIsAverageOfMembers) {
    Gen g(6);
    const SampleMatrix x = g.matrix(5, 2);
    const std::vector<KernelSpec> members{KernelSpec::gaussian(0.7), KernelSpec::laplace(1.9), KernelSpec::imq(1.0)};
    const Matrix m = gram(MeanKernel(members), x, x);
    for (std::size_t i = 0; i < 5; ++i)
        for (std::size_t j = 0; j < 5; ++j) {
            double s = 0.0;
            for (const auto& k : members) s += k(x.row(i), x.row(j));
            EXPECT_NEAR(m(i, j), s / 3.0, 1e-15);
        }
    EXPECT_THROW(MeanKernel({}), ConfigError);
}

// ---------------------------------------------------------------------------
// Properties

TEST(KernelProperties, SymmetricUnitDiagonalAndBounded) {
    Gen g(1);
    for (auto f : kdisc::testing::radial_families()) {
        for (int trial = 0; trial < 1000; ++trial) {
            const std::size_t d = g.index(1, 4);
            const KernelSpec k = kdisc::testing::random_kernel(g, f, g.uniform(0.1, 3.0));
            const auto x = g.vector(d), y = g.vector(d);
            const double kxy = evaluate(k, x, y);
            ASSERT_EQ(kxy, evaluate(k, y, x)) << to_string(f);
            ASSERT_EQ(evaluate(k, x, x), 1.0) << to_string(f);
            ASSERT_GE(kxy, 0.0);
            ASSERT_LE(kxy, 1.0);
        }
    }
}

TEST(KernelProperties, BandwidthLimits) {
    Gen g(2);
    for (auto f : kdisc::testing::radial_families()) {
        for (int trial = 0; trial < 50; ++trial) {
            const std::size_t d = g.index(1, 3);
            auto x = g.vector(d), y = g.vector(d);
            EXPECT_LE(evaluate(KernelSpec(f, 1e-12), x, y), 1e-10) << to_string(f);
            EXPECT_GE(evaluate(KernelSpec(f, 1e12), x, y), 1.0 - 1e-6) << to_string(f);
        }
    }
}

TEST(KernelProperties, BandwidthScalingIdentity) {
    Gen g(3);
    for (auto f : kdisc::testing::radial_families()) {
        for (int trial = 0; trial < 100; ++trial) {
            const std::size_t d = g.index(1, 3);
            const double bw = g.uniform(0.2, 4.0);
            const KernelSpec k = kdisc::testing::random_kernel(g, f, bw);
            const auto x = g.vector(d), y = g.vector(d);
            std::vector<double> xs(d), ys(d);
            for (std::size_t i = 0; i < d; ++i) {
                xs[i] = x[i] / bw;
                ys[i] = y[i] / bw;
            }
            EXPECT_LE(rel_err(evaluate(k, x, y), evaluate(k.with_bandwidth(1.0), xs, ys), 1e-300), 1e-12)
                << to_string(f);
        }
    }
}

TEST(KernelProperties, GramIsPositiveSemidefinite) {
    Gen g(4);
    for (auto f : kdisc::testing::radial_families()) {
        for (int trial = 0; trial < 20; ++trial) {
            const std::size_t n = g.index(2, 30), d = g.index(1, 5);
            const SampleMatrix x = g.matrix(n, d);
            const Matrix m = gram(KernelSpec(f, g.uniform(0.3, 3.0)), x, x).values;
            Eigen::MatrixXd e(n, n);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j) e(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = m(i, j);
            const double lowest = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(e).eigenvalues().minCoeff();
            EXPECT_GE(lowest, -1e-8 * static_cast<double>(n)) << to_string(f) << " n=" << n << " d=" << d;
        }
    }
}

// ---------------------------------------------------------------------------
// Derivatives

TEST(KernelDerivatives, GradientExamples) {
    const auto zero = grad_x(KernelSpec::gaussian(1.0), v1(0.4), v1(0.4));
    EXPECT_EQ(zero[0], 0.0);
    EXPECT_NEAR(grad_x(KernelSpec::gaussian(1.0), v1(1), v1(0))[0], -2.0 * std::exp(-1.0), 1e-15);
    EXPECT_EQ(grad_x(KernelSpec::imq(1.0), v1(0), v1(0))[0], 0.0);
}

TEST(KernelDerivatives, CrossTraceExamples) {
    EXPECT_NEAR(cross_partial_trace(KernelSpec::gaussian(1.0), v1(0.2), v1(0.2)), 2.0, 1e-15);
    const std::vector<double> p{0.1, 0.2, 0.3};
    EXPECT_NEAR(cross_partial_trace(KernelSpec::gaussian(2.0), p, p), 1.5, 1e-15);
    EXPECT_NEAR(cross_partial_trace(KernelSpec::gaussian(1.0), v1(1), v1(0)), -2.0 * std::exp(-1.0), 1e-15);
}

TEST(KernelDerivatives, RejectNonSmoothFamilies) {
    EXPECT_THROW((void)grad_x(KernelSpec::laplace(1.0), v1(0), v1(1)), ConfigError);
    EXPECT_THROW((void)grad_x(KernelSpec::matern(0.5, 1.0), v1(0), v1(1)), ConfigError);
    EXPECT_THROW((void)cross_partial_trace(KernelSpec::matern(1.5, 1.0, 1.0), v1(0), v1(1)), ConfigError);
    EXPECT_THROW((void)cross_partial_trace(KernelSpec::indicator(), v1(0), v1(1)), ConfigError);
    EXPECT_THROW((void)grad_x(KernelSpec::gaussian(1.0), v1(0), std::vector<double>{0, 1}), DataError);
}

TEST(KernelDerivatives, MatchFiniteDifferences) {
    Gen g(7);
    for (auto f : kdisc::testing::smooth_families()) {
        for (int trial = 0; trial < 200; ++trial) {
            const std::size_t d = g.index(1, 4);
            const KernelSpec k(f, g.uniform(0.5, 2.5));
            const auto x = g.vector(d), y = g.vector(d);
            const auto grad = grad_x(k, x, y);
            std::vector<double> diff(d), fd(d);
            for (std::size_t i = 0; i < d; ++i) {
                fd[i] = central_gradient(k, x, y, i, 1e-5);
                diff[i] = grad[i] - fd[i];
            }
            EXPECT_LE(norm(diff) / std::max(norm(grad), 1e-6), 1e-6) << to_string(f);
            EXPECT_LE(rel_err(cross_partial_trace(k, x, y), fd_cross_trace(k, x, y, 1e-4), 1e-3), 1e-4)
                << to_string(f);
        }
    }
}

TEST(KernelDerivatives, DiagonalValuesAreFinite) {
    for (auto f : kdisc::testing::smooth_families()) {
        const std::vector<double> x{0.3, -0.1};
        const double t = cross_partial_trace(KernelSpec(f, 1.1), x, x);
        EXPECT_TRUE(std::isfinite(t)) << to_string(f);
        EXPECT_GT(t, 0.0) << to_string(f);
    }
}
