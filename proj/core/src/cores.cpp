#include "kdisc/cores.hpp"

#include <cmath>
#include <string>

#include "kdisc/errors.hpp"

namespace kdisc {

std::vector<double> ScoreModel::score(std::span<const double> x) const {
    detail::require_same_dimension(x.size(), dimension(), "score");
    detail::require_finite(x, "score");
    std::vector<double> out(dimension());
    score_into(x, out);
    detail::require_finite(out, "score output");
    return out;
}

std::vector<double> ScoreModel::score_rows(const SampleMatrix& x) const {
    detail::require_same_dimension(x.cols(), dimension(), "score");
    const std::size_t d = dimension();
    std::vector<double> out(x.rows() * d);
    for (std::size_t i = 0; i < x.rows(); ++i) {
        score_into(x.row(i), std::span<double>(out.data() + i * d, d));
    }
    detail::require_finite(out, "score output");
    return out;
}

IsotropicGaussianScore::IsotropicGaussianScore(std::vector<double> mean, double variance)
    : mean_(std::move(mean)), variance_(variance) {
    if (mean_.empty()) throw ConfigError("score model needs dimension >= 1");
    detail::require_finite(mean_, "gaussian score mean");
    if (!(variance_ > 0.0) || !std::isfinite(variance_)) {
        throw ConfigError("gaussian score variance must be positive, got " + std::to_string(variance_));
    }
}

void IsotropicGaussianScore::score_into(std::span<const double> x, std::span<double> out) const {
    for (std::size_t i = 0; i < mean_.size(); ++i) out[i] = -(x[i] - mean_[i]) / variance_;
}

DiagonalGaussianScore::DiagonalGaussianScore(std::vector<double> mean, std::vector<double> variances)
    : mean_(std::move(mean)), variances_(std::move(variances)) {
    if (mean_.empty()) throw ConfigError("score model needs dimension >= 1");
    if (mean_.size() != variances_.size()) {
        throw ConfigError("gaussian score mean and variance lengths differ");
    }
    detail::require_finite(mean_, "gaussian score mean");
    for (double v : variances_) {
        if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError("gaussian score variances must be positive");
    }
}

void DiagonalGaussianScore::score_into(std::span<const double> x, std::span<double> out) const {
    for (std::size_t i = 0; i < mean_.size(); ++i) out[i] = -(x[i] - mean_[i]) / variances_[i];
}

CallbackScore::CallbackScore(std::size_t dimension, Function fn) : dimension_(dimension), fn_(std::move(fn)) {
    if (dimension_ == 0) throw ConfigError("score model needs dimension >= 1");
    if (!fn_) throw ConfigError("score callback is empty");
}

void CallbackScore::score_into(std::span<const double> x, std::span<double> out) const { fn_(x, out); }

double hsic_core(const KernelSpec& kx, const KernelSpec& ky, const PairPoint& zi, const PairPoint& zj,
                 const PairPoint& zr, const PairPoint& zs) {
    for (const auto* z : {&zj, &zr, &zs}) {
        detail::require_same_dimension(zi.x.size(), z->x.size(), "hsic_core");
        detail::require_same_dimension(zi.y.size(), z->y.size(), "hsic_core");
    }
    return hsic_core_unchecked(kx, ky, zi, zj, zr, zs);
}

double stein_kernel(const KernelSpec& kernel, const ScoreModel& score, std::span<const double> x,
                    std::span<const double> y) {
    detail::require_differentiable(kernel);
    detail::require_same_dimension(x.size(), y.size(), "stein_kernel");
    const auto sx = score.score(x);
    const auto sy = score.score(y);
    return detail::stein_kernel_from_scores(kernel, x, y, sx, sy);
}

namespace detail {

double stein_kernel_from_scores(const KernelSpec& kernel, std::span<const double> x, std::span<const double> y,
                                std::span<const double> sx, std::span<const double> sy) noexcept {
    // With k = g(rho) and A = g'(rho)/rho: grad_x k = A (x - y) = -grad_y k,
    // so the two mixed terms combine to A (s(y) - s(x)).(x - y), and the
    // derivative trace is -g'' - (d - 1) A.
    double dist2 = 0.0;
    double score_dot = 0.0;
    double mixed = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double diff = x[i] - y[i];
        dist2 += diff * diff;
        score_dot += sx[i] * sy[i];
        mixed += (sy[i] - sx[i]) * diff;
    }
    const auto jet = radial_jet(kernel, dist2);
    const auto d = static_cast<double>(x.size());
    const double trace = -jet.curvature - (d - 1.0) * jet.slope_over_radius;
    return score_dot * jet.value + jet.slope_over_radius * mixed + trace;
}

}  // namespace detail
}  // namespace kdisc
