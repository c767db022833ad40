#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "kdisc/kernels.hpp"
#include "kdisc/sample.hpp"

namespace kdisc {

/// Access to a model distribution P only through its score s_P(x) = grad log p(x).
/// Implementations must be safe to call concurrently.
class ScoreModel {
public:
    virtual ~ScoreModel() = default;

    [[nodiscard]] virtual std::size_t dimension() const noexcept = 0;
    /// Writes s_P(x) into `out`; both spans have length dimension().
    virtual void score_into(std::span<const double> x, std::span<double> out) const = 0;

    /// Validated evaluation.
    [[nodiscard]] std::vector<double> score(std::span<const double> x) const;
    /// Row i holds s_P(X_i).
    [[nodiscard]] std::vector<double> score_rows(const SampleMatrix& x) const;
};

/// N(mean, variance * I): s(x) = -(x - mean) / variance.
class IsotropicGaussianScore final : public ScoreModel {
public:
    IsotropicGaussianScore(std::vector<double> mean, double variance);

    [[nodiscard]] std::size_t dimension() const noexcept override { return mean_.size(); }
    void score_into(std::span<const double> x, std::span<double> out) const override;

private:
    std::vector<double> mean_;
    double variance_;
};

/// N(mean, diag(variances)).
class DiagonalGaussianScore final : public ScoreModel {
public:
    DiagonalGaussianScore(std::vector<double> mean, std::vector<double> variances);

    [[nodiscard]] std::size_t dimension() const noexcept override { return mean_.size(); }
    void score_into(std::span<const double> x, std::span<double> out) const override;

private:
    std::vector<double> mean_;
    std::vector<double> variances_;
};

/// Any user-supplied score. The callback must be stateless or thread-safe.
class CallbackScore final : public ScoreModel {
public:
    using Function = std::function<void(std::span<const double>, std::span<double>)>;

    CallbackScore(std::size_t dimension, Function fn);

    [[nodiscard]] std::size_t dimension() const noexcept override { return dimension_; }
    void score_into(std::span<const double> x, std::span<double> out) const override;

private:
    std::size_t dimension_;
    Function fn_;
};

/// h^MMD(x, x'; y, y') = k(x, x') - k(x', y) - k(x, y') + k(y, y').
template <KernelFunction K>
[[nodiscard]] double mmd_core_unchecked(const K& k, std::span<const double> x, std::span<const double> xp,
                                        std::span<const double> y, std::span<const double> yp) noexcept {
    return k(x, xp) - k(xp, y) - k(x, yp) + k(y, yp);
}

template <KernelFunction K>
[[nodiscard]] double mmd_core(const K& k, std::span<const double> x, std::span<const double> xp,
                              std::span<const double> y, std::span<const double> yp) {
    detail::require_same_dimension(x.size(), xp.size(), "mmd_core");
    detail::require_same_dimension(x.size(), y.size(), "mmd_core");
    detail::require_same_dimension(x.size(), yp.size(), "mmd_core");
    return mmd_core_unchecked(k, x, xp, y, yp);
}

/// One paired observation Z = (X, Y).
struct PairPoint {
    std::span<const double> x;
    std::span<const double> y;
};

[[nodiscard]] inline PairPoint pair_at(const PairedSample& z, std::size_t i) noexcept {
    return {z.x().row(i), z.y().row(i)};
}

/// Symmetric HSIC core: (1/4) h^MMD_kx(X_i, X_j; X_r, X_s) h^MMD_ky(Y_i, Y_j; Y_r, Y_s).
template <KernelFunction KX, KernelFunction KY>
[[nodiscard]] double hsic_core_unchecked(const KX& kx, const KY& ky, const PairPoint& zi, const PairPoint& zj,
                                         const PairPoint& zr, const PairPoint& zs) noexcept {
    return 0.25 * mmd_core_unchecked(kx, zi.x, zj.x, zr.x, zs.x) * mmd_core_unchecked(ky, zi.y, zj.y, zr.y, zs.y);
}

[[nodiscard]] double hsic_core(const KernelSpec& kx, const KernelSpec& ky, const PairPoint& zi,
                               const PairPoint& zj, const PairPoint& zr, const PairPoint& zs);

/// Langevin Stein kernel
///   h_P(x, y) = s(x).s(y) k + s(x).grad_y k + s(y).grad_x k + sum_i d2k/dx_i dy_i.
[[nodiscard]] double stein_kernel(const KernelSpec& kernel, const ScoreModel& score, std::span<const double> x,
                                  std::span<const double> y);

namespace detail {

/// h_P with the scores already evaluated. Symmetric in (x, sx) <-> (y, sy)
/// bit for bit.
[[nodiscard]] double stein_kernel_from_scores(const KernelSpec& kernel, std::span<const double> x,
                                              std::span<const double> y, std::span<const double> sx,
                                              std::span<const double> sy) noexcept;

}  // namespace detail
}  // namespace kdisc
