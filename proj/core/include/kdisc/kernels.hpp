#pragma once

#include <concepts>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "kdisc/sample.hpp"

namespace kdisc {

enum class KernelFamily {
    Gaussian,   // exp(-|x-y|_2^2 / l^2)
    Laplace,    // exp(-|x-y|_1 / l)
    Imq,        // (1 + |x-y|_2^2 / l^2)^(-1/2)
    Matern05,   // Matern nu = 0.5 on the L^r distance
    Matern15,
    Matern25,
    Matern35,
    Matern45,
    Indicator,  // 1(x == y), bandwidth ignored
};

[[nodiscard]] std::string_view to_string(KernelFamily family) noexcept;
/// Accepts the names produced by to_string ("gaussian", "matern2.5", ...).
[[nodiscard]] KernelFamily family_from_string(std::string_view name);
/// 2 for Gaussian, IMQ and the Matern family, 1 for Laplace.
[[nodiscard]] double default_distance_order(KernelFamily family) noexcept;

/// A kernel family with bandwidth and distance order. All families except
/// Indicator are radial: k(x, y) = Psi(|x - y|_r / bandwidth), Psi(0) = 1.
class KernelSpec {
public:
    /// Throws ConfigError for a non-positive or non-finite bandwidth, or an
    /// order that the family does not allow (Gaussian and IMQ need r = 2,
    /// Laplace r = 1, Matern any r >= 1).
    KernelSpec(KernelFamily family, double bandwidth, double distance_order);
    KernelSpec(KernelFamily family, double bandwidth)
        : KernelSpec(family, bandwidth, default_distance_order(family)) {}

    static KernelSpec gaussian(double bandwidth) { return {KernelFamily::Gaussian, bandwidth}; }
    static KernelSpec laplace(double bandwidth) { return {KernelFamily::Laplace, bandwidth}; }
    static KernelSpec imq(double bandwidth) { return {KernelFamily::Imq, bandwidth}; }
    /// nu in {0.5, 1.5, 2.5, 3.5, 4.5}.
    static KernelSpec matern(double nu, double bandwidth, double distance_order = 2.0);
    static KernelSpec indicator() { return {KernelFamily::Indicator, 1.0}; }

    [[nodiscard]] KernelFamily family() const noexcept { return family_; }
    [[nodiscard]] double bandwidth() const noexcept { return bandwidth_; }
    [[nodiscard]] double distance_order() const noexcept { return order_; }
    [[nodiscard]] bool is_radial() const noexcept { return family_ != KernelFamily::Indicator; }
    /// Smooth everywhere: Gaussian, IMQ, and Matern nu >= 1.5 on the L^2 distance.
    [[nodiscard]] bool is_differentiable() const noexcept;
    [[nodiscard]] KernelSpec with_bandwidth(double bandwidth) const {
        return {family_, bandwidth, order_};
    }

    /// Unchecked evaluation; callers guarantee matching dimensions.
    [[nodiscard]] double operator()(std::span<const double> x, std::span<const double> y) const noexcept;

    friend bool operator==(const KernelSpec&, const KernelSpec&) = default;

private:
    KernelFamily family_;
    double bandwidth_;
    double order_;
};

/// Mean of several kernels, k_bar = (1/|K|) sum_k k. Positive definite
/// whenever every member is.
class MeanKernel {
public:
    explicit MeanKernel(std::vector<KernelSpec> members);

    [[nodiscard]] const std::vector<KernelSpec>& members() const noexcept { return members_; }
    [[nodiscard]] double operator()(std::span<const double> x, std::span<const double> y) const noexcept;

private:
    std::vector<KernelSpec> members_;
};

template <typename K>
concept KernelFunction = requires(const K& k, std::span<const double> x) {
    { k(x, x) } -> std::convertible_to<double>;
};

/// |x - y|_r. Symmetric in its arguments bit for bit.
[[nodiscard]] double lr_distance(std::span<const double> x, std::span<const double> y, double r) noexcept;

/// Validated k(x, y). Throws DataError on mismatched or non-finite input.
[[nodiscard]] double evaluate(const KernelSpec& kernel, std::span<const double> x, std::span<const double> y);

/// Entry (i, j) = |X_i - Y_j|_r.
[[nodiscard]] Matrix pairwise_distances(const SampleMatrix& x, const SampleMatrix& y, double r);

struct GramMatrix {
    Matrix values;
    KernelSpec kernel;
};

/// Entry (i, j) = k(X_i, Y_j), identical to calling evaluate element by element.
[[nodiscard]] GramMatrix gram(const KernelSpec& kernel, const SampleMatrix& x, const SampleMatrix& y);
[[nodiscard]] Matrix gram(const MeanKernel& kernel, const SampleMatrix& x, const SampleMatrix& y);

/// Gradient of k(x, y) with respect to x, from the closed form.
/// Throws ConfigError for families that are not differentiable everywhere.
[[nodiscard]] std::vector<double> grad_x(const KernelSpec& kernel, std::span<const double> x,
                                         std::span<const double> y);

/// sum_i d^2 k / (dx_i dy_i) at (x, y), from the closed form.
[[nodiscard]] double cross_partial_trace(const KernelSpec& kernel, std::span<const double> x,
                                         std::span<const double> y);

namespace detail {

/// For a smooth radial kernel k = g(rho), rho = |x - y|_2: the value g,
/// g'(rho) / rho and g''(rho). Both derivative terms stay finite at rho = 0.
struct RadialJet {
    double value;
    double slope_over_radius;
    double curvature;
};

[[nodiscard]] RadialJet radial_jet(const KernelSpec& kernel, double squared_distance) noexcept;

void require_same_dimension(std::size_t a, std::size_t b, std::string_view what);
void require_finite(std::span<const double> v, std::string_view what);
void require_differentiable(const KernelSpec& kernel);

}  // namespace detail
}  // namespace kdisc
