#include "kdisc/kernels.hpp"

#include <array>
#include <cmath>
#include <string>

#include "kdisc/errors.hpp"

namespace kdisc {

namespace {

// Matern kernels: Psi(t) = P(t) exp(-c t) with the polynomial coefficients of
// the half-integer closed forms.
struct MaternForm {
    double rate;
    std::array<double, 5> coeff;  // P(t) = sum_k coeff[k] t^k
    int degree;
};

const MaternForm& matern_form(KernelFamily family) noexcept {
    static const double s3 = std::sqrt(3.0);
    static const double s5 = std::sqrt(5.0);
    static const double s7 = std::sqrt(7.0);
    static const MaternForm nu05{1.0, {1.0, 0.0, 0.0, 0.0, 0.0}, 0};
    static const MaternForm nu15{s3, {1.0, s3, 0.0, 0.0, 0.0}, 1};
    static const MaternForm nu25{s5, {1.0, s5, 5.0 / 3.0, 0.0, 0.0}, 2};
    static const MaternForm nu35{s7, {1.0, s7, 2.0 * 7.0 / 5.0, 7.0 * s7 / (3.0 * 5.0), 0.0}, 3};
    static const MaternForm nu45{3.0, {1.0, 3.0, 3.0 * 36.0 / 28.0, 216.0 / 84.0, 1296.0 / 1680.0}, 4};
    switch (family) {
        case KernelFamily::Matern15: return nu15;
        case KernelFamily::Matern25: return nu25;
        case KernelFamily::Matern35: return nu35;
        case KernelFamily::Matern45: return nu45;
        default: return nu05;
    }
}

bool is_matern(KernelFamily f) noexcept {
    return f == KernelFamily::Matern05 || f == KernelFamily::Matern15 || f == KernelFamily::Matern25 ||
           f == KernelFamily::Matern35 || f == KernelFamily::Matern45;
}

// exp(-c t) underflows to zero long before this; guards inf * 0 when t overflows.
constexpr double kMaternCutoff = 1e3;

double horner(const std::array<double, 5>& c, int degree, double t) noexcept {
    double acc = c[static_cast<std::size_t>(degree)];
    for (int k = degree - 1; k >= 0; --k) acc = acc * t + c[static_cast<std::size_t>(k)];
    return acc;
}

double matern_value(const MaternForm& form, double t) noexcept {
    if (t > kMaternCutoff) return 0.0;
    return horner(form.coeff, form.degree, t) * std::exp(-form.rate * t);
}

double squared_l2(std::span<const double> x, std::span<const double> y) noexcept {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double diff = x[i] - y[i];
        s += diff * diff;
    }
    return s;
}

}  // namespace

std::string_view to_string(KernelFamily family) noexcept {
    switch (family) {
        case KernelFamily::Gaussian: return "gaussian";
        case KernelFamily::Laplace: return "laplace";
        case KernelFamily::Imq: return "imq";
        case KernelFamily::Matern05: return "matern0.5";
        case KernelFamily::Matern15: return "matern1.5";
        case KernelFamily::Matern25: return "matern2.5";
        case KernelFamily::Matern35: return "matern3.5";
        case KernelFamily::Matern45: return "matern4.5";
        case KernelFamily::Indicator: return "indicator";
    }
    return "unknown";
}

KernelFamily family_from_string(std::string_view name) {
    for (auto f : {KernelFamily::Gaussian, KernelFamily::Laplace, KernelFamily::Imq, KernelFamily::Matern05,
                   KernelFamily::Matern15, KernelFamily::Matern25, KernelFamily::Matern35,
                   KernelFamily::Matern45, KernelFamily::Indicator}) {
        if (to_string(f) == name) return f;
    }
    throw ConfigError("unknown kernel family '" + std::string(name) + "'");
}

double default_distance_order(KernelFamily family) noexcept {
    return family == KernelFamily::Laplace ? 1.0 : 2.0;
}

KernelSpec::KernelSpec(KernelFamily family, double bandwidth, double distance_order)
    : family_(family), bandwidth_(bandwidth), order_(distance_order) {
    if (family_ == KernelFamily::Indicator) return;
    if (!(bandwidth_ > 0.0) || !std::isfinite(bandwidth_)) {
        throw ConfigError("kernel bandwidth must be positive and finite, got " + std::to_string(bandwidth_));
    }
    if (is_matern(family_)) {
        if (!(order_ >= 1.0) || !std::isfinite(order_)) {
            throw ConfigError("Matern distance order must be a finite r >= 1, got " + std::to_string(order_));
        }
    } else if (order_ != default_distance_order(family_)) {
        throw ConfigError(std::string(to_string(family_)) + " kernel uses distance order " +
                          std::to_string(default_distance_order(family_)) + ", got " + std::to_string(order_));
    }
}

KernelSpec KernelSpec::matern(double nu, double bandwidth, double distance_order) {
    KernelFamily f;
    if (nu == 0.5) f = KernelFamily::Matern05;
    else if (nu == 1.5) f = KernelFamily::Matern15;
    else if (nu == 2.5) f = KernelFamily::Matern25;
    else if (nu == 3.5) f = KernelFamily::Matern35;
    else if (nu == 4.5) f = KernelFamily::Matern45;
    else throw ConfigError("Matern smoothness must be one of 0.5, 1.5, 2.5, 3.5, 4.5, got " + std::to_string(nu));
    return {f, bandwidth, distance_order};
}

bool KernelSpec::is_differentiable() const noexcept {
    switch (family_) {
        case KernelFamily::Gaussian:
        case KernelFamily::Imq: return true;
        case KernelFamily::Matern15:
        case KernelFamily::Matern25:
        case KernelFamily::Matern35:
        case KernelFamily::Matern45: return order_ == 2.0;
        default: return false;
    }
}

double KernelSpec::operator()(std::span<const double> x, std::span<const double> y) const noexcept {
    switch (family_) {
        case KernelFamily::Gaussian:
            return std::exp(-squared_l2(x, y) / (bandwidth_ * bandwidth_));
        case KernelFamily::Laplace:
            return std::exp(-lr_distance(x, y, 1.0) / bandwidth_);
        case KernelFamily::Imq: {
            const double u = squared_l2(x, y) / (bandwidth_ * bandwidth_);
            return 1.0 / std::sqrt(1.0 + u);
        }
        case KernelFamily::Indicator: {
            for (std::size_t i = 0; i < x.size(); ++i) {
                if (x[i] != y[i]) return 0.0;
            }
            return 1.0;
        }
        default:
            return matern_value(matern_form(family_), lr_distance(x, y, order_) / bandwidth_);
    }
}

MeanKernel::MeanKernel(std::vector<KernelSpec> members) : members_(std::move(members)) {
    if (members_.empty()) throw ConfigError("mean kernel needs at least one member");
}

double MeanKernel::operator()(std::span<const double> x, std::span<const double> y) const noexcept {
    double s = 0.0;
    for (const auto& k : members_) s += k(x, y);
    return s / static_cast<double>(members_.size());
}

double lr_distance(std::span<const double> x, std::span<const double> y, double r) noexcept {
    if (r == 2.0) return std::sqrt(squared_l2(x, y));
    double s = 0.0;
    if (r == 1.0) {
        for (std::size_t i = 0; i < x.size(); ++i) s += std::abs(x[i] - y[i]);
        return s;
    }
    for (std::size_t i = 0; i < x.size(); ++i) s += std::pow(std::abs(x[i] - y[i]), r);
    return std::pow(s, 1.0 / r);
}

namespace detail {

void require_same_dimension(std::size_t a, std::size_t b, std::string_view what) {
    if (a != b) {
        throw DataError(std::string(what) + ": dimension mismatch (" + std::to_string(a) + " vs " +
                        std::to_string(b) + ")");
    }
}

void require_finite(std::span<const double> v, std::string_view what) {
    for (double e : v) {
        if (!std::isfinite(e)) throw DataError(std::string(what) + ": non-finite input");
    }
}

void require_differentiable(const KernelSpec& kernel) {
    if (!kernel.is_differentiable()) {
        throw ConfigError(std::string(to_string(kernel.family())) +
                          " kernel (distance order " + std::to_string(kernel.distance_order()) +
                          ") is not differentiable everywhere; use gaussian, imq, or matern nu >= 1.5 with r = 2");
    }
}

RadialJet radial_jet(const KernelSpec& kernel, double squared_distance) noexcept {
    const double bw = kernel.bandwidth();
    const double bw2 = bw * bw;
    switch (kernel.family()) {
        case KernelFamily::Gaussian: {
            const double e = std::exp(-squared_distance / bw2);
            return {e, -2.0 * e / bw2, (-2.0 / bw2 + 4.0 * squared_distance / (bw2 * bw2)) * e};
        }
        case KernelFamily::Imq: {
            const double u = squared_distance / bw2;
            const double base = 1.0 / std::sqrt(1.0 + u);
            const double b3 = base * base * base;
            const double b5 = b3 * base * base;
            return {base, -b3 / bw2, (-b3 + 3.0 * u * b5) / bw2};
        }
        default: {
            // g(rho) = P(t) e^{-ct}, t = rho / bw. With Q = P' - cP (Q(0) = 0):
            //   g'(rho) / rho = (Q(t) / t) e^{-ct} / bw^2
            //   g''(rho)      = (P'' - 2cP' + c^2 P)(t) e^{-ct} / bw^2
            const auto& form = matern_form(kernel.family());
            const double t = std::sqrt(squared_distance) / bw;
            if (t > kMaternCutoff) return {0.0, 0.0, 0.0};
            const int deg = form.degree;
            const double c = form.rate;
            std::array<double, 5> p1{};  // P'
            std::array<double, 5> p2{};  // P''
            for (int k = 1; k <= deg; ++k) p1[static_cast<std::size_t>(k - 1)] = k * form.coeff[static_cast<std::size_t>(k)];
            for (int k = 2; k <= deg; ++k) p2[static_cast<std::size_t>(k - 2)] = k * (k - 1) * form.coeff[static_cast<std::size_t>(k)];
            // Q(t) / t: drop the vanishing constant term and shift.
            std::array<double, 5> q_over_t{};
            for (int k = 1; k <= deg; ++k) {
                const auto ku = static_cast<std::size_t>(k);
                q_over_t[ku - 1] = p1[ku] - c * form.coeff[ku];
            }
            std::array<double, 5> curv{};
            for (int k = 0; k <= deg; ++k) {
                const auto ku = static_cast<std::size_t>(k);
                curv[ku] = p2[ku] - 2.0 * c * p1[ku] + c * c * form.coeff[ku];
            }
            const double e = std::exp(-c * t);
            return {horner(form.coeff, deg, t) * e, horner(q_over_t, deg - 1, t) * e / bw2,
                    horner(curv, deg, t) * e / bw2};
        }
    }
}

}  // namespace detail

double evaluate(const KernelSpec& kernel, std::span<const double> x, std::span<const double> y) {
    detail::require_same_dimension(x.size(), y.size(), "evaluate");
    detail::require_finite(x, "evaluate");
    detail::require_finite(y, "evaluate");
    return kernel(x, y);
}

Matrix pairwise_distances(const SampleMatrix& x, const SampleMatrix& y, double r) {
    detail::require_same_dimension(x.cols(), y.cols(), "pairwise_distances");
    if (!(r >= 1.0)) throw ConfigError("distance order must satisfy r >= 1");
    Matrix out(x.rows(), y.rows());
    for (std::size_t i = 0; i < x.rows(); ++i) {
        for (std::size_t j = 0; j < y.rows(); ++j) out(i, j) = lr_distance(x.row(i), y.row(j), r);
    }
    return out;
}

namespace {
template <typename K>
Matrix gram_values(const K& kernel, const SampleMatrix& x, const SampleMatrix& y) {
    detail::require_same_dimension(x.cols(), y.cols(), "gram");
    Matrix out(x.rows(), y.rows());
    for (std::size_t i = 0; i < x.rows(); ++i) {
        const auto xi = x.row(i);
        for (std::size_t j = 0; j < y.rows(); ++j) out(i, j) = kernel(xi, y.row(j));
    }
    return out;
}
}  // namespace

GramMatrix gram(const KernelSpec& kernel, const SampleMatrix& x, const SampleMatrix& y) {
    return {gram_values(kernel, x, y), kernel};
}

Matrix gram(const MeanKernel& kernel, const SampleMatrix& x, const SampleMatrix& y) {
    return gram_values(kernel, x, y);
}

std::vector<double> grad_x(const KernelSpec& kernel, std::span<const double> x, std::span<const double> y) {
    detail::require_same_dimension(x.size(), y.size(), "grad_x");
    detail::require_finite(x, "grad_x");
    detail::require_finite(y, "grad_x");
    detail::require_differentiable(kernel);
    const auto jet = detail::radial_jet(kernel, squared_l2(x, y));
    std::vector<double> g(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) g[i] = jet.slope_over_radius * (x[i] - y[i]);
    return g;
}

double cross_partial_trace(const KernelSpec& kernel, std::span<const double> x, std::span<const double> y) {
    detail::require_same_dimension(x.size(), y.size(), "cross_partial_trace");
    detail::require_finite(x, "cross_partial_trace");
    detail::require_finite(y, "cross_partial_trace");
    detail::require_differentiable(kernel);
    const auto jet = detail::radial_jet(kernel, squared_l2(x, y));
    const auto d = static_cast<double>(x.size());
    return -jet.curvature - (d - 1.0) * jet.slope_over_radius;
}

}  // namespace kdisc
