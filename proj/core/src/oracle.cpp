#include "kdisc/oracle.hpp"

#include <string>
#include <type_traits>

#include "kdisc/errors.hpp"

namespace kdisc {

namespace {

void require_cap(std::size_t n, const OracleConfig& config, std::string_view what) {
    if (config.max_n > kOracleHardCap) {
        throw ConfigError("oracle cap " + std::to_string(config.max_n) + " exceeds the hard limit " +
                          std::to_string(kOracleHardCap));
    }
    if (n > config.max_n) {
        throw ConfigError(std::string(what) + ": " + std::to_string(n) + " samples exceed the oracle cap " +
                          std::to_string(config.max_n));
    }
}

double k_at(const KernelSpec& k, const SampleMatrix& a, std::size_t i, const SampleMatrix& b, std::size_t j) {
    return k(a.row(i), b.row(j));
}

// h^MMD(a_i, a_i'; b_j, b_j') = k(a_i, a_i') - k(a_i', b_j) - k(a_i, b_j') + k(b_j, b_j')
double h_mmd(const KernelSpec& k, const SampleMatrix& a, std::size_t i, std::size_t ip, const SampleMatrix& b,
             std::size_t j, std::size_t jp) {
    return k_at(k, a, i, a, ip) - k_at(k, a, ip, b, j) - k_at(k, a, i, b, jp) + k_at(k, b, j, b, jp);
}

void check_two_sample(const SampleMatrix& x, const SampleMatrix& y, const OracleConfig& config,
                      std::string_view what) {
    detail::require_same_dimension(x.cols(), y.cols(), what);
    require_cap(x.rows(), config, what);
    require_cap(y.rows(), config, what);
}

}  // namespace

double oracle_mmd_v_tuple(const KernelSpec& kernel, const SampleMatrix& x, const SampleMatrix& y,
                          const OracleConfig& config) {
    check_two_sample(x, y, config, "oracle_mmd_v_tuple");
    const std::size_t m = x.rows();
    const std::size_t n = y.rows();
    double s = 0.0;
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t ip = 0; ip < m; ++ip)
            for (std::size_t j = 0; j < n; ++j)
                for (std::size_t jp = 0; jp < n; ++jp) s += h_mmd(kernel, x, i, ip, y, j, jp);
    const double md = static_cast<double>(m);
    const double nd = static_cast<double>(n);
    return s / (md * md * nd * nd);
}

double oracle_mmd_u_tuple(const KernelSpec& kernel, const SampleMatrix& x, const SampleMatrix& y,
                          const OracleConfig& config) {
    check_two_sample(x, y, config, "oracle_mmd_u_tuple");
    const std::size_t m = x.rows();
    const std::size_t n = y.rows();
    if (m < 2 || n < 2) throw DataError("oracle_mmd_u_tuple needs at least 2 samples on each side");
    double s = 0.0;
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t ip = 0; ip < m; ++ip) {
            if (ip == i) continue;
            for (std::size_t j = 0; j < n; ++j)
                for (std::size_t jp = 0; jp < n; ++jp) {
                    if (jp == j) continue;
                    s += h_mmd(kernel, x, i, ip, y, j, jp);
                }
        }
    const double md = static_cast<double>(m);
    const double nd = static_cast<double>(n);
    return s / (md * (md - 1.0) * nd * (nd - 1.0));
}

double oracle_mmd_u_paired(const KernelSpec& kernel, const SampleMatrix& x, const SampleMatrix& y,
                           const OracleConfig& config) {
    check_two_sample(x, y, config, "oracle_mmd_u_paired");
    if (x.rows() != y.rows()) throw DataError("oracle_mmd_u_paired needs equal sample sizes");
    const std::size_t n = x.rows();
    if (n < 2) throw DataError("oracle_mmd_u_paired needs at least 2 samples");
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            s += h_mmd(kernel, x, i, j, y, i, j);
        }
    const double nd = static_cast<double>(n);
    return s / (nd * (nd - 1.0));
}

HsicOracleSums oracle_hsic_sums(const KernelSpec& kx, const KernelSpec& ky, const PairedSample& z,
                                const OracleConfig& config) {
    const std::size_t n = z.size();
    require_cap(n, config, "oracle_hsic_sums");
    const SampleMatrix& x = z.x();
    const SampleMatrix& y = z.y();
    auto KX = [&](std::size_t i, std::size_t j) { return k_at(kx, x, i, x, j); };
    auto KY = [&](std::size_t i, std::size_t j) { return k_at(ky, y, i, y, j); };
    auto core = [&](std::size_t i, std::size_t j, std::size_t r, std::size_t s) {
        return 0.25 * (KX(i, j) - KX(i, s) - KX(r, j) + KX(r, s)) * (KY(i, j) - KY(i, s) - KY(r, j) + KY(r, s));
    };
    const double N = static_cast<double>(n);

    HsicOracleSums out;
    double fourth = 0.0, asym = 0.0, two = 0.0, three = 0.0, four = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            two += KX(i, j) * KY(i, j);
            for (std::size_t r = 0; r < n; ++r) {
                three += KX(i, j) * KY(i, r);
                for (std::size_t s = 0; s < n; ++s) {
                    fourth += core(i, j, r, s);
                    asym += KX(i, j) * (KY(i, j) - KY(i, s) - KY(r, j) + KY(r, s));
                    four += KX(i, j) * KY(r, s);
                }
            }
        }
    out.v_fourth_order = fourth / (N * N * N * N);
    out.v_asymmetric = asym / (N * N * N * N);
    out.v_three_term = two / (N * N) - 2.0 * three / (N * N * N) + four / (N * N * N * N);

    if (n >= 4) {
        double u2 = 0.0, u3 = 0.0, u4 = 0.0, ucore = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                if (j == i) continue;
                u2 += KX(i, j) * KY(i, j);
                for (std::size_t r = 0; r < n; ++r) {
                    if (r == i || r == j) continue;
                    u3 += KX(i, j) * KY(i, r);
                    for (std::size_t s = 0; s < n; ++s) {
                        if (s == i || s == j || s == r) continue;
                        u4 += KX(i, j) * KY(r, s);
                        ucore += core(i, j, r, s);
                    }
                }
            }
        const double i2 = N * (N - 1.0);
        const double i3 = i2 * (N - 2.0);
        const double i4 = i3 * (N - 3.0);
        out.u_tuple = u2 / i2 - 2.0 * u3 / i3 + u4 / i4;
        out.u_core = ucore / i4;
    }
    return out;
}

double oracle_hsic_second_order(const KernelSpec& kx, const KernelSpec& ky, const PairedSample& z,
                                const OracleConfig& config) {
    const std::size_t n = z.size();
    require_cap(n, config, "oracle_hsic_second_order");
    if (n % 2 != 0) throw DataError("oracle_hsic_second_order needs an even sample count");
    const SampleMatrix& x = z.x();
    const SampleMatrix& y = z.y();
    auto KX = [&](std::size_t i, std::size_t j) { return k_at(kx, x, i, x, j); };
    auto KY = [&](std::size_t i, std::size_t j) { return k_at(ky, y, i, y, j); };
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const std::size_t r = (i + n / 2) % n;
            const std::size_t s = (j + n / 2) % n;
            sum += 0.25 * (KX(i, j) - KX(i, s) - KX(r, j) + KX(r, s)) * (KY(i, j) - KY(i, s) - KY(r, j) + KY(r, s));
        }
    const double N = static_cast<double>(n);
    return sum / (N * N);
}

double oracle_stein_kernel(const KernelSpec& kernel, const ScoreModel& score, std::span<const double> x,
                           std::span<const double> y) {
    const auto sx = score.score(x);
    const auto sy = score.score(y);
    const auto gx = grad_x(kernel, x, y);
    // grad_y k(x, y) is grad_x of the swapped arguments.
    const auto gy = grad_x(kernel, y, x);
    const double k = evaluate(kernel, x, y);
    double ss = 0.0, sx_gy = 0.0, sy_gx = 0.0;
    for (std::size_t a = 0; a < x.size(); ++a) {
        ss += sx[a] * sy[a];
        sx_gy += sx[a] * gy[a];
        sy_gx += sy[a] * gx[a];
    }
    return ss * k + sx_gy + sy_gx + cross_partial_trace(kernel, x, y);
}

double oracle_ksd_v(const KernelSpec& kernel, const ScoreModel& score, const SampleMatrix& x,
                    const OracleConfig& config) {
    require_cap(x.rows(), config, "oracle_ksd_v");
    const std::size_t n = x.rows();
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) s += oracle_stein_kernel(kernel, score, x.row(i), x.row(j));
    const double nd = static_cast<double>(n);
    return s / (nd * nd);
}

double oracle_ksd_u(const KernelSpec& kernel, const ScoreModel& score, const SampleMatrix& x,
                    const OracleConfig& config) {
    require_cap(x.rows(), config, "oracle_ksd_u");
    const std::size_t n = x.rows();
    if (n < 2) throw DataError("oracle_ksd_u needs at least 2 samples");
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            s += oracle_stein_kernel(kernel, score, x.row(i), x.row(j));
        }
    const double nd = static_cast<double>(n);
    return s / (nd * (nd - 1.0));
}

std::vector<IndexPair> oracle_design_pairs(const Design& design, std::size_t n) {
    validate(design, n);
    std::vector<IndexPair> out;
    std::visit(
        [&](const auto& d) {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, design::V>) {
                for (std::size_t i = 0; i < n; ++i)
                    for (std::size_t j = 0; j < n; ++j) out.push_back({i, j});
            } else if constexpr (std::is_same_v<T, design::U>) {
                for (std::size_t i = 0; i < n; ++i)
                    for (std::size_t j = 0; j < n; ++j)
                        if (i != j) out.push_back({i, j});
            } else if constexpr (std::is_same_v<T, design::L>) {
                for (std::size_t i = 0; i + 1 < n; i += 2) out.push_back({i, i + 1});
            } else if constexpr (std::is_same_v<T, design::D>) {
                for (std::size_t off = 1; off <= d.subdiagonals; ++off)
                    for (std::size_t i = 0; i + off < n; ++i) out.push_back({i, i + off});
            } else if constexpr (std::is_same_v<T, design::B>) {
                std::size_t start = 0;
                for (std::size_t size : d.block_sizes) {
                    for (std::size_t i = start; i < start + size; ++i)
                        for (std::size_t j = start; j < start + size; ++j)
                            if (i != j) out.push_back({i, j});
                    start += size;
                }
            } else if constexpr (std::is_same_v<T, design::X>) {
                for (std::size_t i = 0; i < d.split; ++i)
                    for (std::size_t j = d.split; j < n; ++j) out.push_back({i, j});
            } else {
                out = draw_random_pairs(n, d);
            }
        },
        design);
    return out;
}

}  // namespace kdisc
