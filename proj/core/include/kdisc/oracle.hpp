#pragma once

#include <cstddef>

#include "kdisc/cores.hpp"
#include "kdisc/designs.hpp"
#include "kdisc/kernels.hpp"
#include "kdisc/sample.hpp"

namespace kdisc {

// Slow reference implementations: literal index loops over the defining
// sums, with no algebraic simplification. They share nothing with the fast
// paths beyond kernel and score evaluation, and refuse inputs larger than
// the configured cap.

struct OracleConfig {
    /// Largest sample count accepted. At most kOracleHardCap.
    std::size_t max_n = 8;
};

inline constexpr std::size_t kOracleHardCap = 12;

/// (1/(m^2 n^2)) sum_{i,i'} sum_{j,j'} h^MMD(X_i, X_i'; Y_j, Y_j').
[[nodiscard]] double oracle_mmd_v_tuple(const KernelSpec& kernel, const SampleMatrix& x, const SampleMatrix& y,
                                        const OracleConfig& config = {});

/// (1/(m(m-1) n(n-1))) sum_{i != i'} sum_{j != j'} h^MMD(X_i, X_i'; Y_j, Y_j'). m, n >= 2.
[[nodiscard]] double oracle_mmd_u_tuple(const KernelSpec& kernel, const SampleMatrix& x, const SampleMatrix& y,
                                        const OracleConfig& config = {});

/// (1/(n(n-1))) sum_{i != j} h^MMD(X_i, X_j; Y_i, Y_j). Equal row counts.
[[nodiscard]] double oracle_mmd_u_paired(const KernelSpec& kernel, const SampleMatrix& x, const SampleMatrix& y,
                                         const OracleConfig& config = {});

struct HsicOracleSums {
    /// (1/N^4) sum over all quadruples of the symmetric HSIC core.
    double v_fourth_order = 0.0;
    /// Double, triple and quadruple kernel-product sums with 1/N^2, 2/N^3, 1/N^4.
    double v_three_term = 0.0;
    /// (1/N^4) sum over all quadruples of k^X(X_i, X_j) h^MMD_{k^Y}(Y_i, Y_j; Y_r, Y_s).
    double v_asymmetric = 0.0;
    /// Three-term U form over distinct-index tuples (0 when N < 4).
    double u_tuple = 0.0;
    /// (1/|i_4^N|) sum over distinct quadruples of the symmetric core (0 when N < 4).
    double u_core = 0.0;
};

[[nodiscard]] HsicOracleSums oracle_hsic_sums(const KernelSpec& kx, const KernelSpec& ky, const PairedSample& z,
                                              const OracleConfig& config = {});

/// (1/N^2) sum_{i,j} h^HSIC(Z_i, Z_j, Z_{i+N/2}, Z_{j+N/2}) with indices mod N.
[[nodiscard]] double oracle_hsic_second_order(const KernelSpec& kx, const KernelSpec& ky, const PairedSample& z,
                                              const OracleConfig& config = {});

/// Stein kernel assembled term by term from the score, grad_x and
/// cross_partial_trace: s(x).s(y) k + s(x).grad_y k + s(y).grad_x k + trace.
[[nodiscard]] double oracle_stein_kernel(const KernelSpec& kernel, const ScoreModel& score,
                                         std::span<const double> x, std::span<const double> y);

/// (1/n^2) sum_{i,j} h_P(X_i, X_j).
[[nodiscard]] double oracle_ksd_v(const KernelSpec& kernel, const ScoreModel& score, const SampleMatrix& x,
                                  const OracleConfig& config = {});
/// (1/(n(n-1))) sum_{i != j} h_P(X_i, X_j).
[[nodiscard]] double oracle_ksd_u(const KernelSpec& kernel, const ScoreModel& score, const SampleMatrix& x,
                                  const OracleConfig& config = {});

/// Pairs of a design listed by plain per-variant loops, independent of
/// PairSequence. R designs are taken from draw_random_pairs.
[[nodiscard]] std::vector<IndexPair> oracle_design_pairs(const Design& design, std::size_t n);

}  // namespace kdisc
