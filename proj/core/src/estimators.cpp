#include "kdisc/estimators.hpp"

#include <string>

#include "kdisc/errors.hpp"

namespace kdisc {

namespace {

constexpr std::size_t kRowChunk = 16;

// Runs fn(i) for every row; rows are independent so any schedule gives the
// same per-row results.
template <typename RowFn>
void for_rows(std::size_t rows, const ExecutionOptions& options, RowFn&& fn) {
    detail::for_each_chunk(rows, kRowChunk, options.workers, [&](std::size_t, std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) fn(i);
    });
}

// Symmetric kernel matrix over `count` rows, either materialized (upper
// triangle mirrored) or evaluated on demand. Both give identical entries.
template <typename EntryFn>
class SymmetricEntries {
public:
    SymmetricEntries(std::size_t count, EntryFn entry, const ExecutionOptions& options)
        : entry_(std::move(entry)), materialized_(count <= options.materialize_cap) {
        if (!materialized_) return;
        values_ = Matrix(count, count);
        for_rows(count, options, [&](std::size_t i) {
            for (std::size_t j = i; j < count; ++j) values_(i, j) = entry_(i, j);
        });
        for (std::size_t i = 0; i < count; ++i) {
            for (std::size_t j = 0; j < i; ++j) values_(i, j) = values_(j, i);
        }
    }

    double operator()(std::size_t i, std::size_t j) const {
        if (materialized_) return values_(i, j);
        return i <= j ? entry_(i, j) : entry_(j, i);
    }

private:
    EntryFn entry_;
    bool materialized_;
    Matrix values_;
};

template <typename EntryFn>
SymmetricEntries<EntryFn> make_entries(std::size_t count, EntryFn entry, const ExecutionOptions& options) {
    return SymmetricEntries<EntryFn>(count, std::move(entry), options);
}

void require_rows(const SampleMatrix& s, std::size_t minimum, std::string_view what) {
    if (s.rows() < minimum) {
        throw DataError(std::string(what) + " needs at least " + std::to_string(minimum) + " samples, got " +
                        std::to_string(s.rows()));
    }
}

StatisticResult clamp_v(StatisticResult r) {
    if (r.value < 0.0 && r.value >= -kClampTolerance) {
        r.value = 0.0;
        r.clamped = true;
    }
    return r;
}

// The stacked sample Z = (X_1..X_m, Y_1..Y_n) without copying.
struct Stacked {
    const SampleMatrix& x;
    const SampleMatrix& y;
    [[nodiscard]] std::size_t size() const { return x.rows() + y.rows(); }
    [[nodiscard]] std::span<const double> row(std::size_t i) const {
        return i < x.rows() ? x.row(i) : y.row(i - x.rows());
    }
};

template <KernelFunction K>
StatisticResult mmd_v_impl(const K& kernel, const SampleMatrix& x, const SampleMatrix& y,
                           const ExecutionOptions& options) {
    detail::require_same_dimension(x.cols(), y.cols(), "mmd_v");
    const Stacked z{x, y};
    const std::size_t m = x.rows();
    const std::size_t total = z.size();
    const double wx = 1.0 / static_cast<double>(m);
    const double wy = -1.0 / static_cast<double>(y.rows());
    auto weight = [&](std::size_t i) { return i < m ? wx : wy; };

    const auto k = make_entries(total, [&](std::size_t i, std::size_t j) { return kernel(z.row(i), z.row(j)); },
                                options);
    // w^T K w = sum_i w_i (w_i K_ii + 2 sum_{j>i} w_j K_ij)
    std::vector<double> contrib(total);
    for_rows(total, options, [&](std::size_t i) {
        double upper = 0.0;
        for (std::size_t j = i + 1; j < total; ++j) upper += weight(j) * k(i, j);
        contrib[i] = weight(i) * (weight(i) * k(i, i) + 2.0 * upper);
    });
    StatisticResult r;
    r.value = detail::pairwise_sum(contrib);
    r.cardinality = total * total;
    r.sample_count = total;
    r.evaluations = total * (total + 1) / 2;
    r.biased = true;
    return clamp_v(r);
}

template <KernelFunction K>
StatisticResult mmd_u_impl(const K& kernel, const SampleMatrix& x, const SampleMatrix& y,
                           const ExecutionOptions& options) {
    detail::require_same_dimension(x.cols(), y.cols(), "mmd_u");
    require_rows(x, 2, "mmd_u (first sample)");
    require_rows(y, 2, "mmd_u (second sample)");
    const Stacked z{x, y};
    const std::size_t m = x.rows();
    const std::size_t n = y.rows();
    const std::size_t total = m + n;
    const auto k = make_entries(total, [&](std::size_t i, std::size_t j) { return kernel(z.row(i), z.row(j)); },
                                options);
    std::vector<double> within_x(m, 0.0), cross(m, 0.0), within_y(n, 0.0);
    for_rows(total, options, [&](std::size_t i) {
        if (i < m) {
            double w = 0.0;
            for (std::size_t j = i + 1; j < m; ++j) w += k(i, j);
            double c = 0.0;
            for (std::size_t j = m; j < total; ++j) c += k(i, j);
            within_x[i] = w;
            cross[i] = c;
        } else {
            double w = 0.0;
            for (std::size_t j = i + 1; j < total; ++j) w += k(i, j);
            within_y[i - m] = w;
        }
    });
    const double md = static_cast<double>(m);
    const double nd = static_cast<double>(n);
    StatisticResult r;
    r.value = 2.0 * detail::pairwise_sum(within_x) / (md * (md - 1.0)) -
              2.0 * detail::pairwise_sum(cross) / (md * nd) +
              2.0 * detail::pairwise_sum(within_y) / (nd * (nd - 1.0));
    r.cardinality = total * total - total;
    r.sample_count = total;
    r.evaluations = total * (total - 1) / 2;
    return r;
}

template <KernelFunction K>
StatisticResult mmd_u_paired_impl(const K& kernel, const SampleMatrix& x, const SampleMatrix& y,
                                  const ExecutionOptions& options) {
    if (x.rows() != y.rows()) {
        throw DataError("paired MMD U-statistic needs equal sample sizes, got " + std::to_string(x.rows()) +
                        " and " + std::to_string(y.rows()));
    }
    require_rows(x, 2, "mmd_u_paired");
    const PairedMmdCore<K> core(kernel, x, y);
    const std::size_t n = x.rows();
    // The core is symmetric in (i, j); sum the strict upper triangle once.
    std::vector<double> upper(n, 0.0);
    for_rows(n, options, [&](std::size_t i) {
        double s = 0.0;
        for (std::size_t j = i + 1; j < n; ++j) s += core(i, j);
        upper[i] = s;
    });
    const double nd = static_cast<double>(n);
    StatisticResult r;
    r.value = 2.0 * detail::pairwise_sum(upper) / (nd * (nd - 1.0));
    r.cardinality = n * (n - 1);
    r.sample_count = n;
    r.evaluations = n * (n - 1) / 2;
    return r;
}

// Per-row sums shared by both HSIC closed forms. `skip_diagonal` selects the
// zero-diagonal matrices used by the U-statistic.
struct HsicRowSums {
    std::vector<double> product;  // sum_j Kx_ij Ky_ij
    std::vector<double> x;        // sum_j Kx_ij
    std::vector<double> y;        // sum_j Ky_ij
    std::vector<double> xy;       // (sum_j Kx_ij)(sum_j Ky_ij)
};

template <KernelFunction KX, KernelFunction KY>
HsicRowSums hsic_row_sums(const KX& kx, const KY& ky, const PairedSample& z, bool skip_diagonal,
                          const ExecutionOptions& options) {
    const std::size_t n = z.size();
    const auto gx = make_entries(n, [&](std::size_t i, std::size_t j) { return kx(z.x().row(i), z.x().row(j)); },
                                 options);
    const auto gy = make_entries(n, [&](std::size_t i, std::size_t j) { return ky(z.y().row(i), z.y().row(j)); },
                                 options);
    HsicRowSums s{std::vector<double>(n), std::vector<double>(n), std::vector<double>(n), std::vector<double>(n)};
    for_rows(n, options, [&](std::size_t i) {
        double p = 0.0, sx = 0.0, sy = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            if (skip_diagonal && j == i) continue;
            const double a = gx(i, j);
            const double b = gy(i, j);
            p += a * b;
            sx += a;
            sy += b;
        }
        s.product[i] = p;
        s.x[i] = sx;
        s.y[i] = sy;
        s.xy[i] = sx * sy;
    });
    return s;
}

template <KernelFunction KX, KernelFunction KY>
StatisticResult hsic_v_impl(const KX& kx, const KY& ky, const PairedSample& z, const ExecutionOptions& options) {
    const std::size_t n = z.size();
    const auto s = hsic_row_sums(kx, ky, z, false, options);
    const double nd = static_cast<double>(n);
    // (1/N^2) tr(Kx H Ky H) expanded into row sums.
    StatisticResult r;
    r.value = detail::pairwise_sum(s.product) / (nd * nd) - 2.0 * detail::pairwise_sum(s.xy) / (nd * nd * nd) +
              detail::pairwise_sum(s.x) * detail::pairwise_sum(s.y) / (nd * nd * nd * nd);
    r.cardinality = n * n;
    r.sample_count = n;
    r.evaluations = n * (n + 1);
    r.biased = true;
    return clamp_v(r);
}

template <KernelFunction KX, KernelFunction KY>
StatisticResult hsic_u_impl(const KX& kx, const KY& ky, const PairedSample& z, const ExecutionOptions& options) {
    const std::size_t n = z.size();
    if (n < 4) throw DataError("hsic_u needs at least 4 paired samples, got " + std::to_string(n));
    const auto s = hsic_row_sums(kx, ky, z, true, options);
    const double nd = static_cast<double>(n);
    const double trace = detail::pairwise_sum(s.product);
    const double sum_x = detail::pairwise_sum(s.x);
    const double sum_y = detail::pairwise_sum(s.y);
    const double cross = detail::pairwise_sum(s.xy);
    StatisticResult r;
    r.value = (trace + sum_x * sum_y / ((nd - 1.0) * (nd - 2.0)) - 2.0 * cross / (nd - 2.0)) / (nd * (nd - 3.0));
    r.cardinality = n * (n - 1);
    r.sample_count = n;
    r.evaluations = n * (n + 1);
    return r;
}

template <KernelFunction KX, KernelFunction KY>
StatisticResult hsic_second_order_impl(const KX& kx, const KY& ky, const PairedSample& z,
                                       const ExecutionOptions& options) {
    if (z.size() % 2 != 0) {
        throw DataError("second-order HSIC V-statistic needs an even sample count, got " + std::to_string(z.size()));
    }
    const ShiftedHsicCore<KX, KY> core(kx, ky, z);
    return clamp_v(generic_statistic(core, design::V{}, options));
}

StatisticResult ksd_impl(const KernelSpec& kernel, const ScoreModel& score, const SampleMatrix& x, bool unbiased,
                         const ExecutionOptions& options) {
    detail::require_differentiable(kernel);
    require_rows(x, unbiased ? 2 : 1, unbiased ? "ksd_u" : "ksd_v");
    const SteinCore core(kernel, score, x);
    const std::size_t n = x.rows();
    const auto h = make_entries(n, [&](std::size_t i, std::size_t j) { return core(i, j); }, options);
    std::vector<double> upper(n, 0.0), diag(n, 0.0);
    for_rows(n, options, [&](std::size_t i) {
        double s = 0.0;
        for (std::size_t j = i + 1; j < n; ++j) s += h(i, j);
        upper[i] = s;
        if (!unbiased) diag[i] = h(i, i);
    });
    const double nd = static_cast<double>(n);
    const double off = 2.0 * detail::pairwise_sum(upper);
    StatisticResult r;
    r.sample_count = n;
    if (unbiased) {
        r.value = off / (nd * (nd - 1.0));
        r.cardinality = n * (n - 1);
        r.evaluations = n * (n - 1) / 2;
        return r;
    }
    r.value = (detail::pairwise_sum(diag) + off) / (nd * nd);
    r.cardinality = n * n;
    r.evaluations = n * (n + 1) / 2;
    r.biased = true;
    return clamp_v(r);
}

}  // namespace

// ---------------------------------------------------------------------------
// Public wrappers

template <KernelFunction K>
double mmd_v(const K& kernel, const SampleMatrix& x, const SampleMatrix& y, const ExecutionOptions& options) {
    return mmd_v_impl(kernel, x, y, options).value;
}

template <KernelFunction K>
double mmd_u(const K& kernel, const SampleMatrix& x, const SampleMatrix& y, const ExecutionOptions& options) {
    return mmd_u_impl(kernel, x, y, options).value;
}

template <KernelFunction K>
double mmd_u_paired(const K& kernel, const SampleMatrix& x, const SampleMatrix& y, const ExecutionOptions& options) {
    return mmd_u_paired_impl(kernel, x, y, options).value;
}

template <KernelFunction KX, KernelFunction KY>
double hsic_v(const KX& kx, const KY& ky, const PairedSample& z, const ExecutionOptions& options) {
    return hsic_v_impl(kx, ky, z, options).value;
}

template <KernelFunction KX, KernelFunction KY>
double hsic_u(const KX& kx, const KY& ky, const PairedSample& z, const ExecutionOptions& options) {
    return hsic_u_impl(kx, ky, z, options).value;
}

template <KernelFunction KX, KernelFunction KY>
double hsic_v_second_order(const KX& kx, const KY& ky, const PairedSample& z, const ExecutionOptions& options) {
    return hsic_second_order_impl(kx, ky, z, options).value;
}

double ksd_v(const KernelSpec& kernel, const ScoreModel& score, const SampleMatrix& x,
             const ExecutionOptions& options) {
    return ksd_impl(kernel, score, x, false, options).value;
}

double ksd_u(const KernelSpec& kernel, const ScoreModel& score, const SampleMatrix& x,
             const ExecutionOptions& options) {
    return ksd_impl(kernel, score, x, true, options).value;
}

#define KDISC_INSTANTIATE_ONE(K)                                                                          \
    template double mmd_v<K>(const K&, const SampleMatrix&, const SampleMatrix&, const ExecutionOptions&); \
    template double mmd_u<K>(const K&, const SampleMatrix&, const SampleMatrix&, const ExecutionOptions&); \
    template double mmd_u_paired<K>(const K&, const SampleMatrix&, const SampleMatrix&, const ExecutionOptions&);

#define KDISC_INSTANTIATE_TWO(KX, KY)                                                                            \
    template double hsic_v<KX, KY>(const KX&, const KY&, const PairedSample&, const ExecutionOptions&);          \
    template double hsic_u<KX, KY>(const KX&, const KY&, const PairedSample&, const ExecutionOptions&);          \
    template double hsic_v_second_order<KX, KY>(const KX&, const KY&, const PairedSample&, const ExecutionOptions&);

KDISC_INSTANTIATE_ONE(KernelSpec)
KDISC_INSTANTIATE_ONE(MeanKernel)
KDISC_INSTANTIATE_TWO(KernelSpec, KernelSpec)
KDISC_INSTANTIATE_TWO(MeanKernel, KernelSpec)
KDISC_INSTANTIATE_TWO(KernelSpec, MeanKernel)
KDISC_INSTANTIATE_TWO(MeanKernel, MeanKernel)

#undef KDISC_INSTANTIATE_ONE
#undef KDISC_INSTANTIATE_TWO

SteinCore::SteinCore(const KernelSpec& kernel, const ScoreModel& score, const SampleMatrix& x)
    : kernel_(kernel), x_(&x) {
    detail::require_differentiable(kernel);
    detail::require_same_dimension(x.cols(), score.dimension(), "stein core (score dimension)");
    scores_ = score.score_rows(x);
}

// ---------------------------------------------------------------------------
// Request dispatch

void validate(const StatisticRequest& request, const StatisticInputs& inputs) {
    if (inputs.x == nullptr) throw ConfigError("statistic request has no data");
    const bool has_second = inputs.y != nullptr;
    switch (request.discrepancy) {
        case Discrepancy::Mmd:
            if (!has_second) throw ConfigError("MMD needs two samples");
            if (request.kind == StatisticKind::SecondOrderV) {
                throw ConfigError("second-order-v is an HSIC statistic");
            }
            if ((request.kind == StatisticKind::PairedU || request.kind == StatisticKind::Incomplete) &&
                inputs.x->rows() != inputs.y->rows()) {
                throw ConfigError("paired MMD statistics need equal sample sizes, got " +
                                  std::to_string(inputs.x->rows()) + " and " + std::to_string(inputs.y->rows()));
            }
            break;
        case Discrepancy::Hsic:
            if (!has_second) throw ConfigError("HSIC needs paired X and Y blocks");
            if (inputs.x->rows() != inputs.y->rows()) {
                throw ConfigError("HSIC needs equal row counts for X and Y");
            }
            if (request.kind == StatisticKind::PairedU) throw ConfigError("paired-u is an MMD statistic");
            if ((request.kind == StatisticKind::SecondOrderV || request.kind == StatisticKind::Incomplete) &&
                inputs.x->rows() % 2 != 0) {
                throw ConfigError("shifted HSIC statistics need an even sample count");
            }
            break;
        case Discrepancy::Ksd:
            if (has_second) throw ConfigError("KSD takes a single sample");
            if (request.score == nullptr) throw ConfigError("KSD needs a score model");
            if (request.kind == StatisticKind::PairedU || request.kind == StatisticKind::SecondOrderV) {
                throw ConfigError("statistic kind not available for KSD");
            }
            break;
    }
    if (request.kind == StatisticKind::Incomplete) {
        if (!request.design) throw ConfigError("incomplete statistic needs a design");
        validate(*request.design, inputs.x->rows());
    }
}

std::optional<Design> one_sample_design(const StatisticRequest& request, const StatisticInputs& inputs) {
    switch (request.kind) {
        case StatisticKind::Incomplete: return request.design;
        case StatisticKind::PairedU: return Design{design::U{}};
        case StatisticKind::SecondOrderV: return Design{design::V{}};
        case StatisticKind::V:
            if (request.discrepancy == Discrepancy::Ksd) return Design{design::V{}};
            if (request.discrepancy == Discrepancy::Mmd && inputs.y && inputs.x->rows() == inputs.y->rows()) {
                return Design{design::V{}};
            }
            return std::nullopt;
        case StatisticKind::U:
            if (request.discrepancy == Discrepancy::Ksd) return Design{design::U{}};
            return std::nullopt;
    }
    return std::nullopt;
}

StatisticResult compute_statistic(const StatisticRequest& request, const KernelChoice& kernels,
                                  const StatisticInputs& inputs, const ExecutionOptions& options) {
    validate(request, inputs);
    const KernelSpec& kx = kernels.kx;
    const KernelSpec& ky = kernels.ky.value_or(kernels.kx);

    if (request.kind == StatisticKind::Incomplete) {
        return with_one_sample_core(request, kernels, inputs, [&](const auto& core, const Design& d) {
            const StatisticResult r = generic_statistic(core, d, options);
            return r.biased ? clamp_v(r) : r;
        });
    }
    switch (request.discrepancy) {
        case Discrepancy::Mmd:
            switch (request.kind) {
                case StatisticKind::V: return mmd_v_impl(kx, *inputs.x, *inputs.y, options);
                case StatisticKind::U: return mmd_u_impl(kx, *inputs.x, *inputs.y, options);
                default: return mmd_u_paired_impl(kx, *inputs.x, *inputs.y, options);
            }
        case Discrepancy::Hsic: {
            const PairedSample z(*inputs.x, *inputs.y);
            switch (request.kind) {
                case StatisticKind::V: return hsic_v_impl(kx, ky, z, options);
                case StatisticKind::U: return hsic_u_impl(kx, ky, z, options);
                default: return hsic_second_order_impl(kx, ky, z, options);
            }
        }
        case Discrepancy::Ksd:
        default:
            return ksd_impl(kx, *request.score, *inputs.x, request.kind == StatisticKind::U, options);
    }
}

}  // namespace kdisc
