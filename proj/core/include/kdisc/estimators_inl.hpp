#pragma once

// Template definitions for estimators.hpp.

#include <string>

#include "kdisc/errors.hpp"

namespace kdisc {

template <KernelFunction KX, KernelFunction KY>
ShiftedHsicCore<KX, KY>::ShiftedHsicCore(const KX& kx, const KY& ky, const PairedSample& z)
    : kx_(&kx), ky_(&ky), z_(&z), half_(z.size() / 2) {
    if (z.size() < 2 || z.size() % 2 != 0) {
        throw DataError("shifted HSIC core needs an even sample count, got " + std::to_string(z.size()));
    }
}

template <typename F>
decltype(auto) with_one_sample_core(const StatisticRequest& request, const KernelChoice& kernels,
                                    const StatisticInputs& inputs, F&& f) {
    auto design = one_sample_design(request, inputs);
    if (!design) {
        throw ConfigError("this statistic has no one-sample second-order form; normalization is only "
                          "defined for paired-u, second-order-v, ksd v/u, mmd v with m = n, and incomplete designs");
    }
    switch (request.discrepancy) {
        case Discrepancy::Mmd: {
            PairedMmdCore<KernelSpec> core(kernels.kx, *inputs.x, *inputs.y);
            return f(core, *design);
        }
        case Discrepancy::Hsic: {
            const PairedSample z(*inputs.x, *inputs.y);
            ShiftedHsicCore<KernelSpec, KernelSpec> core(kernels.kx, kernels.ky.value_or(kernels.kx), z);
            return f(core, *design);
        }
        case Discrepancy::Ksd:
        default: {
            SteinCore core(kernels.kx, *request.score, *inputs.x);
            return f(core, *design);
        }
    }
}

}  // namespace kdisc
