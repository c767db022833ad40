#include "cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string_view>

#include "CLI11.hpp"
#include "kdisc/cores.hpp"
#include "kdisc/errors.hpp"
#include "kdisc/oracle.hpp"

namespace kdisc::cli {

namespace {

using nlohmann::json;

std::vector<std::string> split(std::string_view text, char sep) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = text.find(sep, start);
        parts.emplace_back(text.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return parts;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

std::optional<double> to_double(std::string_view s) {
    s = trim(s);
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

double require_double(std::string_view s, std::string_view what) {
    const auto v = to_double(s);
    if (!v) throw ConfigError(std::string(what) + ": '" + std::string(s) + "' is not a number");
    return *v;
}

std::size_t require_count(std::string_view s, std::string_view what) {
    s = trim(s);
    std::size_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
        throw ConfigError(std::string(what) + ": '" + std::string(s) + "' is not a non-negative integer");
    }
    return v;
}

std::vector<double> number_list(std::string_view s, std::string_view what) {
    std::vector<double> out;
    for (const auto& part : split(s, ',')) out.push_back(require_double(part, what));
    return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// Argument grammars

KernelArg parse_kernel_arg(const std::string& text) {
    KernelArg k;
    const auto parts = split(text, ':');
    if (parts[0] == "median") {
        if (parts.size() != 1) throw ConfigError("--kernel median takes no parameters");
        k.mode = KernelArg::Mode::Median;
        return k;
    }
    if (parts[0] == "collection") {
        k.mode = KernelArg::Mode::Collection;
        if (parts.size() > 2) throw ConfigError("--kernel collection[:family,...]");
        if (parts.size() == 2) {
            for (const auto& f : split(parts[1], ',')) k.families.push_back(family_from_string(f));
        }
        return k;
    }
    k.family = family_from_string(parts[0]);
    if (k.family == KernelFamily::Indicator) {
        if (parts.size() != 1) throw ConfigError("the indicator kernel takes no bandwidth");
        k.mode = KernelArg::Mode::Fixed;
        return k;
    }
    if (parts.size() < 2 || parts.size() > 3) {
        throw ConfigError("--kernel expects family:bandwidth[:r] or family:median, got '" + text + "'");
    }
    if (parts.size() == 3) k.order = require_double(parts[2], "--kernel distance order");
    if (parts[1] == "median") {
        k.mode = KernelArg::Mode::Median;
    } else {
        k.mode = KernelArg::Mode::Fixed;
        k.bandwidth = require_double(parts[1], "--kernel bandwidth");
    }
    return k;
}

StatArg parse_stat_arg(const std::string& text) {
    StatArg s;
    s.text = text;
    const auto parts = split(text, ':');
    const std::string& head = parts[0];
    auto no_params = [&] {
        if (parts.size() != 1) throw ConfigError("--stat " + head + " takes no parameters");
    };
    auto one_param = [&]() -> std::size_t {
        if (parts.size() != 2) throw ConfigError("--stat " + head + " needs exactly one parameter");
        return require_count(parts[1], "--stat " + head);
    };
    if (head == "v") {
        no_params();
        s.kind = StatisticKind::V;
    } else if (head == "u") {
        no_params();
        s.kind = StatisticKind::U;
    } else if (head == "paired-u") {
        no_params();
        s.kind = StatisticKind::PairedU;
    } else if (head == "second-order-v") {
        no_params();
        s.kind = StatisticKind::SecondOrderV;
    } else if (head == "l") {
        no_params();
        s.kind = StatisticKind::Incomplete;
        s.design = design::L{};
    } else if (head == "d") {
        s.kind = StatisticKind::Incomplete;
        s.design = design::D{one_param()};
    } else if (head == "b") {
        s.kind = StatisticKind::Incomplete;
        s.equal_block_count = one_param();
    } else if (head == "x") {
        s.kind = StatisticKind::Incomplete;
        s.design = design::X{one_param()};
    } else if (head == "r") {
        if (parts.size() < 2 || parts.size() > 3) throw ConfigError("--stat r:m[:with-replacement]");
        design::R r{require_count(parts[1], "--stat r"), false, 0};
        if (parts.size() == 3) {
            if (parts[2] != "with-replacement") throw ConfigError("--stat r: unknown option '" + parts[2] + "'");
            r.with_replacement = true;
        }
        s.kind = StatisticKind::Incomplete;
        s.design = r;
    } else {
        throw ConfigError("unknown --stat '" + text + "'");
    }
    return s;
}

PoolMethod parse_pool_arg(const std::string& text) {
    const auto parts = split(text, ':');
    if (parts[0] == "mean" && parts.size() == 1) return PoolMethod::mean();
    if (parts[0] == "max" && parts.size() == 1) return PoolMethod::max();
    if (parts[0] == "fuse" && parts.size() <= 2) {
        if (parts.size() == 1) return PoolMethod::fuse();
        const double nu = require_double(parts[1], "--pool fuse nu");
        if (!(nu > 0.0) || !std::isfinite(nu)) throw ConfigError("--pool fuse needs a finite nu > 0");
        return PoolMethod::fuse(nu);
    }
    throw ConfigError("--pool expects mean, max, or fuse[:nu], got '" + text + "'");
}

ScoreArg parse_score_arg(const std::string& text) {
    const auto parts = split(text, ':');
    if (parts.size() != 3 || parts[0] != "gaussian") {
        throw ConfigError("--score expects gaussian:MEAN:VARIANCE, got '" + text + "'");
    }
    ScoreArg s{number_list(parts[1], "--score mean"), number_list(parts[2], "--score variance")};
    for (double v : s.variance) {
        if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError("--score variances must be finite and positive");
    }
    return s;
}

// ---------------------------------------------------------------------------
// CSV

SampleMatrix parse_csv(const std::string& text, bool has_header, const std::string& source) {
    std::vector<std::vector<double>> rows;
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    bool header_pending = has_header;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string_view view = trim(line);
        if (view.empty()) continue;
        if (header_pending) {
            header_pending = false;
            continue;
        }
        std::vector<double> row;
        const auto cells = split(view, ',');
        for (std::size_t c = 0; c < cells.size(); ++c) {
            const auto v = to_double(cells[c]);
            if (!v) {
                throw DataError(source + ": non-numeric cell '" + std::string(trim(cells[c])) + "' at row " +
                                std::to_string(rows.size() + 1) + ", column " + std::to_string(c + 1) + " (line " +
                                std::to_string(line_no) + ")");
            }
            row.push_back(*v);
        }
        if (!rows.empty() && row.size() != rows.front().size()) {
            throw DataError(source + ": ragged row " + std::to_string(rows.size() + 1) + " has " +
                            std::to_string(row.size()) + " columns, expected " +
                            std::to_string(rows.front().size()));
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw DataError(source + ": no data rows");
    return SampleMatrix::from_rows(rows);
}

SampleMatrix load_csv(const std::filesystem::path& path, bool has_header) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_csv(buffer.str(), has_header, path.string());
}

// ---------------------------------------------------------------------------
// Command line

RunConfig parse_args(int argc, const char* const* argv) {
    RunConfig cfg;
    CLI::App app{"Kernel discrepancies (MMD, HSIC, KSD) with complete, incomplete and pooled statistics", "kdisc"};
    app.require_subcommand(1, 1);

    std::string kernel = "median";
    std::optional<std::string> kernel_y;
    std::string stat = "v";
    std::optional<std::string> pool;
    std::optional<std::string> score;
    std::optional<std::string> output;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("inputs", cfg.inputs, "CSV input file(s)")->required()->check(CLI::ExistingFile);
        sub->add_flag("--header", cfg.header, "Skip the first non-empty line of every input");
        sub->add_option("--kernel", kernel, "family:bandwidth[:r] | family:median | median | collection[:families]");
        sub->add_option("--stat", stat, "v | u | paired-u | second-order-v | l | d:r | b:b | x:n1 | r:m[:with-replacement]");
        sub->add_option("--pool", pool, "mean | max | fuse[:nu]");
        sub->add_flag("--normalize", cfg.normalize, "Divide each statistic by its design-based normalizer");
        sub->add_option("--seed", cfg.seed, "Seed for r designs");
        sub->add_option("--output,-o", output, "Write the JSON report here instead of stdout");
        sub->add_flag("--verify", cfg.verify, "Cross-check against the brute-force oracle on small inputs");
        sub->add_option("--workers", cfg.workers, "Worker threads (0 = all cores)");
    };
    CLI::App* mmd = app.add_subcommand("mmd", "Two-sample maximum mean discrepancy");
    CLI::App* hsic = app.add_subcommand("hsic", "Hilbert-Schmidt independence criterion");
    CLI::App* ksd = app.add_subcommand("ksd", "Kernel Stein discrepancy against a Gaussian model");
    for (auto* sub : {mmd, hsic, ksd}) add_common(sub);
    hsic->add_option("--kernel-y", kernel_y, "Kernel for the Y block (defaults to --kernel)");
    hsic->add_option("--split", cfg.split, "Single-file mode: the first d_x columns are X");
    hsic->add_option("--hsic-grid", cfg.hsic_grid, "Bandwidths per stream in auto collections (1-10)")
        ->check(CLI::Range(1, 10));
    ksd->add_option("--score", score, "gaussian:MEAN:VARIANCE (scalars or comma lists)")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        throw ParseExit{code == 0 ? kExitOk : kExitConfig};
    }

    if (mmd->parsed()) cfg.command = Command::Mmd;
    if (hsic->parsed()) cfg.command = Command::Hsic;
    if (ksd->parsed()) cfg.command = Command::Ksd;
    cfg.kernel = parse_kernel_arg(kernel);
    if (kernel_y) cfg.kernel_y = parse_kernel_arg(*kernel_y);
    cfg.stat = parse_stat_arg(stat);
    if (pool) cfg.pool = parse_pool_arg(*pool);
    if (score) cfg.score = parse_score_arg(*score);
    if (output) cfg.output = *output;
    return cfg;
}

// ---------------------------------------------------------------------------
// Running

namespace {

struct Loaded {
    SampleMatrix x;
    std::optional<SampleMatrix> y;
};

void check_config(const RunConfig& cfg) {
    const std::size_t files = cfg.inputs.size();
    switch (cfg.command) {
        case Command::Mmd:
            if (files != 2) throw ConfigError("mmd needs exactly two input files");
            break;
        case Command::Hsic:
            if (files == 1 && !cfg.split) throw ConfigError("hsic with one input file needs --split d_x");
            if (files == 2 && cfg.split) throw ConfigError("--split applies only to single-file hsic input");
            if (files != 1 && files != 2) throw ConfigError("hsic needs one file with --split or two files");
            break;
        case Command::Ksd:
            if (files != 1) throw ConfigError("ksd takes exactly one input file");
            if (!cfg.score) throw ConfigError("ksd needs --score");
            break;
    }
    if (cfg.command != Command::Ksd && cfg.score) throw ConfigError("--score applies only to ksd");
    if (cfg.command != Command::Hsic && cfg.kernel_y) throw ConfigError("--kernel-y applies only to hsic");
    if (cfg.kernel_y && cfg.kernel_y->mode == KernelArg::Mode::Collection) {
        throw ConfigError("--kernel-y cannot be a collection; use --kernel collection for both streams");
    }
    if (cfg.kernel_y && cfg.kernel.mode == KernelArg::Mode::Collection) {
        throw ConfigError("--kernel collection builds both HSIC streams; drop --kernel-y");
    }
    if (cfg.hsic_grid < 1 || cfg.hsic_grid > 10) throw ConfigError("--hsic-grid must lie in [1, 10]");
}

Loaded load_inputs(const RunConfig& cfg) {
    Loaded l{load_csv(cfg.inputs[0], cfg.header), std::nullopt};
    if (cfg.inputs.size() == 2) {
        l.y = load_csv(cfg.inputs[1], cfg.header);
    } else if (cfg.split) {
        const std::size_t dx = *cfg.split;
        if (dx == 0 || dx >= l.x.cols()) {
            throw ConfigError("--split " + std::to_string(dx) + " must leave columns on both sides of a " +
                              std::to_string(l.x.cols()) + "-column table");
        }
        const SampleMatrix whole = l.x;
        l.x = whole.columns(0, dx);
        l.y = whole.columns(dx, whole.cols() - dx);
    }
    return l;
}

std::unique_ptr<ScoreModel> make_score(const ScoreArg& arg, std::size_t d) {
    auto expand = [&](const std::vector<double>& v, std::string_view what) {
        if (v.size() == d) return v;
        if (v.size() == 1) return std::vector<double>(d, v[0]);
        throw ConfigError("--score " + std::string(what) + " has " + std::to_string(v.size()) +
                          " entries for " + std::to_string(d) + "-dimensional data");
    };
    auto mean = expand(arg.mean, "mean");
    if (arg.variance.size() == 1) return std::make_unique<IsotropicGaussianScore>(std::move(mean), arg.variance[0]);
    return std::make_unique<DiagonalGaussianScore>(std::move(mean), expand(arg.variance, "variance"));
}

KernelSpec resolve_kernel(const KernelArg& arg, const SampleMatrix& distance_data) {
    const double order = arg.order.value_or(default_distance_order(arg.family));
    if (arg.family == KernelFamily::Indicator) return KernelSpec::indicator();
    if (arg.mode == KernelArg::Mode::Fixed) return {arg.family, arg.bandwidth, order};
    return {arg.family, median_bandwidth(distance_data, order), order};
}

std::vector<KernelFamily> collection_families(const KernelArg& arg, Command command) {
    if (!arg.families.empty()) return arg.families;
    // Stein kernels need differentiable members, so Laplace is swapped for IMQ.
    if (command == Command::Ksd) return {KernelFamily::Gaussian, KernelFamily::Imq};
    return default_collection_families();
}

json kernel_json(const KernelSpec& k) {
    return {{"family", std::string(to_string(k.family()))}, {"bandwidth", k.bandwidth()}, {"r", k.distance_order()}};
}

json choice_json(const KernelChoice& c) {
    if (!c.ky) return kernel_json(c.kx);
    return {{"x", kernel_json(c.kx)}, {"y", kernel_json(*c.ky)}};
}

std::string_view kind_name(StatisticKind k) {
    switch (k) {
        case StatisticKind::V: return "v";
        case StatisticKind::U: return "u";
        case StatisticKind::PairedU: return "paired-u";
        case StatisticKind::SecondOrderV: return "second-order-v";
        case StatisticKind::Incomplete: return "incomplete";
    }
    return "v";
}

std::string_view command_name(Command c) {
    switch (c) {
        case Command::Mmd: return "mmd";
        case Command::Hsic: return "hsic";
        case Command::Ksd: return "ksd";
    }
    return "mmd";
}

std::string_view pool_name(PoolKind k) {
    switch (k) {
        case PoolKind::Mean: return "mean";
        case PoolKind::Max: return "max";
        case PoolKind::Fuse: return "fuse";
    }
    return "mean";
}

// Mean of a literal core over the oracle's own pair listing.
template <typename Core>
double oracle_design_mean(const Design& design, std::size_t n, Core&& core) {
    const auto pairs = oracle_design_pairs(design, n);
    double s = 0.0;
    for (const auto& p : pairs) s += core(p.i, p.j);
    return s / static_cast<double>(pairs.size());
}

double oracle_value(const StatisticRequest& request, const KernelChoice& kernels, const StatisticInputs& inputs) {
    const OracleConfig cfg{};
    const SampleMatrix& x = *inputs.x;
    const KernelSpec& kx = kernels.kx;
    switch (request.discrepancy) {
        case Discrepancy::Mmd: {
            const SampleMatrix& y = *inputs.y;
            switch (request.kind) {
                case StatisticKind::V: return oracle_mmd_v_tuple(kx, x, y, cfg);
                case StatisticKind::U: return oracle_mmd_u_tuple(kx, x, y, cfg);
                case StatisticKind::PairedU: return oracle_mmd_u_paired(kx, x, y, cfg);
                default:
                    return oracle_design_mean(*request.design, x.rows(), [&](std::size_t i, std::size_t j) {
                        return mmd_core(kx, x.row(i), x.row(j), y.row(i), y.row(j));
                    });
            }
        }
        case Discrepancy::Hsic: {
            const PairedSample z(x, *inputs.y);
            const KernelSpec& ky = kernels.ky.value_or(kx);
            switch (request.kind) {
                case StatisticKind::V: return oracle_hsic_sums(kx, ky, z, cfg).v_fourth_order;
                case StatisticKind::U: return oracle_hsic_sums(kx, ky, z, cfg).u_tuple;
                case StatisticKind::SecondOrderV: return oracle_hsic_second_order(kx, ky, z, cfg);
                default: {
                    const std::size_t n = z.size();
                    return oracle_design_mean(*request.design, n, [&](std::size_t i, std::size_t j) {
                        return hsic_core(kx, ky, pair_at(z, i), pair_at(z, j), pair_at(z, (i + n / 2) % n),
                                         pair_at(z, (j + n / 2) % n));
                    });
                }
            }
        }
        case Discrepancy::Ksd:
        default:
            switch (request.kind) {
                case StatisticKind::V: return oracle_ksd_v(kx, *request.score, x, cfg);
                case StatisticKind::U: return oracle_ksd_u(kx, *request.score, x, cfg);
                default:
                    return oracle_design_mean(*request.design, x.rows(), [&](std::size_t i, std::size_t j) {
                        return oracle_stein_kernel(kx, *request.score, x.row(i), x.row(j));
                    });
            }
    }
}

RunOutcome execute(const RunConfig& cfg) {
    check_config(cfg);
    const Loaded data = load_inputs(cfg);
    const SampleMatrix& x = data.x;
    const SampleMatrix* y = data.y ? &*data.y : nullptr;

    std::unique_ptr<ScoreModel> score;
    if (cfg.command == Command::Ksd) score = make_score(*cfg.score, x.cols());

    StatisticRequest request;
    request.discrepancy = cfg.command == Command::Mmd    ? Discrepancy::Mmd
                          : cfg.command == Command::Hsic ? Discrepancy::Hsic
                                                         : Discrepancy::Ksd;
    request.kind = cfg.stat.kind;
    request.score = score.get();
    if (cfg.stat.kind == StatisticKind::Incomplete) {
        Design d = cfg.stat.design.value_or(Design{design::V{}});
        if (cfg.stat.equal_block_count) d = equal_blocks(x.rows(), *cfg.stat.equal_block_count);
        if (auto* r = std::get_if<design::R>(&d)) r->seed = cfg.seed;
        request.design = d;
    }
    const StatisticInputs inputs{&x, y};
    validate(request, inputs);

    // Kernels.
    std::optional<KernelCollection> collection;
    std::optional<KernelChoice> single;
    if (cfg.kernel.mode == KernelArg::Mode::Collection) {
        const auto families = collection_families(cfg.kernel, cfg.command);
        if (cfg.command == Command::Mmd) {
            collection = bandwidth_collection(SampleMatrix::vstack(x, *y), families);
        } else if (cfg.command == Command::Hsic) {
            collection = hsic_bandwidth_collection(x, *y, families, cfg.hsic_grid);
        } else {
            collection = bandwidth_collection(x, families);
        }
    } else if (cfg.command == Command::Mmd) {
        single = KernelChoice{resolve_kernel(cfg.kernel, SampleMatrix::vstack(x, *y)), std::nullopt};
    } else if (cfg.command == Command::Hsic) {
        single = KernelChoice{resolve_kernel(cfg.kernel, x), resolve_kernel(cfg.kernel_y.value_or(cfg.kernel), *y)};
    } else {
        single = KernelChoice{resolve_kernel(cfg.kernel, x), std::nullopt};
    }
    const bool pooled = collection.has_value() || cfg.pool.has_value() || cfg.normalize;
    if (!collection) collection = KernelCollection({*single});

    const ExecutionOptions options{cfg.workers, ExecutionOptions{}.materialize_cap};
    json report;
    report["command"] = command_name(cfg.command);
    report["statistic_kind"] = kind_name(request.kind);
    report["statistic"] = cfg.stat.text;
    const auto design_for_report = one_sample_design(request, inputs);
    switch (request.kind) {
        case StatisticKind::V: report["design"] = "v"; break;
        case StatisticKind::U: report["design"] = "u"; break;
        default: report["design"] = to_string(*design_for_report); break;
    }
    json kernels = json::array();
    for (const auto& c : collection->entries()) kernels.push_back(choice_json(c));
    report["kernels"] = kernels;

    std::vector<double> raw;
    std::vector<StatisticResult> stats;
    if (pooled) {
        const PooledResult p =
            adaptive_statistic(*collection, request, inputs, cfg.pool.value_or(PoolMethod::mean()), cfg.normalize,
                               options);
        raw = p.raw;
        stats = p.statistics;
        report["raw_values"] = p.raw;
        report["sigmas"] = cfg.normalize ? json(p.sigmas) : json(nullptr);
        report["normalized_values"] = p.normalized;
        report["pooled_value"] = p.value;
        json pooling = {{"method", pool_name(p.method.kind)}, {"argmax", p.argmax}};
        pooling["nu"] = p.nu ? json(*p.nu) : json(nullptr);
        report["pooling"] = pooling;
    } else {
        const StatisticResult r = compute_statistic(request, *single, inputs, options);
        raw = {r.value};
        stats = {r};
        report["raw_values"] = raw;
        report["sigmas"] = nullptr;
        report["value"] = r.value;
    }
    bool clamped = false;
    for (const auto& s : stats) clamped = clamped || s.clamped;
    report["clamped"] = clamped;
    report["cardinality"] = stats.front().cardinality;
    report["seed"] = cfg.seed;
    switch (cfg.command) {
        case Command::Mmd:
            report["m"] = x.rows();
            report["n"] = y->rows();
            report["d"] = x.cols();
            break;
        case Command::Hsic:
            report["n"] = x.rows();
            report["m"] = nullptr;
            report["d"] = x.cols();
            report["d_y"] = y->cols();
            break;
        case Command::Ksd:
            report["n"] = x.rows();
            report["m"] = nullptr;
            report["d"] = x.cols();
            break;
    }
    if (!collection->warnings().empty()) report["warnings"] = collection->warnings();

    RunOutcome outcome;
    if (cfg.verify) {
        const std::size_t largest = std::max(x.rows(), y ? y->rows() : std::size_t{0});
        if (largest > OracleConfig{}.max_n) {
            report["verify_skipped"] = "inputs exceed the oracle cap of " + std::to_string(OracleConfig{}.max_n) +
                                       " rows";
        } else {
            std::vector<double> oracle;
            double worst = 0.0;
            for (std::size_t k = 0; k < collection->size(); ++k) {
                oracle.push_back(oracle_value(request, (*collection)[k], inputs));
                worst = std::max(worst, std::abs(oracle.back() - raw[k]));
            }
            report["oracle_value"] = oracle.size() == 1 ? json(oracle.front()) : json(oracle);
            report["abs_diff"] = worst;
            if (!(worst <= 1e-8)) {
                outcome.exit_code = kExitVerify;
                outcome.error = "oracle disagreement: abs_diff = " + std::to_string(worst);
            }
        }
    }
    outcome.report = std::move(report);
    return outcome;
}

}  // namespace

RunOutcome run(const RunConfig& config) {
    RunOutcome out;
    try {
        return execute(config);
    } catch (const ConfigError& e) {
        out.exit_code = kExitConfig;
        out.error = e.what();
    } catch (const DataError& e) {
        out.exit_code = kExitData;
        out.error = e.what();
    } catch (const DegenerateNormalizerError& e) {
        out.exit_code = kExitDegenerate;
        out.error = e.what();
    }
    return out;
}

int main_entry(int argc, const char* const* argv) {
    RunConfig cfg;
    try {
        cfg = parse_args(argc, argv);
    } catch (const ParseExit& e) {
        return e.code;
    } catch (const ConfigError& e) {
        std::cerr << "kdisc: " << e.what() << "\n";
        return kExitConfig;
    }
    const RunOutcome outcome = run(cfg);
    if (!outcome.report.is_null()) {
        const std::string text = outcome.report.dump(2) + "\n";
        if (cfg.output) {
            std::ofstream out(*cfg.output, std::ios::binary);
            if (!out) {
                std::cerr << "kdisc: cannot write " << cfg.output->string() << "\n";
                return kExitData;
            }
            out << text;
        } else {
            std::cout << text;
        }
    }
    if (!outcome.error.empty()) std::cerr << "kdisc: " << outcome.error << "\n";
    return outcome.exit_code;
}

}  // namespace kdisc::cli
