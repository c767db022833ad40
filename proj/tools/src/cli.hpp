#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "kdisc/designs.hpp"
#include "kdisc/estimators.hpp"
#include "kdisc/kernels.hpp"
#include "kdisc/pooling.hpp"
#include "kdisc/sample.hpp"

namespace kdisc::cli {

enum class Command { Mmd, Hsic, Ksd };

enum ExitCode : int {
    kExitOk = 0,
    kExitConfig = 2,
    kExitData = 3,
    kExitDegenerate = 4,
    kExitVerify = 5,
};

/// --kernel: "family:bandwidth[:r]", "family:median", "median" (Gaussian),
/// or "collection[:family,family,...]".
struct KernelArg {
    enum class Mode { Fixed, Median, Collection };
    Mode mode = Mode::Median;
    KernelFamily family = KernelFamily::Gaussian;
    double bandwidth = 1.0;
    std::optional<double> order;
    std::vector<KernelFamily> families;
};

/// --stat: v | u | paired-u | second-order-v | l | d:r | b:b | x:n1 | r:m[:with-replacement].
/// Design parameters that depend on n (b blocks, r seed) are resolved later.
struct StatArg {
    StatisticKind kind = StatisticKind::V;
    std::string text = "v";
    std::optional<Design> design;
    std::optional<std::size_t> equal_block_count;
};

/// --score gaussian:MEAN:VAR with scalars or comma-separated per-coordinate lists.
struct ScoreArg {
    std::vector<double> mean;
    std::vector<double> variance;
};

struct RunConfig {
    Command command = Command::Mmd;
    std::vector<std::filesystem::path> inputs;
    bool header = false;
    /// HSIC single-file mode: the first `split` columns are X.
    std::optional<std::size_t> split;
    KernelArg kernel;
    std::optional<KernelArg> kernel_y;
    StatArg stat;
    std::optional<PoolMethod> pool;
    bool normalize = false;
    std::optional<ScoreArg> score;
    std::uint64_t seed = 0;
    std::optional<std::filesystem::path> output;
    bool verify = false;
    /// Bandwidths per stream in auto HSIC collections.
    std::size_t hsic_grid = 10;
    unsigned workers = 0;
};

struct RunOutcome {
    int exit_code = kExitOk;
    nlohmann::json report;
    std::string error;
};

[[nodiscard]] KernelArg parse_kernel_arg(const std::string& text);
[[nodiscard]] StatArg parse_stat_arg(const std::string& text);
[[nodiscard]] PoolMethod parse_pool_arg(const std::string& text);
[[nodiscard]] ScoreArg parse_score_arg(const std::string& text);

/// Reads a numeric CSV table. Dot decimals only, independent of the locale.
[[nodiscard]] SampleMatrix load_csv(const std::filesystem::path& path, bool has_header);
[[nodiscard]] SampleMatrix parse_csv(const std::string& text, bool has_header, const std::string& source = "input");

/// Thrown by parse_args after CLI11 has printed help or a usage error.
struct ParseExit {
    int code;
};

/// Parses argv into a RunConfig. Throws ParseExit for help and usage
/// errors, ConfigError for malformed flag values.
[[nodiscard]] RunConfig parse_args(int argc, const char* const* argv);

/// Executes one configured run and maps errors to exit codes.
[[nodiscard]] RunOutcome run(const RunConfig& config);

/// Full command line round trip used by main(): parse, run, write the
/// report. Returns the process exit code.
int main_entry(int argc, const char* const* argv);

}  // namespace kdisc::cli
