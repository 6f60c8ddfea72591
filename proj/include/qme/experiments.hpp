// experiments.hpp: Config-driven experiment runners behind the qme_cli tool
//
// Each run takes one JSON document and produces CSV tables plus named JSON
// documents, along with embedded invariant checks. Outputs are deterministic
// for a given config and seed.

#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "qme/dicke.hpp"
#include "qme/liouville.hpp"
#include "qme/mpemba.hpp"

namespace qme::experiments {

inline constexpr int kCsvFormatVersion = 1;

enum class Experiment { Fig1Heatmap, CoherenceRR, EntanglementRR, TraceRR, TheoremScan, SpectrumDump };

std::string_view to_string(Experiment e);
Experiment experiment_from_string(std::string_view name);
const std::vector<Experiment>& all_experiments();

struct Table {
    std::string name;  // file stem
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};

struct Check {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct RunResult {
    Experiment experiment = Experiment::SpectrumDump;
    std::uint64_t seed = 0;
    std::uint64_t config_hash = 0;
    std::vector<Table> tables;
    // Named JSON documents written as <name>.json (verdicts, spectrum summaries).
    std::vector<std::pair<std::string, nlohmann::json>> documents;
    std::vector<Check> checks;
    std::vector<std::string> notes;

    bool all_passed() const;
};

struct RunOptions {
    std::optional<std::uint64_t> seed_override;
    unsigned threads = 0;  // 0: default_threads()
};

// QME_THREADS if set to a positive integer, else the hardware concurrency (at least 1).
unsigned default_threads();

// FNV-1a over the compact JSON dump.
std::uint64_t config_hash(const nlohmann::json& cfg);

// Throws std::invalid_argument for malformed or invalid configs.
RunResult run(Experiment e, nlohmann::json cfg, const RunOptions& opts = {});

// "# qme-csv v1 experiment=... config_hash=0x... seed=..." then header, then rows at 17 significant digits.
std::string format_csv(const Table& table, const RunResult& result);

// Writes <name>.csv per table and <name>.json per document into dir.
std::vector<std::filesystem::path> write_outputs(const RunResult& result, const std::filesystem::path& dir);

// Runs fn(i) for i in [0, n) on a pool of `threads` workers.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& fn);

// ---------------------------------------------------------------------------
// Config helpers, exposed for tests and the acceptance binary.

dicke::DickeParams parse_dicke(const nlohmann::json& j);
std::vector<double> parse_time_grid(const nlohmann::json& j);  // {"t_end", "dt"} or {"t_end", "count"}
// {"start_pi", "stop_pi", "count"} over [start, stop) in units of pi, or {"values_pi": [...]}.
std::vector<double> parse_angle_grid(const nlohmann::json& j);
std::vector<double> parse_value_grid(const nlohmann::json& j);  // {"values": [...]} or {"start","stop","count"} inclusive

// Maximum trace distance between spectral evolution and RK4 at the given times.
double ode_discrepancy(const liouville::LindbladGenerator& gen, const liouville::LiouvilleSpectrum& spec,
                       const DensityMatrix& rho0, const std::vector<double>& times, double dt);

// Maximally entangled state sum_{i<k} |i i> / sqrt(k) on C^d (x) C^d.
DensityMatrix max_entangled_state(Index d, Index k);

} // namespace qme::experiments
