#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "repack/auction.hpp"
#include "repack/instance_io.hpp"
#include "repack/metrics.hpp"
#include "repack/vcg.hpp"

namespace repack {

/// One (scoring rule, feasibility checker) combination.
struct Cell {
  ScoringRule scoring = ScoringRule::Fcc;
  CheckerKind checker = CheckerKind::Sat;

  /// "fcc-sat", "unscored-greedy", ...
  std::string name() const;
  auto operator<=>(const Cell&) const = default;
};

/// Accepts "fcc-sat" or "fcc:sat".
Cell parse_cell(std::string_view text);
/// Comma-separated list of cells.
std::vector<Cell> parse_cells(std::string_view list);

/// fcc-sat, fcc-greedy, unscored-sat.
std::vector<Cell> default_cells();
/// default_cells() plus unscored-greedy and the unscored-exhaustive baseline.
/// The exhaustive checker only handles small instances.
std::vector<Cell> full_grid_cells();

/// Seeds are derived from master_seed:
///   instance  derive_seed(master, "instance")      (unless generator.seed is pinned)
///   values    derive_seed(master, "values", p)
///   auction   derive_seed(master, "auction", p)    (shared by all cells of profile p)
struct ExperimentConfig {
  std::optional<std::filesystem::path> instance_path;
  GeneratorParams generator;
  bool generator_seed_pinned = false;
  ClearingTarget clearing_target{Channel{29}};
  std::uint32_t n_value_profiles = 5;
  ValueSamplerParams value_sampler;
  std::vector<Cell> cells = default_cells();
  double fcc_opening_clock = kDefaultFccOpeningClock;
  double unscored_opening_clock = kDefaultUnscoredOpeningClock;
  std::uint64_t budget_steps = kDefaultStepBudget;
  std::optional<double> budget_seconds;
  std::uint64_t master_seed = 1;
  std::filesystem::path out_dir = "results";
  VcgOptions vcg;
  unsigned threads = 1;

  void validate() const;
  double opening_clock(ScoringRule r) const;
  Budget budget() const;
};

/// JSON config; unknown keys are rejected, missing keys keep defaults.
ExperimentConfig parse_config(std::string_view json_text);
ExperimentConfig load_config(const std::filesystem::path& path);
std::string config_to_json(const ExperimentConfig& config);

Instance build_instance(const ExperimentConfig& config);
std::uint64_t value_seed(const ExperimentConfig& config, std::uint32_t profile);
std::uint64_t auction_seed(const ExperimentConfig& config, std::uint32_t profile);

struct CellRun {
  Cell cell;
  std::optional<AuctionOutcome> outcome;
  std::string error;
};

struct ProfileRun {
  std::uint32_t profile = 0;
  ValueProfile values;
  /// VCG per distinct participant set; cells share it when their
  /// participants coincide.
  std::map<std::vector<StationId>, VcgOutcome> vcg;
  std::map<std::vector<StationId>, std::string> vcg_errors;
  std::vector<CellRun> cells;
};

struct ExperimentResult {
  Instance instance;
  std::vector<ProfileRun> profiles;
  /// Sorted by cell name, then profile.
  std::vector<ComparisonRecord> records;

  bool all_comparable() const;
};

ExperimentResult run_experiment(const ExperimentConfig& config);

/// Comparison of one auction outcome against the VCG outcome computed for
/// the same participant set.
ComparisonRecord compare(const AuctionOutcome& auction, const VcgOutcome& vcg,
                         const ValueProfile& values, std::string cell, std::uint32_t profile);

std::string records_csv(const std::vector<ComparisonRecord>& records);
std::vector<ComparisonRecord> parse_records_csv(std::string_view text);

std::string outcome_json(const AuctionOutcome& outcome, int indent = -1);
std::string vcg_json(const VcgOutcome& outcome, int indent = -1);
std::string run_json(const ExperimentConfig& config, const ExperimentResult& result);

/// Writes records.csv, run.json and instance.txt into config.out_dir.
void write_run_outputs(const ExperimentConfig& config, const ExperimentResult& result);

struct CellSummary {
  std::string cell;
  std::size_t count = 0;
  double mean_cost_fraction = 0.0;
  double mean_value_loss_ratio = 0.0;
  double mean_cost = 0.0;
  double mean_value_loss = 0.0;
};

struct Summary {
  std::vector<CellSummary> cells;  // by cell name
  /// Cross-cell aggregates keyed by name; only present when both cells exist.
  std::map<std::string, double> aggregates;
};

Summary summarize(const std::vector<ComparisonRecord>& records);
std::string summary_text(const Summary& summary);
std::string summary_json(const Summary& summary);

/// `cell,profile,cost_fraction,value_loss_ratio,timeouts,rounds`, one row per
/// comparable record plus a "vcg" reference row at (1, 1) per profile.
std::string scatter_csv(const std::vector<ComparisonRecord>& records);

}  // namespace repack
