// repack: generate instances and value profiles, run the mechanism grid,
// compute VCG outcomes and summarize results.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "repack/errors.hpp"
#include "repack/experiment.hpp"
#include "repack/instance_io.hpp"
#include "repack/vcg.hpp"

namespace {

using namespace repack;

void emit(const std::optional<std::string>& path, const std::string& text) {
  if (path) {
    write_text_file(*path, text);
  } else {
    std::cout << text;
  }
}

struct GenerateArgs {
  std::optional<std::string> config;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> n_stations;
  std::optional<int> channel_lo;
  std::optional<int> channel_hi;
  std::optional<double> co_radius;
  std::optional<double> adj_radius;
  std::optional<std::string> out;
};

int cmd_generate(const GenerateArgs& a) {
  GeneratorParams g;
  if (a.config) g = load_config(*a.config).generator;
  if (a.seed) g.seed = *a.seed;
  if (a.n_stations) g.n_stations = *a.n_stations;
  if (a.channel_lo) g.channel_lo = Channel{*a.channel_lo};
  if (a.channel_hi) g.channel_hi = Channel{*a.channel_hi};
  if (a.co_radius) g.co_channel_radius = *a.co_radius;
  if (a.adj_radius) g.adjacent_channel_radius = *a.adj_radius;
  emit(a.out, serialize_instance(generate_instance(g)));
  return 0;
}

struct ValuesArgs {
  std::string instance;
  std::uint64_t seed = 1;
  ValueSamplerParams sampler;
  std::optional<std::string> out;
};

int cmd_values(ValuesArgs a) {
  a.sampler.seed = a.seed;
  emit(a.out, serialize_value_profile(sample_values(read_instance_file(a.instance), a.sampler)));
  return 0;
}

struct RunArgs {
  std::optional<std::string> config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<std::string> cells;
  std::optional<std::uint64_t> budget_steps;
  std::optional<double> budget_seconds;
  std::optional<std::string> instance;
  std::optional<std::uint32_t> profiles;
  std::optional<unsigned> threads;
  bool quiet = false;
};

int cmd_run(const RunArgs& a) {
  ExperimentConfig c = a.config ? load_config(*a.config) : ExperimentConfig{};
  if (a.seed) c.master_seed = *a.seed;
  if (a.out) c.out_dir = *a.out;
  if (a.cells) c.cells = parse_cells(*a.cells);
  if (a.budget_steps) c.budget_steps = *a.budget_steps;
  if (a.budget_seconds) c.budget_seconds = *a.budget_seconds;
  if (a.instance) c.instance_path = *a.instance;
  if (a.profiles) c.n_value_profiles = *a.profiles;
  if (a.threads) {
    c.threads = *a.threads;
    c.vcg.threads = std::max(1U, *a.threads);
  }
  c.validate();

  ExperimentResult result = run_experiment(c);
  write_run_outputs(c, result);
  if (!a.quiet) std::cout << summary_text(summarize(result.records));

  int status = 0;
  for (const auto& r : result.records) {
    if (!r.comparable) {
      std::cerr << "incomparable: " << r.cell << " profile " << r.profile << ": " << r.note << '\n';
      status = 2;
    }
  }
  return status;
}

struct VcgArgs {
  std::string instance;
  std::string values;
  int clearing_target = 29;
  std::string scoring = "fcc";
  std::optional<double> opening_clock;
  bool everyone = false;
  std::uint64_t node_limit = VcgOptions{}.node_limit;
  unsigned threads = 1;
  std::optional<std::string> out;
  std::optional<std::string> lp;
};

int cmd_vcg(const VcgArgs& a) {
  const Instance inst = read_instance_file(a.instance);
  const ValueProfile values = read_value_profile_file(a.values);
  const ClearingTarget ct{Channel{a.clearing_target}};

  Participation part;
  if (a.everyone) {
    for (const auto& s : inst.stations()) part.participants.push_back(s.id);
  } else {
    const ScoringRule rule = parse_scoring(a.scoring);
    const double c0 = a.opening_clock.value_or(default_opening_clock(rule));
    part = determine_participants(inst, values, compute_volumes(rule, inst, ct), c0);
  }

  if (a.lp) {
    std::ofstream lp(*a.lp);
    if (!lp) throw Error("cannot write " + *a.lp);
    write_lp(lp, inst, values, part.participants, part.non_participants, ct);
  }

  VcgOptions opts;
  opts.node_limit = a.node_limit;
  opts.threads = std::max(1U, a.threads);
  const VcgOutcome v = vcg_outcome(inst, values, part.participants, part.non_participants, ct, opts);
  emit(a.out, vcg_json(v, 2) + "\n");
  return 0;
}

struct ReportArgs {
  std::string records;
  std::optional<std::string> out;
  bool json = false;
};

int cmd_report(const ReportArgs& a) {
  std::filesystem::path path = a.records;
  if (std::filesystem::is_directory(path)) path /= "records.csv";
  const auto records = parse_records_csv(read_text_file(path));
  if (records.empty()) throw StructuralError("no records in " + path.string());
  const Summary s = summarize(records);
  if (a.out) {
    const std::filesystem::path dir = *a.out;
    write_text_file(dir / "summary.txt", summary_text(s));
    write_text_file(dir / "summary.json", summary_json(s));
    write_text_file(dir / "scatter.csv", scatter_csv(records));
  }
  std::cout << (a.json ? summary_json(s) : summary_text(s));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Descending clock spectrum auction simulator with a VCG benchmark"};
  app.require_subcommand(1);

  GenerateArgs gen;
  auto* generate = app.add_subcommand("generate", "Write a random geometric instance");
  generate->add_option("--config", gen.config, "Take generator parameters from a run config");
  generate->add_option("--seed", gen.seed, "Generator seed");
  generate->add_option("-n,--stations", gen.n_stations, "Number of stations");
  generate->add_option("--channel-lo", gen.channel_lo, "Lowest channel");
  generate->add_option("--channel-hi", gen.channel_hi, "Highest channel");
  generate->add_option("--co-radius", gen.co_radius, "Co-channel interference radius");
  generate->add_option("--adj-radius", gen.adj_radius, "Adjacent-channel interference radius");
  generate->add_option("--out", gen.out, "Output file (default stdout)");

  ValuesArgs val;
  auto* values = app.add_subcommand("values", "Sample a value profile for an instance");
  values->add_option("--instance", val.instance, "Instance file")->required();
  values->add_option("--seed", val.seed, "Sampler seed");
  values->add_option("--log-mean", val.sampler.log_mean, "Mean of log value multiplier");
  values->add_option("--log-sd", val.sampler.log_sd, "Std-dev of log value multiplier");
  values->add_option("--population-exponent", val.sampler.population_exponent,
                     "Exponent on population");
  values->add_option("--out", val.out, "Output file (default stdout)");

  RunArgs run;
  auto* run_cmd = app.add_subcommand("run", "Run the experiment grid and write records");
  run_cmd->add_option("--config", run.config, "JSON run config");
  run_cmd->add_option("--seed", run.seed, "Master seed (overrides config)");
  run_cmd->add_option("--out", run.out, "Output directory");
  run_cmd->add_option("--cells", run.cells, "Cells, e.g. fcc-sat,fcc-greedy,unscored-sat");
  run_cmd->add_option("--budget-steps", run.budget_steps, "Per-check search step budget");
  run_cmd->add_option("--budget-seconds", run.budget_seconds,
                      "Per-check wall-clock budget (not reproducible)");
  run_cmd->add_option("--instance", run.instance, "Use this instance instead of generating one");
  run_cmd->add_option("--profiles", run.profiles, "Number of value profiles");
  run_cmd->add_option("--threads", run.threads, "Worker threads");
  run_cmd->add_flag("-q,--quiet", run.quiet, "Do not print the summary");

  VcgArgs vcg;
  auto* vcg_cmd = app.add_subcommand("vcg", "Compute the VCG outcome for one value profile");
  vcg_cmd->add_option("--instance", vcg.instance, "Instance file")->required();
  vcg_cmd->add_option("--values", vcg.values, "Value profile file")->required();
  vcg_cmd->add_option("--clearing-target", vcg.clearing_target, "Channels below this stay usable");
  vcg_cmd->add_option("--scoring", vcg.scoring, "Scoring rule deciding participation (fcc|unscored)");
  vcg_cmd->add_option("--opening-clock", vcg.opening_clock, "Opening clock for participation");
  vcg_cmd->add_flag("--all-participate", vcg.everyone, "Treat every station as a seller");
  vcg_cmd->add_option("--node-limit", vcg.node_limit, "Branch-and-bound node limit");
  vcg_cmd->add_option("--threads", vcg.threads, "Threads for pricing");
  vcg_cmd->add_option("--out", vcg.out, "Output JSON file (default stdout)");
  vcg_cmd->add_option("--lp", vcg.lp, "Also write the packing problem as an LP model");

  ReportArgs rep;
  auto* report = app.add_subcommand("report", "Summarize records and write scatter data");
  report->add_option("records", rep.records, "records.csv or a run directory")->required();
  report->add_option("--out", rep.out, "Write summary.txt, summary.json and scatter.csv here");
  report->add_flag("--json", rep.json, "Print the summary as JSON");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*generate) return cmd_generate(gen);
    if (*values) return cmd_values(val);
    if (*run_cmd) return cmd_run(run);
    if (*vcg_cmd) return cmd_vcg(vcg);
    if (*report) return cmd_report(rep);
  } catch (const repack::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
