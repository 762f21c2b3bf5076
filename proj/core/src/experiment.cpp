#include "repack/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <set>
#include <sstream>

#include "json.hpp"
#include "repack/errors.hpp"
#include "repack/random.hpp"

namespace repack {

using ordered_json = nlohmann::ordered_json;

std::string Cell::name() const {
  return std::string(to_string(scoring)) + "-" + std::string(to_string(checker));
}

Cell parse_cell(std::string_view text) {
  auto sep = text.find_first_of("-:");
  if (sep == std::string_view::npos) {
    throw StructuralError("cell '" + std::string(text) + "' must look like <scoring>-<checker>");
  }
  return Cell{parse_scoring(text.substr(0, sep)), parse_checker(text.substr(sep + 1))};
}

std::vector<Cell> parse_cells(std::string_view list) {
  std::vector<Cell> out;
  while (!list.empty()) {
    auto comma = list.find(',');
    auto item = list.substr(0, comma);
    while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
    while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
    if (!item.empty()) out.push_back(parse_cell(item));
    if (comma == std::string_view::npos) break;
    list.remove_prefix(comma + 1);
  }
  return out;
}

std::vector<Cell> default_cells() {
  return {{ScoringRule::Fcc, CheckerKind::Sat},
          {ScoringRule::Fcc, CheckerKind::Greedy},
          {ScoringRule::Unscored, CheckerKind::Sat}};
}

std::vector<Cell> full_grid_cells() {
  auto cells = default_cells();
  cells.push_back({ScoringRule::Unscored, CheckerKind::Greedy});
  cells.push_back({ScoringRule::Unscored, CheckerKind::Exhaustive});
  return cells;
}

void ExperimentConfig::validate() const {
  if (cells.empty()) throw StructuralError("experiment needs at least one cell");
  if (n_value_profiles < 1) throw StructuralError("experiment needs at least one value profile");
  std::set<Cell> unique(cells.begin(), cells.end());
  if (unique.size() != cells.size()) throw StructuralError("duplicate cell in experiment");
  if (!instance_path) generator.validate();
  value_sampler.validate();
  for (double c0 : {fcc_opening_clock, unscored_opening_clock}) {
    if (!(c0 > 0.0) || !std::isfinite(c0)) throw StructuralError("opening clocks must be positive");
  }
  if (budget_steps == 0 && !budget_seconds) throw StructuralError("budget needs a limit");
}

double ExperimentConfig::opening_clock(ScoringRule r) const {
  return r == ScoringRule::Fcc ? fcc_opening_clock : unscored_opening_clock;
}

Budget ExperimentConfig::budget() const {
  Budget b;
  if (budget_steps > 0) b.step_limit = budget_steps;
  if (budget_seconds) {
    b.deadline = std::chrono::duration_cast<std::chrono::nanoseconds>(
        std::chrono::duration<double>(*budget_seconds));
  }
  return b;
}

namespace {

template <typename T>
void read_field(const ordered_json& obj, const char* key, T& into) {
  if (auto it = obj.find(key); it != obj.end() && !it->is_null()) into = it->get<T>();
}

void reject_unknown(const ordered_json& obj, std::initializer_list<std::string_view> known,
                    std::string_view where) {
  for (const auto& [key, value] : obj.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      throw StructuralError("unknown key '" + key + "' in " + std::string(where));
    }
  }
}

}  // namespace

ExperimentConfig parse_config(std::string_view json_text) {
  ordered_json j;
  try {
    j = ordered_json::parse(json_text.begin(), json_text.end());
  } catch (const nlohmann::json::exception& e) {
    throw StructuralError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw StructuralError("config must be a JSON object");
  reject_unknown(j,
                 {"instance", "generator", "clearing_target", "n_value_profiles", "value_sampler",
                  "cells", "opening_clock", "budget_steps", "budget_seconds", "master_seed", "out",
                  "vcg_node_limit", "vcg_subproblem_steps", "threads"},
                 "config");
  ExperimentConfig c;
  try {
    if (auto it = j.find("instance"); it != j.end() && !it->is_null()) {
      c.instance_path = it->get<std::string>();
    }
    if (auto it = j.find("generator"); it != j.end()) {
      const auto& g = *it;
      reject_unknown(g,
                     {"n_stations", "channel_lo", "channel_hi", "co_channel_radius",
                      "adjacent_channel_radius", "seed"},
                     "generator");
      read_field(g, "n_stations", c.generator.n_stations);
      read_field(g, "channel_lo", c.generator.channel_lo.number);
      read_field(g, "channel_hi", c.generator.channel_hi.number);
      read_field(g, "co_channel_radius", c.generator.co_channel_radius);
      read_field(g, "adjacent_channel_radius", c.generator.adjacent_channel_radius);
      if (g.contains("seed")) {
        c.generator.seed = g.at("seed").get<std::uint64_t>();
        c.generator_seed_pinned = true;
      }
    }
    read_field(j, "clearing_target", c.clearing_target.bar.number);
    read_field(j, "n_value_profiles", c.n_value_profiles);
    if (auto it = j.find("value_sampler"); it != j.end()) {
      reject_unknown(*it, {"log_mean", "log_sd", "population_exponent"}, "value_sampler");
      read_field(*it, "log_mean", c.value_sampler.log_mean);
      read_field(*it, "log_sd", c.value_sampler.log_sd);
      read_field(*it, "population_exponent", c.value_sampler.population_exponent);
    }
    if (auto it = j.find("cells"); it != j.end()) {
      c.cells.clear();
      for (const auto& cell : *it) c.cells.push_back(parse_cell(cell.get<std::string>()));
    }
    if (auto it = j.find("opening_clock"); it != j.end()) {
      reject_unknown(*it, {"fcc", "unscored"}, "opening_clock");
      read_field(*it, "fcc", c.fcc_opening_clock);
      read_field(*it, "unscored", c.unscored_opening_clock);
    }
    read_field(j, "budget_steps", c.budget_steps);
    if (auto it = j.find("budget_seconds"); it != j.end() && !it->is_null()) {
      c.budget_seconds = it->get<double>();
    }
    read_field(j, "master_seed", c.master_seed);
    if (auto it = j.find("out"); it != j.end()) c.out_dir = it->get<std::string>();
    read_field(j, "vcg_node_limit", c.vcg.node_limit);
    if (auto it = j.find("vcg_subproblem_steps"); it != j.end()) {
      c.vcg.subproblem_budget = Budget::steps(it->get<std::uint64_t>());
    }
    read_field(j, "threads", c.threads);
  } catch (const nlohmann::json::exception& e) {
    throw StructuralError(std::string("bad config field: ") + e.what());
  }
  c.vcg.threads = std::max(1U, c.threads);
  c.validate();
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  ExperimentConfig c = parse_config(read_text_file(path));
  if (c.instance_path && c.instance_path->is_relative()) {
    c.instance_path = path.parent_path() / *c.instance_path;
  }
  return c;
}

std::string config_to_json(const ExperimentConfig& c) {
  ordered_json j;
  j["instance"] = c.instance_path ? ordered_json(c.instance_path->generic_string()) : ordered_json();
  ordered_json g;
  g["n_stations"] = c.generator.n_stations;
  g["channel_lo"] = c.generator.channel_lo.number;
  g["channel_hi"] = c.generator.channel_hi.number;
  g["co_channel_radius"] = c.generator.co_channel_radius;
  g["adjacent_channel_radius"] = c.generator.adjacent_channel_radius;
  if (c.generator_seed_pinned) g["seed"] = c.generator.seed;
  j["generator"] = g;
  j["clearing_target"] = c.clearing_target.bar.number;
  j["n_value_profiles"] = c.n_value_profiles;
  j["value_sampler"] = {{"log_mean", c.value_sampler.log_mean},
                        {"log_sd", c.value_sampler.log_sd},
                        {"population_exponent", c.value_sampler.population_exponent}};
  ordered_json cells = ordered_json::array();
  for (const auto& cell : c.cells) cells.push_back(cell.name());
  j["cells"] = cells;
  j["opening_clock"] = {{"fcc", c.fcc_opening_clock}, {"unscored", c.unscored_opening_clock}};
  j["budget_steps"] = c.budget_steps;
  j["budget_seconds"] = c.budget_seconds ? ordered_json(*c.budget_seconds) : ordered_json();
  j["master_seed"] = c.master_seed;
  j["out"] = c.out_dir.generic_string();
  j["vcg_node_limit"] = c.vcg.node_limit;
  j["vcg_subproblem_steps"] = c.vcg.subproblem_budget.step_limit.value_or(0);
  j["threads"] = c.threads;
  return j.dump(2) + "\n";
}

Instance build_instance(const ExperimentConfig& config) {
  if (config.instance_path) return read_instance_file(*config.instance_path);
  GeneratorParams g = config.generator;
  if (!config.generator_seed_pinned) g.seed = derive_seed(config.master_seed, "instance");
  return generate_instance(g);
}

std::uint64_t value_seed(const ExperimentConfig& config, std::uint32_t profile) {
  return derive_seed(config.master_seed, "values", profile);
}

std::uint64_t auction_seed(const ExperimentConfig& config, std::uint32_t profile) {
  return derive_seed(config.master_seed, "auction", profile);
}

bool ExperimentResult::all_comparable() const {
  return std::all_of(records.begin(), records.end(),
                     [](const ComparisonRecord& r) { return r.comparable; });
}

ComparisonRecord compare(const AuctionOutcome& auction, const VcgOutcome& vcg,
                         const ValueProfile& values, std::string cell, std::uint32_t profile) {
  ComparisonRecord r;
  r.cell = std::move(cell);
  r.profile = profile;
  std::vector<StationId> auction_winners;
  for (const auto& [s, p] : auction.winners) auction_winners.push_back(s);
  r.value_loss_auction = value_loss(auction_winners, values);
  r.value_loss_optimal = value_loss(vcg.winners, values);
  r.value_loss_ratio = value_loss_ratio(r.value_loss_auction, r.value_loss_optimal);
  r.cost_auction = cost(auction.winners);
  r.cost_vcg = vcg.cost();
  r.cost_fraction = cost_fraction(r.cost_auction, r.cost_vcg);
  r.checker_timeout_count = auction.timeout_count;
  r.rounds = auction.round_count();
  return r;
}

namespace {

ProfileRun run_profile(const ExperimentConfig& config, const Instance& inst, std::uint32_t p,
                       std::vector<ComparisonRecord>& records) {
  ProfileRun run;
  run.profile = p;
  ValueSamplerParams sampler = config.value_sampler;
  sampler.seed = value_seed(config, p);
  run.values = sample_values(inst, sampler);

  for (const Cell& cell : config.cells) {
    CellRun cr;
    cr.cell = cell;
    AuctionConfig ac;
    ac.scoring = cell.scoring;
    ac.checker = cell.checker;
    ac.opening_clock = config.opening_clock(cell.scoring);
    ac.budget = config.budget();
    ac.seed = auction_seed(config, p);
    ac.clearing_target = config.clearing_target;
    try {
      cr.outcome = run_auction(inst, run.values, ac);
    } catch (const ConsistencyError&) {
      throw;
    } catch (const Error& e) {
      cr.error = e.what();
    }
    run.cells.push_back(std::move(cr));
  }

  for (const CellRun& cr : run.cells) {
    ComparisonRecord rec;
    rec.cell = cr.cell.name();
    rec.profile = p;
    if (!cr.outcome) {
      rec.comparable = false;
      rec.note = "auction failed: " + cr.error;
      records.push_back(std::move(rec));
      continue;
    }
    const auto& key = cr.outcome->participants;
    if (!run.vcg.contains(key) && !run.vcg_errors.contains(key)) {
      try {
        run.vcg.emplace(key, vcg_outcome(inst, run.values, cr.outcome->participants,
                                         cr.outcome->non_participants, config.clearing_target,
                                         config.vcg));
      } catch (const ConsistencyError&) {
        throw;
      } catch (const Error& e) {
        run.vcg_errors.emplace(key, e.what());
      }
    }
    if (auto err = run.vcg_errors.find(key); err != run.vcg_errors.end()) {
      rec.comparable = false;
      rec.note = "vcg failed: " + err->second;
      rec.checker_timeout_count = cr.outcome->timeout_count;
      rec.rounds = cr.outcome->round_count();
      records.push_back(std::move(rec));
      continue;
    }
    records.push_back(compare(*cr.outcome, run.vcg.at(key), run.values, rec.cell, p));
  }
  return run;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& config) {
  config.validate();
  ExperimentResult result;
  result.instance = build_instance(config);

  const std::uint32_t n = config.n_value_profiles;
  std::vector<ProfileRun> runs(n);
  std::vector<std::vector<ComparisonRecord>> per_profile(n);
  const unsigned width = std::max(1U, config.threads);
  for (std::uint32_t start = 0; start < n; start += width) {
    const std::uint32_t stop = std::min<std::uint32_t>(n, start + width);
    if (width == 1) {
      runs[start] = run_profile(config, result.instance, start, per_profile[start]);
      continue;
    }
    std::vector<std::future<ProfileRun>> pending;
    for (std::uint32_t p = start; p < stop; ++p) {
      pending.push_back(std::async(std::launch::async, [&, p] {
        return run_profile(config, result.instance, p, per_profile[p]);
      }));
    }
    for (std::uint32_t p = start; p < stop; ++p) runs[p] = pending[p - start].get();
  }

  result.profiles = std::move(runs);
  for (auto& recs : per_profile) {
    for (auto& r : recs) result.records.push_back(std::move(r));
  }
  std::stable_sort(result.records.begin(), result.records.end(),
                   [](const ComparisonRecord& a, const ComparisonRecord& b) {
                     if (a.cell != b.cell) return a.cell < b.cell;
                     return a.profile < b.profile;
                   });
  return result;
}

namespace {

constexpr std::string_view kRecordsHeader =
    "cell,profile,value_loss_auction,value_loss_optimal,value_loss_ratio,cost_auction,cost_vcg,"
    "cost_fraction,timeouts,rounds,comparable,note";

std::string csv_safe(std::string s) {
  std::replace(s.begin(), s.end(), ',', ';');
  std::replace(s.begin(), s.end(), '\n', ' ');
  return s;
}

std::vector<std::string> split_csv(std::string_view line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    auto comma = line.find(',', start);
    out.emplace_back(line.substr(start, comma == std::string_view::npos ? line.npos : comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

double parse_double_field(const std::string& s, std::size_t line) {
  try {
    std::size_t used = 0;
    double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ParseError(line, "bad number '" + s + "'");
  }
}

ordered_json number_or_null(double v) {
  return std::isfinite(v) ? ordered_json(v) : ordered_json();
}

ordered_json ids_json(const std::vector<StationId>& ids) {
  ordered_json a = ordered_json::array();
  for (StationId s : ids) a.push_back(s.value);
  return a;
}

ordered_json assignment_json(const Assignment& asg) {
  ordered_json a = ordered_json::array();
  for (const auto& [s, c] : asg) a.push_back({{"station", s.value}, {"channel", c.number}});
  return a;
}

ordered_json outcome_to_json(const AuctionOutcome& o) {
  ordered_json j;
  j["participants"] = ids_json(o.participants);
  j["non_participants"] = ids_json(o.non_participants);
  ordered_json winners = ordered_json::array();
  for (const auto& [s, p] : o.winners) winners.push_back({{"station", s.value}, {"payment", p}});
  j["winners"] = winners;
  j["cost"] = cost(o.winners);
  j["exit_order"] = ids_json(o.exit_order);
  j["final_assignment"] = assignment_json(o.final_assignment);
  j["timeouts"] = o.timeout_count;
  ordered_json vols = ordered_json::array();
  for (const auto& [s, v] : o.volumes.volumes) vols.push_back({{"station", s.value}, {"volume", v}});
  j["volumes"] = vols;
  ordered_json rounds = ordered_json::array();
  for (const auto& r : o.rounds) {
    ordered_json bids = ordered_json::array();
    for (const auto& b : r.bids) {
      bids.push_back({{"station", b.station.value},
                      {"decision", to_string(b.decision)},
                      {"offer", b.offer},
                      {"price_reduction", b.price_reduction},
                      {"verdict", to_string(b.verdict)},
                      {"status", to_string(b.resulting_status)},
                      {"checker_steps", b.checker_steps}});
    }
    rounds.push_back({{"round", r.round}, {"clock", r.clock}, {"bids", bids}});
  }
  j["rounds"] = rounds;
  return j;
}

ordered_json vcg_to_json(const VcgOutcome& v) {
  ordered_json j;
  j["optimal_value"] = v.optimal_value;
  j["optimal_assignment"] = assignment_json(v.optimal_assignment);
  j["winners"] = ids_json(v.winners);
  ordered_json prices = ordered_json::array();
  for (const auto& [s, p] : v.prices) {
    prices.push_back({{"station", s.value}, {"price", p}, {"restricted_value", v.restricted_values.at(s)}});
  }
  j["prices"] = prices;
  j["unpackable_winners"] = ids_json(v.unpackable_winners);
  j["cost"] = v.cost();
  j["search_nodes"] = v.nodes;
  return j;
}

ordered_json record_to_json(const ComparisonRecord& r) {
  return {{"cell", r.cell},
          {"profile", r.profile},
          {"value_loss_auction", number_or_null(r.value_loss_auction)},
          {"value_loss_optimal", number_or_null(r.value_loss_optimal)},
          {"value_loss_ratio", number_or_null(r.value_loss_ratio)},
          {"cost_auction", number_or_null(r.cost_auction)},
          {"cost_vcg", number_or_null(r.cost_vcg)},
          {"cost_fraction", number_or_null(r.cost_fraction)},
          {"timeouts", r.checker_timeout_count},
          {"rounds", r.rounds},
          {"comparable", r.comparable},
          {"note", r.note}};
}

}  // namespace

std::string records_csv(const std::vector<ComparisonRecord>& records) {
  std::string out(kRecordsHeader);
  out += '\n';
  for (const auto& r : records) {
    out += csv_safe(r.cell) + ',' + std::to_string(r.profile) + ',' +
           format_double(r.value_loss_auction) + ',' + format_double(r.value_loss_optimal) + ',' +
           format_double(r.value_loss_ratio) + ',' + format_double(r.cost_auction) + ',' +
           format_double(r.cost_vcg) + ',' + format_double(r.cost_fraction) + ',' +
           std::to_string(r.checker_timeout_count) + ',' + std::to_string(r.rounds) + ',' +
           (r.comparable ? "1" : "0") + ',' + csv_safe(r.note) + '\n';
  }
  return out;
}

std::vector<ComparisonRecord> parse_records_csv(std::string_view text) {
  std::vector<ComparisonRecord> out;
  std::size_t line_no = 0;
  std::size_t start = 0;
  bool header_seen = false;
  while (start < text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    start = end + 1;
    ++line_no;
    if (line.empty()) continue;
    if (!header_seen) {
      if (line != kRecordsHeader) throw ParseError(line_no, "unexpected records header");
      header_seen = true;
      continue;
    }
    auto f = split_csv(line);
    if (f.size() != 12) throw ParseError(line_no, "expected 12 fields");
    ComparisonRecord r;
    r.cell = f[0];
    r.profile = static_cast<std::uint32_t>(parse_double_field(f[1], line_no));
    r.value_loss_auction = parse_double_field(f[2], line_no);
    r.value_loss_optimal = parse_double_field(f[3], line_no);
    r.value_loss_ratio = parse_double_field(f[4], line_no);
    r.cost_auction = parse_double_field(f[5], line_no);
    r.cost_vcg = parse_double_field(f[6], line_no);
    r.cost_fraction = parse_double_field(f[7], line_no);
    r.checker_timeout_count = static_cast<std::uint64_t>(parse_double_field(f[8], line_no));
    r.rounds = static_cast<std::uint32_t>(parse_double_field(f[9], line_no));
    r.comparable = f[10] == "1";
    r.note = f[11];
    out.push_back(std::move(r));
  }
  if (!header_seen) throw ParseError(line_no, "missing records header");
  return out;
}

std::string outcome_json(const AuctionOutcome& outcome, int indent) {
  return outcome_to_json(outcome).dump(indent);
}

std::string vcg_json(const VcgOutcome& outcome, int indent) {
  return vcg_to_json(outcome).dump(indent);
}

std::string run_json(const ExperimentConfig& config, const ExperimentResult& result) {
  ordered_json j;
  j["config"] = ordered_json::parse(config_to_json(config));
  // Where the files land and how many threads produced them do not change
  // the result.
  j["config"].erase("out");
  j["config"].erase("threads");
  j["instance"] = {{"stations", result.instance.stations().size()},
                   {"constraints", result.instance.constraints().size()},
                   {"channel_lo", result.instance.universe().lo.number},
                   {"channel_hi", result.instance.universe().hi.number}};
  ordered_json profiles = ordered_json::array();
  for (const auto& run : result.profiles) {
    ordered_json pj;
    pj["profile"] = run.profile;
    pj["value_seed"] = value_seed(config, run.profile);
    pj["auction_seed"] = auction_seed(config, run.profile);
    ordered_json values = ordered_json::array();
    for (const auto& [s, v] : run.values) values.push_back({{"station", s.value}, {"value", v}});
    pj["values"] = values;
    ordered_json vcgs = ordered_json::array();
    for (const auto& [key, v] : run.vcg) {
      vcgs.push_back({{"participants", ids_json(key)}, {"outcome", vcg_to_json(v)}});
    }
    for (const auto& [key, err] : run.vcg_errors) {
      vcgs.push_back({{"participants", ids_json(key)}, {"error", err}});
    }
    pj["vcg"] = vcgs;
    ordered_json cells = ordered_json::array();
    for (const auto& cr : run.cells) {
      ordered_json cj;
      cj["cell"] = cr.cell.name();
      if (cr.outcome) {
        cj["outcome"] = outcome_to_json(*cr.outcome);
      } else {
        cj["error"] = cr.error;
      }
      cells.push_back(cj);
    }
    pj["cells"] = cells;
    profiles.push_back(pj);
  }
  j["profiles"] = profiles;
  ordered_json recs = ordered_json::array();
  for (const auto& r : result.records) recs.push_back(record_to_json(r));
  j["records"] = recs;
  return j.dump(1) + "\n";
}

void write_run_outputs(const ExperimentConfig& config, const ExperimentResult& result) {
  std::filesystem::create_directories(config.out_dir);
  write_text_file(config.out_dir / "records.csv", records_csv(result.records));
  write_text_file(config.out_dir / "run.json", run_json(config, result));
  write_instance_file(config.out_dir / "instance.txt", result.instance);
}

Summary summarize(const std::vector<ComparisonRecord>& records) {
  Summary s;
  std::map<std::string, CellSummary> by_cell;
  for (const auto& r : records) {
    if (!r.comparable) continue;
    auto& c = by_cell[r.cell];
    c.cell = r.cell;
    ++c.count;
    c.mean_cost_fraction += r.cost_fraction;
    c.mean_value_loss_ratio += r.value_loss_ratio;
    c.mean_cost += r.cost_auction;
    c.mean_value_loss += r.value_loss_auction;
  }
  for (auto& [name, c] : by_cell) {
    const double n = static_cast<double>(c.count);
    c.mean_cost_fraction /= n;
    c.mean_value_loss_ratio /= n;
    c.mean_cost /= n;
    c.mean_value_loss /= n;
    s.cells.push_back(c);
  }
  auto find = [&](const char* name) -> const CellSummary* {
    auto it = by_cell.find(name);
    return it == by_cell.end() ? nullptr : &it->second;
  };
  const auto* fcc_sat = find("fcc-sat");
  const auto* fcc_greedy = find("fcc-greedy");
  const auto* unscored_sat = find("unscored-sat");
  if (fcc_sat && fcc_greedy) {
    s.aggregates["greedy_over_sat_cost"] = fcc_greedy->mean_cost / fcc_sat->mean_cost;
    s.aggregates["greedy_over_sat_value_loss"] = fcc_greedy->mean_value_loss / fcc_sat->mean_value_loss;
  }
  if (fcc_sat && unscored_sat) {
    s.aggregates["scored_over_unscored_cost"] = fcc_sat->mean_cost / unscored_sat->mean_cost;
    s.aggregates["scoring_value_loss_ratio_penalty"] =
        fcc_sat->mean_value_loss_ratio / unscored_sat->mean_value_loss_ratio - 1.0;
  }
  if (unscored_sat) {
    s.aggregates["unscored_sat_mean_value_loss_ratio"] = unscored_sat->mean_value_loss_ratio;
  }
  return s;
}

std::string summary_text(const Summary& summary) {
  std::ostringstream out;
  out << "cell                 n  mean_cost_fraction  mean_value_loss_ratio  mean_cost  mean_value_loss\n";
  for (const auto& c : summary.cells) {
    out << c.cell << std::string(c.cell.size() < 18 ? 18 - c.cell.size() : 1, ' ') << ' ' << c.count
        << "  " << format_double(c.mean_cost_fraction) << "  " << format_double(c.mean_value_loss_ratio)
        << "  " << format_double(c.mean_cost) << "  " << format_double(c.mean_value_loss) << '\n';
  }
  static const std::map<std::string, std::string> labels{
      {"greedy_over_sat_cost", "greedy checker cost relative to SAT checker (FCC scoring)"},
      {"greedy_over_sat_value_loss", "greedy checker value loss relative to SAT checker (FCC scoring)"},
      {"scored_over_unscored_cost", "FCC-scored cost as a fraction of unscored cost (SAT checker)"},
      {"unscored_sat_mean_value_loss_ratio", "mean value loss ratio, unscored with SAT checker"},
      {"scoring_value_loss_ratio_penalty", "relative increase in value loss ratio from FCC scoring (SAT checker)"},
  };
  for (const auto& [key, v] : summary.aggregates) {
    out << key << " = " << format_double(v) << "  # " << labels.at(key) << '\n';
  }
  return out.str();
}

std::string summary_json(const Summary& summary) {
  ordered_json j;
  ordered_json cells = ordered_json::array();
  for (const auto& c : summary.cells) {
    cells.push_back({{"cell", c.cell},
                     {"count", c.count},
                     {"mean_cost_fraction", number_or_null(c.mean_cost_fraction)},
                     {"mean_value_loss_ratio", number_or_null(c.mean_value_loss_ratio)},
                     {"mean_cost", number_or_null(c.mean_cost)},
                     {"mean_value_loss", number_or_null(c.mean_value_loss)}});
  }
  j["cells"] = cells;
  ordered_json agg = ordered_json::object();
  for (const auto& [k, v] : summary.aggregates) agg[k] = number_or_null(v);
  j["aggregates"] = agg;
  return j.dump(2) + "\n";
}

std::string scatter_csv(const std::vector<ComparisonRecord>& records) {
  std::string out = "cell,profile,cost_fraction,value_loss_ratio,timeouts,rounds\n";
  std::set<std::uint32_t> profiles;
  for (const auto& r : records) {
    if (!r.comparable) continue;
    profiles.insert(r.profile);
    out += csv_safe(r.cell) + ',' + std::to_string(r.profile) + ',' + format_double(r.cost_fraction) +
           ',' + format_double(r.value_loss_ratio) + ',' + std::to_string(r.checker_timeout_count) +
           ',' + std::to_string(r.rounds) + '\n';
  }
  for (std::uint32_t p : profiles) out += "vcg," + std::to_string(p) + ",1,1,0,0\n";
  return out;
}

}  // namespace repack
