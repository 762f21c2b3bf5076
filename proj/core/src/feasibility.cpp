#include "repack/feasibility.hpp"

#include <algorithm>
#include <map>
#include <ostream>
#include <string>

#include "repack/errors.hpp"

namespace repack {

std::string_view to_string(Verdict v) noexcept {
  switch (v) {
    case Verdict::Feasible: return "feasible";
    case Verdict::Infeasible: return "infeasible";
    case Verdict::Timeout: return "timeout";
  }
  return "?";
}

std::string_view to_string(CheckerKind k) noexcept {
  switch (k) {
    case CheckerKind::Greedy: return "greedy";
    case CheckerKind::Sat: return "sat";
    case CheckerKind::Exhaustive: return "exhaustive";
  }
  return "?";
}

CheckerKind parse_checker(std::string_view name) {
  if (name == "greedy") return CheckerKind::Greedy;
  if (name == "sat") return CheckerKind::Sat;
  if (name == "exhaustive") return CheckerKind::Exhaustive;
  throw StructuralError("unknown checker '" + std::string(name) + "'");
}

void validate_problem(const FeasibilityProblem& p) {
  if (!p.instance.contains(p.target)) {
    throw StructuralError("feasibility target " + std::to_string(p.target.value) +
                          " is not in the instance");
  }
  if (p.packed.contains(p.target)) {
    throw StructuralError("feasibility target " + std::to_string(p.target.value) +
                          " is already packed");
  }
  if (!validate_assignment(p.packed, p.instance, p.clearing_target)) {
    throw StructuralError("packed assignment is not a valid packing");
  }
}

FeasibilityVerdict check_greedy(const FeasibilityProblem& p, const Budget& budget) {
  budget.validate();
  validate_problem(p);
  FeasibilityVerdict verdict;
  const auto& station = p.instance.station(p.target);
  for (Channel c : reduced_domain(station, p.clearing_target)) {
    if (budget.step_limit && verdict.steps >= *budget.step_limit) break;
    ++verdict.steps;
    const auto conflicts = p.instance.conflicts(p.target, c);
    const bool blocked = std::any_of(conflicts.begin(), conflicts.end(), [&](const StationChannel& o) {
      auto placed = p.packed.find(o.station);
      return placed && *placed == o.channel;
    });
    if (!blocked) {
      verdict.kind = Verdict::Feasible;
      verdict.certificate = p.packed;
      verdict.certificate.assign(p.target, c);
      return verdict;
    }
  }
  verdict.kind = Verdict::Timeout;
  return verdict;
}

int CnfFormula::variable(StationChannel sc) const {
  auto it = std::find(variables.begin(), variables.end(), sc);
  return it == variables.end() ? 0 : static_cast<int>(it - variables.begin()) + 1;
}

CnfFormula encode_packing(const Instance& inst, ClearingTarget ct,
                          std::span<const StationId> stations) {
  CnfFormula f;
  // station -> (first variable, reduced channels)
  std::map<StationId, std::pair<int, std::vector<Channel>>> blocks;
  for (StationId s : stations) {
    if (blocks.contains(s)) throw StructuralError("station listed twice in packing problem");
    auto channels = reduced_domain(inst.station(s), ct);
    const int first = f.num_vars() + 1;
    for (Channel c : channels) f.variables.push_back({s, c});
    blocks.emplace(s, std::make_pair(first, std::move(channels)));
  }
  auto var_of = [&](StationChannel sc) -> int {
    auto it = blocks.find(sc.station);
    if (it == blocks.end()) return 0;
    const auto& chans = it->second.second;
    auto pos = std::lower_bound(chans.begin(), chans.end(), sc.channel);
    if (pos == chans.end() || *pos != sc.channel) return 0;
    return it->second.first + static_cast<int>(pos - chans.begin());
  };

  for (StationId s : stations) {
    const auto& [first, chans] = blocks.at(s);
    Clause at_least_one;
    for (std::size_t i = 0; i < chans.size(); ++i) at_least_one.push_back(first + static_cast<int>(i));
    f.clauses.push_back(std::move(at_least_one));
  }
  for (StationId s : stations) {
    const auto& [first, chans] = blocks.at(s);
    for (std::size_t i = 0; i < chans.size(); ++i) {
      const StationChannel here{s, chans[i]};
      for (const StationChannel& other : inst.conflicts(s, chans[i])) {
        if (!(here < other)) continue;  // each unordered pair once
        const int v = var_of(other);
        if (v == 0) continue;
        f.clauses.push_back({-(first + static_cast<int>(i)), -v});
      }
    }
  }
  return f;
}

CnfFormula encode(const FeasibilityProblem& p) {
  validate_problem(p);
  std::vector<StationId> order{p.target};
  for (const auto& [s, c] : p.packed) order.push_back(s);
  return encode_packing(p.instance, p.clearing_target, order);
}

SolveResult solve(const CnfFormula& f, const Budget& budget, const Assignment& polarity_hint) {
  std::vector<bool> phase(static_cast<std::size_t>(f.num_vars()) + 1, false);
  for (std::size_t i = 0; i < f.variables.size(); ++i) {
    const auto& sc = f.variables[i];
    auto hinted = polarity_hint.find(sc.station);
    phase[i + 1] = hinted && *hinted == sc.channel;
  }
  return solve_cnf(f.num_vars(), f.clauses, budget, phase);
}

Assignment decode(const CnfFormula& f, const std::vector<bool>& model) {
  Assignment a;
  for (std::size_t i = 0; i < f.variables.size(); ++i) {
    if (i + 1 < model.size() && model[i + 1]) {
      const auto& sc = f.variables[i];
      auto existing = a.find(sc.station);
      if (!existing || sc.channel < *existing) a.assign(sc.station, sc.channel);
    }
  }
  return a;
}

FeasibilityVerdict check_sat(const FeasibilityProblem& p, const Budget& budget) {
  budget.validate();
  const CnfFormula f = encode(p);
  Assignment hint = p.packed;
  auto target_channels = reduced_domain(p.instance.station(p.target), p.clearing_target);
  if (!target_channels.empty()) hint.assign(p.target, target_channels.front());

  const SolveResult r = solve(f, budget, hint);
  FeasibilityVerdict verdict;
  verdict.steps = r.stats.decisions;
  switch (r.status) {
    case SolveStatus::Sat:
      verdict.kind = Verdict::Feasible;
      verdict.certificate = decode(f, r.model);
      break;
    case SolveStatus::Unsat: verdict.kind = Verdict::Infeasible; break;
    case SolveStatus::Timeout: verdict.kind = Verdict::Timeout; break;
  }
  return verdict;
}

FeasibilityVerdict check_exhaustive(const FeasibilityProblem& p) {
  validate_problem(p);
  std::vector<StationId> order = p.packed.stations();
  order.insert(std::upper_bound(order.begin(), order.end(), p.target), p.target);

  std::vector<std::vector<Channel>> domains;
  double space = 1.0;
  for (StationId s : order) {
    domains.push_back(reduced_domain(p.instance.station(s), p.clearing_target));
    space *= static_cast<double>(domains.back().size());
  }
  if (space > static_cast<double>(kExhaustiveSpaceLimit)) {
    throw ResourceError("exhaustive check refused: search space exceeds " +
                        std::to_string(kExhaustiveSpaceLimit));
  }

  FeasibilityVerdict verdict;
  std::vector<Channel> chosen(order.size());
  std::vector<std::size_t> next(order.size(), 0);
  auto consistent = [&](std::size_t depth) {
    // chosen[depth] against chosen[0..depth)
    for (std::size_t j = 0; j < depth; ++j) {
      for (const auto& o : p.instance.conflicts(order[depth], chosen[depth])) {
        if (o.station == order[j] && o.channel == chosen[j]) return false;
      }
    }
    return true;
  };

  std::size_t depth = 0;
  while (true) {
    if (depth == order.size()) {
      verdict.kind = Verdict::Feasible;
      for (std::size_t i = 0; i < order.size(); ++i) verdict.certificate.assign(order[i], chosen[i]);
      return verdict;
    }
    bool advanced = false;
    while (next[depth] < domains[depth].size()) {
      chosen[depth] = domains[depth][next[depth]++];
      ++verdict.steps;
      if (consistent(depth)) {
        advanced = true;
        break;
      }
    }
    if (advanced) {
      ++depth;
      if (depth < order.size()) next[depth] = 0;
      continue;
    }
    if (depth == 0) break;
    --depth;
  }
  verdict.kind = Verdict::Infeasible;
  return verdict;
}

FeasibilityVerdict check(CheckerKind kind, const FeasibilityProblem& p, const Budget& budget) {
  switch (kind) {
    case CheckerKind::Greedy: return check_greedy(p, budget);
    case CheckerKind::Sat: return check_sat(p, budget);
    case CheckerKind::Exhaustive: return check_exhaustive(p);
  }
  throw StructuralError("unknown checker kind");
}

void write_dimacs(std::ostream& out, const CnfFormula& f) {
  for (std::size_t i = 0; i < f.variables.size(); ++i) {
    out << "c " << (i + 1) << " station " << f.variables[i].station.value << " channel "
        << f.variables[i].channel.number << '\n';
  }
  write_dimacs(out, f.num_vars(), f.clauses);
}

}  // namespace repack
