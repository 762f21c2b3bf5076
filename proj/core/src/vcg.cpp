#include "repack/vcg.hpp"

#include <algorithm>
#include <future>
#include <optional>
#include <ostream>
#include <set>
#include <string>

#include "repack/errors.hpp"
#include "repack/feasibility.hpp"
#include "repack/instance_io.hpp"

namespace repack {

namespace {

// Sum of participant values on air, accumulated in id order so that equal
// station sets always produce bit-identical totals.
double on_air_value(const Assignment& a, const ValueProfile& values,
                    std::span<const StationId> participants) {
  std::vector<StationId> ids(participants.begin(), participants.end());
  std::sort(ids.begin(), ids.end());
  double total = 0.0;
  for (StationId s : ids) {
    if (a.contains(s)) total += values.at(s);
  }
  return total;
}

class PackingSearch {
 public:
  PackingSearch(const Instance& inst, const ValueProfile& values,
                std::span<const StationId> participants, std::span<const StationId> forced,
                ClearingTarget ct, const VcgOptions& options)
      : inst_(inst),
        ct_(ct),
        options_(options),
        graph_(interference_graph(inst, ct)),
        forced_(forced.begin(), forced.end()) {
    std::set<StationId> seen;
    for (StationId s : forced_) {
      if (!seen.insert(s).second) throw StructuralError("station listed twice in packing problem");
    }
    for (StationId s : participants) {
      if (!seen.insert(s).second) throw StructuralError("station listed twice in packing problem");
      order_.push_back(s);
    }
    std::sort(order_.begin(), order_.end(), [&](StationId a, StationId b) {
      const double va = values.at(a);
      const double vb = values.at(b);
      if (va != vb) return va > vb;
      return a < b;
    });
    for (StationId s : order_) value_.push_back(values.at(s));
  }

  PackingResult run() {
    Assignment root = pack_forced();
    std::vector<char> doomed(order_.size(), 0);
    for (std::size_t j = 0; j < order_.size(); ++j) {
      if (reduced_domain(inst_.station(order_[j]), ct_).empty()) doomed[j] = 1;
    }
    dfs(0, root, 0.0, doomed);
    PackingResult result;
    result.assignment = std::move(best_assignment_);
    result.nodes = nodes_;
    return result;
  }

 private:
  Assignment pack_forced() {
    if (forced_.empty()) return {};
    std::vector<StationId> ids = forced_;
    std::sort(ids.begin(), ids.end());
    Assignment hint;
    for (StationId s : ids) {
      auto dom = reduced_domain(inst_.station(s), ct_);
      if (dom.empty()) {
        throw InfeasibleInstanceError("station " + std::to_string(s.value) +
                                      " must stay on air but has no channel below the clearing target");
      }
      hint.assign(s, dom.front());
    }
    const CnfFormula f = encode_packing(inst_, ct_, ids);
    const SolveResult r = solve(f, options_.subproblem_budget, hint);
    if (r.status == SolveStatus::Unsat) {
      throw InfeasibleInstanceError("stations that must stay on air cannot be packed together");
    }
    if (r.status == SolveStatus::Timeout) {
      throw ResourceError("packing the forced stations exceeded the subproblem budget");
    }
    return decode(f, r.model);
  }

  // `current` plus `s`, repacking only the interference component of `s`
  // when the station does not fit greedily.
  std::optional<Assignment> try_add(const Assignment& current, StationId s) {
    const auto channels = reduced_domain(inst_.station(s), ct_);
    for (Channel c : channels) {
      const auto conflicts = inst_.conflicts(s, c);
      const bool blocked = std::any_of(conflicts.begin(), conflicts.end(), [&](const StationChannel& o) {
        auto placed = current.find(o.station);
        return placed && *placed == o.channel;
      });
      if (!blocked) {
        Assignment out = current;
        out.assign(s, c);
        return out;
      }
    }
    if (channels.empty()) return std::nullopt;

    std::vector<StationId> component{s};
    std::set<StationId> visited{s};
    for (std::size_t head = 0; head < component.size(); ++head) {
      for (StationId n : graph_.neighbors(component[head])) {
        if (current.contains(n) && visited.insert(n).second) component.push_back(n);
      }
    }
    std::sort(component.begin() + 1, component.end());
    Assignment hint;
    for (StationId m : component) {
      if (auto c = current.find(m)) hint.assign(m, *c);
    }
    hint.assign(s, channels.front());

    const CnfFormula f = encode_packing(inst_, ct_, component);
    const SolveResult r = solve(f, options_.subproblem_budget, hint);
    if (r.status == SolveStatus::Unsat) return std::nullopt;
    if (r.status == SolveStatus::Timeout) {
      throw ResourceError("feasibility subproblem exceeded its budget during branch and bound");
    }
    Assignment out = current;
    for (const auto& [m, c] : decode(f, r.model)) out.assign(m, c);
    return out;
  }

  double undecided_bound(std::size_t i, const std::vector<char>& doomed) const {
    double total = 0.0;
    for (std::size_t j = i; j < order_.size(); ++j) {
      if (!doomed[j]) total += value_[j];
    }
    return total;
  }

  void dfs(std::size_t i, const Assignment& current, double value, std::vector<char> doomed) {
    if (++nodes_ > options_.node_limit) {
      throw ResourceError("optimal packing exceeded the node budget of " +
                          std::to_string(options_.node_limit));
    }
    if (i == order_.size()) {
      if (value > best_value_) {
        best_value_ = value;
        best_assignment_ = current;
      }
      return;
    }
    double bound = undecided_bound(i, doomed);
    if (value + bound <= best_value_) return;

    if (doomed[i]) {
      dfs(i + 1, current, value, std::move(doomed));
      return;
    }
    const StationId s = order_[i];
    auto with_s = try_add(current, s);
    if (!with_s) {
      doomed[i] = 1;
      dfs(i + 1, current, value, std::move(doomed));
      return;
    }

    // On air. Probe the undecided stations against the larger packing; any
    // that no longer fit stay off for the whole subtree.
    {
      std::vector<char> child = doomed;
      const double on_value = value + value_[i];
      double child_bound = bound - value_[i];
      for (std::size_t j = i + 1; j < order_.size() && on_value + child_bound > best_value_; ++j) {
        if (child[j]) continue;
        if (!try_add(*with_s, order_[j])) {
          child[j] = 1;
          child_bound -= value_[j];
        }
      }
      if (on_value + child_bound > best_value_) dfs(i + 1, *with_s, on_value, std::move(child));
    }

    // Off air.
    if (value + bound - value_[i] > best_value_) dfs(i + 1, current, value, std::move(doomed));
  }

  const Instance& inst_;
  ClearingTarget ct_;
  VcgOptions options_;
  InterferenceGraph graph_;
  std::vector<StationId> forced_;
  std::vector<StationId> order_;
  std::vector<double> value_;
  std::uint64_t nodes_ = 0;
  double best_value_ = -1.0;
  Assignment best_assignment_;
};

}  // namespace

PackingResult optimal_packing(const Instance& inst, const ValueProfile& values,
                              std::span<const StationId> participants,
                              std::span<const StationId> non_participants, ClearingTarget ct,
                              const VcgOptions& options) {
  options.subproblem_budget.validate();
  PackingSearch search(inst, values, participants, non_participants, ct, options);
  PackingResult result = search.run();
  result.value = on_air_value(result.assignment, values, participants);
  return result;
}

double VcgOutcome::cost() const {
  double total = 0.0;
  for (const auto& [s, p] : prices) total += p;
  return total;
}

namespace {

struct PricedWinner {
  double price = 0.0;
  double restricted = 0.0;
  bool unpackable = false;
};

PricedWinner price_winner(StationId winner, double optimal_value, const Instance& inst,
                          const ValueProfile& values, std::span<const StationId> participants,
                          std::span<const StationId> non_participants, ClearingTarget ct,
                          const VcgOptions& options) {
  std::vector<StationId> rest;
  for (StationId s : participants) {
    if (s != winner) rest.push_back(s);
  }
  if (rest.size() == participants.size()) {
    throw StructuralError("station " + std::to_string(winner.value) + " is not a participant");
  }
  std::vector<StationId> forced(non_participants.begin(), non_participants.end());
  forced.push_back(winner);

  PricedWinner p;
  try {
    p.restricted = optimal_packing(inst, values, rest, forced, ct, options).value;
    p.price = optimal_value - p.restricted;
  } catch (const InfeasibleInstanceError&) {
    p.price = optimal_value;
    p.unpackable = true;
  }
  return p;
}

}  // namespace

double vcg_price(StationId winner, double optimal_value, const Instance& inst,
                 const ValueProfile& values, std::span<const StationId> participants,
                 std::span<const StationId> non_participants, ClearingTarget ct,
                 const VcgOptions& options, double* restricted_value) {
  const PricedWinner p = price_winner(winner, optimal_value, inst, values, participants,
                                      non_participants, ct, options);
  if (restricted_value) *restricted_value = p.restricted;
  return p.price;
}

VcgOutcome vcg_outcome(const Instance& inst, const ValueProfile& values,
                       std::span<const StationId> participants,
                       std::span<const StationId> non_participants, ClearingTarget ct,
                       const VcgOptions& options) {
  VcgOutcome out;
  PackingResult best = optimal_packing(inst, values, participants, non_participants, ct, options);
  out.optimal_assignment = std::move(best.assignment);
  out.optimal_value = best.value;
  out.nodes = best.nodes;
  for (StationId s : participants) {
    if (!out.optimal_assignment.contains(s)) out.winners.push_back(s);
  }
  std::sort(out.winners.begin(), out.winners.end());

  auto price_one = [&](StationId w) {
    return price_winner(w, out.optimal_value, inst, values, participants, non_participants, ct,
                        options);
  };

  std::vector<PricedWinner> priced(out.winners.size());
  const std::size_t width = std::max(1U, options.threads);
  for (std::size_t start = 0; start < out.winners.size(); start += width) {
    const std::size_t stop = std::min(out.winners.size(), start + width);
    if (width == 1) {
      priced[start] = price_one(out.winners[start]);
      continue;
    }
    std::vector<std::future<PricedWinner>> pending;
    for (std::size_t k = start; k < stop; ++k) {
      pending.push_back(std::async(std::launch::async, price_one, out.winners[k]));
    }
    for (std::size_t k = start; k < stop; ++k) priced[k] = pending[k - start].get();
  }

  for (std::size_t k = 0; k < out.winners.size(); ++k) {
    const StationId w = out.winners[k];
    out.prices[w] = priced[k].price;
    out.restricted_values[w] = priced[k].restricted;
    if (priced[k].unpackable) out.unpackable_winners.push_back(w);
  }
  return out;
}

void write_lp(std::ostream& out, const Instance& inst, const ValueProfile& values,
              std::span<const StationId> participants,
              std::span<const StationId> non_participants, ClearingTarget ct) {
  auto var = [](StationId s, Channel c) {
    return "x_" + std::to_string(s.value) + "_" + std::to_string(c.number);
  };
  std::vector<StationId> all(participants.begin(), participants.end());
  all.insert(all.end(), non_participants.begin(), non_participants.end());
  std::sort(all.begin(), all.end());
  const std::set<StationId> members(all.begin(), all.end());

  out << "\\ station packing: maximize on-air participant value\n";
  out << "Maximize\n obj:";
  bool any = false;
  std::vector<StationId> sorted_participants(participants.begin(), participants.end());
  std::sort(sorted_participants.begin(), sorted_participants.end());
  for (StationId s : sorted_participants) {
    for (Channel c : reduced_domain(inst.station(s), ct)) {
      out << (any ? " + " : " ") << format_double(values.at(s)) << ' ' << var(s, c);
      any = true;
    }
  }
  if (!any) out << " 0";
  out << "\nSubject To\n";
  std::size_t row = 0;
  for (const auto& k : inst.constraints()) {
    const auto& a = k.first();
    const auto& b = k.second();
    if (!members.contains(a.station) || !members.contains(b.station)) continue;
    if (!ct.admits(a.channel) || !ct.admits(b.channel)) continue;
    out << " i" << ++row << ": " << var(a.station, a.channel) << " + " << var(b.station, b.channel)
        << " <= 1\n";
  }
  const std::set<StationId> forced(non_participants.begin(), non_participants.end());
  for (StationId s : all) {
    const auto dom = reduced_domain(inst.station(s), ct);
    out << (forced.contains(s) ? " n" : " p") << s.value << ":";
    if (dom.empty()) out << " 0";
    for (std::size_t i = 0; i < dom.size(); ++i) out << (i ? " + " : " ") << var(s, dom[i]);
    out << (forced.contains(s) ? " = 1\n" : " <= 1\n");
  }
  out << "Binary\n";
  for (StationId s : all) {
    for (Channel c : reduced_domain(inst.station(s), ct)) out << ' ' << var(s, c) << '\n';
  }
  out << "End\n";
}

}  // namespace repack
