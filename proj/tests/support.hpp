#pragma once

// Seeded generators for small random inputs and brute-force oracles that
// share no code with the solvers under test.

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <map>
#include <optional>
#include <vector>

#include "repack/random.hpp"
#include "repack/sat_solver.hpp"
#include "repack/types.hpp"

namespace repack::testing {

struct SmallInstanceParams {
  std::size_t min_stations = 1;
  std::size_t max_stations = 12;
  int max_channels = 4;
  double constraint_density = 0.25;
};

// Channels 1..k; domains are random non-empty subsets; forbidden pairs are
// drawn independently over all cross-station (s, c), (s', c') pairs.
inline Instance random_small_instance(Rng& rng, const SmallInstanceParams& p = {}) {
  const auto n = static_cast<std::size_t>(
      rng.uniform_int(static_cast<std::int64_t>(p.min_stations), static_cast<std::int64_t>(p.max_stations)));
  const int k = static_cast<int>(rng.uniform_int(1, p.max_channels));
  std::vector<Station> stations(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto& s = stations[i];
    s.id = StationId{static_cast<std::uint32_t>(i + 1)};
    for (int c = 1; c <= k; ++c) {
      if (rng.uniform() < 0.7) s.domain.push_back(Channel{c});
    }
    if (s.domain.empty()) s.domain.push_back(Channel{static_cast<int>(rng.uniform_int(1, k))});
    s.pre_auction_channel = s.domain[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(s.domain.size()) - 1))];
    s.population = static_cast<std::uint64_t>(rng.uniform_int(1, 1'000'000));
  }
  std::vector<InterferenceConstraint> constraints;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      for (Channel a : stations[i].domain) {
        for (Channel b : stations[j].domain) {
          const double density = a == b ? p.constraint_density * 2.0 : p.constraint_density / 2.0;
          if (rng.uniform() < density) {
            constraints.emplace_back(StationChannel{stations[i].id, a}, StationChannel{stations[j].id, b});
          }
        }
      }
    }
  }
  return Instance(std::move(stations), std::move(constraints), ChannelRange{Channel{1}, Channel{k}});
}

inline bool pair_forbidden(const Instance& inst, StationChannel a, StationChannel b) {
  for (const auto& k : inst.constraints()) {
    if ((k.first() == a && k.second() == b) || (k.first() == b && k.second() == a)) return true;
  }
  return false;
}

// Independent validity check straight from the definition.
inline bool brute_valid(const Instance& inst, const Assignment& a, ClearingTarget ct) {
  for (const auto& [s, c] : a) {
    if (!inst.contains(s)) return false;
    const auto& dom = inst.station(s).domain;
    bool in_domain = false;
    for (Channel d : dom) in_domain = in_domain || d == c;
    if (!in_domain || !ct.admits(c)) return false;
  }
  for (const auto& k : inst.constraints()) {
    auto x = a.find(k.first().station);
    auto y = a.find(k.second().station);
    if (x && y && *x == k.first().channel && *y == k.second().channel) return false;
  }
  return true;
}

// A valid packing of a random subset of `candidates` built one station at a
// time; stations that do not fit are skipped.
inline Assignment random_packed(Rng& rng, const Instance& inst, ClearingTarget ct,
                                const std::vector<StationId>& candidates) {
  Assignment a;
  for (StationId s : candidates) {
    if (rng.uniform() < 0.4) continue;
    const auto& dom = inst.station(s).domain;
    const auto start = static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(dom.size()) - 1));
    for (std::size_t t = 0; t < dom.size(); ++t) {
      const Channel c = dom[(start + t) % dom.size()];
      if (!ct.admits(c)) continue;
      Assignment trial = a;
      trial.assign(s, c);
      if (brute_valid(inst, trial, ct)) {
        a = std::move(trial);
        break;
      }
    }
  }
  return a;
}

// Maximum on-air participant value over every joint choice (off for
// participants, one reduced-domain channel otherwise); nullopt when the
// forced stations admit no packing.
struct BruteOptimum {
  double value = 0.0;
};

inline std::optional<BruteOptimum> brute_optimum(const Instance& inst, const ValueProfile& values,
                                                 const std::vector<StationId>& participants,
                                                 const std::vector<StationId>& forced, ClearingTarget ct) {
  struct Slot {
    StationId id;
    bool may_be_off;
    std::vector<Channel> options;
  };
  std::vector<Slot> slots;
  for (StationId s : forced) slots.push_back({s, false, {}});
  for (StationId s : participants) slots.push_back({s, true, {}});
  for (auto& sl : slots) {
    for (Channel c : inst.station(sl.id).domain) {
      if (ct.admits(c)) sl.options.push_back(c);
    }
  }
  // forbidden[(i * width + ci) * cells + (j * width + cj)] over slot indices
  // and channel offsets from the universe's low end
  const int lo = inst.universe().lo.number;
  const std::size_t width = inst.universe().size();
  const std::size_t cells = slots.size() * width;
  std::vector<char> forbidden(cells * cells, 0);
  std::map<StationId, std::size_t> slot_of;
  for (std::size_t i = 0; i < slots.size(); ++i) slot_of[slots[i].id] = i;
  auto cell = [&](std::size_t slot, Channel c) { return slot * width + static_cast<std::size_t>(c.number - lo); };
  for (const auto& k : inst.constraints()) {
    auto a = slot_of.find(k.first().station);
    auto b = slot_of.find(k.second().station);
    if (a == slot_of.end() || b == slot_of.end()) continue;
    const std::size_t x = cell(a->second, k.first().channel);
    const std::size_t y = cell(b->second, k.second().channel);
    forbidden[x * cells + y] = forbidden[y * cells + x] = 1;
  }
  std::vector<std::optional<Channel>> choice(slots.size());
  double best = -1.0;
  auto fits = [&](std::size_t i, Channel c) {
    const std::size_t x = cell(i, c);
    for (std::size_t j = 0; j < i; ++j) {
      if (choice[j] && forbidden[x * cells + cell(j, *choice[j])]) return false;
    }
    return true;
  };
  auto rec = [&](auto&& self, std::size_t i, double value) -> void {
    if (i == slots.size()) {
      best = std::max(best, value);
      return;
    }
    for (Channel c : slots[i].options) {
      if (!fits(i, c)) continue;
      choice[i] = c;
      self(self, i + 1, value + (slots[i].may_be_off ? values.at(slots[i].id) : 0.0));
      choice[i].reset();
    }
    if (slots[i].may_be_off) self(self, i + 1, value);
  };
  rec(rec, 0, 0.0);
  if (best < 0.0) return std::nullopt;
  return BruteOptimum{best};
}

inline std::vector<Clause> random_3cnf(Rng& rng, int num_vars, int num_clauses) {
  std::vector<Clause> out;
  for (int i = 0; i < num_clauses; ++i) {
    Clause c;
    for (int j = 0; j < 3; ++j) {
      const int v = static_cast<int>(rng.uniform_int(1, num_vars));
      c.push_back(rng.uniform() < 0.5 ? v : -v);
    }
    out.push_back(std::move(c));
  }
  return out;
}

// Truth-table satisfiability over all 2^n assignments, bitmask encoded.
inline bool truth_table_sat(int num_vars, const std::vector<Clause>& clauses) {
  std::vector<std::pair<std::uint32_t, std::uint32_t>> masks;  // (positive, negative)
  for (const auto& c : clauses) {
    std::uint32_t pos = 0;
    std::uint32_t neg = 0;
    for (int lit : c) {
      if (lit > 0) pos |= 1U << (lit - 1);
      else neg |= 1U << (-lit - 1);
    }
    masks.emplace_back(pos, neg);
  }
  const std::uint32_t full = num_vars >= 32 ? ~0U : (1U << num_vars);
  for (std::uint32_t a = 0; a < full; ++a) {
    bool ok = true;
    for (const auto& [pos, neg] : masks) {
      if ((a & pos) == 0 && (~a & neg) == 0) {
        ok = false;
        break;
      }
    }
    if (ok) return true;
  }
  return false;
}

inline bool model_satisfies(const std::vector<bool>& model, const std::vector<Clause>& clauses) {
  for (const auto& c : clauses) {
    bool sat = false;
    for (int lit : c) {
      const bool v = model.at(static_cast<std::size_t>(std::abs(lit)));
      sat = sat || (lit > 0 ? v : !v);
    }
    if (!sat) return false;
  }
  return true;
}

inline ValueProfile random_values(Rng& rng, const Instance& inst, double lo = 1.0, double hi = 100.0) {
  ValueProfile v;
  for (const auto& s : inst.stations()) v.set(s.id, rng.uniform(lo, hi));
  return v;
}

inline std::vector<StationId> all_ids(const Instance& inst) {
  std::vector<StationId> ids;
  for (const auto& s : inst.stations()) ids.push_back(s.id);
  return ids;
}

}  // namespace repack::testing
