#include "repack/sat_solver.hpp"

#include <algorithm>
#include <cstdlib>
#include <ostream>

#include "repack/errors.hpp"

namespace repack {

void Budget::validate() const {
  if (!deadline && !step_limit) {
    throw StructuralError("budget needs a step limit or a deadline");
  }
}

namespace {

// Internal literal encoding: 2*v for +v, 2*v+1 for -v.
using Lit = std::uint32_t;
constexpr int kNoReason = -1;

constexpr Lit to_lit(Literal l) {
  return l > 0 ? static_cast<Lit>(2 * l) : static_cast<Lit>(2 * -l + 1);
}
constexpr Lit negate(Lit l) { return l ^ 1U; }
constexpr std::uint32_t var_of(Lit l) { return l >> 1; }
constexpr bool is_negative(Lit l) { return (l & 1U) != 0; }

class Solver {
 public:
  Solver(int num_vars, const Budget& budget, const std::vector<bool>& phase)
      : num_vars_(num_vars),
        budget_(budget),
        value_(static_cast<std::size_t>(num_vars) + 1, kUnassigned),
        level_(static_cast<std::size_t>(num_vars) + 1, 0),
        reason_(static_cast<std::size_t>(num_vars) + 1, kNoReason),
        seen_(static_cast<std::size_t>(num_vars) + 1, 0),
        phase_(static_cast<std::size_t>(num_vars) + 1, false),
        watches_(2 * (static_cast<std::size_t>(num_vars) + 1)) {
    for (std::size_t v = 1; v < phase.size() && v < phase_.size(); ++v) phase_[v] = phase[v];
    start_ = std::chrono::steady_clock::now();
  }

  /// Returns false if the formula is trivially unsatisfiable.
  bool add_clause(const Clause& input) {
    std::vector<Lit> lits;
    lits.reserve(input.size());
    for (Literal l : input) {
      if (l == 0 || std::abs(l) > num_vars_) {
        throw StructuralError("literal " + std::to_string(l) + " outside variable range");
      }
      lits.push_back(to_lit(l));
    }
    std::sort(lits.begin(), lits.end());
    lits.erase(std::unique(lits.begin(), lits.end()), lits.end());
    for (std::size_t i = 1; i < lits.size(); ++i) {
      if (lits[i] == negate(lits[i - 1])) return true;  // tautology
    }
    if (lits.empty()) return false;
    if (lits.size() == 1) {
      auto v = lit_value(lits[0]);
      if (v == kFalse) return false;
      if (v == kUnassigned) enqueue(lits[0], kNoReason);
      return true;
    }
    attach(std::move(lits));
    return true;
  }

  SolveResult solve() {
    SolveResult result;
    if (propagate() != kNoConflict) {
      result.status = SolveStatus::Unsat;
      result.stats = stats_;
      return result;
    }
    for (;;) {
      const int conflict = propagate();
      if (conflict != kNoConflict) {
        ++stats_.conflicts;
        if (decision_level() == 0) {
          result.status = SolveStatus::Unsat;
          break;
        }
        int backjump = 0;
        std::vector<Lit> learnt = analyze(conflict, backjump);
        backtrack(backjump);
        if (learnt.size() == 1) {
          enqueue(learnt[0], kNoReason);
        } else {
          const Lit asserting = learnt[0];
          const int idx = attach(std::move(learnt));
          enqueue(asserting, idx);
        }
        continue;
      }
      const std::uint32_t v = next_unassigned();
      if (v == 0) {
        result.status = SolveStatus::Sat;
        result.model.assign(static_cast<std::size_t>(num_vars_) + 1, false);
        for (std::uint32_t u = 1; u <= static_cast<std::uint32_t>(num_vars_); ++u) {
          result.model[u] = value_[u] == kTrue;
        }
        break;
      }
      if (out_of_budget()) {
        result.status = SolveStatus::Timeout;
        break;
      }
      ++stats_.decisions;
      trail_lim_.push_back(trail_.size());
      enqueue(phase_[v] ? 2 * v : 2 * v + 1, kNoReason);
    }
    result.stats = stats_;
    return result;
  }

 private:
  static constexpr std::int8_t kUnassigned = -1;
  static constexpr std::int8_t kFalse = 0;
  static constexpr std::int8_t kTrue = 1;
  static constexpr int kNoConflict = -1;

  std::int8_t lit_value(Lit l) const {
    const auto v = value_[var_of(l)];
    if (v == kUnassigned) return kUnassigned;
    return static_cast<std::int8_t>(is_negative(l) ? 1 - v : v);
  }

  int decision_level() const { return static_cast<int>(trail_lim_.size()); }

  int attach(std::vector<Lit> lits) {
    const int idx = static_cast<int>(clauses_.size());
    watches_[lits[0]].push_back(idx);
    watches_[lits[1]].push_back(idx);
    clauses_.push_back(std::move(lits));
    return idx;
  }

  void enqueue(Lit l, int reason) {
    const auto v = var_of(l);
    value_[v] = is_negative(l) ? kFalse : kTrue;
    level_[v] = decision_level();
    reason_[v] = reason;
    trail_.push_back(l);
  }

  // Watches on literal l are visited when l becomes false.
  int propagate() {
    while (qhead_ < trail_.size()) {
      const Lit false_lit = negate(trail_[qhead_++]);
      ++stats_.propagations;
      auto& ws = watches_[false_lit];
      std::size_t keep = 0;
      for (std::size_t i = 0; i < ws.size(); ++i) {
        const int ci = ws[i];
        auto& c = clauses_[static_cast<std::size_t>(ci)];
        if (c[0] == false_lit) std::swap(c[0], c[1]);
        if (lit_value(c[0]) == kTrue) {
          ws[keep++] = ci;
          continue;
        }
        bool moved = false;
        for (std::size_t k = 2; k < c.size(); ++k) {
          if (lit_value(c[k]) != kFalse) {
            std::swap(c[1], c[k]);
            watches_[c[1]].push_back(ci);
            moved = true;
            break;
          }
        }
        if (moved) continue;
        ws[keep++] = ci;
        if (lit_value(c[0]) == kFalse) {
          for (std::size_t j = i + 1; j < ws.size(); ++j) ws[keep++] = ws[j];
          ws.resize(keep);
          qhead_ = trail_.size();
          return ci;
        }
        enqueue(c[0], ci);
      }
      ws.resize(keep);
    }
    return kNoConflict;
  }

  // First-UIP learning. The implied literal of a reason clause sits at c[0].
  std::vector<Lit> analyze(int conflict, int& backjump) {
    std::vector<Lit> learnt{0};
    int path = 0;
    Lit p = 0;
    bool first = true;
    std::size_t index = trail_.size();
    int ci = conflict;
    do {
      const auto& c = clauses_[static_cast<std::size_t>(ci)];
      for (std::size_t j = first ? 0 : 1; j < c.size(); ++j) {
        const Lit q = c[j];
        const auto v = var_of(q);
        if (seen_[v] || level_[v] == 0) continue;
        seen_[v] = 1;
        if (level_[v] >= decision_level()) {
          ++path;
        } else {
          learnt.push_back(q);
        }
      }
      first = false;
      while (!seen_[var_of(trail_[--index])]) {
      }
      p = trail_[index];
      ci = reason_[var_of(p)];
      seen_[var_of(p)] = 0;
      --path;
    } while (path > 0);
    learnt[0] = negate(p);

    backjump = 0;
    std::size_t max_i = 1;
    for (std::size_t i = 1; i < learnt.size(); ++i) {
      const int lv = level_[var_of(learnt[i])];
      if (lv > backjump) {
        backjump = lv;
        max_i = i;
      }
    }
    if (learnt.size() > 1) std::swap(learnt[1], learnt[max_i]);
    for (Lit l : learnt) seen_[var_of(l)] = 0;
    return learnt;
  }

  void backtrack(int level) {
    if (decision_level() <= level) return;
    const std::size_t stop = trail_lim_[static_cast<std::size_t>(level)];
    for (std::size_t i = trail_.size(); i-- > stop;) {
      const auto v = var_of(trail_[i]);
      value_[v] = kUnassigned;
      reason_[v] = kNoReason;
      if (v < cursor_) cursor_ = v;
    }
    trail_.resize(stop);
    trail_lim_.resize(static_cast<std::size_t>(level));
    qhead_ = trail_.size();
  }

  std::uint32_t next_unassigned() {
    while (cursor_ <= static_cast<std::uint32_t>(num_vars_) && value_[cursor_] != kUnassigned) {
      ++cursor_;
    }
    return cursor_ <= static_cast<std::uint32_t>(num_vars_) ? cursor_ : 0;
  }

  bool out_of_budget() const {
    if (budget_.step_limit && stats_.decisions >= *budget_.step_limit) return true;
    if (budget_.deadline && (stats_.decisions & 63U) == 0) {
      return std::chrono::steady_clock::now() - start_ >= *budget_.deadline;
    }
    return false;
  }

  int num_vars_;
  Budget budget_;
  std::vector<std::int8_t> value_;
  std::vector<int> level_;
  std::vector<int> reason_;
  std::vector<char> seen_;
  std::vector<bool> phase_;
  std::vector<std::vector<int>> watches_;
  std::vector<std::vector<Lit>> clauses_;
  std::vector<Lit> trail_;
  std::vector<std::size_t> trail_lim_;
  std::size_t qhead_ = 0;
  std::uint32_t cursor_ = 1;
  SolveStats stats_;
  std::chrono::steady_clock::time_point start_;
};

}  // namespace

SolveResult solve_cnf(int num_vars, std::span<const Clause> clauses, const Budget& budget,
                      const std::vector<bool>& preferred_phase) {
  budget.validate();
  if (num_vars < 0) throw StructuralError("negative variable count");
  Solver solver(num_vars, budget, preferred_phase);
  for (const auto& c : clauses) {
    if (!solver.add_clause(c)) {
      SolveResult r;
      r.status = SolveStatus::Unsat;
      return r;
    }
  }
  return solver.solve();
}

void write_dimacs(std::ostream& out, int num_vars, std::span<const Clause> clauses) {
  out << "p cnf " << num_vars << ' ' << clauses.size() << '\n';
  for (const auto& c : clauses) {
    for (Literal l : c) out << l << ' ';
    out << "0\n";
  }
}

}  // namespace repack
