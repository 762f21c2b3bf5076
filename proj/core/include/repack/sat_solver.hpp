#pragma once

#include <chrono>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

namespace repack {

/// Limits for one search. At least one limit must be finite. The step limit
/// counts search nodes (branching decisions) and is the deterministic
/// default; the wall-clock deadline is opt-in.
struct Budget {
  std::optional<std::chrono::nanoseconds> deadline;
  std::optional<std::uint64_t> step_limit;

  static Budget steps(std::uint64_t n) { return Budget{std::nullopt, n}; }
  static Budget wall_clock(std::chrono::nanoseconds d) { return Budget{d, std::nullopt}; }

  /// Throws StructuralError when both limits are absent.
  void validate() const;
};

inline constexpr std::uint64_t kDefaultStepBudget = 50'000;

/// DIMACS-style literal: +v or -v for variable v >= 1.
using Literal = int;
using Clause = std::vector<Literal>;

enum class SolveStatus { Sat, Unsat, Timeout };

struct SolveStats {
  std::uint64_t decisions = 0;
  std::uint64_t conflicts = 0;
  std::uint64_t propagations = 0;
};

struct SolveResult {
  SolveStatus status = SolveStatus::Timeout;
  /// model[v] for v in 1..num_vars; model[0] unused. Empty unless Sat.
  std::vector<bool> model;
  SolveStats stats;
};

/// Complete backtracking search with unit propagation (two watched literals)
/// and conflict-driven backjumping. Branching is fixed: the lowest-index
/// unassigned variable, tried first with `preferred_phase[v]` (false when
/// the span is empty). Learned clauses live only for this call.
SolveResult solve_cnf(int num_vars, std::span<const Clause> clauses, const Budget& budget,
                      const std::vector<bool>& preferred_phase = {});

/// `p cnf <vars> <clauses>` header, one clause per line terminated by 0.
void write_dimacs(std::ostream& out, int num_vars, std::span<const Clause> clauses);

}  // namespace repack
