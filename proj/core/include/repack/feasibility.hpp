#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

#include "repack/sat_solver.hpp"
#include "repack/types.hpp"

namespace repack {

/// Can `target` be packed together with the stations already in `packed`?
/// `packed` must itself be a valid assignment that excludes the target.
struct FeasibilityProblem {
  StationId target;
  Assignment packed;
  const Instance& instance;
  ClearingTarget clearing_target;
};

enum class Verdict { Feasible, Infeasible, Timeout };

struct FeasibilityVerdict {
  Verdict kind = Verdict::Timeout;
  /// Packs the target and every previously packed station when Feasible;
  /// empty otherwise.
  Assignment certificate;
  std::uint64_t steps = 0;

  bool feasible() const noexcept { return kind == Verdict::Feasible; }
};

enum class CheckerKind { Greedy, Sat, Exhaustive };

std::string_view to_string(Verdict v) noexcept;
std::string_view to_string(CheckerKind k) noexcept;
/// Accepts "greedy", "sat", "exhaustive". Throws StructuralError otherwise.
CheckerKind parse_checker(std::string_view name);

/// Throws StructuralError unless the target is known, not already packed,
/// and `packed` passes validate_assignment.
void validate_problem(const FeasibilityProblem& p);

/// Tries the target's reduced domain in ascending order against the packed
/// stations without moving any of them. Reports Timeout when nothing fits;
/// never Infeasible.
FeasibilityVerdict check_greedy(const FeasibilityProblem& p, const Budget& budget);

/// x_{s,c} for every station in the problem and every channel of its reduced
/// domain. Variable i+1 is `variables[i]`.
struct CnfFormula {
  std::vector<StationChannel> variables;
  std::vector<Clause> clauses;

  int num_vars() const noexcept { return static_cast<int>(variables.size()); }
  /// 0 when (s, c) has no variable.
  int variable(StationChannel sc) const;
};

/// Encoding of "all of `stations` packed at once": an at-least-one clause per
/// station plus one binary clause per applicable forbidden pair. Variables
/// are numbered station by station in the order given, channels ascending.
CnfFormula encode_packing(const Instance& inst, ClearingTarget ct,
                          std::span<const StationId> stations);

/// encode_packing over the target first, then the packed stations by id.
CnfFormula encode(const FeasibilityProblem& p);

/// Runs the solver with phases taken from `polarity_hint`: x_{s,c} is tried
/// true first iff the hint places s on c.
SolveResult solve(const CnfFormula& f, const Budget& budget, const Assignment& polarity_hint);

/// Lowest true channel per station.
Assignment decode(const CnfFormula& f, const std::vector<bool>& model);

/// Complete check: encode, solve with the packed channels (plus the target's
/// lowest channel) as phase hints, decode. Infeasible iff proven UNSAT.
FeasibilityVerdict check_sat(const FeasibilityProblem& p, const Budget& budget);

inline constexpr std::uint64_t kExhaustiveSpaceLimit = 10'000'000;

/// Test oracle: backtracking enumeration of joint assignments in station-id
/// then channel order. Returns the lexicographically first valid packing.
/// Throws ResourceError when the product of reduced-domain sizes exceeds
/// kExhaustiveSpaceLimit.
FeasibilityVerdict check_exhaustive(const FeasibilityProblem& p);

FeasibilityVerdict check(CheckerKind kind, const FeasibilityProblem& p, const Budget& budget);

/// DIMACS export with `c` comment lines naming each variable's (station, channel).
void write_dimacs(std::ostream& out, const CnfFormula& f);

}  // namespace repack
