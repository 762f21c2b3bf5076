#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <vector>

#include "repack/sat_solver.hpp"
#include "repack/types.hpp"

namespace repack {

struct VcgOptions {
  /// Branch-and-bound node budget per packing problem; exceeding it raises
  /// ResourceError rather than returning an approximate answer.
  std::uint64_t node_limit = 20'000'000;
  /// Budget for each feasibility sub-solve inside the search. A timeout here
  /// also raises ResourceError.
  Budget subproblem_budget = Budget::steps(5'000'000);
  /// Pricing subproblems are independent; run up to this many at once.
  unsigned threads = 1;
};

struct PackingResult {
  Assignment assignment;
  /// Total value of on-air participants (non-participants count zero).
  double value = 0.0;
  std::uint64_t nodes = 0;
};

/// Value-maximizing packing: participants may be on air (at most one channel)
/// or off, non-participants must be on air, no forbidden pair realized.
/// Depth-first branch and bound over participants by descending value; the
/// bound is the value of undecided stations minus those already proven
/// unpackable alongside the current on-air set. Throws
/// InfeasibleInstanceError when the non-participants cannot be packed and
/// ResourceError when a budget is exhausted.
PackingResult optimal_packing(const Instance& inst, const ValueProfile& values,
                              std::span<const StationId> participants,
                              std::span<const StationId> non_participants, ClearingTarget ct,
                              const VcgOptions& options = {});

struct VcgOutcome {
  Assignment optimal_assignment;
  double optimal_value = 0.0;
  /// Participants left off air by the optimal packing, ascending id.
  std::vector<StationId> winners;
  std::map<StationId, double> prices;
  /// Optimal value once the winner is forced on air with its own value
  /// excluded. Zero for the degenerate case where that is impossible.
  std::map<StationId, double> restricted_values;
  /// Winners that cannot be put on air at all (priced at optimal_value).
  std::vector<StationId> unpackable_winners;
  std::uint64_t nodes = 0;

  double cost() const;
};

/// Re-solve with `winner` moved to the non-participants:
/// price = optimal_value - restricted optimum. When the winner cannot be on
/// air in any packing, the price is the full optimal_value.
double vcg_price(StationId winner, double optimal_value, const Instance& inst,
                 const ValueProfile& values, std::span<const StationId> participants,
                 std::span<const StationId> non_participants, ClearingTarget ct,
                 const VcgOptions& options = {}, double* restricted_value = nullptr);

VcgOutcome vcg_outcome(const Instance& inst, const ValueProfile& values,
                       std::span<const StationId> participants,
                       std::span<const StationId> non_participants, ClearingTarget ct,
                       const VcgOptions& options = {});

/// The packing problem as a CPLEX-LP text model (binary x_<station>_<channel>).
void write_lp(std::ostream& out, const Instance& inst, const ValueProfile& values,
              std::span<const StationId> participants,
              std::span<const StationId> non_participants, ClearingTarget ct);

}  // namespace repack
