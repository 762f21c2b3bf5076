#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>

#include "repack/types.hpp"

namespace repack {

/// One mechanism run compared with the VCG benchmark on the same sellers.
struct ComparisonRecord {
  std::string cell;  // e.g. "fcc-sat"
  std::uint32_t profile = 0;
  double value_loss_auction = 0.0;
  double value_loss_optimal = 0.0;
  double value_loss_ratio = 1.0;  // +inf when the optimum loses nothing but the auction does
  double cost_auction = 0.0;
  double cost_vcg = 0.0;
  double cost_fraction = 1.0;  // cost_auction / cost_vcg, same zero conventions
  std::uint64_t checker_timeout_count = 0;
  std::uint32_t rounds = 0;
  /// False when the benchmark could not be computed (e.g. VCG ran out of
  /// budget); the numeric fields are then meaningless.
  bool comparable = true;
  std::string note;
};

/// Total value of the winners, summed in id order.
double value_loss(std::span<const StationId> winners, const ValueProfile& values);

/// auction_loss / optimal_loss (>= 1 for a true optimum). 0/0 is 1 and
/// x/0 with x > 0 is +infinity. Throws ConsistencyError when the auction
/// loses less than the optimum by more than 1e-6 relative.
double value_loss_ratio(double auction_loss, double optimal_loss);

/// Sum of payments, in id order.
double cost(const std::map<StationId, double>& payments);

/// auction_cost / vcg_cost with the value_loss_ratio zero conventions
/// (no consistency check: a clock auction may pay less than VCG).
double cost_fraction(double auction_cost, double vcg_cost);

enum class Dominance { ADominates, BDominates, Incomparable, Equal };

std::string_view to_string(Dominance d) noexcept;

/// Pareto comparison on (value_loss_ratio, cost_auction); lower is better.
Dominance pareto_compare(const ComparisonRecord& a, const ComparisonRecord& b);

}  // namespace repack
