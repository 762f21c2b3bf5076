#include "repack/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "repack/errors.hpp"

namespace repack {

double value_loss(std::span<const StationId> winners, const ValueProfile& values) {
  std::vector<StationId> ids(winners.begin(), winners.end());
  std::sort(ids.begin(), ids.end());
  double total = 0.0;
  for (StationId s : ids) total += values.at(s);
  return total;
}

namespace {

double zero_aware_ratio(double numerator, double denominator) {
  if (denominator == 0.0) {
    return numerator == 0.0 ? 1.0 : std::numeric_limits<double>::infinity();
  }
  return numerator / denominator;
}

}  // namespace

double value_loss_ratio(double auction_loss, double optimal_loss) {
  if (auction_loss < optimal_loss &&
      optimal_loss - auction_loss > 1e-6 * std::max(std::abs(optimal_loss), 1.0)) {
    throw ConsistencyError("auction value loss " + std::to_string(auction_loss) +
                           " is below the optimal loss " + std::to_string(optimal_loss));
  }
  return zero_aware_ratio(auction_loss, optimal_loss);
}

double cost(const std::map<StationId, double>& payments) {
  double total = 0.0;
  for (const auto& [s, p] : payments) total += p;
  return total;
}

double cost_fraction(double auction_cost, double vcg_cost) {
  return zero_aware_ratio(auction_cost, vcg_cost);
}

std::string_view to_string(Dominance d) noexcept {
  switch (d) {
    case Dominance::ADominates: return "a_dominates";
    case Dominance::BDominates: return "b_dominates";
    case Dominance::Incomparable: return "incomparable";
    case Dominance::Equal: return "equal";
  }
  return "?";
}

Dominance pareto_compare(const ComparisonRecord& a, const ComparisonRecord& b) {
  const bool a_no_worse = a.value_loss_ratio <= b.value_loss_ratio && a.cost_auction <= b.cost_auction;
  const bool b_no_worse = b.value_loss_ratio <= a.value_loss_ratio && b.cost_auction <= a.cost_auction;
  if (a_no_worse && b_no_worse) return Dominance::Equal;
  if (a_no_worse) return Dominance::ADominates;
  if (b_no_worse) return Dominance::BDominates;
  return Dominance::Incomparable;
}

}  // namespace repack
