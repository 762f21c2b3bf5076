#include "repack/pricing.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>

#include "repack/errors.hpp"

namespace repack {

std::string_view to_string(ScoringRule r) noexcept {
  return r == ScoringRule::Fcc ? "fcc" : "unscored";
}

ScoringRule parse_scoring(std::string_view name) {
  if (name == "fcc") return ScoringRule::Fcc;
  if (name == "unscored") return ScoringRule::Unscored;
  throw StructuralError("unknown scoring rule '" + std::string(name) + "'");
}

double VolumeTable::at(StationId s) const {
  auto it = volumes.find(s);
  if (it == volumes.end()) {
    throw StructuralError("no volume for station " + std::to_string(s.value));
  }
  return it->second;
}

double default_opening_clock(ScoringRule r) noexcept {
  return r == ScoringRule::Fcc ? kDefaultFccOpeningClock : kDefaultUnscoredOpeningClock;
}

VolumeTable fcc_volumes(const Instance& inst, ClearingTarget ct, InterferenceMeasure measure) {
  VolumeTable table;
  if (inst.stations().empty()) return table;

  std::map<StationId, double> raw;
  const auto graph = measure == InterferenceMeasure::NeighborCount
                         ? std::optional<InterferenceGraph>(interference_graph(inst, ct))
                         : std::nullopt;
  double max_raw = 0.0;
  for (const auto& s : inst.stations()) {
    const double interference = measure == InterferenceMeasure::ConstraintCount
                                    ? static_cast<double>(inst.constraint_count(s.id, ct))
                                    : static_cast<double>(graph->neighbors(s.id).size());
    const double r = std::sqrt(interference) * std::sqrt(static_cast<double>(s.population));
    raw[s.id] = r;
    max_raw = std::max(max_raw, r);
  }
  if (max_raw <= 0.0) {
    throw StructuralError("degenerate instance: every station has a zero FCC score");
  }
  table.scaling_constant = kMaxFccVolume / max_raw;
  for (const auto& [id, r] : raw) {
    // The top station gets exactly the cap rather than A * max_raw, which can
    // land one ulp away.
    const double v = r == max_raw ? kMaxFccVolume : table.scaling_constant * r;
    table.volumes[id] = v;
    if (r == 0.0) table.zero_volume.push_back(id);
  }
  return table;
}

VolumeTable unscored_volumes(const Instance& inst) {
  VolumeTable table;
  for (const auto& s : inst.stations()) table.volumes[s.id] = 1.0;
  return table;
}

VolumeTable compute_volumes(ScoringRule rule, const Instance& inst, ClearingTarget ct) {
  return rule == ScoringRule::Fcc ? fcc_volumes(inst, ct) : unscored_volumes(inst);
}

double decrement(double previous, double opening) {
  return std::max(0.05 * previous, 0.01 * opening);
}

ClockState ClockState::open(double opening_clock) {
  if (!(opening_clock > 0.0) || !std::isfinite(opening_clock)) {
    throw StructuralError("opening clock must be positive and finite");
  }
  return ClockState{opening_clock, opening_clock, 0};
}

ClockState next_clock(const ClockState& s) {
  ClockState out = s;
  out.current = std::max(0.0, s.current - decrement(s.current, s.opening));
  // A subnormal opening clock makes both decrement branches underflow to
  // zero; without this the clock would never move.
  if (out.current >= s.current) out.current = 0.0;
  out.round = s.round + 1;
  return out;
}

}  // namespace repack
