#pragma once

#include <cstdint>
#include <map>
#include <string_view>
#include <vector>

#include "repack/types.hpp"

namespace repack {

enum class ScoringRule { Fcc, Unscored };

/// What Interference(s) counts in the FCC volume formula.
enum class InterferenceMeasure {
  ConstraintCount,  // distinct forbidden pairs touching s, both channels admitted
  NeighborCount,    // degree of s in the interference graph
};

std::string_view to_string(ScoringRule r) noexcept;
/// Accepts "fcc" and "unscored".
ScoringRule parse_scoring(std::string_view name);

/// Per-station volume, fixed for the whole auction.
struct VolumeTable {
  std::map<StationId, double> volumes;
  double scaling_constant = 1.0;
  /// Stations whose raw FCC score is zero (volume 0, so they never participate).
  std::vector<StationId> zero_volume;

  double at(StationId s) const;
};

inline constexpr double kMaxFccVolume = 1'000'000.0;
inline constexpr double kDefaultFccOpeningClock = 900.0;
inline constexpr double kDefaultUnscoredOpeningClock = 900'000'000.0;

double default_opening_clock(ScoringRule r) noexcept;

/// Volume(s) = A * sqrt(Interference(s)) * sqrt(Population(s)), A chosen so
/// the largest volume is one million. Throws StructuralError when every
/// station scores zero.
VolumeTable fcc_volumes(const Instance& inst, ClearingTarget ct,
                        InterferenceMeasure measure = InterferenceMeasure::ConstraintCount);

/// Every station gets volume 1.
VolumeTable unscored_volumes(const Instance& inst);

VolumeTable compute_volumes(ScoringRule rule, const Instance& inst, ClearingTarget ct);

/// max(5% of the previous clock, 1% of the opening clock).
double decrement(double previous, double opening);

struct ClockState {
  double opening = 0.0;
  double current = 0.0;
  std::uint32_t round = 0;

  static ClockState open(double opening_clock);
};

/// One round: clock drops by decrement() and is clamped at zero.
ClockState next_clock(const ClockState& s);

inline double offer_price(double volume, double clock) { return volume * clock; }

}  // namespace repack
