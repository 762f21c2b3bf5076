#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "repack/feasibility.hpp"
#include "repack/pricing.hpp"
#include "repack/types.hpp"

namespace repack {

enum class StationStatus { NotParticipating, Active, Exited, Frozen };
enum class BidDecision { Accept, Exit };
/// Processing order of bids by price reduction within a round.
enum class BidOrder { LargestReductionFirst, SmallestReductionFirst };

std::string_view to_string(StationStatus s) noexcept;
std::string_view to_string(BidDecision d) noexcept;

struct StationState {
  StationStatus status = StationStatus::NotParticipating;
  /// Most recent offer the station agreed to; the opening offer counts.
  double last_accepted_price = 0.0;
  /// Set when Frozen: equals last_accepted_price at freeze time.
  double payment = 0.0;
  /// Round in which the station exited or froze (0 while undecided).
  std::uint32_t decided_round = 0;
};

struct Bid {
  StationId station;
  BidDecision decision = BidDecision::Accept;
  double new_offer = 0.0;
  /// Previous offer minus the new one; never negative.
  double price_reduction = 0.0;
};

struct AuctionConfig {
  ScoringRule scoring = ScoringRule::Fcc;
  double opening_clock = kDefaultFccOpeningClock;
  CheckerKind checker = CheckerKind::Sat;
  Budget budget = Budget::steps(kDefaultStepBudget);
  std::uint64_t seed = 0;
  ClearingTarget clearing_target{Channel{29}};
  BidOrder bid_order = BidOrder::LargestReductionFirst;

  void validate() const;
};

struct ProcessedBid {
  StationId station;
  BidDecision decision = BidDecision::Accept;
  double offer = 0.0;
  double price_reduction = 0.0;
  Verdict verdict = Verdict::Timeout;
  StationStatus resulting_status = StationStatus::Active;
  std::uint64_t checker_steps = 0;
};

struct RoundRecord {
  std::uint32_t round = 0;
  double clock = 0.0;
  std::vector<ProcessedBid> bids;  // in processing order
};

struct AuctionOutcome {
  /// Frozen stations and their payments.
  std::map<StationId, double> winners;
  Assignment final_assignment;
  std::vector<StationId> participants;
  std::vector<StationId> non_participants;
  std::map<StationId, StationState> states;
  /// Exited stations in the order they were processed.
  std::vector<StationId> exit_order;
  std::vector<RoundRecord> rounds;
  VolumeTable volumes;
  std::uint64_t timeout_count = 0;

  std::uint32_t round_count() const noexcept { return static_cast<std::uint32_t>(rounds.size()); }
};

struct Participation {
  std::vector<StationId> participants;
  std::vector<StationId> non_participants;
};

/// s participates iff value(s) < opening_clock * volume(s), strictly.
Participation determine_participants(const Instance& inst, const ValueProfile& values,
                                     const VolumeTable& volumes, double opening_clock);

/// Packs exactly the non-participants: one station at a time in id order
/// with the configured checker, then a single whole-set SAT solve if that
/// fails. Throws InfeasibleInstanceError when they cannot be packed together
/// (ResourceError when the whole-set solve runs out of budget).
Assignment initial_assignment(const Instance& inst, std::span<const StationId> non_participants,
                              ClearingTarget ct, CheckerKind checker, const Budget& budget);

/// Accept iff the new offer still covers the value (ties accept).
constexpr BidDecision truthful_bid(double value, double new_offer) noexcept {
  return new_offer >= value ? BidDecision::Accept : BidDecision::Exit;
}

/// Mutable engine state between rounds.
struct AuctionState {
  const Instance& instance;
  std::map<StationId, StationState> stations;
  Assignment packed;
  ClockState clock;
  std::vector<StationId> exit_order;
  std::uint64_t timeout_count = 0;
};

/// Orders the bids (by price reduction, ties by a key drawn from
/// (seed, round, station id)) and processes them one at a time against the
/// evolving packing. Returns the round log.
RoundRecord process_bids(AuctionState& state, std::vector<Bid> bids, const AuctionConfig& config);

/// A single station deviating from truthful bidding: it accepts every offer
/// before `exit_round` and exits from `exit_round` on (never, if unset).
struct ExitRoundDeviation {
  StationId station;
  std::optional<std::uint32_t> exit_round;
};

/// Runs the descending clock auction to completion. Deterministic in
/// (inst, values, config). Once a full round has been processed at a zero
/// clock, every remaining bid is treated as an exit, which ends the auction.
AuctionOutcome run_auction(const Instance& inst, const ValueProfile& values,
                           const AuctionConfig& config,
                           const std::optional<ExitRoundDeviation>& deviation = std::nullopt);

/// payment - value for winners, zero for stations that stay on air.
double station_utility(const AuctionOutcome& outcome, StationId s, double true_value);

}  // namespace repack
