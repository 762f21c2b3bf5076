#include "repack/auction.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "repack/errors.hpp"
#include "repack/random.hpp"

namespace repack {

std::string_view to_string(StationStatus s) noexcept {
  switch (s) {
    case StationStatus::NotParticipating: return "not_participating";
    case StationStatus::Active: return "active";
    case StationStatus::Exited: return "exited";
    case StationStatus::Frozen: return "frozen";
  }
  return "?";
}

std::string_view to_string(BidDecision d) noexcept {
  return d == BidDecision::Accept ? "accept" : "exit";
}

void AuctionConfig::validate() const {
  if (!(opening_clock > 0.0) || !std::isfinite(opening_clock)) {
    throw StructuralError("opening clock must be positive and finite");
  }
  budget.validate();
}

Participation determine_participants(const Instance& inst, const ValueProfile& values,
                                     const VolumeTable& volumes, double opening_clock) {
  Participation out;
  for (const auto& s : inst.stations()) {
    const double opening = offer_price(volumes.at(s.id), opening_clock);
    if (values.at(s.id) < opening) {
      out.participants.push_back(s.id);
    } else {
      out.non_participants.push_back(s.id);
    }
  }
  return out;
}

namespace {

Assignment pack_all_at_once(const Instance& inst, std::span<const StationId> stations,
                            ClearingTarget ct, const Budget& budget) {
  const CnfFormula f = encode_packing(inst, ct, stations);
  Assignment hint;
  for (StationId s : stations) {
    auto dom = reduced_domain(inst.station(s), ct);
    if (!dom.empty()) hint.assign(s, dom.front());
  }
  const SolveResult r = solve(f, budget, hint);
  switch (r.status) {
    case SolveStatus::Sat: return decode(f, r.model);
    case SolveStatus::Unsat:
      throw InfeasibleInstanceError("non-participating stations cannot be packed together");
    case SolveStatus::Timeout: break;
  }
  throw ResourceError("could not pack the non-participating stations within the budget");
}

}  // namespace

Assignment initial_assignment(const Instance& inst, std::span<const StationId> non_participants,
                              ClearingTarget ct, CheckerKind checker, const Budget& budget) {
  std::vector<StationId> order(non_participants.begin(), non_participants.end());
  std::sort(order.begin(), order.end());
  for (StationId s : order) {
    if (reduced_domain(inst.station(s), ct).empty()) {
      throw InfeasibleInstanceError("non-participating station " + std::to_string(s.value) +
                                    " has no channel below the clearing target");
    }
  }

  Assignment packed;
  bool ok = true;
  for (StationId s : order) {
    FeasibilityProblem p{s, packed, inst, ct};
    FeasibilityVerdict v;
    try {
      v = check(checker, p, budget);
    } catch (const ResourceError&) {
      ok = false;
      break;
    }
    if (!v.feasible()) {
      ok = false;
      break;
    }
    packed = std::move(v.certificate);
  }
  if (ok) return packed;
  return pack_all_at_once(inst, order, ct, budget);
}

RoundRecord process_bids(AuctionState& state, std::vector<Bid> bids, const AuctionConfig& config) {
  RoundRecord record;
  record.round = state.clock.round;
  record.clock = state.clock.current;

  const std::uint64_t round_seed = derive_seed(config.seed, "bid-order", state.clock.round);
  auto tie_key = [&](StationId s) { return mix64(round_seed ^ mix64(s.value)); };
  std::sort(bids.begin(), bids.end(), [&](const Bid& a, const Bid& b) {
    if (a.price_reduction != b.price_reduction) {
      return config.bid_order == BidOrder::LargestReductionFirst
                 ? a.price_reduction > b.price_reduction
                 : a.price_reduction < b.price_reduction;
    }
    const auto ka = tie_key(a.station);
    const auto kb = tie_key(b.station);
    if (ka != kb) return ka < kb;
    return a.station < b.station;
  });

  for (const Bid& bid : bids) {
    auto& st = state.stations.at(bid.station);
    if (st.status != StationStatus::Active) {
      throw StructuralError("bid from station " + std::to_string(bid.station.value) +
                            " which is not active");
    }
    FeasibilityProblem problem{bid.station, state.packed, state.instance, config.clearing_target};
    FeasibilityVerdict verdict = check(config.checker, problem, config.budget);
    if (verdict.kind == Verdict::Timeout) ++state.timeout_count;

    if (verdict.feasible()) {
      if (bid.decision == BidDecision::Exit) {
        st.status = StationStatus::Exited;
        st.decided_round = state.clock.round;
        state.packed = std::move(verdict.certificate);
        state.exit_order.push_back(bid.station);
      } else {
        st.last_accepted_price = bid.new_offer;
      }
    } else {
      st.status = StationStatus::Frozen;
      st.payment = st.last_accepted_price;
      st.decided_round = state.clock.round;
    }
    record.bids.push_back(ProcessedBid{bid.station, bid.decision, bid.new_offer,
                                       bid.price_reduction, verdict.kind, st.status,
                                       verdict.steps});
  }
  return record;
}

AuctionOutcome run_auction(const Instance& inst, const ValueProfile& values,
                           const AuctionConfig& config,
                           const std::optional<ExitRoundDeviation>& deviation) {
  config.validate();
  AuctionOutcome outcome;
  outcome.volumes = compute_volumes(config.scoring, inst, config.clearing_target);
  auto part = determine_participants(inst, values, outcome.volumes, config.opening_clock);
  outcome.participants = part.participants;
  outcome.non_participants = part.non_participants;

  AuctionState state{inst, {}, {}, ClockState::open(config.opening_clock), {}, 0};
  state.packed = initial_assignment(inst, part.non_participants, config.clearing_target,
                                    config.checker, config.budget);
  for (StationId s : part.non_participants) state.stations[s] = StationState{};
  for (StationId s : part.participants) {
    StationState st;
    st.status = StationStatus::Active;
    st.last_accepted_price = offer_price(outcome.volumes.at(s), config.opening_clock);
    state.stations[s] = st;
  }

  auto decide = [&](StationId s, std::uint32_t round, double offer) {
    if (deviation && deviation->station == s) {
      return deviation->exit_round && round >= *deviation->exit_round ? BidDecision::Exit
                                                                      : BidDecision::Accept;
    }
    return truthful_bid(values.at(s), offer);
  };

  std::size_t active = part.participants.size();
  while (active > 0) {
    const ClockState previous = state.clock;
    state.clock = next_clock(previous);
    const bool force_exit = previous.current == 0.0;

    std::vector<Bid> bids;
    bids.reserve(active);
    for (const auto& [s, st] : state.stations) {
      if (st.status != StationStatus::Active) continue;
      const double volume = outcome.volumes.at(s);
      Bid b;
      b.station = s;
      b.new_offer = offer_price(volume, state.clock.current);
      b.price_reduction = offer_price(volume, previous.current) - b.new_offer;
      b.decision = force_exit ? BidDecision::Exit : decide(s, state.clock.round, b.new_offer);
      bids.push_back(b);
    }
    outcome.rounds.push_back(process_bids(state, std::move(bids), config));
    active = static_cast<std::size_t>(
        std::count_if(state.stations.begin(), state.stations.end(),
                      [](const auto& kv) { return kv.second.status == StationStatus::Active; }));
  }

  for (const auto& [s, st] : state.stations) {
    if (st.status == StationStatus::Frozen) outcome.winners[s] = st.payment;
  }
  if (!validate_assignment(state.packed, inst, config.clearing_target)) {
    throw ConsistencyError("auction produced an invalid final packing");
  }
  outcome.final_assignment = std::move(state.packed);
  outcome.states = std::move(state.stations);
  outcome.exit_order = std::move(state.exit_order);
  outcome.timeout_count = state.timeout_count;
  return outcome;
}

double station_utility(const AuctionOutcome& outcome, StationId s, double true_value) {
  auto it = outcome.winners.find(s);
  return it == outcome.winners.end() ? 0.0 : it->second - true_value;
}

}  // namespace repack
