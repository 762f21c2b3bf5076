#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace repack {

struct StationId {
  std::uint32_t value = 0;
  constexpr auto operator<=>(const StationId&) const = default;
};

struct Channel {
  int number = 0;
  constexpr auto operator<=>(const Channel&) const = default;
};

struct StationChannel {
  StationId station;
  Channel channel;
  constexpr auto operator<=>(const StationChannel&) const = default;
};

struct Station {
  StationId id;
  std::vector<Channel> domain;  // sorted, unique after Instance construction
  std::uint64_t population = 0;
  Channel pre_auction_channel;
};

/// Forbidden pair {(s, c), (s', c')}: the two station-channel choices may not
/// both be realized. Stored with first < second so the pair is unordered.
class InterferenceConstraint {
 public:
  InterferenceConstraint(StationChannel a, StationChannel b);

  const StationChannel& first() const noexcept { return first_; }
  const StationChannel& second() const noexcept { return second_; }

  bool involves(StationId s) const noexcept {
    return first_.station == s || second_.station == s;
  }

  auto operator<=>(const InterferenceConstraint&) const = default;

 private:
  StationChannel first_;
  StationChannel second_;
};

/// Channels strictly below `bar` remain assignable.
struct ClearingTarget {
  Channel bar;
  constexpr bool admits(Channel c) const noexcept { return c < bar; }
};

/// Contiguous channel universe [lo, hi].
struct ChannelRange {
  Channel lo;
  Channel hi;
  constexpr bool contains(Channel c) const noexcept { return lo <= c && c <= hi; }
  constexpr std::size_t size() const noexcept {
    return static_cast<std::size_t>(hi.number - lo.number + 1);
  }
  auto operator<=>(const ChannelRange&) const = default;
};

/// Partial map station -> channel. Stations absent from the map are off air.
class Assignment {
 public:
  using Map = std::map<StationId, Channel>;
  using const_iterator = Map::const_iterator;

  Assignment() = default;
  Assignment(std::initializer_list<Map::value_type> init) : map_(init) {}

  void assign(StationId s, Channel c) { map_[s] = c; }
  void erase(StationId s) { map_.erase(s); }
  bool contains(StationId s) const { return map_.contains(s); }
  std::optional<Channel> find(StationId s) const {
    auto it = map_.find(s);
    if (it == map_.end()) return std::nullopt;
    return it->second;
  }

  std::size_t size() const noexcept { return map_.size(); }
  bool empty() const noexcept { return map_.empty(); }
  const_iterator begin() const noexcept { return map_.begin(); }
  const_iterator end() const noexcept { return map_.end(); }

  std::vector<StationId> stations() const;

  bool operator==(const Assignment&) const = default;

 private:
  Map map_;
};

/// On-air value per station, in dollars.
class ValueProfile {
 public:
  using Map = std::map<StationId, double>;

  ValueProfile() = default;
  explicit ValueProfile(Map values);
  ValueProfile(std::initializer_list<Map::value_type> init);

  /// Throws StructuralError when `s` has no entry.
  double at(StationId s) const;
  bool contains(StationId s) const { return values_.contains(s); }
  void set(StationId s, double v);

  std::size_t size() const noexcept { return values_.size(); }
  Map::const_iterator begin() const noexcept { return values_.begin(); }
  Map::const_iterator end() const noexcept { return values_.end(); }

  bool operator==(const ValueProfile&) const = default;

 private:
  Map values_;
};

/// The station packing problem data: stations, channel universe and the
/// forbidden station-channel pairs. Immutable after construction.
class Instance {
 public:
  Instance() = default;

  /// Sorts stations by id, canonicalizes domains and deduplicates
  /// constraints. Throws StructuralError when any invariant fails.
  Instance(std::vector<Station> stations,
           std::vector<InterferenceConstraint> constraints,
           ChannelRange universe);

  std::span<const Station> stations() const noexcept { return stations_; }
  std::span<const InterferenceConstraint> constraints() const noexcept {
    return constraints_;
  }
  ChannelRange universe() const noexcept { return universe_; }

  bool contains(StationId s) const;
  /// Throws StructuralError for unknown ids.
  const Station& station(StationId s) const;
  std::size_t index_of(StationId s) const;

  /// Station-channel pairs forbidden together with (s, c).
  std::span<const StationChannel> conflicts(StationId s, Channel c) const;

  /// Number of distinct constraints that touch `s`, restricted to channel
  /// pairs admitted by `ct`.
  std::size_t constraint_count(StationId s, ClearingTarget ct) const;

 private:
  std::vector<Station> stations_;
  std::vector<InterferenceConstraint> constraints_;
  ChannelRange universe_{Channel{1}, Channel{1}};
  // conflicts_[station index][channel - universe.lo]
  std::vector<std::vector<std::vector<StationChannel>>> conflicts_;
};

/// Undirected simple graph over station ids.
class InterferenceGraph {
 public:
  explicit InterferenceGraph(std::vector<StationId> vertices);

  void add_edge(StationId a, StationId b);
  bool has_edge(StationId a, StationId b) const;
  std::span<const StationId> neighbors(StationId s) const;
  std::span<const StationId> vertices() const noexcept { return vertices_; }
  std::size_t edge_count() const noexcept { return edge_count_; }
  std::vector<std::pair<StationId, StationId>> edges() const;

 private:
  std::size_t slot(StationId s) const;

  std::vector<StationId> vertices_;
  std::vector<std::vector<StationId>> adjacency_;
  std::size_t edge_count_ = 0;
};

/// D(s) restricted to channels below the clearing target. May be empty.
std::vector<Channel> reduced_domain(const Station& s, ClearingTarget ct);

/// True iff every assigned channel lies in D(s) below the clearing target
/// and no forbidden pair is jointly realized. Throws StructuralError when
/// the assignment names a station the instance does not know.
bool validate_assignment(const Assignment& a, const Instance& inst,
                         ClearingTarget ct);

/// Edge {s, s'} iff some constraint pairs them with both channels admitted.
InterferenceGraph interference_graph(const Instance& inst, ClearingTarget ct);

}  // namespace repack
