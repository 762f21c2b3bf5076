#include "repack/types.hpp"

#include <algorithm>
#include <string>

#include "repack/errors.hpp"

namespace repack {

namespace {

std::string describe(StationChannel sc) {
  return "(" + std::to_string(sc.station.value) + ", " +
         std::to_string(sc.channel.number) + ")";
}

bool has_channel(const Station& s, Channel c) {
  return std::binary_search(s.domain.begin(), s.domain.end(), c);
}

}  // namespace

InterferenceConstraint::InterferenceConstraint(StationChannel a, StationChannel b)
    : first_(std::min(a, b)), second_(std::max(a, b)) {
  if (a == b) {
    throw StructuralError("constraint pairs " + describe(a) + " with itself");
  }
}

std::vector<StationId> Assignment::stations() const {
  std::vector<StationId> out;
  out.reserve(map_.size());
  for (const auto& [s, c] : map_) out.push_back(s);
  return out;
}

ValueProfile::ValueProfile(Map values) : values_(std::move(values)) {
  for (const auto& [s, v] : values_) set(s, v);
}

ValueProfile::ValueProfile(std::initializer_list<Map::value_type> init) {
  for (const auto& [s, v] : init) set(s, v);
}

double ValueProfile::at(StationId s) const {
  auto it = values_.find(s);
  if (it == values_.end()) {
    throw StructuralError("no value for station " + std::to_string(s.value));
  }
  return it->second;
}

void ValueProfile::set(StationId s, double v) {
  if (!(v >= 0.0)) {
    throw StructuralError("station " + std::to_string(s.value) +
                          " has a negative or NaN value");
  }
  values_[s] = v;
}

Instance::Instance(std::vector<Station> stations,
                   std::vector<InterferenceConstraint> constraints,
                   ChannelRange universe)
    : stations_(std::move(stations)),
      constraints_(std::move(constraints)),
      universe_(universe) {
  if (universe_.lo.number < 1 || universe_.hi < universe_.lo) {
    throw StructuralError("channel universe must be a non-empty range of positive channels");
  }
  std::sort(stations_.begin(), stations_.end(),
            [](const Station& a, const Station& b) { return a.id < b.id; });
  for (std::size_t i = 1; i < stations_.size(); ++i) {
    if (stations_[i - 1].id == stations_[i].id) {
      throw StructuralError("duplicate station id " +
                            std::to_string(stations_[i].id.value));
    }
  }
  for (auto& s : stations_) {
    std::sort(s.domain.begin(), s.domain.end());
    s.domain.erase(std::unique(s.domain.begin(), s.domain.end()), s.domain.end());
    const auto sid = std::to_string(s.id.value);
    if (s.domain.empty()) throw StructuralError("station " + sid + " has an empty domain");
    for (Channel c : s.domain) {
      if (!universe_.contains(c)) {
        throw StructuralError("station " + sid + " domain channel " +
                              std::to_string(c.number) + " outside the channel universe");
      }
    }
    if (!has_channel(s, s.pre_auction_channel)) {
      throw StructuralError("station " + sid + " pre-auction channel not in its domain");
    }
  }

  std::sort(constraints_.begin(), constraints_.end());
  constraints_.erase(std::unique(constraints_.begin(), constraints_.end()),
                     constraints_.end());

  conflicts_.resize(stations_.size());
  for (auto& per_channel : conflicts_) per_channel.resize(universe_.size());

  for (const auto& k : constraints_) {
    for (const auto& sc : {k.first(), k.second()}) {
      if (!contains(sc.station)) {
        throw StructuralError("constraint references unknown station " +
                              std::to_string(sc.station.value));
      }
      if (!has_channel(station(sc.station), sc.channel)) {
        throw StructuralError("constraint pair " + describe(sc) +
                              " is outside the station's domain");
      }
    }
    const auto& a = k.first();
    const auto& b = k.second();
    conflicts_[index_of(a.station)][static_cast<std::size_t>(a.channel.number - universe_.lo.number)]
        .push_back(b);
    conflicts_[index_of(b.station)][static_cast<std::size_t>(b.channel.number - universe_.lo.number)]
        .push_back(a);
  }
}

bool Instance::contains(StationId s) const {
  auto it = std::lower_bound(stations_.begin(), stations_.end(), s,
                             [](const Station& st, StationId id) { return st.id < id; });
  return it != stations_.end() && it->id == s;
}

std::size_t Instance::index_of(StationId s) const {
  auto it = std::lower_bound(stations_.begin(), stations_.end(), s,
                             [](const Station& st, StationId id) { return st.id < id; });
  if (it == stations_.end() || it->id != s) {
    throw StructuralError("unknown station " + std::to_string(s.value));
  }
  return static_cast<std::size_t>(it - stations_.begin());
}

const Station& Instance::station(StationId s) const { return stations_[index_of(s)]; }

std::span<const StationChannel> Instance::conflicts(StationId s, Channel c) const {
  if (!universe_.contains(c)) return {};
  return conflicts_[index_of(s)][static_cast<std::size_t>(c.number - universe_.lo.number)];
}

std::size_t Instance::constraint_count(StationId s, ClearingTarget ct) const {
  return static_cast<std::size_t>(std::count_if(
      constraints_.begin(), constraints_.end(), [&](const InterferenceConstraint& k) {
        return k.involves(s) && ct.admits(k.first().channel) && ct.admits(k.second().channel);
      }));
}

InterferenceGraph::InterferenceGraph(std::vector<StationId> vertices)
    : vertices_(std::move(vertices)) {
  std::sort(vertices_.begin(), vertices_.end());
  vertices_.erase(std::unique(vertices_.begin(), vertices_.end()), vertices_.end());
  adjacency_.resize(vertices_.size());
}

std::size_t InterferenceGraph::slot(StationId s) const {
  auto it = std::lower_bound(vertices_.begin(), vertices_.end(), s);
  if (it == vertices_.end() || *it != s) {
    throw StructuralError("station " + std::to_string(s.value) + " is not a graph vertex");
  }
  return static_cast<std::size_t>(it - vertices_.begin());
}

void InterferenceGraph::add_edge(StationId a, StationId b) {
  if (a == b) return;
  auto& na = adjacency_[slot(a)];
  auto pos = std::lower_bound(na.begin(), na.end(), b);
  if (pos != na.end() && *pos == b) return;
  na.insert(pos, b);
  auto& nb = adjacency_[slot(b)];
  nb.insert(std::lower_bound(nb.begin(), nb.end(), a), a);
  ++edge_count_;
}

bool InterferenceGraph::has_edge(StationId a, StationId b) const {
  const auto& na = adjacency_[slot(a)];
  return std::binary_search(na.begin(), na.end(), b);
}

std::span<const StationId> InterferenceGraph::neighbors(StationId s) const {
  return adjacency_[slot(s)];
}

std::vector<std::pair<StationId, StationId>> InterferenceGraph::edges() const {
  std::vector<std::pair<StationId, StationId>> out;
  out.reserve(edge_count_);
  for (std::size_t i = 0; i < vertices_.size(); ++i) {
    for (StationId n : adjacency_[i]) {
      if (vertices_[i] < n) out.emplace_back(vertices_[i], n);
    }
  }
  return out;
}

std::vector<Channel> reduced_domain(const Station& s, ClearingTarget ct) {
  std::vector<Channel> out;
  for (Channel c : s.domain) {
    if (ct.admits(c)) out.push_back(c);
  }
  return out;
}

bool validate_assignment(const Assignment& a, const Instance& inst, ClearingTarget ct) {
  for (const auto& [s, c] : a) {
    if (!inst.contains(s)) {
      throw StructuralError("assignment names unknown station " + std::to_string(s.value));
    }
  }
  for (const auto& [s, c] : a) {
    if (!ct.admits(c) || !has_channel(inst.station(s), c)) return false;
    for (const StationChannel& other : inst.conflicts(s, c)) {
      auto placed = a.find(other.station);
      if (placed && *placed == other.channel) return false;
    }
  }
  return true;
}

InterferenceGraph interference_graph(const Instance& inst, ClearingTarget ct) {
  std::vector<StationId> ids;
  ids.reserve(inst.stations().size());
  for (const auto& s : inst.stations()) ids.push_back(s.id);
  InterferenceGraph g(std::move(ids));
  for (const auto& k : inst.constraints()) {
    if (ct.admits(k.first().channel) && ct.admits(k.second().channel)) {
      g.add_edge(k.first().station, k.second().station);
    }
  }
  return g;
}

}  // namespace repack
