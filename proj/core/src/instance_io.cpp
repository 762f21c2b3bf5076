#include "repack/instance_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <vector>

#include "repack/errors.hpp"
#include "repack/random.hpp"

namespace repack {

namespace {

std::string_view strip_comment(std::string_view line) {
  if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
  return line;
}

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

template <typename T>
T parse_number(std::string_view tok, std::size_t line, const char* what) {
  T value{};
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc{} || ptr != tok.data() + tok.size()) {
    throw ParseError(line, std::string("invalid ") + what + " '" + std::string(tok) + "'");
  }
  return value;
}

template <typename Fn>
void for_each_line(std::string_view text, Fn&& fn) {
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    ++line_no;
    auto tokens = split_ws(strip_comment(text.substr(start, end - start)));
    if (!tokens.empty()) fn(line_no, tokens);
    if (end == text.size()) break;
    start = end + 1;
  }
}

}  // namespace

void GeneratorParams::validate() const {
  if (channel_lo.number < 1 || channel_hi < channel_lo) {
    throw StructuralError("generator needs 1 <= channel_lo <= channel_hi");
  }
  if (!(co_channel_radius >= 0.0) || !(adjacent_channel_radius >= 0.0)) {
    throw StructuralError("generator radii must be non-negative");
  }
  if (adjacent_channel_radius > co_channel_radius) {
    throw StructuralError("adjacent_channel_radius must not exceed co_channel_radius");
  }
}

void ValueSamplerParams::validate() const {
  if (!(log_sd > 0.0)) throw StructuralError("value sampler needs log_sd > 0");
  if (!std::isfinite(log_mean) || !std::isfinite(population_exponent)) {
    throw StructuralError("value sampler parameters must be finite");
  }
}

Instance parse_instance(std::string_view text) {
  std::optional<ChannelRange> universe;
  std::vector<Station> stations;
  std::map<StationId, std::size_t> seen;  // id -> index into stations
  std::vector<InterferenceConstraint> constraints;
  std::size_t last_line = 0;

  for_each_line(text, [&](std::size_t line, const std::vector<std::string_view>& tok) {
    last_line = line;
    const auto& kw = tok[0];
    if (kw == "CHANNELS") {
      if (tok.size() != 3) throw ParseError(line, "CHANNELS expects <lo> <hi>");
      if (universe) throw ParseError(line, "duplicate CHANNELS line");
      ChannelRange r{Channel{parse_number<int>(tok[1], line, "channel")},
                     Channel{parse_number<int>(tok[2], line, "channel")}};
      if (r.lo.number < 1 || r.hi < r.lo) throw ParseError(line, "empty or non-positive channel range");
      universe = r;
    } else if (kw == "STATION") {
      if (tok.size() != 5) {
        throw ParseError(line, "STATION expects <id> <pre_auction_channel> <population> <domain>");
      }
      if (!universe) throw ParseError(line, "STATION before CHANNELS");
      Station s;
      s.id = StationId{parse_number<std::uint32_t>(tok[1], line, "station id")};
      s.pre_auction_channel = Channel{parse_number<int>(tok[2], line, "channel")};
      s.population = parse_number<std::uint64_t>(tok[3], line, "population");
      std::string_view dom = tok[4];
      while (!dom.empty()) {
        auto comma = dom.find(',');
        auto item = dom.substr(0, comma);
        Channel c{parse_number<int>(item, line, "domain channel")};
        if (!universe->contains(c)) {
          throw ParseError(line, "domain channel " + std::to_string(c.number) + " outside CHANNELS range");
        }
        s.domain.push_back(c);
        if (comma == std::string_view::npos) break;
        dom.remove_prefix(comma + 1);
      }
      std::sort(s.domain.begin(), s.domain.end());
      if (s.domain.empty()) throw ParseError(line, "empty domain");
      if (!std::binary_search(s.domain.begin(), s.domain.end(), s.pre_auction_channel)) {
        throw ParseError(line, "pre-auction channel not in domain");
      }
      if (!seen.emplace(s.id, stations.size()).second) {
        throw ParseError(line, "duplicate station id " + std::to_string(s.id.value));
      }
      stations.push_back(std::move(s));
    } else if (kw == "CONSTRAINT") {
      if (tok.size() != 5) throw ParseError(line, "CONSTRAINT expects <s1> <c1> <s2> <c2>");
      StationChannel a{StationId{parse_number<std::uint32_t>(tok[1], line, "station id")},
                       Channel{parse_number<int>(tok[2], line, "channel")}};
      StationChannel b{StationId{parse_number<std::uint32_t>(tok[3], line, "station id")},
                       Channel{parse_number<int>(tok[4], line, "channel")}};
      for (const auto& sc : {a, b}) {
        auto it = seen.find(sc.station);
        if (it == seen.end()) {
          throw ParseError(line, "constraint references undeclared station " +
                                     std::to_string(sc.station.value));
        }
        const auto& dom = stations[it->second].domain;
        if (!std::binary_search(dom.begin(), dom.end(), sc.channel)) {
          throw ParseError(line, "constraint channel " + std::to_string(sc.channel.number) +
                                     " not in domain of station " +
                                     std::to_string(sc.station.value));
        }
      }
      if (a == b) throw ParseError(line, "constraint pairs a station-channel with itself");
      constraints.emplace_back(a, b);
    } else {
      throw ParseError(line, "unknown record '" + std::string(kw) + "'");
    }
  });

  if (!universe) throw ParseError(last_line, "missing CHANNELS line");
  try {
    return Instance(std::move(stations), std::move(constraints), *universe);
  } catch (const StructuralError& e) {
    throw ParseError(last_line, e.what());
  }
}

std::string serialize_instance(const Instance& inst) {
  std::ostringstream out;
  out << "CHANNELS " << inst.universe().lo.number << ' ' << inst.universe().hi.number << '\n';
  for (const auto& s : inst.stations()) {
    out << "STATION " << s.id.value << ' ' << s.pre_auction_channel.number << ' ' << s.population
        << ' ';
    for (std::size_t i = 0; i < s.domain.size(); ++i) {
      if (i) out << ',';
      out << s.domain[i].number;
    }
    out << '\n';
  }
  for (const auto& k : inst.constraints()) {
    out << "CONSTRAINT " << k.first().station.value << ' ' << k.first().channel.number << ' '
        << k.second().station.value << ' ' << k.second().channel.number << '\n';
  }
  return out.str();
}

ValueProfile parse_value_profile(std::string_view text) {
  ValueProfile profile;
  for_each_line(text, [&](std::size_t line, const std::vector<std::string_view>& tok) {
    if (tok.size() != 2) throw ParseError(line, "expected <station id> <value>");
    StationId s{parse_number<std::uint32_t>(tok[0], line, "station id")};
    double v = parse_number<double>(tok[1], line, "value");
    if (!(v >= 0.0) || !std::isfinite(v)) throw ParseError(line, "value must be finite and >= 0");
    if (profile.contains(s)) throw ParseError(line, "duplicate station id " + std::to_string(s.value));
    profile.set(s, v);
  });
  return profile;
}

std::string serialize_value_profile(const ValueProfile& values) {
  std::string out;
  for (const auto& [s, v] : values) {
    out += std::to_string(s.value);
    out += ' ';
    out += format_double(v);
    out += '\n';
  }
  return out;
}

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc{}) throw Error("cannot format double");
  return std::string(buf, ptr);
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw Error("write failed for " + path.string());
}

Instance read_instance_file(const std::filesystem::path& path) {
  return parse_instance(read_text_file(path));
}

void write_instance_file(const std::filesystem::path& path, const Instance& inst) {
  write_text_file(path, serialize_instance(inst));
}

ValueProfile read_value_profile_file(const std::filesystem::path& path) {
  return parse_value_profile(read_text_file(path));
}

void write_value_profile_file(const std::filesystem::path& path, const ValueProfile& values) {
  write_text_file(path, serialize_value_profile(values));
}

Instance generate_instance(const GeneratorParams& params) {
  params.validate();
  Rng rng(params.seed);
  const int lo = params.channel_lo.number;
  const int hi = params.channel_hi.number;
  const int trim = (hi - lo) / 6;

  struct Site {
    double x, y;
  };
  std::vector<Site> sites(params.n_stations);
  std::vector<Station> stations(params.n_stations);
  for (std::size_t i = 0; i < params.n_stations; ++i) {
    sites[i] = {rng.uniform(), rng.uniform()};
    auto& s = stations[i];
    s.id = StationId{static_cast<std::uint32_t>(i + 1)};
    const int a = lo + static_cast<int>(rng.uniform_int(0, trim));
    const int b = hi - static_cast<int>(rng.uniform_int(0, trim));
    for (int c = a; c <= b; ++c) s.domain.push_back(Channel{c});
    s.pre_auction_channel = Channel{static_cast<int>(rng.uniform_int(a, b))};
    // log-uniform on [1e4, 1e7]
    s.population = static_cast<std::uint64_t>(std::llround(std::pow(10.0, rng.uniform(4.0, 7.0))));
  }

  std::vector<InterferenceConstraint> constraints;
  auto in_domain = [](const Station& s, int c) {
    return c >= s.domain.front().number && c <= s.domain.back().number;
  };
  for (std::size_t i = 0; i < params.n_stations; ++i) {
    for (std::size_t j = i + 1; j < params.n_stations; ++j) {
      const double d = std::hypot(sites[i].x - sites[j].x, sites[i].y - sites[j].y);
      if (!(d < params.co_channel_radius)) continue;
      const auto& si = stations[i];
      const auto& sj = stations[j];
      const bool adjacent = d < params.adjacent_channel_radius;
      for (Channel c : si.domain) {
        if (in_domain(sj, c.number)) {
          constraints.emplace_back(StationChannel{si.id, c}, StationChannel{sj.id, c});
        }
        if (!adjacent) continue;
        for (int delta : {-1, 1}) {
          if (in_domain(sj, c.number + delta)) {
            constraints.emplace_back(StationChannel{si.id, c},
                                     StationChannel{sj.id, Channel{c.number + delta}});
          }
        }
      }
    }
  }
  return Instance(std::move(stations), std::move(constraints),
                  ChannelRange{params.channel_lo, params.channel_hi});
}

ValueProfile sample_values(const Instance& inst, const ValueSamplerParams& params) {
  params.validate();
  ValueProfile profile;
  for (const auto& s : inst.stations()) {
    Rng rng(derive_seed(params.seed, "station-value", s.id.value));
    const double base = std::exp(params.log_mean + params.log_sd * rng.normal());
    const double scale = std::pow(static_cast<double>(s.population), params.population_exponent);
    profile.set(s.id, base * scale);
  }
  return profile;
}

}  // namespace repack
