#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include "repack/types.hpp"

namespace repack {

/// Geometric stand-in for real interference data: stations dropped uniformly
/// in the unit square; close pairs get co-channel (and, closer still,
/// adjacent-channel) constraints.
struct GeneratorParams {
  std::size_t n_stations = 40;
  Channel channel_lo{14};
  Channel channel_hi{36};
  double co_channel_radius = 0.3;
  double adjacent_channel_radius = 0.15;
  std::uint64_t seed = 1;

  /// Throws StructuralError on invalid combinations.
  void validate() const;
};

/// value(s) = LogNormal(log_mean, log_sd) * population(s)^population_exponent
struct ValueSamplerParams {
  double log_mean = 5.0;
  double log_sd = 1.0;
  double population_exponent = 1.0;
  std::uint64_t seed = 1;

  void validate() const;
};

/// Line-oriented text format:
///   CHANNELS <lo> <hi>
///   STATION <id> <pre_auction_channel> <population> <c1,c2,...>
///   CONSTRAINT <s1> <c1> <s2> <c2>
/// `#` starts a comment. CHANNELS must precede STATION lines.
/// Throws ParseError carrying the offending line number.
Instance parse_instance(std::string_view text);

/// Canonical form: stations ascending by id, constraints in canonical order.
std::string serialize_instance(const Instance& inst);

/// Lines `<station id> <value>`; `#` comments allowed.
ValueProfile parse_value_profile(std::string_view text);
std::string serialize_value_profile(const ValueProfile& values);

Instance read_instance_file(const std::filesystem::path& path);
void write_instance_file(const std::filesystem::path& path, const Instance& inst);
ValueProfile read_value_profile_file(const std::filesystem::path& path);
void write_value_profile_file(const std::filesystem::path& path, const ValueProfile& values);

Instance generate_instance(const GeneratorParams& params);

/// Each station draws from its own stream seeded by (seed, station id), so
/// adding or reordering stations never perturbs another station's value.
ValueProfile sample_values(const Instance& inst, const ValueSamplerParams& params);

/// Shortest decimal text that round-trips to the same double.
std::string format_double(double v);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace repack
