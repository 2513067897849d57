#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace ergokit {

class ParticleMeasure;
class MetricSpaceSpec;

// Shortest decimal representation that round-trips to the same double
// (std::to_chars). All numeric file output goes through this, so serialized
// artifacts reproduce in-memory values bit-for-bit when read back.
std::string format_double(double v);

// Strict double parser; throws DomainError on trailing garbage or overflow.
double parse_double(std::string_view text);

// FNV-1a hashes; used for space tags and for content hashes in run manifests.
std::uint32_t fnv1a32(std::string_view bytes);
std::uint64_t fnv1a64(std::string_view bytes);
std::uint64_t fnv1a64_file(const std::string& path);

// Particle-measure CSV: header "w,x1,...,xd", one row per particle.
void write_measure_csv(const ParticleMeasure& mu, const std::string& path);
ParticleMeasure read_measure_csv(const std::string& path, const MetricSpaceSpec& space);

// Reads a whole file into a string; throws Error when unreadable.
std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view contents);

}  // namespace ergokit
