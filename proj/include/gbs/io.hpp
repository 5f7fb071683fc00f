#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "gbs/probability.hpp"

namespace gbs {

/// Instance files are UTF-8 JSON with sorted keys, complex numbers as
/// [re, im] arrays and floats printed with 17 significant digits, so
/// write / read / write round-trips byte-identically.
struct LoadedInstance {
  GbsInstance instance;
  std::optional<std::uint64_t> seed;
};

LoadedInstance read_instance(std::istream& is);
LoadedInstance read_instance_file(const std::string& path);

void write_instance(std::ostream& os, const GbsInstance& inst,
                    std::optional<std::uint64_t> seed);
void write_instance_file(const std::string& path, const GbsInstance& inst,
                         std::optional<std::uint64_t> seed);

void write_table(std::ostream& os, const ProbabilityTable& table);
void write_samples(std::ostream& os, const std::vector<PhotonPattern>& samples,
                   std::uint64_t seed);

/// Canonical float formatting ("%.17g").
std::string format_double(double x);

}  // namespace gbs
