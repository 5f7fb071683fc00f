#include "gbs/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include <json.hpp>

namespace gbs {

namespace {

using nlohmann::json;

double number_at(const json& node, const char* what) {
  if (!node.is_number()) {
    throw std::runtime_error(std::string("instance file: ") + what + " must be a number");
  }
  const double value = node.get<double>();
  if (!std::isfinite(value)) {
    throw std::runtime_error(std::string("instance file: ") + what + " must be finite");
  }
  return value;
}

Complex complex_at(const json& node, const char* what) {
  if (!node.is_array() || node.size() != 2) {
    throw std::runtime_error(std::string("instance file: ") + what +
                             " must be a [re, im] pair");
  }
  return {number_at(node[0], what), number_at(node[1], what)};
}

void put_complex(std::ostream& os, const Complex& z) {
  os << '[' << format_double(z.real()) << ',' << format_double(z.imag()) << ']';
}

}  // namespace

std::string format_double(double x) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.17g", x);
  return buffer;
}

LoadedInstance read_instance(std::istream& is) {
  json doc;
  try {
    doc = json::parse(is);
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("instance file: invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) {
    throw std::runtime_error("instance file: top level must be an object");
  }
  if (!doc.contains("modes") || !doc["modes"].is_number_integer()) {
    throw std::runtime_error("instance file: integer field 'modes' is required");
  }
  const long long modes = doc["modes"].get<long long>();
  if (modes < 1 || modes > 4096) {
    throw std::runtime_error("instance file: 'modes' out of range");
  }
  const Eigen::Index m = static_cast<Eigen::Index>(modes);

  LoadedInstance loaded;
  GbsInstance& inst = loaded.instance;

  if (!doc.contains("squeezing") || !doc["squeezing"].is_array() ||
      doc["squeezing"].size() != static_cast<std::size_t>(m)) {
    throw std::runtime_error("instance file: 'squeezing' must be an array of length 'modes'");
  }
  inst.squeezing.resize(m);
  for (Eigen::Index j = 0; j < m; ++j) {
    inst.squeezing(j) = number_at(doc["squeezing"][j], "squeezing entry");
  }

  if (!doc.contains("unitary") || !doc["unitary"].is_array() ||
      doc["unitary"].size() != static_cast<std::size_t>(m)) {
    throw std::runtime_error("instance file: 'unitary' must be a modes x modes array");
  }
  inst.unitary.resize(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const json& row = doc["unitary"][i];
    if (!row.is_array() || row.size() != static_cast<std::size_t>(m)) {
      throw std::runtime_error("instance file: 'unitary' must be a modes x modes array");
    }
    for (Eigen::Index j = 0; j < m; ++j) {
      inst.unitary(i, j) = complex_at(row[j], "unitary entry");
    }
  }

  if (doc.contains("displacement") && !doc["displacement"].is_null()) {
    const json& disp = doc["displacement"];
    if (!disp.is_array() || disp.size() != static_cast<std::size_t>(m)) {
      throw std::runtime_error("instance file: 'displacement' must be an array of length 'modes'");
    }
    inst.displacement.resize(m);
    for (Eigen::Index j = 0; j < m; ++j) {
      inst.displacement(j) = complex_at(disp[j], "displacement entry");
    }
  }

  if (doc.contains("seed") && !doc["seed"].is_null()) {
    if (!doc["seed"].is_number_integer() || doc["seed"].get<long long>() < 0) {
      throw std::runtime_error("instance file: 'seed' must be a non-negative integer");
    }
    loaded.seed = doc["seed"].get<std::uint64_t>();
  }
  return loaded;
}

LoadedInstance read_instance_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) {
    throw std::runtime_error("cannot open instance file: " + path);
  }
  return read_instance(is);
}

void write_instance(std::ostream& os, const GbsInstance& inst,
                    std::optional<std::uint64_t> seed) {
  const Eigen::Index m = inst.modes();
  os << '{';
  if (inst.has_displacement()) {
    os << "\"displacement\":[";
    for (Eigen::Index j = 0; j < m; ++j) {
      if (j) os << ',';
      put_complex(os, inst.displacement(j));
    }
    os << "],";
  }
  os << "\"modes\":" << m << ',';
  if (seed) {
    os << "\"seed\":" << *seed << ',';
  }
  os << "\"squeezing\":[";
  for (Eigen::Index j = 0; j < m; ++j) {
    if (j) os << ',';
    os << format_double(inst.squeezing(j));
  }
  os << "],\"unitary\":[";
  for (Eigen::Index i = 0; i < m; ++i) {
    if (i) os << ',';
    os << '[';
    for (Eigen::Index j = 0; j < m; ++j) {
      if (j) os << ',';
      put_complex(os, inst.unitary(i, j));
    }
    os << ']';
  }
  os << "]}\n";
}

void write_instance_file(const std::string& path, const GbsInstance& inst,
                         std::optional<std::uint64_t> seed) {
  std::ofstream os(path);
  if (!os) {
    throw std::runtime_error("cannot write instance file: " + path);
  }
  write_instance(os, inst, seed);
}

void write_table(std::ostream& os, const ProbabilityTable& table) {
  os << "{\"mass\":" << format_double(table.mass)
     << ",\"n_max\":" << table.n_max << ",\"patterns\":[";
  bool first = true;
  for (const auto& [pattern, p] : table.entries) {
    if (!first) os << ',';
    first = false;
    os << "{\"n\":[";
    for (std::size_t j = 0; j < pattern.size(); ++j) {
      if (j) os << ',';
      os << pattern[j];
    }
    os << "],\"p\":" << format_double(p) << '}';
  }
  os << "]}\n";
}

void write_samples(std::ostream& os, const std::vector<PhotonPattern>& samples,
                   std::uint64_t seed) {
  os << "{\"samples\":[";
  for (std::size_t s = 0; s < samples.size(); ++s) {
    if (s) os << ',';
    os << '[';
    for (std::size_t j = 0; j < samples[s].size(); ++j) {
      if (j) os << ',';
      os << samples[s][j];
    }
    os << ']';
  }
  os << "],\"seed\":" << seed << "}\n";
}

}  // namespace gbs
