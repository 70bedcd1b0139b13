#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "fpp/lattice.hpp"
#include "fpp/metric.hpp"
#include "fpp/passage.hpp"
#include "fpp/path_tools.hpp"

namespace fpp {

// full-precision decimal rendering (17 significant digits round-trips)
std::string format_double(double v);

// one line per edge `x1 .. xd axis weight`, plus a header carrying box
// bounds, law and seed provenance; lossless round trip
std::string dump_configuration(const WeightConfiguration& cfg);
WeightConfiguration load_configuration(const std::string& text);

// triangular CSV with a header naming the window, resolution and bounds
std::string dump_grid_metric(const GridMetric& D, const std::string& label);

std::string dump_point_set(const std::vector<Vec>& pts, const std::string& schema);

std::string dump_geodesic(const GeodesicPath& path);

// per-tile seminorm descriptors plus the window and bounds
std::string dump_gradient_field(const GradientField& field);
GradientField load_gradient_field(const std::string& text);

// rows (t, j(t), alpha_{j(t)}) at the jump instants
std::string dump_discretized_path(const DiscretizedPath& path);

// flat key-value experiment spec: `key = value` lines, '#' comments
class ExperimentSpec {
 public:
  static ExperimentSpec parse_file(const std::string& path);
  static ExperimentSpec parse(const std::string& text);

  bool has(const std::string& key) const;
  const std::string& get(const std::string& key) const;
  std::string get_or(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key) const;
  long long get_int(const std::string& key) const;
  std::vector<int> get_int_list(const std::string& key) const;
  Vec get_vec(const std::string& key) const;

  // marks a key as consumed; unknown (never-consumed) keys are rejected
  void expect_all_consumed() const;

  const std::map<std::string, std::string>& entries() const { return kv_; }

 private:
  std::map<std::string, std::string> kv_;
  mutable std::map<std::string, bool> seen_;
};

// atomic write: temp file in the same directory, then rename
void write_file_atomic(const std::string& path, const std::string& content);

std::string read_file(const std::string& path);

std::uint64_t fnv1a(const std::string& bytes);

}  // namespace fpp
