#include "fpp/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace fpp {

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string dump_configuration(const WeightConfiguration& cfg) {
  std::ostringstream os;
  const LatticeBox& box = cfg.box();
  os << "# fpp configuration v1\n";
  os << "dim " << box.dim() << "\n";
  os << "lower";
  for (long v : box.lower()) os << " " << v;
  os << "\nupper";
  for (long v : box.upper()) os << " " << v;
  os << "\nlaw " << cfg.law().describe() << "\n";
  os << "seed " << cfg.master_seed() << " " << cfg.stream() << "\n";
  os << "edges " << box.edge_count() << "\n";
  box.for_each_edge([&](const IVec& base, int axis, long slot) {
    for (long c : base) os << c << " ";
    os << axis << " " << format_double(cfg.weight(slot)) << "\n";
  });
  return os.str();
}

WeightConfiguration load_configuration(const std::string& text) {
  std::istringstream is(text);
  std::string line, tok;
  int d = 0;
  IVec lo, hi;
  std::string law_text;
  std::uint64_t seed = 0, stream = 0;
  long edges = -1;

  auto next_line = [&]() -> bool {
    while (std::getline(is, line)) {
      if (!line.empty() && line[0] != '#') return true;
    }
    return false;
  };

  while (next_line()) {
    std::istringstream ls(line);
    ls >> tok;
    if (tok == "dim") {
      ls >> d;
    } else if (tok == "lower") {
      long v;
      while (ls >> v) lo.push_back(v);
    } else if (tok == "upper") {
      long v;
      while (ls >> v) hi.push_back(v);
    } else if (tok == "law") {
      std::getline(ls, law_text);
    } else if (tok == "seed") {
      ls >> seed >> stream;
    } else if (tok == "edges") {
      ls >> edges;
      break;
    } else {
      throw invalid_input("load_configuration: unknown header line: " + line);
    }
  }
  if (d == 0 || lo.empty() || law_text.empty() || edges < 0)
    throw invalid_input("load_configuration: incomplete header");

  LatticeBox box(lo, hi);
  WeightConfiguration cfg(box, BoundedLaw::parse(law_text), seed, stream);
  long count = 0;
  while (next_line()) {
    std::istringstream ls(line);
    IVec base(d);
    int axis;
    double w;
    for (int i = 0; i < d; ++i) ls >> base[i];
    ls >> axis >> w;
    if (!ls) throw invalid_input("load_configuration: bad edge line: " + line);
    cfg.set_weight(box.edge_slot(base, axis), w);
    ++count;
  }
  if (count != edges)
    throw invalid_input("load_configuration: edge count mismatch");
  return cfg;
}

std::string dump_grid_metric(const GridMetric& D, const std::string& label) {
  std::ostringstream os;
  os << "# schema: i,j,xi...,xj...,distance (triangular; label=" << label
     << " window=" << D.window().describe() << " k=" << D.resolution()
     << " a=" << format_double(D.bound_a()) << " b=" << format_double(D.bound_b())
     << ")\n";
  for (int i = 0; i < D.size(); ++i)
    for (int j = i; j < D.size(); ++j) {
      os << i << "," << j;
      for (double c : D.point(i)) os << "," << format_double(c);
      for (double c : D.point(j)) os << "," << format_double(c);
      os << "," << format_double(D.value(i, j)) << "\n";
    }
  return os.str();
}

std::string dump_point_set(const std::vector<Vec>& pts, const std::string& schema) {
  std::ostringstream os;
  os << "# schema: " << schema << "\n";
  for (const Vec& p : pts) {
    for (std::size_t i = 0; i < p.size(); ++i)
      os << (i ? "," : "") << format_double(p[i]);
    os << "\n";
  }
  return os.str();
}

std::string dump_geodesic(const GeodesicPath& path) {
  std::ostringstream os;
  os << "# schema: x...,segment_time (polyline; total="
     << format_double(path.total_time) << ")\n";
  for (std::size_t i = 0; i < path.points.size(); ++i) {
    for (std::size_t c = 0; c < path.points[i].size(); ++c)
      os << (c ? "," : "") << format_double(path.points[i][c]);
    os << "," << (i == 0 ? "0" : format_double(path.segment_times[i - 1])) << "\n";
  }
  return os.str();
}

std::string dump_discretized_path(const DiscretizedPath& path) {
  std::ostringstream os;
  os << "# schema: t,j,alpha... (jump instants; lambda="
     << format_double(path.lambda) << ")\n";
  for (long j = 0; j <= path.p(); ++j) {
    double t = j == 0 ? 0.0 : path.jump_times[j - 1];
    os << format_double(t) << "," << j;
    for (long c : path.alpha[j]) os << "," << c;
    os << "\n";
  }
  return os.str();
}

std::string dump_gradient_field(const GradientField& field) {
  std::ostringstream os;
  os << "# fpp gradient-field v1\n";
  os << "window " << field.window().describe() << "\n";
  os << "bounds " << format_double(field.bound_a()) << " "
     << format_double(field.bound_b()) << "\n";
  os << "tiles_per_axis " << field.tiles_per_axis() << "\n";
  for (const Seminorm& g : field.tiles()) os << g.describe() << "\n";
  return os.str();
}

GradientField load_gradient_field(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  ConvexWindow window;
  double a = 0, b = 0;
  int t = 0;
  std::vector<Seminorm> tiles;
  bool have_window = false;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string tok;
    ls >> tok;
    if (tok == "window") {
      std::string rest;
      std::getline(ls, rest);
      window = ConvexWindow::parse(rest);
      have_window = true;
    } else if (tok == "bounds") {
      ls >> a >> b;
    } else if (tok == "tiles_per_axis") {
      ls >> t;
    } else {
      tiles.push_back(Seminorm::parse(line));
    }
  }
  if (!have_window || t == 0)
    throw invalid_input("load_gradient_field: incomplete file");
  return GradientField::tiled(window, a, b, t, std::move(tiles));
}

// ---------------------------------------------------------------------------

ExperimentSpec ExperimentSpec::parse(const std::string& text) {
  ExperimentSpec spec;
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    // trim
    auto l = line.find_first_not_of(" \t\r");
    if (l == std::string::npos) continue;
    auto r = line.find_last_not_of(" \t\r");
    line = line.substr(l, r - l + 1);
    std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw invalid_input("spec line " + std::to_string(lineno) +
                          ": expected key = value");
    std::string key = line.substr(0, eq);
    std::string val = line.substr(eq + 1);
    auto trim = [](std::string s) {
      auto a = s.find_first_not_of(" \t");
      auto b = s.find_last_not_of(" \t");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    key = trim(key);
    val = trim(val);
    if (key.empty())
      throw invalid_input("spec line " + std::to_string(lineno) + ": empty key");
    if (spec.kv_.count(key))
      throw invalid_input("spec: duplicate key " + key);
    spec.kv_[key] = val;
  }
  return spec;
}

ExperimentSpec ExperimentSpec::parse_file(const std::string& path) {
  return parse(read_file(path));
}

bool ExperimentSpec::has(const std::string& key) const {
  auto it = kv_.find(key);
  if (it != kv_.end()) seen_[key] = true;
  return it != kv_.end();
}

const std::string& ExperimentSpec::get(const std::string& key) const {
  auto it = kv_.find(key);
  if (it == kv_.end()) throw invalid_input("spec: missing key " + key);
  seen_[key] = true;
  return it->second;
}

std::string ExperimentSpec::get_or(const std::string& key,
                                   const std::string& fallback) const {
  return has(key) ? get(key) : fallback;
}

double ExperimentSpec::get_double(const std::string& key) const {
  return std::stod(get(key));
}

long long ExperimentSpec::get_int(const std::string& key) const {
  return std::stoll(get(key));
}

std::vector<int> ExperimentSpec::get_int_list(const std::string& key) const {
  std::istringstream is(get(key));
  std::vector<int> out;
  int v;
  while (is >> v) out.push_back(v);
  if (out.empty()) throw invalid_input("spec: empty list for " + key);
  return out;
}

Vec ExperimentSpec::get_vec(const std::string& key) const {
  std::istringstream is(get(key));
  Vec out;
  double v;
  while (is >> v) out.push_back(v);
  if (out.empty()) throw invalid_input("spec: empty vector for " + key);
  return out;
}

void ExperimentSpec::expect_all_consumed() const {
  for (const auto& [k, v] : kv_)
    if (!seen_.count(k)) throw invalid_input("spec: unknown key " + k);
}

void write_file_atomic(const std::string& path, const std::string& content) {
  std::string tmp = path + ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw invalid_input("cannot open " + tmp + " for writing");
    os << content;
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    throw invalid_input("cannot rename " + tmp + " to " + path);
}

std::string read_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw invalid_input("cannot open " + path);
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace fpp
