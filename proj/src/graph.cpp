#include "fairgcl/graph.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "fairgcl/rng.hpp"

namespace fairgcl {

Graph::Graph(int n_nodes, std::vector<Edge> edges, Eigen::MatrixXd features,
             Eigen::VectorXi sensitive, std::optional<Eigen::VectorXi> labels)
    : n_nodes_(n_nodes),
      edges_(std::move(edges)),
      features_(std::move(features)),
      sensitive_(std::move(sensitive)),
      labels_(std::move(labels)) {
  if (n_nodes_ <= 0) throw std::invalid_argument("graph must have at least one node");
  if (features_.rows() != n_nodes_)
    throw std::invalid_argument("feature matrix row count does not match node count");
  if (sensitive_.size() != n_nodes_)
    throw std::invalid_argument("sensitive vector length does not match node count");
  if (!features_.allFinite())
    throw std::invalid_argument("feature matrix contains non-finite entries");
  for (int i = 0; i < n_nodes_; ++i) {
    if (sensitive_(i) != 0 && sensitive_(i) != 1)
      throw std::invalid_argument("sensitive attribute must be 0 or 1");
  }
  if (labels_) {
    if (labels_->size() != n_nodes_)
      throw std::invalid_argument("label vector length does not match node count");
    for (int i = 0; i < n_nodes_; ++i) {
      if ((*labels_)(i) != 0 && (*labels_)(i) != 1)
        throw std::invalid_argument("labels must be 0 or 1");
    }
  }
  for (auto& [u, v] : edges_) {
    if (u < 0 || v < 0 || u >= n_nodes_ || v >= n_nodes_)
      throw std::invalid_argument("edge endpoint out of range");
    if (u == v) throw std::invalid_argument("self-loops are not stored");
    if (u > v) std::swap(u, v);
  }
  std::sort(edges_.begin(), edges_.end());
  edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
  adj_.assign(n_nodes_, {});
  for (const auto& [u, v] : edges_) {
    adj_[u].push_back(v);
    adj_[v].push_back(u);
  }
  for (auto& nbrs : adj_) std::sort(nbrs.begin(), nbrs.end());
}

bool Graph::has_edge(int i, int j) const {
  if (i == j) return false;
  const auto& nbrs = adj_[i];
  return std::binary_search(nbrs.begin(), nbrs.end(), j);
}

namespace {

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  return lines;
}

Eigen::VectorXi read_binary_column(const std::string& path, const char* what) {
  auto lines = read_lines(path);
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  Eigen::VectorXi v(static_cast<int>(lines.size()));
  for (size_t i = 0; i < lines.size(); ++i) {
    std::istringstream ss(lines[i]);
    int value;
    if (!(ss >> value))
      throw std::runtime_error(std::string("parse error in ") + what + " file at line " +
                               std::to_string(i + 1));
    if (value != 0 && value != 1)
      throw std::runtime_error(std::string(what) + " value must be 0 or 1 at line " +
                               std::to_string(i + 1));
    v(static_cast<int>(i)) = value;
  }
  return v;
}

}  // namespace

Graph load_graph(const std::string& edges_path, const std::string& features_path,
                 const std::string& sensitive_path,
                 const std::optional<std::string>& labels_path, LoadWarnings* warnings) {
  Eigen::VectorXi sensitive = read_binary_column(sensitive_path, "sensitive");
  const int n = static_cast<int>(sensitive.size());

  auto feat_lines = read_lines(features_path);
  while (!feat_lines.empty() && feat_lines.back().empty()) feat_lines.pop_back();
  if (static_cast<int>(feat_lines.size()) != n)
    throw std::runtime_error("feature file row count does not match sensitive file");
  int n_features = -1;
  Eigen::MatrixXd x;
  for (int i = 0; i < n; ++i) {
    std::vector<double> row;
    std::istringstream ss(feat_lines[i]);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        row.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw std::runtime_error("parse error in features file at line " +
                                 std::to_string(i + 1));
      }
    }
    if (n_features < 0) {
      n_features = static_cast<int>(row.size());
      x.resize(n, n_features);
    } else if (static_cast<int>(row.size()) != n_features) {
      throw std::runtime_error("inconsistent column count in features file at line " +
                               std::to_string(i + 1));
    }
    for (int j = 0; j < n_features; ++j) x(i, j) = row[j];
  }

  LoadWarnings w;
  std::set<Edge> seen;
  std::vector<Edge> edges;
  auto edge_lines = read_lines(edges_path);
  for (size_t ln = 0; ln < edge_lines.size(); ++ln) {
    if (edge_lines[ln].empty()) continue;
    std::istringstream ss(edge_lines[ln]);
    long long u, v;
    if (!(ss >> u >> v))
      throw std::runtime_error("parse error in edge file at line " + std::to_string(ln + 1));
    if (u < 0 || v < 0 || u >= n || v >= n)
      throw std::runtime_error("edge endpoint out of range at line " + std::to_string(ln + 1));
    if (u == v) {
      ++w.self_loops;
      continue;
    }
    Edge e{static_cast<int>(std::min(u, v)), static_cast<int>(std::max(u, v))};
    if (!seen.insert(e).second) {
      ++w.duplicate_edges;
      continue;
    }
    edges.push_back(e);
  }

  std::optional<Eigen::VectorXi> labels;
  if (labels_path) {
    labels = read_binary_column(*labels_path, "labels");
    if (labels->size() != n)
      throw std::runtime_error("label file row count does not match sensitive file");
  }
  if (warnings) *warnings = w;
  return Graph(n, std::move(edges), std::move(x), std::move(sensitive), std::move(labels));
}

DegreeStats degree_stats(const Graph& g) {
  DegreeStats s;
  s.degrees.assign(g.n_nodes(), 0);
  for (const auto& [u, v] : g.edges()) {
    ++s.degrees[u];
    ++s.degrees[v];
  }
  long long total = 0;
  for (int d : s.degrees) {
    s.d_max = std::max(s.d_max, d);
    total += d;
  }
  s.d_mean = static_cast<double>(total) / g.n_nodes();
  return s;
}

EdgeGroupCounts edge_group_counts(const Graph& g) {
  EdgeGroupCounts c;
  const auto& s = g.sensitive();
  for (const auto& [u, v] : g.edges()) {
    int a = s(u), b = s(v);
    if (a == b) {
      c.same += 2;
      if (a == 0)
        c.e00 += 2;
      else
        c.e11 += 2;
    } else {
      c.diff += 2;
      ++c.e01;
      ++c.e10;
    }
  }
  return c;
}

std::vector<Edge> monochromatic_triangle_edges(const Graph& g) {
  const auto& s = g.sensitive();
  std::vector<Edge> out;
  for (const auto& [u, v] : g.edges()) {
    if (s(u) != s(v)) continue;
    const auto& nu = g.adjacency()[u];
    const auto& nv = g.adjacency()[v];
    bool in_t = false;
    // sorted-list intersection
    size_t i = 0, j = 0;
    while (i < nu.size() && j < nv.size()) {
      if (nu[i] < nv[j])
        ++i;
      else if (nu[i] > nv[j])
        ++j;
      else {
        if (s(nu[i]) == s(u)) {
          in_t = true;
          break;
        }
        ++i;
        ++j;
      }
    }
    if (in_t) out.push_back({u, v});
  }
  return out;
}

Graph generate_sbm(const SbmSpec& spec, std::uint64_t seed) {
  const int n = spec.nodes_block0 + spec.nodes_block1;
  if (n <= 0) throw std::invalid_argument("SBM spec must have at least one node");
  if (spec.p_within < 0 || spec.p_within > 1 || spec.p_between < 0 || spec.p_between > 1)
    throw std::invalid_argument("SBM probabilities must lie in [0,1]");
  if (spec.n_biased_features > spec.n_features)
    throw std::invalid_argument("n_biased_features exceeds n_features");

  Eigen::VectorXi s(n);
  for (int i = 0; i < n; ++i) s(i) = i < spec.nodes_block0 ? 0 : 1;

  std::vector<Edge> edges;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      double p = s(i) == s(j) ? spec.p_within : spec.p_between;
      std::uint64_t pair_id = static_cast<std::uint64_t>(i) * n + j;
      if (rng::bernoulli(p, {seed, rng::kind_word(rng::Kind::sbm_edge), pair_id}))
        edges.push_back({i, j});
    }
  }

  // Biased features: group-shifted Gaussians so correlation p-values carry
  // signal. Remaining features are independent of S.
  Eigen::MatrixXd x(n, spec.n_features);
  for (int i = 0; i < n; ++i) {
    for (int f = 0; f < spec.n_features; ++f) {
      double z = rng::normal({seed, rng::kind_word(rng::Kind::sbm_feature),
                              static_cast<std::uint64_t>(i), static_cast<std::uint64_t>(f)});
      double shift = f < spec.n_biased_features ? (s(i) == 1 ? 1.0 : -1.0) : 0.0;
      x(i, f) = shift + spec.noise_scale * z;
    }
  }

  // Labels: driven by the last (unbiased) feature with a weak group offset,
  // giving class rates that differ across groups.
  Eigen::VectorXi y(n);
  for (int i = 0; i < n; ++i) {
    double driver = x(i, spec.n_features - 1);
    double offset = 0.25 * (s(i) == 1 ? 1.0 : -1.0);
    double noise = 0.25 * rng::normal({seed, rng::kind_word(rng::Kind::sbm_label),
                                       static_cast<std::uint64_t>(i)});
    y(i) = (driver + offset + noise > 0) ? 1 : 0;
  }

  return Graph(n, std::move(edges), std::move(x), std::move(s), std::move(y));
}

Eigen::SparseMatrix<double> normalized_adjacency(int n_nodes,
                                                 const std::vector<Edge>& edges) {
  std::vector<double> deg(n_nodes, 1.0);  // self-loop
  for (const auto& [u, v] : edges) {
    deg[u] += 1.0;
    deg[v] += 1.0;
  }
  std::vector<double> dinv(n_nodes);
  for (int i = 0; i < n_nodes; ++i) dinv[i] = 1.0 / std::sqrt(deg[i]);

  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(edges.size() * 2 + n_nodes);
  for (int i = 0; i < n_nodes; ++i) trips.emplace_back(i, i, dinv[i] * dinv[i]);
  for (const auto& [u, v] : edges) {
    double w = dinv[u] * dinv[v];
    trips.emplace_back(u, v, w);
    trips.emplace_back(v, u, w);
  }
  Eigen::SparseMatrix<double> a(n_nodes, n_nodes);
  a.setFromTriplets(trips.begin(), trips.end());
  return a;
}

void write_edge_list(const std::string& path, const std::vector<Edge>& edges) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  auto sorted = edges;
  std::sort(sorted.begin(), sorted.end());
  for (const auto& [u, v] : sorted) out << u << '\t' << v << '\n';
}

void write_features_csv(const std::string& path, const Eigen::MatrixXd& x) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  out.precision(17);
  for (int i = 0; i < x.rows(); ++i) {
    for (int j = 0; j < x.cols(); ++j) {
      if (j) out << ',';
      out << x(i, j);
    }
    out << '\n';
  }
}

void write_binary_column(const std::string& path, const Eigen::VectorXi& v) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  for (int i = 0; i < v.size(); ++i) out << v(i) << '\n';
}

}  // namespace fairgcl
