#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace fairgcl {

using Edge = std::pair<int, int>;  // stored with first < second

// Immutable undirected graph: symmetric 0/1 adjacency without self-loops,
// node features, binary sensitive attribute, optional binary labels.
class Graph {
 public:
  Graph(int n_nodes, std::vector<Edge> edges, Eigen::MatrixXd features,
        Eigen::VectorXi sensitive,
        std::optional<Eigen::VectorXi> labels = std::nullopt);

  int n_nodes() const { return n_nodes_; }
  int n_features() const { return static_cast<int>(features_.cols()); }
  int n_edges() const { return static_cast<int>(edges_.size()); }

  const std::vector<Edge>& edges() const { return edges_; }
  const Eigen::MatrixXd& features() const { return features_; }
  const Eigen::VectorXi& sensitive() const { return sensitive_; }
  bool has_labels() const { return labels_.has_value(); }
  const Eigen::VectorXi& labels() const { return *labels_; }

  // sorted neighbor list per node
  const std::vector<std::vector<int>>& adjacency() const { return adj_; }
  bool has_edge(int i, int j) const;

 private:
  int n_nodes_;
  std::vector<Edge> edges_;
  std::vector<std::vector<int>> adj_;
  Eigen::MatrixXd features_;
  Eigen::VectorXi sensitive_;
  std::optional<Eigen::VectorXi> labels_;
};

struct EdgeGroupCounts {
  // directed edge instances: each undirected edge counted once per orientation
  std::int64_t same = 0;   // |E_s|
  std::int64_t diff = 0;   // |E_d|
  std::int64_t e00 = 0, e01 = 0, e10 = 0, e11 = 0;
};

struct DegreeStats {
  std::vector<int> degrees;
  int d_max = 0;
  double d_mean = 0.0;
};

struct SbmSpec {
  int nodes_block0 = 0;
  int nodes_block1 = 0;
  double p_within = 0.0;
  double p_between = 0.0;
  int n_features = 0;
  int n_biased_features = 0;
  double noise_scale = 1.0;
};

struct LoadWarnings {
  int duplicate_edges = 0;
  int self_loops = 0;
};

Graph load_graph(const std::string& edges_path, const std::string& features_path,
                 const std::string& sensitive_path,
                 const std::optional<std::string>& labels_path = std::nullopt,
                 LoadWarnings* warnings = nullptr);

DegreeStats degree_stats(const Graph& g);
EdgeGroupCounts edge_group_counts(const Graph& g);

// Edges participating in at least one triangle whose three nodes share one
// sensitive value.
std::vector<Edge> monochromatic_triangle_edges(const Graph& g);

Graph generate_sbm(const SbmSpec& spec, std::uint64_t seed);

// A-hat = D^{-1/2} (A' + I) D^{-1/2} over the given edge set
Eigen::SparseMatrix<double> normalized_adjacency(int n_nodes,
                                                 const std::vector<Edge>& edges);

// export helpers (formats match load_graph's inputs)
void write_edge_list(const std::string& path, const std::vector<Edge>& edges);
void write_features_csv(const std::string& path, const Eigen::MatrixXd& x);
void write_binary_column(const std::string& path, const Eigen::VectorXi& v);

}  // namespace fairgcl
