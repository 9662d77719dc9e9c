#pragma once

#include <Eigen/Dense>
#include <random>
#include <vector>

#include "fairgcl/graph.hpp"

namespace testutil {

// random Erdos-Renyi style graph with random binary sensitive attribute
inline fairgcl::Graph random_graph(std::mt19937& gen, int max_nodes = 30,
                                   int n_features = 3, double edge_prob = 0.25) {
  std::uniform_int_distribution<int> nd(3, max_nodes);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::normal_distribution<double> norm(0.0, 1.0);
  int n = nd(gen);
  std::vector<fairgcl::Edge> edges;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (unif(gen) < edge_prob) edges.push_back({i, j});
  Eigen::MatrixXd x(n, n_features);
  for (int i = 0; i < n; ++i)
    for (int f = 0; f < n_features; ++f) x(i, f) = norm(gen);
  Eigen::VectorXi s(n);
  for (int i = 0; i < n; ++i) s(i) = unif(gen) < 0.5 ? 0 : 1;
  // keep both groups nonempty
  s(0) = 0;
  s(n - 1) = 1;
  Eigen::VectorXi y(n);
  for (int i = 0; i < n; ++i) y(i) = unif(gen) < 0.5 ? 0 : 1;
  return fairgcl::Graph(n, std::move(edges), std::move(x), std::move(s), std::move(y));
}

}  // namespace testutil
