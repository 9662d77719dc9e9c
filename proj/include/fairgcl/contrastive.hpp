#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "fairgcl/augment.hpp"
#include "fairgcl/encoder.hpp"
#include "fairgcl/graph.hpp"

namespace fairgcl {

struct TrainConfig {
  double tau = 0.4;
  int epochs = 400;
  double learning_rate = 5e-4;
  double weight_decay = 1e-5;
  std::uint64_t seed = 0;
  int hidden_dim = 256;
  int embed_dim = 256;
  // Adam moments
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

struct TrainReport {
  std::vector<double> loss_per_epoch;
  double wall_time_sec = 0.0;
};

struct Embeddings {
  Eigen::MatrixXd h;  // node representations (downstream input)
  Eigen::MatrixXd z;  // projected, kept for diagnostics
};

// cosine similarity of every row pair; zero-norm rows yield similarity 0 and
// bump *degenerate_rows
Eigen::MatrixXd pairwise_cosine(const Eigen::MatrixXd& z1, const Eigen::MatrixXd& z2,
                                int* degenerate_rows = nullptr);

// single-anchor loss for node i with view 1 as the anchor
double nt_xent_pair_loss(int i, const Eigen::MatrixXd& z1, const Eigen::MatrixXd& z2,
                         double tau);

double total_loss(const Eigen::MatrixXd& z1, const Eigen::MatrixXd& z2, double tau);

struct LossGradient {
  double loss = 0.0;
  Eigen::MatrixXd dz1, dz2;
};
LossGradient loss_gradient(const Eigen::MatrixXd& z1, const Eigen::MatrixXd& z2, double tau);

std::pair<EncoderParams, TrainReport> train(const Graph& g, const AugmentConfig& aug,
                                            const TrainConfig& cfg);

// representations on the original uncorrupted graph
Embeddings embed(const EncoderParams& params, const Graph& g);

}  // namespace fairgcl
