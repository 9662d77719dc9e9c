#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "fairgcl/encoder.hpp"
#include "fairgcl/graph.hpp"

namespace fairgcl {

struct Split {
  std::vector<int> train_idx;
  std::vector<int> test_idx;
  std::uint64_t seed = 0;
  double train_fraction = 0.9;
};

struct LogisticModel {
  Eigen::VectorXd w;
  double b = 0.0;
  bool degenerate = false;  // single-class training set
};

struct FairnessReport {
  double accuracy_mean = 0.0, accuracy_std = 0.0;
  double delta_sp_mean = 0.0, delta_sp_std = 0.0;
  double delta_eo_mean = 0.0, delta_eo_std = 0.0;
  int n_splits = 0;
  std::vector<double> accuracy, delta_sp, delta_eo;  // per split, in [0,1]
  std::vector<std::string> failed_splits;
};

Split split_nodes(int n, double fraction, std::uint64_t seed);

LogisticModel train_logistic(const Eigen::MatrixXd& h_train, const Eigen::VectorXi& y_train,
                             double l2);

double logistic_objective(const Eigen::MatrixXd& h, const Eigen::VectorXi& y,
                          const Eigen::VectorXd& w, double b, double l2);

Eigen::VectorXi predict(const LogisticModel& model, const Eigen::MatrixXd& h);

double statistical_parity(const Eigen::VectorXi& yhat, const Eigen::VectorXi& s);
double equal_opportunity(const Eigen::VectorXi& yhat, const Eigen::VectorXi& y,
                         const Eigen::VectorXi& s);

FairnessReport evaluate_pipeline(const Graph& g, const EncoderParams& params, int n_splits,
                                 double fraction, double l2, std::uint64_t seed);

FairnessReport evaluate_embeddings(const Eigen::MatrixXd& h, const Eigen::VectorXi& y,
                                   const Eigen::VectorXi& s, int n_splits, double fraction,
                                   double l2, std::uint64_t seed);

}  // namespace fairgcl
