#pragma once

#include <Eigen/Dense>
#include <cstdint>

#include "fairgcl/stats.hpp"

namespace fairgcl {

struct RhoModel {
  Eigen::VectorXd abs_r;
  Eigen::VectorXd keep_prob;
};

struct MonteCarloEstimate {
  double mean = 0.0;
  double stderr_ = 0.0;
};

struct VerificationReport {
  double analytic_adaptive = 0.0;
  double analytic_uniform = 0.0;
  MonteCarloEstimate mc_adaptive;
  MonteCarloEstimate mc_uniform;
  bool majorization_holds = false;
  bool inequality_holds = false;
  int trials = 0;
};

double expected_rho(const RhoModel& model);

RhoModel uniform_counterpart(const RhoModel& model);

MonteCarloEstimate monte_carlo_rho(const RhoModel& model, int trials, std::uint64_t seed);

// prefix-sum dominance of p over q with equal totals (tolerance 1e-12 on the
// total); p is expected sorted non-increasing
bool check_majorization(const Eigen::VectorXd& p, const Eigen::VectorXd& q);

VerificationReport verify_proposition1(const CorrelationReport& report, double p_f,
                                       int trials, std::uint64_t seed);

}  // namespace fairgcl
