#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "fairgcl/graph.hpp"

namespace fairgcl {

enum class CorrMethod { pearson, spearman };

CorrMethod corr_method_from_string(const std::string& name);
std::string to_string(CorrMethod m);

struct CorrResult {
  double r = 0.0;
  double p_value = 1.0;
  bool degenerate = false;  // zero variance in either input
};

struct CorrelationReport {
  CorrMethod method = CorrMethod::pearson;
  Eigen::VectorXd r;         // per feature, signed
  Eigen::VectorXd p_uncorr;  // two-sided p-value per feature
  std::vector<bool> degenerate;
  int n_samples = 0;
};

// regularized incomplete beta I_x(a, b)
double incomplete_beta(double a, double b, double x);

// two-sided p-value of a Student-t statistic with df degrees of freedom
double student_t_two_sided_p(double t, double df);

// mid-ranks (average rank for ties), 1-based
Eigen::VectorXd mid_ranks(const Eigen::VectorXd& x);

CorrResult pearson(const Eigen::VectorXd& x, const Eigen::VectorXd& s);
CorrResult spearman(const Eigen::VectorXd& x, const Eigen::VectorXd& s);

CorrelationReport feature_correlation_report(const Graph& g, CorrMethod method);
CorrelationReport feature_correlation_report(const Eigen::MatrixXd& x,
                                             const Eigen::VectorXi& s, CorrMethod method);

// rho = sum_i |r_i| of per-column Pearson coefficients; degenerate columns
// contribute 0
double total_correlation(const Eigen::MatrixXd& x, const Eigen::VectorXd& s);

}  // namespace fairgcl
