#include "fairgcl/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace fairgcl {

CorrMethod corr_method_from_string(const std::string& name) {
  if (name == "pearson") return CorrMethod::pearson;
  if (name == "spearman") return CorrMethod::spearman;
  throw std::invalid_argument("unknown correlation method: " + name);
}

std::string to_string(CorrMethod m) {
  return m == CorrMethod::pearson ? "pearson" : "spearman";
}

namespace {

// continued fraction for the incomplete beta (Lentz)
double betacf(double a, double b, double x) {
  constexpr int kMaxIter = 300;
  constexpr double kEps = 1e-15;
  constexpr double kTiny = 1e-300;
  double qab = a + b, qap = a + 1.0, qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kEps) break;
  }
  return h;
}

}  // namespace

double incomplete_beta(double a, double b, double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                    a * std::log(x) + b * std::log1p(-x);
  double front = std::exp(ln_front);
  if (x < (a + 1.0) / (a + b + 2.0)) return front * betacf(a, b, x) / a;
  return 1.0 - front * betacf(b, a, 1.0 - x) / b;
}

double student_t_two_sided_p(double t, double df) {
  if (!std::isfinite(t)) return 0.0;
  double x = df / (df + t * t);
  return incomplete_beta(df / 2.0, 0.5, x);
}

Eigen::VectorXd mid_ranks(const Eigen::VectorXd& x) {
  const int n = static_cast<int>(x.size());
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) { return x(a) < x(b); });
  Eigen::VectorXd ranks(n);
  int i = 0;
  while (i < n) {
    int j = i;
    while (j + 1 < n && x(order[j + 1]) == x(order[i])) ++j;
    double avg = 0.5 * (i + j) + 1.0;  // 1-based average rank of the tie block
    for (int k = i; k <= j; ++k) ranks(order[k]) = avg;
    i = j + 1;
  }
  return ranks;
}

CorrResult pearson(const Eigen::VectorXd& x, const Eigen::VectorXd& s) {
  const int n = static_cast<int>(x.size());
  if (n < 3) throw std::invalid_argument("pearson requires at least 3 samples");
  if (s.size() != n) throw std::invalid_argument("pearson input length mismatch");

  const double mx = x.mean(), ms = s.mean();
  double sxx = 0.0, sss = 0.0, sxs = 0.0;
  for (int i = 0; i < n; ++i) {
    double dx = x(i) - mx, ds = s(i) - ms;
    sxx += dx * dx;
    sss += ds * ds;
    sxs += dx * ds;
  }
  if (sxx == 0.0 || sss == 0.0) return {0.0, 1.0, true};

  double r = sxs / std::sqrt(sxx * sss);
  r = std::clamp(r, -1.0, 1.0);
  if (std::fabs(r) >= 1.0) return {r, 0.0, false};
  const double df = n - 2;
  double t = r * std::sqrt(df / (1.0 - r * r));
  return {r, student_t_two_sided_p(t, df), false};
}

CorrResult spearman(const Eigen::VectorXd& x, const Eigen::VectorXd& s) {
  return pearson(mid_ranks(x), mid_ranks(s));
}

CorrelationReport feature_correlation_report(const Eigen::MatrixXd& x,
                                             const Eigen::VectorXi& s, CorrMethod method) {
  const int n = static_cast<int>(x.rows());
  const int f = static_cast<int>(x.cols());
  if (n < 3) throw std::invalid_argument("correlation report requires at least 3 nodes");
  Eigen::VectorXd sd = s.cast<double>();
  CorrelationReport rep;
  rep.method = method;
  rep.r.resize(f);
  rep.p_uncorr.resize(f);
  rep.degenerate.resize(f);
  rep.n_samples = n;
  for (int j = 0; j < f; ++j) {
    CorrResult c = method == CorrMethod::pearson ? pearson(x.col(j), sd)
                                                 : spearman(x.col(j), sd);
    rep.r(j) = c.r;
    rep.p_uncorr(j) = c.p_value;
    rep.degenerate[j] = c.degenerate;
  }
  return rep;
}

CorrelationReport feature_correlation_report(const Graph& g, CorrMethod method) {
  return feature_correlation_report(g.features(), g.sensitive(), method);
}

double total_correlation(const Eigen::MatrixXd& x, const Eigen::VectorXd& s) {
  double rho = 0.0;
  for (int j = 0; j < x.cols(); ++j) {
    CorrResult c = pearson(x.col(j), s);
    if (!c.degenerate) rho += std::fabs(c.r);
  }
  return rho;
}

}  // namespace fairgcl
