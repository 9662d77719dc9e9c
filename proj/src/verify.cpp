#include "fairgcl/verify.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "fairgcl/augment.hpp"
#include "fairgcl/rng.hpp"

namespace fairgcl {

double expected_rho(const RhoModel& model) {
  return model.keep_prob.dot(model.abs_r);
}

RhoModel uniform_counterpart(const RhoModel& model) {
  RhoModel u;
  u.abs_r = model.abs_r;
  u.keep_prob = Eigen::VectorXd::Constant(model.keep_prob.size(), model.keep_prob.mean());
  return u;
}

MonteCarloEstimate monte_carlo_rho(const RhoModel& model, int trials, std::uint64_t seed) {
  if (trials < 100) throw std::invalid_argument("monte_carlo_rho requires trials >= 100");
  const int f = static_cast<int>(model.abs_r.size());
  double sum = 0.0, sumsq = 0.0;
  for (int t = 0; t < trials; ++t) {
    double rho = 0.0;
    for (int i = 0; i < f; ++i) {
      if (rng::bernoulli(model.keep_prob(i),
                         {seed, rng::kind_word(rng::Kind::mc_trial),
                          static_cast<std::uint64_t>(t), static_cast<std::uint64_t>(i)}))
        rho += model.abs_r(i);
    }
    sum += rho;
    sumsq += rho * rho;
  }
  MonteCarloEstimate est;
  est.mean = sum / trials;
  double var = std::max(0.0, sumsq / trials - est.mean * est.mean);
  est.stderr_ = std::sqrt(var / trials);
  return est;
}

bool check_majorization(const Eigen::VectorXd& p, const Eigen::VectorXd& q) {
  if (p.size() != q.size()) throw std::invalid_argument("majorization length mismatch");
  const int n = static_cast<int>(p.size());
  double sp = 0.0, sq = 0.0;
  for (int k = 0; k < n; ++k) {
    sp += p(k);
    sq += q(k);
    if (k < n - 1 && sp < sq - 1e-12) return false;
  }
  return std::fabs(sp - sq) <= 1e-12;
}

VerificationReport verify_proposition1(const CorrelationReport& report, double p_f,
                                       int trials, std::uint64_t seed) {
  FeatureMaskPlan plan = feature_mask_plan(report, p_f);

  RhoModel adaptive;
  adaptive.keep_prob = plan.keep_prob;
  adaptive.abs_r = report.r.cwiseAbs();
  for (size_t i = 0; i < report.degenerate.size(); ++i)
    if (report.degenerate[i]) adaptive.abs_r(static_cast<int>(i)) = 0.0;

  RhoModel uniform = uniform_counterpart(adaptive);

  VerificationReport out;
  out.trials = trials;
  out.analytic_adaptive = expected_rho(adaptive);
  out.analytic_uniform = expected_rho(uniform);
  out.inequality_holds = out.analytic_adaptive <= out.analytic_uniform + 1e-12;

  // the proof's ordering: keep probs non-increasing, paired |r_i| non-decreasing
  const int f = static_cast<int>(adaptive.keep_prob.size());
  std::vector<int> order(f);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return adaptive.keep_prob(a) > adaptive.keep_prob(b);
  });
  Eigen::VectorXd sorted_p(f);
  for (int i = 0; i < f; ++i) sorted_p(i) = adaptive.keep_prob(order[i]);
  out.majorization_holds = check_majorization(sorted_p, uniform.keep_prob);

  out.mc_adaptive = monte_carlo_rho(adaptive, trials, rng::hash_words({seed, 1}));
  out.mc_uniform = monte_carlo_rho(uniform, trials, rng::hash_words({seed, 2}));
  return out;
}

}  // namespace fairgcl
