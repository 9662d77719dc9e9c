#include "fairgcl/evaluate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "fairgcl/contrastive.hpp"
#include "fairgcl/rng.hpp"

namespace fairgcl {

Split split_nodes(int n, double fraction, std::uint64_t seed) {
  if (!(fraction > 0.0 && fraction < 1.0))
    throw std::invalid_argument("train fraction must lie in (0,1)");
  int n_train = static_cast<int>(std::lround(fraction * n));
  if (n_train <= 0 || n_train >= n)
    throw std::invalid_argument("train fraction yields an empty train or test set");

  // Fisher-Yates driven by counter-based draws
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  for (int i = n - 1; i > 0; --i) {
    double u = rng::uniform({seed, rng::kind_word(rng::Kind::node_split),
                             static_cast<std::uint64_t>(i)});
    int j = static_cast<int>(u * (i + 1));
    std::swap(perm[i], perm[j]);
  }
  Split sp;
  sp.seed = seed;
  sp.train_fraction = fraction;
  sp.train_idx.assign(perm.begin(), perm.begin() + n_train);
  sp.test_idx.assign(perm.begin() + n_train, perm.end());
  std::sort(sp.train_idx.begin(), sp.train_idx.end());
  std::sort(sp.test_idx.begin(), sp.test_idx.end());
  return sp;
}

double logistic_objective(const Eigen::MatrixXd& h, const Eigen::VectorXi& y,
                          const Eigen::VectorXd& w, double b, double l2) {
  const int n = static_cast<int>(h.rows());
  Eigen::VectorXd z = h * w;
  z.array() += b;
  double loss = 0.0;
  for (int i = 0; i < n; ++i) {
    // log(1 + e^z) - y z, stable for either sign
    double zi = z(i);
    double softplus = zi > 0 ? zi + std::log1p(std::exp(-zi)) : std::log1p(std::exp(zi));
    loss += softplus - y(i) * zi;
  }
  return loss / n + 0.5 * l2 * w.squaredNorm();
}

LogisticModel train_logistic(const Eigen::MatrixXd& h_train, const Eigen::VectorXi& y_train,
                             double l2) {
  const int n = static_cast<int>(h_train.rows());
  const int d = static_cast<int>(h_train.cols());
  if (y_train.size() != n) throw std::invalid_argument("label length mismatch");

  int pos = 0;
  for (int i = 0; i < n; ++i) pos += y_train(i);
  LogisticModel model;
  model.w = Eigen::VectorXd::Zero(d);
  if (pos == 0 || pos == n) {
    // constant classifier via a saturated bias
    model.b = pos == n ? 50.0 : -50.0;
    model.degenerate = true;
    return model;
  }

  double b = 0.0;
  Eigen::VectorXd w = Eigen::VectorXd::Zero(d);
  double obj = logistic_objective(h_train, y_train, w, b, l2);
  constexpr int kMaxIter = 5000;
  constexpr double kGradTol = 1e-6;

  for (int it = 0; it < kMaxIter; ++it) {
    Eigen::VectorXd z = h_train * w;
    z.array() += b;
    Eigen::VectorXd sig = (1.0 / (1.0 + (-z.array()).exp())).matrix();
    Eigen::VectorXd resid = sig - y_train.cast<double>();
    Eigen::VectorXd gw = h_train.transpose() * resid / n + l2 * w;
    double gb = resid.mean();
    double gnorm = std::sqrt(gw.squaredNorm() + gb * gb);
    if (gnorm < kGradTol) break;

    // backtracking line search (Armijo)
    double step = 1.0;
    double gsq = gw.squaredNorm() + gb * gb;
    while (step > 1e-16) {
      Eigen::VectorXd w_new = w - step * gw;
      double b_new = b - step * gb;
      double obj_new = logistic_objective(h_train, y_train, w_new, b_new, l2);
      if (obj_new <= obj - 1e-4 * step * gsq) {
        w = std::move(w_new);
        b = b_new;
        obj = obj_new;
        break;
      }
      step *= 0.5;
    }
  }
  model.w = std::move(w);
  model.b = b;
  return model;
}

Eigen::VectorXi predict(const LogisticModel& model, const Eigen::MatrixXd& h) {
  if (h.cols() != model.w.size()) throw std::invalid_argument("predict dimension mismatch");
  Eigen::VectorXd z = h * model.w;
  z.array() += model.b;
  Eigen::VectorXi yhat(h.rows());
  // sigmoid(z) >= 0.5 iff z >= 0; ties go to the positive class
  for (int i = 0; i < h.rows(); ++i) yhat(i) = z(i) >= 0.0 ? 1 : 0;
  return yhat;
}

double statistical_parity(const Eigen::VectorXi& yhat, const Eigen::VectorXi& s) {
  long long n0 = 0, n1 = 0, pos0 = 0, pos1 = 0;
  for (int i = 0; i < yhat.size(); ++i) {
    if (s(i) == 0) {
      ++n0;
      pos0 += yhat(i);
    } else {
      ++n1;
      pos1 += yhat(i);
    }
  }
  if (n0 == 0) throw std::runtime_error("statistical parity undefined: group s=0 is empty");
  if (n1 == 0) throw std::runtime_error("statistical parity undefined: group s=1 is empty");
  return std::fabs(static_cast<double>(pos0) / n0 - static_cast<double>(pos1) / n1);
}

double equal_opportunity(const Eigen::VectorXi& yhat, const Eigen::VectorXi& y,
                         const Eigen::VectorXi& s) {
  long long n0 = 0, n1 = 0, tp0 = 0, tp1 = 0;
  for (int i = 0; i < yhat.size(); ++i) {
    if (y(i) != 1) continue;
    if (s(i) == 0) {
      ++n0;
      tp0 += yhat(i);
    } else {
      ++n1;
      tp1 += yhat(i);
    }
  }
  if (n0 == 0)
    throw std::runtime_error("equal opportunity undefined: stratum (y=1, s=0) is empty");
  if (n1 == 0)
    throw std::runtime_error("equal opportunity undefined: stratum (y=1, s=1) is empty");
  return std::fabs(static_cast<double>(tp0) / n0 - static_cast<double>(tp1) / n1);
}

namespace {

std::pair<double, double> mean_std(const std::vector<double>& xs) {
  if (xs.empty()) return {0.0, 0.0};
  double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / xs.size();
  double var = 0.0;
  for (double x : xs) var += (x - mean) * (x - mean);
  var /= xs.size();
  return {mean, std::sqrt(var)};
}

Eigen::MatrixXd take_rows(const Eigen::MatrixXd& m, const std::vector<int>& idx) {
  Eigen::MatrixXd out(idx.size(), m.cols());
  for (size_t i = 0; i < idx.size(); ++i) out.row(i) = m.row(idx[i]);
  return out;
}

Eigen::VectorXi take(const Eigen::VectorXi& v, const std::vector<int>& idx) {
  Eigen::VectorXi out(idx.size());
  for (size_t i = 0; i < idx.size(); ++i) out(i) = v(idx[i]);
  return out;
}

}  // namespace

FairnessReport evaluate_embeddings(const Eigen::MatrixXd& h, const Eigen::VectorXi& y,
                                   const Eigen::VectorXi& s, int n_splits, double fraction,
                                   double l2, std::uint64_t seed) {
  FairnessReport rep;
  rep.n_splits = n_splits;
  const int n = static_cast<int>(h.rows());
  for (int k = 0; k < n_splits; ++k) {
    std::uint64_t split_seed = rng::hash_words({seed, static_cast<std::uint64_t>(k)});
    try {
      Split sp = split_nodes(n, fraction, split_seed);
      LogisticModel model =
          train_logistic(take_rows(h, sp.train_idx), take(y, sp.train_idx), l2);
      Eigen::VectorXi yhat = predict(model, take_rows(h, sp.test_idx));
      Eigen::VectorXi y_test = take(y, sp.test_idx);
      Eigen::VectorXi s_test = take(s, sp.test_idx);
      double acc = (yhat.array() == y_test.array()).cast<double>().mean();
      rep.accuracy.push_back(acc);
      rep.delta_sp.push_back(statistical_parity(yhat, s_test));
      rep.delta_eo.push_back(equal_opportunity(yhat, y_test, s_test));
    } catch (const std::exception& e) {
      rep.failed_splits.push_back("split " + std::to_string(k) + ": " + e.what());
    }
  }
  std::tie(rep.accuracy_mean, rep.accuracy_std) = mean_std(rep.accuracy);
  std::tie(rep.delta_sp_mean, rep.delta_sp_std) = mean_std(rep.delta_sp);
  std::tie(rep.delta_eo_mean, rep.delta_eo_std) = mean_std(rep.delta_eo);
  return rep;
}

FairnessReport evaluate_pipeline(const Graph& g, const EncoderParams& params, int n_splits,
                                 double fraction, double l2, std::uint64_t seed) {
  if (!g.has_labels()) throw std::invalid_argument("evaluation requires node labels");
  Embeddings emb = embed(params, g);
  return evaluate_embeddings(emb.h, g.labels(), g.sensitive(), n_splits, fraction, l2, seed);
}

}  // namespace fairgcl
