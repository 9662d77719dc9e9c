#include "fairgcl/contrastive.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

#include "fairgcl/rng.hpp"

namespace fairgcl {

namespace {

// row-normalized copy; zero rows stay zero
Eigen::MatrixXd unit_rows(const Eigen::MatrixXd& z, Eigen::VectorXd* norms,
                          int* degenerate) {
  Eigen::MatrixXd u = z;
  if (norms) norms->resize(z.rows());
  for (int i = 0; i < z.rows(); ++i) {
    double n = z.row(i).norm();
    if (norms) (*norms)(i) = n;
    if (n > 0.0)
      u.row(i) /= n;
    else {
      u.row(i).setZero();
      if (degenerate) ++*degenerate;
    }
  }
  return u;
}

double log_sum_exp(const std::vector<double>& terms) {
  double m = terms[0];
  for (double t : terms) m = std::max(m, t);
  double s = 0.0;
  for (double t : terms) s += std::exp(t - m);
  return m + std::log(s);
}

}  // namespace

Eigen::MatrixXd pairwise_cosine(const Eigen::MatrixXd& z1, const Eigen::MatrixXd& z2,
                                int* degenerate_rows) {
  if (z1.cols() != z2.cols()) throw std::invalid_argument("cosine input width mismatch");
  int degen = 0;
  Eigen::MatrixXd u1 = unit_rows(z1, nullptr, &degen);
  Eigen::MatrixXd u2 = unit_rows(z2, nullptr, &degen);
  if (degenerate_rows) *degenerate_rows = degen;
  return u1 * u2.transpose();
}

namespace {

// anchor loss from precomputed similarity rows: s12 row of the anchor against
// the other view, s_intra row within the anchor view
double anchor_loss(int i, const Eigen::RowVectorXd& s12_row,
                   const Eigen::RowVectorXd& s_intra_row, double tau) {
  const int n = static_cast<int>(s12_row.size());
  std::vector<double> terms;
  terms.reserve(2 * n - 1);
  for (int k = 0; k < n; ++k) terms.push_back(s12_row(k) / tau);
  for (int k = 0; k < n; ++k)
    if (k != i) terms.push_back(s_intra_row(k) / tau);
  return -s12_row(i) / tau + log_sum_exp(terms);
}

}  // namespace

double nt_xent_pair_loss(int i, const Eigen::MatrixXd& z1, const Eigen::MatrixXd& z2,
                         double tau) {
  if (tau <= 0.0) throw std::invalid_argument("tau must be positive");
  Eigen::MatrixXd u1 = unit_rows(z1, nullptr, nullptr);
  Eigen::MatrixXd u2 = unit_rows(z2, nullptr, nullptr);
  Eigen::RowVectorXd s12 = u1.row(i) * u2.transpose();
  Eigen::RowVectorXd s11 = u1.row(i) * u1.transpose();
  return anchor_loss(i, s12, s11, tau);
}

double total_loss(const Eigen::MatrixXd& z1, const Eigen::MatrixXd& z2, double tau) {
  if (tau <= 0.0) throw std::invalid_argument("tau must be positive");
  const int n = static_cast<int>(z1.rows());
  Eigen::MatrixXd u1 = unit_rows(z1, nullptr, nullptr);
  Eigen::MatrixXd u2 = unit_rows(z2, nullptr, nullptr);
  Eigen::MatrixXd s12 = u1 * u2.transpose();
  Eigen::MatrixXd s11 = u1 * u1.transpose();
  Eigen::MatrixXd s22 = u2 * u2.transpose();
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    total += anchor_loss(i, s12.row(i), s11.row(i), tau);
    total += anchor_loss(i, s12.col(i).transpose(), s22.row(i), tau);
  }
  return total / (2.0 * n);
}

LossGradient loss_gradient(const Eigen::MatrixXd& z1, const Eigen::MatrixXd& z2,
                           double tau) {
  if (tau <= 0.0) throw std::invalid_argument("tau must be positive");
  const int n = static_cast<int>(z1.rows());
  Eigen::VectorXd norms1, norms2;
  Eigen::MatrixXd u1 = unit_rows(z1, &norms1, nullptr);
  Eigen::MatrixXd u2 = unit_rows(z2, &norms2, nullptr);
  Eigen::MatrixXd s12 = u1 * u2.transpose();
  Eigen::MatrixXd s11 = u1 * u1.transpose();
  Eigen::MatrixXd s22 = u2 * u2.transpose();

  // accumulated d(total anchor losses)/d(similarity entry)
  Eigen::MatrixXd a12 = Eigen::MatrixXd::Zero(n, n);
  Eigen::MatrixXd a11 = Eigen::MatrixXd::Zero(n, n);
  Eigen::MatrixXd a22 = Eigen::MatrixXd::Zero(n, n);
  double total = 0.0;

  auto accumulate_anchor = [&](int i, const Eigen::RowVectorXd& cross,
                               const Eigen::RowVectorXd& intra, auto&& add_cross,
                               Eigen::MatrixXd& a_intra) {
    std::vector<double> terms;
    terms.reserve(2 * n - 1);
    for (int k = 0; k < n; ++k) terms.push_back(cross(k) / tau);
    for (int k = 0; k < n; ++k)
      if (k != i) terms.push_back(intra(k) / tau);
    double lse = log_sum_exp(terms);
    total += -cross(i) / tau + lse;
    // softmax weights in the same order the terms were pushed
    int idx = 0;
    for (int k = 0; k < n; ++k, ++idx) {
      double w = std::exp(terms[idx] - lse);
      add_cross(i, k, (w - (k == i ? 1.0 : 0.0)) / tau);
    }
    for (int k = 0; k < n; ++k) {
      if (k == i) continue;
      double w = std::exp(terms[idx++] - lse);
      a_intra(i, k) += w / tau;
    }
  };

  for (int i = 0; i < n; ++i) {
    accumulate_anchor(
        i, s12.row(i), s11.row(i),
        [&](int r, int c, double v) { a12(r, c) += v; }, a11);
    accumulate_anchor(
        i, s12.col(i).transpose(), s22.row(i),
        [&](int r, int c, double v) { a12(c, r) += v; }, a22);
  }

  // chain through the similarity bilinear forms
  Eigen::MatrixXd du1 = a12 * u2 + (a11 + a11.transpose()) * u1;
  Eigen::MatrixXd du2 = a12.transpose() * u1 + (a22 + a22.transpose()) * u2;

  // chain through row normalization; zero-norm rows get zero gradient
  LossGradient out;
  out.dz1 = Eigen::MatrixXd::Zero(n, z1.cols());
  out.dz2 = Eigen::MatrixXd::Zero(n, z2.cols());
  const double scale = 1.0 / (2.0 * n);
  for (int i = 0; i < n; ++i) {
    if (norms1(i) > 0.0)
      out.dz1.row(i) =
          scale * (du1.row(i) - du1.row(i).dot(u1.row(i)) * u1.row(i)) / norms1(i);
    if (norms2(i) > 0.0)
      out.dz2.row(i) =
          scale * (du2.row(i) - du2.row(i).dot(u2.row(i)) * u2.row(i)) / norms2(i);
  }
  out.loss = total * scale;
  return out;
}

std::pair<EncoderParams, TrainReport> train(const Graph& g, const AugmentConfig& aug,
                                            const TrainConfig& cfg) {
  if (cfg.tau <= 0.0) throw std::invalid_argument("tau must be positive");
  if (cfg.epochs < 1) throw std::invalid_argument("epochs must be at least 1");
  if (cfg.learning_rate < 0.0) throw std::invalid_argument("learning rate must be >= 0");

  const auto start = std::chrono::steady_clock::now();
  EncoderDims dims{g.n_features(), cfg.hidden_dim, cfg.embed_dim, cfg.embed_dim,
                   cfg.embed_dim};
  EncoderParams params = glorot_init(dims, cfg.seed);

  Eigen::VectorXd theta = flatten(params);
  Eigen::VectorXd m = Eigen::VectorXd::Zero(theta.size());
  Eigen::VectorXd v = Eigen::VectorXd::Zero(theta.size());

  TrainReport report;
  report.loss_per_epoch.reserve(cfg.epochs);

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    // fresh corruption every epoch, keyed by (seed, epoch)
    std::uint64_t epoch_seed = rng::hash_words(
        {cfg.seed, rng::kind_word(rng::Kind::epoch), static_cast<std::uint64_t>(epoch)});
    auto [view1, view2] = make_views(g, aug, epoch_seed);

    auto a1 = normalized_adjacency(view1.n_nodes, view1.edges);
    auto a2 = normalized_adjacency(view2.n_nodes, view2.edges);
    ForwardState st1 = encoder_forward(params, a1, view1.features);
    ForwardState st2 = encoder_forward(params, a2, view2.features);

    LossGradient lg = loss_gradient(st1.z, st2.z, cfg.tau);
    if (!std::isfinite(lg.loss))
      throw std::runtime_error("non-finite loss at epoch " + std::to_string(epoch));
    report.loss_per_epoch.push_back(lg.loss);

    EncoderGrads grads = encoder_backward(params, st1, lg.dz1);
    accumulate(grads, encoder_backward(params, st2, lg.dz2));
    Eigen::VectorXd grad = flatten(grads, dims);
    grad += cfg.weight_decay * theta;  // classic L2

    const int t = epoch + 1;
    m = cfg.beta1 * m + (1.0 - cfg.beta1) * grad;
    v = cfg.beta2 * v + (1.0 - cfg.beta2) * grad.cwiseProduct(grad);
    double bc1 = 1.0 - std::pow(cfg.beta1, t);
    double bc2 = 1.0 - std::pow(cfg.beta2, t);
    theta -= (cfg.learning_rate / bc1) *
             m.cwiseQuotient(((v / bc2).cwiseSqrt().array() + cfg.eps).matrix());
    unflatten(theta, params);
  }

  report.wall_time_sec =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return {std::move(params), std::move(report)};
}

Embeddings embed(const EncoderParams& params, const Graph& g) {
  auto a_hat = normalized_adjacency(g.n_nodes(), g.edges());
  ForwardState st = encoder_forward(params, a_hat, g.features());
  return {std::move(st.h), std::move(st.z)};
}

}  // namespace fairgcl
