#include "fairgcl/encoder.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "fairgcl/rng.hpp"

namespace fairgcl {

namespace {

Eigen::MatrixXd glorot_matrix(int rows, int cols, std::uint64_t seed, std::uint64_t layer) {
  const double bound = std::sqrt(6.0 / (rows + cols));
  Eigen::MatrixXd w(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) {
      double u = rng::uniform({seed, rng::kind_word(rng::Kind::glorot), layer,
                               static_cast<std::uint64_t>(i), static_cast<std::uint64_t>(j)});
      w(i, j) = bound * (2.0 * u - 1.0);
    }
  return w;
}

Eigen::MatrixXd relu(const Eigen::MatrixXd& m) { return m.cwiseMax(0.0); }

// subgradient 0 at 0
Eigen::MatrixXd relu_mask(const Eigen::MatrixXd& pre) {
  return (pre.array() > 0.0).cast<double>();
}

}  // namespace

EncoderParams glorot_init(const EncoderDims& dims, std::uint64_t seed) {
  if (dims.in <= 0 || dims.hidden <= 0 || dims.embed <= 0 || dims.proj_hidden <= 0 ||
      dims.proj_out <= 0)
    throw std::invalid_argument("encoder dimensions must be positive");
  EncoderParams p;
  p.dims = dims;
  p.gcn_w1 = glorot_matrix(dims.in, dims.hidden, seed, 1);
  p.gcn_w2 = glorot_matrix(dims.hidden, dims.embed, seed, 2);
  p.proj_w1 = glorot_matrix(dims.embed, dims.proj_hidden, seed, 3);
  p.proj_b1 = Eigen::VectorXd::Zero(dims.proj_hidden);
  p.proj_w2 = glorot_matrix(dims.proj_hidden, dims.proj_out, seed, 4);
  p.proj_b2 = Eigen::VectorXd::Zero(dims.proj_out);
  return p;
}

ForwardState encoder_forward(const EncoderParams& params,
                             const Eigen::SparseMatrix<double>& a_hat,
                             const Eigen::MatrixXd& x) {
  if (x.cols() != params.dims.in)
    throw std::invalid_argument("feature width does not match encoder input dimension");
  if (!x.allFinite()) throw std::invalid_argument("non-finite encoder input");
  ForwardState st;
  st.a_hat = a_hat;
  st.x = x;
  st.pre1 = a_hat * (x * params.gcn_w1);
  st.h1 = relu(st.pre1);
  st.pre2 = a_hat * (st.h1 * params.gcn_w2);
  st.h = relu(st.pre2);
  st.preq = (st.h * params.proj_w1).rowwise() + params.proj_b1.transpose();
  st.r1 = relu(st.preq);
  st.z = (st.r1 * params.proj_w2).rowwise() + params.proj_b2.transpose();
  return st;
}

EncoderGrads encoder_backward(const EncoderParams& params, const ForwardState& st,
                              const Eigen::MatrixXd& dz) {
  EncoderGrads g;
  g.proj_b2 = dz.colwise().sum();
  g.proj_w2 = st.r1.transpose() * dz;
  Eigen::MatrixXd dr1 = dz * params.proj_w2.transpose();
  Eigen::MatrixXd dq = dr1.cwiseProduct(relu_mask(st.preq));
  g.proj_b1 = dq.colwise().sum();
  g.proj_w1 = st.h.transpose() * dq;
  Eigen::MatrixXd dh = dq * params.proj_w1.transpose();

  Eigen::MatrixXd dpre2 = dh.cwiseProduct(relu_mask(st.pre2));
  // A-hat is symmetric, so (A h1)^T dpre2 = h1^T (A dpre2)
  Eigen::MatrixXd a_dpre2 = st.a_hat * dpre2;
  g.gcn_w2 = st.h1.transpose() * a_dpre2;
  Eigen::MatrixXd dh1 = a_dpre2 * params.gcn_w2.transpose();
  Eigen::MatrixXd dpre1 = dh1.cwiseProduct(relu_mask(st.pre1));
  g.gcn_w1 = st.x.transpose() * (st.a_hat * dpre1);
  return g;
}

EncoderGrads zero_grads(const EncoderDims& d) {
  EncoderGrads g;
  g.gcn_w1 = Eigen::MatrixXd::Zero(d.in, d.hidden);
  g.gcn_w2 = Eigen::MatrixXd::Zero(d.hidden, d.embed);
  g.proj_w1 = Eigen::MatrixXd::Zero(d.embed, d.proj_hidden);
  g.proj_b1 = Eigen::VectorXd::Zero(d.proj_hidden);
  g.proj_w2 = Eigen::MatrixXd::Zero(d.proj_hidden, d.proj_out);
  g.proj_b2 = Eigen::VectorXd::Zero(d.proj_out);
  return g;
}

void accumulate(EncoderGrads& into, const EncoderGrads& from) {
  into.gcn_w1 += from.gcn_w1;
  into.gcn_w2 += from.gcn_w2;
  into.proj_w1 += from.proj_w1;
  into.proj_b1 += from.proj_b1;
  into.proj_w2 += from.proj_w2;
  into.proj_b2 += from.proj_b2;
}

namespace {

template <typename F>
void for_each_block(const EncoderDims& d, F&& f) {
  f(0, d.in * d.hidden);
  int off = d.in * d.hidden;
  f(off, d.hidden * d.embed);
  off += d.hidden * d.embed;
  f(off, d.embed * d.proj_hidden);
  off += d.embed * d.proj_hidden;
  f(off, d.proj_hidden);
  off += d.proj_hidden;
  f(off, d.proj_hidden * d.proj_out);
  off += d.proj_hidden * d.proj_out;
  f(off, d.proj_out);
}

int total_size(const EncoderDims& d) {
  return d.in * d.hidden + d.hidden * d.embed + d.embed * d.proj_hidden + d.proj_hidden +
         d.proj_hidden * d.proj_out + d.proj_out;
}

}  // namespace

Eigen::VectorXd flatten(const EncoderParams& p) {
  const auto& d = p.dims;
  Eigen::VectorXd v(total_size(d));
  int off = 0;
  auto put = [&](const Eigen::MatrixXd& m) {
    v.segment(off, m.size()) = Eigen::Map<const Eigen::VectorXd>(m.data(), m.size());
    off += static_cast<int>(m.size());
  };
  put(p.gcn_w1);
  put(p.gcn_w2);
  put(p.proj_w1);
  put(p.proj_b1);
  put(p.proj_w2);
  put(p.proj_b2);
  return v;
}

void unflatten(const Eigen::VectorXd& v, EncoderParams& p) {
  const auto& d = p.dims;
  if (v.size() != total_size(d)) throw std::invalid_argument("parameter vector size mismatch");
  int off = 0;
  auto take = [&](Eigen::MatrixXd& m) {
    Eigen::Map<Eigen::VectorXd>(m.data(), m.size()) = v.segment(off, m.size());
    off += static_cast<int>(m.size());
  };
  take(p.gcn_w1);
  take(p.gcn_w2);
  take(p.proj_w1);
  Eigen::Map<Eigen::VectorXd>(p.proj_b1.data(), p.proj_b1.size()) =
      v.segment(off, p.proj_b1.size());
  off += static_cast<int>(p.proj_b1.size());
  take(p.proj_w2);
  Eigen::Map<Eigen::VectorXd>(p.proj_b2.data(), p.proj_b2.size()) =
      v.segment(off, p.proj_b2.size());
}

Eigen::VectorXd flatten(const EncoderGrads& g, const EncoderDims& d) {
  Eigen::VectorXd v(total_size(d));
  int off = 0;
  auto put = [&](const Eigen::MatrixXd& m) {
    v.segment(off, m.size()) = Eigen::Map<const Eigen::VectorXd>(m.data(), m.size());
    off += static_cast<int>(m.size());
  };
  put(g.gcn_w1);
  put(g.gcn_w2);
  put(g.proj_w1);
  v.segment(off, g.proj_b1.size()) = g.proj_b1;
  off += static_cast<int>(g.proj_b1.size());
  put(g.proj_w2);
  v.segment(off, g.proj_b2.size()) = g.proj_b2;
  return v;
}

void save_checkpoint(const std::string& path, const EncoderParams& p) {
  nlohmann::json j;
  j["dims"] = {{"in", p.dims.in},
               {"hidden", p.dims.hidden},
               {"embed", p.dims.embed},
               {"proj_hidden", p.dims.proj_hidden},
               {"proj_out", p.dims.proj_out}};
  Eigen::VectorXd flat = flatten(p);
  j["params"] = std::vector<double>(flat.data(), flat.data() + flat.size());
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write checkpoint: " + path);
  out << j.dump() << '\n';
}

EncoderParams load_checkpoint(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open checkpoint: " + path);
  nlohmann::json j;
  in >> j;
  EncoderDims d{j["dims"]["in"], j["dims"]["hidden"], j["dims"]["embed"],
                j["dims"]["proj_hidden"], j["dims"]["proj_out"]};
  EncoderParams p = glorot_init(d, 0);
  std::vector<double> flat = j["params"].get<std::vector<double>>();
  unflatten(Eigen::Map<Eigen::VectorXd>(flat.data(), flat.size()), p);
  return p;
}

}  // namespace fairgcl
