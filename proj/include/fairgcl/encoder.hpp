#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <cstdint>
#include <string>

namespace fairgcl {

struct EncoderDims {
  int in = 0;       // F
  int hidden = 0;   // first GCN layer width
  int embed = 0;    // F', node representation width
  int proj_hidden = 0;
  int proj_out = 0;
};

// Two-layer GCN followed by a two-layer MLP projection head. No biases in
// the GCN layers; ReLU hidden activations, linear projection output.
struct EncoderParams {
  EncoderDims dims;
  Eigen::MatrixXd gcn_w1;   // F x hidden
  Eigen::MatrixXd gcn_w2;   // hidden x embed
  Eigen::MatrixXd proj_w1;  // embed x proj_hidden
  Eigen::VectorXd proj_b1;
  Eigen::MatrixXd proj_w2;  // proj_hidden x proj_out
  Eigen::VectorXd proj_b2;
};

struct EncoderGrads {
  Eigen::MatrixXd gcn_w1, gcn_w2, proj_w1, proj_w2;
  Eigen::VectorXd proj_b1, proj_b2;
};

// intermediate activations kept for the backward pass
struct ForwardState {
  Eigen::SparseMatrix<double> a_hat;
  Eigen::MatrixXd x;
  Eigen::MatrixXd pre1, h1;  // A X W1, ReLU of it
  Eigen::MatrixXd pre2, h;   // A h1 W2, ReLU of it (node representations)
  Eigen::MatrixXd preq, r1;  // h Wp1 + b1, ReLU of it
  Eigen::MatrixXd z;         // projected output
};

EncoderParams glorot_init(const EncoderDims& dims, std::uint64_t seed);

ForwardState encoder_forward(const EncoderParams& params,
                             const Eigen::SparseMatrix<double>& a_hat,
                             const Eigen::MatrixXd& x);

// gradients of a scalar loss w.r.t. all parameters given dLoss/dZ
EncoderGrads encoder_backward(const EncoderParams& params, const ForwardState& state,
                              const Eigen::MatrixXd& dz);

EncoderGrads zero_grads(const EncoderDims& dims);
void accumulate(EncoderGrads& into, const EncoderGrads& from);

// flat parameter vector round trip (optimizer and checkpoint plumbing)
Eigen::VectorXd flatten(const EncoderParams& p);
void unflatten(const Eigen::VectorXd& v, EncoderParams& p);
Eigen::VectorXd flatten(const EncoderGrads& g, const EncoderDims& dims);

void save_checkpoint(const std::string& path, const EncoderParams& p);
EncoderParams load_checkpoint(const std::string& path);

}  // namespace fairgcl
