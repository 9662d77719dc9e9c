#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fairgcl/graph.hpp"
#include "fairgcl/stats.hpp"

namespace fairgcl {

struct FeatureMaskPlan {
  Eigen::VectorXd keep_prob;  // per feature: p_uncorr_i * (1 - p_f)
  double base_mask_prob = 0.0;
  CorrMethod method = CorrMethod::pearson;
};

enum class EdScheme { dyadic, parity, counterfactual, triangle, degree };

EdScheme ed_scheme_from_string(const std::string& name);
std::string to_string(EdScheme s);

struct EdgeDeletionPlan {
  EdScheme scheme = EdScheme::dyadic;
  std::vector<double> delete_prob;  // aligned with Graph::edges()
};

struct ViewProvenance {
  std::uint64_t seed = 0;
  int view_id = 1;
  std::string fm_desc;  // empty when disabled
  std::string ed_desc;
};

struct GraphView {
  int n_nodes = 0;
  std::vector<Edge> edges;
  Eigen::MatrixXd features;
  ViewProvenance provenance;
};

FeatureMaskPlan feature_mask_plan(const CorrelationReport& report, double p_f);

Eigen::VectorXi sample_feature_mask(const FeatureMaskPlan& plan, std::uint64_t seed,
                                    int view_id);

Eigen::MatrixXd apply_feature_mask(const Eigen::MatrixXd& x, const Eigen::VectorXi& mask);

EdgeDeletionPlan edge_probs_dyadic(const Graph& g, double p_kappa, double p_max);

struct ParityCaps {
  double p_max1, p_max2, p_max3;  // assigned to groups sorted ascending by size
};
EdgeDeletionPlan edge_probs_parity(const Graph& g, double p_kappa, const ParityCaps& caps);

struct CounterfactualProbs {
  double p1, p2;  // view 1: same / different sensitive attribute
  double p3, p4;  // view 2
  // Eq-level ordering constraints p1 > p2 and p3 < p4 are enforced either way;
  // "retention" keeps same-group edges in view 1 and cross-group in view 2.
  bool retention_semantics = true;
};
EdgeDeletionPlan edge_probs_counterfactual(const Graph& g, const CounterfactualProbs& p,
                                           int view_id);

EdgeDeletionPlan edge_probs_triangle(const Graph& g, double alpha, double p_b1,
                                     double p_b2);

EdgeDeletionPlan edge_probs_degree(const Graph& g, double p_b1, double p_b2, double p_max);

std::vector<Edge> sample_edge_deletion(const Graph& g, const EdgeDeletionPlan& plan,
                                       std::uint64_t seed, int view_id);

// per-view augmentation settings
struct ViewAugmentConfig {
  std::optional<CorrMethod> fm_method;  // feature masking enabled iff set
  double fm_p_f = 0.0;
  std::optional<EdScheme> ed_scheme;  // edge deletion enabled iff set
  // scheme hyperparameters (only the relevant subset is read)
  double p_kappa = 0.0;
  double p_max = 1.0;
  ParityCaps parity_caps{1.0, 1.0, 1.0};
  CounterfactualProbs cf{1.0, 0.0, 0.0, 1.0, true};
  double alpha = 1.0;
  double p_b1 = 0.0;
  double p_b2 = 0.0;
};

struct AugmentConfig {
  ViewAugmentConfig view1;
  ViewAugmentConfig view2;
  // When set, every per-element probability is replaced by the mean over its
  // plan: the uniform control of the adaptive schemes.
  bool uniform_control = false;
};

EdgeDeletionPlan build_edge_plan(const Graph& g, const ViewAugmentConfig& cfg, int view_id);

std::pair<GraphView, GraphView> make_views(const Graph& g, const AugmentConfig& cfg,
                                           std::uint64_t seed);

}  // namespace fairgcl
