#include "fairgcl/augment.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "fairgcl/rng.hpp"

namespace fairgcl {

EdScheme ed_scheme_from_string(const std::string& name) {
  if (name == "dyadic") return EdScheme::dyadic;
  if (name == "parity") return EdScheme::parity;
  if (name == "counterfactual") return EdScheme::counterfactual;
  if (name == "triangle") return EdScheme::triangle;
  if (name == "degree") return EdScheme::degree;
  throw std::invalid_argument("unknown edge deletion scheme: " + name);
}

std::string to_string(EdScheme s) {
  switch (s) {
    case EdScheme::dyadic: return "dyadic";
    case EdScheme::parity: return "parity";
    case EdScheme::counterfactual: return "counterfactual";
    case EdScheme::triangle: return "triangle";
    case EdScheme::degree: return "degree";
  }
  return "?";
}

namespace {

void require_prob(double p, const char* name) {
  if (!(p >= 0.0 && p <= 1.0))
    throw std::invalid_argument(std::string(name) + " must lie in [0,1]");
}

}  // namespace

FeatureMaskPlan feature_mask_plan(const CorrelationReport& report, double p_f) {
  require_prob(p_f, "p_f");
  FeatureMaskPlan plan;
  plan.base_mask_prob = p_f;
  plan.method = report.method;
  plan.keep_prob = report.p_uncorr * (1.0 - p_f);
  return plan;
}

Eigen::VectorXi sample_feature_mask(const FeatureMaskPlan& plan, std::uint64_t seed,
                                    int view_id) {
  const int f = static_cast<int>(plan.keep_prob.size());
  Eigen::VectorXi mask(f);
  for (int i = 0; i < f; ++i) {
    mask(i) = rng::bernoulli(plan.keep_prob(i),
                             {seed, static_cast<std::uint64_t>(view_id),
                              rng::kind_word(rng::Kind::feature_mask),
                              static_cast<std::uint64_t>(i)})
                  ? 1
                  : 0;
  }
  return mask;
}

Eigen::MatrixXd apply_feature_mask(const Eigen::MatrixXd& x, const Eigen::VectorXi& mask) {
  if (mask.size() != x.cols())
    throw std::invalid_argument("feature mask length does not match feature count");
  Eigen::MatrixXd out = x;
  for (int j = 0; j < x.cols(); ++j)
    if (mask(j) == 0) out.col(j).setZero();
  return out;
}

EdgeDeletionPlan edge_probs_dyadic(const Graph& g, double p_kappa, double p_max) {
  require_prob(p_kappa, "p_kappa");
  require_prob(p_max, "p_max");
  EdgeGroupCounts c = edge_group_counts(g);
  const auto& s = g.sensitive();
  // ratio |E_d|/|E_s|; with no same-group edges the same-group branch is
  // never taken, so any value works
  double ratio = c.same > 0 ? static_cast<double>(c.diff) / c.same : 0.0;
  EdgeDeletionPlan plan;
  plan.scheme = EdScheme::dyadic;
  plan.delete_prob.reserve(g.n_edges());
  for (const auto& [u, v] : g.edges()) {
    double p = s(u) != s(v) ? 1.0 - p_kappa : 1.0 - ratio * p_kappa;
    plan.delete_prob.push_back(std::clamp(p, 0.0, p_max));
  }
  return plan;
}

EdgeDeletionPlan edge_probs_parity(const Graph& g, double p_kappa, const ParityCaps& caps) {
  require_prob(p_kappa, "p_kappa");
  require_prob(caps.p_max1, "p_max1");
  require_prob(caps.p_max2, "p_max2");
  require_prob(caps.p_max3, "p_max3");
  if (!(caps.p_max1 <= caps.p_max2 && caps.p_max2 <= caps.p_max3))
    throw std::invalid_argument("parity caps must satisfy p_max1 <= p_max2 <= p_max3");

  EdgeGroupCounts c = edge_group_counts(g);
  // directed-instance counts per group; |E_01| = |E_10| so the cross group
  // collapses to one entry with the shared count
  std::array<std::int64_t, 3> count = {c.e00, c.e11, c.e01};
  std::int64_t m = 0;
  for (auto n : count)
    if (n > 0 && (m == 0 || n < m)) m = n;

  std::array<double, 3> prob{};
  for (int k = 0; k < 3; ++k)
    prob[k] = count[k] > 0 ? 1.0 - (static_cast<double>(m) / count[k]) * p_kappa : 0.0;

  // caps assigned to nonempty groups sorted ascending by cardinality; the
  // minimum group already sits at 1 - p_kappa and is not capped
  std::array<int, 3> order = {0, 1, 2};
  std::sort(order.begin(), order.end(), [&](int a, int b) { return count[a] < count[b]; });
  std::array<double, 3> cap_list = {caps.p_max1, caps.p_max2, caps.p_max3};
  int slot = 0;
  for (int k : order) {
    if (count[k] == 0) continue;
    double cap = cap_list[std::min(slot, 2)];
    ++slot;
    if (count[k] != m) prob[k] = std::min(prob[k], cap);
  }

  const auto& s = g.sensitive();
  EdgeDeletionPlan plan;
  plan.scheme = EdScheme::parity;
  plan.delete_prob.reserve(g.n_edges());
  for (const auto& [u, v] : g.edges()) {
    int group = s(u) != s(v) ? 2 : (s(u) == 0 ? 0 : 1);
    plan.delete_prob.push_back(std::clamp(prob[group], 0.0, 1.0));
  }
  return plan;
}

EdgeDeletionPlan edge_probs_counterfactual(const Graph& g, const CounterfactualProbs& p,
                                           int view_id) {
  require_prob(p.p1, "p1");
  require_prob(p.p2, "p2");
  require_prob(p.p3, "p3");
  require_prob(p.p4, "p4");
  if (!(p.p1 > p.p2)) throw std::invalid_argument("counterfactual scheme requires p1 > p2");
  if (!(p.p3 < p.p4)) throw std::invalid_argument("counterfactual scheme requires p3 < p4");
  if (view_id != 1 && view_id != 2)
    throw std::invalid_argument("counterfactual view_id must be 1 or 2");

  double p_same = view_id == 1 ? p.p1 : p.p3;
  double p_diff = view_id == 1 ? p.p2 : p.p4;
  if (p.retention_semantics) {
    p_same = 1.0 - p_same;
    p_diff = 1.0 - p_diff;
  }

  const auto& s = g.sensitive();
  EdgeDeletionPlan plan;
  plan.scheme = EdScheme::counterfactual;
  plan.delete_prob.reserve(g.n_edges());
  for (const auto& [u, v] : g.edges())
    plan.delete_prob.push_back(s(u) == s(v) ? p_same : p_diff);
  return plan;
}

EdgeDeletionPlan edge_probs_triangle(const Graph& g, double alpha, double p_b1,
                                     double p_b2) {
  require_prob(p_b1, "p_b1");
  require_prob(p_b2, "p_b2");
  if (!(alpha > 1.0)) throw std::invalid_argument("triangle scheme requires alpha > 1");
  if (!(p_b1 > p_b2)) throw std::invalid_argument("triangle scheme requires p_b1 > p_b2");

  auto tri = monochromatic_triangle_edges(g);
  std::sort(tri.begin(), tri.end());
  const auto& s = g.sensitive();
  EdgeDeletionPlan plan;
  plan.scheme = EdScheme::triangle;
  plan.delete_prob.reserve(g.n_edges());
  for (const auto& e : g.edges()) {
    double p;
    if (std::binary_search(tri.begin(), tri.end(), e))
      p = std::min(alpha * p_b1, 1.0);
    else if (s(e.first) == s(e.second))
      p = p_b1;
    else
      p = p_b2;
    plan.delete_prob.push_back(p);
  }
  return plan;
}

EdgeDeletionPlan edge_probs_degree(const Graph& g, double p_b1, double p_b2, double p_max) {
  require_prob(p_b1, "p_b1");
  require_prob(p_b2, "p_b2");
  require_prob(p_max, "p_max");
  if (!(p_b1 > p_b2)) throw std::invalid_argument("degree scheme requires p_b1 > p_b2");

  DegreeStats ds = degree_stats(g);
  const auto& s = g.sensitive();
  EdgeDeletionPlan plan;
  plan.scheme = EdScheme::degree;
  plan.delete_prob.reserve(g.n_edges());
  for (const auto& [u, v] : g.edges()) {
    double base = s(u) == s(v) ? p_b1 : p_b2;
    double p;
    if (ds.d_max == ds.d_mean) {
      p = std::min(base, p_max);  // regular graph: factor defined as 1
    } else {
      int dmin = std::min(ds.degrees[u], ds.degrees[v]);
      if (dmin == ds.d_max) {
        p = p_max;  // zero denominator
      } else {
        double factor = (ds.d_max - ds.d_mean) / (ds.d_max - dmin);
        p = std::min(factor * base, p_max);
      }
    }
    plan.delete_prob.push_back(std::clamp(p, 0.0, 1.0));
  }
  return plan;
}

std::vector<Edge> sample_edge_deletion(const Graph& g, const EdgeDeletionPlan& plan,
                                       std::uint64_t seed, int view_id) {
  if (plan.delete_prob.size() != static_cast<size_t>(g.n_edges()))
    throw std::invalid_argument("edge deletion plan is not aligned with the graph");
  std::vector<Edge> kept;
  kept.reserve(g.n_edges());
  for (int e = 0; e < g.n_edges(); ++e) {
    bool del = rng::bernoulli(plan.delete_prob[e],
                              {seed, static_cast<std::uint64_t>(view_id),
                               rng::kind_word(rng::Kind::edge_deletion),
                               static_cast<std::uint64_t>(e)});
    if (!del) kept.push_back(g.edges()[e]);
  }
  return kept;
}

EdgeDeletionPlan build_edge_plan(const Graph& g, const ViewAugmentConfig& cfg, int view_id) {
  switch (*cfg.ed_scheme) {
    case EdScheme::dyadic:
      return edge_probs_dyadic(g, cfg.p_kappa, cfg.p_max);
    case EdScheme::parity:
      return edge_probs_parity(g, cfg.p_kappa, cfg.parity_caps);
    case EdScheme::counterfactual:
      return edge_probs_counterfactual(g, cfg.cf, view_id);
    case EdScheme::triangle:
      return edge_probs_triangle(g, cfg.alpha, cfg.p_b1, cfg.p_b2);
    case EdScheme::degree:
      return edge_probs_degree(g, cfg.p_b1, cfg.p_b2, cfg.p_max);
  }
  throw std::logic_error("unreachable");
}

namespace {

GraphView make_one_view(const Graph& g, const ViewAugmentConfig& cfg, bool uniform_control,
                        std::uint64_t seed, int view_id) {
  GraphView view;
  view.n_nodes = g.n_nodes();
  view.provenance.seed = seed;
  view.provenance.view_id = view_id;

  if (cfg.fm_method) {
    auto report = feature_correlation_report(g, *cfg.fm_method);
    FeatureMaskPlan plan = feature_mask_plan(report, cfg.fm_p_f);
    if (uniform_control) plan.keep_prob.setConstant(plan.keep_prob.mean());
    auto mask = sample_feature_mask(plan, seed, view_id);
    view.features = apply_feature_mask(g.features(), mask);
    std::ostringstream desc;
    desc << "fm:" << to_string(*cfg.fm_method) << " p_f=" << cfg.fm_p_f
         << (uniform_control ? " uniform" : "");
    view.provenance.fm_desc = desc.str();
  } else {
    view.features = g.features();
  }

  if (cfg.ed_scheme) {
    EdgeDeletionPlan plan = build_edge_plan(g, cfg, view_id);
    if (uniform_control && !plan.delete_prob.empty()) {
      double mean = std::accumulate(plan.delete_prob.begin(), plan.delete_prob.end(), 0.0) /
                    plan.delete_prob.size();
      std::fill(plan.delete_prob.begin(), plan.delete_prob.end(), mean);
    }
    view.edges = sample_edge_deletion(g, plan, seed, view_id);
    std::ostringstream desc;
    desc << "ed:" << to_string(*cfg.ed_scheme) << (uniform_control ? " uniform" : "");
    view.provenance.ed_desc = desc.str();
  } else {
    view.edges = g.edges();
  }

  return view;
}

}  // namespace

std::pair<GraphView, GraphView> make_views(const Graph& g, const AugmentConfig& cfg,
                                           std::uint64_t seed) {
  return {make_one_view(g, cfg.view1, cfg.uniform_control, seed, 1),
          make_one_view(g, cfg.view2, cfg.uniform_control, seed, 2)};
}

}  // namespace fairgcl
