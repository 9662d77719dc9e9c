#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "fairgcl/augment.hpp"
#include "fairgcl/graph.hpp"
#include "test_util.hpp"

using namespace fairgcl;

namespace {

CorrelationReport report_from(std::initializer_list<double> p_uncorr) {
  CorrelationReport rep;
  rep.p_uncorr.resize(static_cast<int>(p_uncorr.size()));
  rep.r.resize(static_cast<int>(p_uncorr.size()));
  int i = 0;
  for (double p : p_uncorr) {
    rep.p_uncorr(i) = p;
    rep.r(i) = 0.0;
    ++i;
  }
  rep.degenerate.assign(p_uncorr.size(), false);
  rep.n_samples = 10;
  return rep;
}

Graph two_group_graph(int same00, int same11, int cross) {
  // enough nodes that the requested edge counts fit without duplicates
  int per_group = std::max({same00, same11, cross, 4}) + 2;
  int n = 2 * per_group;
  Eigen::VectorXi s(n);
  for (int i = 0; i < n; ++i) s(i) = i < per_group ? 0 : 1;
  std::vector<Edge> edges;
  auto add_chain = [&](int base, int count) {
    int k = 0;
    for (int i = base; k < count; ++i)
      for (int j = i + 1; j < base + per_group && k < count; ++j, ++k)
        edges.push_back({i, j});
  };
  add_chain(0, same00);
  add_chain(per_group, same11);
  for (int k = 0; k < cross; ++k) edges.push_back({k % per_group, per_group + k / per_group});
  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(n, 1);
  return Graph(n, std::move(edges), std::move(x), std::move(s));
}

}  // namespace

TEST_CASE("feature mask plan arithmetic and boundaries") {
  auto plan = feature_mask_plan(report_from({1.0, 0.5}), 0.6);
  CHECK(plan.keep_prob(0) == doctest::Approx(0.4));
  CHECK(plan.keep_prob(1) == doctest::Approx(0.2));

  auto all_masked = feature_mask_plan(report_from({1.0, 0.3}), 1.0);
  CHECK(all_masked.keep_prob.maxCoeff() == 0.0);

  auto correlated = feature_mask_plan(report_from({0.0}), 0.1);
  CHECK(correlated.keep_prob(0) == 0.0);

  CHECK_THROWS(feature_mask_plan(report_from({0.5}), 1.5));
}

TEST_CASE("keep probability is monotone in the p-value") {
  auto plan = feature_mask_plan(report_from({0.1, 0.2, 0.5, 0.9}), 0.3);
  for (int i = 0; i + 1 < 4; ++i) CHECK(plan.keep_prob(i) <= plan.keep_prob(i + 1));
}

TEST_CASE("feature mask sampling honors degenerate probabilities") {
  auto ones = feature_mask_plan(report_from({1.0, 1.0, 1.0}), 0.0);
  CHECK(sample_feature_mask(ones, 1, 1).minCoeff() == 1);
  auto zeros = feature_mask_plan(report_from({1.0, 1.0, 1.0}), 1.0);
  CHECK(sample_feature_mask(zeros, 1, 1).maxCoeff() == 0);
}

TEST_CASE("feature mask empirical keep rate sits inside the 99% binomial CI") {
  FeatureMaskPlan plan;
  plan.keep_prob = Eigen::VectorXd::Constant(5, 0.3);
  const int trials = 10000;
  Eigen::VectorXi kept = Eigen::VectorXi::Zero(5);
  for (int t = 0; t < trials; ++t)
    kept += sample_feature_mask(plan, static_cast<std::uint64_t>(t), 1);
  double half = 2.5758 * std::sqrt(0.3 * 0.7 / trials);
  for (int i = 0; i < 5; ++i)
    CHECK(std::fabs(kept(i) / static_cast<double>(trials) - 0.3) < half);
}

TEST_CASE("apply_feature_mask zeroes exactly the masked columns") {
  Eigen::MatrixXd x(2, 2);
  x << 1, 2, 3, 4;
  Eigen::VectorXi keep_all(2), keep_none(2), mixed(2);
  keep_all << 1, 1;
  keep_none << 0, 0;
  mixed << 1, 0;
  CHECK(apply_feature_mask(x, keep_all) == x);
  CHECK(apply_feature_mask(x, keep_none).cwiseAbs().maxCoeff() == 0.0);
  Eigen::MatrixXd expect(2, 2);
  expect << 1, 0, 3, 0;
  CHECK(apply_feature_mask(x, mixed) == expect);
  Eigen::VectorXi wrong(3);
  wrong << 1, 1, 1;
  CHECK_THROWS(apply_feature_mask(x, wrong));
}

TEST_CASE("dyadic probabilities clamp at p_max on an imbalanced graph") {
  // 34 same-group edges vs 2 cross edges; ratio 2/34 well below the clamp point
  Graph g = two_group_graph(17, 17, 2);
  auto plan = edge_probs_dyadic(g, 0.85, 0.85);
  const auto& s = g.sensitive();
  double ratio = 2.0 / 34.0;
  for (int e = 0; e < g.n_edges(); ++e) {
    auto [u, v] = g.edges()[e];
    if (s(u) == s(v))
      CHECK(plan.delete_prob[e] == doctest::Approx(std::min(1.0 - ratio * 0.85, 0.85)));
    else
      CHECK(plan.delete_prob[e] == doctest::Approx(0.15));
  }
}

TEST_CASE("dyadic balanced graph gives 1 - p_kappa pre-clamp everywhere") {
  Graph g = two_group_graph(4, 4, 8);  // same = diff = 8 undirected
  auto plan = edge_probs_dyadic(g, 0.7, 1.0);
  for (double p : plan.delete_prob) CHECK(p == doctest::Approx(0.3));
}

TEST_CASE("dyadic pre-clamp retention balance holds") {
  std::mt19937 gen(43);
  for (int trial = 0; trial < 20; ++trial) {
    Graph g = testutil::random_graph(gen, 25, 1, 0.3);
    auto c = edge_group_counts(g);
    // pre-clamp identity needs same-group deletion inside [0,1]
    if (c.same == 0 || c.diff == 0 || 0.6 * c.diff > c.same) continue;
    auto plan = edge_probs_dyadic(g, 0.6, 1.0);
    const auto& s = g.sensitive();
    double kept_same = 0, kept_diff = 0;
    for (int e = 0; e < g.n_edges(); ++e) {
      auto [u, v] = g.edges()[e];
      (s(u) == s(v) ? kept_same : kept_diff) += 1.0 - plan.delete_prob[e];
    }
    CHECK(kept_same == doctest::Approx(kept_diff).epsilon(1e-9));
    CHECK(kept_diff == doctest::Approx(c.diff / 2.0 * 0.6).epsilon(1e-9));
  }
}

TEST_CASE("parity probabilities follow the minimum-group ratio rule") {
  // directed counts: |E_00| = 50, |E_11| = 100, |E_01| = |E_10| = 10
  Graph g = two_group_graph(25, 50, 10);
  auto c = edge_group_counts(g);
  REQUIRE(c.e00 == 50);
  REQUIRE(c.e11 == 100);
  REQUIRE(c.e01 == 10);
  auto plan = edge_probs_parity(g, 0.8, {1.0, 1.0, 1.0});
  const auto& s = g.sensitive();
  for (int e = 0; e < g.n_edges(); ++e) {
    auto [u, v] = g.edges()[e];
    if (s(u) != s(v))
      CHECK(plan.delete_prob[e] == doctest::Approx(0.2));
    else if (s(u) == 0)
      CHECK(plan.delete_prob[e] == doctest::Approx(0.84));
    else
      CHECK(plan.delete_prob[e] == doctest::Approx(0.92));
  }
}

TEST_CASE("parity with equal group counts gives 1 - p_kappa everywhere") {
  Graph g = two_group_graph(5, 5, 10);  // directed counts all 10
  auto plan = edge_probs_parity(g, 0.8, {1.0, 1.0, 1.0});
  for (double p : plan.delete_prob) CHECK(p == doctest::Approx(0.2));
}

TEST_CASE("parity caps clamp non-minimum groups by ascending cardinality") {
  Graph g = two_group_graph(25, 50, 10);
  auto plan = edge_probs_parity(g, 0.8, {0.1, 0.5, 0.6});
  const auto& s = g.sensitive();
  for (int e = 0; e < g.n_edges(); ++e) {
    auto [u, v] = g.edges()[e];
    if (s(u) != s(v))
      CHECK(plan.delete_prob[e] == doctest::Approx(0.2));  // min group, never capped
    else if (s(u) == 0)
      CHECK(plan.delete_prob[e] == doctest::Approx(0.5));
    else
      CHECK(plan.delete_prob[e] == doctest::Approx(0.6));
  }
  CHECK_THROWS(edge_probs_parity(g, 0.8, {0.9, 0.5, 0.6}));
}

TEST_CASE("parity pre-clamp expected kept edges agree across groups") {
  std::mt19937 gen(47);
  for (int trial = 0; trial < 20; ++trial) {
    Graph g = testutil::random_graph(gen, 25, 1, 0.3);
    auto c = edge_group_counts(g);
    if (c.e00 == 0 || c.e11 == 0 || c.e01 == 0) continue;
    auto plan = edge_probs_parity(g, 0.75, {1.0, 1.0, 1.0});
    const auto& s = g.sensitive();
    double kept00 = 0, kept11 = 0, kept_cross = 0;
    for (int e = 0; e < g.n_edges(); ++e) {
      auto [u, v] = g.edges()[e];
      double keep = 1.0 - plan.delete_prob[e];
      if (s(u) != s(v))
        kept_cross += keep;  // one undirected edge = both orientations
      else if (s(u) == 0)
        kept00 += 2.0 * keep;
      else
        kept11 += 2.0 * keep;
    }
    long long m = std::min({c.e00, c.e11, c.e01});
    CHECK(kept00 == doctest::Approx(m * 0.75).epsilon(1e-9));
    CHECK(kept11 == doctest::Approx(m * 0.75).epsilon(1e-9));
    CHECK(2.0 * kept_cross == doctest::Approx(2.0 * m * 0.75).epsilon(1e-9));
  }
}

TEST_CASE("counterfactual retention semantics keep the intended edge types") {
  Graph g = two_group_graph(4, 4, 4);
  const auto& s = g.sensitive();

  CounterfactualProbs extreme{1.0, 0.0, 0.0, 1.0, true};
  auto v1 = edge_probs_counterfactual(g, extreme, 1);
  auto v2 = edge_probs_counterfactual(g, extreme, 2);
  for (int e = 0; e < g.n_edges(); ++e) {
    auto [u, v] = g.edges()[e];
    if (s(u) == s(v)) {
      CHECK(v1.delete_prob[e] == 0.0);
      CHECK(v2.delete_prob[e] == 1.0);
    } else {
      CHECK(v1.delete_prob[e] == 1.0);
      CHECK(v2.delete_prob[e] == 0.0);
    }
  }

  CounterfactualProbs pokec{0.75, 0.15, 0.3, 0.6, true};
  auto p1 = edge_probs_counterfactual(g, pokec, 1);
  for (int e = 0; e < g.n_edges(); ++e) {
    auto [u, v] = g.edges()[e];
    CHECK(p1.delete_prob[e] == doctest::Approx(s(u) == s(v) ? 0.25 : 0.85));
  }

  // literal deletion reading stays available behind the switch
  CounterfactualProbs literal{0.75, 0.15, 0.3, 0.6, false};
  auto d1 = edge_probs_counterfactual(g, literal, 1);
  for (int e = 0; e < g.n_edges(); ++e) {
    auto [u, v] = g.edges()[e];
    CHECK(d1.delete_prob[e] == doctest::Approx(s(u) == s(v) ? 0.75 : 0.15));
  }

  CHECK_THROWS(edge_probs_counterfactual(g, {0.2, 0.8, 0.3, 0.6, true}, 1));
  CHECK_THROWS(edge_probs_counterfactual(g, {0.8, 0.2, 0.6, 0.3, true}, 1));
}

TEST_CASE("triangle scheme boosts monochromatic triangle edges") {
  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(3, 1);
  Eigen::VectorXi mono(3);
  mono << 0, 0, 0;
  Graph g(3, {{0, 1}, {0, 2}, {1, 2}}, x, mono);
  auto plan = edge_probs_triangle(g, 1.4, 0.6, 0.2);
  for (double p : plan.delete_prob) CHECK(p == doctest::Approx(0.84));

  Eigen::VectorXi mixed(3);
  mixed << 0, 0, 1;
  Graph h(3, {{0, 1}, {0, 2}, {1, 2}}, x, mixed);
  auto plan2 = edge_probs_triangle(h, 1.4, 0.6, 0.2);
  for (int e = 0; e < h.n_edges(); ++e) {
    auto [u, v] = h.edges()[e];
    CHECK(plan2.delete_prob[e] == doctest::Approx(u == 0 && v == 1 ? 0.6 : 0.2));
  }

  auto clamped = edge_probs_triangle(g, 2.0, 0.9, 0.2);
  for (double p : clamped.delete_prob) CHECK(p == 1.0);

  CHECK_THROWS(edge_probs_triangle(g, 0.9, 0.6, 0.2));
  CHECK_THROWS(edge_probs_triangle(g, 1.4, 0.2, 0.6));
}

TEST_CASE("degree scheme matches the hand-built factor example") {
  // hub 0 with degree 10; leaf 1 gets one extra edge for degree 2; the
  // remaining leaves absorb 11 more edges so the mean lands exactly on 4
  std::vector<Edge> edges;
  for (int i = 1; i <= 10; ++i) edges.push_back({0, i});
  edges.push_back({1, 2});
  int cycle[] = {2, 3, 4, 5, 6, 7, 8, 9, 10, 2};
  for (int k = 0; k < 9; ++k) edges.push_back({std::min(cycle[k], cycle[k + 1]),
                                               std::max(cycle[k], cycle[k + 1])});
  edges.push_back({3, 5});
  edges.push_back({4, 6});
  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(11, 1);
  Eigen::VectorXi s = Eigen::VectorXi::Zero(11);
  s(10) = 1;  // one cross edge so both groups exist
  Graph g(11, edges, x, s);
  auto ds = degree_stats(g);
  REQUIRE(ds.d_max == 10);
  REQUIRE(ds.d_mean == doctest::Approx(4.0));
  REQUIRE(ds.degrees[1] == 2);

  auto plan = edge_probs_degree(g, 0.85, 0.15, 0.9);
  // edge (0,1): min endpoint degree 2 -> factor 0.75
  for (int e = 0; e < g.n_edges(); ++e) {
    auto [u, v] = g.edges()[e];
    if (u == 0 && v == 1) CHECK(plan.delete_prob[e] == doctest::Approx(0.6375));
  }
}

TEST_CASE("degree scheme singular cases") {
  // two connected hubs at maximum degree -> zero denominator -> p_max
  std::vector<Edge> edges = {{0, 1}, {0, 2}, {0, 3}, {0, 4}, {1, 5}, {1, 6}, {1, 7}};
  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(8, 1);
  Eigen::VectorXi s = Eigen::VectorXi::Zero(8);
  s(7) = 1;
  Graph g(8, edges, x, s);
  auto ds = degree_stats(g);
  REQUIRE(ds.degrees[0] == 4);
  REQUIRE(ds.degrees[1] == 4);
  auto plan = edge_probs_degree(g, 0.85, 0.15, 0.9);
  CHECK(plan.delete_prob[0] == doctest::Approx(0.9));  // edge (0,1)

  // regular graph -> factor 1 -> base probabilities
  std::vector<Edge> cycle = {{0, 1}, {1, 2}, {2, 3}, {0, 3}};
  Eigen::VectorXi sc(4);
  sc << 0, 0, 1, 1;
  Graph ring(4, cycle, Eigen::MatrixXd::Zero(4, 1), sc);
  auto ring_plan = edge_probs_degree(ring, 0.85, 0.15, 0.9);
  const auto& rs = ring.sensitive();
  for (int e = 0; e < ring.n_edges(); ++e) {
    auto [u, v] = ring.edges()[e];
    CHECK(ring_plan.delete_prob[e] == doctest::Approx(rs(u) == rs(v) ? 0.85 : 0.15));
  }
}

TEST_CASE("degree scheme is monotone in the minimum endpoint degree") {
  std::mt19937 gen(53);
  for (int trial = 0; trial < 10; ++trial) {
    Graph g = testutil::random_graph(gen, 20, 1, 0.3);
    auto ds = degree_stats(g);
    if (ds.d_max == ds.d_mean) continue;
    auto plan = edge_probs_degree(g, 0.8, 0.3, 1.0);
    const auto& s = g.sensitive();
    for (int a = 0; a < g.n_edges(); ++a)
      for (int b = 0; b < g.n_edges(); ++b) {
        auto [ua, va] = g.edges()[a];
        auto [ub, vb] = g.edges()[b];
        bool same_a = s(ua) == s(va), same_b = s(ub) == s(vb);
        if (same_a != same_b) continue;
        int da = std::min(ds.degrees[ua], ds.degrees[va]);
        int db = std::min(ds.degrees[ub], ds.degrees[vb]);
        if (da <= db) CHECK(plan.delete_prob[a] <= plan.delete_prob[b] + 1e-12);
      }
  }
}

TEST_CASE("all schemes emit probabilities in [0,1] on random inputs") {
  std::mt19937 gen(59);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int trial = 0; trial < 30; ++trial) {
    Graph g = testutil::random_graph(gen, 20, 1, 0.3);
    auto c = edge_group_counts(g);
    if (c.e00 == 0 || c.e11 == 0 || c.e01 == 0) continue;
    double a = unif(gen), b = unif(gen);
    double hi = std::max({a, b, 0.01}), lo = std::min(a, b);
    if (hi == lo) hi = lo + 0.01;
    std::vector<EdgeDeletionPlan> plans;
    plans.push_back(edge_probs_dyadic(g, unif(gen), unif(gen)));
    plans.push_back(edge_probs_parity(g, unif(gen), {0.2, 0.5, 0.9}));
    plans.push_back(edge_probs_counterfactual(g, {hi, lo, lo, hi, true}, 1 + trial % 2));
    plans.push_back(edge_probs_triangle(g, 1.0 + unif(gen) + 0.01, hi, lo));
    plans.push_back(edge_probs_degree(g, hi, lo, unif(gen)));
    for (const auto& plan : plans)
      for (double p : plan.delete_prob) {
        CHECK(p >= 0.0);
        CHECK(p <= 1.0);
      }
  }
}

TEST_CASE("edge deletion sampling honors degenerate plans and the binomial CI") {
  Graph g = two_group_graph(10, 10, 10);
  EdgeDeletionPlan zeros{EdScheme::dyadic, std::vector<double>(g.n_edges(), 0.0)};
  CHECK(sample_edge_deletion(g, zeros, 3, 1) == g.edges());
  EdgeDeletionPlan ones{EdScheme::dyadic, std::vector<double>(g.n_edges(), 1.0)};
  CHECK(sample_edge_deletion(g, ones, 3, 1).empty());

  EdgeDeletionPlan uniform{EdScheme::dyadic, std::vector<double>(g.n_edges(), 0.3)};
  const int trials = 10000;
  std::vector<int> deleted(g.n_edges(), 0);
  for (int t = 0; t < trials; ++t) {
    auto kept = sample_edge_deletion(g, uniform, static_cast<std::uint64_t>(t), 1);
    std::set<Edge> kept_set(kept.begin(), kept.end());
    for (int e = 0; e < g.n_edges(); ++e)
      if (!kept_set.count(g.edges()[e])) ++deleted[e];
  }
  double half = 2.5758 * std::sqrt(0.3 * 0.7 / trials);
  for (int e = 0; e < g.n_edges(); ++e)
    CHECK(std::fabs(deleted[e] / static_cast<double>(trials) - 0.3) < half);

  EdgeDeletionPlan misaligned{EdScheme::dyadic, std::vector<double>(2, 0.5)};
  CHECK_THROWS(sample_edge_deletion(g, misaligned, 3, 1));
}

TEST_CASE("make_views with everything disabled returns the input graph twice") {
  std::mt19937 gen(61);
  Graph g = testutil::random_graph(gen, 15);
  AugmentConfig cfg;  // no FM, no ED
  auto [v1, v2] = make_views(g, cfg, 9);
  CHECK(v1.edges == g.edges());
  CHECK(v2.edges == g.edges());
  CHECK(v1.features == g.features());
  CHECK(v2.features == g.features());
}

TEST_CASE("make_views is deterministic and view-separated") {
  std::mt19937 gen(67);
  Graph g = testutil::random_graph(gen, 20, 6, 0.3);
  AugmentConfig cfg;
  cfg.view1.fm_method = CorrMethod::pearson;
  cfg.view1.fm_p_f = 0.6;
  cfg.view1.ed_scheme = EdScheme::degree;
  cfg.view1.p_b1 = 0.85;
  cfg.view1.p_b2 = 0.2;
  cfg.view1.p_max = 0.9;
  cfg.view2 = cfg.view1;
  cfg.view2.fm_p_f = 0.4;

  auto [a1, a2] = make_views(g, cfg, 5);
  auto [b1, b2] = make_views(g, cfg, 5);
  CHECK(a1.edges == b1.edges);
  CHECK(a2.edges == b2.edges);
  CHECK(a1.features == b1.features);
  CHECK(a2.features == b2.features);
  // the two views use independent randomness
  CHECK(a1.provenance.view_id == 1);
  CHECK(a2.provenance.view_id == 2);
  for (const auto& e : a1.edges) CHECK(g.has_edge(e.first, e.second));
}
