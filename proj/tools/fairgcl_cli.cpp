#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>

#include "fairgcl/config.hpp"
#include "fairgcl/contrastive.hpp"
#include "fairgcl/evaluate.hpp"
#include "fairgcl/graph.hpp"
#include "fairgcl/stats.hpp"
#include "fairgcl/verify.hpp"

using nlohmann::json;

namespace {

void write_report(const std::string& path, const json& j) {
  if (path.empty()) return;
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write report: " + path);
  out << j.dump(2) << '\n';
}

fairgcl::ExperimentConfig load(const std::string& config_path,
                               std::optional<std::uint64_t> seed_override) {
  auto cfg = fairgcl::load_config(config_path);
  if (seed_override) {
    cfg.seed = *seed_override;
    cfg.train.seed = *seed_override;
  }
  return cfg;
}

int cmd_stats(const fairgcl::ExperimentConfig& cfg) {
  fairgcl::Graph g = fairgcl::load_dataset(cfg);
  auto counts = fairgcl::edge_group_counts(g);
  auto deg = fairgcl::degree_stats(g);
  auto corr = fairgcl::feature_correlation_report(g, cfg.verify_method);

  json j = {{"n_nodes", g.n_nodes()},
            {"n_features", g.n_features()},
            {"n_edges", g.n_edges()},
            {"same_attr_undirected", counts.same / 2},
            {"diff_attr_undirected", counts.diff / 2},
            {"by_pair", {{"e00", counts.e00}, {"e01", counts.e01}, {"e10", counts.e10}, {"e11", counts.e11}}},
            {"d_max", deg.d_max},
            {"d_mean", deg.d_mean},
            {"correlation", fairgcl::to_json(corr)}};
  std::printf("nodes %d  edges %d  features %d\n", g.n_nodes(), g.n_edges(), g.n_features());
  std::printf("same-attribute edges %lld  different-attribute edges %lld (undirected)\n",
              static_cast<long long>(counts.same / 2), static_cast<long long>(counts.diff / 2));
  std::printf("d_max %d  d_mean %.4f\n", deg.d_max, deg.d_mean);
  write_report(cfg.report_path, j);
  std::cout << j.dump(2) << '\n';
  return 0;
}

int cmd_augment(const fairgcl::ExperimentConfig& cfg, const std::string& out_prefix) {
  fairgcl::Graph g = fairgcl::load_dataset(cfg);
  auto [v1, v2] = fairgcl::make_views(g, cfg.augment, cfg.seed);
  for (const auto* view : {&v1, &v2}) {
    std::string base = out_prefix + "_view" + std::to_string(view->provenance.view_id);
    fairgcl::write_edge_list(base + ".edges", view->edges);
    fairgcl::write_features_csv(base + ".features.csv", view->features);
    json side = {{"seed", view->provenance.seed},
                 {"view_id", view->provenance.view_id},
                 {"feature_mask", view->provenance.fm_desc},
                 {"edge_deletion", view->provenance.ed_desc},
                 {"n_edges", view->edges.size()}};
    std::ofstream out(base + ".provenance.json");
    out << side.dump(2) << '\n';
  }
  std::printf("view 1: %zu edges, view 2: %zu edges (input %d)\n", v1.edges.size(),
              v2.edges.size(), g.n_edges());
  return 0;
}

int cmd_train(const fairgcl::ExperimentConfig& cfg) {
  fairgcl::Graph g = fairgcl::load_dataset(cfg);
  auto [params, report] = fairgcl::train(g, cfg.augment, cfg.train);
  if (!cfg.checkpoint_path.empty()) fairgcl::save_checkpoint(cfg.checkpoint_path, params);
  json j = fairgcl::to_json(report);
  write_report(cfg.report_path, j);
  std::printf("trained %d epochs, final loss %.6f, wall time %.2fs\n",
              static_cast<int>(report.loss_per_epoch.size()), report.loss_per_epoch.back(),
              report.wall_time_sec);
  return 0;
}

int cmd_eval(const fairgcl::ExperimentConfig& cfg, const std::string& checkpoint) {
  fairgcl::Graph g = fairgcl::load_dataset(cfg);
  std::string ckpt = checkpoint.empty() ? cfg.checkpoint_path : checkpoint;
  if (ckpt.empty()) throw std::runtime_error("eval requires a checkpoint path");
  fairgcl::EncoderParams params = fairgcl::load_checkpoint(ckpt);
  if (params.dims.in != g.n_features())
    throw std::runtime_error("checkpoint feature dimension does not match dataset");
  auto rep = fairgcl::evaluate_pipeline(g, params, cfg.eval.n_splits, cfg.eval.train_fraction,
                                        cfg.eval.l2, cfg.seed);
  json j = fairgcl::to_json(rep);
  write_report(cfg.report_path, j);
  std::printf("accuracy %.2f%% +- %.2f  dSP %.2f%% +- %.2f  dEO %.2f%% +- %.2f\n",
              100 * rep.accuracy_mean, 100 * rep.accuracy_std, 100 * rep.delta_sp_mean,
              100 * rep.delta_sp_std, 100 * rep.delta_eo_mean, 100 * rep.delta_eo_std);
  std::cout << j.dump(2) << '\n';
  return 0;
}

int cmd_verify(const fairgcl::ExperimentConfig& cfg) {
  fairgcl::Graph g = fairgcl::load_dataset(cfg);
  auto corr = fairgcl::feature_correlation_report(g, cfg.verify_method);
  auto rep = fairgcl::verify_proposition1(corr, cfg.verify_p_f, cfg.verify_trials, cfg.seed);
  json j = fairgcl::to_json(rep);
  write_report(cfg.report_path, j);
  std::printf("analytic adaptive %.6f  uniform %.6f\n", rep.analytic_adaptive,
              rep.analytic_uniform);
  std::printf("MC adaptive %.6f +- %.6f  uniform %.6f +- %.6f (%d trials)\n",
              rep.mc_adaptive.mean, rep.mc_adaptive.stderr_, rep.mc_uniform.mean,
              rep.mc_uniform.stderr_, rep.trials);
  std::printf("majorization %s  expectation inequality %s\n",
              rep.majorization_holds ? "PASS" : "FAIL",
              rep.inequality_holds ? "PASS" : "FAIL");
  std::cout << j.dump(2) << '\n';
  return rep.inequality_holds ? 0 : 1;
}

int cmd_bench(const fairgcl::ExperimentConfig& cfg) {
  if (cfg.bench.empty()) throw std::runtime_error("bench requires a bench.schemes list");
  fairgcl::Graph g = fairgcl::load_dataset(cfg);
  json rows = json::array();
  std::printf("%-24s %10s %10s %10s\n", "scheme", "acc %", "dSP %", "dEO %");
  for (const auto& entry : cfg.bench) {
    try {
      auto [params, train_rep] = fairgcl::train(g, entry.augment, cfg.train);
      auto rep = fairgcl::evaluate_pipeline(g, params, cfg.eval.n_splits,
                                            cfg.eval.train_fraction, cfg.eval.l2, cfg.seed);
      json row = fairgcl::to_json(rep);
      row["scheme"] = entry.name;
      rows.push_back(row);
      std::printf("%-24s %6.2f+-%.2f %6.2f+-%.2f %6.2f+-%.2f\n", entry.name.c_str(),
                  100 * rep.accuracy_mean, 100 * rep.accuracy_std, 100 * rep.delta_sp_mean,
                  100 * rep.delta_sp_std, 100 * rep.delta_eo_mean, 100 * rep.delta_eo_std);
    } catch (const std::exception& e) {
      rows.push_back({{"scheme", entry.name}, {"error", e.what()}});
      std::printf("%-24s FAILED: %s\n", entry.name.c_str(), e.what());
    }
  }
  json j = {{"schemes", rows}};
  write_report(cfg.report_path, j);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fairness-aware graph contrastive learning toolkit"};
  app.require_subcommand(1);

  std::string config_path;
  std::string checkpoint;
  std::string out_prefix = "augmented";
  std::optional<std::uint64_t> seed;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("-c,--config", config_path, "experiment config (JSON)")->required();
    sub->add_option("--seed", seed, "override the config seed");
  };

  auto* stats = app.add_subcommand("stats", "dataset statistics and correlation report");
  add_common(stats);
  auto* augment = app.add_subcommand("augment", "export one corrupted view pair");
  add_common(augment);
  augment->add_option("-o,--out-prefix", out_prefix, "output file prefix");
  auto* train = app.add_subcommand("train", "contrastive training");
  add_common(train);
  auto* eval = app.add_subcommand("eval", "downstream classification and fairness metrics");
  add_common(eval);
  eval->add_option("--checkpoint", checkpoint, "encoder checkpoint path");
  auto* verify = app.add_subcommand("verify-prop1", "adaptive vs uniform masking comparison");
  add_common(verify);
  auto* bench = app.add_subcommand("bench", "train+eval each configured scheme");
  add_common(bench);

  CLI11_PARSE(app, argc, argv);

  try {
    auto cfg = load(config_path, seed);
    if (stats->parsed()) return cmd_stats(cfg);
    if (augment->parsed()) return cmd_augment(cfg, out_prefix);
    if (train->parsed()) return cmd_train(cfg);
    if (eval->parsed()) return cmd_eval(cfg, checkpoint);
    if (verify->parsed()) return cmd_verify(cfg);
    if (bench->parsed()) return cmd_bench(cfg);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
