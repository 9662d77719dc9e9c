#include "fairgcl/config.hpp"

#include <fstream>
#include <stdexcept>

namespace fairgcl {

namespace {

using nlohmann::json;

ViewAugmentConfig parse_view(const json& j) {
  ViewAugmentConfig v;
  if (j.contains("feature_mask") && !j["feature_mask"].is_null()) {
    const auto& fm = j["feature_mask"];
    v.fm_method = corr_method_from_string(fm.at("method").get<std::string>());
    v.fm_p_f = fm.at("p_f").get<double>();
    if (v.fm_p_f < 0.0 || v.fm_p_f > 1.0)
      throw std::invalid_argument("feature_mask.p_f must lie in [0,1]");
  }
  if (j.contains("edge_deletion") && !j["edge_deletion"].is_null()) {
    const auto& ed = j["edge_deletion"];
    v.ed_scheme = ed_scheme_from_string(ed.at("scheme").get<std::string>());
    switch (*v.ed_scheme) {
      case EdScheme::dyadic:
        v.p_kappa = ed.at("p_kappa").get<double>();
        v.p_max = ed.at("p_max").get<double>();
        break;
      case EdScheme::parity:
        v.p_kappa = ed.at("p_kappa").get<double>();
        v.parity_caps = {ed.at("p_max1").get<double>(), ed.at("p_max2").get<double>(),
                         ed.at("p_max3").get<double>()};
        break;
      case EdScheme::counterfactual:
        v.cf.p1 = ed.at("p1").get<double>();
        v.cf.p2 = ed.at("p2").get<double>();
        v.cf.p3 = ed.at("p3").get<double>();
        v.cf.p4 = ed.at("p4").get<double>();
        v.cf.retention_semantics = ed.value("retention_semantics", true);
        if (!(v.cf.p1 > v.cf.p2))
          throw std::invalid_argument("counterfactual scheme requires p1 > p2");
        if (!(v.cf.p3 < v.cf.p4))
          throw std::invalid_argument("counterfactual scheme requires p3 < p4");
        break;
      case EdScheme::triangle:
        v.alpha = ed.at("alpha").get<double>();
        v.p_b1 = ed.at("p_b1").get<double>();
        v.p_b2 = ed.at("p_b2").get<double>();
        if (!(v.alpha > 1.0)) throw std::invalid_argument("triangle scheme requires alpha > 1");
        if (!(v.p_b1 > v.p_b2))
          throw std::invalid_argument("triangle scheme requires p_b1 > p_b2");
        break;
      case EdScheme::degree:
        v.p_b1 = ed.at("p_b1").get<double>();
        v.p_b2 = ed.at("p_b2").get<double>();
        v.p_max = ed.at("p_max").get<double>();
        if (!(v.p_b1 > v.p_b2))
          throw std::invalid_argument("degree scheme requires p_b1 > p_b2");
        break;
    }
  }
  return v;
}

AugmentConfig parse_augment(const json& j) {
  AugmentConfig a;
  if (j.contains("view1")) a.view1 = parse_view(j["view1"]);
  if (j.contains("view2")) a.view2 = parse_view(j["view2"]);
  a.uniform_control = j.value("uniform_control", false);
  return a;
}

}  // namespace

ExperimentConfig parse_config(const nlohmann::json& j) {
  ExperimentConfig cfg;
  cfg.seed = j.value("seed", 0ULL);

  const auto& ds = j.at("dataset");
  bool has_paths = ds.contains("paths");
  bool has_sbm = ds.contains("sbm");
  if (has_paths == has_sbm)
    throw std::invalid_argument("dataset must specify exactly one of paths or sbm");
  if (has_paths) {
    const auto& p = ds["paths"];
    DatasetPaths paths;
    paths.edges = p.at("edges").get<std::string>();
    paths.features = p.at("features").get<std::string>();
    paths.sensitive = p.at("sensitive").get<std::string>();
    if (p.contains("labels") && !p["labels"].is_null())
      paths.labels = p["labels"].get<std::string>();
    cfg.paths = paths;
  } else {
    const auto& s = ds["sbm"];
    SbmSpec spec;
    spec.nodes_block0 = s.at("nodes_block0").get<int>();
    spec.nodes_block1 = s.at("nodes_block1").get<int>();
    spec.p_within = s.at("p_within").get<double>();
    spec.p_between = s.at("p_between").get<double>();
    spec.n_features = s.at("n_features").get<int>();
    spec.n_biased_features = s.at("n_biased_features").get<int>();
    spec.noise_scale = s.value("noise_scale", 1.0);
    cfg.sbm = spec;
  }

  if (j.contains("augment")) cfg.augment = parse_augment(j["augment"]);

  if (j.contains("train")) {
    const auto& t = j["train"];
    cfg.train.tau = t.value("tau", 0.4);
    cfg.train.epochs = t.value("epochs", 400);
    cfg.train.learning_rate = t.value("learning_rate", 5e-4);
    cfg.train.weight_decay = t.value("weight_decay", 1e-5);
    cfg.train.hidden_dim = t.value("hidden_dim", 256);
    cfg.train.embed_dim = t.value("embed_dim", 256);
    if (cfg.train.tau <= 0.0) throw std::invalid_argument("train.tau must be positive");
    if (cfg.train.epochs < 1) throw std::invalid_argument("train.epochs must be >= 1");
  }
  cfg.train.seed = cfg.seed;

  if (j.contains("eval")) {
    const auto& e = j["eval"];
    cfg.eval.n_splits = e.value("n_splits", 3);
    cfg.eval.train_fraction = e.value("train_fraction", 0.9);
    cfg.eval.l2 = e.value("l2", 1.0);
  }

  if (j.contains("output")) {
    cfg.report_path = j["output"].value("report", "");
    cfg.checkpoint_path = j["output"].value("checkpoint", "");
  }

  if (j.contains("verify")) {
    const auto& v = j["verify"];
    cfg.verify_trials = v.value("trials", 100000);
    cfg.verify_p_f = v.value("p_f", 0.6);
    cfg.verify_method = corr_method_from_string(v.value("method", std::string("pearson")));
    if (cfg.verify_trials < 100)
      throw std::invalid_argument("verify.trials must be at least 100");
  }

  if (j.contains("bench")) {
    for (const auto& entry : j["bench"].at("schemes")) {
      BenchEntry b;
      b.name = entry.at("name").get<std::string>();
      b.augment = parse_augment(entry.at("augment"));
      cfg.bench.push_back(std::move(b));
    }
  }
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  nlohmann::json j;
  in >> j;
  return parse_config(j);
}

Graph load_dataset(const ExperimentConfig& cfg) {
  if (cfg.paths)
    return load_graph(cfg.paths->edges, cfg.paths->features, cfg.paths->sensitive,
                      cfg.paths->labels);
  return generate_sbm(*cfg.sbm, cfg.seed);
}

nlohmann::json to_json(const CorrelationReport& rep) {
  return {{"method", to_string(rep.method)},
          {"n_samples", rep.n_samples},
          {"r", std::vector<double>(rep.r.data(), rep.r.data() + rep.r.size())},
          {"p_uncorr",
           std::vector<double>(rep.p_uncorr.data(), rep.p_uncorr.data() + rep.p_uncorr.size())},
          {"degenerate", rep.degenerate}};
}

nlohmann::json to_json(const FairnessReport& rep) {
  // percentages, mirroring the benchmark table layout
  return {{"n_splits", rep.n_splits},
          {"accuracy_pct", {{"mean", 100.0 * rep.accuracy_mean}, {"std", 100.0 * rep.accuracy_std}}},
          {"delta_sp_pct", {{"mean", 100.0 * rep.delta_sp_mean}, {"std", 100.0 * rep.delta_sp_std}}},
          {"delta_eo_pct", {{"mean", 100.0 * rep.delta_eo_mean}, {"std", 100.0 * rep.delta_eo_std}}},
          {"per_split",
           {{"accuracy", rep.accuracy}, {"delta_sp", rep.delta_sp}, {"delta_eo", rep.delta_eo}}},
          {"failed_splits", rep.failed_splits}};
}

nlohmann::json to_json(const VerificationReport& rep) {
  return {{"analytic_adaptive", rep.analytic_adaptive},
          {"analytic_uniform", rep.analytic_uniform},
          {"mc_adaptive", {{"mean", rep.mc_adaptive.mean}, {"stderr", rep.mc_adaptive.stderr_}}},
          {"mc_uniform", {{"mean", rep.mc_uniform.mean}, {"stderr", rep.mc_uniform.stderr_}}},
          {"majorization_holds", rep.majorization_holds},
          {"inequality_holds", rep.inequality_holds},
          {"trials", rep.trials}};
}

nlohmann::json to_json(const TrainReport& rep) {
  return {{"loss_per_epoch", rep.loss_per_epoch}, {"wall_time_sec", rep.wall_time_sec}};
}

}  // namespace fairgcl
