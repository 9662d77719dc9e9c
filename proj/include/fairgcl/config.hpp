#pragma once

#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "fairgcl/augment.hpp"
#include "fairgcl/contrastive.hpp"
#include "fairgcl/evaluate.hpp"
#include "fairgcl/graph.hpp"
#include "fairgcl/verify.hpp"

namespace fairgcl {

struct DatasetPaths {
  std::string edges, features, sensitive;
  std::optional<std::string> labels;
};

struct EvalConfig {
  int n_splits = 3;
  double train_fraction = 0.9;
  double l2 = 1.0;
};

struct BenchEntry {
  std::string name;
  AugmentConfig augment;
};

struct ExperimentConfig {
  std::uint64_t seed = 0;
  std::optional<DatasetPaths> paths;
  std::optional<SbmSpec> sbm;
  AugmentConfig augment;
  TrainConfig train;
  EvalConfig eval;
  std::string report_path;
  std::string checkpoint_path;
  int verify_trials = 100000;
  double verify_p_f = 0.6;
  CorrMethod verify_method = CorrMethod::pearson;
  std::vector<BenchEntry> bench;
};

ExperimentConfig load_config(const std::string& path);
ExperimentConfig parse_config(const nlohmann::json& j);

Graph load_dataset(const ExperimentConfig& cfg);

nlohmann::json to_json(const CorrelationReport& rep);
nlohmann::json to_json(const FairnessReport& rep);
nlohmann::json to_json(const VerificationReport& rep);
nlohmann::json to_json(const TrainReport& rep);

}  // namespace fairgcl
