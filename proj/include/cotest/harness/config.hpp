#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cotest/cotesting/strategy.hpp"
#include "cotest/learners/learner_spec.hpp"
#include "cotest/wrapper/cotesting.hpp"

namespace cotest {

struct AlgorithmConfig {
  std::string id;    // name used in curve output
  std::string kind;  // cotest | random | uncertainty | qbag | qbc-nb | qboost | wrapper
  BaseLearnerSpec learner;
  QueryStrategy query = QueryStrategy::naive;
  OutputStrategy output = OutputStrategy::weighted_vote;
  wrapper::WrapperMode mode = wrapper::WrapperMode::naive;
  int committee = 5;
};

struct ExperimentConfig {
  std::string type;  // classification | wrapper
  std::filesystem::path data, views;          // classification inputs
  std::vector<std::filesystem::path> tasks;   // wrapper task files
  std::string detect = "start";               // wrapper: start | end of the item
  std::size_t folds = 10;
  std::size_t n_initial = 6;
  int episodes = 1;
  int batch = 1;
  std::uint64_t seed = 1;
  std::filesystem::path outdir = "out";
  bool svg = false;
  std::vector<AlgorithmConfig> algorithms;
};

inline AlgorithmConfig parse_algorithm_config(const nlohmann::json& j) {
  AlgorithmConfig a;
  if (!j.contains("kind")) throw ConfigError("algorithm entry is missing 'kind'");
  a.kind = j.at("kind").get<std::string>();
  a.id = j.value("id", a.kind);

  if (a.kind == "qboost")
    throw ConfigError(
        "algorithm '" + a.id +
        "': Query-by-Boosting is not available in this build; its registry slot is reserved");
  if (a.kind != "cotest" && a.kind != "random" && a.kind != "uncertainty" && a.kind != "qbag" &&
      a.kind != "qbc-nb" && a.kind != "wrapper")
    throw ConfigError("unknown algorithm kind '" + a.kind + "'");

  if (j.contains("learner")) a.learner = BaseLearnerSpec::parse(j.at("learner").get<std::string>());
  if (j.contains("alpha")) a.learner.alpha = j.at("alpha").get<double>();
  if (j.contains("max_depth")) a.learner.tree.max_depth = j.at("max_depth").get<int>();
  if (j.contains("min_leaf")) a.learner.tree.min_leaf = j.at("min_leaf").get<int>();
  if (j.contains("query")) a.query = parse_query_strategy(j.at("query").get<std::string>());
  if (j.contains("output")) a.output = parse_output_strategy(j.at("output").get<std::string>());
  if (j.contains("mode")) a.mode = wrapper::parse_wrapper_mode(j.at("mode").get<std::string>());
  a.committee = j.value("committee", a.kind == "qbc-nb" ? 2 : 5);
  if (a.committee < 2 && (a.kind == "qbag" || a.kind == "qbc-nb"))
    throw ConfigError("algorithm '" + a.id + "': committee size must be >= 2");
  return a;
}

inline ExperimentConfig parse_experiment_config(const nlohmann::json& j) {
  ExperimentConfig cfg;
  cfg.type = j.value("type", "classification");
  if (cfg.type != "classification" && cfg.type != "wrapper")
    throw ConfigError("config type must be classification|wrapper");
  if (cfg.type == "classification") {
    if (!j.contains("data") || !j.contains("views"))
      throw ConfigError("classification config needs 'data' and 'views' paths");
    cfg.data = j.at("data").get<std::string>();
    cfg.views = j.at("views").get<std::string>();
  } else {
    if (!j.contains("tasks") || !j.at("tasks").is_array() || j.at("tasks").empty())
      throw ConfigError("wrapper config needs a non-empty 'tasks' array");
    for (const auto& t : j.at("tasks")) cfg.tasks.emplace_back(t.get<std::string>());
    cfg.detect = j.value("detect", "start");
    if (cfg.detect != "start" && cfg.detect != "end")
      throw ConfigError("wrapper 'detect' must be start|end");
  }
  cfg.folds = j.value("folds", cfg.type == "wrapper" ? std::size_t{20} : std::size_t{10});
  cfg.n_initial = j.value("n_initial", cfg.type == "wrapper" ? std::size_t{2} : std::size_t{6});
  cfg.episodes = j.value("episodes", cfg.type == "wrapper" ? 18 : 1);
  cfg.batch = j.value("batch", 1);
  cfg.seed = j.value("seed", std::uint64_t{1});
  cfg.outdir = j.value("outdir", std::string("out"));
  cfg.svg = j.value("svg", false);
  if (cfg.folds < 2) throw ConfigError("folds must be >= 2");
  if (cfg.n_initial < 1) throw ConfigError("n_initial must be >= 1");
  if (cfg.episodes < 1) throw ConfigError("episodes must be >= 1");
  if (cfg.batch < 1) throw ConfigError("batch must be >= 1");

  if (!j.contains("algorithms") || !j.at("algorithms").is_array() || j.at("algorithms").empty())
    throw ConfigError("config needs a non-empty 'algorithms' array");
  for (const auto& a : j.at("algorithms")) {
    AlgorithmConfig alg = parse_algorithm_config(a);
    if (cfg.type == "wrapper" && alg.kind != "wrapper")
      throw ConfigError("algorithm '" + alg.id + "' cannot run on wrapper tasks");
    if (cfg.type == "classification" && alg.kind == "wrapper")
      throw ConfigError("algorithm '" + alg.id + "' requires wrapper tasks");
    for (const AlgorithmConfig& seen : cfg.algorithms)
      if (seen.id == alg.id) throw ConfigError("duplicate algorithm id '" + alg.id + "'");
    cfg.algorithms.push_back(std::move(alg));
  }
  return cfg;
}

inline ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("config " + path.string() + ": " + e.what());
  }
  try {
    return parse_experiment_config(j);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("config " + path.string() + ": " + e.what());
  }
}

}  // namespace cotest
