#pragma once

#include <atomic>
#include <cstdlib>
#include <iostream>
#include <mutex>
#include <thread>

#include "cotest/baselines/samplers.hpp"
#include "cotest/harness/config.hpp"
#include "cotest/harness/curves.hpp"

namespace cotest {

inline unsigned experiment_threads() {
  const char* env = std::getenv("COTEST_THREADS");
  if (!env || !*env) return 0;  // serial
  long v = std::strtol(env, nullptr, 10);
  return v < 0 ? 0u : static_cast<unsigned>(v);
}

namespace detail {

// Jobs execute in any order; results land in preassigned slots so output is
// merged by sort order, never by completion order.
inline void run_jobs(std::size_t count, unsigned threads,
                     const std::function<void(std::size_t)>& job) {
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) job(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        job(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (std::thread& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

inline RunResult run_classification_algorithm(const AlgorithmConfig& alg, const Dataset& ds,
                                              const ActiveSplit& split, int episodes, int batch,
                                              Rng rng) {
  ScheduleOptions sched{episodes, batch};
  if (alg.kind == "cotest") {
    CoTestOptions opt{alg.query, alg.output, episodes, batch};
    return run_cotesting(ds, split, std::span(&alg.learner, 1), opt, rng);
  }
  if (alg.kind == "random") return random_sampling(ds, split, alg.learner, sched, rng);
  if (alg.kind == "uncertainty") return uncertainty_sampling(ds, split, alg.learner, sched, rng);
  if (alg.kind == "qbag") return query_by_bagging(ds, split, alg.learner, alg.committee, sched, rng);
  if (alg.kind == "qbc-nb")
    return query_by_committee_nb(ds, split, alg.learner.alpha, alg.committee, sched, rng);
  throw ConfigError("unknown algorithm kind '" + alg.kind + "'");
}

}  // namespace detail

// Classification protocol: stratified k-fold CV; every algorithm starts each
// fold from the same seeded initial labeled set and runs the same episode
// schedule, so curves are pointwise comparable.
inline std::vector<LearningCurve> run_classification_experiment(const ExperimentConfig& cfg,
                                                                const Dataset& ds) {
  Rng root(cfg.seed);
  auto folds = stratified_kfold(ds, cfg.folds, root.derive("folds").next_u64());

  struct Job {
    std::size_t alg, fold;
  };
  std::vector<Job> jobs;
  for (std::size_t a = 0; a < cfg.algorithms.size(); ++a)
    for (std::size_t f = 0; f < folds.size(); ++f) jobs.push_back({a, f});
  std::vector<LearningCurve> curves(jobs.size());

  detail::run_jobs(jobs.size(), experiment_threads(), [&](std::size_t i) {
    const AlgorithmConfig& alg = cfg.algorithms[jobs[i].alg];
    std::size_t f = jobs[i].fold;
    auto train = subset(ds, folds[f].train);
    auto test = subset(ds, folds[f].test);
    ActiveSplit split =
        split_initial(train, cfg.n_initial, root.derive("init").derive(f).next_u64());
    Rng run_rng = root.derive("alg:" + alg.id).derive(f);
    RunResult result;
    try {
      result = detail::run_classification_algorithm(alg, ds, split, cfg.episodes, cfg.batch, run_rng);
    } catch (const ContractError& e) {
      throw ContractError("algorithm '" + alg.id + "', fold " + std::to_string(f) + ": " + e.what());
    }

    LearningCurve curve;
    curve.algorithm = alg.id;
    curve.fold = static_cast<int>(f);
    for (const Snapshot& snap : result.snapshots)
      curve.points.push_back({snap.labeled_count, evaluate(snap.predict, test)});
    if (static_cast<int>(result.snapshots.size()) < cfg.episodes)
      std::cerr << "note: " << alg.id << " fold " << f << " exhausted the pool after "
                << result.snapshots.size() << " episodes\n";
    curves[i] = std::move(curve);
  });
  return curves;
}

struct WrapperTaskCurves {
  std::string task_name;
  std::vector<LearningCurve> curves;
};

inline std::vector<LearningCurve> run_wrapper_task_experiment(const ExperimentConfig& cfg,
                                                              const wrapper::WrapperTask& task,
                                                              std::size_t task_index) {
  Rng root = Rng(cfg.seed).derive("task").derive(task_index);
  auto folds = wrapper::kfold_documents(task.docs.size(), cfg.folds, root.derive("folds").next_u64());

  struct Job {
    std::size_t alg, fold;
  };
  std::vector<Job> jobs;
  for (std::size_t a = 0; a < cfg.algorithms.size(); ++a)
    for (std::size_t f = 0; f < folds.size(); ++f) jobs.push_back({a, f});
  std::vector<LearningCurve> curves(jobs.size());

  detail::run_jobs(jobs.size(), experiment_threads(), [&](std::size_t i) {
    const AlgorithmConfig& alg = cfg.algorithms[jobs[i].alg];
    std::size_t f = jobs[i].fold;
    std::vector<wrapper::LabeledDocument> train, test;
    for (std::size_t idx : folds[f].train) train.push_back(task.docs[idx]);
    for (std::size_t idx : folds[f].test) test.push_back(task.docs[idx]);
    auto split =
        wrapper::wrapper_split_initial(train, cfg.n_initial, root.derive("init").derive(f).next_u64());
    Rng run_rng = root.derive("alg:" + alg.id).derive(f);
    wrapper::WrapperRunResult result;
    try {
      result = wrapper::run_wrapper_cotesting(split, cfg.episodes, alg.mode, run_rng);
    } catch (const ContractError& e) {
      throw ContractError("algorithm '" + alg.id + "', fold " + std::to_string(f) + ": " + e.what());
    }

    LearningCurve curve;
    curve.algorithm = alg.id;
    curve.fold = static_cast<int>(f);
    for (const wrapper::WrapperSnapshot& snap : result.snapshots)
      curve.points.push_back({snap.labeled_count, wrapper::evaluate_extractor(snap.extract, test)});
    if (static_cast<int>(result.snapshots.size()) < cfg.episodes)
      std::cerr << "note: " << alg.id << " fold " << f << " exhausted the pool after "
                << result.snapshots.size() << " queries\n";
    curves[i] = std::move(curve);
  });
  return curves;
}

// Runs the configured experiment and writes one curves.csv per dataset (for
// wrapper suites: one subdirectory per task). Fully deterministic for a fixed
// config; rerunning produces byte-identical files.
inline void run_experiment(const ExperimentConfig& cfg) {
  std::filesystem::create_directories(cfg.outdir);
  if (cfg.type == "classification") {
    Dataset ds = load_dataset(cfg.data, cfg.views);
    auto curves = run_classification_experiment(cfg, ds);
    write_curves_csv(curves, cfg.outdir / "curves.csv");
    if (cfg.svg) {
      std::ofstream svg(cfg.outdir / "curves.svg", std::ios::binary);
      write_curves_svg(curves, svg);
    }
    return;
  }
  for (std::size_t t = 0; t < cfg.tasks.size(); ++t) {
    wrapper::WrapperTask task = wrapper::load_wrapper_task(cfg.tasks[t]);
    if (cfg.detect == "end")
      task = wrapper::relabel_targets(std::move(task), [](const wrapper::LabeledDocument& d) {
        return wrapper::item_end(d.doc.tokens, d.target);
      });
    auto curves = run_wrapper_task_experiment(cfg, task, t);
    std::filesystem::path dir = cfg.outdir / cfg.tasks[t].stem();
    std::filesystem::create_directories(dir);
    write_curves_csv(curves, dir / "curves.csv");
    if (cfg.svg) {
      std::ofstream svg(dir / "curves.svg", std::ios::binary);
      write_curves_svg(curves, svg);
    }
  }
}

}  // namespace cotest
