// Experiment harness CLI: seeded experiment runs over cross-validation folds,
// synthetic task generation, and statistical comparison of learning curves.

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

#include "cotest/harness/experiment.hpp"
#include "cotest/harness/synthetic.hpp"

namespace {

using nlohmann::json;

json load_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw cotest::ConfigError("cannot open " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw cotest::ConfigError(path.string() + ": " + e.what());
  }
  return j;
}

int cmd_run(const std::string& config_path, std::optional<std::uint64_t> seed_override) {
  cotest::ExperimentConfig cfg = cotest::load_experiment_config(config_path);
  if (seed_override) cfg.seed = *seed_override;
  cotest::run_experiment(cfg);
  std::cout << "wrote curves under " << cfg.outdir.string() << "\n";
  return 0;
}

int cmd_gen_class(const std::string& spec_path, const std::string& outdir) {
  json j = load_json(spec_path);
  cotest::SyntheticClassSpec spec;
  try {
    if (j.contains("views")) {
      spec.views.clear();
      for (const auto& v : j.at("views"))
        spec.views.push_back({v.value("signal", 20), v.value("noise", 80),
                              v.value("redundancy", 0.7)});
    }
    spec.examples = j.value("examples", 1000);
    spec.noise_rate = j.value("noise", 0.05);
    spec.tokens = j.value("tokens", 8);
    spec.seed = j.value("seed", 1u);
  } catch (const json::exception& e) {
    throw cotest::ConfigError(spec_path + ": " + e.what());
  }
  std::string name = j.value("name", "synth");

  cotest::Dataset ds = cotest::generate_synthetic_classification(spec);
  std::filesystem::create_directories(outdir);
  auto data = std::filesystem::path(outdir) / (name + ".data");
  auto views = std::filesystem::path(outdir) / (name + ".views");
  cotest::save_dataset(ds, data, views);
  std::cout << "wrote " << data.string() << " and " << views.string() << " (" << ds.examples.size()
            << " examples)\n";
  return 0;
}

int cmd_gen_wrapper(const std::string& spec_path, const std::string& outdir) {
  json j = load_json(spec_path);
  cotest::SyntheticWrapperSpec spec;
  try {
    spec.tasks = j.value("tasks", 20);
    spec.size = j.value("size", 100);
    spec.templates = j.value("templates", 3);
    spec.distractors = j.value("distractors", 2);
    spec.ambiguity = j.value("ambiguity", "mixed");
    spec.variant_rate = j.value("variant_rate", 0.08);
    spec.seed = j.value("seed", 1u);
  } catch (const json::exception& e) {
    throw cotest::ConfigError(spec_path + ": " + e.what());
  }
  auto paths = cotest::write_wrapper_suite(spec, outdir);
  std::cout << "wrote " << paths.size() << " wrapper tasks under " << outdir << "\n";
  return 0;
}

std::vector<cotest::LearningCurve> select_algorithm(const std::filesystem::path& path,
                                                    std::string requested) {
  auto curves = cotest::read_curves_csv(path);
  std::vector<std::string> names;
  for (const auto& c : curves)
    if (std::find(names.begin(), names.end(), c.algorithm) == names.end())
      names.push_back(c.algorithm);
  if (requested.empty()) {
    if (names.size() != 1) {
      std::string list;
      for (const auto& n : names) list += (list.empty() ? "" : ", ") + n;
      throw cotest::ConfigError(path.string() + " contains several algorithms (" + list +
                                "); pick one with --a/--b");
    }
    requested = names.front();
  }
  std::vector<cotest::LearningCurve> out;
  for (auto& c : curves)
    if (c.algorithm == requested) out.push_back(std::move(c));
  if (out.empty())
    throw cotest::ConfigError(path.string() + " has no curves for algorithm '" + requested + "'");
  return out;
}

int cmd_compare(const std::string& file_a, const std::string& file_b, const std::string& alg_a,
                const std::string& alg_b, double alpha, const std::string& points,
                const std::string& out_path) {
  auto a = select_algorithm(file_a, alg_a);
  auto b = select_algorithm(file_b, alg_b);
  auto report = cotest::paired_t_test(a, b, cotest::parse_comparison_points(points), alpha);
  if (!out_path.empty()) {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw cotest::ConfigError("cannot write " + out_path);
    cotest::write_report_csv(report, out);
  } else {
    cotest::write_report_csv(report, std::cout);
  }
  std::cerr << report.algorithm_a << " vs " << report.algorithm_b << ": loss="
            << report.count(cotest::Verdict::loss) << " tie=" << report.count(cotest::Verdict::tie)
            << " win=" << report.count(cotest::Verdict::win) << " over " << report.points.size()
            << " comparison points\n";
  return 0;
}

int cmd_summarize(const std::vector<std::string>& report_paths) {
  std::vector<cotest::ComparisonReport> reports;
  for (const auto& p : report_paths)
    for (auto& r : cotest::read_report_csv(p)) reports.push_back(std::move(r));
  auto table = cotest::summarize(reports);
  std::cout << cotest::summary_text(table) << "\n" << cotest::summary_csv(table);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"multi-view active learning experiment harness"};
  app.require_subcommand(1);

  std::string config_path, spec_path, outdir;
  std::uint64_t seed = 0;
  bool seed_set = false;

  auto* run = app.add_subcommand("run", "run an experiment from a JSON config");
  run->add_option("config", config_path, "experiment config JSON")->required();
  run->add_option("--seed", seed, "override the config's root seed")->each([&](const std::string&) {
    seed_set = true;
  });

  auto* gen_class = app.add_subcommand("gen-class", "generate a synthetic classification dataset");
  gen_class->add_option("spec", spec_path, "generator spec JSON")->required();
  gen_class->add_option("outdir", outdir, "output directory")->required();

  auto* gen_wrapper = app.add_subcommand("gen-wrapper", "generate synthetic wrapper tasks");
  gen_wrapper->add_option("spec", spec_path, "generator spec JSON")->required();
  gen_wrapper->add_option("outdir", outdir, "output directory")->required();

  std::string file_a, file_b, alg_a, alg_b, points = "second-half", report_out;
  double alpha = 0.05;
  auto* compare = app.add_subcommand("compare", "paired t-test between two curve files");
  compare->add_option("curvesA", file_a, "curves CSV for algorithm A")->required();
  compare->add_option("curvesB", file_b, "curves CSV for algorithm B")->required();
  compare->add_option("--a", alg_a, "algorithm id inside curvesA");
  compare->add_option("--b", alg_b, "algorithm id inside curvesB");
  compare->add_option("--alpha", alpha, "significance level (default 0.05)");
  compare->add_option("--points", points, "comparison points: second-half|all");
  compare->add_option("--out", report_out, "write the report CSV here instead of stdout");

  std::vector<std::string> report_paths;
  auto* summarize = app.add_subcommand("summarize", "aggregate win/tie/loss over report CSVs");
  summarize->add_option("reports", report_paths, "report CSV files")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;  // bad usage is a config error
  }

  try {
    if (*run) return cmd_run(config_path, seed_set ? std::optional(seed) : std::nullopt);
    if (*gen_class) return cmd_gen_class(spec_path, outdir);
    if (*gen_wrapper) return cmd_gen_wrapper(spec_path, outdir);
    if (*compare) return cmd_compare(file_a, file_b, alg_a, alg_b, alpha, points, report_out);
    if (*summarize) return cmd_summarize(report_paths);
  } catch (const cotest::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 2;
}
