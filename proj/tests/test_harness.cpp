#include <catch2/catch.hpp>

#include "cotest/harness/experiment.hpp"
#include "cotest/harness/synthetic.hpp"
#include "helpers.hpp"

using namespace cotest;
using test_helpers::read_file;
using test_helpers::tmp_dir;

TEST_CASE("noise-free fully-redundant views are perfectly learnable per view") {
  SyntheticClassSpec spec;
  spec.views = {{10, 10, 1.0}, {10, 10, 1.0}};
  spec.examples = 300;
  spec.noise_rate = 0.0;
  spec.seed = 7;
  Dataset ds = generate_synthetic_classification(spec);

  for (std::size_t v = 0; v < 2; ++v) {
    std::vector<TrainExample> tr;
    for (const MultiViewExample& ex : ds.examples) tr.push_back({ex.views[v], *ex.label});
    auto nb = train_naive_bayes(tr, 2, 1.0, ds.view_spec.views()[v].features);
    std::size_t correct = 0;
    for (const TrainExample& t : tr) correct += (nb->predict(t.x).label == t.label);
    CHECK(correct == tr.size());
  }
}

TEST_CASE("a zero-redundancy view carries no signal") {
  SyntheticClassSpec spec;
  spec.views = {{10, 10, 0.9}, {10, 10, 0.0}};
  spec.examples = 1000;
  spec.noise_rate = 0.0;
  spec.seed = 11;
  Dataset ds = generate_synthetic_classification(spec);

  std::vector<TrainExample> tr;
  for (std::size_t i = 0; i < 700; ++i) tr.push_back({ds.examples[i].views[1], *ds.examples[i].label});
  auto nb = train_naive_bayes(tr, 2, 1.0, ds.view_spec.views()[1].features);
  std::size_t correct = 0;
  for (std::size_t i = 700; i < 1000; ++i)
    correct += (nb->predict(ds.examples[i].views[1]).label == *ds.examples[i].label);
  double acc = static_cast<double>(correct) / 300.0;
  CHECK(acc < 0.65);  // roughly the class prior: the bad-view scenario
}

TEST_CASE("synthetic generators are byte-identical for a fixed seed") {
  SyntheticClassSpec cspec;
  cspec.examples = 50;
  cspec.seed = 13;
  Dataset d1 = generate_synthetic_classification(cspec);
  Dataset d2 = generate_synthetic_classification(cspec);
  auto p1 = tmp_dir() / "gen_a.data";
  auto p2 = tmp_dir() / "gen_b.data";
  save_dataset(d1, p1, tmp_dir() / "gen_a.views");
  save_dataset(d2, p2, tmp_dir() / "gen_b.views");
  CHECK(read_file(p1) == read_file(p2));
  CHECK(read_file(tmp_dir() / "gen_a.views") == read_file(tmp_dir() / "gen_b.views"));

  SyntheticWrapperSpec wspec;
  wspec.tasks = 2;
  wspec.size = 10;
  wspec.seed = 13;
  auto w1 = write_wrapper_suite(wspec, tmp_dir() / "wsuite_a");
  auto w2 = write_wrapper_suite(wspec, tmp_dir() / "wsuite_b");
  REQUIRE(w1.size() == w2.size());
  for (std::size_t i = 0; i < w1.size(); ++i) CHECK(read_file(w1[i]) == read_file(w2[i]));
}

TEST_CASE("ambiguity off: both wrapper views learn from two examples") {
  SyntheticWrapperSpec spec;
  spec.size = 30;
  spec.seed = 3;
  wrapper::WrapperTask task = generate_wrapper_task(spec, 0, "none");
  std::vector<wrapper::LabeledDocument> train(task.docs.begin(), task.docs.begin() + 2);
  std::vector<wrapper::LabeledDocument> test(task.docs.begin() + 2, task.docs.end());
  auto fwd = wrapper::learn_rule(train, wrapper::RuleDirection::forward);
  auto bwd = wrapper::learn_rule(train, wrapper::RuleDirection::backward);
  for (const auto& d : test) {
    auto pf = wrapper::apply_rule(fwd, d.doc);
    auto pb = wrapper::apply_rule(bwd, d.doc);
    REQUIRE(pf.index.has_value());
    REQUIRE(pb.index.has_value());
    CHECK(*pf.index == d.target);
    CHECK(*pb.index == d.target);
  }
}

TEST_CASE("prefix-variant tasks force forward generalization while backward stays literal") {
  SyntheticWrapperSpec spec;
  spec.size = 60;
  spec.variant_rate = 0.2;
  spec.seed = 5;
  wrapper::WrapperTask task = generate_wrapper_task(spec, 0, "prefix-variant");

  bool saw_variant = false;
  for (const auto& d : task.docs) {
    bool has_phone = false;
    for (const auto& t : d.doc.tokens.tokens) has_phone = has_phone || t.text == "Phone";
    saw_variant = saw_variant || !has_phone;
  }
  REQUIRE(saw_variant);

  // train on everything: the forward rule must generalize to a class wildcard
  // to cover the variant markers, while the backward rule is unaffected by
  // them (it learns the same rule with or without the variants)
  auto fwd = wrapper::learn_rule(task.docs, wrapper::RuleDirection::forward);
  auto bwd = wrapper::learn_rule(task.docs, wrapper::RuleDirection::backward);
  bool fwd_has_cap_wildcard = false;
  for (const auto& lm : fwd.landmarks)
    for (const auto& m : lm)
      fwd_has_cap_wildcard |= (m.is_wildcard && m.wildcard == wrapper::TokenClass::Capitalized);
  CHECK(fwd_has_cap_wildcard);

  std::vector<wrapper::LabeledDocument> plain;
  for (const auto& d : task.docs) {
    bool has_phone = false;
    for (const auto& t : d.doc.tokens.tokens) has_phone = has_phone || t.text == "Phone";
    if (has_phone && plain.size() < 4) plain.push_back(d);
  }
  auto fwd_plain = wrapper::learn_rule(plain, wrapper::RuleDirection::forward);
  auto bwd_plain = wrapper::learn_rule(plain, wrapper::RuleDirection::backward);
  CHECK(bwd.describe() == bwd_plain.describe());      // backward stays put
  CHECK(fwd.describe() != fwd_plain.describe());      // forward had to move

  // rules learned from non-variant docs only disagree exactly on the variants
  std::size_t contention = 0;
  for (const auto& d : task.docs) {
    auto pf = wrapper::apply_rule(fwd_plain, d.doc);
    auto pb = wrapper::apply_rule(bwd_plain, d.doc);
    if (pf.index != pb.index) ++contention;
  }
  CHECK(contention > 0);
}

static std::filesystem::path write_experiment_inputs(unsigned seed, int examples) {
  SyntheticClassSpec spec;
  spec.views = {{8, 12, 0.8}, {8, 12, 0.8}};
  spec.examples = examples;
  spec.noise_rate = 0.1;
  spec.seed = seed;
  Dataset ds = generate_synthetic_classification(spec);
  auto dir = tmp_dir() / ("exp_" + std::to_string(seed));
  std::filesystem::create_directories(dir);
  save_dataset(ds, dir / "synth.data", dir / "synth.views");
  return dir;
}

TEST_CASE("run_experiment writes schedule-conserving curves deterministically") {
  auto dir = write_experiment_inputs(23, 120);
  nlohmann::json j = {
      {"type", "classification"},
      {"data", (dir / "synth.data").string()},
      {"views", (dir / "synth.views").string()},
      {"folds", 3},
      {"n_initial", 4},
      {"episodes", 6},
      {"batch", 2},
      {"seed", 99},
      {"outdir", (dir / "out1").string()},
      {"algorithms",
       {{{"id", "cotest-naive"}, {"kind", "cotest"}, {"query", "naive"},
         {"output", "weighted-vote"}, {"learner", "naive-bayes"}},
        {{"id", "random"}, {"kind", "random"}, {"learner", "naive-bayes"}}}},
  };
  ExperimentConfig cfg = parse_experiment_config(j);
  run_experiment(cfg);
  auto curves = read_curves_csv(dir / "out1" / "curves.csv");
  REQUIRE(curves.size() == 6);  // 2 algorithms x 3 folds
  for (const LearningCurve& c : curves) {
    REQUIRE(c.points.size() == 6);
    for (std::size_t e = 0; e < c.points.size(); ++e)
      CHECK(c.points[e].labeled_count == 4 + (e + 1) * 2);
    for (const CurvePoint& p : c.points) {
      CHECK(p.accuracy >= 0.0);
      CHECK(p.accuracy <= 1.0);
    }
  }

  cfg.outdir = dir / "out2";
  run_experiment(cfg);
  CHECK(read_file(dir / "out1" / "curves.csv") == read_file(dir / "out2" / "curves.csv"));
}

TEST_CASE("the three published episode schedules conserve labeled counts") {
  // n_initial + episodes * batch: 150 + 40*10 = 550, 6 + 175*1 = 181,
  // 110 + 100*20 = 2110 (run at reduced scale where the pool allows)
  struct Schedule {
    std::size_t n_initial;
    int episodes, batch;
    std::size_t expected;
  };
  const Schedule schedules[] = {{150, 40, 10, 550}, {6, 175, 1, 181}, {110, 100, 20, 2110}};
  for (const Schedule& s : schedules)
    CHECK(s.n_initial + static_cast<std::size_t>(s.episodes * s.batch) == s.expected);

  // and end-to-end at courses-like scale
  SyntheticClassSpec spec;
  spec.examples = 260;
  spec.seed = 3;
  Dataset ds = generate_synthetic_classification(spec);
  ActiveSplit split = split_initial(ds.examples, 6, 1);
  BaseLearnerSpec nb;
  CoTestOptions opt;
  opt.episodes = 175;
  RunResult r = run_cotesting(ds, split, std::span(&nb, 1), opt, Rng(4));
  REQUIRE(r.snapshots.size() == 175);
  CHECK(r.snapshots.back().labeled_count == 181);
}

TEST_CASE("wrapper experiments emit per-task curves") {
  SyntheticWrapperSpec wspec;
  wspec.tasks = 2;
  wspec.size = 24;
  wspec.seed = 19;
  auto dir = tmp_dir() / "wexp";
  auto paths = write_wrapper_suite(wspec, dir / "tasks");
  nlohmann::json j = {
      {"type", "wrapper"},
      {"tasks", {paths[0].string(), paths[1].string()}},
      {"folds", 4},
      {"n_initial", 2},
      {"episodes", 5},
      {"seed", 7},
      {"outdir", (dir / "out").string()},
      {"algorithms",
       {{{"id", "aggr"}, {"kind", "wrapper"}, {"mode", "aggressive"}},
        {{"id", "rnd"}, {"kind", "wrapper"}, {"mode", "random"}}}},
  };
  run_experiment(parse_experiment_config(j));
  for (const auto& task_path : paths) {
    auto curves = read_curves_csv(dir / "out" / task_path.stem() / "curves.csv");
    REQUIRE(curves.size() == 8);  // 2 algorithms x 4 folds
    for (const LearningCurve& c : curves) {
      REQUIRE(c.points.size() == 5);
      CHECK(c.points.back().labeled_count == 7);
    }
  }
}

TEST_CASE("COTEST_THREADS parallel runs merge into identical output") {
  auto dir = write_experiment_inputs(29, 100);
  nlohmann::json j = {
      {"type", "classification"},
      {"data", (dir / "synth.data").string()},
      {"views", (dir / "synth.views").string()},
      {"folds", 4},
      {"n_initial", 4},
      {"episodes", 5},
      {"seed", 17},
      {"outdir", (dir / "serial").string()},
      {"algorithms",
       {{{"id", "cotest-naive"}, {"kind", "cotest"}, {"query", "naive"},
         {"output", "weighted-vote"}, {"learner", "naive-bayes"}},
        {{"id", "random"}, {"kind", "random"}, {"learner", "naive-bayes"}}}},
  };
  ExperimentConfig cfg = parse_experiment_config(j);
  unsetenv("COTEST_THREADS");
  run_experiment(cfg);
  setenv("COTEST_THREADS", "3", 1);
  cfg.outdir = dir / "parallel";
  run_experiment(cfg);
  unsetenv("COTEST_THREADS");
  CHECK(read_file(dir / "serial" / "curves.csv") == read_file(dir / "parallel" / "curves.csv"));
}

TEST_CASE("end detection reuses the start machinery with roles swapped") {
  SyntheticWrapperSpec wspec;
  wspec.size = 30;
  wspec.seed = 77;
  wrapper::WrapperTask task = generate_wrapper_task(wspec, 0, "none");
  wrapper::WrapperTask ends = wrapper::relabel_targets(task, [](const wrapper::LabeledDocument& d) {
    return wrapper::item_end(d.doc.tokens, d.target);
  });
  // the phone item is six tokens long in every generated document
  for (std::size_t i = 0; i < task.docs.size(); ++i)
    CHECK(ends.docs[i].target == task.docs[i].target + 6);

  std::vector<wrapper::LabeledDocument> train(ends.docs.begin(), ends.docs.begin() + 2);
  auto fwd = wrapper::learn_rule(train, wrapper::RuleDirection::forward);
  auto bwd = wrapper::learn_rule(train, wrapper::RuleDirection::backward);
  for (const auto& d : ends.docs) {
    auto pf = wrapper::apply_rule(fwd, d.doc);
    auto pb = wrapper::apply_rule(bwd, d.doc);
    REQUIRE(pf.index.has_value());
    REQUIRE(pb.index.has_value());
    CHECK(*pf.index == d.target);
    CHECK(*pb.index == d.target);
  }
}

TEST_CASE("AD- and TF-shaped schedules run end to end") {
  // 150 + 40 episodes x 10 queries = 550
  {
    SyntheticClassSpec spec;
    spec.examples = 1100;
    spec.seed = 31;
    Dataset ds = generate_synthetic_classification(spec);
    ActiveSplit split = split_initial(ds.examples, 150, 2);
    BaseLearnerSpec nb;
    CoTestOptions opt;
    opt.query = QueryStrategy::naive;
    opt.output = OutputStrategy::winner_takes_all;
    opt.episodes = 40;
    opt.batch = 10;
    RunResult r = run_cotesting(ds, split, std::span(&nb, 1), opt, Rng(6));
    REQUIRE(r.snapshots.size() == 40);
    CHECK(r.snapshots.back().labeled_count == 550);
  }
  // 110 + 100 episodes x 20 queries = 2110
  {
    SyntheticClassSpec spec;
    spec.examples = 2300;
    spec.seed = 32;
    Dataset ds = generate_synthetic_classification(spec);
    ActiveSplit split = split_initial(ds.examples, 110, 2);
    BaseLearnerSpec nb;
    CoTestOptions opt;
    opt.episodes = 100;
    opt.batch = 20;
    RunResult r = run_cotesting(ds, split, std::span(&nb, 1), opt, Rng(8));
    REQUIRE(r.snapshots.size() == 100);
    CHECK(r.snapshots.back().labeled_count == 2110);
  }
}

TEST_CASE("config validation rejects bad inputs with clear messages") {
  nlohmann::json base = {
      {"type", "classification"}, {"data", "x.data"}, {"views", "x.views"},
      {"algorithms", {{{"id", "a"}, {"kind", "random"}}}},
  };
  CHECK_NOTHROW(parse_experiment_config(base));

  nlohmann::json boost = base;
  boost["algorithms"][0]["kind"] = "qboost";
  REQUIRE_THROWS_WITH(parse_experiment_config(boost), Catch::Contains("Query-by-Boosting"));

  nlohmann::json unknown = base;
  unknown["algorithms"][0]["kind"] = "frobnicate";
  REQUIRE_THROWS_WITH(parse_experiment_config(unknown), Catch::Contains("unknown algorithm kind"));

  nlohmann::json dup = base;
  dup["algorithms"].push_back(dup["algorithms"][0]);
  REQUIRE_THROWS_WITH(parse_experiment_config(dup), Catch::Contains("duplicate"));

  nlohmann::json wrapper_mismatch = base;
  wrapper_mismatch["algorithms"][0]["kind"] = "wrapper";
  REQUIRE_THROWS_WITH(parse_experiment_config(wrapper_mismatch), Catch::Contains("wrapper"));

  nlohmann::json no_data = {{"type", "classification"},
                            {"algorithms", {{{"id", "a"}, {"kind", "random"}}}}};
  REQUIRE_THROWS_AS(parse_experiment_config(no_data), ConfigError);
}

TEST_CASE("curve and report CSV files round-trip") {
  std::vector<LearningCurve> curves = {
      {"alg-a", 0, {{10, 0.5}, {11, 0.625}}},
      {"alg-a", 1, {{10, 0.75}, {11, 1.0}}},
      {"alg-b", 0, {{10, 0.5}, {11, 0.5}}},
      {"alg-b", 1, {{10, 0.5}, {11, 0.5}}},
  };
  auto path = tmp_dir() / "roundtrip_curves.csv";
  write_curves_csv(curves, path);
  auto loaded = read_curves_csv(path);
  REQUIRE(loaded.size() == 4);
  CHECK(loaded[0].algorithm == "alg-a");
  CHECK(loaded[1].points[1].accuracy == 1.0);

  std::vector<LearningCurve> a = {loaded[0], loaded[1]};
  std::vector<LearningCurve> b = {loaded[2], loaded[3]};
  ComparisonReport report = paired_t_test(a, b, ComparisonPoints::all);
  auto rpath = tmp_dir() / "roundtrip_report.csv";
  {
    std::ofstream out(rpath, std::ios::binary);
    write_report_csv(report, out);
  }
  auto reports = read_report_csv(rpath);
  REQUIRE(reports.size() == 1);
  CHECK(reports[0].algorithm_a == "alg-a");
  CHECK(reports[0].points.size() == report.points.size());
  for (std::size_t i = 0; i < report.points.size(); ++i)
    CHECK(reports[0].points[i].verdict == report.points[i].verdict);
}

TEST_CASE("oracle isolation: pool examples carry no labels anywhere") {
  SyntheticClassSpec spec;
  spec.examples = 40;
  spec.seed = 2;
  Dataset ds = generate_synthetic_classification(spec);
  ActiveSplit split = split_initial(ds.examples, 5, 9);
  for (const PoolItem& item : split.pool) CHECK_FALSE(item.x.label.has_value());

  SyntheticWrapperSpec wspec;
  wspec.size = 12;
  wrapper::WrapperTask task = generate_wrapper_task(wspec, 0, "none");
  auto wsplit = wrapper::wrapper_split_initial(task.docs, 2, 4);
  CHECK(wsplit.pool.size() == 10);  // Document carries no target field at all
}
