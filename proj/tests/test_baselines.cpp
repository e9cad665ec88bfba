#include <catch2/catch.hpp>

#include "cotest/baselines/samplers.hpp"

using namespace cotest;

namespace {

Dataset separable_dataset(int n, unsigned seed) {
  Dataset ds;
  ds.labels = {{0, "pos"}, {1, "neg"}};
  ds.view_spec = ViewSpec::validated(
      {{1, ViewStrength::strong, {0, 1}}, {2, ViewStrength::strong, {2, 3}}});
  Rng rng(seed);
  for (int i = 0; i < n; ++i) {
    int label = static_cast<int>(rng.next_below(2));
    MultiViewExample ex;
    ex.label = label;
    ex.views.resize(2);
    ex.views[0].set(label == 0 ? 0 : 1, 1.0 + rng.next_double());
    ex.views[1].set(label == 0 ? 2 : 3, 1.0 + rng.next_double());
    ds.examples.push_back(ex);
  }
  return ds;
}

}  // namespace

TEST_CASE("random sampling exhausts the pool in seeded order") {
  Dataset ds = separable_dataset(12, 3);
  ActiveSplit split = split_initial(ds.examples, 2, 5);
  BaseLearnerSpec nb;
  RunResult a = random_sampling(ds, split, nb, {10, 1}, Rng(7));
  RunResult b = random_sampling(ds, split, nb, {10, 1}, Rng(7));
  REQUIRE(a.log.size() == 10);  // all of U
  std::set<std::size_t> ids;
  for (const QueryRecord& q : a.log) ids.insert(q.pool_id);
  CHECK(ids.size() == 10);
  for (std::size_t i = 0; i < a.log.size(); ++i) CHECK(a.log[i].pool_id == b.log[i].pool_id);

  RunResult c = random_sampling(ds, split, nb, {10, 1}, Rng(8));
  bool same_order = true;
  for (std::size_t i = 0; i < a.log.size(); ++i)
    same_order = same_order && (a.log[i].pool_id == c.log[i].pool_id);
  CHECK_FALSE(same_order);
}

TEST_CASE("random sampling runs the 2+18 wrapper-style protocol") {
  Dataset ds = separable_dataset(20, 4);
  ActiveSplit split = split_initial(ds.examples, 2, 6);
  BaseLearnerSpec nb;
  RunResult r = random_sampling(ds, split, nb, {18, 1}, Rng(1));
  REQUIRE(r.snapshots.size() == 18);
  CHECK(r.snapshots.back().labeled_count == 20);
}

TEST_CASE("uncertainty sampling queries the least confident example first") {
  Dataset ds;
  ds.labels = {{0, "pos"}, {1, "neg"}};
  ds.view_spec = ViewSpec::validated(
      {{1, ViewStrength::strong, {0}}, {2, ViewStrength::strong, {1}}});
  auto make = [&](double f0, double f1, int label) {
    MultiViewExample ex;
    ex.label = label;
    ex.views.resize(2);
    ex.views[0].set(0, f0);
    ex.views[1].set(1, f1);
    return ex;
  };
  // labeled seed: one clear example per class
  ds.examples.push_back(make(3.0, 0.0, 0));
  ds.examples.push_back(make(0.0, 3.0, 1));
  // pool: one ambiguous (symmetric) example and two obvious ones
  ds.examples.push_back(make(2.0, 2.0, 0));  // posterior 0.5 -> least confident
  ds.examples.push_back(make(4.0, 0.0, 0));
  ds.examples.push_back(make(0.0, 4.0, 1));

  ActiveSplit split;
  split.labeled = {ds.examples[0], ds.examples[1]};
  std::vector<int> truth;
  for (std::size_t i = 2; i < ds.examples.size(); ++i) {
    PoolItem item;
    item.id = truth.size();
    item.x = ds.examples[i];
    item.x.label.reset();
    truth.push_back(*ds.examples[i].label);
    split.pool.push_back(item);
  }
  split.oracle = Oracle(truth);

  BaseLearnerSpec nb;
  RunResult r = uncertainty_sampling(ds, split, nb, {1, 1}, Rng(1));
  REQUIRE(r.log.size() == 1);
  CHECK(r.log[0].pool_id == 0);  // the symmetric example
}

TEST_CASE("uncertainty sampling breaks confidence ties by lowest pool index") {
  Dataset ds = separable_dataset(8, 9);
  // make every pool example identical so all confidences tie
  for (std::size_t i = 1; i < ds.examples.size(); ++i) {
    ds.examples[i].views = ds.examples[0].views;
    ds.examples[i].label = ds.examples[0].label;
  }
  ds.examples[1].label = 1;  // keep both classes in the labeled seed
  ActiveSplit split;
  split.labeled = {ds.examples[0], ds.examples[1]};
  std::vector<int> truth;
  for (std::size_t i = 2; i < ds.examples.size(); ++i) {
    PoolItem item;
    item.id = truth.size();
    item.x = ds.examples[i];
    item.x.label.reset();
    truth.push_back(*ds.examples[i].label);
    split.pool.push_back(item);
  }
  split.oracle = Oracle(truth);
  BaseLearnerSpec nb;
  RunResult r = uncertainty_sampling(ds, split, nb, {1, 1}, Rng(1));
  REQUIRE(r.log.size() == 1);
  CHECK(r.log[0].pool_id == 0);
}

TEST_CASE("uncertainty sampling rejects confidence-free learners at configuration time") {
  Dataset ds = separable_dataset(10, 2);
  ActiveSplit split = split_initial(ds.examples, 2, 1);
  BaseLearnerSpec tree;
  tree.kind = BaseLearnerSpec::Kind::decision_tree;
  REQUIRE_THROWS_WITH(uncertainty_sampling(ds, split, tree, {1, 1}, Rng(1)),
                      Catch::Contains("confidence"));
}

TEST_CASE("vote entropy orders committee disagreement correctly") {
  // (3,2) votes are more contentious than (5,0)
  CHECK(detail::vote_entropy({0, 0, 0, 1, 1}, 2) > detail::vote_entropy({0, 0, 0, 0, 0}, 2));
  CHECK(detail::vote_entropy({0, 0, 0, 0, 0}, 2) == 0.0);
}

TEST_CASE("query by bagging logs zero-disagreement episodes as fallback") {
  // perfectly separated data: every bootstrap committee is unanimous
  Dataset ds = separable_dataset(16, 11);
  ActiveSplit split = split_initial(ds.examples, 6, 2);
  BaseLearnerSpec nb;
  RunResult r = query_by_bagging(ds, split, nb, 5, {3, 1}, Rng(5));
  REQUIRE(r.log.size() == 3);
  for (const QueryRecord& q : r.log) CHECK(q.fallback);
  CHECK(r.log[0].pool_id == split.pool[0].id);  // entropy 0 everywhere -> lowest index
}

TEST_CASE("query by committee with near-deterministic parameters falls back") {
  // huge counts concentrate the Gamma samples, so members agree everywhere
  Dataset ds;
  ds.labels = {{0, "pos"}, {1, "neg"}};
  ds.view_spec = ViewSpec::validated(
      {{1, ViewStrength::strong, {0}}, {2, ViewStrength::strong, {1}}});
  for (int i = 0; i < 10; ++i) {
    MultiViewExample ex;
    ex.label = i % 2;
    ex.views.resize(2);
    ex.views[0].set(0, ex.label == 0 ? 50000.0 : 1.0);
    ex.views[1].set(1, ex.label == 0 ? 1.0 : 50000.0);
    ds.examples.push_back(ex);
  }
  ActiveSplit split = split_initial(ds.examples, 4, 3);
  RunResult r = query_by_committee_nb(ds, split, 1.0, 2, {2, 1}, Rng(9));
  REQUIRE(r.log.size() == 2);
  for (const QueryRecord& q : r.log) CHECK(q.fallback);
}

TEST_CASE("query by committee queries a disagreement point when one exists") {
  // a pool example right on the decision boundary draws disagreeing members
  Dataset ds;
  ds.labels = {{0, "pos"}, {1, "neg"}};
  ds.view_spec = ViewSpec::validated(
      {{1, ViewStrength::strong, {0}}, {2, ViewStrength::strong, {1}}});
  auto make = [&](double f0, double f1, int label) {
    MultiViewExample ex;
    ex.label = label;
    ex.views.resize(2);
    if (f0 > 0) ex.views[0].set(0, f0);
    if (f1 > 0) ex.views[1].set(1, f1);
    return ex;
  };
  ds.examples.push_back(make(4.0, 1.0, 0));
  ds.examples.push_back(make(1.0, 4.0, 1));
  ds.examples.push_back(make(2.0, 2.0, 0));   // boundary
  ds.examples.push_back(make(9.0, 0.0, 0));   // obvious
  ds.examples.push_back(make(0.0, 9.0, 1));   // obvious

  ActiveSplit split;
  split.labeled = {ds.examples[0], ds.examples[1]};
  std::vector<int> truth;
  for (std::size_t i = 2; i < ds.examples.size(); ++i) {
    PoolItem item;
    item.id = truth.size();
    item.x = ds.examples[i];
    item.x.label.reset();
    truth.push_back(*ds.examples[i].label);
    split.pool.push_back(item);
  }
  split.oracle = Oracle(truth);
  RunResult r = query_by_committee_nb(ds, split, 1.0, 2, {1, 1}, Rng(12));
  REQUIRE(r.log.size() == 1);
  CHECK(r.log[0].pool_id == 0);
  CHECK_FALSE(r.log[0].fallback);
}

TEST_CASE("baselines are blind to the per-view structure") {
  // same union features, different view partitions -> identical behavior
  Dataset ds1 = separable_dataset(20, 21);
  Dataset ds2 = ds1;
  ds2.view_spec = ViewSpec::validated(
      {{1, ViewStrength::strong, {0, 2}}, {2, ViewStrength::strong, {1, 3}}});
  for (MultiViewExample& ex : ds2.examples) {
    FeatureVector full = merged(ex.views);
    ex.views.assign(2, FeatureVector{});
    for (const auto& [f, v] : full.entries()) ex.views[*ds2.view_spec.owner_view(f)].set(f, v);
  }
  ActiveSplit s1 = split_initial(ds1.examples, 4, 13);
  ActiveSplit s2 = split_initial(ds2.examples, 4, 13);
  BaseLearnerSpec nb;
  for (auto run : {&random_sampling, &uncertainty_sampling}) {
    RunResult r1 = run(ds1, s1, nb, {6, 1}, Rng(3));
    RunResult r2 = run(ds2, s2, nb, {6, 1}, Rng(3));
    REQUIRE(r1.log.size() == r2.log.size());
    for (std::size_t i = 0; i < r1.log.size(); ++i) CHECK(r1.log[i].pool_id == r2.log[i].pool_id);
  }
}

TEST_CASE("batched episodes take top-b without re-ranking") {
  Dataset ds = separable_dataset(60, 31);
  ActiveSplit split = split_initial(ds.examples, 10, 7);
  BaseLearnerSpec nb;
  RunResult r = random_sampling(ds, split, nb, {4, 5}, Rng(2));
  REQUIRE(r.snapshots.size() == 4);
  for (std::size_t e = 0; e < 4; ++e) CHECK(r.snapshots[e].labeled_count == 10 + (e + 1) * 5);
  CHECK(r.log.size() == 20);
}
