#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numeric>

#include "crc/model_space.hpp"
#include "crc/simulation.hpp"

using namespace crc;

TEST_CASE("cell probabilities sum to one") {
  for (const auto& p : {ConditionalParams::scenario1(), ConditionalParams::scenario2()}) {
    const auto probs = cell_probs(p);
    CHECK(std::accumulate(probs.begin(), probs.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-14));
  }
}

TEST_CASE("scenario constraints hold in expectation") {
  const auto s1 = expected_table(ConditionalParams::scenario1());
  CHECK(s1.count("011") == doctest::Approx(s1.count("010")));
  const auto s2 = expected_table(ConditionalParams::scenario2());
  CHECK(s2.count("111") == doctest::Approx(s2.count("101")));
  CHECK(s2.count("110") == doctest::Approx(s2.count("100")));
  CHECK(n_captured(s2) == doctest::Approx(3621.875));
}

TEST_CASE("params json round-trip and validation") {
  const auto p = ConditionalParams::scenario2();
  const auto q = ConditionalParams::from_json(p.to_json());
  CHECK(q.population == p.population);
  CHECK(q.p3_given_1not2 == p.p3_given_1not2);
  CHECK(q.psi == p.psi);
  CHECK_THROWS_AS(ConditionalParams::from_json(R"({"N":10,"p1":1.5,"p2_1":0.2,"p2_not1":0.3,"p3_12":0.8,
    "p3_1not2":0.16,"p3_not12":0.5,"psi":0.1})"),
                  std::invalid_argument);
  CHECK_THROWS_AS(ConditionalParams::from_json(R"({"N":10})"), std::invalid_argument);
}

TEST_CASE("multinomial draws conserve the total and match expectations") {
  const std::vector<double> probs{0.1, 0.2, 0.3, 0.4};
  auto engine = substream(99, 0);
  const int draws = 2000;
  const std::int64_t size = 500;
  std::vector<double> mean(4, 0.0);
  double chi2_sum = 0.0;
  for (int d = 0; d < draws; ++d) {
    const auto x = draw_multinomial(size, probs, engine);
    REQUIRE(std::accumulate(x.begin(), x.end(), std::int64_t{0}) == size);
    double chi2 = 0.0;
    for (int i = 0; i < 4; ++i) {
      mean[i] += double(x[i]) / draws;
      const double e = size * probs[i];
      chi2 += (x[i] - e) * (x[i] - e) / e;
    }
    chi2_sum += chi2;
  }
  for (int i = 0; i < 4; ++i) CHECK(std::abs(mean[i] - size * probs[i]) < 4 * std::sqrt(size * probs[i] / draws));
  // Pearson statistic has mean df = 3 and variance 6 under the model.
  CHECK(std::abs(chi2_sum / draws - 3.0) < 4 * std::sqrt(6.0 / draws));
}

TEST_CASE("drawn tables are reproducible per seed") {
  const auto p = ConditionalParams::scenario1();
  const auto a = draw_table(p, 5);
  const auto b = draw_table(p, 5);
  CHECK(a.table == b.table);
  CHECK(a.hidden_n000 == b.hidden_n000);
  CHECK(n_captured(a.table) + double(a.hidden_n000) == doctest::Approx(double(p.population)));
  CHECK_FALSE(draw_table(p, 6).table == a.table);
}

TEST_CASE("scenario results do not depend on the thread count") {
  ScenarioOptions options;
  options.replicates = 24;
  options.seed = 11;
  options.space = ModelSpace::conventions;
  options.threads = 1;
  const auto one = run_scenario(ConditionalParams::scenario2(), options);
  options.threads = 4;
  const auto four = run_scenario(ConditionalParams::scenario2(), options);
  REQUIRE(one.models.size() == four.models.size());
  double total = one.unselected;
  for (std::size_t i = 0; i < one.models.size(); ++i) {
    CHECK(one.models[i].selections == four.models[i].selections);
    CHECK(one.models[i].n_hat_sum_converged == four.models[i].n_hat_sum_converged);
    total += one.models[i].selections;
  }
  CHECK(total == doctest::Approx(24));
  CHECK(one.failed == four.failed);
}

TEST_CASE("strict and fractional ties agree when there are no ties") {
  ScenarioOptions options;
  options.replicates = 10;
  options.space = ModelSpace::conventions;
  const auto frac = run_scenario(ConditionalParams::scenario1(), options);
  options.ties = TiePolicy::strict;
  const auto strict = run_scenario(ConditionalParams::scenario1(), options);
  for (std::size_t i = 0; i < frac.models.size(); ++i) CHECK(frac.models[i].selections == strict.models[i].selections);
}

TEST_CASE("small all-models study counts every replicate") {
  ScenarioOptions options;
  options.replicates = 4;
  options.seed = 3;
  const auto r = run_scenario(ConditionalParams::scenario2(), options);
  CHECK(r.models.size() == 127);
  double total = r.unselected;
  for (const auto& m : r.models) total += m.selections;
  CHECK(total == doctest::Approx(4));
  const ModelSpec sat(3, {make_term({1}), make_term({2}), make_term({3}), make_term({1, 2}), make_term({1, 3}),
                          make_term({2, 3})});
  CHECK(r.find(sat) != nullptr);
}
