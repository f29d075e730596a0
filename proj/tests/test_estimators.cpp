#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <set>

#include "crc/estimators.hpp"
#include "crc/model_space.hpp"
#include "crc/simulation.hpp"

using namespace crc;

namespace {
const FrequencyTable kToy(2, {250, 500, 250});
}

TEST_CASE("two-stream conditional MLEs on the toy table") {
  CHECK(mle_psi_two(kToy, 0.5) == doctest::Approx(1250));
  CHECK(mle_psi_two(kToy, 1.0) == doctest::Approx(1000));
  CHECK(mle_phi_two(kToy, 1.5) == doctest::Approx(1875).epsilon(1e-12));
  CHECK(mle_phi_two(kToy, 1.0) == doctest::Approx(1500));
  CHECK(feasible_phi_lb(kToy) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  CHECK(mle_phi_two(kToy, 1.0 / 3.0) == doctest::Approx(1000));
  CHECK_THROWS_AS(mle_phi_two(kToy, 0.2), std::invalid_argument);
  CHECK_THROWS_AS(mle_psi_two(kToy, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(mle_psi_two(kToy, 1.1), std::invalid_argument);
  CHECK_THROWS_AS(feasible_phi_lb(FrequencyTable(2, {0, 5, 5})), std::domain_error);
}

TEST_CASE("K-stream psi MLE reduces to the two-stream one") {
  for (int i = 1; i <= 100; ++i) {
    const double psi = i / 100.0;
    CHECK(mle_psi_k(kToy, psi) == mle_psi_two(kToy, psi));
  }
}

TEST_CASE("phi maps onto psi") {
  for (double phi : {0.4, 0.8, 1.0, 1.5, 3.0}) {
    const double psi = psi_from_phi(kToy, phi);
    CHECK(mle_psi_two(kToy, psi) == doctest::Approx(mle_phi_two(kToy, phi)).epsilon(1e-12));
  }
}

TEST_CASE("variance and Wald interval") {
  const auto p = curve_point(kToy, KeyParam::psi, 0.5);
  CHECK(p.variance == doctest::Approx(0.5 / 0.25 * 250));
  const double half = 1.959963984540054 * std::sqrt(p.variance);
  CHECK(p.ci_lo == doctest::Approx(p.n_hat - half));
  CHECK(p.ci_hi == doctest::Approx(p.n_hat + half));
  CHECK(var_psi_k(kToy, 1.0) == 0.0);
}

TEST_CASE("scenario 2 expected cells give back N at the true psi") {
  const auto t = expected_table(ConditionalParams::scenario2());
  CHECK(n_captured(t) == doctest::Approx(3621.875).epsilon(1e-12));
  CHECK(mle_psi_k(t, 0.4375) == doctest::Approx(5000).epsilon(1e-10));
}

TEST_CASE("grids") {
  const auto g = make_grid(kToy, KeyParam::psi, {});
  CHECK(g.size() == 200);
  CHECK(g.front() == doctest::Approx(0.01));
  CHECK(g.back() == doctest::Approx(1.0));
  GridSpec stepped{0.1, 0.5, 0.1, 0};
  CHECK(make_grid(kToy, KeyParam::psi, stepped).size() == 5);
  CHECK_THROWS_AS(make_grid(kToy, KeyParam::psi, GridSpec{0.0, 1.0, std::nullopt, 10}), std::invalid_argument);
  CHECK_THROWS_AS(make_grid(kToy, KeyParam::phi, GridSpec{0.1, 1.0, std::nullopt, 10}), std::invalid_argument);
  const auto phi = make_grid(kToy, KeyParam::phi, {});
  CHECK(phi.front() == doctest::Approx(1.0 / 3.0));
  const auto range = feasible_range(kToy, KeyParam::phi);
  CHECK(range.lo == doctest::Approx(1.0 / 3.0));
  CHECK(std::isinf(range.hi));
}

TEST_CASE("toy overlay: saturated models on curve, model 4 off by 25") {
  std::vector<FitResult> fits;
  for (const auto& s : enumerate_all(2)) fits.push_back(fit_poisson(kToy, s));
  const std::vector<double> grid{0.5};
  const auto c = curve(kToy, KeyParam::psi, grid, fits);
  REQUIRE(c.overlay.size() == 7);
  std::set<long long> unique;
  for (const auto& r : c.overlay) {
    if (fits[r.model_id - 1].spec.saturated()) CHECK(r.on_curve);
    unique.insert(std::llround(*r.n_hat * 1e6));
  }
  CHECK(unique.size() == 4);
  CHECK_FALSE(c.overlay[3].on_curve);
  CHECK(*c.overlay[3].key_hat == doctest::Approx(0.5));

  const auto phi_curve = curve(kToy, KeyParam::phi, std::vector<double>{0.8}, fits);
  CHECK(*phi_curve.overlay[3].key_hat == doctest::Approx(0.8));
  CHECK(*phi_curve.overlay[3].n_hat - phi_curve.points[0].n_hat == doctest::Approx(25));
}

TEST_CASE("conditional likelihood is flat along the curve") {
  const double base = conditional_loglik_two(kToy, 0.5);
  for (double psi : {0.05, 0.2, 0.7, 1.0}) CHECK(std::abs(conditional_loglik_two(kToy, psi) - base) < 1e-8);
}

TEST_CASE("reference points") {
  FrequencyTable t(3, {20, 30, 10, 40, 25, 35, 15});
  const auto refs = reference_points(t);
  REQUIRE(refs.size() == 4);
  CHECK(refs[0].label == "p3|11");
  CHECK(*refs[0].psi == doctest::Approx(20.0 / 50.0));
  CHECK(refs[3].label == "RR");
  CHECK(*refs[3].psi == doctest::Approx((10.0 / 50.0) * (25.0 / 60.0) / (20.0 / 50.0)));
  const auto two = reference_points(kToy);
  REQUIRE(two.size() == 1);
  CHECK(*two[0].psi == doctest::Approx(1.0 / 3.0));
  CHECK(*two[0].n_hat == doctest::Approx(1500));
}
