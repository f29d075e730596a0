#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>

#include "crc/loglinear.hpp"
#include "crc/model_space.hpp"

using namespace crc;

TEST_CASE("model space sizes") {
  CHECK(enumerate_all(2).size() == 7);
  CHECK(enumerate_all(3).size() == 127);
  CHECK(enumerate_all(4).size() == 32767);
  CHECK(enumerate_conventional(2).size() == 4);
  CHECK(enumerate_conventional(3).size() == 8);
  CHECK(enumerate_conventional(4).size() == 113);
  CHECK_THROWS(enumerate_all(5));
  CHECK_THROWS(enumerate_conventional(6));
}

TEST_CASE("two-stream numbering") {
  std::vector<std::string> labels;
  for (const auto& s : enumerate_all(2)) labels.push_back(s.label());
  CHECK(labels == std::vector<std::string>{"1", "X1", "X2", "X1X2", "X1+X2", "X1+X1X2", "X2+X1X2"});
}

TEST_CASE("three-stream conventional numbering") {
  std::vector<std::string> labels;
  for (const auto& s : enumerate_conventional(3)) labels.push_back(s.label());
  CHECK(labels == std::vector<std::string>{"X1+X2+X3", "X1+X2+X3+X1X2", "X1+X2+X3+X1X3", "X1+X2+X3+X2X3",
                                           "X1+X2+X3+X1X2+X1X3", "X1+X2+X3+X1X2+X2X3",
                                           "X1+X2+X3+X1X3+X2X3", "X1+X2+X3+X1X2+X1X3+X2X3"});
}

TEST_CASE("enumerations are sorted, unique and agree with the filter") {
  for (int k = 2; k <= 4; ++k) {
    CAPTURE(k);
    const auto all = enumerate_all(k);
    CHECK(std::is_sorted(all.begin(), all.end(), canonical_less));
    CHECK(std::adjacent_find(all.begin(), all.end()) == all.end());
    std::vector<ModelSpec> filtered;
    const auto flags = ConventionFlags::usual(k);
    for (const auto& s : all) {
      if (satisfies(s, flags)) filtered.push_back(s);
    }
    CHECK(filtered == enumerate_conventional(k));
  }
}

TEST_CASE("hierarchy check") {
  CHECK(is_hierarchical(ModelSpec(3, {make_term({1}), make_term({2}), make_term({1, 2})})));
  CHECK_FALSE(is_hierarchical(ModelSpec(3, {make_term({1}), make_term({1, 2})})));
  CHECK_FALSE(is_hierarchical(ModelSpec(2, {make_term({1, 2})})));
}

TEST_CASE("AIC minimizers include exact ties and skip failed fits") {
  const FrequencyTable toy(2, {250, 500, 250});
  const auto specs = enumerate_all(2);
  std::vector<FitResult> fits;
  for (const auto& s : specs) fits.push_back(fit_poisson(toy, s));
  CHECK(aic_minimizers(fits) == std::vector<std::size_t>{2});

  // Drop model 3; models 5, 6 and 7 tie on AIC.
  fits[2].status = FitStatus::failed;
  CHECK(aic_minimizers(fits) == std::vector<std::size_t>{4, 5, 6});
  fits[4].status = FitStatus::rank_deficient;
  CHECK(aic_minimizers(fits) == std::vector<std::size_t>{5, 6});
}
