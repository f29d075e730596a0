#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <stdexcept>

#include "crc/capture.hpp"
#include "crc/model_spec.hpp"
#include "crc/table_io.hpp"

using namespace crc;

TEST_CASE("histories are listed lexicographically with all-ones first") {
  const auto h = lex_histories(3);
  REQUIRE(h.size() == 8);
  const char* expected[] = {"111", "110", "101", "100", "011", "010", "001", "000"};
  for (std::size_t i = 0; i < h.size(); ++i) {
    CHECK(h[i].to_string() == expected[i]);
    CHECK(h[i].lex_index() == i);
    CHECK(history_at(3, i) == h[i]);
  }
  CHECK(h.back().never_captured());
}

TEST_CASE("history parsing and stream bits") {
  const auto h = CaptureHistory::parse("110");
  CHECK(h.streams() == 3);
  CHECK(h.captured(0));
  CHECK(h.captured(1));
  CHECK_FALSE(h.captured(2));
  CHECK(h.mask() == 0b011u);
  CHECK_THROWS_AS(CaptureHistory::parse("1a0"), std::invalid_argument);
  CHECK_THROWS_AS(CaptureHistory::parse("1"), std::invalid_argument);
}

TEST_CASE("frequency table validation and lookup") {
  FrequencyTable t(2, {250, 500, 250});
  CHECK(t.count("11") == 250);
  CHECK(t.count("10") == 500);
  CHECK(t.last_stream_only() == 250);
  CHECK(n_captured(t) == 1000);
  CHECK_THROWS_AS(FrequencyTable(2, {1, 2}), std::invalid_argument);
  CHECK_THROWS_AS(FrequencyTable(2, {1, -2, 3}), std::invalid_argument);
  CHECK_THROWS(t.count("00"));
}

TEST_CASE("with_last_stream moves one stream to the end") {
  // cells 111 110 101 100 011 010 001
  FrequencyTable t(3, {1, 2, 3, 4, 5, 6, 7});
  const auto moved = t.with_last_stream(1);
  // new order (2, 3, 1): new history abc corresponds to old cab
  CHECK(moved.count("001") == t.count("100"));
  CHECK(moved.count("110") == t.count("011"));
  CHECK(moved.count("101") == t.count("110"));
  CHECK(n_captured(moved) == n_captured(t));
  CHECK(t.with_last_stream(3) == t);
}

TEST_CASE("csv and json tables round-trip") {
  FrequencyTable t(3, {10, 0, 3, 42, 7, 1, 9});
  CHECK(parse_table_csv(table_to_csv(t)) == t);
  CHECK(parse_table_json(table_to_json(t)) == t);
  const auto json = parse_table_json(R"({"streams": 2, "counts": {"01": 250, "11": 250, "10": 500}})");
  CHECK(json == FrequencyTable(2, {250, 500, 250}));
}

TEST_CASE("malformed tables are rejected") {
  CHECK_THROWS_AS(parse_table_csv("history,count\n11,1\n10,2\n"), TableFormatError);
  CHECK_THROWS_AS(parse_table_csv("history,count\n11,1\n10,2\n01,3\n00,4\n"), TableFormatError);
  CHECK_THROWS_AS(parse_table_csv("history,count\n11,1\n10,2\n01,3\n01,3\n"), TableFormatError);
  CHECK_THROWS_AS(parse_table_csv("history,count\n11,1\n10,2.5\n01,3\n"), TableFormatError);
  CHECK_THROWS_AS(parse_table_csv("history,count\n11,1\n10,-2\n01,3\n"), TableFormatError);
  CHECK_THROWS_AS(parse_table_csv("history,count\n11,1\n100,2\n01,3\n"), TableFormatError);
  CHECK_THROWS_AS(parse_table_csv("a,b\n11,1\n10,2\n01,3\n"), TableFormatError);
  CHECK_THROWS_AS(parse_table_json(R"({"streams": 2, "counts": {"11": 1}})"), TableFormatError);
  CHECK_THROWS_AS(parse_table_json("[1,2,3]"), TableFormatError);
}

TEST_CASE("term order and labels") {
  const auto terms = all_terms(3);
  std::vector<std::string> labels;
  for (Term t : terms) labels.push_back(term_label(t));
  CHECK(labels == std::vector<std::string>{"X1", "X2", "X3", "X1X2", "X1X3", "X2X3", "X1X2X3"});
  CHECK(make_term({1, 3}) == 0b101u);
  CHECK(term_order(make_term({1, 2, 3})) == 3);
}

TEST_CASE("model specs are canonical and reject the full term set") {
  ModelSpec a(3, {make_term({1, 2}), make_term({2}), make_term({1})});
  CHECK(a.label() == "X1+X2+X1X2");
  CHECK(a.parameter_count() == 4);
  CHECK_FALSE(a.saturated());
  CHECK(ModelSpec(2, {}).label() == "1");
  CHECK(ModelSpec(2, {make_term({1}), make_term({2})}).saturated());
  CHECK_THROWS_AS(ModelSpec(2, {make_term({1}), make_term({2}), make_term({1, 2})}), std::invalid_argument);
  CHECK_THROWS_AS(ModelSpec(2, {make_term({1}), make_term({1})}), std::invalid_argument);
  CHECK_THROWS_AS(ModelSpec(2, {make_term({3})}), std::invalid_argument);
  CHECK(canonical_less(ModelSpec(2, {make_term({2})}), ModelSpec(2, {make_term({1, 2})})));
}
