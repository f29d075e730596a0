#include "crc/model_spec.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

#include "crc/capture.hpp"

namespace crc {

int term_order(Term t) { return std::popcount(t); }

bool term_less(Term a, Term b) {
  const int oa = term_order(a);
  const int ob = term_order(b);
  if (oa != ob) return oa < ob;
  // Same order: compare sorted stream lists.  The first stream where the
  // masks differ decides; the term holding the lower stream comes first.
  const Term diff = a ^ b;
  if (diff == 0) return false;
  const Term lowest = diff & (~diff + 1);
  return (a & lowest) != 0;
}

std::string term_label(Term t) {
  std::string s;
  for (int k = 0; t >> k; ++k) {
    if ((t >> k) & 1u) s += "X" + std::to_string(k + 1);
  }
  return s;
}

Term make_term(std::initializer_list<int> streams) {
  Term t = 0;
  for (int s : streams) {
    if (s < 1 || s > kMaxStreams) throw std::invalid_argument("stream index out of range in term");
    t |= Term{1} << (s - 1);
  }
  if (t == 0) throw std::invalid_argument("a term needs at least one stream");
  return t;
}

std::vector<Term> all_terms(int streams) {
  if (streams < kMinStreams || streams > kMaxStreams) throw std::invalid_argument("bad stream count");
  std::vector<Term> terms;
  for (Term t = 1; t < (Term{1} << streams); ++t) terms.push_back(t);
  std::sort(terms.begin(), terms.end(), term_less);
  return terms;
}

ModelSpec::ModelSpec(int streams, std::vector<Term> terms) : streams_(streams), terms_(std::move(terms)) {
  if (streams < kMinStreams || streams > kMaxStreams) throw std::invalid_argument("bad stream count");
  const Term limit = Term{1} << streams;
  for (Term t : terms_) {
    if (t == 0 || t >= limit) {
      throw std::invalid_argument("term references a stream outside 1.." + std::to_string(streams));
    }
  }
  std::sort(terms_.begin(), terms_.end(), term_less);
  if (std::adjacent_find(terms_.begin(), terms_.end()) != terms_.end()) {
    throw std::invalid_argument("duplicate term in model spec");
  }
  if (terms_.size() + 1 > limit - 1) {
    throw std::invalid_argument("model with every interaction term has more parameters than observed cells");
  }
}

bool ModelSpec::contains(Term t) const {
  return std::binary_search(terms_.begin(), terms_.end(), t, term_less);
}

bool ModelSpec::saturated() const { return parameter_count() == (std::size_t{1} << streams_) - 1; }

std::string ModelSpec::label() const {
  if (terms_.empty()) return "1";
  std::string s;
  for (Term t : terms_) {
    if (!s.empty()) s += '+';
    s += term_label(t);
  }
  return s;
}

bool canonical_less(const ModelSpec& a, const ModelSpec& b) {
  if (a.streams() != b.streams()) return a.streams() < b.streams();
  if (a.parameter_count() != b.parameter_count()) return a.parameter_count() < b.parameter_count();
  return std::lexicographical_compare(a.terms().begin(), a.terms().end(), b.terms().begin(),
                                      b.terms().end(), term_less);
}

}  // namespace crc
