#ifndef CRC_MODEL_SPEC_HPP
#define CRC_MODEL_SPEC_HPP

#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

namespace crc {

// An interaction term is a nonempty set of streams, stored as a bit mask
// with bit k standing for stream k+1.  Singletons are main effects.
using Term = std::uint32_t;

int term_order(Term t);

// Canonical term order: by order, then lexicographically on the sorted
// stream indices (X1 < X2 < X3 < X1X2 < X1X3 < X2X3 < X1X2X3).
bool term_less(Term a, Term b);

// "X1X3"
std::string term_label(Term t);

// Builds a term from 1-based stream indices, e.g. make_term({1, 3}).
Term make_term(std::initializer_list<int> streams);

// All 2^K - 1 terms for K streams in canonical order.
std::vector<Term> all_terms(int streams);

// A log-linear model: an implicit intercept plus a set of terms.  The set
// containing every term is rejected because it has 2^K parameters for
// 2^K - 1 observed cells.
class ModelSpec {
 public:
  ModelSpec(int streams, std::vector<Term> terms);

  int streams() const { return streams_; }
  const std::vector<Term>& terms() const { return terms_; }
  bool contains(Term t) const;

  // Intercept plus terms.
  std::size_t parameter_count() const { return terms_.size() + 1; }
  bool saturated() const;

  // "X1+X2+X1X2"; the intercept-only model is "1".
  std::string label() const;

  friend bool operator==(const ModelSpec&, const ModelSpec&) = default;

 private:
  int streams_;
  std::vector<Term> terms_;  // canonical order, no duplicates
};

// Orders specs by parameter count, then lexicographically on their
// canonical term sequences.
bool canonical_less(const ModelSpec& a, const ModelSpec& b);

}  // namespace crc

#endif  // CRC_MODEL_SPEC_HPP
