#ifndef CRC_MODEL_SPACE_HPP
#define CRC_MODEL_SPACE_HPP

#include <span>
#include <vector>

#include "crc/loglinear.hpp"
#include "crc/model_spec.hpp"

namespace crc {

struct ConventionFlags {
  bool drop_k_way = true;
  bool hierarchical = true;
  bool require_main_effects = true;

  // The customary choice: all three rules, with main effects only
  // demanded when there are more than two streams.
  static ConventionFlags usual(int streams);
};

inline constexpr int kMaxEnumerateAllStreams = 4;
inline constexpr int kMaxEnumerateConventionalStreams = 5;

// True iff every nonempty proper subset of every term is also a term.
bool is_hierarchical(const ModelSpec& spec);

bool satisfies(const ModelSpec& spec, const ConventionFlags& flags);

// Every identifiable spec (all term subsets except the full set), in
// canonical order.  2^(2^K - 1) - 1 specs.
std::vector<ModelSpec> enumerate_all(int streams);

// Specs satisfying ConventionFlags::usual(streams), in canonical order.
std::vector<ModelSpec> enumerate_conventional(int streams);

// Indices of the fits whose AIC lies within `tolerance` of the smallest
// finite AIC.  Fits that are rank deficient or failed never compete.
std::vector<std::size_t> aic_minimizers(std::span<const FitResult> fits, double tolerance = 1e-6);

}  // namespace crc

#endif  // CRC_MODEL_SPACE_HPP
