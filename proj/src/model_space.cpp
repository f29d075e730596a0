#include "crc/model_space.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace crc {

ConventionFlags ConventionFlags::usual(int streams) {
  return ConventionFlags{.drop_k_way = true, .hierarchical = true, .require_main_effects = streams > 2};
}

bool is_hierarchical(const ModelSpec& spec) {
  for (Term t : spec.terms()) {
    // Removing one stream at a time is enough: if every immediate subterm
    // is present, induction covers the smaller ones.
    for (Term rest = t; rest != 0; rest &= rest - 1) {
      const Term sub = t & ~(rest & (~rest + 1));
      if (sub != 0 && !spec.contains(sub)) return false;
    }
  }
  return true;
}

bool satisfies(const ModelSpec& spec, const ConventionFlags& flags) {
  const int k = spec.streams();
  const Term full = (Term{1} << k) - 1;
  if (flags.drop_k_way && spec.contains(full)) return false;
  if (flags.hierarchical && !is_hierarchical(spec)) return false;
  if (flags.require_main_effects) {
    for (int s = 0; s < k; ++s) {
      if (!spec.contains(Term{1} << s)) return false;
    }
  }
  return true;
}

std::vector<ModelSpec> enumerate_all(int streams) {
  if (streams < 2 || streams > kMaxEnumerateAllStreams) {
    throw std::invalid_argument("enumerate_all supports 2.." + std::to_string(kMaxEnumerateAllStreams) +
                                " streams; got " + std::to_string(streams));
  }
  const std::vector<Term> terms = all_terms(streams);
  const std::uint64_t subsets = std::uint64_t{1} << terms.size();
  std::vector<ModelSpec> specs;
  specs.reserve(static_cast<std::size_t>(subsets - 1));
  // The all-ones subset is the over-parameterized full model.
  for (std::uint64_t bits = 0; bits + 1 < subsets; ++bits) {
    std::vector<Term> chosen;
    for (std::size_t i = 0; i < terms.size(); ++i) {
      if ((bits >> i) & 1u) chosen.push_back(terms[i]);
    }
    specs.emplace_back(streams, std::move(chosen));
  }
  std::sort(specs.begin(), specs.end(), canonical_less);
  return specs;
}

namespace {

// Depth-first over the higher-order terms in canonical order, adding a
// term only when all of its immediate subterms are already present.
void extend_hierarchical(const std::vector<Term>& candidates, std::size_t next, std::vector<Term>& current,
                         int streams, std::vector<ModelSpec>& out) {
  if (next == candidates.size()) {
    out.emplace_back(streams, current);
    return;
  }
  extend_hierarchical(candidates, next + 1, current, streams, out);

  const Term t = candidates[next];
  for (Term rest = t; rest != 0; rest &= rest - 1) {
    const Term sub = t & ~(rest & (~rest + 1));
    if (term_order(sub) >= 2 && std::find(current.begin(), current.end(), sub) == current.end()) return;
  }
  current.push_back(t);
  extend_hierarchical(candidates, next + 1, current, streams, out);
  current.pop_back();
}

}  // namespace

std::vector<ModelSpec> enumerate_conventional(int streams) {
  if (streams < 2 || streams > kMaxEnumerateConventionalStreams) {
    throw std::invalid_argument("enumerate_conventional supports 2.." +
                                std::to_string(kMaxEnumerateConventionalStreams) + " streams; got " +
                                std::to_string(streams));
  }
  std::vector<ModelSpec> specs;
  const Term full = (Term{1} << streams) - 1;
  if (streams == 2) {
    // Main effects are optional with two streams, which leaves the subsets
    // of {X1, X2}.
    for (Term bits = 0; bits < 4; ++bits) {
      std::vector<Term> chosen;
      if (bits & 1u) chosen.push_back(make_term({1}));
      if (bits & 2u) chosen.push_back(make_term({2}));
      specs.emplace_back(2, std::move(chosen));
    }
  } else {
    std::vector<Term> mains;
    std::vector<Term> higher;
    for (Term t : all_terms(streams)) {
      if (t == full) continue;
      (term_order(t) == 1 ? mains : higher).push_back(t);
    }
    std::vector<Term> current = mains;
    extend_hierarchical(higher, 0, current, streams, specs);
  }
  std::sort(specs.begin(), specs.end(), canonical_less);
  return specs;
}

std::vector<std::size_t> aic_minimizers(std::span<const FitResult> fits, double tolerance) {
  auto competes = [](const FitResult& f) {
    return (f.status == FitStatus::converged || f.status == FitStatus::boundary) && std::isfinite(f.aic);
  };
  double best = std::numeric_limits<double>::infinity();
  for (const auto& f : fits) {
    if (competes(f)) best = std::min(best, f.aic);
  }
  std::vector<std::size_t> ties;
  if (!std::isfinite(best)) return ties;
  for (std::size_t i = 0; i < fits.size(); ++i) {
    if (competes(fits[i]) && fits[i].aic - best <= tolerance) ties.push_back(i);
  }
  return ties;
}

}  // namespace crc
