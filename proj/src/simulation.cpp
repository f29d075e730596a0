#include "crc/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "crc/model_space.hpp"
#include "crc/parallel.hpp"
#include "json.hpp"

namespace crc {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

void require_open_unit(double v, const char* name) {
  if (!(v > 0.0 && v < 1.0)) {
    throw std::invalid_argument(std::string(name) + " must lie in (0, 1), got " + std::to_string(v));
  }
}

// Outcome of one replicate: the models that share the selection.
struct Selection {
  std::size_t model = 0;
  double weight = 0.0;
  FitStatus status = FitStatus::failed;
  double n_hat = 0.0;  // n_c + exp(alpha), possibly from a boundary fit
};

}  // namespace

void ConditionalParams::validate() const {
  if (population < 1) throw std::invalid_argument("population size N must be at least 1");
  require_open_unit(p1, "p1");
  require_open_unit(p2_given_1, "p2_1");
  require_open_unit(p2_given_not1, "p2_not1");
  require_open_unit(p3_given_12, "p3_12");
  require_open_unit(p3_given_1not2, "p3_1not2");
  require_open_unit(p3_given_not12, "p3_not12");
  if (!(psi > 0.0 && psi <= 1.0)) throw std::invalid_argument("psi must lie in (0, 1]");
}

ConditionalParams ConditionalParams::scenario1() {
  return {.population = 5000,
          .p1 = 0.3,
          .p2_given_1 = 0.2,
          .p2_given_not1 = 0.3,
          .p3_given_12 = 0.8,
          .p3_given_1not2 = 0.16,
          .p3_given_not12 = 0.5,
          .psi = 0.1};
}

ConditionalParams ConditionalParams::scenario2() {
  return {.population = 5000,
          .p1 = 0.3,
          .p2_given_1 = 0.5,
          .p2_given_not1 = 0.3,
          .p3_given_12 = 0.35,
          .p3_given_1not2 = 0.35,
          .p3_given_not12 = 0.25,
          .psi = 0.4375};
}

ConditionalParams ConditionalParams::from_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(std::string("invalid scenario JSON: ") + e.what());
  }
  auto number = [&](const char* key) {
    if (!doc.contains(key) || !doc[key].is_number()) {
      throw std::invalid_argument(std::string("scenario JSON is missing numeric field \"") + key + "\"");
    }
    return doc[key].get<double>();
  };
  ConditionalParams p;
  const double n = number("N");
  if (n != std::floor(n)) throw std::invalid_argument("scenario N must be an integer");
  p.population = static_cast<std::int64_t>(n);
  p.p1 = number("p1");
  p.p2_given_1 = number("p2_1");
  p.p2_given_not1 = number("p2_not1");
  p.p3_given_12 = number("p3_12");
  p.p3_given_1not2 = number("p3_1not2");
  p.p3_given_not12 = number("p3_not12");
  p.psi = number("psi");
  p.validate();
  return p;
}

std::string ConditionalParams::to_json() const {
  nlohmann::ordered_json doc;
  doc["N"] = population;
  doc["p1"] = p1;
  doc["p2_1"] = p2_given_1;
  doc["p2_not1"] = p2_given_not1;
  doc["p3_12"] = p3_given_12;
  doc["p3_1not2"] = p3_given_1not2;
  doc["p3_not12"] = p3_given_not12;
  doc["psi"] = psi;
  return doc.dump();
}

std::array<double, 8> cell_probs(const ConditionalParams& p) {
  p.validate();
  const double q1 = 1.0 - p.p1;
  return {
      p.p1 * p.p2_given_1 * p.p3_given_12,                       // 111
      p.p1 * p.p2_given_1 * (1.0 - p.p3_given_12),               // 110
      p.p1 * (1.0 - p.p2_given_1) * p.p3_given_1not2,            // 101
      p.p1 * (1.0 - p.p2_given_1) * (1.0 - p.p3_given_1not2),    // 100
      q1 * p.p2_given_not1 * p.p3_given_not12,                   // 011
      q1 * p.p2_given_not1 * (1.0 - p.p3_given_not12),           // 010
      q1 * (1.0 - p.p2_given_not1) * p.psi,                      // 001
      q1 * (1.0 - p.p2_given_not1) * (1.0 - p.psi),              // 000
  };
}

FrequencyTable expected_table(const ConditionalParams& params) {
  const auto probs = cell_probs(params);
  std::vector<double> cells(7);
  for (std::size_t j = 0; j < 7; ++j) cells[j] = static_cast<double>(params.population) * probs[j];
  return FrequencyTable(3, std::move(cells));
}

std::mt19937_64 substream(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t state = seed;
  const std::uint64_t a = splitmix64(state);
  state ^= stream * 0xd1b54a32d192ed03ULL;
  const std::uint64_t b = splitmix64(state);
  std::seed_seq seq{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                    static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32)};
  return std::mt19937_64(seq);
}

std::vector<std::int64_t> draw_multinomial(std::int64_t size, std::span<const double> probs,
                                           std::mt19937_64& engine) {
  std::vector<std::int64_t> out(probs.size(), 0);
  std::int64_t remaining = size;
  double mass_left = 1.0;
  for (std::size_t i = 0; i + 1 < probs.size() && remaining > 0; ++i) {
    const double p = mass_left > 0.0 ? std::clamp(probs[i] / mass_left, 0.0, 1.0) : 0.0;
    std::binomial_distribution<std::int64_t> binom(remaining, p);
    out[i] = binom(engine);
    remaining -= out[i];
    mass_left -= probs[i];
  }
  if (!probs.empty()) out.back() += remaining;
  return out;
}

DrawnTable draw_table(const ConditionalParams& params, std::mt19937_64& engine) {
  const auto probs = cell_probs(params);
  const auto counts = draw_multinomial(params.population, probs, engine);
  std::vector<double> observed(counts.begin(), counts.begin() + 7);
  return {FrequencyTable(3, std::move(observed)), counts[7]};
}

DrawnTable draw_table(const ConditionalParams& params, std::uint64_t seed) {
  auto engine = substream(seed, 0);
  return draw_table(params, engine);
}

std::optional<double> ModelTally::mean_n_hat() const {
  if (!(converged_selections > 0.0)) return std::nullopt;
  return n_hat_sum_converged / converged_selections;
}

std::optional<double> ModelTally::mean_n_hat_any_status() const {
  if (!(finite_selections > 0.0)) return std::nullopt;
  return n_hat_sum_finite / finite_selections;
}

const ModelTally* ScenarioResult::find(const ModelSpec& spec) const {
  for (const auto& m : models) {
    if (m.spec == spec) return &m;
  }
  return nullptr;
}

ScenarioResult run_scenario(const ConditionalParams& params, const ScenarioOptions& options) {
  params.validate();
  if (options.replicates < 1) throw std::invalid_argument("replicate count must be at least 1");

  const std::vector<ModelSpec> space =
      options.space == ModelSpace::all ? enumerate_all(3) : enumerate_conventional(3);

  const auto reps = static_cast<std::size_t>(options.replicates);
  std::vector<std::vector<Selection>> outcomes(reps);

  parallel_for(
      reps,
      [&](std::size_t r) {
        auto engine = substream(options.seed, r);
        const DrawnTable drawn = draw_table(params, engine);
        std::vector<FitResult> fits;
        fits.reserve(space.size());
        for (const auto& spec : space) fits.push_back(fit_poisson(drawn.table, spec, options.fit));

        std::vector<std::size_t> ties = aic_minimizers(fits, options.tie_tolerance);
        if (options.ties == TiePolicy::strict && ties.size() > 1) ties.resize(1);
        std::vector<Selection> picks;
        const double weight = ties.empty() ? 0.0 : 1.0 / static_cast<double>(ties.size());
        for (std::size_t i : ties) {
          picks.push_back({i, weight, fits[i].status, fits[i].n_captured + fits[i].projected_unobserved()});
        }
        outcomes[r] = std::move(picks);
      },
      options.threads);

  ScenarioResult result;
  result.params = params;
  result.options = options;
  result.replicates = options.replicates;
  result.models.reserve(space.size());
  for (const auto& spec : space) result.models.push_back(ModelTally{spec});

  // Aggregate in replicate order so sums do not depend on scheduling.
  for (const auto& picks : outcomes) {
    if (picks.empty()) {
      result.unselected += 1.0;
      result.failed += 1.0;
      continue;
    }
    for (const auto& s : picks) {
      ModelTally& tally = result.models[s.model];
      tally.selections += s.weight;
      if (s.status == FitStatus::converged) {
        tally.converged_selections += s.weight;
        tally.n_hat_sum_converged += s.weight * s.n_hat;
      } else {
        result.failed += s.weight;
      }
      if (std::isfinite(s.n_hat)) {
        tally.finite_selections += s.weight;
        tally.n_hat_sum_finite += s.weight * s.n_hat;
      }
    }
  }
  return result;
}

}  // namespace crc
