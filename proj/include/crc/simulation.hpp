#ifndef CRC_SIMULATION_HPP
#define CRC_SIMULATION_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "crc/capture.hpp"
#include "crc/loglinear.hpp"
#include "crc/model_spec.hpp"

namespace crc {

// Population-level conditional capture probabilities for three streams.
struct ConditionalParams {
  std::int64_t population = 0;
  double p1 = 0.0;
  double p2_given_1 = 0.0;
  double p2_given_not1 = 0.0;
  double p3_given_12 = 0.0;
  double p3_given_1not2 = 0.0;
  double p3_given_not12 = 0.0;
  double psi = 0.0;  // p3 given neither stream 1 nor stream 2

  // Throws std::invalid_argument unless N >= 1, the conditionals lie in
  // (0, 1) and psi in (0, 1].
  void validate() const;

  // One testable constraint E(N011) = E(N010) and psi = 0.1.
  static ConditionalParams scenario1();
  // Testable constraints E(N111) = E(N101), E(N110) = E(N100); psi = 0.4375.
  static ConditionalParams scenario2();

  // {"N":5000,"p1":0.3,"p2_1":0.2,"p2_not1":0.3,"p3_12":0.8,
  //  "p3_1not2":0.16,"p3_not12":0.5,"psi":0.1}
  static ConditionalParams from_json(std::string_view text);
  std::string to_json() const;
};

// Eight cell probabilities in lexicographic order 111, ..., 001, 000.
std::array<double, 8> cell_probs(const ConditionalParams& params);

// Expected observed cells N * p for the seven captured histories.
FrequencyTable expected_table(const ConditionalParams& params);

// Engine for one replicate: mt19937_64 seeded from a SplitMix64 mix of
// (seed, stream), so replicate r of a run never depends on replicate r-1.
std::mt19937_64 substream(std::uint64_t seed, std::uint64_t stream);

// Multinomial draw by sequential binomial conditioning.
std::vector<std::int64_t> draw_multinomial(std::int64_t size, std::span<const double> probs,
                                           std::mt19937_64& engine);

struct DrawnTable {
  FrequencyTable table;
  std::int64_t hidden_n000 = 0;
};

DrawnTable draw_table(const ConditionalParams& params, std::mt19937_64& engine);
DrawnTable draw_table(const ConditionalParams& params, std::uint64_t seed);

enum class ModelSpace { all, conventions };
enum class TiePolicy {
  fractional,  // each tied model gets 1/|ties| of the replicate
  strict,      // first tied model in canonical order takes it
};

struct ScenarioOptions {
  int replicates = 1000;
  ModelSpace space = ModelSpace::all;
  std::uint64_t seed = 1;
  TiePolicy ties = TiePolicy::fractional;
  double tie_tolerance = 1e-6;
  unsigned threads = 0;  // 0 = default_thread_count()
  FitOptions fit;
};

struct ModelTally {
  ModelSpec spec;
  double selections = 0.0;
  // Selections whose fit converged, and the sum of their N-hat.
  double converged_selections = 0.0;
  double n_hat_sum_converged = 0.0;
  // Selections with any finite N-hat (boundary fits included).
  double finite_selections = 0.0;
  double n_hat_sum_finite = 0.0;

  std::optional<double> mean_n_hat() const;
  std::optional<double> mean_n_hat_any_status() const;
};

struct ScenarioResult {
  ConditionalParams params;
  ScenarioOptions options;
  std::vector<ModelTally> models;  // whole space, canonical order
  // Replicate mass whose selected fit did not converge, including
  // replicates where no fit produced an AIC at all.
  double failed = 0.0;
  // Replicates where no fit produced an AIC; the per-model selections plus
  // this add up to the replicate count.
  double unselected = 0.0;
  int replicates = 0;

  const ModelTally* find(const ModelSpec& spec) const;
};

ScenarioResult run_scenario(const ConditionalParams& params, const ScenarioOptions& options);

}  // namespace crc

#endif  // CRC_SIMULATION_HPP
