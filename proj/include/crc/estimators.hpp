#ifndef CRC_ESTIMATORS_HPP
#define CRC_ESTIMATORS_HPP

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "crc/capture.hpp"
#include "crc/loglinear.hpp"

namespace crc {

// Conditional MLEs of the total case count N for an assumed value of the
// inestimable parameter.  psi is the probability of capture by the last
// stream given capture by none of the others; phi (two streams) is the
// ratio p(2|1) / p(2|not 1).

double mle_psi_two(const FrequencyTable& table, double psi);
double mle_phi_two(const FrequencyTable& table, double phi);

// Smallest phi for which the phi-MLE does not fall below n_c.
double feasible_phi_lb(const FrequencyTable& table);

// Any number of streams.  Reduces to mle_psi_two when K = 2.
double mle_psi_k(const FrequencyTable& table, double psi);
double var_psi_k(const FrequencyTable& table, double psi);

// Two-stream phi expressed as the equivalent psi: n11 / (n1. * phi).
double psi_from_phi(const FrequencyTable& table, double phi);

// Conditional multinomial log-likelihood of the observed cells given
// capture, evaluated at the cell probabilities implied by (N_psi, psi).
// Two streams only.  Constant in psi.
double conditional_loglik_two(const FrequencyTable& table, double psi);

enum class KeyParam { psi, phi };

struct CurvePoint {
  double value = 0.0;  // psi or phi
  double n_hat = 0.0;
  double variance = 0.0;
  double ci_lo = 0.0;
  double ci_hi = 0.0;
};

CurvePoint curve_point(const FrequencyTable& table, KeyParam kind, double value);

struct GridSpec {
  std::optional<double> lo;
  std::optional<double> hi;
  std::optional<double> step;
  int points = 200;
};

// Closed feasible range for the key parameter on this table.
struct FeasibleRange {
  double lo = 0.0;  // exclusive for psi, inclusive for phi
  double hi = 0.0;  // inclusive for psi (1), +inf for phi
};
FeasibleRange feasible_range(const FrequencyTable& table, KeyParam kind);

// Materializes a grid, filling defaults: psi on [max(0.01, lo), 1] and phi
// on [lb, 3 * lb * max(5, n_c / n11)], 200 points each.  Throws
// std::invalid_argument if the grid leaves the feasible range or is empty.
std::vector<double> make_grid(const FrequencyTable& table, KeyParam kind, const GridSpec& grid);

struct OverlayRecord {
  std::size_t model_id = 0;
  std::string terms;
  FitStatus status = FitStatus::failed;
  std::optional<double> key_hat;  // psi_hat or phi_hat
  std::optional<double> n_hat;
  double aic = 0.0;
  bool on_curve = false;
};

// Relative gap |N_hat - curve(key_hat)| / N_hat under which a fit is
// considered to sit on the curve.
inline constexpr double kOnCurveTolerance = 1e-6;

OverlayRecord overlay_record(const FrequencyTable& table, KeyParam kind, const FitResult& fit,
                             std::size_t model_id);

struct Curve {
  KeyParam kind = KeyParam::psi;
  std::vector<CurvePoint> points;
  std::vector<OverlayRecord> overlay;
};

// Samples the curve on `grid` and attaches one overlay record per fit;
// model ids are 1-based positions in `fits`.
Curve curve(const FrequencyTable& table, KeyParam kind, std::span<const double> grid,
            std::span<const FitResult> fits = {});

// psi values implied by observable conditional capture proportions of the
// last stream, e.g. "p3|11" = n111 / (n111 + n110), plus "RR" for three
// streams.  Undefined when a needed cell is zero.
struct ReferencePoint {
  std::string label;
  std::optional<double> psi;
  std::optional<double> n_hat;
};

std::vector<ReferencePoint> reference_points(const FrequencyTable& table);

}  // namespace crc

#endif  // CRC_ESTIMATORS_HPP
