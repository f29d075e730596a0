#ifndef CRC_LOGLINEAR_HPP
#define CRC_LOGLINEAR_HPP

#include <optional>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "crc/capture.hpp"
#include "crc/model_spec.hpp"

namespace crc {

enum class FitStatus { converged, boundary, rank_deficient, failed };

std::string_view to_string(FitStatus status);

// Which sample size enters the BIC penalty p * log(n).
enum class BicSampleSize {
  observed_cells,  // m = 2^K - 1
  captured_cases,  // n_c
};

struct FitOptions {
  int max_iterations = 100;
  // Relative deviance change |dDev| / (|Dev| + 0.1) below which IRLS stops.
  double tolerance = 1e-10;
  double rank_tolerance = 1e-10;
  // A linear predictor below this on an observed row means a fitted cell
  // is being driven to zero.
  double boundary_eta = -30.0;
  BicSampleSize bic_sample_size = BicSampleSize::observed_cells;
};

// Rows are the observed histories in lexicographic order; columns are the
// intercept followed by the spec's terms.  Entry (j, t) is the product of
// the member indicators of term t for history j.
Eigen::MatrixXd design_matrix(int streams, const ModelSpec& spec);

// Result of maximizing the independent-Poisson log-likelihood for a raw
// design.  Exposed separately so degenerate designs can be exercised.
struct PoissonGlmFit {
  FitStatus status = FitStatus::failed;
  Eigen::VectorXd coefficients;
  Eigen::VectorXd fitted;  // one per design row
  double loglik = 0.0;     // includes -log(y!)
  int iterations = 0;
};

PoissonGlmFit fit_poisson_glm(const Eigen::MatrixXd& design, const Eigen::VectorXd& counts,
                              const FitOptions& options = {});

struct FitResult {
  explicit FitResult(ModelSpec model) : spec(std::move(model)) {}

  ModelSpec spec;
  FitStatus status = FitStatus::failed;
  std::vector<double> coefficients;  // intercept first, then spec terms
  // All 2^K cells in lexicographic order; the last entry is exp(alpha).
  std::vector<double> fitted_cells;
  double loglik = 0.0;
  double aic = 0.0;
  double bic = 0.0;
  double n_captured = 0.0;
  int iterations = 0;

  bool converged() const { return status == FitStatus::converged; }
  double projected_unobserved() const { return fitted_cells.back(); }

  // n_c + exp(alpha); undefined unless converged.
  std::optional<double> n_hat() const;
};

FitResult fit_poisson(const FrequencyTable& table, const ModelSpec& spec,
                      const FitOptions& options = {});

// N0..01 / (N0..01 + exp(alpha)) from the fitted cells.
std::optional<double> psi_hat(const FitResult& fit);

// Two streams only: N11 (N01 + N00) / ((N11 + N10) N01).
std::optional<double> phi_hat(const FitResult& fit);

}  // namespace crc

#endif  // CRC_LOGLINEAR_HPP
