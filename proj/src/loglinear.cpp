#include "crc/loglinear.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace crc {

namespace {

// Fitted values below this for an observed zero count mean the MLE lies at
// infinity along some direction.
constexpr double kBoundaryFitted = 1e-8;
constexpr int kMaxStepHalvings = 30;
// exp() overflows a double a little past 709.
constexpr double kMaxEta = 700.0;

double poisson_loglik(const Eigen::VectorXd& y, const Eigen::VectorXd& mu) {
  double ll = 0.0;
  for (Eigen::Index j = 0; j < y.size(); ++j) {
    if (y[j] > 0.0) ll += y[j] * std::log(mu[j]);
    ll -= mu[j] + std::lgamma(y[j] + 1.0);
  }
  return ll;
}

double poisson_deviance(const Eigen::VectorXd& y, const Eigen::VectorXd& mu) {
  double dev = 0.0;
  for (Eigen::Index j = 0; j < y.size(); ++j) {
    if (y[j] > 0.0) dev += y[j] * std::log(y[j] / mu[j]);
    dev -= y[j] - mu[j];
  }
  return 2.0 * dev;
}

bool eta_in_range(const Eigen::VectorXd& eta) {
  return eta.allFinite() && eta.maxCoeff() < kMaxEta;
}

}  // namespace

std::string_view to_string(FitStatus status) {
  switch (status) {
    case FitStatus::converged: return "converged";
    case FitStatus::boundary: return "boundary";
    case FitStatus::rank_deficient: return "rank_deficient";
    case FitStatus::failed: return "failed";
  }
  return "failed";
}

Eigen::MatrixXd design_matrix(int streams, const ModelSpec& spec) {
  if (spec.streams() != streams) throw std::invalid_argument("model spec stream count does not match");
  const auto rows = static_cast<Eigen::Index>((std::size_t{1} << streams) - 1);
  const auto& terms = spec.terms();
  Eigen::MatrixXd x(rows, static_cast<Eigen::Index>(terms.size() + 1));
  for (Eigen::Index j = 0; j < rows; ++j) {
    const std::uint32_t mask = history_at(streams, static_cast<std::size_t>(j)).mask();
    x(j, 0) = 1.0;
    for (std::size_t t = 0; t < terms.size(); ++t) {
      x(j, static_cast<Eigen::Index>(t + 1)) = (mask & terms[t]) == terms[t] ? 1.0 : 0.0;
    }
  }
  return x;
}

PoissonGlmFit fit_poisson_glm(const Eigen::MatrixXd& design, const Eigen::VectorXd& counts,
                              const FitOptions& options) {
  if (design.rows() != counts.size()) throw std::invalid_argument("design rows and counts differ");
  PoissonGlmFit out;
  const Eigen::Index p = design.cols();

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
  qr.setThreshold(options.rank_tolerance);
  if (qr.rank() < p) {
    out.status = FitStatus::rank_deficient;
    out.coefficients = Eigen::VectorXd::Constant(p, std::numeric_limits<double>::quiet_NaN());
    out.fitted = Eigen::VectorXd::Constant(counts.size(), std::numeric_limits<double>::quiet_NaN());
    out.loglik = std::numeric_limits<double>::quiet_NaN();
    return out;
  }

  const Eigen::VectorXd& y = counts;
  Eigen::VectorXd mu = (y.array() + 0.1).matrix();
  Eigen::VectorXd eta = mu.array().log().matrix();
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(p);
  double dev = poisson_deviance(y, mu);
  bool have_beta = false;

  out.status = FitStatus::failed;
  for (int iter = 1; iter <= options.max_iterations; ++iter) {
    out.iterations = iter;
    // Working response and weights for the log link.
    const Eigen::VectorXd z = eta + ((y - mu).array() / mu.array()).matrix();
    const Eigen::MatrixXd xtw = design.transpose() * mu.asDiagonal();
    Eigen::VectorXd next = (xtw * design).ldlt().solve(xtw * z);

    Eigen::VectorXd next_eta = design * next;
    Eigen::VectorXd next_mu;
    double next_dev = std::numeric_limits<double>::infinity();
    if (eta_in_range(next_eta)) {
      next_mu = next_eta.array().exp().matrix();
      next_dev = poisson_deviance(y, next_mu);
    }
    // Step halving keeps the deviance from increasing.
    int halvings = 0;
    while (have_beta && (!std::isfinite(next_dev) || next_dev > dev + 1e-12 * (std::abs(dev) + 1.0)) &&
           halvings < kMaxStepHalvings) {
      next = 0.5 * (next + beta);
      next_eta = design * next;
      if (eta_in_range(next_eta)) {
        next_mu = next_eta.array().exp().matrix();
        next_dev = poisson_deviance(y, next_mu);
      }
      ++halvings;
    }
    if (!std::isfinite(next_dev) || !next.allFinite()) break;

    const double change = std::abs(next_dev - dev);
    beta = std::move(next);
    eta = std::move(next_eta);
    mu = std::move(next_mu);
    dev = next_dev;
    have_beta = true;

    if (eta.minCoeff() < options.boundary_eta) {
      out.status = FitStatus::boundary;
      break;
    }
    if (iter > 1 && change < options.tolerance * (std::abs(dev) + 0.1)) {
      out.status = FitStatus::converged;
      break;
    }
  }

  if (out.status == FitStatus::converged) {
    for (Eigen::Index j = 0; j < y.size(); ++j) {
      if (y[j] == 0.0 && mu[j] < kBoundaryFitted) out.status = FitStatus::boundary;
    }
  }
  out.coefficients = beta;
  out.fitted = mu;
  out.loglik = have_beta ? poisson_loglik(y, mu) : std::numeric_limits<double>::quiet_NaN();
  return out;
}

FitResult fit_poisson(const FrequencyTable& table, const ModelSpec& spec, const FitOptions& options) {
  const int k = table.streams();
  const Eigen::MatrixXd x = design_matrix(k, spec);
  const auto c = table.counts();
  const Eigen::VectorXd y = Eigen::Map<const Eigen::VectorXd>(c.data(), static_cast<Eigen::Index>(c.size()));

  PoissonGlmFit glm = fit_poisson_glm(x, y, options);

  FitResult fit(spec);
  fit.status = glm.status;
  fit.iterations = glm.iterations;
  fit.n_captured = n_captured(table);
  fit.coefficients.assign(glm.coefficients.data(), glm.coefficients.data() + glm.coefficients.size());
  fit.fitted_cells.assign(glm.fitted.data(), glm.fitted.data() + glm.fitted.size());
  fit.fitted_cells.push_back(std::exp(glm.coefficients[0]));
  fit.loglik = glm.loglik;

  const double p = static_cast<double>(spec.parameter_count());
  const double bic_n = options.bic_sample_size == BicSampleSize::observed_cells
                           ? static_cast<double>(table.cell_count())
                           : fit.n_captured;
  if (std::isfinite(fit.loglik)) {
    fit.aic = -2.0 * fit.loglik + 2.0 * p;
    fit.bic = -2.0 * fit.loglik + p * std::log(bic_n);
  } else {
    fit.aic = fit.bic = std::numeric_limits<double>::quiet_NaN();
  }
  return fit;
}

std::optional<double> FitResult::n_hat() const {
  if (!converged()) return std::nullopt;
  return n_captured + projected_unobserved();
}

std::optional<double> psi_hat(const FitResult& fit) {
  if (!fit.converged()) return std::nullopt;
  const double last_only = fit.fitted_cells[fit.fitted_cells.size() - 2];
  const double unobserved = fit.projected_unobserved();
  const double denom = last_only + unobserved;
  if (!(denom > 0.0) || !std::isfinite(denom)) return std::nullopt;
  return last_only / denom;
}

std::optional<double> phi_hat(const FitResult& fit) {
  if (fit.spec.streams() != 2) throw std::invalid_argument("phi_hat is defined for two streams only");
  if (!fit.converged()) return std::nullopt;
  const auto& n = fit.fitted_cells;  // 11, 10, 01, 00
  if (!(n[2] > 0.0)) return std::nullopt;
  const double value = n[0] * (n[2] + n[3]) / ((n[0] + n[1]) * n[2]);
  if (!std::isfinite(value)) return std::nullopt;
  return value;
}

}  // namespace crc
