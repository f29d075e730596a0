#include "crc/oracle.hpp"

#include <cmath>
#include <stdexcept>

#include "crc/model_space.hpp"

namespace crc::oracle {

namespace {

// A product of fitted cells raised to fractional powers, evaluated as a sum
// of weighted logs.  Cells are indexed 0..6 for 111, 110, 101, 100, 011,
// 010, 001.
using Powers = std::array<double, 7>;

struct ThreeStreamForm {
  // psi = A / (A + B)
  Powers psi_a;
  Powers psi_b;
  // N000 = C / D
  Powers n000_num;
  Powers n000_den;
};

constexpr double h = 0.5;
constexpr double t1 = 1.0 / 3.0;
constexpr double t2 = 2.0 / 3.0;
constexpr double s1 = 1.0 / 6.0;
constexpr double q1 = 0.25;
constexpr double q3 = 0.75;
constexpr double e1 = 0.125;
constexpr double e3 = 0.375;

//                        111  110  101  100  011  010  001
constexpr ThreeStreamForm kForms[8] = {
    // 1: X1, X2, X3
    {{e3, 0, q1, 0, q1, 0, e1}, {0, q1, 0, e3, 0, e3, 0},
     {0, 0, 0, h, 0, h, h}, {h, 0, 0, 0, 0, 0, 0}},
    // 2: + X1X2
    {{t1, 0, t1, 0, t1, 0, 0}, {0, t1, 0, t1, 0, t1, 0},
     {0, t1, 0, t1, 0, t1, 1}, {t1, 0, t1, 0, t1, 0, 0}},
    // 3: + X1X3
    {{s1, s1, 0, 0, t2, 0, t1}, {0, 0, s1, s1, 0, 1, 0},
     {0, 0, t1, t1, 0, 1, t1}, {t1, t1, 0, 0, t1, 0, 0}},
    // 4: + X2X3
    {{s1, s1, t2, 0, 0, 0, t1}, {0, 0, 0, 1, s1, s1, 0},
     {0, 0, 0, 1, t1, t1, t1}, {t1, t1, t1, 0, 0, 0, 0}},
    // 5: + X1X2 + X1X3
    {{0, 0, 0, 0, 1, 0, 0}, {0, 0, 0, 0, 0, 1, 0},
     {0, 0, 0, 0, 0, 1, 1}, {0, 0, 0, 0, 1, 0, 0}},
    // 6: + X1X2 + X2X3
    {{0, 0, 1, 0, 0, 0, 0}, {0, 0, 0, 1, 0, 0, 0},
     {0, 0, 0, 1, 0, 0, 1}, {0, 0, 1, 0, 0, 0, 0}},
    // 7: + X1X3 + X2X3
    {{0, 1, q1, 0, q1, 0, q3}, {q1, 0, 0, 1, 0, 1, 0},
     {0, 0, 0, 1, 0, 1, 0}, {0, 1, 0, 0, 0, 0, 0}},
    // 8: all two-way terms (saturated)
    {{0, 1, 1, 0, 1, 0, 0}, {1, 0, 0, 1, 0, 1, 0},
     {1, 0, 0, 1, 0, 1, 1}, {0, 1, 1, 0, 1, 0, 0}},
};

double log_product(const Powers& powers, const std::array<double, 7>& logs) {
  double s = 0.0;
  for (std::size_t i = 0; i < 7; ++i) {
    if (powers[i] != 0.0) s += powers[i] * logs[i];
  }
  return s;
}

bool close(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max(std::abs(a), std::abs(b));
}

}  // namespace

std::optional<TwoStreamRow> two_stream_row(const FrequencyTable& table, int model_id) {
  if (table.streams() != 2) throw std::invalid_argument("two_stream_row needs a two-stream table");
  if (model_id < 1 || model_id > 7) throw std::invalid_argument("two-stream model id must be 1..7");
  const double n11 = table[0];
  const double n10 = table[1];
  const double n01 = table[2];
  const double nc = n11 + n10 + n01;
  const double n1dot = n11 + n10;
  const double ndot1 = n11 + n01;

  TwoStreamRow row;
  row.model_id = model_id;
  switch (model_id) {
    case 1:
      if (!(nc > 0.0)) return std::nullopt;
      row.fitted = {nc / 3, nc / 3, nc / 3, nc / 3};
      row.psi_hat = 0.5;
      row.phi_hat = 1.0;
      break;
    case 2:
      if (!(n01 > 0.0) || !(n1dot > 0.0)) return std::nullopt;
      row.fitted = {n1dot / 2, n1dot / 2, n01, n01};
      row.psi_hat = 0.5;
      row.phi_hat = 1.0;
      break;
    case 3:
      if (!(ndot1 > 0.0) || !(n10 > 0.0)) return std::nullopt;
      row.fitted = {ndot1 / 2, n10, ndot1 / 2, n10};
      row.psi_hat = ndot1 / (2 * n10 + ndot1);
      row.phi_hat = 1.0;
      break;
    case 4:
      if (!(n11 > 0.0) || !(n10 + n01 > 0.0)) return std::nullopt;
      row.fitted = {n11, (n10 + n01) / 2, (n10 + n01) / 2, (n10 + n01) / 2};
      row.psi_hat = 0.5;
      row.phi_hat = 4 * n11 / (2 * n11 + n10 + n01);
      break;
    case 5:
      if (!(n11 > 0.0) || !(n10 > 0.0) || !(n01 > 0.0)) return std::nullopt;
      row.fitted = {n11, n10, n01, n10 * n01 / n11};
      row.psi_hat = n11 / (n11 + n10);
      row.phi_hat = 1.0;
      break;
    case 6:
      if (!(n11 > 0.0) || !(n10 > 0.0) || !(n01 > 0.0)) return std::nullopt;
      row.fitted = {n11, n10, n01, n01};
      row.psi_hat = 0.5;
      row.phi_hat = 2 * n11 / n1dot;
      break;
    case 7:
      if (!(n11 > 0.0) || !(n10 > 0.0) || !(n01 > 0.0)) return std::nullopt;
      row.fitted = {n11, n10, n01, n10};
      row.psi_hat = n01 / (n01 + n10);
      row.phi_hat = n11 * (n10 + n01) / (n01 * n1dot);
      break;
  }
  row.n_hat = nc + row.fitted[3];
  return row;
}

std::optional<ThreeStreamRow> three_stream_row(std::span<const double, 7> fitted_cells, int model_id) {
  if (model_id < 1 || model_id > 8) throw std::invalid_argument("three-stream model id must be 1..8");
  std::array<double, 7> logs{};
  for (std::size_t i = 0; i < 7; ++i) {
    if (!(fitted_cells[i] > 0.0) || !std::isfinite(fitted_cells[i])) return std::nullopt;
    logs[i] = std::log(fitted_cells[i]);
  }
  const ThreeStreamForm& form = kForms[model_id - 1];
  const double log_a = log_product(form.psi_a, logs);
  const double log_b = log_product(form.psi_b, logs);
  ThreeStreamRow row;
  row.model_id = model_id;
  // A / (A + B) = 1 / (1 + exp(log B - log A))
  row.psi_hat = 1.0 / (1.0 + std::exp(log_b - log_a));
  row.n000_hat = std::exp(log_product(form.n000_num, logs) - log_product(form.n000_den, logs));
  return row;
}

std::optional<int> model_id_for(const ModelSpec& spec) {
  std::vector<ModelSpec> table;
  if (spec.streams() == 2) {
    table = enumerate_all(2);
  } else if (spec.streams() == 3) {
    table = enumerate_conventional(3);
  } else {
    return std::nullopt;
  }
  for (std::size_t i = 0; i < table.size(); ++i) {
    if (table[i] == spec) return static_cast<int>(i + 1);
  }
  return std::nullopt;
}

std::optional<bool> check_fit(const FrequencyTable& table, const FitResult& fit, double tolerance) {
  const auto id = model_id_for(fit.spec);
  if (!id || !fit.converged()) return std::nullopt;
  const auto n_hat = fit.n_hat();
  const auto psi = psi_hat(fit);
  if (!n_hat || !psi) return std::nullopt;

  if (fit.spec.streams() == 2) {
    const auto row = two_stream_row(table, *id);
    if (!row) return std::nullopt;
    bool ok = close(row->n_hat, *n_hat, tolerance) && close(row->psi_hat, *psi, tolerance);
    const auto phi = phi_hat(fit);
    ok = ok && phi && close(row->phi_hat, *phi, tolerance);
    for (std::size_t i = 0; i < 4; ++i) ok = ok && close(row->fitted[i], fit.fitted_cells[i], tolerance);
    return ok;
  }

  const std::span<const double, 7> observed(fit.fitted_cells.data(), 7);
  const auto row = three_stream_row(observed, *id);
  if (!row) return std::nullopt;
  return close(row->n000_hat, fit.projected_unobserved(), tolerance) && close(row->psi_hat, *psi, tolerance);
}

}  // namespace crc::oracle
