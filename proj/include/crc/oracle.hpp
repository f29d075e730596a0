#ifndef CRC_ORACLE_HPP
#define CRC_ORACLE_HPP

#include <array>
#include <optional>
#include <span>

#include "crc/capture.hpp"
#include "crc/loglinear.hpp"
#include "crc/model_spec.hpp"

namespace crc::oracle {

// Closed-form results for the seven two-stream log-linear models, numbered
// in canonical order: 1 intercept only, 2 X1, 3 X2, 4 X1X2, 5 X1+X2,
// 6 X1+X1X2, 7 X2+X1X2.
struct TwoStreamRow {
  int model_id = 0;
  std::array<double, 4> fitted{};  // N11, N10, N01, N00
  double psi_hat = 0.0;
  double phi_hat = 0.0;
  double n_hat = 0.0;
};

// nullopt when a count needed by the model's expressions is zero.
std::optional<TwoStreamRow> two_stream_row(const FrequencyTable& table, int model_id);

// psi_hat and the projected unobserved cell for the eight three-stream
// models allowed by the usual conventions (1 main effects, 2 +X1X2,
// 3 +X1X3, 4 +X2X3, 5 +X1X2+X1X3, 6 +X1X2+X2X3, 7 +X1X3+X2X3, 8 all
// two-way terms), evaluated from fitted cells in lexicographic order
// 111, 110, 101, 100, 011, 010, 001.
struct ThreeStreamRow {
  int model_id = 0;
  double psi_hat = 0.0;
  double n000_hat = 0.0;
};

std::optional<ThreeStreamRow> three_stream_row(std::span<const double, 7> fitted_cells,
                                               int model_id);

// Oracle model id for a spec, or nullopt when no closed form is tabulated.
std::optional<int> model_id_for(const ModelSpec& spec);

inline constexpr double kOracleTolerance = 1e-6;

// Compares a numeric fit against the closed forms.  nullopt when the spec
// has no tabulated closed form or the oracle row is undefined.
std::optional<bool> check_fit(const FrequencyTable& table, const FitResult& fit,
                              double tolerance = kOracleTolerance);

}  // namespace crc::oracle

#endif  // CRC_ORACLE_HPP
