#include "crc/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace crc {

namespace {

constexpr double kZ95 = 1.959963984540054;

void require_two_streams(const FrequencyTable& table, const char* what) {
  if (table.streams() != 2) throw std::invalid_argument(std::string(what) + " needs a two-stream table");
}

void require_psi(double psi) {
  if (!(psi > 0.0 && psi <= 1.0)) {
    throw std::invalid_argument("psi must lie in (0, 1], got " + std::to_string(psi));
  }
}

struct TwoStreamCells {
  double n11, n10, n01;
};

TwoStreamCells two_stream_cells(const FrequencyTable& t) { return {t[0], t[1], t[2]}; }

std::string range_text(const FeasibleRange& r, KeyParam kind) {
  if (kind == KeyParam::psi) return "(0, 1]";
  return "[" + std::to_string(r.lo) + ", inf)";
}

}  // namespace

double mle_psi_two(const FrequencyTable& table, double psi) {
  require_two_streams(table, "mle_psi_two");
  require_psi(psi);
  const auto [n11, n10, n01] = two_stream_cells(table);
  return n11 + n10 + n01 / psi;
}

double feasible_phi_lb(const FrequencyTable& table) {
  require_two_streams(table, "feasible_phi_lb");
  const auto [n11, n10, n01] = two_stream_cells(table);
  if (!(n11 > 0.0)) throw std::domain_error("phi is undefined when n11 = 0");
  return n11 / (n11 + n10);
}

double mle_phi_two(const FrequencyTable& table, double phi) {
  const double lb = feasible_phi_lb(table);
  // Allow for rounding in a lower bound the caller computed independently.
  if (!(phi >= lb * (1.0 - 1e-12))) {
    throw std::invalid_argument("phi must be at least " + std::to_string(lb) + ", got " + std::to_string(phi));
  }
  const auto [n11, n10, n01] = two_stream_cells(table);
  return n11 + n10 + n01 * (n11 + n10) / n11 * phi;
}

double mle_psi_k(const FrequencyTable& table, double psi) {
  require_psi(psi);
  const double last_only = table.last_stream_only();
  return (n_captured(table) - last_only) + last_only / psi;
}

double var_psi_k(const FrequencyTable& table, double psi) {
  require_psi(psi);
  return (1.0 - psi) / (psi * psi) * table.last_stream_only();
}

double psi_from_phi(const FrequencyTable& table, double phi) {
  const double lb = feasible_phi_lb(table);
  if (!(phi > 0.0)) throw std::invalid_argument("phi must be positive");
  return std::min(1.0, lb / phi);
}

double conditional_loglik_two(const FrequencyTable& table, double psi) {
  require_two_streams(table, "conditional_loglik_two");
  const double n = mle_psi_two(table, psi);
  const auto [n11, n10, n01] = two_stream_cells(table);
  const double n1 = n11 + n10;
  // Population-level parameters at the conditional MLE.
  const double p1 = n1 / n;
  const double p2_given_1 = n1 > 0.0 ? n11 / n1 : 0.0;
  const double p11 = p1 * p2_given_1;
  const double p10 = p1 * (1.0 - p2_given_1);
  const double p01 = (1.0 - p1) * psi;
  const double p00 = (1.0 - p1) * (1.0 - psi);
  const double captured = 1.0 - p00;
  double ll = 0.0;
  const double cells[3] = {n11, n10, n01};
  const double probs[3] = {p11, p10, p01};
  for (int j = 0; j < 3; ++j) {
    if (cells[j] > 0.0) ll += cells[j] * std::log(probs[j] / captured);
  }
  return ll;
}

FeasibleRange feasible_range(const FrequencyTable& table, KeyParam kind) {
  if (kind == KeyParam::psi) return {0.0, 1.0};
  return {feasible_phi_lb(table), std::numeric_limits<double>::infinity()};
}

CurvePoint curve_point(const FrequencyTable& table, KeyParam kind, double value) {
  CurvePoint pt;
  pt.value = value;
  const double psi = kind == KeyParam::psi ? value : psi_from_phi(table, value);
  pt.n_hat = kind == KeyParam::psi ? mle_psi_k(table, value) : mle_phi_two(table, value);
  pt.variance = var_psi_k(table, psi);
  const double half = kZ95 * std::sqrt(pt.variance);
  pt.ci_lo = pt.n_hat - half;
  pt.ci_hi = pt.n_hat + half;
  return pt;
}

std::vector<double> make_grid(const FrequencyTable& table, KeyParam kind, const GridSpec& grid) {
  if (kind == KeyParam::phi) require_two_streams(table, "phi grid");
  const FeasibleRange range = feasible_range(table, kind);
  double lo = 0.0;
  double hi = 0.0;
  if (kind == KeyParam::psi) {
    lo = grid.lo.value_or(0.01);
    hi = grid.hi.value_or(1.0);
    if (!(lo > 0.0) || hi > 1.0) {
      throw std::invalid_argument("psi grid must lie in " + range_text(range, kind));
    }
  } else {
    const double lb = range.lo;
    const double n11 = table[0];
    lo = grid.lo.value_or(lb);
    hi = grid.hi.value_or(3.0 * lb * std::max(5.0, n_captured(table) / n11));
    if (lo < lb * (1.0 - 1e-12)) {
      throw std::invalid_argument("phi grid must lie in " + range_text(range, kind));
    }
    lo = std::max(lo, lb);
  }
  if (!(lo <= hi)) throw std::invalid_argument("grid is empty: lo > hi");

  std::vector<double> values;
  if (grid.step) {
    const double step = *grid.step;
    if (!(step > 0.0)) throw std::invalid_argument("grid step must be positive");
    const auto count = static_cast<std::size_t>(std::floor((hi - lo) / step * (1.0 + 1e-12))) + 1;
    for (std::size_t i = 0; i < count; ++i) values.push_back(std::min(hi, lo + static_cast<double>(i) * step));
  } else {
    if (grid.points < 1) throw std::invalid_argument("grid needs at least one point");
    if (grid.points == 1 || lo == hi) {
      values.push_back(lo);
    } else {
      const auto n = static_cast<std::size_t>(grid.points);
      for (std::size_t i = 0; i < n; ++i) {
        values.push_back(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1));
      }
      values.back() = hi;
    }
  }
  if (values.empty()) throw std::invalid_argument("grid is empty");
  return values;
}

OverlayRecord overlay_record(const FrequencyTable& table, KeyParam kind, const FitResult& fit,
                             std::size_t model_id) {
  OverlayRecord rec;
  rec.model_id = model_id;
  rec.terms = fit.spec.label();
  rec.status = fit.status;
  rec.aic = fit.aic;
  rec.n_hat = fit.n_hat();
  rec.key_hat = kind == KeyParam::psi ? psi_hat(fit) : phi_hat(fit);
  if (rec.key_hat && rec.n_hat) {
    const double key = *rec.key_hat;
    bool feasible = false;
    if (kind == KeyParam::psi) {
      feasible = key > 0.0 && key <= 1.0;
    } else {
      feasible = key >= feasible_phi_lb(table) * (1.0 - 1e-12);
    }
    if (feasible) {
      const double on = kind == KeyParam::psi ? mle_psi_k(table, key) : mle_phi_two(table, key);
      rec.on_curve = std::abs(*rec.n_hat - on) / *rec.n_hat < kOnCurveTolerance;
    }
  }
  return rec;
}

Curve curve(const FrequencyTable& table, KeyParam kind, std::span<const double> grid,
            std::span<const FitResult> fits) {
  if (grid.empty()) throw std::invalid_argument("grid is empty");
  Curve out;
  out.kind = kind;
  out.points.reserve(grid.size());
  for (double v : grid) out.points.push_back(curve_point(table, kind, v));
  for (std::size_t i = 0; i < fits.size(); ++i) {
    out.overlay.push_back(overlay_record(table, kind, fits[i], i + 1));
  }
  return out;
}

std::vector<ReferencePoint> reference_points(const FrequencyTable& table) {
  const int k = table.streams();
  const std::uint32_t last_bit = 1u << (k - 1);
  std::vector<ReferencePoint> out;

  auto conditional = [&](std::uint32_t pattern) -> std::optional<double> {
    const double with = table.count(CaptureHistory(k, pattern | last_bit));
    const double without = table.count(CaptureHistory(k, pattern));
    if (!(with > 0.0)) return std::nullopt;
    return with / (with + without);
  };
  auto label_for = [&](std::uint32_t pattern) {
    std::string s = "p" + std::to_string(k) + "|";
    for (int i = 0; i < k - 1; ++i) s += ((pattern >> i) & 1u) ? '1' : '0';
    return s;
  };
  auto finish = [&](std::string label, std::optional<double> psi) {
    ReferencePoint ref{std::move(label), psi, std::nullopt};
    if (psi && *psi > 0.0 && *psi <= 1.0) ref.n_hat = mle_psi_k(table, *psi);
    out.push_back(std::move(ref));
  };

  // Patterns of the first K-1 streams in lexicographic order, skipping the
  // all-zero pattern whose conditional is psi itself.
  const std::uint32_t patterns = 1u << (k - 1);
  for (std::uint32_t idx = 0; idx + 1 < patterns; ++idx) {
    const std::uint32_t value = patterns - 1 - idx;
    std::uint32_t pattern = 0;
    for (int i = 0; i < k - 1; ++i) {
      if ((value >> (k - 2 - i)) & 1u) pattern |= 1u << i;
    }
    finish(label_for(pattern), conditional(pattern));
  }

  if (k == 3) {
    // psi = p3|1not2 * p3|not1 2 / p3|12: the 2-3 association is the same
    // with or without capture by stream 1.
    const auto p12 = conditional(0b011);
    const auto p1n2 = conditional(0b001);
    const auto pn12 = conditional(0b010);
    std::optional<double> rr;
    if (p12 && p1n2 && pn12) rr = *p1n2 * *pn12 / *p12;
    finish("RR", rr);
  }
  return out;
}

}  // namespace crc
