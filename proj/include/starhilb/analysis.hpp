#pragma once

// Operator norms and the finite-scale stand-ins for infinitesimal closeness:
// a quantity is judged infinitesimal when its residual decays along a sweep of
// increasing truncation dimensions and ends below a threshold.

#include "starhilb/core.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <functional>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace starhilb {

/// Largest singular value of the matrix representation.
inline double operator_norm(const Morphism& f) { return detail::spectral_norm(f.matrix()); }

/// A standard bounded map given entrywise; truncation evaluates the entries.
struct StandardMapGenerator {
  std::function<Scalar(std::size_t m, std::size_t n)> entry_fn;
  std::optional<double> declared_bound;
};

/// Top-left cod.kappa x dom.kappa block of the standard matrix, typed dom -> cod.
inline Morphism truncate_standard(const StandardMapGenerator& gen, const TruncObject& dom,
                                  const TruncObject& cod) {
  Matrix m(static_cast<Eigen::Index>(cod.kappa()), static_cast<Eigen::Index>(dom.kappa()));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      m(i, j) = gen.entry_fn(static_cast<std::size_t>(i + 1), static_cast<std::size_t>(j + 1));
  return Morphism(dom, cod, std::move(m));
}

enum class Verdict { Infinitesimal, NotInfinitesimal, Inconclusive };

inline std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Infinitesimal: return "Infinitesimal";
    case Verdict::NotInfinitesimal: return "NotInfinitesimal";
    case Verdict::Inconclusive: return "Inconclusive";
  }
  return "Inconclusive";
}

struct SweepOptions {
  /// The final residual must fall below this for an Infinitesimal verdict.
  double threshold = 1e-6;
  /// Residuals at or below this are treated as having reached machine
  /// precision: they count as converged and are clamped here for the fit.
  double noise_floor = 1e-14;
  /// A step only counts as a decrease if it shrinks by more than this fraction.
  double relative_slack = 1e-9;
};

struct SweepReport {
  std::vector<std::size_t> parameter_values;
  std::vector<double> residuals;
  double fitted_rate = 0.0;
  Verdict verdict = Verdict::Inconclusive;
  double threshold = 1e-6;
};

/// Fits the log-log slope and assigns the verdict for already-computed residuals.
inline SweepReport assess_sweep(std::vector<std::size_t> params, std::vector<double> residuals,
                                const SweepOptions& opts = {}) {
  if (params.size() != residuals.size()) throw InvalidSweep("parameter and residual counts differ");
  if (params.size() < 3) throw InvalidSweep("a sweep needs at least 3 points");
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (params[i] < 1) throw InvalidSweep("sweep parameters must be positive");
    if (i && params[i] <= params[i - 1]) throw InvalidSweep("sweep parameters must be strictly increasing");
    if (!std::isfinite(residuals[i])) throw ResidualNaN("non-finite residual at parameter " + std::to_string(params[i]));
    if (residuals[i] < 0) throw InvalidSweep("residuals must be non-negative");
  }

  const std::size_t n = params.size();
  std::vector<double> clamped(n);
  std::transform(residuals.begin(), residuals.end(), clamped.begin(),
                 [&](double r) { return std::max(r, opts.noise_floor); });

  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += std::log(static_cast<double>(params[i]));
    my += std::log(clamped[i]);
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = std::log(static_cast<double>(params[i])) - mx;
    sxy += dx * (std::log(clamped[i]) - my);
    sxx += dx * dx;
  }

  bool decreasing = true;
  for (std::size_t i = n - 3; i + 1 < n; ++i) {
    const bool converged = residuals[i + 1] <= opts.noise_floor;
    const bool shrinks = clamped[i + 1] < (1.0 - opts.relative_slack) * clamped[i];
    decreasing = decreasing && (converged || shrinks);
  }
  const bool small = residuals.back() < opts.threshold;

  SweepReport report;
  report.parameter_values = std::move(params);
  report.residuals = std::move(residuals);
  report.fitted_rate = sxx > 0 ? sxy / sxx : 0.0;
  report.threshold = opts.threshold;
  if (decreasing && small)
    report.verdict = Verdict::Infinitesimal;
  else if (!decreasing && !small)
    report.verdict = Verdict::NotInfinitesimal;
  else
    report.verdict = Verdict::Inconclusive;
  return report;
}

/// Evaluates `residual_fn` at each parameter (in order) and assesses the decay.
template <class ResidualFn>
SweepReport sweep_residual(ResidualFn&& residual_fn, std::span<const std::size_t> kappas,
                           const SweepOptions& opts = {}) {
  if (kappas.size() < 3) throw InvalidSweep("a sweep needs at least 3 points");
  std::vector<double> residuals;
  residuals.reserve(kappas.size());
  for (const std::size_t k : kappas) {
    const double r = static_cast<double>(residual_fn(k));
    if (!std::isfinite(r)) throw ResidualNaN("non-finite residual at parameter " + std::to_string(k));
    residuals.push_back(r);
  }
  return assess_sweep(std::vector<std::size_t>(kappas.begin(), kappas.end()), std::move(residuals), opts);
}

struct StandardPartEstimate {
  Morphism estimate;
  SweepReport report;
};

/// Compares successive nested truncations: the residual recorded at kappa_i is
/// || top-left block of f(kappa_{i+1}) - f(kappa_i) ||_op. The estimate is the
/// largest-kappa matrix. Needs at least 4 parameters (3 differences).
template <class MorphismAt>
StandardPartEstimate standard_part_estimate(MorphismAt&& f_at, std::span<const std::size_t> kappas,
                                            const SweepOptions& opts = {}) {
  if (kappas.size() < 4) throw InvalidSweep("standard part estimate needs at least 4 parameters");
  std::vector<Morphism> maps;
  maps.reserve(kappas.size());
  for (const std::size_t k : kappas) maps.push_back(f_at(k));

  std::vector<std::size_t> params;
  std::vector<double> residuals;
  for (std::size_t i = 0; i + 1 < maps.size(); ++i) {
    const Matrix& small = maps[i].matrix();
    const Matrix& big = maps[i + 1].matrix();
    if (big.rows() < small.rows() || big.cols() < small.cols())
      throw ShapeMismatch("truncations are not nested");
    const Matrix diff = big.topLeftCorner(small.rows(), small.cols()) - small;
    params.push_back(kappas[i]);
    residuals.push_back(detail::spectral_norm(diff));
  }
  auto report = assess_sweep(std::move(params), std::move(residuals), opts);
  return {maps.back(), std::move(report)};
}

/// ||psi - phi|| for two states of the same object.
inline double vector_equiv(const Morphism& psi, const Morphism& phi) {
  if (!psi.dom().is_unit() || !phi.dom().is_unit()) throw DomainMismatch("vector_equiv expects states");
  if (!(psi.cod() == phi.cod())) throw DomainMismatch("vector_equiv: states live in different objects");
  return (psi.matrix() - phi.matrix()).norm();
}

/// `param,residual` rows.
inline void write_sweep_csv(std::ostream& os, const SweepReport& report) {
  os << "param,residual\n";
  char buf[64];
  for (std::size_t i = 0; i < report.residuals.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g", report.residuals[i]);
    os << report.parameter_values[i] << ',' << buf << '\n';
  }
}

inline nlohmann::json sweep_sidecar(const SweepReport& report) {
  return {{"fitted_rate", report.fitted_rate},
          {"verdict", std::string(to_string(report.verdict))},
          {"threshold", report.threshold}};
}

}  // namespace starhilb
