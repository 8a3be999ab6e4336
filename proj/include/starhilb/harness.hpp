#pragma once

// Command-line front end: run configuration, suite orchestration over kappa /
// omega grids, JSON reports and CSV sweep tables.
//
// Exit codes: 0 pass, 1 a check failed, 2 invalid configuration, 3 I/O error.

#include "starhilb/analysis.hpp"
#include "starhilb/circleqm.hpp"
#include "starhilb/core.hpp"
#include "starhilb/frobenius.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <mutex>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace starhilb::harness {

enum class Suite { Core, Frobenius, Circle, SweepWeakFunctor, SweepDirac, All };

inline std::string to_string(Suite s) {
  switch (s) {
    case Suite::Core: return "core";
    case Suite::Frobenius: return "frobenius";
    case Suite::Circle: return "circle";
    case Suite::SweepWeakFunctor: return "sweep-weakfunctor";
    case Suite::SweepDirac: return "sweep-dirac";
    case Suite::All: return "all";
  }
  return "all";
}

inline Suite parse_suite(const std::string& name) {
  for (Suite s : {Suite::Core, Suite::Frobenius, Suite::Circle, Suite::SweepWeakFunctor, Suite::SweepDirac, Suite::All})
    if (to_string(s) == name) return s;
  throw ConfigInvalid("suite: unknown suite '" + name + "'");
}

struct RunConfig {
  std::string command = "verify";
  Suite suite = Suite::All;
  std::vector<std::size_t> kappas = {8, 16, 32, 64};
  std::vector<std::size_t> omegas = {4, 8, 16, 32};
  double L = 1.0;
  std::uint64_t seed = 1;
  double tolerance = kExactTolerance;
  std::string out_path;
};

struct CheckRecord {
  std::string name;
  std::size_t param = 0;
  double residual = 0.0;
  double threshold = 0.0;
  bool pass = false;
  double wall_ms = 0.0;
  std::string error;
};

struct SweepSummary {
  std::string check;
  SweepReport report;
};

struct SuiteReport {
  RunConfig config;
  std::vector<CheckRecord> checks;
  std::vector<SweepSummary> sweeps;
  bool pass = false;
};

// ---------------------------------------------------------------------------
// Configuration

namespace detail {

inline std::vector<std::size_t> parse_grid(const std::string& key, const std::string& text) {
  std::vector<std::size_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t pos = 0;
    long long v = 0;
    try {
      v = std::stoll(item, &pos);
    } catch (const std::exception&) {
      throw ConfigInvalid(key + ": '" + item + "' is not an integer");
    }
    if (pos != item.size()) throw ConfigInvalid(key + ": '" + item + "' is not an integer");
    if (v < 1) throw ConfigInvalid(key + ": values must be positive");
    out.push_back(static_cast<std::size_t>(v));
  }
  if (out.empty()) throw ConfigInvalid(key + ": empty list");
  return out;
}

inline double parse_real(const std::string& key, const std::string& text) {
  std::size_t pos = 0;
  double v = 0;
  try {
    v = std::stod(text, &pos);
  } catch (const std::exception&) {
    throw ConfigInvalid(key + ": '" + text + "' is not a number");
  }
  if (pos != text.size()) throw ConfigInvalid(key + ": '" + text + "' is not a number");
  return v;
}

inline std::uint64_t parse_seed(const std::string& text) {
  if (text.empty() || text.find_first_not_of("0123456789") != std::string::npos)
    throw ConfigInvalid("seed: '" + text + "' is not an unsigned integer");
  try {
    return std::stoull(text);
  } catch (const std::exception&) {
    throw ConfigInvalid("seed: '" + text + "' is out of range");
  }
}

inline std::vector<std::size_t> grid_from_json(const std::string& key, const nlohmann::json& v) {
  if (v.is_string()) return parse_grid(key, v.get<std::string>());
  if (!v.is_array()) throw ConfigInvalid(key + ": expected a list of integers");
  std::vector<std::size_t> out;
  for (const auto& e : v) {
    if (!e.is_number_integer() || e.get<long long>() < 1) throw ConfigInvalid(key + ": values must be positive integers");
    out.push_back(e.get<std::size_t>());
  }
  if (out.empty()) throw ConfigInvalid(key + ": empty list");
  return out;
}

inline void apply_file(RunConfig& cfg, const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigInvalid("config: cannot open '" + path + "'");
  nlohmann::json j;
  try {
    is >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigInvalid(std::string("config: malformed JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigInvalid("config: top level must be an object");
  for (const auto& [key, v] : j.items()) {
    if (key == "suite") {
      if (!v.is_string()) throw ConfigInvalid("suite: expected a string");
      cfg.suite = parse_suite(v.get<std::string>());
    } else if (key == "kappas") {
      cfg.kappas = grid_from_json(key, v);
    } else if (key == "omegas") {
      cfg.omegas = grid_from_json(key, v);
    } else if (key == "L") {
      if (!v.is_number()) throw ConfigInvalid("L: expected a number");
      cfg.L = v.get<double>();
    } else if (key == "seed") {
      if (!v.is_number_unsigned()) throw ConfigInvalid("seed: expected an unsigned integer");
      cfg.seed = v.get<std::uint64_t>();
    } else if (key == "tolerance") {
      if (!v.is_number()) throw ConfigInvalid("tolerance: expected a number");
      cfg.tolerance = v.get<double>();
    } else if (key == "out") {
      if (!v.is_string()) throw ConfigInvalid("out: expected a string");
      cfg.out_path = v.get<std::string>();
    } else {
      throw ConfigInvalid("config: unknown key '" + key + "'");
    }
  }
}

inline bool is_sweep(Suite s) { return s == Suite::SweepWeakFunctor || s == Suite::SweepDirac; }

inline void validate(const RunConfig& cfg) {
  auto ascending = [](const std::string& key, const std::vector<std::size_t>& g) {
    if (g.empty()) throw ConfigInvalid(key + ": empty list");
    for (std::size_t i = 1; i < g.size(); ++i)
      if (g[i] <= g[i - 1]) throw ConfigInvalid(key + ": values must be strictly ascending");
  };
  ascending("kappas", cfg.kappas);
  ascending("omegas", cfg.omegas);
  if (!(cfg.L > 0) || !std::isfinite(cfg.L)) throw ConfigInvalid("L: must be positive");
  if (!(cfg.tolerance > 0) || !std::isfinite(cfg.tolerance)) throw ConfigInvalid("tolerance: must be positive");
  const bool needs_kappa_sweep = cfg.suite == Suite::SweepWeakFunctor || cfg.suite == Suite::All;
  const bool needs_omega_sweep = cfg.suite == Suite::SweepDirac || cfg.suite == Suite::All;
  if (needs_kappa_sweep && cfg.kappas.size() < 3) throw ConfigInvalid("kappas: sweep suites need at least 3 points");
  if (needs_omega_sweep && cfg.omegas.size() < 3) throw ConfigInvalid("omegas: sweep suites need at least 3 points");
  if (cfg.command == "sweep" && !is_sweep(cfg.suite))
    throw ConfigInvalid("suite: the sweep command runs sweep-weakfunctor or sweep-dirac");
}

}  // namespace detail

/// Parses `verify ...` or `sweep ...` (argv[0] is the program name). Values
/// from --config are applied first; explicit flags override them.
inline RunConfig parse_config(const std::vector<std::string>& args) {
  CLI::App app{"starhilb: truncated dagger-compact category checks"};
  app.require_subcommand(1);
  struct Raw {
    std::string suite, kappas, omegas, L, seed, tolerance, out, config;
  } raw;
  auto add_options = [&raw](CLI::App* sub) {
    sub->add_option("--suite", raw.suite, "core | frobenius | circle | sweep-weakfunctor | sweep-dirac | all");
    sub->add_option("--kappas", raw.kappas, "comma-separated ascending truncation dimensions");
    sub->add_option("--omegas", raw.omegas, "comma-separated ascending circle half-widths");
    sub->add_option("--L", raw.L, "circumference of the circle");
    sub->add_option("--seed", raw.seed, "random seed");
    sub->add_option("--tolerance", raw.tolerance, "tolerance for exact identities");
    sub->add_option("--out", raw.out, "output path");
    sub->add_option("--config", raw.config, "JSON file with default values");
  };
  CLI::App* verify = app.add_subcommand("verify", "run a suite and write a JSON report");
  CLI::App* sweep = app.add_subcommand("sweep", "run a sweep suite and write a CSV table");
  add_options(verify);
  add_options(sweep);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  if (!reversed.empty()) reversed.pop_back();
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    throw ConfigInvalid(std::string("arguments: ") + e.what());
  }

  RunConfig cfg;
  cfg.command = verify->parsed() ? "verify" : "sweep";
  if (!raw.config.empty()) detail::apply_file(cfg, raw.config);
  if (!raw.suite.empty()) cfg.suite = parse_suite(raw.suite);
  if (!raw.kappas.empty()) cfg.kappas = detail::parse_grid("kappas", raw.kappas);
  if (!raw.omegas.empty()) cfg.omegas = detail::parse_grid("omegas", raw.omegas);
  if (!raw.L.empty()) cfg.L = detail::parse_real("L", raw.L);
  if (!raw.seed.empty()) cfg.seed = detail::parse_seed(raw.seed);
  if (!raw.tolerance.empty()) cfg.tolerance = detail::parse_real("tolerance", raw.tolerance);
  if (!raw.out.empty()) cfg.out_path = raw.out;
  detail::validate(cfg);
  return cfg;
}

inline RunConfig parse_config(int argc, const char* const* argv) {
  return parse_config(std::vector<std::string>(argv, argv + argc));
}

// ---------------------------------------------------------------------------
// Seeding: one run seed, split per check by a stable hash of the check name.

inline std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t check_seed(std::uint64_t run_seed, std::string_view check, std::size_t param) {
  return splitmix64(run_seed ^ fnv1a(check) ^ splitmix64(param));
}

/// Gaussian matrix scaled so the operator norm is O(1).
inline Matrix random_matrix(std::mt19937_64& rng, Eigen::Index rows, Eigen::Index cols) {
  std::normal_distribution<double> gauss;
  const double scale = 1.0 / std::sqrt(2.0 * static_cast<double>(std::max(rows, cols)));
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = scale * Scalar(gauss(rng), gauss(rng));
  return m;
}

// ---------------------------------------------------------------------------
// Checks

struct Task {
  std::string name;
  std::size_t param;
  double threshold;
  std::function<double()> run;
};

namespace suites {

/// Factor dimension used alongside kappa in tensor-product laws.
inline constexpr Eigen::Index kSmallFactor = 3;

inline void core(const RunConfig& cfg, std::vector<Task>& tasks) {
  const double tol = cfg.tolerance;
  for (const std::size_t kappa : cfg.kappas) {
    const auto k = static_cast<Eigen::Index>(kappa);
    const TruncObject h = TruncObject::standard(kappa);
    const TruncObject s = TruncObject::standard(kSmallFactor);
    auto rng_for = [&cfg, kappa](const std::string& name) { return std::mt19937_64(check_seed(cfg.seed, name, kappa)); };
    auto add = [&](const std::string& name, std::function<double(std::mt19937_64&)> body) {
      tasks.push_back({name, kappa, tol, [body, rng_for, name]() mutable {
                         auto rng = rng_for(name);
                         return body(rng);
                       }});
    };
    add("core/associativity", [h, k](std::mt19937_64& rng) {
      const Morphism f(h, h, random_matrix(rng, k, k)), g(h, h, random_matrix(rng, k, k)), e(h, h, random_matrix(rng, k, k));
      return operator_norm(compose(e, compose(g, f)) - compose(compose(e, g), f));
    });
    add("core/unit-left", [h, k](std::mt19937_64& rng) {
      const Morphism f(h, h, random_matrix(rng, k, k));
      return operator_norm(compose(identity(h), f) - f);
    });
    add("core/unit-right", [h, k](std::mt19937_64& rng) {
      const Morphism f(h, h, random_matrix(rng, k, k));
      return operator_norm(compose(f, identity(h)) - f);
    });
    add("core/interchange", [h, s, k](std::mt19937_64& rng) {
      const Morphism f1(h, h, random_matrix(rng, k, k)), f2(h, h, random_matrix(rng, k, k));
      const Morphism g1(s, s, random_matrix(rng, kSmallFactor, kSmallFactor)),
          g2(s, s, random_matrix(rng, kSmallFactor, kSmallFactor));
      return operator_norm(compose(tensor(f1, g1), tensor(f2, g2)) - tensor(compose(f1, f2), compose(g1, g2)));
    });
    add("core/dagger-involution", [h, k](std::mt19937_64& rng) {
      const Morphism f(h, h, random_matrix(rng, k, k));
      return operator_norm(dagger(dagger(f)) - f);
    });
    add("core/dagger-contravariance", [h, k](std::mt19937_64& rng) {
      const Morphism f(h, h, random_matrix(rng, k, k)), g(h, h, random_matrix(rng, k, k));
      return operator_norm(dagger(compose(g, f)) - compose(dagger(f), dagger(g)));
    });
    add("core/dagger-tensor", [h, s, k](std::mt19937_64& rng) {
      const Morphism f(h, h, random_matrix(rng, k, k));
      const Morphism g(s, s, random_matrix(rng, kSmallFactor, kSmallFactor));
      return operator_norm(dagger(tensor(f, g)) - tensor(dagger(f), dagger(g)));
    });
    add("core/braiding-symmetry", [h, s](std::mt19937_64&) {
      return operator_norm(compose(braiding(s, h), braiding(h, s)) - identity(tensor_obj(h, s)));
    });
    add("core/braiding-naturality", [h, s, k](std::mt19937_64& rng) {
      const Morphism f(h, h, random_matrix(rng, k, k));
      const Morphism g(s, s, random_matrix(rng, kSmallFactor, kSmallFactor));
      return operator_norm(compose(braiding(h, s), tensor(f, g)) - compose(tensor(g, f), braiding(h, s)));
    });
    add("core/snake", [h](std::mt19937_64&) {
      const auto r = snake_residuals(compact_structure(h));
      return std::max(r.left, r.right);
    });
    add("core/loop-dimension", [h, kappa](std::mt19937_64&) {
      return std::abs(compose(cap(h), cup(h)).scalar() - static_cast<double>(kappa));
    });
    add("core/trace-identity", [h, kappa](std::mt19937_64&) {
      return std::abs(trace(identity(h)) - static_cast<double>(kappa));
    });
  }
}

inline void frobenius(const RunConfig& cfg, std::vector<Task>& tasks) {
  for (const std::size_t kappa : cfg.kappas) {
    auto report = std::make_shared<std::once_flag>();
    auto cache = std::make_shared<AxiomReport>();
    for (const auto name : kAxiomNames) {
      tasks.push_back({"frobenius/" + std::string(name), kappa, cfg.tolerance, [kappa, report, cache, name]() {
                         std::call_once(*report, [&] {
                           *cache = check_axioms(chosen_structure(TruncObject::standard(kappa)));
                         });
                         return cache->at(std::string(name));
                       }});
    }
  }
}

inline void circle(const RunConfig& cfg, std::vector<Task>& tasks) {
  const double tol = cfg.tolerance;
  for (const std::size_t omega_u : cfg.omegas) {
    const int omega = static_cast<int>(omega_u);
    const CircleSpace sp(cfg.L, omega);
    const double kappa = static_cast<double>(sp.kappa());
    const std::uint64_t seed = check_seed(cfg.seed, "circle", omega_u);
    auto add = [&](const std::string& name, double threshold, std::function<double()> body) {
      tasks.push_back({"circle/" + name, omega_u, threshold, std::move(body)});
    };

    add("delta-norm", tol, [sp, kappa] {
      const Morphism d = position_eigenstate(sp, 0.3 * sp.length());
      return std::abs(compose(dagger(d), d).scalar() - kappa / sp.length());
    });
    add("unbias", tol, [sp, kappa] {
      double worst = 0;
      const double rescale = std::sqrt(sp.length() / kappa);
      for (std::size_t j = 0; j <= sp.kappa(); ++j) {
        const double x = j < sp.kappa() ? sp.grid_point(j) : 0.123 * sp.length();
        const Morphism d = rescale * position_eigenstate(sp, x);
        for (long n = -sp.omega(); n <= sp.omega(); ++n) {
          const Scalar overlap = compose(dagger(d), basis_state(sp.object(), theta(n))).scalar();
          worst = std::max(worst, std::abs(std::norm(overlap) - 1.0 / kappa));
        }
      }
      return worst;
    });
    add("dft-unitarity", tol, [sp, kappa] {
      Matrix cols(static_cast<Eigen::Index>(sp.kappa()), static_cast<Eigen::Index>(sp.kappa()));
      for (std::size_t j = 0; j < sp.kappa(); ++j)
        cols.col(static_cast<Eigen::Index>(j)) =
            std::sqrt(sp.length() / kappa) * position_eigenstate(sp, GridPoint{j}).column();
      return ::starhilb::detail::spectral_norm(cols.adjoint() * cols - Matrix::Identity(cols.rows(), cols.cols()));
    });
    add("translation-group", 1e-10, [sp, seed] {
      std::mt19937_64 rng(seed);
      std::uniform_real_distribution<double> u(0.0, sp.length());
      double worst = 0;
      for (int i = 0; i < 20; ++i) worst = std::max(worst, position_translation_residual(sp, u(rng), u(rng)));
      return worst;
    });
    add("momentum-translation", tol, [sp] {
      double worst = 0;
      const Matrix mu = black_mult(sp).matrix();
      const auto k = static_cast<Eigen::Index>(sp.kappa());
      for (long n = -sp.omega(); n <= sp.omega(); ++n)
        for (long m = -sp.omega(); m <= sp.omega(); ++m) {
          Vector expected = Vector::Zero(k);
          expected(sp.slot(oplus(n, m, sp.omega()))) = 1.0;
          worst = std::max(worst, (mu.col(sp.slot(n) * k + sp.slot(m)) - expected).norm());
        }
      return worst;
    });
    add("quasi-special-factor", tol, [sp, kappa] {
      return std::abs(quasi_speciality(group_algebra(sp)).factor - kappa) / kappa;
    });
    add("quasi-special-residual", tol * kappa, [sp] { return quasi_speciality(group_algebra(sp)).residual; });
    add("group-algebra-axioms", tol, [sp] {
      const auto r = check_axioms(group_algebra(sp));
      double worst = 0;
      for (const auto& [name, v] : r)
        if (name != "speciality") worst = std::max(worst, v);
      return worst;
    });
    add("momentum-axioms", tol, [sp] {
      double worst = 0;
      for (const auto& [name, v] : check_axioms(momentum_structure(sp))) worst = std::max(worst, v);
      return worst;
    });
    add("delta-copy", tol, [sp] {
      double worst = 0;
      for (std::size_t j = 0; j < sp.kappa(); ++j) worst = std::max(worst, delta_copy_residual(sp, GridPoint{j}));
      return worst;
    });
    add("momentum-projector-diagram", tol, [sp] {
      double worst = 0;
      for (long n = -sp.omega(); n <= sp.omega(); ++n) worst = std::max(worst, momentum_projector(sp, n).agreement);
      return worst;
    });
    add("position-projector-diagram", tol, [sp] {
      double worst = 0;
      for (std::size_t j = 0; j < sp.kappa(); ++j)
        worst = std::max(worst, position_projector(sp, GridPoint{j}).agreement);
      return worst;
    });
    add("momentum-completeness", tol, [sp] {
      Matrix sum = Matrix::Zero(static_cast<Eigen::Index>(sp.kappa()), static_cast<Eigen::Index>(sp.kappa()));
      for (long n = -sp.omega(); n <= sp.omega(); ++n) sum += momentum_projector(sp, n).projector.matrix();
      return ::starhilb::detail::spectral_norm(sum - Matrix::Identity(sum.rows(), sum.cols()));
    });
    add("position-completeness", tol, [sp] {
      Matrix sum = Matrix::Zero(static_cast<Eigen::Index>(sp.kappa()), static_cast<Eigen::Index>(sp.kappa()));
      for (std::size_t j = 0; j < sp.kappa(); ++j) sum += position_projector(sp, GridPoint{j}).projector.matrix();
      return ::starhilb::detail::spectral_norm(sum - Matrix::Identity(sum.rows(), sum.cols()));
    });
    add("projector-idempotence", tol, [sp] {
      double worst = 0;
      for (long n = -sp.omega(); n <= sp.omega(); ++n) {
        const Morphism p = momentum_projector(sp, n).projector;
        worst = std::max(worst, operator_norm(compose(p, p) - p));
      }
      for (std::size_t j = 0; j < sp.kappa(); ++j) {
        const Morphism q = position_projector(sp, GridPoint{j}).projector;
        worst = std::max(worst, operator_norm(compose(q, q) - q));
      }
      return worst;
    });
    auto complementarity = std::make_shared<std::map<std::string, double>>();
    auto once = std::make_shared<std::once_flag>();
    for (const std::string name : {"bialgebra-comult-mult", "bialgebra-comult-unit", "bialgebra-counit-mult", "weyl-ccr"}) {
      add(name, tol, [sp, complementarity, once, name] {
        std::call_once(*once, [&] { *complementarity = check_strong_complementarity(sp); });
        return complementarity->at(name);
      });
    }
    add("mixing", tol, [sp, seed] {
      double worst = 0;
      for (std::uint64_t i = 0; i < 20; ++i)
        worst = std::max(worst, mixing_experiment(sp, random_unit_state(sp, splitmix64(seed + i))).distance);
      return worst;
    });
    add("integral", 1e-6, [sp] {
      // f(x) = 2 + chi_1(x) - 0.5i chi_{-1}(x): the integral is 2 L.
      auto series = [](long n) -> Scalar {
        if (n == 0) return 2.0;
        if (n == 1) return 1.0;
        if (n == -1) return Scalar(0, -0.5);
        return 0.0;
      };
      const Scalar value = integrate(sp, fourier_state(sp, series));
      const int points = 10000;
      Scalar riemann = 0;
      for (int i = 0; i < points; ++i) {
        const double x = sp.length() * i / points;
        Scalar f = 0;
        for (long n = -1; n <= 1; ++n)
          if (std::abs(n) <= sp.omega()) f += series(n) * sp.chi(n, x);
        riemann += f * (sp.length() / points);
      }
      return std::abs(value - riemann);
    });
    add("dirac-trig-poly", 1e-10, [sp] {
      const long degree = std::min<long>(3, sp.omega());
      auto series = [degree](long n) -> Scalar {
        if (std::abs(n) > degree) return 0.0;
        return Scalar(1.0 / (1.0 + static_cast<double>(n * n)), 0.25 * static_cast<double>(n));
      };
      const Morphism f = fourier_state(sp, series);
      double worst = 0;
      for (const double x : {0.0, 0.17, 0.5, 0.77}) {
        Scalar exact = 0;
        for (long n = -degree; n <= degree; ++n) exact += series(n) * sp.chi(n, x * sp.length());
        worst = std::max(worst, std::abs(delta_pairing(sp, x * sp.length(), f) - exact));
      }
      return worst;
    });
  }
}

/// ||trunc(g) trunc(f) - trunc(g f)||_op for a_mn = 2^(-m-n); (g f)_ln = 2^(-l-n) / 3.
inline double weak_functor_residual(std::size_t kappa) {
  const TruncObject h = TruncObject::standard(kappa);
  const StandardMapGenerator hs{[](std::size_t m, std::size_t n) { return Scalar(std::ldexp(1.0, -static_cast<int>(m + n))); },
                                std::nullopt};
  const StandardMapGenerator product{
      [](std::size_t l, std::size_t n) { return Scalar(std::ldexp(1.0, -static_cast<int>(l + n)) / 3.0); }, std::nullopt};
  const Morphism t = truncate_standard(hs, h, h);
  return operator_norm(compose(t, t) - truncate_standard(product, h, h));
}

/// |<delta_0 | P_r> - P_r(0)| for the Poisson kernel P_r = sum_n r^|n| chi_n, r = 1/2.
inline double dirac_residual(double L, std::size_t omega) {
  const CircleSpace sp(L, static_cast<int>(omega));
  constexpr double r = 0.5;
  const Morphism f = fourier_state(sp, [](long n) { return Scalar(std::pow(r, std::abs(n))); });
  const double exact = (1 + r) / (1 - r);
  return std::abs(delta_pairing(sp, 0.0, f) - exact);
}

}  // namespace suites

// ---------------------------------------------------------------------------
// Running

inline std::size_t thread_cap() {
  std::size_t n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("STARHILB_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v >= 1) n = std::min<std::size_t>(n, static_cast<std::size_t>(v));
  }
  return n;
}

inline std::vector<CheckRecord> execute(std::vector<Task>& tasks) {
  std::vector<CheckRecord> records(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < tasks.size(); i = next++) {
      const Task& t = tasks[i];
      CheckRecord rec{t.name, t.param, 0.0, t.threshold, false, 0.0, {}};
      const auto start = std::chrono::steady_clock::now();
      try {
        rec.residual = t.run();
        rec.pass = std::isfinite(rec.residual) && rec.residual <= t.threshold;
      } catch (const std::exception& e) {
        rec.residual = std::numeric_limits<double>::quiet_NaN();
        rec.error = e.what();
      }
      rec.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
      records[i] = std::move(rec);
    }
  };
  const std::size_t n_threads = std::min(thread_cap(), std::max<std::size_t>(1, tasks.size()));
  std::vector<std::thread> pool;
  for (std::size_t i = 1; i < n_threads; ++i) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return records;
}

inline SuiteReport run(const RunConfig& cfg) {
  detail::validate(cfg);
  std::vector<Task> tasks;
  const bool all = cfg.suite == Suite::All;
  if (all || cfg.suite == Suite::Core) suites::core(cfg, tasks);
  if (all || cfg.suite == Suite::Frobenius) suites::frobenius(cfg, tasks);
  if (all || cfg.suite == Suite::Circle) suites::circle(cfg, tasks);

  // Sweep points are checks too; their pass flag only requires a finite value,
  // the asserted property is the sweep verdict below.
  struct SweepSpec {
    std::string name;
    std::vector<std::size_t> grid;
    std::function<double(std::size_t)> residual;
  };
  std::vector<SweepSpec> sweeps;
  if (all || cfg.suite == Suite::SweepWeakFunctor)
    sweeps.push_back({"sweep-weakfunctor/residual", cfg.kappas, suites::weak_functor_residual});
  if (all || cfg.suite == Suite::SweepDirac)
    sweeps.push_back({"sweep-dirac/residual", cfg.omegas, [L = cfg.L](std::size_t w) { return suites::dirac_residual(L, w); }});
  for (const auto& sw : sweeps)
    for (const std::size_t p : sw.grid)
      tasks.push_back({sw.name, p, std::numeric_limits<double>::infinity(), [f = sw.residual, p] { return f(p); }});

  SuiteReport report;
  report.config = cfg;
  report.checks = execute(tasks);

  for (const auto& sw : sweeps) {
    std::vector<std::size_t> params;
    std::vector<double> residuals;
    for (const auto& rec : report.checks)
      if (rec.name == sw.name) {
        params.push_back(rec.param);
        residuals.push_back(rec.residual);
      }
    CheckRecord verdict{sw.name.substr(0, sw.name.find('/')) + "/verdict", sw.grid.back(), 0.0, 0.0, false, 0.0, {}};
    try {
      SweepReport sr = assess_sweep(params, residuals);
      verdict.residual = sr.residuals.back();
      verdict.threshold = sr.threshold;
      verdict.pass = sr.verdict == Verdict::Infinitesimal;
      report.sweeps.push_back({sw.name, std::move(sr)});
    } catch (const std::exception& e) {
      verdict.residual = std::numeric_limits<double>::quiet_NaN();
      verdict.error = e.what();
    }
    report.checks.push_back(std::move(verdict));
  }

  std::stable_sort(report.checks.begin(), report.checks.end(), [](const CheckRecord& a, const CheckRecord& b) {
    return a.name != b.name ? a.name < b.name : a.param < b.param;
  });
  report.pass = !report.checks.empty() &&
                std::all_of(report.checks.begin(), report.checks.end(), [](const CheckRecord& c) { return c.pass; });
  return report;
}

// ---------------------------------------------------------------------------
// Output

inline nlohmann::json to_json(const RunConfig& cfg) {
  return {{"command", cfg.command}, {"suite", to_string(cfg.suite)}, {"kappas", cfg.kappas},
          {"omegas", cfg.omegas},   {"L", cfg.L},                      {"seed", cfg.seed},
          {"tolerance", cfg.tolerance}, {"out", cfg.out_path}};
}

/// Full report; `wall_ms` fields are the only non-deterministic values.
inline nlohmann::json to_json(const SuiteReport& report) {
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& c : report.checks) {
    nlohmann::json j = {{"name", c.name},         {"param", c.param}, {"residual", c.residual},
                        {"threshold", c.threshold}, {"pass", c.pass},  {"wall_ms", c.wall_ms}};
    if (!std::isfinite(c.threshold)) j["threshold"] = nullptr;
    if (!c.error.empty()) j["error"] = c.error;
    checks.push_back(std::move(j));
  }
  nlohmann::json sweeps = nlohmann::json::array();
  for (const auto& s : report.sweeps) {
    nlohmann::json j = sweep_sidecar(s.report);
    j["check"] = s.check;
    j["param"] = s.report.parameter_values;
    j["residual"] = s.report.residuals;
    sweeps.push_back(std::move(j));
  }
  return {{"config", to_json(report.config)},
          {"checks", std::move(checks)},
          {"sweeps", std::move(sweeps)},
          {"verdict", report.pass ? "pass" : "fail"}};
}

/// `param,check,residual` rows for every sweep point.
inline void write_sweep_table(std::ostream& os, const SuiteReport& report) {
  os << "param,check,residual\n";
  char buf[64];
  for (const auto& s : report.sweeps)
    for (std::size_t i = 0; i < s.report.residuals.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%.17g", s.report.residuals[i]);
      os << s.report.parameter_values[i] << ',' << s.check << ',' << buf << '\n';
    }
}

namespace detail {

inline void write_file(const std::filesystem::path& path, const std::function<void(std::ostream&)>& body) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot open '" + path.string() + "' for writing");
  body(os);
  os.flush();
  if (!os) throw IoError("write to '" + path.string() + "' failed");
}

}  // namespace detail

/// verify: the JSON report goes to out_path (stdout if empty) and, when the run
/// contains sweeps, the table goes next to it with a .csv extension.
/// sweep: the table goes to out_path (stdout if empty) and the JSON report to
/// the same stem with a .json extension.
inline void write_outputs(const SuiteReport& report, std::ostream& console = std::cout) {
  const auto& cfg = report.config;
  const std::string json_text = to_json(report).dump(2) + "\n";
  if (cfg.out_path.empty()) {
    if (cfg.command == "sweep")
      write_sweep_table(console, report);
    else
      console << json_text;
    return;
  }
  const std::filesystem::path out(cfg.out_path);
  if (cfg.command == "sweep") {
    detail::write_file(out, [&](std::ostream& os) { write_sweep_table(os, report); });
    detail::write_file(std::filesystem::path(out).replace_extension(".json"), [&](std::ostream& os) { os << json_text; });
  } else {
    detail::write_file(out, [&](std::ostream& os) { os << json_text; });
    if (!report.sweeps.empty())
      detail::write_file(std::filesystem::path(out).replace_extension(".csv"),
                         [&](std::ostream& os) { write_sweep_table(os, report); });
  }
}

/// Entry point shared by the CLI binary and the tests; returns the exit code.
inline int main_entry(const std::vector<std::string>& args, std::ostream& out = std::cout,
                      std::ostream& err = std::cerr) {
  RunConfig cfg;
  try {
    cfg = parse_config(args);
  } catch (const ConfigInvalid& e) {
    err << "config error: " << e.what() << '\n';
    return 2;
  }
  try {
    const SuiteReport report = run(cfg);
    write_outputs(report, out);
    std::size_t failed = 0;
    for (const auto& c : report.checks)
      if (!c.pass) {
        ++failed;
        err << "FAIL " << c.name << " param=" << c.param << " residual=" << c.residual
            << (c.error.empty() ? "" : " error=" + c.error) << '\n';
      }
    err << report.checks.size() - failed << '/' << report.checks.size() << " checks passed\n";
    return report.pass ? 0 : 1;
  } catch (const IoError& e) {
    err << "io error: " << e.what() << '\n';
    return 3;
  } catch (const ConfigInvalid& e) {
    err << "config error: " << e.what() << '\n';
    return 2;
  }
}

}  // namespace starhilb::harness
