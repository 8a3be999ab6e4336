// Acceptance run: one PASS/FAIL line per criterion.
//
//   starhilb_acceptance            all criteria
//   starhilb_acceptance --only N   criterion N only

#include "oracles.hpp"
#include "test_util.hpp"

#include <starhilb/analysis.hpp>
#include <starhilb/circleqm.hpp>
#include <starhilb/frobenius.hpp>
#include <starhilb/harness.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <random>
#include <string>
#include <vector>

using namespace starhilb;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

constexpr double kTol = 1e-12;

Outcome category_laws() {
  const auto start = Clock::now();
  std::mt19937_64 rng(20240101);
  std::uniform_int_distribution<std::size_t> dim(1, 64), small(1, 8);
  double worst = 0;
  for (int i = 0; i < 200; ++i) {
    const auto ka = dim(rng), kb = dim(rng), kc = dim(rng), kd = dim(rng), ks = small(rng);
    const auto a = TruncObject::standard(ka), b = TruncObject::standard(kb), c = TruncObject::standard(kc),
               d = TruncObject::standard(kd), s = TruncObject::standard(ks);
    auto rnd = [&](const TruncObject& x, const TruncObject& y) {
      return Morphism(x, y, harness::random_matrix(rng, static_cast<Eigen::Index>(y.kappa()), static_cast<Eigen::Index>(x.kappa())));
    };
    const Morphism f = rnd(a, b), g = rnd(b, c), h = rnd(c, d);
    const Morphism p = rnd(s, s), q = rnd(s, s);
    worst = std::max({worst, operator_norm(compose(h, compose(g, f)) - compose(compose(h, g), f)),
                      operator_norm(compose(identity(b), f) - f), operator_norm(compose(f, identity(a)) - f),
                      operator_norm(compose(tensor(g, p), tensor(f, q)) - tensor(compose(g, f), compose(p, q))),
                      operator_norm(dagger(dagger(f)) - f)});
  }
  const double t = seconds_since(start);
  return {worst <= kTol && t < 10.0, fmt("max residual %.3e", worst) + fmt(", %.2f s", t)};
}

Outcome frobenius_axioms() {
  const auto start = Clock::now();
  double worst = 0;
  bool strict = true;
  for (std::size_t k : {8u, 32u, 129u}) {
    const auto cs = chosen_structure(TruncObject::standard(k));
    strict = strict && cs.strictness == Strictness::Strict;
    const auto r = check_axioms(cs);
    if (r.size() != 7) return {false, "expected seven axioms"};
    for (const auto& [name, v] : r) worst = std::max(worst, v);
  }
  const double t = seconds_since(start);
  return {worst <= kTol && strict && t < 10.0, fmt("max residual %.3e", worst) + fmt(", %.2f s", t)};
}

Outcome compact_closure() {
  double snake = 0;
  bool exact = true;
  for (std::size_t k : {8u, 32u, 129u}) {
    const auto obj = TruncObject::standard(k);
    const auto r = snake_residuals(compact_structure(obj));
    snake = std::max({snake, r.left, r.right});
    exact = exact && compose(cap(obj), cup(obj)).scalar() == Scalar(double(k)) &&
            trace(identity(obj)) == Scalar(double(k));
  }
  return {snake <= kTol && exact, fmt("max snake residual %.3e", snake) + (exact ? ", loop and trace exact" : ", loop or trace inexact")};
}

Outcome partial_trace_hs() {
  std::mt19937_64 rng(4);
  double worst = 0;
  for (const auto& d : {PartialTraceDims{2, 2, 3}, PartialTraceDims{3, 4, 2}}) {
    const oracle::Mat g = oracle::random(rng, d.g * d.k, d.h * d.k);
    const oracle::Mat f = oracle::random(rng, d.g * d.k, d.h * d.k);
    const auto dom = TruncObject::standard(d.h * d.k), cod = TruncObject::standard(d.g * d.k);
    const Morphism gm(dom, cod, testutil::to_eigen(g)), fm(dom, cod, testutil::to_eigen(f));
    worst = std::max(worst, testutil::gap(partial_trace(gm, d).matrix(), oracle::partial_trace(g, d.h, d.g, d.k)));
    worst = std::max(worst, std::abs(hs_inner(gm, fm) - oracle::hs_inner(g, f)));
  }
  return {worst <= kTol, fmt("max residual %.3e", worst)};
}

Outcome dirac_delta() {
  // Trigonometric polynomials of degree d <= omega.
  double trig = 0;
  for (int omega : {3, 4, 8}) {
    const CircleSpace sp(1.0, omega);
    for (long d = 0; d <= std::min(omega, 3); ++d) {
      auto series = [d](long n) { return std::abs(n) <= d ? Scalar(1.0 / (1 + n * n), 0.3 * n) : Scalar(0); };
      const Morphism f = fourier_state(sp, series);
      for (double x : {0.0, 0.21, 0.5, 0.83}) {
        Scalar exact = 0;
        for (long n = -d; n <= d; ++n) exact += series(n) * std::polar(1.0, -2 * std::numbers::pi * n * x);
        trig = std::max(trig, std::abs(delta_pairing(sp, x, f) - exact));
      }
    }
  }
  // Poisson kernel r = 1/2 at x = 0, f(0) = 3.
  double worst_ratio = 0, previous = 0;
  for (std::size_t omega : {4u, 8u, 16u, 32u}) {
    const double err = harness::suites::dirac_residual(1.0, omega);
    if (previous > 0) worst_ratio = std::max(worst_ratio, err / previous);
    previous = err;
  }
  // Unbias at omega = 8 over all momenta and grid points.
  const CircleSpace sp(1.0, 8);
  const double k = double(sp.kappa());
  double unbias = 0;
  for (std::size_t j = 0; j < sp.kappa(); ++j) {
    const Morphism d = std::sqrt(sp.length() / k) * position_eigenstate(sp, GridPoint{j});
    for (long n = -8; n <= 8; ++n)
      unbias = std::max(unbias, std::abs(std::norm(compose(dagger(d), basis_state(sp.object(), theta(n))).scalar()) - 1.0 / k));
  }
  return {trig <= 1e-10 && worst_ratio <= 0.6 && unbias <= kTol,
          fmt("trig %.3e", trig) + fmt(", Poisson ratio %.3e", worst_ratio) + fmt(", unbias %.3e", unbias)};
}

Outcome translation_group() {
  const CircleSpace sp(1.0, 16);
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0;
  for (int i = 0; i < 100; ++i) worst = std::max(worst, position_translation_residual(sp, u(rng), u(rng)));
  return {worst <= 1e-10, fmt("max residual %.3e", worst)};
}

Outcome group_algebra_check() {
  double factor = 0, copy = 0;
  for (int omega : {4, 16, 64}) {
    const CircleSpace sp(1.0, omega);
    const double k = double(sp.kappa());
    const auto q = quasi_speciality(group_algebra(sp));
    factor = std::max(factor, std::abs(q.factor - k) / k);
    const Matrix delta_b = black_mult(sp).matrix().adjoint();
    for (std::size_t j = 0; j < sp.kappa(); ++j) {
      const Vector d = std::sqrt(sp.length()) * position_eigenstate(sp, GridPoint{j}).column();
      copy = std::max(copy, (delta_b * d - kron(d, d)).norm());
    }
  }
  return {factor <= kTol && copy <= kTol, fmt("factor rel. error %.3e", factor) + fmt(", copy residual %.3e", copy)};
}

Outcome observables() {
  double worst = 0;
  for (int omega : {4, 16}) {
    const CircleSpace sp(1.0, omega);
    const auto k = static_cast<Eigen::Index>(sp.kappa());
    Matrix p_sum = Matrix::Zero(k, k), q_sum = Matrix::Zero(k, k);
    for (long n = -omega; n <= omega; ++n) {
      const auto p = momentum_projector(sp, n);
      worst = std::max(worst, p.agreement);
      p_sum += p.projector.matrix();
    }
    for (std::size_t j = 0; j < sp.kappa(); ++j) {
      const auto q = position_projector(sp, GridPoint{j});
      worst = std::max(worst, q.agreement);
      q_sum += q.projector.matrix();
    }
    worst = std::max({worst, ::starhilb::detail::spectral_norm(p_sum - Matrix::Identity(k, k)),
                      ::starhilb::detail::spectral_norm(q_sum - Matrix::Identity(k, k))});
  }
  return {worst <= kTol, fmt("max residual %.3e", worst)};
}

Outcome strong_complementarity() {
  double worst = 0, t64 = 0;
  for (int omega : {4, 16, 64}) {
    const auto start = Clock::now();
    for (const auto& [name, v] : check_strong_complementarity(CircleSpace(1.0, omega))) worst = std::max(worst, v);
    if (omega == 64) t64 = seconds_since(start);
  }
  return {worst <= kTol && t64 < 60.0, fmt("max residual %.3e", worst) + fmt(", %.2f s at omega 64", t64)};
}

Outcome mixing() {
  const CircleSpace sp(1.0, 8);
  double worst = 0;
  for (std::uint64_t i = 0; i < 20; ++i)
    worst = std::max(worst, mixing_experiment(sp, random_unit_state(sp, 1000 + i)).distance);
  return {worst <= kTol, fmt("max ||rho' - id/kappa|| %.3e", worst)};
}

Outcome weak_functoriality() {
  const std::vector<std::size_t> kappas = {8, 16, 32, 64};
  const auto rep = sweep_residual(harness::suites::weak_functor_residual, kappas);
  return {rep.verdict == Verdict::Infinitesimal && rep.fitted_rate < -0.5,
          std::string("verdict ") + std::string(to_string(rep.verdict)) + fmt(", fitted rate %.3f", rep.fitted_rate)};
}

Outcome flat_state_witness() {
  const std::vector<std::size_t> kappas = {8, 16, 32, 64};
  const auto est = standard_part_estimate(
      [](std::size_t k) {
        return state(TruncObject::standard(k), Vector::Constant(static_cast<Eigen::Index>(k), 1.0 / std::sqrt(double(k))));
      },
      kappas);
  const double lowest = *std::min_element(est.report.residuals.begin(), est.report.residuals.end());
  return {est.report.verdict == Verdict::NotInfinitesimal && lowest >= 0.9,
          std::string("verdict ") + std::string(to_string(est.report.verdict)) + fmt(", smallest residual %.6f", lowest) +
              " (bound 0.9)"};
}

struct Criterion {
  const char* title;
  std::function<Outcome()> run;
};

const std::vector<Criterion> kCriteria = {
    {"category laws on 200 random instances", category_laws},
    {"chosen-basis Frobenius axioms", frobenius_axioms},
    {"compact closure", compact_closure},
    {"partial trace and Hilbert-Schmidt pairing", partial_trace_hs},
    {"Dirac delta behaviour", dirac_delta},
    {"translation group", translation_group},
    {"group algebra", group_algebra_check},
    {"observables from diagrams", observables},
    {"strong complementarity and Weyl relations", strong_complementarity},
    {"mixing experiment", mixing},
    {"weak functoriality sweep", weak_functoriality},
    {"flat state is not near-standard", flat_state_witness},
};

}  // namespace

int main(int argc, char** argv) {
  std::size_t only = 0;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--only" && i + 1 < argc) {
      only = std::strtoul(argv[++i], nullptr, 10);
      if (only < 1 || only > kCriteria.size()) {
        std::fprintf(stderr, "criterion must be between 1 and %zu\n", kCriteria.size());
        return 2;
      }
    } else {
      std::fprintf(stderr, "usage: %s [--only N]\n", argv[0]);
      return 2;
    }
  }
  int failed = 0;
  for (std::size_t i = 0; i < kCriteria.size(); ++i) {
    if (only && only != i + 1) continue;
    Outcome out{false, {}};
    try {
      out = kCriteria[i].run();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    std::printf("%s criterion %2zu: %s: %s\n", out.pass ? "PASS" : "FAIL", i + 1, kCriteria[i].title, out.detail.c_str());
    std::fflush(stdout);
    failed += out.pass ? 0 : 1;
  }
  return failed ? 1 : 0;
}
