#pragma once

// Wavefunctions on a circle of circumference L, truncated to the plane waves
// chi_n(x) = exp(-i 2 pi n x / L) with |n| <= omega. The chosen basis is
// e_theta(n) = chi_n / sqrt(L). Position eigenstates are truncated Fourier
// syntheses of a point mass; the "white" structure copies plane waves and the
// "black" structure is the group algebra of Z_{2 omega + 1}.

#include "starhilb/analysis.hpp"
#include "starhilb/core.hpp"
#include "starhilb/detail/diagram.hpp"
#include "starhilb/frobenius.hpp"

#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <string>

namespace starhilb {

/// theta(n) = |2n| + (1 - sign(n)) / 2 with sign(0) = -1: 0, 1, -1, 2, -2, ... -> 1, 2, 3, 4, 5, ...
inline std::size_t theta(long n) {
  const long sign = n > 0 ? 1 : -1;
  return static_cast<std::size_t>(std::labs(2 * n) + (1 - sign) / 2);
}

inline long theta_inv(std::size_t l) {
  if (l < 1) throw IndexOutOfRange("theta_inv: index must be at least 1");
  const auto half = static_cast<long>(l / 2);
  return (l % 2 == 0) ? half : -half;
}

/// Element of Z_{2 omega + 1} on the centred representatives -omega..+omega.
class ModInt {
 public:
  ModInt(long value, int omega) : value_(value), omega_(omega) {
    if (omega < 0 || std::labs(value) > omega) throw IndexOutOfRange("ModInt value outside -omega..+omega");
  }
  long value() const { return value_; }
  int omega() const { return omega_; }
  friend bool operator==(const ModInt&, const ModInt&) = default;

 private:
  long value_;
  int omega_;
};

/// [a + b] mod (2 omega + 1), centred.
inline long oplus(long a, long b, int omega) {
  const long kappa = 2L * omega + 1;
  long r = (a + b) % kappa;
  if (r < 0) r += kappa;
  if (r > omega) r -= kappa;
  return r;
}

inline ModInt oplus(const ModInt& a, const ModInt& b) {
  if (a.omega() != b.omega()) throw DomainMismatch("oplus of elements of different groups");
  return {oplus(a.value(), b.value(), a.omega()), a.omega()};
}

/// The point j L / (2 omega + 1) of the uniform grid, kept as its index so
/// that phases on it are computed from exact integer residues.
struct GridPoint {
  std::size_t index = 0;
};

class CircleSpace {
 public:
  CircleSpace(double length, int omega) : obj_(TruncObject::fourier(length, omega, "L2(R/LZ)")) {}

  double length() const { return std::get<FourierBasis>(obj_.basis()).length; }
  int omega() const { return std::get<FourierBasis>(obj_.basis()).omega; }
  std::size_t kappa() const { return obj_.kappa(); }
  const TruncObject& object() const { return obj_; }

  /// Row/column (0-based) of the basis vector chi_n / sqrt(L).
  Eigen::Index slot(long n) const {
    if (std::labs(n) > omega()) throw IndexOutOfRange("momentum index outside -omega..+omega");
    return static_cast<Eigen::Index>(theta(n) - 1);
  }

  /// x reduced into [0, L).
  double reduce(double x) const {
    const double L = length();
    double r = std::fmod(x, L);
    if (r < 0) r += L;
    if (r >= L) r -= L;
    return r;
  }

  /// Real addition modulo L.
  double add(double x, double y) const { return reduce(x + y); }

  /// j-th point of the uniform kappa-point grid, j L / kappa.
  double grid_point(std::size_t j) const {
    return length() * static_cast<double>(j) / static_cast<double>(kappa());
  }

  double grid_point(GridPoint p) const { return grid_point(p.index); }

  /// chi_n(x) = exp(-i 2 pi n x / L).
  Scalar chi(long n, double x) const {
    return std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>(n) * reduce(x) / length());
  }

  /// chi_n at a grid point, exp(-i 2 pi (n j mod kappa) / kappa).
  Scalar chi(long n, GridPoint p) const {
    const auto k = static_cast<long>(kappa());
    long r = (n * static_cast<long>(p.index % kappa())) % k;
    if (r < 0) r += k;
    return std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>(r) / static_cast<double>(k));
  }

 private:
  TruncObject obj_;
};

/// |chi_n> = sqrt(L) e_theta(n).
inline Morphism momentum_eigenstate(const CircleSpace& s, long n) {
  Vector v = Vector::Zero(static_cast<Eigen::Index>(s.kappa()));
  v(s.slot(n)) = std::sqrt(s.length());
  return state(s.object(), v);
}

/// |delta_x> = (1/sqrt L) sum_n chi_n(x)^* e_theta(n).
template <class Point>
Morphism position_eigenstate(const CircleSpace& s, Point x0) {
  const double scale = 1.0 / std::sqrt(s.length());
  Vector v(static_cast<Eigen::Index>(s.kappa()));
  for (long n = -s.omega(); n <= s.omega(); ++n) v(s.slot(n)) = scale * std::conj(s.chi(n, x0));
  return state(s.object(), v);
}

inline Morphism position_eigenstate(const CircleSpace& s, double x0) { return position_eigenstate<double>(s, x0); }

/// The state of f = sum_n c_n chi_n, given its series coefficients c_n.
inline Morphism fourier_state(const CircleSpace& s, const std::function<Scalar(long)>& series) {
  Vector v(static_cast<Eigen::Index>(s.kappa()));
  for (long n = -s.omega(); n <= s.omega(); ++n) v(s.slot(n)) = std::sqrt(s.length()) * series(n);
  return state(s.object(), v);
}

/// <delta_x0 | f>: the omega-truncated Fourier partial sum of f at x0.
inline Scalar delta_pairing(const CircleSpace& s, double x0, const Morphism& f) {
  return compose(dagger(position_eigenstate(s, x0)), f).scalar();
}

// White structure: copies the normalised plane waves.
inline ClassicalStructure momentum_structure(const CircleSpace& s) { return chosen_structure(s.object()); }

// Black structure: the group algebra of Z_{2 omega + 1}.

/// e_n (x) e_m |-> e_{n (+) m}.
inline Morphism black_mult(const CircleSpace& s) {
  const auto k = static_cast<Eigen::Index>(s.kappa());
  Matrix m = Matrix::Zero(k, k * k);
  for (long n = -s.omega(); n <= s.omega(); ++n)
    for (long j = -s.omega(); j <= s.omega(); ++j) m(s.slot(oplus(n, j, s.omega())), s.slot(n) * k + s.slot(j)) = 1.0;
  return Morphism(tensor_obj(s.object(), s.object()), s.object(), std::move(m));
}

/// chi_0 / sqrt(L).
inline Morphism black_unit(const CircleSpace& s) { return basis_state(s.object(), theta(0)); }

inline Morphism black_counit(const CircleSpace& s) { return dagger(black_unit(s)); }

inline ClassicalStructure group_algebra(const CircleSpace& s) {
  return structure_from_monoid(black_mult(s), black_unit(s));
}

/// mu_white(sqrt(L) delta_x (x) -): multiplication by the phases chi_n(x)^*.
template <class Point>
Morphism translation_operator(const CircleSpace& s, Point x, const detail::Block& white_mult) {
  using detail::Block;
  const Morphism point = std::sqrt(s.length()) * position_eigenstate(s, x);
  const auto op = detail::evaluate({{Block::of(point), Block::id(s.kappa())}, {white_mult}});
  return Morphism(s.object(), s.object(), Matrix(op.toDense()));
}

inline Morphism translation_operator(const CircleSpace& s, double x) {
  return translation_operator(s, x, detail::Block::of(momentum_structure(s).mult));
}

/// mu_black(chi_n / sqrt(L) (x) -): shifts momentum by n.
inline Morphism momentum_shift(const CircleSpace& s, long n, const detail::Block& black) {
  using detail::Block;
  const auto op = detail::evaluate({{Block::of(basis_state(s.object(), theta(n))), Block::id(s.kappa())}, {black}});
  return Morphism(s.object(), s.object(), Matrix(op.toDense()));
}

inline Morphism momentum_shift(const CircleSpace& s, long n) {
  return momentum_shift(s, n, detail::Block::of(black_mult(s)));
}

/// A projector computed two ways, with the operator-norm gap between them.
struct ObservableProjector {
  Morphism projector;     // from the closed-form definition
  Morphism from_diagram;  // (id (x) point^dagger) . comult
  double agreement;
};

/// P_n = (1/L) |chi_n><chi_n|, and (id (x) <chi_n|/sqrt(L)) . Delta_white.
inline ObservableProjector momentum_projector(const CircleSpace& s, long n) {
  const Morphism chi = momentum_eigenstate(s, n);
  Morphism direct = (1.0 / s.length()) * compose(chi, dagger(chi));
  const Morphism effect = dagger((1.0 / std::sqrt(s.length())) * chi);
  Morphism diagram = compose(tensor(identity(s.object()), effect), momentum_structure(s).comult);
  const double gap = operator_norm(direct - diagram);
  return {std::move(direct), std::move(diagram), gap};
}

/// Q_x = L/(2 omega + 1) |delta_x><delta_x|, and
/// (id (x) (sqrt(L) / (2 omega + 1)) <delta_x|) . Delta_black. The two agree
/// exactly on the kappa-point grid; off the grid the wrap-around of the
/// modular index leaves a finite gap, which is reported.
template <class Point>
ObservableProjector position_projector(const CircleSpace& s, Point x) {
  const double k = static_cast<double>(s.kappa());
  const Morphism delta = position_eigenstate(s, x);
  Morphism direct = (s.length() / k) * compose(delta, dagger(delta));
  const Morphism effect = dagger((std::sqrt(s.length()) / k) * delta);
  Morphism diagram = compose(tensor(identity(s.object()), effect), dagger(black_mult(s)));
  const double gap = operator_norm(direct - diagram);
  return {std::move(direct), std::move(diagram), gap};
}

inline ObservableProjector position_projector(const CircleSpace& s, double x) { return position_projector<double>(s, x); }

/// sqrt(L) eps_black f = <chi_0 | f>.
inline Scalar integrate(const CircleSpace& s, const Morphism& f) {
  return std::sqrt(s.length()) * compose(black_counit(s), f).scalar();
}

/// || mu_black(e_n (x) e_m) - e_{n (+) m} ||.
inline double momentum_translation(const CircleSpace& s, long n, long m) {
  const Morphism en = basis_state(s.object(), theta(n));
  const Morphism em = basis_state(s.object(), theta(m));
  const Morphism lhs = compose(black_mult(s), tensor(en, em));
  return vector_equiv(lhs, basis_state(s.object(), theta(oplus(n, m, s.omega()))));
}

/// || mu_white(sqrt(L) delta_x (x) sqrt(L) delta_y) - sqrt(L) delta_{x (+) y} ||.
inline double position_translation_residual(const CircleSpace& s, double x, double y) {
  const double r = std::sqrt(s.length());
  const Morphism lhs =
      compose(momentum_structure(s).mult, tensor(r * position_eigenstate(s, x), r * position_eigenstate(s, y)));
  return vector_equiv(lhs, r * position_eigenstate(s, s.add(x, y)));
}

/// || Delta_black(sqrt(L) delta_x) - sqrt(L) delta_x (x) sqrt(L) delta_x ||.
/// Zero on the grid points j L / kappa.
template <class Point>
double delta_copy_residual(const CircleSpace& s, Point x) {
  const Morphism d = std::sqrt(s.length()) * position_eigenstate(s, x);
  return vector_equiv(compose(dagger(black_mult(s)), d), tensor(d, d));
}

/// Operator-norm residuals of the three bialgebra laws between the white
/// (plane-wave) and black (group algebra) structures, and the largest Weyl
/// relation residual || S_n T_x - chi_n(x) T_x S_n || over all momenta n and
/// grid points x, where T_x = mu_white(sqrt(L) delta_x (x) -) and
/// S_n = mu_black(chi_n / sqrt(L) (x) -).
inline std::map<std::string, double> check_strong_complementarity(const CircleSpace& s) {
  using detail::Block;
  using detail::evaluate;
  using detail::sparse_operator_norm;
  const std::size_t k = s.kappa();
  const ClassicalStructure white = momentum_structure(s);
  const Block mu_b = Block::of(black_mult(s));
  const Block eta_b = Block::of(black_unit(s));
  const Block delta_w = Block::of(white.comult);
  const Block eps_w = Block::of(white.counit);
  const Block mu_w = Block::of(white.mult);
  const Block id = Block::id(k);
  const Block swap = Block::swap(k, k);

  std::map<std::string, double> r;
  r["bialgebra-comult-mult"] = sparse_operator_norm(
      evaluate({{mu_b}, {delta_w}}) - evaluate({{delta_w, delta_w}, {id, swap, id}, {mu_b, mu_b}}));
  r["bialgebra-comult-unit"] = sparse_operator_norm(evaluate({{eta_b}, {delta_w}}) - evaluate({{eta_b, eta_b}}));
  r["bialgebra-counit-mult"] = sparse_operator_norm(evaluate({{mu_b}, {eps_w}}) - evaluate({{eps_w, eps_w}}));

  std::vector<detail::SparseMatrix> shifts;
  shifts.reserve(k);
  for (long n = -s.omega(); n <= s.omega(); ++n)
    shifts.push_back(detail::to_sparse(momentum_shift(s, n, mu_b).matrix()));
  double worst = 0.0;
  for (std::size_t j = 0; j < k; ++j) {
    const GridPoint x{j};
    const detail::SparseMatrix t = detail::to_sparse(translation_operator(s, x, mu_w).matrix());
    for (long n = -s.omega(); n <= s.omega(); ++n) {
      const auto& sn = shifts[static_cast<std::size_t>(n + s.omega())];
      const detail::SparseMatrix lhs = sn * t;
      const detail::SparseMatrix rhs = s.chi(n, x) * (t * sn);
      worst = std::max(worst, sparse_operator_norm(lhs - rhs));
    }
  }
  r["weyl-ccr"] = worst;
  return r;
}

struct MixingResult {
  Morphism rho_prime;
  double distance;  // || rho' - id / kappa ||_op
};

/// Measures psi in the position observable on the kappa-point grid, then the
/// resulting mixture in the momentum observable.
inline MixingResult mixing_experiment(const CircleSpace& s, const Morphism& psi) {
  if (!psi.dom().is_unit() || !(psi.cod() == s.object())) throw DomainMismatch("psi must be a state of the circle");
  const double norm2 = psi.matrix().squaredNorm();
  if (std::abs(norm2 - 1.0) > 1e-12) throw NotNormalized("psi is not a unit vector");

  const auto k = static_cast<Eigen::Index>(s.kappa());
  const Matrix pure = psi.matrix() * psi.matrix().adjoint();
  Matrix rho = Matrix::Zero(k, k);
  const double scale = s.length() / static_cast<double>(k);
  for (std::size_t j = 0; j < s.kappa(); ++j) {
    const Vector d = position_eigenstate(s, GridPoint{j}).column();
    const Matrix q = scale * d * d.adjoint();
    rho += q * pure * q.adjoint();
  }
  Matrix rho_prime = Matrix::Zero(k, k);
  for (long n = -s.omega(); n <= s.omega(); ++n) {
    const Vector chi = momentum_eigenstate(s, n).column();
    const Matrix p = (chi * chi.adjoint()) / s.length();
    rho_prime += p * rho * p.adjoint();
  }
  const Matrix mixed = Matrix::Identity(k, k) / static_cast<double>(k);
  const double distance = detail::spectral_norm(rho_prime - mixed);
  return {Morphism(s.object(), s.object(), std::move(rho_prime)), distance};
}

/// Haar-random unit state from a seeded generator.
inline Morphism random_unit_state(const CircleSpace& s, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  Vector v(static_cast<Eigen::Index>(s.kappa()));
  for (auto& c : v) c = Scalar(gauss(rng), gauss(rng));
  v.normalize();
  return state(s.object(), v);
}

}  // namespace starhilb
