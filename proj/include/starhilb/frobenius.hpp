#pragma once

// Classical structures (commutative dagger-Frobenius algebras copying an
// orthonormal family), cups and caps, traces and the Hilbert-Schmidt pairing.

#include "starhilb/analysis.hpp"
#include "starhilb/core.hpp"
#include "starhilb/detail/diagram.hpp"

#include <json.hpp>

#include <array>
#include <map>
#include <string>
#include <string_view>
#include <utility>

namespace starhilb {

enum class Strictness { Strict, Weak };

/// (comult, counit, mult, unit) on `obj`, with mult = comult^dagger and
/// unit = counit^dagger.
struct ClassicalStructure {
  TruncObject obj;
  Morphism comult;  // obj -> obj (x) obj
  Morphism counit;  // obj -> I
  Morphism mult;    // obj (x) obj -> obj
  Morphism unit;    // I -> obj
  Strictness strictness;
};

namespace detail {

// Column n of the result is f_n (x) f_n.
inline Matrix column_squares(const Matrix& family) {
  const Eigen::Index k = family.rows();
  Matrix out(k * k, family.cols());
  for (Eigen::Index n = 0; n < family.cols(); ++n)
    for (Eigen::Index i = 0; i < k; ++i) out.col(n).segment(i * k, k) = family(i, n) * family.col(n);
  return out;
}

inline bool is_chosen_copy(const Morphism& mult) {
  const Eigen::Index k = mult.matrix().rows();
  if (mult.matrix().cols() != k * k) return false;
  for (Eigen::Index r = 0; r < k; ++r)
    for (Eigen::Index c = 0; c < k * k; ++c) {
      const Scalar expected = (c == r * k + r) ? Scalar(1) : Scalar(0);
      if (mult.matrix()(r, c) != expected) return false;
    }
  return true;
}

}  // namespace detail

/// The classical structure copying the columns of `family` (kappa rows, at most
/// kappa orthonormal columns). Strict exactly when the family is the chosen
/// basis itself; any other family, complete or not, is reported as Weak.
inline ClassicalStructure classical_structure(const TruncObject& obj, const Matrix& family,
                                              double tolerance = kExactTolerance) {
  const auto k = static_cast<Eigen::Index>(obj.kappa());
  if (family.rows() != k || family.cols() < 1 || family.cols() > k)
    throw ShapeMismatch("family must have kappa rows and between 1 and kappa columns");
  const Matrix gram = family.adjoint() * family;
  if (detail::spectral_norm(gram - Matrix::Identity(family.cols(), family.cols())) > tolerance)
    throw NotOrthonormal("family is not orthonormal");

  const bool strict = family.cols() == k && family == Matrix::Identity(k, k);
  const TruncObject obj2 = tensor_obj(obj, obj);
  Matrix squares = detail::column_squares(family);
  Morphism comult(obj, obj2, strict ? std::move(squares) : Matrix(squares * family.adjoint()));
  Morphism counit(obj, TruncObject::unit(), Matrix(family.rowwise().sum().adjoint()));
  Morphism mult = dagger(comult);
  Morphism unit = dagger(counit);
  return {obj, std::move(comult), std::move(counit), std::move(mult), std::move(unit),
          strict ? Strictness::Strict : Strictness::Weak};
}

/// The structure of the object's own chosen basis.
inline ClassicalStructure chosen_structure(const TruncObject& obj) {
  const auto k = static_cast<Eigen::Index>(obj.kappa());
  return classical_structure(obj, Matrix::Identity(k, k));
}

/// Completes a monoid (mult, unit) to a dagger-Frobenius candidate. Strict only
/// if it coincides with the chosen-basis copying structure.
inline ClassicalStructure structure_from_monoid(Morphism mult, Morphism unit) {
  const TruncObject obj = mult.cod();
  if (!(mult.dom() == tensor_obj(obj, obj)) || !(unit.cod() == obj) || !unit.dom().is_unit())
    throw DomainMismatch("mult must be obj(x)obj -> obj and unit I -> obj");
  const bool strict = detail::is_chosen_copy(mult) && unit.matrix() == Matrix::Ones(unit.matrix().rows(), 1);
  Morphism comult = dagger(mult);
  Morphism counit = dagger(unit);
  return {obj, std::move(comult), std::move(counit), std::move(mult), std::move(unit),
          strict ? Strictness::Strict : Strictness::Weak};
}

inline constexpr std::array<std::string_view, 7> kAxiomNames = {
    "associativity", "commutativity",   "frobenius-left", "frobenius-right",
    "speciality",    "unit-left",       "unit-right"};

using AxiomReport = std::map<std::string, double>;

/// Operator-norm residual of LHS - RHS for each of the seven axioms.
inline AxiomReport check_axioms(const ClassicalStructure& cs) {
  using detail::Block;
  using detail::evaluate;
  using detail::sparse_operator_norm;
  const std::size_t k = cs.obj.kappa();
  const Block mu = Block::of(cs.mult);
  const Block delta = Block::of(cs.comult);
  const Block eta = Block::of(cs.unit);
  const Block id = Block::id(k);
  const Block swap = Block::swap(k, k);
  const auto ident = detail::sparse_identity(static_cast<detail::Index>(k));
  const auto delta_mu = evaluate({{mu}, {delta}});

  AxiomReport r;
  r["associativity"] = sparse_operator_norm(evaluate({{mu, id}, {mu}}) - evaluate({{id, mu}, {mu}}));
  r["commutativity"] = sparse_operator_norm(evaluate({{swap}, {mu}}) - evaluate({{mu}}));
  r["unit-left"] = sparse_operator_norm(evaluate({{eta, id}, {mu}}) - ident);
  r["unit-right"] = sparse_operator_norm(evaluate({{id, eta}, {mu}}) - ident);
  r["frobenius-left"] = sparse_operator_norm(evaluate({{id, delta}, {mu, id}}) - delta_mu);
  r["frobenius-right"] = sparse_operator_norm(evaluate({{delta, id}, {id, mu}}) - delta_mu);
  r["speciality"] = sparse_operator_norm(evaluate({{delta}, {mu}}) - ident);
  return r;
}

inline nlohmann::json axioms_json(const AxiomReport& report) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [name, residual] : report) j[name] = residual;
  return j;
}

struct QuasiSpeciality {
  Scalar factor;    // trace(mu . delta) / kappa
  double residual;  // || mu . delta - factor * id ||_op
};

inline QuasiSpeciality quasi_speciality(const ClassicalStructure& cs) {
  const Matrix md = cs.mult.matrix() * cs.comult.matrix();
  const Scalar c = md.trace() / static_cast<double>(cs.obj.kappa());
  const Matrix defect = md - c * Matrix::Identity(md.rows(), md.cols());
  return {c, detail::spectral_norm(defect)};
}

// Compact structure.

/// sum_n |e_n> (x) |e_n>.
inline Morphism cup(const TruncObject& obj) {
  const auto k = static_cast<Eigen::Index>(obj.kappa());
  Matrix m = Matrix::Zero(k * k, 1);
  for (Eigen::Index n = 0; n < k; ++n) m(n * k + n, 0) = 1.0;
  return Morphism(TruncObject::unit(), tensor_obj(obj, obj), std::move(m));
}

inline Morphism cap(const TruncObject& obj) { return dagger(cup(obj)); }

struct CompactStructure {
  TruncObject obj;
  Morphism cup;
  Morphism cap;
};

inline CompactStructure compact_structure(const TruncObject& obj) { return {obj, cup(obj), cap(obj)}; }

struct SnakeResiduals {
  double left;   // (id (x) cap)(cup (x) id) - id
  double right;  // (cap (x) id)(id (x) cup) - id
};

inline SnakeResiduals snake_residuals(const CompactStructure& c) {
  using detail::Block;
  const std::size_t k = c.obj.kappa();
  const Block id = Block::id(k);
  const auto ident = detail::sparse_identity(static_cast<detail::Index>(k));
  const double left = detail::sparse_operator_norm(
      detail::evaluate({{Block::of(c.cup), id}, {id, Block::of(c.cap)}}) - ident);
  const double right = detail::sparse_operator_norm(
      detail::evaluate({{id, Block::of(c.cup)}, {Block::of(c.cap), id}}) - ident);
  return {left, right};
}

/// Transpose of f: A -> B obtained by bending wires, (cap_B (x) id_A)(id_B (x) f (x) id_A)(id_B (x) cup_A).
inline Morphism transpose_via_compact(const Morphism& f) {
  using detail::Block;
  const std::size_t ka = f.dom().kappa();
  const std::size_t kb = f.cod().kappa();
  const auto composite = detail::evaluate({{Block::id(kb), Block::of(cup(f.dom()))},
                                           {Block::id(kb), Block::of(f), Block::id(ka)},
                                           {Block::of(cap(f.cod())), Block::id(ka)}});
  return Morphism(f.cod(), f.dom(), Matrix(composite.toDense()));
}

// Traces.

inline Scalar trace(const Morphism& f) {
  if (!(f.dom() == f.cod())) throw DomainMismatch("trace of a non-endomorphism");
  return f.matrix().trace();
}

/// Dimensions (dim H, dim G, dim K) for a map H (x) K -> G (x) K.
struct PartialTraceDims {
  std::size_t h;
  std::size_t g;
  std::size_t k;
};

namespace detail {

inline Matrix partial_trace_matrix(const Matrix& g, const PartialTraceDims& d) {
  if (d.h < 1 || d.g < 1 || d.k < 1 || static_cast<std::size_t>(g.cols()) != d.h * d.k ||
      static_cast<std::size_t>(g.rows()) != d.g * d.k)
    throw ShapeNotFactorable("matrix does not factor as (G(x)K) x (H(x)K)");
  Matrix out = Matrix::Zero(static_cast<Eigen::Index>(d.g), static_cast<Eigen::Index>(d.h));
  for (std::size_t m = 1; m <= d.g; ++m)
    for (std::size_t n = 1; n <= d.h; ++n) {
      Scalar acc = 0;
      for (std::size_t k = 1; k <= d.k; ++k)
        acc += g(static_cast<Eigen::Index>(varsigma(m, k, d.k) - 1),
                 static_cast<Eigen::Index>(varsigma(n, k, d.k) - 1));
      out(static_cast<Eigen::Index>(m - 1), static_cast<Eigen::Index>(n - 1)) = acc;
    }
  return out;
}

}  // namespace detail

/// Traces out the last factor K of g: H (x) K -> G (x) K. The result is typed
/// between standard objects of dimensions dims.h and dims.g.
inline Morphism partial_trace(const Morphism& g, const PartialTraceDims& dims) {
  return Morphism(TruncObject::standard(dims.h), TruncObject::standard(dims.g),
                  detail::partial_trace_matrix(g.matrix(), dims));
}

/// Typed variant: requires g.dom == h (x) k and g.cod == out (x) k.
inline Morphism partial_trace(const Morphism& g, const TruncObject& h, const TruncObject& out,
                              const TruncObject& k) {
  if (!(g.dom() == tensor_obj(h, k)) || !(g.cod() == tensor_obj(out, k)))
    throw ShapeNotFactorable("morphism is not typed H(x)K -> G(x)K for the given objects");
  return Morphism(h, out, detail::partial_trace_matrix(g.matrix(), {h.kappa(), out.kappa(), k.kappa()}));
}

/// Tr[g^dagger f].
inline Scalar hs_inner(const Morphism& g, const Morphism& f) {
  if (!(g.dom() == f.dom()) || !(g.cod() == f.cod())) throw DomainMismatch("hs_inner of differently typed morphisms");
  return (g.matrix().conjugate().cwiseProduct(f.matrix())).sum();
}

}  // namespace starhilb
