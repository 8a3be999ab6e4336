#pragma once

// Objects and morphisms of the truncated category: finite-dimensional spaces
// carrying a chosen orthonormal basis, and matrices between them.

#include "starhilb/detail/linalg.hpp"
#include "starhilb/errors.hpp"

#include <cstddef>
#include <memory>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace starhilb {

/// Tolerance used for every "exact" algebraic law unless a caller overrides it.
inline constexpr double kExactTolerance = 1e-12;

class TruncObject;

struct StandardBasis {
  friend bool operator==(const StandardBasis&, const StandardBasis&) = default;
};

/// Plane-wave basis of L^2 on a circle of circumference `length`, indices
/// -omega..+omega ordered by the theta bijection.
struct FourierBasis {
  double length = 1.0;
  int omega = 0;
  friend bool operator==(const FourierBasis&, const FourierBasis&) = default;
};

/// Chosen basis given as the columns of a unitary change-of-basis matrix.
struct CustomBasis {
  std::shared_ptr<const Matrix> change;
  friend bool operator==(const CustomBasis& a, const CustomBasis& b) {
    if (a.change == b.change) return true;
    if (!a.change || !b.change) return false;
    return a.change->rows() == b.change->rows() && a.change->cols() == b.change->cols() &&
           *a.change == *b.change;
  }
};

/// Tensor product of two or more non-unit objects, flattened.
struct ProductBasis {
  std::shared_ptr<const std::vector<TruncObject>> factors;
};

using BasisTag = std::variant<StandardBasis, FourierBasis, CustomBasis, ProductBasis>;

class TruncObject {
 public:
  static TruncObject standard(std::size_t kappa, std::string label = {}) {
    if (kappa < 1) throw ShapeMismatch("truncation dimension must be at least 1");
    return TruncObject(kappa, std::move(label), StandardBasis{});
  }

  static TruncObject fourier(double length, int omega, std::string label = {}) {
    if (!(length > 0.0)) throw ShapeMismatch("circumference must be positive");
    if (omega < 0) throw ShapeMismatch("omega must be non-negative");
    return TruncObject(static_cast<std::size_t>(2 * omega + 1), std::move(label),
                       FourierBasis{length, omega});
  }

  /// Throws NotUnitary unless `change` is square and unitary to `tolerance`.
  static TruncObject custom(Matrix change, std::string label = {},
                            double tolerance = kExactTolerance) {
    if (change.rows() != change.cols() || change.rows() < 1)
      throw ShapeMismatch("change-of-basis matrix must be square");
    const Matrix defect = change.adjoint() * change - Matrix::Identity(change.rows(), change.cols());
    if (detail::spectral_norm(defect) > tolerance)
      throw NotUnitary("change-of-basis matrix is not unitary");
    const auto kappa = static_cast<std::size_t>(change.rows());
    return TruncObject(kappa, std::move(label),
                       CustomBasis{std::make_shared<const Matrix>(std::move(change))});
  }

  /// The monoidal unit: a one-dimensional standard object.
  static TruncObject unit() { return TruncObject(1, "I", StandardBasis{}); }

  std::size_t kappa() const { return kappa_; }
  const std::string& label() const { return label_; }
  const BasisTag& basis() const { return basis_; }
  bool is_unit() const { return kappa_ == 1 && std::holds_alternative<StandardBasis>(basis_); }

  /// Non-unit tensor factors, outermost first. A non-product object is its
  /// own single factor; the unit has none.
  std::vector<TruncObject> factors() const {
    if (is_unit()) return {};
    if (const auto* p = std::get_if<ProductBasis>(&basis_)) return *p->factors;
    return {*this};
  }

  friend bool operator==(const TruncObject& a, const TruncObject& b);

 private:
  friend TruncObject tensor_obj(const TruncObject& a, const TruncObject& b);

  TruncObject(std::size_t kappa, std::string label, BasisTag basis)
      : kappa_(kappa), label_(std::move(label)), basis_(std::move(basis)) {}

  std::size_t kappa_;
  std::string label_;
  BasisTag basis_;
};

inline bool operator==(const TruncObject& a, const TruncObject& b) {
  if (a.kappa_ != b.kappa_ || a.basis_.index() != b.basis_.index()) return false;
  if (const auto* pa = std::get_if<ProductBasis>(&a.basis_)) {
    const auto& pb = std::get<ProductBasis>(b.basis_);
    return *pa->factors == *pb.factors;
  }
  return std::visit(
      [&](const auto& lhs) {
        using T = std::decay_t<decltype(lhs)>;
        if constexpr (std::is_same_v<T, ProductBasis>) {
          return false;
        } else {
          return lhs == std::get<T>(b.basis_);
        }
      },
      a.basis_);
}

/// Tensor product of objects. Strictly associative and unital: factors are
/// flattened, the unit is dropped and adjacent standard factors merge.
inline TruncObject tensor_obj(const TruncObject& a, const TruncObject& b) {
  if (a.is_unit()) return b;
  if (b.is_unit()) return a;
  std::vector<TruncObject> merged;
  for (const auto& part : {a.factors(), b.factors()}) {
    for (const auto& f : part) {
      if (!merged.empty() && std::holds_alternative<StandardBasis>(merged.back().basis()) &&
          std::holds_alternative<StandardBasis>(f.basis())) {
        merged.back() = TruncObject::standard(merged.back().kappa() * f.kappa());
      } else {
        merged.push_back(f);
      }
    }
  }
  const std::size_t kappa = a.kappa() * b.kappa();
  std::string label = a.label().empty() || b.label().empty() ? std::string{}
                                                             : a.label() + "(x)" + b.label();
  if (merged.size() == 1) return TruncObject(kappa, std::move(label), merged.front().basis());
  return TruncObject(kappa, std::move(label),
                     ProductBasis{std::make_shared<const std::vector<TruncObject>>(std::move(merged))});
}

/// 1-based position in a two-factor product basis.
struct IndexPair {
  std::size_t n = 1;
  std::size_t m = 1;
  friend bool operator==(const IndexPair&, const IndexPair&) = default;
};

/// Flat 1-based index of the pair (n, m) in a product whose second factor has
/// dimension nu: (n - 1) * nu + m.
inline std::size_t varsigma(std::size_t n, std::size_t m, std::size_t nu) {
  if (nu < 1 || n < 1 || m < 1 || m > nu) throw IndexOutOfRange("varsigma: index out of range");
  return (n - 1) * nu + m;
}

inline IndexPair varsigma_inv(std::size_t k, std::size_t nu) {
  if (nu < 1 || k < 1) throw IndexOutOfRange("varsigma_inv: index out of range");
  return {(k - 1) / nu + 1, (k - 1) % nu + 1};
}

/// A typed matrix `cod.kappa() x dom.kappa()`. Immutable once built.
class Morphism {
 public:
  Morphism(TruncObject dom, TruncObject cod, Matrix mat)
      : dom_(std::move(dom)), cod_(std::move(cod)), mat_(std::move(mat)) {
    if (static_cast<std::size_t>(mat_.rows()) != cod_.kappa() ||
        static_cast<std::size_t>(mat_.cols()) != dom_.kappa())
      throw ShapeMismatch("matrix shape does not match (cod.kappa, dom.kappa)");
  }

  const TruncObject& dom() const { return dom_; }
  const TruncObject& cod() const { return cod_; }
  const Matrix& matrix() const { return mat_; }

  /// Entry <f_m| F |e_n>, 1-based.
  Scalar entry(std::size_t m, std::size_t n) const {
    if (m < 1 || n < 1 || m > cod_.kappa() || n > dom_.kappa())
      throw IndexOutOfRange("morphism entry out of range");
    return mat_(static_cast<Eigen::Index>(m - 1), static_cast<Eigen::Index>(n - 1));
  }

  /// Value of a scalar morphism unit -> unit.
  Scalar scalar() const {
    if (!dom_.is_unit() || !cod_.is_unit()) throw DomainMismatch("not a scalar morphism");
    return mat_(0, 0);
  }

  /// Coefficients of a state unit -> cod.
  Vector column() const {
    if (!dom_.is_unit()) throw DomainMismatch("not a state");
    return mat_.col(0);
  }

 private:
  TruncObject dom_;
  TruncObject cod_;
  Matrix mat_;
};

inline Morphism identity(const TruncObject& obj) {
  const auto k = static_cast<Eigen::Index>(obj.kappa());
  return Morphism(obj, obj, Matrix::Identity(k, k));
}

/// g after f.
inline Morphism compose(const Morphism& g, const Morphism& f) {
  if (!(f.cod() == g.dom())) throw DomainMismatch("compose: codomain of f differs from domain of g");
  return Morphism(f.dom(), g.cod(), g.matrix() * f.matrix());
}

/// Kronecker product, ordered by varsigma: the first factor is the slow index.
inline Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

inline Morphism tensor(const Morphism& f, const Morphism& g) {
  return Morphism(tensor_obj(f.dom(), g.dom()), tensor_obj(f.cod(), g.cod()),
                  kron(f.matrix(), g.matrix()));
}

inline Morphism dagger(const Morphism& f) { return Morphism(f.cod(), f.dom(), f.matrix().adjoint()); }

/// Symmetry a (x) b -> b (x) a: sends basis vector varsigma(n, m) to varsigma(m, n).
inline Morphism braiding(const TruncObject& a, const TruncObject& b) {
  const std::size_t ka = a.kappa();
  const std::size_t kb = b.kappa();
  const auto dim = static_cast<Eigen::Index>(ka * kb);
  Matrix p = Matrix::Zero(dim, dim);
  for (std::size_t n = 1; n <= ka; ++n)
    for (std::size_t m = 1; m <= kb; ++m)
      p(static_cast<Eigen::Index>(varsigma(m, n, ka) - 1),
        static_cast<Eigen::Index>(varsigma(n, m, kb) - 1)) = 1.0;
  return Morphism(tensor_obj(a, b), tensor_obj(b, a), std::move(p));
}

// Linear structure on homsets.

inline Morphism operator+(const Morphism& a, const Morphism& b) {
  if (!(a.dom() == b.dom()) || !(a.cod() == b.cod())) throw DomainMismatch("sum of differently typed morphisms");
  return Morphism(a.dom(), a.cod(), a.matrix() + b.matrix());
}

inline Morphism operator-(const Morphism& a, const Morphism& b) {
  if (!(a.dom() == b.dom()) || !(a.cod() == b.cod()))
    throw DomainMismatch("difference of differently typed morphisms");
  return Morphism(a.dom(), a.cod(), a.matrix() - b.matrix());
}

inline Morphism operator*(Scalar s, const Morphism& f) { return Morphism(f.dom(), f.cod(), s * f.matrix()); }

/// State unit -> obj with the given coefficients in the chosen basis.
inline Morphism state(const TruncObject& obj, const Vector& coeffs) {
  if (static_cast<std::size_t>(coeffs.size()) != obj.kappa())
    throw ShapeMismatch("state length does not match kappa");
  return Morphism(TruncObject::unit(), obj, Matrix(coeffs));
}

/// Chosen basis vector |e_n>, 1-based.
inline Morphism basis_state(const TruncObject& obj, std::size_t n) {
  if (n < 1 || n > obj.kappa()) throw IndexOutOfRange("basis index out of range");
  Vector v = Vector::Zero(static_cast<Eigen::Index>(obj.kappa()));
  v(static_cast<Eigen::Index>(n - 1)) = 1.0;
  return state(obj, v);
}

inline Morphism scalar_morphism(Scalar s) {
  return Morphism(TruncObject::unit(), TruncObject::unit(), Matrix::Constant(1, 1, s));
}

}  // namespace starhilb
