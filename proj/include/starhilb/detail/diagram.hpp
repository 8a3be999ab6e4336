#pragma once

// Column-by-column evaluation of string diagrams over sparse matrices.
//
// A diagram is a stack of layers; each layer is a tensor product of blocks
// (an identity wire or a matrix). Evaluating the stack on the identity of the
// input space produces the composite map one basis column at a time, so the
// cost scales with the number of nonzeros that actually flow through the
// diagram instead of with the dense size of maps like mu (x) id on H^{(x)3}.

#include "starhilb/core.hpp"

#include <Eigen/Sparse>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

namespace starhilb::detail {

using SparseMatrix = Eigen::SparseMatrix<Scalar, Eigen::ColMajor, std::int64_t>;
using Index = std::int64_t;

inline SparseMatrix to_sparse(const Matrix& m) {
  std::vector<Eigen::Triplet<Scalar, Index>> trips;
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      if (m(i, j) != Scalar(0)) trips.emplace_back(i, j, m(i, j));
  SparseMatrix s(m.rows(), m.cols());
  s.setFromTriplets(trips.begin(), trips.end());
  return s;
}

inline void drop_exact_zeros(SparseMatrix& s) {
  s.prune([](const Index&, const Index&, const Scalar& v) { return v != Scalar(0); });
}

/// One tensor factor of a layer: an identity wire of some dimension, or a matrix.
struct Block {
  Index rows = 1;
  Index cols = 1;
  std::optional<SparseMatrix> mat;

  static Block id(std::size_t dim) { return {static_cast<Index>(dim), static_cast<Index>(dim), std::nullopt}; }
  static Block of(const Morphism& f) { return of(f.matrix()); }
  static Block of(const Matrix& m) { return {m.rows(), m.cols(), to_sparse(m)}; }

  /// Symmetry A (x) B -> B (x) A for dim A = a, dim B = b.
  static Block swap(std::size_t a, std::size_t b) {
    const auto ia = static_cast<Index>(a), ib = static_cast<Index>(b);
    std::vector<Eigen::Triplet<Scalar, Index>> trips;
    trips.reserve(a * b);
    for (Index n = 0; n < ia; ++n)
      for (Index m = 0; m < ib; ++m) trips.emplace_back(m * ia + n, n * ib + m, 1.0);
    SparseMatrix s(ia * ib, ia * ib);
    s.setFromTriplets(trips.begin(), trips.end());
    return {ia * ib, ia * ib, std::move(s)};
  }
};

using Layer = std::vector<Block>;

inline Index layer_cols(const Layer& layer) {
  Index c = 1;
  for (const auto& b : layer) c *= b.cols;
  return c;
}

inline Index layer_rows(const Layer& layer) {
  Index r = 1;
  for (const auto& b : layer) r *= b.rows;
  return r;
}

/// (block_1 (x) ... (x) block_k) * x, with the first block as the slowest index.
inline SparseMatrix apply_layer(const Layer& layer, const SparseMatrix& x) {
  if (layer_cols(layer) != x.rows()) throw DomainMismatch("diagram layer does not match its input");
  const std::size_t k = layer.size();

  SparseMatrix out(layer_rows(layer), x.cols());
  std::vector<Index> in_idx(k);
  std::vector<std::pair<Index, Scalar>> column, partial, next;
  for (Index c = 0; c < x.outerSize(); ++c) {
    column.clear();
    for (SparseMatrix::InnerIterator it(x, c); it; ++it) {
      Index flat = it.row();
      for (std::size_t b = k; b-- > 0;) {
        in_idx[b] = flat % layer[b].cols;
        flat /= layer[b].cols;
      }
      partial.assign(1, {0, it.value()});
      for (std::size_t b = 0; b < k; ++b) {
        const Block& blk = layer[b];
        next.clear();
        if (!blk.mat) {
          for (const auto& [row, v] : partial) next.emplace_back(row * blk.rows + in_idx[b], v);
        } else {
          for (const auto& [row, v] : partial)
            for (SparseMatrix::InnerIterator bi(*blk.mat, in_idx[b]); bi; ++bi)
              next.emplace_back(row * blk.rows + bi.row(), v * bi.value());
        }
        partial.swap(next);
        if (partial.empty()) break;
      }
      column.insert(column.end(), partial.begin(), partial.end());
    }
    std::sort(column.begin(), column.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    out.startVec(c);
    for (std::size_t i = 0; i < column.size();) {
      const Index row = column[i].first;
      Scalar v = 0;
      for (; i < column.size() && column[i].first == row; ++i) v += column[i].second;
      if (v != Scalar(0)) out.insertBack(row, c) = v;
    }
  }
  out.finalize();
  return out;
}

/// Removes empty rows; singular values are unchanged.
inline SparseMatrix drop_empty_rows(const SparseMatrix& d) {
  std::vector<Index> rows;
  rows.reserve(static_cast<std::size_t>(d.nonZeros()));
  for (Index c = 0; c < d.outerSize(); ++c)
    for (SparseMatrix::InnerIterator it(d, c); it; ++it) rows.push_back(it.row());
  std::sort(rows.begin(), rows.end());
  rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
  if (static_cast<Index>(rows.size()) == d.rows()) return d;
  std::vector<Eigen::Triplet<Scalar, Index>> trips;
  trips.reserve(static_cast<std::size_t>(d.nonZeros()));
  for (Index c = 0; c < d.outerSize(); ++c)
    for (SparseMatrix::InnerIterator it(d, c); it; ++it) {
      const auto pos = std::lower_bound(rows.begin(), rows.end(), it.row()) - rows.begin();
      trips.emplace_back(static_cast<Index>(pos), c, it.value());
    }
  SparseMatrix out(static_cast<Index>(rows.size()), d.cols());
  out.setFromTriplets(trips.begin(), trips.end());
  return out;
}

inline SparseMatrix sparse_identity(Index dim) {
  SparseMatrix id(dim, dim);
  id.setIdentity();
  return id;
}

/// Composite of the layers, the first layer applied first.
inline SparseMatrix evaluate(const std::vector<Layer>& layers) {
  if (layers.empty()) throw DomainMismatch("empty diagram");
  SparseMatrix x = sparse_identity(layer_cols(layers.front()));
  for (const auto& layer : layers) x = apply_layer(layer, x);
  return x;
}

/// Largest singular value of a sparse matrix.
inline double sparse_operator_norm(SparseMatrix d) {
  drop_exact_zeros(d);
  if (d.nonZeros() == 0) return 0.0;
  d = drop_empty_rows(d);
  d = SparseMatrix(drop_empty_rows(SparseMatrix(d.adjoint())).adjoint());

  // A matrix with at most one nonzero per row and per column is a weighted
  // partial permutation: its singular values are the moduli of its entries.
  {
    std::vector<int> row_count(static_cast<std::size_t>(d.rows()), 0);
    bool monomial = true;
    for (Index c = 0; c < d.outerSize() && monomial; ++c) {
      int in_col = 0;
      for (SparseMatrix::InnerIterator it(d, c); it; ++it) {
        if (++in_col > 1 || ++row_count[static_cast<std::size_t>(it.row())] > 1) monomial = false;
      }
    }
    if (monomial) {
      double best = 0.0;
      for (Index c = 0; c < d.outerSize(); ++c)
        for (SparseMatrix::InnerIterator it(d, c); it; ++it) best = std::max(best, std::abs(it.value()));
      return best;
    }
  }

  if (d.rows() * d.cols() <= (Index{1} << 22)) return spectral_norm(Matrix(d.toDense()));

  const Index small = std::min(d.rows(), d.cols());
  if (small <= 2048) {
    const SparseMatrix gram = d.rows() <= d.cols() ? SparseMatrix(d * d.adjoint()) : SparseMatrix(d.adjoint() * d);
    Eigen::SelfAdjointEigenSolver<Matrix> eig(Matrix(gram.toDense()), Eigen::EigenvaluesOnly);
    return std::sqrt(std::max(0.0, eig.eigenvalues().maxCoeff()));
  }

  // Power iteration on d^* d from a fixed start vector.
  Vector v(d.cols());
  for (Index i = 0; i < d.cols(); ++i) v(i) = Scalar(1.0 + 1e-3 * static_cast<double>(i % 7), 0.0);
  v.normalize();
  double sigma = 0.0;
  for (int iter = 0; iter < 5000; ++iter) {
    Vector w = d.adjoint() * (d * v);
    const double lambda = w.norm();
    if (lambda == 0.0) return 0.0;
    v = w / lambda;
    const double next = std::sqrt(lambda);
    if (std::abs(next - sigma) <= 1e-14 * next) return next;
    sigma = next;
  }
  return sigma;
}

}  // namespace starhilb::detail
