#include "test_util.hpp"

#include <starhilb/analysis.hpp>
#include <starhilb/detail/diagram.hpp>

#include <gtest/gtest.h>

#include <random>

using namespace starhilb;
using namespace starhilb::detail;

TEST(Diagram, LayerMatchesDenseKronecker) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t a = 1 + rng() % 3, b = 1 + rng() % 3, c = 1 + rng() % 3, d = 1 + rng() % 3;
    const oracle::Mat f = oracle::random(rng, b, a), g = oracle::random(rng, d, c);
    const SparseMatrix out = evaluate({{Block::of(testutil::to_eigen(f)), Block::id(2), Block::of(testutil::to_eigen(g))}});
    oracle::Mat id2(2, 2);
    id2(0, 0) = id2(1, 1) = 1.0;
    EXPECT_LT(testutil::gap(Matrix(out.toDense()), oracle::kron(oracle::kron(f, id2), g)), 1e-15);
  }
}

TEST(Diagram, StackComposesInOrder) {
  std::mt19937_64 rng(22);
  const oracle::Mat f = oracle::random(rng, 3, 2), g = oracle::random(rng, 4, 3);
  const SparseMatrix out = evaluate({{Block::of(testutil::to_eigen(f))}, {Block::of(testutil::to_eigen(g))}});
  EXPECT_LT(testutil::gap(Matrix(out.toDense()), oracle::matmul(g, f)), 1e-14);
  EXPECT_THROW(evaluate({{Block::of(testutil::to_eigen(f))}, {Block::of(testutil::to_eigen(f))}}), DomainMismatch);
}

TEST(Diagram, SparseNormMatchesDense) {
  std::mt19937_64 rng(23);
  const Matrix dense = testutil::to_eigen(oracle::random(rng, 6, 9));
  EXPECT_NEAR(sparse_operator_norm(to_sparse(dense)), spectral_norm(dense), 1e-12);
  Matrix perm = Matrix::Zero(5, 5);
  perm(0, 3) = Scalar(0, 2);
  perm(3, 1) = -0.5;
  EXPECT_DOUBLE_EQ(sparse_operator_norm(to_sparse(perm)), 2.0);
  EXPECT_EQ(sparse_operator_norm(SparseMatrix(4, 4)), 0.0);
}

TEST(Diagram, LargeSparseNormRoutes) {
  // Block-diagonal with a known top singular value, large enough to skip the dense path.
  const Index n = 3000;
  std::vector<Eigen::Triplet<Scalar, Index>> trips;
  for (Index i = 0; i + 1 < n; i += 2) {
    trips.emplace_back(i, i, 1.0);
    trips.emplace_back(i, i + 1, 1.0);
    trips.emplace_back(i + 1, i, 1.0);
    trips.emplace_back(i + 1, i + 1, -1.0);
  }
  SparseMatrix m(n, n);
  m.setFromTriplets(trips.begin(), trips.end());
  EXPECT_NEAR(sparse_operator_norm(m), std::sqrt(2.0), 1e-10);
  SparseMatrix wide(2, 3000000);
  wide.insert(0, 0) = 1.0;
  wide.insert(0, 1) = 1.0;
  wide.insert(1, 5) = 3.0;
  EXPECT_NEAR(sparse_operator_norm(wide), 3.0, 1e-12);
}
