#pragma once

// Brute-force reference implementations used only by the tests. None of these
// call into the library's linear algebra.

#include <complex>
#include <cstddef>
#include <cmath>
#include <random>
#include <vector>

namespace oracle {

using C = std::complex<double>;

/// Row-major dense matrix with explicit loops.
struct Mat {
  std::size_t rows = 0, cols = 0;
  std::vector<C> a;

  Mat() = default;
  Mat(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c) {}
  C& operator()(std::size_t i, std::size_t j) { return a[i * cols + j]; }
  const C& operator()(std::size_t i, std::size_t j) const { return a[i * cols + j]; }
};

template <class M>
Mat from(const M& m) {
  Mat out(static_cast<std::size_t>(m.rows()), static_cast<std::size_t>(m.cols()));
  for (std::size_t i = 0; i < out.rows; ++i)
    for (std::size_t j = 0; j < out.cols; ++j) out(i, j) = m(static_cast<long>(i), static_cast<long>(j));
  return out;
}

inline Mat matmul(const Mat& x, const Mat& y) {
  Mat out(x.rows, y.cols);
  for (std::size_t i = 0; i < x.rows; ++i)
    for (std::size_t j = 0; j < y.cols; ++j) {
      C acc = 0;
      for (std::size_t k = 0; k < x.cols; ++k) acc += x(i, k) * y(k, j);
      out(i, j) = acc;
    }
  return out;
}

/// (x (x) y)[(i, k), (j, l)] = x[i, j] y[k, l], first factor slow.
inline Mat kron(const Mat& x, const Mat& y) {
  Mat out(x.rows * y.rows, x.cols * y.cols);
  for (std::size_t i = 0; i < x.rows; ++i)
    for (std::size_t k = 0; k < y.rows; ++k)
      for (std::size_t j = 0; j < x.cols; ++j)
        for (std::size_t l = 0; l < y.cols; ++l) out(i * y.rows + k, j * y.cols + l) = x(i, j) * y(k, l);
  return out;
}

inline Mat adjoint(const Mat& x) {
  Mat out(x.cols, x.rows);
  for (std::size_t i = 0; i < x.rows; ++i)
    for (std::size_t j = 0; j < x.cols; ++j) out(j, i) = std::conj(x(i, j));
  return out;
}

inline Mat sub(const Mat& x, const Mat& y) {
  Mat out(x.rows, x.cols);
  for (std::size_t i = 0; i < x.a.size(); ++i) out.a[i] = x.a[i] - y.a[i];
  return out;
}

inline double max_abs(const Mat& x) {
  double m = 0;
  for (const C& v : x.a) m = std::max(m, std::abs(v));
  return m;
}

/// Largest singular value by power iteration on x^* x with several random restarts.
inline double power_norm(const Mat& x, int iterations = 10000, int restarts = 20, unsigned seed = 12345) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  double best = 0;
  for (int r = 0; r < restarts; ++r) {
    std::vector<C> v(x.cols);
    for (auto& c : v) c = C(g(rng), g(rng));
    double sigma = 0;
    for (int it = 0; it < iterations; ++it) {
      std::vector<C> w(x.rows, 0), u(x.cols, 0);
      for (std::size_t i = 0; i < x.rows; ++i)
        for (std::size_t j = 0; j < x.cols; ++j) w[i] += x(i, j) * v[j];
      for (std::size_t j = 0; j < x.cols; ++j)
        for (std::size_t i = 0; i < x.rows; ++i) u[j] += std::conj(x(i, j)) * w[i];
      double n = 0;
      for (const C& c : u) n += std::norm(c);
      n = std::sqrt(n);
      if (n == 0) break;
      for (std::size_t j = 0; j < x.cols; ++j) v[j] = u[j] / n;
      const double next = std::sqrt(n);
      if (std::abs(next - sigma) <= 1e-15 * next) {
        sigma = next;
        break;
      }
      sigma = next;
    }
    best = std::max(best, sigma);
  }
  return best;
}

/// Tr_K g for g : H (x) K -> G (x) K, by explicit index sums.
inline Mat partial_trace(const Mat& g, std::size_t h, std::size_t gd, std::size_t k) {
  Mat out(gd, h);
  for (std::size_t m = 0; m < gd; ++m)
    for (std::size_t n = 0; n < h; ++n)
      for (std::size_t j = 0; j < k; ++j) out(m, n) += g(m * k + j, n * k + j);
  return out;
}

/// sum_{m,n} conj(g[m,n]) f[m,n].
inline C hs_inner(const Mat& g, const Mat& f) {
  C acc = 0;
  for (std::size_t i = 0; i < g.a.size(); ++i) acc += std::conj(g.a[i]) * f.a[i];
  return acc;
}

/// sum_{n=0}^{count-1} a q^n.
inline double geometric_sum(double a, double q, std::size_t count) {
  double acc = 0, term = a;
  for (std::size_t n = 0; n < count; ++n, term *= q) acc += term;
  return acc;
}

/// Left Riemann sum of f on [0, L) with `points` samples.
template <class F>
C riemann(F&& f, double L, int points) {
  C acc = 0;
  for (int i = 0; i < points; ++i) acc += f(L * i / points);
  return acc * (L / points);
}

inline Mat random(std::mt19937_64& rng, std::size_t r, std::size_t c) {
  std::normal_distribution<double> g;
  Mat out(r, c);
  for (auto& v : out.a) v = C(g(rng), g(rng));
  return out;
}

}  // namespace oracle
