#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>

// Small fixed-capacity linear algebra for the reduced epidemic models
// (state dimension is 1 or 2). Everything is closed-form; no external
// solver is worth the dependency at this size.

namespace episcale {

inline constexpr int kMaxDim = 2;

struct Vec {
  std::array<double, kMaxDim> v{0.0, 0.0};
  int d = 1;

  Vec() = default;
  explicit Vec(double x) : v{x, 0.0}, d(1) {}
  Vec(double x, double y) : v{x, y}, d(2) {}

  double& operator[](int i) { return v[static_cast<std::size_t>(i)]; }
  double operator[](int i) const { return v[static_cast<std::size_t>(i)]; }

  Vec& operator+=(const Vec& o) {
    for (int i = 0; i < d; ++i) v[i] += o[i];
    return *this;
  }
  Vec& operator-=(const Vec& o) {
    for (int i = 0; i < d; ++i) v[i] -= o[i];
    return *this;
  }
  Vec& operator*=(double s) {
    for (int i = 0; i < d; ++i) v[i] *= s;
    return *this;
  }

  friend Vec operator+(Vec a, const Vec& b) { return a += b; }
  friend Vec operator-(Vec a, const Vec& b) { return a -= b; }
  friend Vec operator*(double s, Vec a) { return a *= s; }
  friend Vec operator*(Vec a, double s) { return a *= s; }

  double dot(const Vec& o) const {
    double s = 0.0;
    for (int i = 0; i < d; ++i) s += v[i] * o[i];
    return s;
  }
  double norm() const { return std::sqrt(dot(*this)); }
  double norm_inf() const {
    double m = 0.0;
    for (int i = 0; i < d; ++i) m = std::max(m, std::abs(v[i]));
    return m;
  }

  static Vec zero(int dim) {
    Vec z;
    z.d = dim;
    return z;
  }
};

struct Mat {
  std::array<std::array<double, kMaxDim>, kMaxDim> m{{{0.0, 0.0}, {0.0, 0.0}}};
  int d = 1;

  Mat() = default;
  explicit Mat(double a) : d(1) { m[0][0] = a; }
  Mat(double a, double b, double c, double e) : d(2) {
    m[0][0] = a;
    m[0][1] = b;
    m[1][0] = c;
    m[1][1] = e;
  }

  double& operator()(int i, int j) { return m[i][j]; }
  double operator()(int i, int j) const { return m[i][j]; }

  static Mat identity(int dim) {
    Mat r;
    r.d = dim;
    for (int i = 0; i < dim; ++i) r(i, i) = 1.0;
    return r;
  }
  static Mat zero(int dim) {
    Mat r;
    r.d = dim;
    return r;
  }

  Mat& operator+=(const Mat& o) {
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) m[i][j] += o(i, j);
    return *this;
  }
  Mat& operator*=(double s) {
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) m[i][j] *= s;
    return *this;
  }
  friend Mat operator+(Mat a, const Mat& b) { return a += b; }
  friend Mat operator*(double s, Mat a) { return a *= s; }

  Vec operator*(const Vec& x) const {
    Vec r = Vec::zero(d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) r[i] += m[i][j] * x[j];
    return r;
  }
  Mat operator*(const Mat& o) const {
    Mat r = Mat::zero(d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        for (int k = 0; k < d; ++k) r(i, j) += m[i][k] * o(k, j);
    return r;
  }

  Mat transpose() const {
    Mat r = *this;
    if (d == 2) std::swap(r.m[0][1], r.m[1][0]);
    return r;
  }

  double trace() const { return d == 1 ? m[0][0] : m[0][0] + m[1][1]; }
  double det() const {
    return d == 1 ? m[0][0] : m[0][0] * m[1][1] - m[0][1] * m[1][0];
  }

  double norm_inf() const {
    double r = 0.0;
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) r = std::max(r, std::abs(m[i][j]));
    return r;
  }

  Mat inverse() const {
    const double dt = det();
    if (dt == 0.0) throw std::domain_error("singular matrix");
    if (d == 1) return Mat(1.0 / dt);
    Mat r(m[1][1] / dt, -m[0][1] / dt, -m[1][0] / dt, m[0][0] / dt);
    return r;
  }
};

// Eigenvalues of a d x d matrix, d <= 2.
inline std::array<std::complex<double>, 2> eigenvalues(const Mat& a) {
  if (a.d == 1) return {std::complex<double>(a(0, 0), 0.0), 0.0};
  const double mu = 0.5 * a.trace();
  const double disc = mu * mu - a.det();
  if (disc >= 0.0) {
    const double r = std::sqrt(disc);
    return {std::complex<double>(mu + r, 0.0), std::complex<double>(mu - r, 0.0)};
  }
  const double w = std::sqrt(-disc);
  return {std::complex<double>(mu, w), std::complex<double>(mu, -w)};
}

inline double max_real_eigenvalue(const Mat& a) {
  const auto ev = eigenvalues(a);
  double r = ev[0].real();
  if (a.d == 2) r = std::max(r, ev[1].real());
  return r;
}

// exp(B t) by the 2x2 closed form e^{mu t}(c I + s (B - mu I)) with
// c, s from cosh/cos depending on the sign of the discriminant. The
// hyperbolic branch is assembled from e^{lambda_{1,2} t} directly so the
// Hurwitz case cannot overflow at large t; the near-defective branch
// (|disc| <= 1e-12) uses the series for sinh(x)/x to avoid cancellation.
inline Mat expm(const Mat& b, double t) {
  if (b.d == 1) {
    return Mat(std::exp(b(0, 0) * t));
  }
  const double mu = 0.5 * b.trace();
  const double disc = mu * mu - b.det();
  double cc;  // e^{mu t} cosh(delta t)   (or cos)
  double ss;  // e^{mu t} sinh(delta t)/delta   (or sin(w t)/w)
  if (disc > 1e-12) {
    const double delta = std::sqrt(disc);
    const double ep = std::exp((mu + delta) * t);
    const double em = std::exp((mu - delta) * t);
    cc = 0.5 * (ep + em);
    ss = 0.5 * (ep - em) / delta;
  } else if (disc < -1e-12) {
    const double w = std::sqrt(-disc);
    const double e = std::exp(mu * t);
    cc = e * std::cos(w * t);
    ss = e * std::sin(w * t) / w;
  } else {
    const double x2 = disc * t * t;
    const double e = std::exp(mu * t);
    cc = e * (1.0 + x2 / 2.0 + x2 * x2 / 24.0);
    ss = e * t * (1.0 + x2 / 6.0 + x2 * x2 / 120.0);
  }
  Mat r = Mat::zero(2);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) r(i, j) = ss * b(i, j);
  r(0, 0) += cc - ss * mu;
  r(1, 1) += cc - ss * mu;
  return r;
}

// Solve B P + P B^T + A = 0 for symmetric P (B Hurwitz, A symmetric).
inline Mat lyapunov_stationary(const Mat& b, const Mat& a) {
  if (b.d == 1) {
    return Mat(-a(0, 0) / (2.0 * b(0, 0)));
  }
  // Unknowns (p11, p12, p22); the three independent equations of the
  // symmetric 2x2 Lyapunov identity.
  double s[3][4] = {
      {2.0 * b(0, 0), 2.0 * b(0, 1), 0.0, -a(0, 0)},
      {b(1, 0), b(0, 0) + b(1, 1), b(0, 1), -a(0, 1)},
      {0.0, 2.0 * b(1, 0), 2.0 * b(1, 1), -a(1, 1)},
  };
  // Gaussian elimination with partial pivoting.
  for (int col = 0; col < 3; ++col) {
    int piv = col;
    for (int r = col + 1; r < 3; ++r)
      if (std::abs(s[r][col]) > std::abs(s[piv][col])) piv = r;
    if (s[piv][col] == 0.0) throw std::domain_error("singular Lyapunov system");
    if (piv != col)
      for (int c = 0; c < 4; ++c) std::swap(s[piv][c], s[col][c]);
    for (int r = 0; r < 3; ++r) {
      if (r == col) continue;
      const double f = s[r][col] / s[col][col];
      for (int c = col; c < 4; ++c) s[r][c] -= f * s[col][c];
    }
  }
  const double p11 = s[0][3] / s[0][0];
  const double p12 = s[1][3] / s[1][1];
  const double p22 = s[2][3] / s[2][2];
  return Mat(p11, p12, p12, p22);
}

// Lower Cholesky factor of a PSD matrix; tolerates exact zeros on the
// diagonal (noise-free directions).
inline Mat cholesky_psd(const Mat& a) {
  if (a.d == 1) {
    return Mat(std::sqrt(std::max(a(0, 0), 0.0)));
  }
  const double l11 = std::sqrt(std::max(a(0, 0), 0.0));
  const double l21 = l11 > 0.0 ? a(1, 0) / l11 : 0.0;
  const double l22 = std::sqrt(std::max(a(1, 1) - l21 * l21, 0.0));
  return Mat(l11, 0.0, l21, l22);
}

// Order-independent reduction used by the Monte Carlo aggregators: the
// result depends only on the slot order of the input, never on thread
// scheduling.
inline double pairwise_sum(std::span<const double> xs) {
  if (xs.size() <= 8) {
    double s = 0.0;
    for (double x : xs) s += x;
    return s;
  }
  const std::size_t half = xs.size() / 2;
  return pairwise_sum(xs.first(half)) + pairwise_sum(xs.subspan(half));
}

}  // namespace episcale
