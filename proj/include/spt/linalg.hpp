#pragma once

// Fixed-size dense matrices for the 1- and 2-DoF transmission math.
// Dimensions are template parameters, so products are checked at compile time.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <limits>
#include <ostream>

namespace spt {

template <std::size_t R, std::size_t C>
struct Mat {
  static constexpr std::size_t rows = R;
  static constexpr std::size_t cols = C;

  // row-major
  std::array<double, R * C> data{};

  constexpr Mat() = default;

  constexpr Mat(std::initializer_list<double> values) {
    std::size_t k = 0;
    for (double v : values) {
      if (k >= R * C) break;
      data[k++] = v;
    }
  }

  static constexpr Mat zero() { return Mat{}; }

  static constexpr Mat filled(double v) {
    Mat m;
    m.data.fill(v);
    return m;
  }

  static constexpr Mat identity() requires(R == C) {
    Mat m;
    for (std::size_t i = 0; i < R; ++i) m(i, i) = 1.0;
    return m;
  }

  static constexpr Mat diagonal(const Mat<R, 1>& d) requires(R == C) {
    Mat m;
    for (std::size_t i = 0; i < R; ++i) m(i, i) = d[i];
    return m;
  }

  constexpr double& operator()(std::size_t i, std::size_t j) { return data[i * C + j]; }
  constexpr double operator()(std::size_t i, std::size_t j) const { return data[i * C + j]; }

  // Flat access; natural for column vectors.
  constexpr double& operator[](std::size_t k) { return data[k]; }
  constexpr double operator[](std::size_t k) const { return data[k]; }

  constexpr Mat<1, C> row(std::size_t i) const {
    Mat<1, C> r;
    for (std::size_t j = 0; j < C; ++j) r[j] = (*this)(i, j);
    return r;
  }

  constexpr Mat<R, 1> col(std::size_t j) const {
    Mat<R, 1> c;
    for (std::size_t i = 0; i < R; ++i) c[i] = (*this)(i, j);
    return c;
  }

  constexpr void set_row(std::size_t i, const Mat<1, C>& r) {
    for (std::size_t j = 0; j < C; ++j) (*this)(i, j) = r[j];
  }

  constexpr void set_col(std::size_t j, const Mat<R, 1>& c) {
    for (std::size_t i = 0; i < R; ++i) (*this)(i, j) = c[i];
  }

  constexpr Mat<C, R> transpose() const {
    Mat<C, R> t;
    for (std::size_t i = 0; i < R; ++i)
      for (std::size_t j = 0; j < C; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  constexpr Mat& operator+=(const Mat& o) {
    for (std::size_t k = 0; k < R * C; ++k) data[k] += o.data[k];
    return *this;
  }
  constexpr Mat& operator-=(const Mat& o) {
    for (std::size_t k = 0; k < R * C; ++k) data[k] -= o.data[k];
    return *this;
  }
  constexpr Mat& operator*=(double s) {
    for (double& v : data) v *= s;
    return *this;
  }

  friend constexpr bool operator==(const Mat&, const Mat&) = default;
};

template <std::size_t N>
using Vec = Mat<N, 1>;
using Vec2 = Vec<2>;
using Vec3 = Vec<3>;
using Mat2 = Mat<2, 2>;
using Mat3 = Mat<3, 3>;

template <std::size_t R, std::size_t C>
constexpr Mat<R, C> operator+(Mat<R, C> a, const Mat<R, C>& b) {
  return a += b;
}

template <std::size_t R, std::size_t C>
constexpr Mat<R, C> operator-(Mat<R, C> a, const Mat<R, C>& b) {
  return a -= b;
}

template <std::size_t R, std::size_t C>
constexpr Mat<R, C> operator-(Mat<R, C> a) {
  return a *= -1.0;
}

template <std::size_t R, std::size_t C>
constexpr Mat<R, C> operator*(Mat<R, C> a, double s) {
  return a *= s;
}

template <std::size_t R, std::size_t C>
constexpr Mat<R, C> operator*(double s, Mat<R, C> a) {
  return a *= s;
}

template <std::size_t R, std::size_t K, std::size_t C>
constexpr Mat<R, C> operator*(const Mat<R, K>& a, const Mat<K, C>& b) {
  Mat<R, C> out;
  for (std::size_t i = 0; i < R; ++i)
    for (std::size_t k = 0; k < K; ++k) {
      const double aik = a(i, k);
      for (std::size_t j = 0; j < C; ++j) out(i, j) += aik * b(k, j);
    }
  return out;
}

template <std::size_t N>
constexpr double dot(const Vec<N>& a, const Vec<N>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < N; ++i) s += a[i] * b[i];
  return s;
}

constexpr Vec3 cross(const Vec3& a, const Vec3& b) {
  return Vec3{a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

// hypot-based, so it does not overflow or return NaN for finite input
template <std::size_t N>
double norm(const Vec<N>& v) {
  double s = 0.0;
  for (std::size_t i = 0; i < N; ++i) s = std::hypot(s, v[i]);
  return s;
}

template <std::size_t N>
Vec<N> normalized(const Vec<N>& v) {
  return v * (1.0 / norm(v));
}

// a * bᵀ
template <std::size_t R, std::size_t C>
constexpr Mat<R, C> outer(const Vec<R>& a, const Vec<C>& b) {
  Mat<R, C> m;
  for (std::size_t i = 0; i < R; ++i)
    for (std::size_t j = 0; j < C; ++j) m(i, j) = a[i] * b[j];
  return m;
}

template <std::size_t R, std::size_t C>
double max_abs(const Mat<R, C>& m) {
  double best = 0.0;
  for (double v : m.data) best = std::max(best, std::abs(v));
  return best;
}

template <std::size_t R, std::size_t C>
bool all_finite(const Mat<R, C>& m) {
  return std::all_of(m.data.begin(), m.data.end(), [](double v) { return std::isfinite(v); });
}

constexpr double det(const Mat<1, 1>& m) { return m(0, 0); }
constexpr double det(const Mat2& m) { return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0); }
constexpr double det(const Mat3& m) {
  return m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) -
         m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
         m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
}

// Explicit adjugate inverses; callers check invertibility first.
constexpr Mat<1, 1> inverse(const Mat<1, 1>& m) { return Mat<1, 1>{1.0 / m(0, 0)}; }

constexpr Mat2 inverse(const Mat2& m) {
  const double d = det(m);
  return Mat2{m(1, 1) / d, -m(0, 1) / d, -m(1, 0) / d, m(0, 0) / d};
}

constexpr Mat3 inverse(const Mat3& m) {
  const double d = det(m);
  Mat3 inv;
  inv(0, 0) = (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) / d;
  inv(0, 1) = (m(0, 2) * m(2, 1) - m(0, 1) * m(2, 2)) / d;
  inv(0, 2) = (m(0, 1) * m(1, 2) - m(0, 2) * m(1, 1)) / d;
  inv(1, 0) = (m(1, 2) * m(2, 0) - m(1, 0) * m(2, 2)) / d;
  inv(1, 1) = (m(0, 0) * m(2, 2) - m(0, 2) * m(2, 0)) / d;
  inv(1, 2) = (m(0, 2) * m(1, 0) - m(0, 0) * m(1, 2)) / d;
  inv(2, 0) = (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0)) / d;
  inv(2, 1) = (m(0, 1) * m(2, 0) - m(0, 0) * m(2, 1)) / d;
  inv(2, 2) = (m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0)) / d;
  return inv;
}

// Singular values, descending.
inline std::array<double, 1> singular_values(const Mat<1, 1>& m) { return {std::abs(m(0, 0))}; }

inline std::array<double, 2> singular_values(const Mat2& m) {
  // Closed form via the invariants of mᵀm.
  const double a = m(0, 0), b = m(0, 1), c = m(1, 0), d = m(1, 1);
  const double s1 = a * a + b * b + c * c + d * d;
  const double dt = std::abs(a * d - b * c);
  const double disc = std::sqrt(std::max(0.0, s1 * s1 - 4.0 * dt * dt));
  const double smax = std::sqrt(0.5 * (s1 + disc));
  // σ_min from det/σ_max is accurate even for nearly rank-deficient m.
  const double smin = smax > 0.0 ? dt / smax : 0.0;
  return {smax, smin};
}

template <std::size_t R, std::size_t C>
std::ostream& operator<<(std::ostream& os, const Mat<R, C>& m) {
  os << '[';
  for (std::size_t i = 0; i < R; ++i) {
    if (i) os << "; ";
    for (std::size_t j = 0; j < C; ++j) {
      if (j) os << ", ";
      os << m(i, j);
    }
  }
  return os << ']';
}

}  // namespace spt
