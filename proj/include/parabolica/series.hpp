// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <vector>

#include "parabolica/core.hpp"

namespace parabolica {

// Power series c_0 + c_1 z + ... + c_K z^K, arithmetic truncated at order K.
template <typename T = cplx>
class TruncatedSeries {
 public:
  explicit TruncatedSeries(int order = 64) : c_(static_cast<std::size_t>(order) + 1, T{}) {
    if (order < 0) throw DomainError("TruncatedSeries: negative order");
  }
  TruncatedSeries(int order, std::vector<T> coeffs) : TruncatedSeries(order) {
    for (std::size_t i = 0; i < coeffs.size() && i < c_.size(); ++i) c_[i] = coeffs[i];
  }

  static TruncatedSeries identity(int order) {
    TruncatedSeries s(order);
    if (order >= 1) s.c_[1] = T{1};
    return s;
  }
  static TruncatedSeries constant(int order, T v) {
    TruncatedSeries s(order);
    s.c_[0] = v;
    return s;
  }

  int order() const { return static_cast<int>(c_.size()) - 1; }
  const T& operator[](int k) const { return c_[static_cast<std::size_t>(k)]; }
  T& operator[](int k) { return c_[static_cast<std::size_t>(k)]; }
  const std::vector<T>& coefficients() const { return c_; }

  TruncatedSeries& operator+=(const TruncatedSeries& o) {
    check_order(o);
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
    return *this;
  }
  TruncatedSeries& operator-=(const TruncatedSeries& o) {
    check_order(o);
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
    return *this;
  }
  TruncatedSeries& operator*=(const T& s) {
    for (auto& x : c_) x *= s;
    return *this;
  }

  friend TruncatedSeries operator+(TruncatedSeries a, const TruncatedSeries& b) { return a += b; }
  friend TruncatedSeries operator-(TruncatedSeries a, const TruncatedSeries& b) { return a -= b; }
  friend TruncatedSeries operator*(TruncatedSeries a, const T& s) { return a *= s; }
  friend TruncatedSeries operator*(const T& s, TruncatedSeries a) { return a *= s; }

  friend TruncatedSeries operator*(const TruncatedSeries& a, const TruncatedSeries& b) {
    a.check_order(b);
    const int K = a.order();
    TruncatedSeries r(K);
    for (int i = 0; i <= K; ++i) {
      if (a[i] == T{}) continue;
      for (int j = 0; i + j <= K; ++j) r[i + j] += a[i] * b[j];
    }
    return r;
  }

  TruncatedSeries pow(unsigned n) const {
    TruncatedSeries result = constant(order(), T{1});
    TruncatedSeries base = *this;
    while (n != 0) {
      if (n & 1U) result = result * base;
      n >>= 1U;
      if (n != 0) base = base * base;
    }
    return result;
  }

  // Horner in the inner series; requires inner(0) == 0 so truncation is exact.
  TruncatedSeries compose(const TruncatedSeries& inner) const {
    check_order(inner);
    if (std::abs(inner[0]) != 0.0) throw DomainError("compose: inner series must vanish at 0");
    const int K = order();
    TruncatedSeries r = constant(K, c_[static_cast<std::size_t>(K)]);
    for (int k = K - 1; k >= 0; --k) {
      r = r * inner;
      r[0] += c_[static_cast<std::size_t>(k)];
    }
    return r;
  }

  // 1/s for s(0) != 0.
  TruncatedSeries reciprocal() const {
    if (std::abs(c_[0]) == 0.0) throw DomainError("reciprocal: zero constant term");
    const int K = order();
    TruncatedSeries r(K);
    r[0] = T{1} / c_[0];
    for (int n = 1; n <= K; ++n) {
      T acc{};
      for (int j = 1; j <= n; ++j) acc += c_[static_cast<std::size_t>(j)] * r[n - j];
      r[n] = -acc / c_[0];
    }
    return r;
  }

  // log s for s(0) == 1, via s' = s (log s)'.
  TruncatedSeries log1() const {
    if (std::abs(c_[0] - T{1}) > 1e-14) throw DomainError("log1: constant term must be 1");
    const int K = order();
    TruncatedSeries r(K);
    for (int n = 1; n <= K; ++n) {
      T acc = static_cast<double>(n) * c_[static_cast<std::size_t>(n)];
      for (int j = 1; j < n; ++j) acc -= static_cast<double>(j) * r[j] * c_[static_cast<std::size_t>(n - j)];
      r[n] = acc / static_cast<double>(n);
    }
    return r;
  }

  T eval(T z) const {
    T acc{};
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * z + *it;
    return acc;
  }

 private:
  void check_order(const TruncatedSeries& o) const {
    if (o.c_.size() != c_.size()) throw DomainError("TruncatedSeries: order mismatch");
  }
  std::vector<T> c_;
};

using Series = TruncatedSeries<cplx>;

}  // namespace parabolica
