// SPDX-License-Identifier: Apache-2.0
//
// Continued fractions: expansion, exact convergents, tails alpha_k, products
// beta_k, Brjuno partial sums and the perturbed sequences
// alpha_n = [a_0, ..., a_n, A_n, N, N, ...].
#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "parabolica/core.hpp"

namespace parabolica {

using BigInt = boost::multiprecision::cpp_int;

struct Convergent {
  BigInt p;
  BigInt q;
};

struct ContinuedFractionData {
  std::vector<std::int64_t> entries;  // a_0, a_1, ...
  std::vector<Convergent> convergents;
  std::vector<long double> alphas;  // alpha_0 = {alpha}, alpha_{k+1} = {1/alpha_k}
  std::vector<long double> betas;   // beta_k = alpha_0 ... alpha_k
  bool terminated = false;          // expansion hit a rational (alpha_k ~ 0)
  bool precision_exhausted = false; // accumulated rounding made further entries unreliable
};

inline std::vector<Convergent> convergents(const std::vector<std::int64_t>& entries) {
  std::vector<Convergent> out;
  out.reserve(entries.size());
  BigInt p2 = 0, p1 = 1, q2 = 1, q1 = 0;  // p_{-2}, p_{-1}, q_{-2}, q_{-1}
  for (std::size_t k = 0; k < entries.size(); ++k) {
    if (k > 0 && entries[k] < 1) throw DomainError("convergents: entries past index 0 must be >= 1");
    const BigInt a = entries[k];
    BigInt p = a * p1 + p2;
    BigInt q = a * q1 + q2;
    p2 = p1;
    p1 = p;
    q2 = q1;
    q1 = q;
    out.push_back({p, q});
  }
  return out;
}

namespace detail {

inline void fill_betas(ContinuedFractionData& d) {
  d.betas.clear();
  long double b = 1.0L;
  for (long double a : d.alphas) {
    b *= a;
    d.betas.push_back(b);
  }
}

}  // namespace detail

// alpha_k from the recursion, run in long double with a running bound on
// the absolute error of alpha_k. A reciprocal within that bound of an integer
// is treated as that integer and ends the expansion.
inline ContinuedFractionData expand(double alpha, int depth) {
  if (depth < 1) throw DomainError("expand: depth must be >= 1");
  if (!std::isfinite(alpha)) throw DomainError("expand: alpha must be finite");
  ContinuedFractionData d;
  const long double a0 = std::floor(static_cast<long double>(alpha));
  d.entries.push_back(static_cast<std::int64_t>(a0));
  long double x = static_cast<long double>(alpha) - a0;
  long double err = std::numeric_limits<double>::epsilon() * std::max(1.0L, std::fabs(static_cast<long double>(alpha)));
  constexpr long double kTiny = 1e-14L;
  constexpr long double kUlp = std::numeric_limits<long double>::epsilon();
  if (x < kTiny) {
    d.alphas.push_back(0.0L);
    d.terminated = true;
  } else {
    d.alphas.push_back(x);
    for (int k = 1; k <= depth; ++k) {
      const long double inv = 1.0L / x;
      err = err / (x * x) + 4.0L * kUlp * inv;
      if (err > 0.25L) {
        d.precision_exhausted = true;
        break;
      }
      long double a = std::floor(inv);
      long double frac = inv - a;
      const long double nearest = std::round(inv);
      if (std::fabs(inv - nearest) <= 4.0L * err) {
        a = nearest;
        frac = 0.0L;
      }
      d.entries.push_back(static_cast<std::int64_t>(a));
      d.alphas.push_back(frac);
      if (frac < kTiny) {
        d.terminated = true;
        break;
      }
      x = frac;
    }
  }
  d.convergents = convergents(d.entries);
  detail::fill_betas(d);
  return d;
}

// [0; N, N, N, ...] = (sqrt(N^2+4) - N)/2
inline long double periodic_tail(std::int64_t N) {
  if (N < 1) throw DomainError("periodic_tail: N must be >= 1");
  const long double n = static_cast<long double>(N);
  return 2.0L / (n + std::sqrt(n * n + 4.0L));
}

// Builds the data of [a_0; a_1, ..., a_K + tail] from given entries. Tails are
// obtained by the backward recursion alpha_{k-1} = 1/(a_k + alpha_k), which
// contracts rounding errors instead of amplifying them.
inline ContinuedFractionData from_entries(const std::vector<std::int64_t>& entries, long double tail = 0.0L) {
  if (entries.empty()) throw DomainError("from_entries: empty entry list");
  if (tail < 0.0L || tail >= 1.0L) throw DomainError("from_entries: tail must lie in [0,1)");
  ContinuedFractionData d;
  d.entries = entries;
  d.convergents = convergents(entries);
  d.alphas.assign(entries.size(), 0.0L);
  long double t = tail;
  d.alphas.back() = t;
  for (std::size_t k = entries.size() - 1; k >= 1; --k) {
    t = 1.0L / (static_cast<long double>(entries[k]) + t);
    d.alphas[k - 1] = t;
  }
  d.terminated = (tail == 0.0L);
  detail::fill_betas(d);
  return d;
}

inline ContinuedFractionData golden_mean(int depth) {
  std::vector<std::int64_t> e(static_cast<std::size_t>(depth) + 1, 1);
  e[0] = 0;
  return from_entries(e, periodic_tail(1));
}

inline long double value_of(const ContinuedFractionData& d) {
  return static_cast<long double>(d.entries[0]) + d.alphas[0];
}

// sum_{k=0}^{depth} beta_{k-1} log(1/alpha_k), beta_{-1} = 1.
inline std::vector<long double> brjuno_partial_sums(const ContinuedFractionData& d, int depth) {
  if (depth < 0) throw DomainError("brjuno_sum: negative depth");
  if (static_cast<std::size_t>(depth) >= d.alphas.size())
    throw DomainError("brjuno_sum: expansion shorter than requested depth");
  std::vector<long double> sums;
  long double acc = 0.0L;
  long double beta_prev = 1.0L;
  for (int k = 0; k <= depth; ++k) {
    const long double a = d.alphas[static_cast<std::size_t>(k)];
    if (a <= 0.0L) throw DomainError("brjuno_sum: rational rotation number, infinite Brjuno sum");
    acc += beta_prev * std::log(1.0L / a);
    sums.push_back(acc);
    beta_prev = d.betas[static_cast<std::size_t>(k)];
  }
  return sums;
}

inline double brjuno_sum(const ContinuedFractionData& d, int depth) {
  return static_cast<double>(brjuno_partial_sums(d, depth).back());
}

inline double brjuno_sum(double alpha, int depth) {
  const auto d = expand(alpha, std::max(depth, 1));
  if (d.terminated) throw DomainError("brjuno_sum: rational rotation number, infinite Brjuno sum");
  return brjuno_sum(d, depth);
}

struct BoundedTypeReport {
  bool in_SN = false;
  std::size_t depth_checked = 0;
};

// All available a_k (k >= 1) satisfy N <= a_k <= bound.
inline BoundedTypeReport is_in_SN(const std::vector<std::int64_t>& entries, std::int64_t N,
                                  std::int64_t bound = std::numeric_limits<std::int64_t>::max()) {
  BoundedTypeReport r;
  r.in_SN = entries.size() > 1;
  for (std::size_t k = 1; k < entries.size(); ++k) {
    r.depth_checked = k;
    if (entries[k] < N || entries[k] > bound) {
      r.in_SN = false;
      break;
    }
  }
  return r;
}

struct PerturbedSequenceSpec {
  std::vector<std::int64_t> base_entries;
  std::int64_t A_n = 1;
  std::int64_t N = 1;
  int n = 0;

  void validate() const {
    if (n < 0 || static_cast<std::size_t>(n) >= base_entries.size())
      throw DomainError("PerturbedSequenceSpec: n outside the base expansion");
    if (A_n < 1 || N < 1) throw DomainError("PerturbedSequenceSpec: A_n and N must be >= 1");
    for (int k = 1; k <= n; ++k)
      if (base_entries[static_cast<std::size_t>(k)] < 1)
        throw DomainError("PerturbedSequenceSpec: entries past index 0 must be >= 1");
  }

  // a_0..a_n, A_n, then `extra` copies of N.
  std::vector<std::int64_t> entries(int extra = 0) const {
    validate();
    std::vector<std::int64_t> e(base_entries.begin(), base_entries.begin() + n + 1);
    e.push_back(A_n);
    for (int i = 0; i < extra; ++i) e.push_back(N);
    return e;
  }

  ContinuedFractionData data(int extra = 20) const { return from_entries(entries(extra), periodic_tail(N)); }
  double value() const { return static_cast<double>(value_of(data())); }
};

// eps_n = alpha_n - p_n/q_n = (-1)^n / (q_n^2 (A_n + theta) + q_n q_{n-1})
inline double epsilon_n(const PerturbedSequenceSpec& spec, double theta_tail) {
  spec.validate();
  const auto cv = convergents(std::vector<std::int64_t>(spec.base_entries.begin(),
                                                        spec.base_entries.begin() + spec.n + 1));
  const long double qn = cv.back().q.convert_to<long double>();
  const long double qm = spec.n >= 1 ? cv[static_cast<std::size_t>(spec.n - 1)].q.convert_to<long double>() : 0.0L;
  const long double denom = qn * qn * (static_cast<long double>(spec.A_n) + theta_tail) + qn * qm;
  const long double sign = (spec.n % 2 == 0) ? 1.0L : -1.0L;
  return static_cast<double>(sign / denom);
}

// log(A_n)^{1/q_n}; the growth condition on A_n concerns the limit of this ratio.
inline double log_growth_ratio(std::int64_t A_n, const BigInt& q_n) {
  if (A_n < 2) throw DomainError("log_growth_ratio: A_n must be >= 2");
  return std::pow(std::log(static_cast<double>(A_n)), 1.0 / q_n.convert_to<double>());
}

}  // namespace parabolica
