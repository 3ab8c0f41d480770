// SPDX-License-Identifier: Apache-2.0
//
// Parabolic explosion of P_{p/q}: the leading coefficient A(p/q) of the
// q-fold iterate, the cycle function chi(delta) of P_{p/q + delta^q} by
// radial Newton continuation, and the perturbed Siegel sets X_n(rho).
#pragma once

#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "parabolica/core.hpp"
#include "parabolica/family.hpp"
#include "parabolica/series.hpp"

namespace parabolica {

inline cplx rational_phase(int p, int q) { return unit_phase(static_cast<double>(p) / q); }

// lambda z (1+z)^m as a series.
inline Series family_series(int m, cplx lambda, int K) {
  Series s(K);
  for (int k = 1; k <= K && k <= m + 1; ++k) s[k] = lambda * binomial(m, k - 1);
  return s;
}

inline void check_rotation(int p, int q) {
  if (q < 1) throw DomainError("rotation p/q: q must be >= 1");
  if (std::gcd(p, q) != 1) throw DomainError("rotation p/q: p and q must be coprime");
}

// Series of P_{p/q}^{oq}. Coefficients of z^2 .. z^q vanish; z^{q+1} carries A(p/q).
inline Series series_iterate(int m, int p, int q, int K = 64) {
  check_rotation(p, q);
  if (K < q + 2) throw DomainError("series_iterate: K must be >= q+2");
  const Series f = family_series(m, rational_phase(p, q), K);
  Series g = Series::identity(K);
  for (int i = 0; i < q; ++i) g = f.compose(g);
  double scale = 1.0;
  for (int k = 1; k <= q + 1; ++k) scale = std::max(scale, std::abs(g[k]));
  if (std::abs(g[1] - 1.0) > 1e-10) throw ConvergenceError("series_iterate: linear coefficient is not 1");
  for (int k = 2; k <= q; ++k)
    if (std::abs(g[k]) > 1e-10 * scale) throw ConvergenceError("series_iterate: nonvanishing low-order coefficient");
  return g;
}

inline cplx explosion_coefficient(int m, int p, int q, int K = 0) {
  return series_iterate(m, p, q, K > 0 ? K : q + 2)[q + 1];
}

// Principal q-th root of -2 pi i q / A.
inline cplx chi_prime0(int m, int p, int q) {
  const cplx A = explosion_coefficient(m, p, q);
  if (std::abs(A) < 1e-12) throw ConvergenceError("chi_prime0: A(p/q) vanishes");
  return principal_root(-kTwoPi * kI * static_cast<double>(q) / A, q);
}

// Factor c with alpha = p/q + c delta^q in the normalized parameterization.
inline cplx explosion_rescaling(int m, int p, int q) {
  return -explosion_coefficient(m, p, q) / (kTwoPi * kI * static_cast<double>(q));
}

struct IterateJet {
  cplx value;
  cplx derivative;
};

inline IterateJet iterate_with_derivative(const FamilyParams& f, cplx z, int n) {
  const cplx lambda = f.multiplier();
  cplx d{1.0, 0.0};
  for (int i = 0; i < n; ++i) {
    d *= lambda * eval_P_prime(f.m, z);
    z = lambda * eval_P(f.m, z);
  }
  return {z, d};
}

struct ContinuationOptions {
  double start_fraction = 1e-3;
  double growth = 1.25;
  int max_halvings = 40;
  int newton_iters = 60;
  double residual_tol = 1e-10;
};

struct ContinuationResult {
  std::vector<cplx> cycle;
  cplx delta_reached{0.0, 0.0};
  bool complete = false;
  double residual = 0.0;
  cplx multiplier{0.0, 0.0};
  int steps = 0;
};

namespace detail {

// Newton on P_alpha^{oq}(z) = z from the seed. Fails if it wanders off the
// predicted branch or collapses onto the fixed point 0.
inline bool newton_cycle_point(const FamilyParams& f, int q, cplx seed, const ContinuationOptions& o, cplx& out) {
  cplx z = seed;
  const double scale = std::abs(seed);
  double prev = HUGE_VAL;
  bool converged = false;
  for (int it = 0; it < o.newton_iters; ++it) {
    const auto j = iterate_with_derivative(f, z, q);
    const cplx g = j.value - z;
    const cplx dg = j.derivative - 1.0;
    if (!std::isfinite(std::abs(g)) || std::abs(dg) == 0.0) return false;
    const cplx step = g / dg;
    z -= step;
    if (!std::isfinite(std::abs(z))) return false;
    const double s = std::abs(step);
    // rounding in P^q(z) - z moves the root by about eps |z| / |dg|
    const double floor = std::max(1e-7, 4.0 * std::numeric_limits<double>::epsilon() / std::abs(dg));
    // either tiny steps or stagnation at the rounding floor of a clustered root
    if (s <= 1e-14 * std::abs(z) || (it > 2 && s >= 0.5 * prev && s <= std::min(floor, 1e-3) * std::abs(z))) {
      converged = true;
      break;
    }
    prev = s;
  }
  if (!converged) return false;
  if (std::abs(z - seed) > 0.3 * scale) return false;
  if (std::abs(z) < 1e-3 * scale) return false;
  out = z;
  return true;
}

inline std::vector<cplx> orbit(const FamilyParams& f, cplx z, int q) {
  std::vector<cplx> c{z};
  for (int i = 1; i < q; ++i) c.push_back(eval_P_alpha(f, c.back()));
  return c;
}

inline bool cycle_points_distinct(const std::vector<cplx>& c) {
  double s = 0.0;
  for (auto z : c) s = std::max(s, std::abs(z));
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (std::abs(c[i]) < 1e-9 * s) return false;
    for (std::size_t j = i + 1; j < c.size(); ++j)
      if (std::abs(c[i] - c[j]) < 1e-8 * s) return false;
  }
  return true;
}

}  // namespace detail

// Follows chi along the segment from |delta| * start_fraction to delta.
// Never throws on path failure; `complete` and `delta_reached` report progress.
inline ContinuationResult continue_ray(int m, int p, int q, cplx delta, const ContinuationOptions& o = {}) {
  check_rotation(p, q);
  if (delta == cplx{0.0, 0.0}) throw DomainError("chi_continuation: delta must be nonzero");
  const cplx c0 = chi_prime0(m, p, q);
  const double target = std::abs(delta);
  const cplx dir = delta / target;
  ContinuationResult r;

  // the start is pushed outward while rounding swamps P^q(z) - z there
  double t = target * o.start_fraction;
  cplx z;
  for (;; t = std::min(target, 10.0 * t)) {
    FamilyParams f(m, cplx(static_cast<double>(p) / q) + std::pow(dir * t, q));
    if (detail::newton_cycle_point(f, q, c0 * dir * t, o, z)) break;
    if (t >= target) return r;
  }
  r.delta_reached = dir * t;
  double ratio = o.growth;
  int halvings = 0;
  int guard = 0;
  while (t < target) {
    if (++guard > 100000) return r;
    const double t_next = std::min(target, t * ratio);
    const cplx pred = z * (t_next / t);
    const cplx d_next = dir * t_next;
    FamilyParams f(m, cplx(static_cast<double>(p) / q) + std::pow(d_next, q));
    cplx zz;
    bool ok = detail::newton_cycle_point(f, q, pred, o, zz);
    if (ok && q > 1) ok = detail::cycle_points_distinct(detail::orbit(f, zz, q));
    if (!ok) {
      if (++halvings > o.max_halvings) return r;
      ratio = 1.0 + 0.5 * (ratio - 1.0);
      continue;
    }
    z = zz;
    t = t_next;
    r.delta_reached = d_next;
    ++r.steps;
    halvings = 0;
    ratio = std::min(o.growth, 1.0 + 2.0 * (ratio - 1.0));
  }
  FamilyParams f(m, cplx(static_cast<double>(p) / q) + std::pow(delta, q));
  r.cycle = detail::orbit(f, z, q);
  const auto j = iterate_with_derivative(f, z, q);
  r.residual = std::abs(j.value - z);
  r.multiplier = j.derivative;
  r.delta_reached = delta;
  r.complete = r.residual < o.residual_tol * std::max(1.0, std::abs(z)) &&
               (q == 1 || detail::cycle_points_distinct(r.cycle));
  return r;
}

inline std::string format_delta(cplx d) {
  return "(" + std::to_string(d.real()) + ", " + std::to_string(d.imag()) + ")";
}

// Cycle chi(delta), chi(zeta delta), ... of P_{p/q + delta^q}; throws on failure.
inline std::vector<cplx> chi_continuation(int m, int p, int q, cplx delta, double step_control = 1.25) {
  ContinuationOptions o;
  o.growth = step_control;
  const auto r = continue_ray(m, p, q, delta, o);
  if (!r.complete)
    throw ConvergenceError("chi_continuation: continuation failed, last good delta " + format_delta(r.delta_reached));
  return r.cycle;
}

struct CycleSample {
  cplx delta;
  std::vector<cplx> cycle;
};

struct CycleFunction {
  int p = 0;
  int q = 1;
  int m = 2;
  cplx A{0.0, 0.0};
  cplx chi_prime0{0.0, 0.0};
  std::vector<CycleSample> samples;

  CycleFunction(int degree, int num, int den) : p(num), q(den), m(degree) {
    check_rotation(p, q);
    A = explosion_coefficient(m, p, q);
    chi_prime0 = parabolica::chi_prime0(m, p, q);
  }

  const std::vector<cplx>& sample(cplx delta) {
    samples.push_back({delta, chi_continuation(m, p, q, delta)});
    return samples.back().cycle;
  }
};

inline double explosion_floor(int q) { return std::pow(static_cast<double>(q), -3.0 / q); }

struct RadiusProbe {
  double radius = 0.0;  // min over directions of the modulus reached
  double floor = 0.0;   // q^{-3/q}
  std::vector<double> per_direction;
};

// Each of 16 rays is pushed out to cap_factor * q^{-3/q}.
inline RadiusProbe explosion_radius_probe(int m, int p, int q, double cap_factor = 2.0, int directions = 16) {
  check_rotation(p, q);
  if (q > 8) throw DomainError("explosion_radius_probe: q <= 8 only");
  RadiusProbe out;
  out.floor = explosion_floor(q);
  out.radius = cap_factor * out.floor;
  for (int k = 0; k < directions; ++k) {
    const cplx d = std::polar(cap_factor * out.floor, kTwoPi * k / directions);
    const auto r = continue_ray(m, p, q, d);
    const double reached = r.complete ? std::abs(d) : std::abs(r.delta_reached);
    out.per_direction.push_back(reached);
    out.radius = std::min(out.radius, reached);
  }
  return out;
}

// X_n(rho) = { z : |z^q/(z^q - eps)| < s }, s = rho^q/(rho^q + |eps|)
struct PerturbedSiegelSet {
  int q_n = 1;
  double eps_n = 0.0;
  double rho = 0.07;
  double s_n = 0.0;

  PerturbedSiegelSet(int q, double eps, double r) : q_n(q), eps_n(eps), rho(r) {
    if (q < 1 || eps == 0.0 || !(r > 0.0)) throw DomainError("PerturbedSiegelSet: need q >= 1, eps != 0, rho > 0");
    const double rq = std::pow(rho, q_n);
    s_n = rq / (rq + std::abs(eps_n));
  }
};

struct Membership {
  bool inside = false;
  bool pole = false;
  double modulus = 0.0;
};

inline Membership xn_membership(const PerturbedSiegelSet& s, cplx z) {
  const cplx zq = ipow(z, static_cast<unsigned>(s.q_n));
  const cplx den = zq - s.eps_n;
  Membership r;
  if (den == cplx{0.0, 0.0}) {
    r.pole = true;
    return r;
  }
  r.modulus = std::abs(zq / den);
  r.inside = r.modulus < s.s_n;
  return r;
}

// z^q = eps w^q/(w^q - 1), w = exp(2 pi i q eps Z). The root is taken as
// w (-eps)^{1/q} (1 - w^q)^{-1/q} inside the unit disk and eps^{1/q} (1 - w^-q)^{-1/q}
// outside, both continuous there; branch multiplies by e^{2 pi i branch/q}.
inline cplx pi_n(const PerturbedSiegelSet& s, cplx Z, int branch = 0) {
  if (branch < 0 || branch >= s.q_n) throw DomainError("pi_n: branch outside [0, q)");
  const double q = s.q_n;
  const cplx w = std::exp(kTwoPi * kI * q * s.eps_n * Z);
  const cplx wq = ipow(w, static_cast<unsigned>(s.q_n));
  if (std::abs(wq - 1.0) < 1e-300) throw DomainError("pi_n: pole at w^q = 1");
  const cplx z = std::abs(w) <= 1.0
                     ? w * principal_root(cplx(-s.eps_n), s.q_n) / principal_root(1.0 - wq, s.q_n)
                     : principal_root(cplx(s.eps_n), s.q_n) / principal_root(1.0 - 1.0 / wq, s.q_n);
  return z * unit_phase(static_cast<double>(branch) / q);
}

inline cplx xi_n(const PerturbedSiegelSet& s, cplx z) {
  const cplx zq = ipow(z, static_cast<unsigned>(s.q_n));
  return kTwoPi * kI * static_cast<double>(s.q_n) * z * (s.eps_n - zq);
}

inline double tau_n(const PerturbedSiegelSet& s, double r) {
  const double q = s.q_n;
  return std::log1p(s.eps_n / std::pow(r, q)) / (kTwoPi * q * q * s.eps_n);
}

inline double pi_n_period(const PerturbedSiegelSet& s) { return 1.0 / (s.q_n * s.eps_n); }

}  // namespace parabolica
