// SPDX-License-Identifier: Apache-2.0
//
// The polynomial family P_alpha(z) = e^{2 pi i alpha} z (1+z)^m, its rational
// model Q = psi0^{-1} o P o psi1, and the closed-form constants attached to
// both maps.
#pragma once

#include <cmath>
#include <optional>
#include <vector>

#include "parabolica/core.hpp"

namespace parabolica {

struct FamilyParams {
  int m = 2;
  cplx alpha{0.0, 0.0};

  FamilyParams() = default;
  FamilyParams(int degree, cplx rotation) : m(degree), alpha(rotation) {
    if (m < 2) throw DomainError("FamilyParams: m must be >= 2");
  }

  cplx multiplier() const { return unit_phase(alpha); }
};

inline cplx eval_P(int m, cplx z) { return z * ipow(1.0 + z, static_cast<unsigned>(m)); }

inline cplx eval_P_alpha(const FamilyParams& p, cplx z) { return p.multiplier() * eval_P(p.m, z); }

// P'(z) = (1+z)^{m-1} (1 + (m+1) z)
inline cplx eval_P_prime(int m, cplx z) {
  return ipow(1.0 + z, static_cast<unsigned>(m - 1)) * (1.0 + static_cast<double>(m + 1) * z);
}

inline cplx eval_P_alpha_prime(const FamilyParams& p, cplx z) { return p.multiplier() * eval_P_prime(p.m, z); }

inline cplx eval_Q(int m, cplx z) {
  if (z == cplx{0.0, 0.0} || z == cplx{1.0, 0.0}) throw DomainError("eval_Q: pole at z in {0, 1}");
  const auto n = static_cast<unsigned>(m);
  // ratio form keeps |z| ~ 1e5, m ~ 30 inside double range
  return ipow((1.0 + z) / (1.0 - z), 2 * n) * (1.0 + z) * (1.0 + z) / z;
}

// Q'(z) in the factored form through the two real critical points.
inline cplx eval_Q_prime(int m, cplx z) {
  if (z == cplx{0.0, 0.0} || z == cplx{1.0, 0.0}) throw DomainError("eval_Q_prime: pole at z in {0, 1}");
  const double s1 = std::sqrt(m + 1.0);
  const double s0 = std::sqrt(static_cast<double>(m));
  const double c1 = (s1 + s0) * (s1 + s0);
  const double c2 = (s1 - s0) * (s1 - s0);
  const cplx inv = 1.0 / z;
  return (1.0 - c1 * inv) * (1.0 - c2 * inv) *
         ipow((1.0 + inv) / (1.0 - inv), static_cast<unsigned>(2 * m + 1));
}

struct CriticalData {
  double cp_P = 0;
  double cv_P = 0;
  double cp_Q1 = 0;
  double cp_Q2 = 0;
  double cv_Q = 0;
  double log_cv_Q = 0;  // natural log, valid for every m
};

inline CriticalData critical_data(int m) {
  if (m < 2) throw DomainError("critical_data: m must be >= 2");
  const double md = m;
  CriticalData c;
  c.cp_P = -1.0 / (md + 1.0);
  // -m^m/(m+1)^{m+1} = -(1/(m+1)) (m/(m+1))^m
  c.cv_P = -std::pow(md / (md + 1.0), md) / (md + 1.0);
  const double s1 = std::sqrt(md + 1.0);
  const double s0 = std::sqrt(md);
  c.cp_Q1 = (s1 + s0) * (s1 + s0);
  // conjugate surd, written to avoid cancellation
  c.cp_Q2 = 1.0 / c.cp_Q1;
  c.log_cv_Q = std::log(4.0 * (md + 1.0)) + md * std::log1p(1.0 / md);
  c.cv_Q = std::exp(c.log_cv_Q);
  return c;
}

// Q_2(z) = Q(z) - z - (4m+2) - (8m(m+1)+1)/z.
inline cplx q_remainder(int m, cplx z) {
  if (std::abs(z) <= 1.0) throw DomainError("q_remainder: requires |z| > 1");
  const double md = m;
  return eval_Q(m, z) - z - (4.0 * md + 2.0) - (8.0 * md * (md + 1.0) + 1.0) / z;
}

inline double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

struct Q2MaxTerms {
  double cubic = 0;   // 8 C(2m,3) / (r(r-1))
  double linear = 0;  // 16m / (r(r-1))
  double quartic = 0;
  double square = 0;
  double total() const { return cubic + linear + quartic + square; }
};

inline Q2MaxTerms q2_max_terms(int m, double r) {
  if (!(r > 1.0)) throw DomainError("q2_max: requires r > 1");
  const double md = m;
  const double ratio = (r + 1.0) / (r - 1.0);
  Q2MaxTerms t;
  t.cubic = 8.0 * binomial(2 * m, 3) / (r * (r - 1.0));
  t.linear = 16.0 * md / (r * (r - 1.0));
  t.quartic = 2.0 * (2 * md) * (2 * md - 1) * (2 * md - 2) * (2 * md - 3) / (3.0 * r * (r - 1.0) * (r - 1.0)) *
              std::pow(ratio, 2 * md - 4);
  t.square = 8.0 * (2 * md) * (2 * md - 1) / ((r - 1.0) * (r - 1.0)) * std::pow(ratio, 2 * md - 2);
  return t;
}

inline double q2_max(int m, double r) { return q2_max_terms(m, r).total(); }

// Joukowski ellipse zeta(w) = e1 w + e0 + em1 / w restricted to |w| = r.
struct EllipseSpec {
  double e1 = 0.84;
  double e0 = -0.18;
  double em1 = 0.6;
  double r = 1.0;

  double a() const { return e1 * r + em1 / r; }
  double b() const { return e1 * r - em1 / r; }

  cplx zeta(cplx w) const { return e1 * w + e0 + em1 / w; }
  cplx boundary_point(double theta) const { return zeta(std::polar(r, theta)); }

  // ((x-e0)/a)^2 + (y/b)^2 - 1, zero on the ellipse.
  double implicit_residual(cplx z) const {
    const double u = (z.real() - e0) / a();
    const double v = z.imag() / b();
    return u * u + v * v - 1.0;
  }
};

struct Sector {
  cplx vertex{0.0, 0.0};
  double half_angle = kPi / 5;
};

inline bool sector_contains(const Sector& s, cplx z) {
  if (z == s.vertex) return false;
  return std::abs(std::arg(z - s.vertex)) < s.half_angle;
}

enum class PsiMap { psi0, psi0_inv, psi1, psi1_inv_plus, psi1_inv_minus };

// psi0(z) = -4/z, psi1(z) = -4z/(1+z)^2 and the two inverse branches of psi1
// on C minus (-inf, -1]: the plus branch lands outside the closed unit disk,
// the minus branch inside the unit disk.
inline cplx psi_map(cplx z, PsiMap which) {
  switch (which) {
    case PsiMap::psi0:
    case PsiMap::psi0_inv:
      if (z == cplx{0.0, 0.0}) throw DomainError("psi0: singular at 0");
      return -4.0 / z;
    case PsiMap::psi1:
      if (z == cplx{-1.0, 0.0}) throw DomainError("psi1: singular at -1");
      return -4.0 * z / ((1.0 + z) * (1.0 + z));
    case PsiMap::psi1_inv_plus:
    case PsiMap::psi1_inv_minus: {
      if (z.imag() == 0.0 && z.real() <= -1.0) throw DomainError("psi1 inverse: z on the slit (-inf, -1]");
      cplx s = std::sqrt(1.0 + z);  // principal, Re s > 0 off the slit
      if (which == PsiMap::psi1_inv_minus) s = -s;
      return (s + 1.0) / (1.0 - s);
    }
  }
  throw DomainError("psi_map: unknown map");
}

struct StructuralConstants {
  double eta = 0;
  double rho = 0.07;
  double log10_R = 0;
  double log10_R1 = 0;
  std::optional<double> R;   // empty when 2.66e m overflows a double
  std::optional<double> R1;
};

inline StructuralConstants structural_constants(int m) {
  if (m < 2) throw DomainError("structural_constants: m must be >= 2");
  const double md = m;
  StructuralConstants s;
  s.eta = (std::log(12.0 * (md + 1.0)) + (2.0 + 2.0 * md) * std::log(30.0) + 1.0) / kTwoPi;
  s.log10_R = std::log10(2.66) + md;
  s.log10_R1 = std::log10(2.39) + md;
  constexpr double kMaxLog10 = 308.0;
  if (s.log10_R < kMaxLog10) s.R = 2.66 * std::pow(10.0, md);
  if (s.log10_R1 < kMaxLog10) s.R1 = 2.39 * std::pow(10.0, md);
  return s;
}

}  // namespace parabolica
