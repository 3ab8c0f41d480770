// SPDX-License-Identifier: Apache-2.0
//
// Attracting and repelling Fatou coordinates of the parabolic germ
// f(z) = z (1+z)^m, the horn map, parabolic renormalization and the
// near-parabolic return of f_alpha.
//
// Everything is computed in the chart u = -1/(a2 z), where
// F(u) = u + 1 + b1/u + O(u^-2). Far out in a petal the asymptotic template
//   T(u) = u - b1 Log(+-u) + sum_k c_k u^-k
// is a Fatou coordinate up to O(|u|^-(K+1)); points are pushed there by
// iterating F (attracting) or a local inverse of F (repelling).
#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include "parabolica/core.hpp"
#include "parabolica/family.hpp"
#include "parabolica/series.hpp"

namespace parabolica {

enum class PetalKind { attracting, repelling };

struct FatouConfig {
  double template_radius = 200.0;   // |u| at which the template takes over
  int template_order = 12;
  std::int64_t max_steps = 10'000'000;
  double horn_threshold = 6.0;      // L'': |Im z| needed by the horn map
  double measure_height = 10.0;     // where c_upper, c_lower are read off
};

struct ParabolicGerm {
  int m = 2;
  cplx alpha{0.0, 0.0};
  cplx a2{2.0, 0.0};
  cplx b1{0.75, 0.0};
  std::vector<cplx> c;  // template coefficients c_1..c_K (c[0] unused)

  double b1_closed_form() const { return (m + 1.0) / (2.0 * m); }
};

namespace detail {

// Returns S(x) = F(u)/u with x = 1/u for f(z) = z (1+z)^m, i.e. (1 - x/a2)^-m.
inline Series chart_quotient(int m, cplx a2, int K) {
  Series g = Series::constant(K, 1.0);
  g[1] = -1.0 / a2;
  return g.pow(static_cast<unsigned>(m)).reciprocal();
}

}  // namespace detail

// Builds the germ and its template coefficients by formal conjugation.
inline ParabolicGerm make_germ(int m, int order = 12) {
  if (m < 2) throw DomainError("make_germ: m must be >= 2");
  if (order < 1) throw DomainError("make_germ: template order must be >= 1");
  ParabolicGerm g;
  g.m = m;
  g.a2 = static_cast<double>(m);
  const int K = order + 2;
  const Series S = detail::chart_quotient(m, g.a2, K);
  if (std::abs(S[1] - 1.0) > 1e-12) throw ConvergenceError("make_germ: chart is not normalized");
  g.b1 = S[2];
  if (std::abs(g.b1 - g.b1_closed_form()) > 1e-10) throw ConvergenceError("make_germ: iterative residue mismatch");

  const Series logS = S.log1();
  // D(x) = (S-1)/x - 1 - b1 log S
  Series R(K);
  for (int k = 0; k < K; ++k) R[k] = S[k + 1];
  R[0] -= 1.0;
  R -= g.b1 * logS;
  if (std::abs(R[0]) > 1e-12 || std::abs(R[1]) > 1e-12) throw ConvergenceError("make_germ: template mismatch");

  const Series Sinv = S.reciprocal();
  g.c.assign(static_cast<std::size_t>(order) + 1, cplx{});
  for (int k = 1; k <= order; ++k) {
    g.c[static_cast<std::size_t>(k)] = R[k + 1] / static_cast<double>(k);
    // R += c_k x^k (S^-k - 1)
    Series t = Sinv.pow(static_cast<unsigned>(k));
    t[0] -= 1.0;
    for (int j = K; j >= 0; --j) t[j] = j >= k ? t[j - k] : cplx{};
    R += g.c[static_cast<std::size_t>(k)] * t;
  }
  return g;
}

inline cplx to_infinity_chart(const ParabolicGerm& g, cplx z) {
  if (z == cplx{0.0, 0.0}) throw DomainError("to_infinity_chart: z = 0");
  return -1.0 / (g.a2 * z);
}

inline cplx from_infinity_chart(const ParabolicGerm& g, cplx u) {
  if (u == cplx{0.0, 0.0}) throw DomainError("from_infinity_chart: u = 0");
  return -1.0 / (g.a2 * u);
}

// F(u) = u / (1+z)^m with z = -1/(a2 u)
inline cplx chart_map(const ParabolicGerm& g, cplx u) {
  const cplx z = from_infinity_chart(g, u);
  return u / ipow(1.0 + z, static_cast<unsigned>(g.m));
}

inline cplx chart_map_prime(const ParabolicGerm& g, cplx u) {
  const cplx z = from_infinity_chart(g, u);
  // log F = log u - m log(1+z), dz/du = -z/u
  const cplx F = u / ipow(1.0 + z, static_cast<unsigned>(g.m));
  return F * (1.0 / u + static_cast<double>(g.m) * z / (u * (1.0 + z)));
}

// The branch of F^-1 close to u -> u - 1.
inline cplx chart_map_inverse(const ParabolicGerm& g, cplx u) {
  cplx v = u - 1.0 - g.b1 / u;
  for (int it = 0; it < 50; ++it) {
    const cplx step = (chart_map(g, v) - u) / chart_map_prime(g, v);
    v -= step;
    if (std::abs(step) <= 1e-15 * std::max(1.0, std::abs(v))) break;
  }
  if (!(std::abs(v - (u - 1.0)) < 0.5 * std::max(1.0, std::abs(u))))
    throw ConvergenceError("chart_map_inverse: no preimage near u - 1");
  return v;
}

inline cplx template_log(cplx u, PetalKind kind) { return kind == PetalKind::attracting ? std::log(u) : std::log(-u); }

inline cplx template_value(const ParabolicGerm& g, cplx u, PetalKind kind) {
  const cplx x = 1.0 / u;
  cplx tail{};
  for (std::size_t k = g.c.size(); k-- > 1;) tail = (tail + g.c[k]) * x;
  return u - g.b1 * template_log(u, kind) + tail;
}

inline cplx template_prime(const ParabolicGerm& g, cplx u) {
  const cplx x = 1.0 / u;
  cplx tail{};
  for (std::size_t k = g.c.size(); k-- > 1;) tail = tail * x - static_cast<double>(k) * g.c[k];
  // tail = -sum k c_k x^{k-1}; derivative of c_k u^-k is -k c_k u^-k-1
  return 1.0 - g.b1 * x + tail * x * x;
}

inline cplx template_inverse(const ParabolicGerm& g, cplx w, PetalKind kind) {
  cplx u = w + g.b1 * template_log(w, kind);
  for (int it = 0; it < 60; ++it) {
    const cplx step = (template_value(g, u, kind) - w) / template_prime(g, u);
    u -= step;
    if (std::abs(step) <= 1e-15 * std::abs(u)) return u;
  }
  throw ConvergenceError("template_inverse: outside the petal");
}

// Fatou coordinate of one petal. The attracting one is shifted so that it
// takes the value 1 at the critical value.
class FatouCoordinate {
 public:
  FatouCoordinate(ParabolicGerm germ, PetalKind kind, FatouConfig cfg = {})
      : germ_(std::move(germ)), kind_(kind), cfg_(cfg) {
    if (kind_ == PetalKind::attracting) {
      const cplx cv = critical_data(germ_.m).cv_P;
      offset_ = 1.0 - raw(cv, 1e-13);
    }
  }

  PetalKind kind() const { return kind_; }
  const ParabolicGerm& germ() const { return germ_; }
  cplx normalization_offset() const { return offset_; }
  const FatouConfig& config() const { return cfg_; }
  std::int64_t last_steps() const { return steps_; }

  cplx operator()(cplx z, double tol = 1e-12) const { return raw(z, tol) + offset_; }

  // Repelling only: solve the template far to the left, then push forward.
  cplx inverse(cplx w) const {
    if (kind_ != PetalKind::repelling) throw DomainError("FatouCoordinate::inverse: repelling coordinate only");
    const double R = cfg_.template_radius;
    const double shift = std::max(0.0, std::ceil(w.real() - offset_.real() + R));
    if (shift > static_cast<double>(cfg_.max_steps)) throw DomainError("phi_rep_inverse: point too far right");
    const auto n = static_cast<std::int64_t>(shift);
    cplx u = template_inverse(germ_, w - offset_ - shift, kind_);
    if (u.real() > 0.0) throw ConvergenceError("phi_rep_inverse: outside repelling petal");
    for (std::int64_t k = 0; k < n; ++k) u = chart_map(germ_, u);
    return from_infinity_chart(germ_, u);
  }

 private:
  bool in_template_zone(cplx u) const {
    const double R = cfg_.template_radius;
    if (kind_ == PetalKind::attracting) return u.real() >= R && std::abs(u.imag()) <= u.real();
    return u.real() <= -R && std::abs(u.imag()) <= -u.real();
  }

  cplx step(cplx u) const {
    return kind_ == PetalKind::attracting ? chart_map(germ_, u) : chart_map_inverse(germ_, u);
  }

  // T(u_N) -/+ N, accepted once depths N and N+1 agree to tol.
  cplx raw(cplx z, double tol) const {
    cplx u = to_infinity_chart(germ_, z);
    const double sign = kind_ == PetalKind::attracting ? -1.0 : 1.0;
    std::int64_t n = 0;
    while (!in_template_zone(u)) {
      if (++n > cfg_.max_steps)
        throw ConvergenceError(kind_ == PetalKind::attracting ? "phi_att: outside attracting petal"
                                                              : "phi_rep: outside repelling petal");
      u = step(u);
      if (!std::isfinite(std::abs(u))) throw ConvergenceError("Fatou coordinate: orbit left the chart");
    }
    cplx v0 = template_value(germ_, u, kind_) + sign * static_cast<double>(n);
    for (int extra = 0; extra < 64; ++extra) {
      u = step(u);
      ++n;
      const cplx v1 = template_value(germ_, u, kind_) + sign * static_cast<double>(n);
      if (std::abs(v1 - v0) <= tol * std::max(1.0, std::abs(v1))) {
        steps_ = n;
        return v1;
      }
      v0 = v1;
    }
    throw ConvergenceError("Fatou coordinate: depths N and N+1 disagree");
  }

  ParabolicGerm germ_;
  PetalKind kind_;
  FatouConfig cfg_;
  cplx offset_{0.0, 0.0};
  mutable std::int64_t steps_ = 0;
};

inline cplx phi_att(const FatouCoordinate& att, cplx z, double tol = 1e-12) { return att(z, tol); }
inline cplx phi_rep(const FatouCoordinate& rep, cplx z, double tol = 1e-12) { return rep(z, tol); }
inline cplx phi_rep_inverse(const FatouCoordinate& rep, cplx w) { return rep.inverse(w); }

// E = Phi_att o Phi_rep^-1 minus the constant it approaches at the upper end.
class HornMap {
 public:
  explicit HornMap(int m, FatouConfig cfg = {})
      : att_(make_germ(m, cfg.template_order), PetalKind::attracting, cfg),
        rep_(att_.germ(), PetalKind::repelling, cfg),
        cfg_(cfg) {
    c_upper_ = measure(cfg_.measure_height);
    c_lower_ = measure(-cfg_.measure_height);
  }

  const FatouCoordinate& attracting() const { return att_; }
  const FatouCoordinate& repelling() const { return rep_; }
  const FatouConfig& config() const { return cfg_; }
  int m() const { return att_.germ().m; }

  cplx c_upper() const { return c_upper_; }
  cplx c_lower() const { return c_lower_; }
  // (c_upper - c_lower) / (2 pi i)
  cplx residue_ratio() const { return (c_upper_ - c_lower_) / (kTwoPi * kI); }

  cplx unnormalized(cplx z) const { return att_(rep_.inverse(z)); }

  cplx operator()(cplx z) const {
    if (std::abs(z.imag()) < cfg_.horn_threshold) throw DomainError("horn_map: |Im z| below threshold");
    return unnormalized(z) - c_upper_;
  }

 private:
  cplx measure(double height) const {
    cplx acc{};
    constexpr int kSamples = 4;
    for (int j = 0; j < kSamples; ++j) {
      const cplx z{static_cast<double>(j) / kSamples, height};
      acc += unnormalized(z) - z;
    }
    return acc / static_cast<double>(kSamples);
  }

  FatouCoordinate att_;
  FatouCoordinate rep_;
  FatouConfig cfg_;
  cplx c_upper_{};
  cplx c_lower_{};
};

inline cplx horn_map(const HornMap& E, cplx z) { return E(z); }

// R0 f(w) = exp(2 pi i E(log(w)/(2 pi i))), extended by R0 f(0) = 0.
inline cplx parabolic_renorm(const HornMap& E, cplx w) {
  if (w == cplx{0.0, 0.0}) return w;
  const double limit = std::exp(-kTwoPi * E.config().horn_threshold);
  if (!(std::abs(w) < limit)) throw DomainError("parabolic_renorm: w outside the punctured disk");
  const cplx z = std::log(w) / (kTwoPi * kI);  // Im z = -log|w| / 2 pi >= L''
  return w * std::exp(kTwoPi * kI * (E(z) - z));
}

inline double parabolic_renorm_radius(const HornMap& E) { return std::exp(-kTwoPi * E.config().horn_threshold); }

struct NearParabolicOptions {
  double alpha_max = 1e-2;
  double slack = 2.0;  // template pre-filter width in Fatou units
  double min_height = 6.0;
};

struct NearParabolicReturn {
  std::int64_t n = 0;   // iterations until re-entry
  cplx value{};         // Phi_rep(z_n) - n
  cplx model{};         // E(w) - 1/alpha
  double discrepancy = 0.0;
  cplx sigma{};         // the fixed point bifurcating from 0
};

// Nonzero fixed point of f_alpha near -2 pi i alpha / a2.
inline cplx bifurcating_fixed_point(const FamilyParams& p) {
  const cplx lambda = p.multiplier();
  cplx z = -kTwoPi * kI * p.alpha / (lambda * static_cast<double>(p.m));
  for (int it = 0; it < 60; ++it) {
    // (1+z)^m - 1/lambda = 0
    const cplx h = ipow(1.0 + z, static_cast<unsigned>(p.m)) - 1.0 / lambda;
    const cplx dh = static_cast<double>(p.m) * ipow(1.0 + z, static_cast<unsigned>(p.m - 1));
    const cplx step = h / dh;
    z -= step;
    if (std::abs(step) <= 1e-16 * std::max(std::abs(z), 1e-300)) break;
  }
  return z;
}

// Lifts w by the unperturbed repelling coordinate, iterates f_alpha and stops
// at the first n >= 1 whose repelling coordinate lands back in the strip
// |Re(. - w)| <= 1/2 at the same end of the cylinder as w.
inline NearParabolicReturn near_parabolic_return(const HornMap& E, const FamilyParams& p, cplx w,
                                                 const NearParabolicOptions& o = {}) {
  if (p.m != E.m()) throw DomainError("near_parabolic_return: degree mismatch with horn map");
  const cplx a = p.alpha;
  if (a == cplx{0.0, 0.0} || std::abs(a) > o.alpha_max || std::abs(std::arg(a)) >= kPi / 4)
    throw DomainError("near_parabolic_return: need 0 < |alpha| <= alpha*, |arg alpha| < pi/4");
  if (w.imag() < o.min_height) throw DomainError("near_parabolic_return: need Im w >= min_height (upper end)");

  const auto& rep = E.repelling();
  const auto& germ = rep.germ();
  const double bailout = 2.0 + std::pow(2.0, 1.0 / p.m);
  const auto max_iter = static_cast<std::int64_t>(10.0 * std::ceil(1.0 / std::abs(a)));
  cplx z = rep.inverse(w);
  NearParabolicReturn out;
  out.sigma = bifurcating_fixed_point(p);
  for (std::int64_t k = 1; k <= max_iter; ++k) {
    z = eval_P_alpha(p, z);
    if (!(std::abs(z) <= bailout)) throw ConvergenceError("near_parabolic_return: orbit escaped, no return");
    if (z == cplx{0.0, 0.0}) continue;
    const cplx u = to_infinity_chart(germ, z);
    const cplx guess = template_value(germ, u, PetalKind::repelling) + rep.normalization_offset();
    if (std::abs(guess.real() - w.real()) > 0.5 + o.slack) continue;
    cplx v;
    try {
      v = rep(z);
    } catch (const ConvergenceError&) {
      continue;
    }
    // near w again, not a crossing of the far half of the loop
    const bool same_end = std::abs(v.imag() - w.imag()) <= 0.5 * std::abs(w.imag());
    if (std::abs(v.real() - w.real()) <= 0.5 && same_end) {
      out.n = k;
      out.value = v - static_cast<double>(k);
      out.model = E.unnormalized(w) - E.c_upper() - 1.0 / a;
      out.discrepancy = std::abs(out.value - out.model);
      return out;
    }
  }
  throw ConvergenceError("near_parabolic_return: no return within 10 ceil(1/|alpha|) iterations");
}

}  // namespace parabolica
