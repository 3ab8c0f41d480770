// SPDX-License-Identifier: Apache-2.0
//
// Escape-time rendering of filled Julia sets of P_alpha, pixel-count area and
// density, a grid proxy for the Siegel disk and the K(delta) experiments.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <functional>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "parabolica/contfrac.hpp"
#include "parabolica/core.hpp"
#include "parabolica/explosion.hpp"
#include "parabolica/family.hpp"

namespace parabolica {

// Past this radius |P_alpha(z)| >= 2|z|, so an orbit that crosses it escapes.
inline double min_bailout(int m) { return 2.0 + std::pow(2.0, 1.0 / m); }

struct GridSpec {
  cplx center{0.0, 0.0};
  double half_width = 2.0;
  int resolution = 256;
  int max_iter = 1000;
  double bailout = 0.0;  // 0 picks min_bailout(m)

  double step() const { return 2.0 * half_width / resolution; }
  double pixel_area() const { return step() * step(); }

  // column i from the left, row j from the top
  cplx pixel_center(int i, int j) const {
    const double h = step();
    return {center.real() - half_width + (i + 0.5) * h, center.imag() + half_width - (j + 0.5) * h};
  }

  // nearest pixel, or nullopt outside the frame
  std::optional<std::pair<int, int>> pixel_of(cplx z) const {
    const double h = step();
    const double u = (z.real() - (center.real() - half_width)) / h;
    const double v = ((center.imag() + half_width) - z.imag()) / h;
    if (!(u >= 0.0 && v >= 0.0 && u < resolution && v < resolution)) return std::nullopt;
    return std::make_pair(static_cast<int>(u), static_cast<int>(v));
  }

  GridSpec resolved(int m) const {
    GridSpec g = *this;
    if (g.bailout == 0.0) g.bailout = min_bailout(m);
    g.validate(m);
    return g;
  }

  void validate(int m) const {
    if (resolution < 2) throw DomainError("GridSpec: resolution must be >= 2");
    if (!(half_width > 0.0)) throw DomainError("GridSpec: half_width must be positive");
    if (max_iter < 1) throw DomainError("GridSpec: max_iter must be >= 1");
    if (bailout < min_bailout(m)) throw DomainError("GridSpec: bailout below 2 + 2^(1/m)");
  }
};

struct Mask {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> bits;

  Mask() = default;
  Mask(int w, int h, std::uint8_t fill = 0) : width(w), height(h), bits(static_cast<std::size_t>(w) * h, fill) {}

  std::uint8_t& at(int i, int j) { return bits[static_cast<std::size_t>(j) * width + i]; }
  std::uint8_t at(int i, int j) const { return bits[static_cast<std::size_t>(j) * width + i]; }
  std::size_t count() const { return static_cast<std::size_t>(std::count(bits.begin(), bits.end(), std::uint8_t{1})); }
};

namespace detail {

// Splits rows over hardware threads; each row is written by exactly one thread.
template <typename RowFn>
void parallel_rows(int rows, RowFn&& fn) {
  const unsigned hw = std::max(1U, std::thread::hardware_concurrency());
  const int workers = static_cast<int>(std::min<unsigned>(hw, static_cast<unsigned>(rows)));
  if (workers <= 1) {
    for (int j = 0; j < rows; ++j) fn(j);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&, w] {
      for (int j = w; j < rows; j += workers) fn(j);
    });
  for (auto& t : pool) t.join();
}

}  // namespace detail

// First n >= 1 with |z_n| > bailout; nullopt means bounded for max_iter steps.
inline std::optional<int> escape_time(const FamilyParams& p, cplx z, const GridSpec& spec) {
  const GridSpec g = spec.resolved(p.m);
  const cplx lam = p.multiplier();
  const double b2 = g.bailout * g.bailout;
  const auto m = static_cast<unsigned>(p.m);
  for (int n = 1; n <= g.max_iter; ++n) {
    z = lam * z * ipow(1.0 + z, m);
    if (std::norm(z) > b2) return n;
  }
  return std::nullopt;
}

inline Mask filled_julia_mask(const FamilyParams& p, const GridSpec& spec) {
  const GridSpec g = spec.resolved(p.m);
  Mask mask(g.resolution, g.resolution);
  detail::parallel_rows(g.resolution, [&](int j) {
    for (int i = 0; i < g.resolution; ++i) mask.at(i, j) = escape_time(p, g.pixel_center(i, j), g) ? 0 : 1;
  });
  return mask;
}

// Grey levels 0..255: fraction of the k x k subpixels that stay bounded.
inline std::vector<std::uint8_t> render_grey(const FamilyParams& p, const GridSpec& spec, int supersample = 1) {
  const GridSpec g = spec.resolved(p.m);
  if (supersample < 1) throw DomainError("render_grey: supersample must be >= 1");
  std::vector<std::uint8_t> out(static_cast<std::size_t>(g.resolution) * g.resolution, 0);
  const double h = g.step();
  const int k = supersample;
  detail::parallel_rows(g.resolution, [&](int j) {
    for (int i = 0; i < g.resolution; ++i) {
      int bounded = 0;
      const cplx c = g.pixel_center(i, j);
      for (int a = 0; a < k; ++a)
        for (int b = 0; b < k; ++b) {
          const cplx z = c + cplx{((a + 0.5) / k - 0.5) * h, -((b + 0.5) / k - 0.5) * h};
          if (!escape_time(p, z, g)) ++bounded;
        }
      out[static_cast<std::size_t>(j) * g.resolution + i] =
          static_cast<std::uint8_t>((255 * bounded + (k * k) / 2) / (k * k));
    }
  });
  return out;
}

struct AreaEstimate {
  double value = 0.0;
  int resolution = 0;
  int max_iter = 0;
  std::size_t inner_count = 0;  // bounded after max_iter
  std::size_t outer_count = 0;  // certified escapes
};

inline AreaEstimate area_estimate(const FamilyParams& p, const GridSpec& spec) {
  const GridSpec g = spec.resolved(p.m);
  const Mask mask = filled_julia_mask(p, g);
  AreaEstimate a;
  a.resolution = g.resolution;
  a.max_iter = g.max_iter;
  a.inner_count = mask.count();
  a.outer_count = mask.bits.size() - a.inner_count;
  a.value = static_cast<double>(a.inner_count) * g.pixel_area();
  return a;
}

struct AreaRefinement {
  AreaEstimate coarse;
  AreaEstimate fine;  // twice the resolution
  double relative_change = 0.0;
};

inline AreaRefinement area_refinement(const FamilyParams& p, const GridSpec& spec) {
  AreaRefinement r;
  r.coarse = area_estimate(p, spec);
  GridSpec fine = spec;
  fine.resolution *= 2;
  r.fine = area_estimate(p, fine);
  const double base = std::max(r.coarse.value, r.fine.value);
  r.relative_change = base > 0.0 ? std::fabs(r.fine.value - r.coarse.value) / base : 0.0;
  return r;
}

inline double dens(const Mask& U, const Mask& X) {
  if (U.width != X.width || U.height != X.height) throw DomainError("dens: U and X live on different grids");
  std::size_t in_u = 0, both = 0;
  for (std::size_t k = 0; k < U.bits.size(); ++k) {
    if (!U.bits[k]) continue;
    ++in_u;
    if (X.bits[k]) ++both;
  }
  if (in_u == 0) throw DomainError("dens: U is empty");
  return static_cast<double>(both) / static_cast<double>(in_u);
}

// U is the whole frame of `spec`; X is tested at pixel centres.
inline double dens(const GridSpec& U, const std::function<bool(cplx)>& X) {
  if (U.resolution < 1) throw DomainError("dens: U is empty");
  std::vector<std::size_t> row_hits(static_cast<std::size_t>(U.resolution), 0);
  detail::parallel_rows(U.resolution, [&](int j) {
    std::size_t c = 0;
    for (int i = 0; i < U.resolution; ++i)
      if (X(U.pixel_center(i, j))) ++c;
    row_hits[static_cast<std::size_t>(j)] = c;
  });
  std::size_t hits = 0;
  for (auto c : row_hits) hits += c;
  return static_cast<double>(hits) / (static_cast<double>(U.resolution) * U.resolution);
}

namespace detail {

// squared 1-d distance transform (Felzenszwalb-Huttenlocher lower envelope);
// empty cells carry kFar instead of infinity so the parabola algebra stays finite
constexpr double kFar = 1e20;

inline void edt_1d(const std::vector<double>& f, std::vector<double>& d) {
  const int n = static_cast<int>(f.size());
  std::vector<int> v(static_cast<std::size_t>(n));
  std::vector<double> z(static_cast<std::size_t>(n) + 1);
  int k = 0;
  v[0] = 0;
  z[0] = -std::numeric_limits<double>::infinity();
  z[1] = std::numeric_limits<double>::infinity();
  for (int q = 1; q < n; ++q) {
    double s;
    while (true) {
      const int p = v[k];
      s = ((f[q] + double(q) * q) - (f[p] + double(p) * p)) / (2.0 * (q - p));
      if (s <= z[k] && k > 0) {
        --k;
        continue;
      }
      break;
    }
    ++k;
    v[k] = q;
    z[k] = s;
    z[k + 1] = std::numeric_limits<double>::infinity();
  }
  d.resize(static_cast<std::size_t>(n));
  k = 0;
  for (int q = 0; q < n; ++q) {
    while (z[k + 1] < q) ++k;
    const double dq = q - v[k];
    d[q] = dq * dq + f[v[k]];
  }
}

}  // namespace detail

// Euclidean distance (in pixels) from each pixel centre to the nearest set pixel.
inline std::vector<double> distance_transform(const Mask& mask) {
  const int w = mask.width, h = mask.height;
  if (mask.count() == 0) return std::vector<double>(static_cast<std::size_t>(w) * h, std::numeric_limits<double>::infinity());
  std::vector<double> g(static_cast<std::size_t>(w) * h, detail::kFar);
  std::vector<double> f, d;
  for (int i = 0; i < w; ++i) {
    f.assign(static_cast<std::size_t>(h), detail::kFar);
    for (int j = 0; j < h; ++j)
      if (mask.at(i, j)) f[j] = 0.0;
    detail::edt_1d(f, d);
    for (int j = 0; j < h; ++j) g[static_cast<std::size_t>(j) * w + i] = d[j];
  }
  for (int j = 0; j < h; ++j) {
    f.assign(g.begin() + static_cast<std::ptrdiff_t>(j) * w, g.begin() + static_cast<std::ptrdiff_t>(j + 1) * w);
    detail::edt_1d(f, d);
    for (int i = 0; i < w; ++i) g[static_cast<std::size_t>(j) * w + i] = std::sqrt(d[i]);
  }
  return g;
}

struct SiegelProxyOptions {
  double ring_fraction = 0.95;
  // orbit must come back within this many pixel widths of its start
  bool require_recurrence = true;
  double recurrence_pixels = 1.5;
};

namespace detail {

inline Mask component_of(const Mask& allowed, int i0, int j0) {
  Mask out(allowed.width, allowed.height);
  if (!allowed.at(i0, j0)) return out;
  std::deque<std::pair<int, int>> queue{{i0, j0}};
  out.at(i0, j0) = 1;
  while (!queue.empty()) {
    const auto [i, j] = queue.front();
    queue.pop_front();
    const int di[4] = {1, -1, 0, 0};
    const int dj[4] = {0, 0, 1, -1};
    for (int k = 0; k < 4; ++k) {
      const int a = i + di[k], b = j + dj[k];
      if (a < 0 || b < 0 || a >= allowed.width || b >= allowed.height) continue;
      if (!allowed.at(a, b) || out.at(a, b)) continue;
      out.at(a, b) = 1;
      queue.emplace_back(a, b);
    }
  }
  return out;
}

}  // namespace detail

// Grid stand-in for the Siegel disk: pixels that stay inside 0.95 * bailout
// (and, by default, whose orbits recur), 4-connected to the pixel holding 0.
inline Mask siegel_proxy(const FamilyParams& p, const GridSpec& spec, const SiegelProxyOptions& opt = {}) {
  const GridSpec g = spec.resolved(p.m);
  const auto origin = g.pixel_of(cplx{0.0, 0.0});
  if (!origin) throw DomainError("siegel_proxy: frame does not contain 0");
  const cplx lam = p.multiplier();
  const auto m = static_cast<unsigned>(p.m);
  const double ring2 = std::pow(opt.ring_fraction * g.bailout, 2);
  const double tol2 = std::pow(opt.recurrence_pixels * g.step(), 2);
  Mask allowed(g.resolution, g.resolution);
  detail::parallel_rows(g.resolution, [&](int j) {
    for (int i = 0; i < g.resolution; ++i) {
      const cplx z0 = g.pixel_center(i, j);
      cplx z = z0;
      bool ok = true;
      bool returned = !opt.require_recurrence;
      for (int n = 1; n <= g.max_iter; ++n) {
        z = lam * z * ipow(1.0 + z, m);
        if (std::norm(z) > ring2) {
          ok = false;
          break;
        }
        if (!returned && std::norm(z - z0) < tol2) returned = true;
      }
      allowed.at(i, j) = (ok && returned) ? 1 : 0;
    }
  });
  return detail::component_of(allowed, origin->first, origin->second);
}

// Reference set with its distance field, for K(delta) queries.
struct SiegelReference {
  GridSpec grid;
  Mask mask;
  std::vector<double> distance;  // world units

  SiegelReference(const GridSpec& g, Mask m) : grid(g), mask(std::move(m)) {
    distance = distance_transform(mask);
    for (auto& d : distance) d *= grid.step();
  }

  // nullopt outside the frame
  std::optional<double> distance_at(cplx z) const {
    const auto px = grid.pixel_of(z);
    if (!px) return std::nullopt;
    return distance[static_cast<std::size_t>(px->second) * grid.resolution + px->first];
  }
};

inline SiegelReference make_siegel_reference(const FamilyParams& p, const GridSpec& spec,
                                             const SiegelProxyOptions& opt = {}) {
  const GridSpec g = spec.resolved(p.m);
  return SiegelReference(g, siegel_proxy(p, g, opt));
}

// Orbit stays within delta of the reference set for max_iter steps. Leaving
// the frame counts as too far; running out of steps counts as membership.
inline bool k_delta_membership(const FamilyParams& p, cplx z, double delta, const SiegelReference& ref, int max_iter) {
  if (!(delta > 0.0)) throw DomainError("k_delta_membership: delta must be positive");
  const cplx lam = p.multiplier();
  const auto m = static_cast<unsigned>(p.m);
  for (int n = 0; n <= max_iter; ++n) {
    const auto d = ref.distance_at(z);
    if (!d || !(*d < delta)) return false;
    z = lam * z * ipow(1.0 + z, m);
  }
  return true;
}

// Fraction of an n x n sample of the square |Re|,|Im| <= radius around c lying in K(delta).
inline double k_delta_density(const FamilyParams& p, const SiegelReference& ref, cplx c, double radius, double delta,
                              int samples, int max_iter) {
  GridSpec sq;
  sq.center = c;
  sq.half_width = radius;
  sq.resolution = samples;
  return dens(sq, [&](cplx z) { return k_delta_membership(p, z, delta, ref, max_iter); });
}

struct PerturbedDensityReport {
  int n = 0;
  std::int64_t A_n = 0;
  std::int64_t N = 0;
  BigInt q_n = 0;
  double alpha = 0.0;    // base rotation number
  double alpha_n = 0.0;  // perturbed one
  double eps_n = 0.0;
  double dens = 0.0;                     // share of U in the proxy Siegel disk of alpha_n
  double predicted_core_fraction = 0.0;  // share of U inside X_n(rho), identity chart
  std::size_t u_pixels = 0;
};

inline constexpr int kMaxDeskQ = 30;

// Base rotation number: base_entries with the last entry repeated forever.
// U is the Siegel proxy of the base map on `spec`.
inline PerturbedDensityReport perturbed_density_experiment(int m, const std::vector<std::int64_t>& base_entries, int n,
                                                           std::int64_t A_n, std::int64_t N, double rho,
                                                           const GridSpec& spec,
                                                           const SiegelProxyOptions& opt = {}) {
  PerturbedSequenceSpec ps{base_entries, A_n, N, n};
  ps.validate();
  const auto cv = convergents(std::vector<std::int64_t>(base_entries.begin(), base_entries.begin() + n + 1));
  const BigInt q_n = cv.back().q;
  const GridSpec g = spec.resolved(m);
  if (q_n > kMaxDeskQ) {
    std::ostringstream os;
    os << "perturbed_density_experiment: q_n = " << q_n << " exceeds " << kMaxDeskQ
       << "; resolving the perturbed Siegel disk needs on the order of q_n^2 * " << g.resolution << "^2 * "
       << g.max_iter << " map evaluations";
    throw DomainError(os.str());
  }
  if (!(rho > 0.0)) throw DomainError("perturbed_density_experiment: rho must be positive");

  PerturbedDensityReport r;
  r.n = n;
  r.A_n = A_n;
  r.N = N;
  r.q_n = q_n;
  r.alpha = static_cast<double>(value_of(from_entries(base_entries, periodic_tail(base_entries.back()))));
  r.alpha_n = ps.value();
  r.eps_n = epsilon_n(ps, static_cast<double>(periodic_tail(N)));

  const Mask U = siegel_proxy(FamilyParams(m, r.alpha), g, opt);
  const Mask X = siegel_proxy(FamilyParams(m, r.alpha_n), g, opt);
  r.u_pixels = U.count();
  r.dens = dens(U, X);

  const PerturbedSiegelSet s(q_n.convert_to<int>(), r.eps_n, rho);
  std::size_t core = 0;
  for (int j = 0; j < g.resolution; ++j)
    for (int i = 0; i < g.resolution; ++i)
      if (U.at(i, j) && xn_membership(s, g.pixel_center(i, j)).inside) ++core;
  r.predicted_core_fraction = static_cast<double>(core) / static_cast<double>(r.u_pixels);
  return r;
}

}  // namespace parabolica
