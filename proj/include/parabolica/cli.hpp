// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end. Kept in a header so tests can drive it with
// string streams; tools/main.cpp is a one-line wrapper.
#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "parabolica/contfrac.hpp"
#include "parabolica/core.hpp"
#include "parabolica/explosion.hpp"
#include "parabolica/family.hpp"
#include "parabolica/fatou.hpp"
#include "parabolica/julia.hpp"
#include "parabolica/ledger.hpp"

namespace parabolica::cli {

// "%.17g" in the C locale; the library never calls setlocale.
inline std::string num(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

struct AlphaSpec {
  std::string text;
  double value = 0.0;
  std::vector<std::int64_t> entries;  // continued fraction, as far as known
  bool periodic_tail = false;         // last entry repeats forever
  std::optional<std::pair<std::int64_t, std::int64_t>> rational;  // p/q in lowest terms
};

namespace detail {

inline double parse_double(const std::string& s, const std::string& what) {
  double v = 0.0;
  const char* b = s.data();
  const char* e = s.data() + s.size();
  if (!s.empty() && *b == '+') ++b;
  const auto [ptr, ec] = std::from_chars(b, e, v);
  if (ec != std::errc{} || ptr != e || !std::isfinite(v)) throw DomainError("cannot parse " + what + ": '" + s + "'");
  return v;
}

inline std::int64_t parse_int(const std::string& s, const std::string& what) {
  std::int64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) throw DomainError("cannot parse " + what + ": '" + s + "'");
  return v;
}

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

inline std::int64_t gcd64(std::int64_t a, std::int64_t b) {
  a = a < 0 ? -a : a;
  b = b < 0 ? -b : b;
  while (b != 0) a = std::exchange(b, a % b);
  return a;
}

}  // namespace detail

// decimal | p/q | golden | cf:[a0,a1,...] | cf:[a0,...,ak,...] (last entry repeats)
inline AlphaSpec parse_alpha(const std::string& raw, int depth = 40) {
  AlphaSpec a;
  a.text = raw;
  const std::string s = detail::trim(raw);
  if (s == "golden") {
    const auto d = golden_mean(depth);
    a.entries = d.entries;
    a.periodic_tail = true;
    a.value = static_cast<double>(value_of(d));
    return a;
  }
  if (s.rfind("cf:", 0) == 0) {
    std::string body = detail::trim(s.substr(3));
    if (body.size() < 2 || body.front() != '[' || body.back() != ']') throw DomainError("alpha: expected cf:[a0,a1,...]");
    body = body.substr(1, body.size() - 2);
    std::stringstream ss(body);
    std::string item;
    std::vector<std::string> items;
    while (std::getline(ss, item, ',')) items.push_back(detail::trim(item));
    if (!items.empty() && items.back() == "...") {
      a.periodic_tail = true;
      items.pop_back();
    }
    if (items.empty()) throw DomainError("alpha: empty continued fraction");
    for (const auto& it : items) a.entries.push_back(detail::parse_int(it, "continued fraction entry"));
    for (std::size_t k = 1; k < a.entries.size(); ++k)
      if (a.entries[k] < 1) throw DomainError("alpha: entries past a0 must be >= 1");
    const auto d = a.periodic_tail ? from_entries(a.entries, periodic_tail(a.entries.back())) : from_entries(a.entries);
    a.value = static_cast<double>(value_of(d));
    if (!a.periodic_tail) {
      const auto& c = d.convergents.back();
      if (c.q <= BigInt(std::numeric_limits<std::int64_t>::max()) && abs(c.p) <= BigInt(std::numeric_limits<std::int64_t>::max()))
        a.rational = std::make_pair(c.p.convert_to<std::int64_t>(), c.q.convert_to<std::int64_t>());
    }
    return a;
  }
  if (const auto slash = s.find('/'); slash != std::string::npos) {
    const std::int64_t p = detail::parse_int(detail::trim(s.substr(0, slash)), "numerator");
    const std::int64_t q = detail::parse_int(detail::trim(s.substr(slash + 1)), "denominator");
    if (q <= 0) throw DomainError("alpha: denominator must be positive");
    const std::int64_t g = detail::gcd64(p, q);
    a.rational = std::make_pair(p / g, q / g);
    a.value = static_cast<double>(p) / static_cast<double>(q);
    a.entries = expand(a.value, depth).entries;
    return a;
  }
  a.value = detail::parse_double(s, "alpha");
  const auto d = expand(a.value, depth);
  a.entries = d.entries;
  if (d.terminated) {
    const auto& c = d.convergents.back();
    a.rational = std::make_pair(c.p.convert_to<std::int64_t>(), c.q.convert_to<std::int64_t>());
  }
  return a;
}

inline cplx parse_complex(const std::string& raw, const std::string& what) {
  const std::string s = detail::trim(raw);
  const auto comma = s.find(',');
  if (comma == std::string::npos) return {detail::parse_double(s, what), 0.0};
  return {detail::parse_double(detail::trim(s.substr(0, comma)), what),
          detail::parse_double(detail::trim(s.substr(comma + 1)), what)};
}

struct RunConfig {
  std::string subcommand;
  int m = 2;
  std::string alpha = "golden";
  int res = 256;
  int max_iter = 1000;
  double bailout = 0.0;
  double half_width = 2.0;
  std::string center = "0,0";
  std::string out;
  std::string format = "csv";
  bool dense = false;
  bool json = false;
  bool csv = false;
  int supersample = 1;
  int depth = 20;
  std::uint64_t seed = 0;  // reserved
  // subcommand extras
  std::string delta = "0.05,0";
  double height = 8.0;
  int samples = 16;
  double radius = 0.5;
  int n = 3;
  std::int64_t A_n = 50;
  std::int64_t N = 5;
  double rho = 0.07;
};

namespace detail {

using Pairs = std::vector<std::pair<std::string, std::string>>;

inline Pairs config_pairs(const RunConfig& c, const AlphaSpec& a, double bailout) {
  Pairs p = {{"subcommand", c.subcommand},
             {"m", std::to_string(c.m)},
             {"alpha", a.text},
             {"alpha_value", num(a.value)},
             {"res", std::to_string(c.res)},
             {"max_iter", std::to_string(c.max_iter)},
             {"bailout", num(bailout)},
             {"half_width", num(c.half_width)},
             {"center", c.center},
             {"format", c.format},
             {"dense", c.dense ? "1" : "0"},
             {"supersample", std::to_string(c.supersample)},
             {"depth", std::to_string(c.depth)},
             {"seed", std::to_string(c.seed)}};
  if (c.subcommand == "explode") p.emplace_back("delta", c.delta);
  if (c.subcommand == "horn") {
    p.emplace_back("height", num(c.height));
    p.emplace_back("samples", std::to_string(c.samples));
  }
  if (c.subcommand == "renorm") {
    p.emplace_back("radius", num(c.radius));
    p.emplace_back("samples", std::to_string(c.samples));
  }
  if (c.subcommand == "dens") {
    p.emplace_back("n", std::to_string(c.n));
    p.emplace_back("A_n", std::to_string(c.A_n));
    p.emplace_back("N", std::to_string(c.N));
    p.emplace_back("rho", num(c.rho));
  }
  return p;
}

inline std::string header_line(const Pairs& p) {
  std::string s = "# parabolica";
  for (const auto& [k, v] : p) s += " " + k + "=" + v;
  return s;
}

inline nlohmann::ordered_json config_json(const Pairs& p) {
  nlohmann::ordered_json j;
  for (const auto& [k, v] : p) j[k] = v;
  return j;
}

// Table writer: CSV with a '#' header line, or one JSON document.
class Table {
 public:
  Table(std::vector<std::string> columns, bool json, Pairs config)
      : columns_(std::move(columns)), json_(json), config_(std::move(config)) {}

  void row(std::vector<std::string> cells, nlohmann::ordered_json jrow = nullptr) {
    if (jrow.is_null()) {
      jrow = nlohmann::ordered_json::object();
      for (std::size_t k = 0; k < columns_.size(); ++k) jrow[columns_[k]] = cells[k];
    }
    rows_.push_back(std::move(cells));
    jrows_.push_back(std::move(jrow));
  }

  void write(std::ostream& os) const {
    if (json_) {
      nlohmann::ordered_json doc;
      doc["config"] = config_json(config_);
      doc["rows"] = jrows_;
      os << doc.dump(2) << "\n";
      return;
    }
    os << header_line(config_) << "\n";
    for (std::size_t k = 0; k < columns_.size(); ++k) os << (k ? "," : "") << columns_[k];
    os << "\n";
    for (const auto& r : rows_) {
      for (std::size_t k = 0; k < r.size(); ++k) os << (k ? "," : "") << r[k];
      os << "\n";
    }
  }

 private:
  std::vector<std::string> columns_;
  bool json_;
  Pairs config_;
  std::vector<std::vector<std::string>> rows_;
  nlohmann::ordered_json jrows_ = nlohmann::ordered_json::array();
};

inline std::string joined(const std::vector<double>& v) {
  std::string s;
  for (std::size_t k = 0; k < v.size(); ++k) s += (k ? ";" : "") + num(v[k]);
  return s;
}

inline void write_pgm(std::ostream& os, int w, int h, const std::vector<std::uint8_t>& px, const std::string& comment) {
  os << "P5\n" << comment << "\n" << w << " " << h << "\n255\n";
  os.write(reinterpret_cast<const char*>(px.data()), static_cast<std::streamsize>(px.size()));
}

inline std::pair<int, int> rational_of(const AlphaSpec& a) {
  if (!a.rational) throw DomainError("alpha must be rational p/q here, got '" + a.text + "'");
  const auto [p, q] = *a.rational;
  if (q > 64 || p < 0 || p >= q) throw DomainError("alpha: need 0 <= p < q <= 64");
  return {static_cast<int>(p), static_cast<int>(q)};
}

}  // namespace detail

inline int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const bool json = cfg.json || cfg.format == "json";
  const AlphaSpec a = parse_alpha(cfg.alpha, std::max(cfg.depth, 40));
  if (cfg.m < 2) throw DomainError("--m must be >= 2");
  const double bailout = cfg.bailout == 0.0 ? min_bailout(cfg.m) : cfg.bailout;
  const auto pairs = detail::config_pairs(cfg, a, bailout);

  std::ofstream file;
  std::ostream* os = &out;
  if (!cfg.out.empty()) {
    file.open(cfg.out, std::ios::binary);
    if (!file) throw DomainError("cannot open --out '" + cfg.out + "'");
    os = &file;
    if (cfg.subcommand == "render") out << detail::header_line(pairs) << "\n";
  }

  GridSpec grid;
  grid.center = parse_complex(cfg.center, "--center");
  grid.half_width = cfg.half_width;
  grid.resolution = cfg.res;
  grid.max_iter = cfg.max_iter;
  grid.bailout = bailout;

  const std::string& sc = cfg.subcommand;
  if (sc == "verify") {
    const auto checks = run_all(cfg.dense);
    bool all = true;
    detail::Table t({"name", "m", "computed", "printed", "pass"}, json, pairs);
    for (const auto& c : checks) {
      all = all && c.pass;
      nlohmann::ordered_json j;
      j["name"] = c.name;
      j["m"] = c.m ? nlohmann::ordered_json(*c.m) : nlohmann::ordered_json(nullptr);
      j["labels"] = c.labels;
      j["computed"] = c.computed;
      j["printed"] = c.printed;
      j["rel_tol"] = c.rel_tol;
      j["min_margin"] = c.min_margin();
      j["pass"] = c.pass;
      t.row({c.name, c.m ? std::to_string(*c.m) : "", detail::joined(c.computed), detail::joined(c.printed),
             c.pass ? "1" : "0"},
            j);
      if (!c.pass) err << "check failed: " << c.name << "\n";
    }
    t.write(*os);
    err << checks.size() << " checks, " << (all ? "all pass" : "FAILURES") << "\n";
    return all ? 0 : 1;
  }

  if (sc == "render") {
    if (cfg.format != "pgm" && cfg.format != "csv") throw DomainError("render writes pgm only");
    const FamilyParams p(cfg.m, a.value);
    const GridSpec g = grid.resolved(cfg.m);
    std::vector<std::uint8_t> px;
    if (cfg.supersample > 1) {
      px = render_grey(p, g, cfg.supersample);
    } else {
      const Mask mk = filled_julia_mask(p, g);
      px.resize(mk.bits.size());
      for (std::size_t k = 0; k < px.size(); ++k) px[k] = mk.bits[k] ? 255 : 0;
    }
    detail::write_pgm(*os, g.resolution, g.resolution, px, detail::header_line(pairs));
    return 0;
  }

  if (sc == "area") {
    const FamilyParams p(cfg.m, a.value);
    const auto r = area_refinement(p, grid);
    detail::Table t({"m", "alpha", "resolution", "max_iter", "value", "inner_count", "outer_count"}, json, pairs);
    for (const auto& e : {r.coarse, r.fine})
      t.row({std::to_string(cfg.m), num(a.value), std::to_string(e.resolution), std::to_string(e.max_iter),
             num(e.value), std::to_string(e.inner_count), std::to_string(e.outer_count)});
    t.write(*os);
    return 0;
  }

  if (sc == "dens") {
    if (!a.periodic_tail) throw DomainError("dens needs an irrational base: golden or cf:[a0,...,ak,...]");
    std::vector<std::int64_t> base = a.entries;
    while (static_cast<int>(base.size()) <= cfg.n) base.push_back(base.back());
    const auto r = perturbed_density_experiment(cfg.m, base, cfg.n, cfg.A_n, cfg.N, cfg.rho, grid);
    detail::Table t({"m", "alpha", "n", "A_n", "N", "q_n", "alpha_n", "eps_n", "resolution", "max_iter", "value",
                     "predicted_core", "u_pixels"},
                    json, pairs);
    t.row({std::to_string(cfg.m), num(r.alpha), std::to_string(r.n), std::to_string(r.A_n), std::to_string(r.N),
           r.q_n.str(), num(r.alpha_n), num(r.eps_n), std::to_string(cfg.res), std::to_string(cfg.max_iter),
           num(r.dens), num(r.predicted_core_fraction), std::to_string(r.u_pixels)});
    t.write(*os);
    return 0;
  }

  if (sc == "explode") {
    const auto [p, q] = detail::rational_of(a);
    const cplx d = parse_complex(cfg.delta, "--delta");
    const auto r = continue_ray(cfg.m, p, q, d);
    if (!r.complete)
      throw ConvergenceError("explode: continuation stopped at delta " + format_delta(r.delta_reached));
    const FamilyParams f(cfg.m, cplx(static_cast<double>(p) / q) + std::pow(d, q));
    detail::Table t({"delta_re", "delta_im", "idx", "z_re", "z_im", "residual"}, json, pairs);
    for (std::size_t k = 0; k < r.cycle.size(); ++k) {
      const cplx z = r.cycle[k];
      const double res = std::abs(iterate_with_derivative(f, z, q).value - z);
      t.row({num(d.real()), num(d.imag()), std::to_string(k), num(z.real()), num(z.imag()), num(res)});
    }
    t.write(*os);
    return 0;
  }

  if (sc == "horn") {
    if (cfg.samples < 1) throw DomainError("--samples must be >= 1");
    const HornMap E(cfg.m);
    detail::Table t({"re_z", "im_z", "re_E", "im_E"}, json, pairs);
    for (double h : {cfg.height, -cfg.height})
      for (int k = 0; k < cfg.samples; ++k) {
        const cplx z{static_cast<double>(k) / cfg.samples, h};
        const cplx e = E(z);
        t.row({num(z.real()), num(z.imag()), num(e.real()), num(e.imag())});
      }
    t.write(*os);
    return 0;
  }

  if (sc == "renorm") {
    if (cfg.samples < 1) throw DomainError("--samples must be >= 1");
    if (!(cfg.radius > 0.0 && cfg.radius < 1.0)) throw DomainError("--radius must lie in (0,1)");
    const HornMap E(cfg.m);
    const double r0 = cfg.radius * parabolic_renorm_radius(E);
    detail::Table t({"re_w", "im_w", "re_R", "im_R"}, json, pairs);
    t.row({num(0.0), num(0.0), num(0.0), num(0.0)});
    for (int k = 0; k < cfg.samples; ++k) {
      const cplx w = std::polar(r0, kTwoPi * k / cfg.samples);
      const cplx v = parabolic_renorm(E, w);
      t.row({num(w.real()), num(w.imag()), num(v.real()), num(v.imag())});
    }
    t.write(*os);
    return 0;
  }

  if (sc == "cf") {
    if (cfg.depth < 1) throw DomainError("--depth must be >= 1");
    ContinuedFractionData d;
    if (a.text == "golden") {
      d = golden_mean(cfg.depth);
    } else if (a.periodic_tail) {
      std::vector<std::int64_t> e = a.entries;
      while (static_cast<int>(e.size()) <= cfg.depth) e.push_back(e.back());
      e.resize(static_cast<std::size_t>(cfg.depth) + 1);
      d = from_entries(e, periodic_tail(e.back()));
    } else if (a.text.rfind("cf:", 0) == 0) {
      d = from_entries(a.entries);
    } else {
      d = expand(a.value, cfg.depth);
    }
    detail::Table t({"k", "a_k", "p_k", "q_k", "beta_k", "phi_partial"}, json, pairs);
    long double acc = 0.0L, beta_prev = 1.0L;
    bool finite = true;
    const std::size_t rows = std::min(d.entries.size(), static_cast<std::size_t>(cfg.depth) + 1);
    for (std::size_t k = 0; k < rows; ++k) {
      const long double ak = d.alphas[k];
      if (ak <= 0.0L) finite = false;
      if (finite) acc += beta_prev * std::log(1.0L / ak);
      beta_prev = d.betas[k];
      t.row({std::to_string(k), std::to_string(d.entries[k]), d.convergents[k].p.str(), d.convergents[k].q.str(),
             num(static_cast<double>(d.betas[k])),
             finite ? num(static_cast<double>(acc)) : std::string("inf")});
    }
    t.write(*os);
    if (d.precision_exhausted) err << "cf: double precision exhausted after " << d.entries.size() << " entries\n";
    return 0;
  }

  throw DomainError("unknown subcommand '" + sc + "'");
}

inline int run_cli(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"numerics for P_alpha(z) = e^{2 pi i alpha} z (1+z)^m"};
  app.name("parabolica");
  app.require_subcommand(1, 1);
  RunConfig cfg;

  auto common = [&](CLI::App* s) {
    s->add_option("--m", cfg.m, "degree exponent m >= 2");
    s->add_option("--alpha", cfg.alpha, "decimal | p/q | golden | cf:[a0,a1,...] (append ,... to repeat the last entry)");
    s->add_option("--out", cfg.out, "output file (default stdout)");
    s->add_option("--format", cfg.format, "csv | json | pgm")->check(CLI::IsMember({"csv", "json", "pgm"}));
    s->add_flag("--json", cfg.json, "same as --format json");
    s->add_option("--depth", cfg.depth, "continued fraction depth");
  };
  auto grid = [&](CLI::App* s) {
    s->add_option("--res", cfg.res, "pixels per side");
    s->add_option("--max-iter", cfg.max_iter, "iteration cap");
    s->add_option("--bailout", cfg.bailout, "escape radius (default 2 + 2^(1/m))");
    s->add_option("--half-width", cfg.half_width, "half side of the frame");
    s->add_option("--center", cfg.center, "frame centre re,im");
    s->add_option("--supersample", cfg.supersample, "k x k subpixels per pixel (render only)");
  };

  auto* verify = app.add_subcommand("verify", "re-derive the published constants");
  common(verify);
  verify->add_flag("--dense", cfg.dense, "10x sampling");
  verify->add_flag("--csv", cfg.csv, "CSV output (default)");
  auto* render = app.add_subcommand("render", "filled Julia set as PGM");
  common(render);
  grid(render);
  auto* area = app.add_subcommand("area", "pixel-count area at res and 2 res");
  common(area);
  grid(area);
  auto* dens = app.add_subcommand("dens", "perturbed Siegel disk density");
  common(dens);
  grid(dens);
  dens->add_option("--n", cfg.n, "perturbation index");
  dens->add_option("--An", cfg.A_n, "inserted entry A_n");
  dens->add_option("--N", cfg.N, "periodic tail entry");
  dens->add_option("--rho", cfg.rho, "radius of X_n(rho)");
  auto* explode = app.add_subcommand("explode", "cycle chi(delta) for alpha = p/q + delta^q");
  common(explode);
  explode->add_option("--delta", cfg.delta, "delta as re,im");
  auto* horn = app.add_subcommand("horn", "normalized horn map samples");
  common(horn);
  horn->add_option("--height", cfg.height, "|Im z| of the sample rows");
  horn->add_option("--samples", cfg.samples, "points per row");
  auto* renorm = app.add_subcommand("renorm", "parabolic renormalization on a circle");
  common(renorm);
  renorm->add_option("--radius", cfg.radius, "fraction of the domain radius");
  renorm->add_option("--samples", cfg.samples, "points on the circle");
  auto* cf = app.add_subcommand("cf", "continued fraction table");
  common(cf);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }
  cfg.subcommand = app.get_subcommands().front()->get_name();
  if (cfg.json && cfg.csv) {
    err << "parabolica: --json and --csv are exclusive\n";
    return 2;
  }
  if (cfg.json) cfg.format = "json";
  if (cfg.subcommand == "render" && cfg.format == "csv") cfg.format = "pgm";

  try {
    return run(cfg, out, err);
  } catch (const DomainError& e) {
    err << "parabolica: " << e.what() << "\n";
    return 2;
  } catch (const ConvergenceError& e) {
    err << "parabolica: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace parabolica::cli
