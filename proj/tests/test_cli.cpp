// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "parabolica/cli.hpp"

using namespace parabolica;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome call(std::vector<std::string> args) {
  args.insert(args.begin(), "parabolica");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> v;
  std::istringstream is(s);
  for (std::string l; std::getline(is, l);) v.push_back(l);
  return v;
}

}  // namespace

TEST(Cli, AlphaParsing) {
  EXPECT_NEAR(cli::parse_alpha("golden").value, (std::sqrt(5.0) - 1.0) / 2.0, 1e-15);
  const auto r = cli::parse_alpha("3/7");
  ASSERT_TRUE(r.rational.has_value());
  EXPECT_EQ(r.rational->second, 7);
  EXPECT_NEAR(r.value, 3.0 / 7.0, 1e-16);
  EXPECT_NEAR(cli::parse_alpha("cf:[0,2,2,...]").value, std::sqrt(2.0) - 1.0, 1e-15);
  EXPECT_NEAR(cli::parse_alpha("0.25").value, 0.25, 0.0);
  EXPECT_THROW(cli::parse_alpha("banana"), DomainError);
  EXPECT_THROW(cli::parse_alpha("1/0"), DomainError);
  EXPECT_EQ(cli::parse_complex("1.5,-2", "x"), cplx(1.5, -2.0));
}

TEST(Cli, VerifyPasses) {
  const auto r = call({"verify"});
  EXPECT_EQ(r.code, 0) << r.err;
  const auto ls = lines(r.out);
  ASSERT_GE(ls.size(), 9u);
  EXPECT_EQ(ls[0].rfind("# parabolica", 0), 0u);
  EXPECT_EQ(ls[1], "name,m,computed,printed,pass");
  for (std::size_t k = 2; k < ls.size(); ++k) EXPECT_EQ(ls[k].substr(ls[k].rfind(',') + 1), "1") << ls[k];
}

TEST(Cli, VerifyJson) {
  const auto r = call({"verify", "--json"});
  EXPECT_EQ(r.code, 0);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["config"]["subcommand"], "verify");
  EXPECT_GE(j["rows"].size(), 7u);
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(call({}).code, 2);
  EXPECT_EQ(call({"nonsense"}).code, 2);
  EXPECT_EQ(call({"area", "--m", "1"}).code, 2);
  EXPECT_EQ(call({"area", "--alpha", "x/y"}).code, 2);
  EXPECT_EQ(call({"explode", "--alpha", "golden"}).code, 2);
  EXPECT_EQ(call({"verify", "--json", "--csv"}).code, 2);
  EXPECT_EQ(call({"renorm", "--radius", "3"}).code, 2);
  EXPECT_EQ(call({"--help"}).code, 0);
}

TEST(Cli, RenderPgm) {
  const auto path = (std::filesystem::temp_directory_path() / "parabolica_cli_render.pgm").string();
  const auto r = call({"render", "--m", "2", "--alpha", "0", "--res", "64", "--max-iter", "200", "--out", path});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out.rfind("# parabolica subcommand=render", 0), 0u);
  std::ifstream is(path, std::ios::binary);
  std::string magic, comment;
  int w = 0, h = 0, maxv = 0;
  std::getline(is, magic);
  std::getline(is, comment);
  is >> w >> h >> maxv;
  is.get();
  std::vector<char> px(static_cast<std::size_t>(w) * h);
  is.read(px.data(), static_cast<std::streamsize>(px.size()));
  EXPECT_EQ(magic, "P5");
  EXPECT_EQ(comment.rfind("# parabolica", 0), 0u);
  EXPECT_EQ(w, 64);
  EXPECT_EQ(h, 64);
  EXPECT_EQ(maxv, 255);
  ASSERT_TRUE(is.good());
  EXPECT_EQ(static_cast<unsigned char>(px[32 * 64 + 32]), 255);
  EXPECT_EQ(static_cast<unsigned char>(px[0]), 0);
  std::filesystem::remove(path);
}

TEST(Cli, ContinuedFractionTable) {
  const auto r = call({"cf", "--alpha", "golden", "--depth", "8"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto ls = lines(r.out);
  ASSERT_EQ(ls.size(), 11u);
  EXPECT_EQ(ls[1], "k,a_k,p_k,q_k,beta_k,phi_partial");
  const int fib[] = {1, 1, 2, 3, 5, 8, 13, 21, 34};
  for (int k = 0; k <= 8; ++k) {
    std::istringstream row(ls[static_cast<std::size_t>(k) + 2]);
    std::string cell;
    for (int c = 0; c < 4; ++c) std::getline(row, cell, ',');
    EXPECT_EQ(cell, std::to_string(fib[k])) << ls[static_cast<std::size_t>(k) + 2];
  }
}

TEST(Cli, AreaTwoResolutions) {
  const auto r = call({"area", "--alpha", "0", "--res", "32", "--max-iter", "100"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto ls = lines(r.out);
  ASSERT_EQ(ls.size(), 4u);
  EXPECT_EQ(ls[2].rfind("2,0,32,100,", 0), 0u);
  EXPECT_EQ(ls[3].rfind("2,0,64,100,", 0), 0u);
}

TEST(Cli, ExplodeHornRenormRun) {
  const auto e = call({"explode", "--alpha", "1/2", "--delta", "0.05,0"});
  EXPECT_EQ(e.code, 0) << e.err;
  EXPECT_EQ(lines(e.out).size(), 4u);
  const auto h = call({"horn", "--samples", "4"});
  EXPECT_EQ(h.code, 0) << h.err;
  EXPECT_EQ(lines(h.out).size(), 2u + 8u);
  const auto n = call({"renorm", "--samples", "4"});
  EXPECT_EQ(n.code, 0) << n.err;
  EXPECT_EQ(lines(n.out).size(), 2u + 5u);
}

TEST(Cli, DensRequiresPeriodicAlpha) {
  EXPECT_EQ(call({"dens", "--alpha", "0.3"}).code, 2);
  const auto r = call({"dens", "--res", "48", "--max-iter", "300", "--half-width", "0.6", "--center", "-0.1,0"});
  EXPECT_EQ(r.code, 0) << r.err;
}

TEST(Cli, IdenticalArgvIdenticalBytes) {
  const std::vector<std::string> args{"area", "--alpha", "golden", "--res", "48", "--max-iter", "200"};
  EXPECT_EQ(call(args).out, call(args).out);
  const std::vector<std::string> h{"horn", "--json", "--samples", "3"};
  EXPECT_EQ(call(h).out, call(h).out);
}

TEST(Cli, NumberFormatting) {
  EXPECT_EQ(cli::num(0.1), "0.10000000000000001");
  EXPECT_EQ(cli::num(std::nan("")), "nan");
  EXPECT_EQ(cli::num(-HUGE_VAL), "-inf");
}
