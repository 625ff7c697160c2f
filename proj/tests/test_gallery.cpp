#include "oracles.hpp"
#include "riesz/selftest.hpp"

#include <gtest/gtest.h>

#include <regex>
#include <sstream>

using namespace riesz;

namespace {

bool every_claim_tagged(const gallery::Report& r) {
  std::istringstream in(r.str());
  std::string line;
  std::regex claim(R"(^  (ok  |FAIL) \[(PAPER|TRIVIAL|DERIVED)\] .+)");
  std::size_t seen = 0;
  while (std::getline(in, line))
    if (line.rfind("  ok", 0) == 0 || line.rfind("  FAIL", 0) == 0) {
      if (!std::regex_match(line, claim)) return false;
      ++seen;
    }
  return seen == r.claims.size();
}

}  // namespace

TEST(Gallery, EveryEntryHoldsAndIsTagged) {
  ASSERT_EQ(gallery::entries().size(), 6u);
  for (const auto& [id, build] : gallery::entries()) {
    gallery::Report r = gallery::run(id);
    EXPECT_TRUE(r.ok()) << r.str();
    EXPECT_FALSE(r.claims.empty()) << id;
    EXPECT_TRUE(every_claim_tagged(r)) << r.str();
  }
}

TEST(Gallery, RepeatedRunsAreByteIdentical) {
  for (const auto& [id, build] : gallery::entries()) EXPECT_EQ(gallery::run(id).str(), gallery::run(id).str()) << id;
}

TEST(Gallery, UnknownEntry) { EXPECT_THROW(gallery::run("nope"), DomainError); }

TEST(Gallery, SignAndTailTermsAreCertifiedMinusInfinity) {
  for (std::size_t n : {0u, 1u, 9u}) {
    EXPECT_EQ(gallery::sign_term(n).integral(),
              std::optional<ExtendedRational>(ExtendedRational::minus_infinity()));
    EXPECT_EQ(gallery::tail_term(n).integral(),
              std::optional<ExtendedRational>(ExtendedRational::minus_infinity()));
  }
}

TEST(Weir, EnumerationMatchesIndependentOracle) {
  auto rats = oracle::rationals_by_denominator(200);
  for (std::size_t n = 1; n <= rats.size(); ++n) {
    EXPECT_EQ(gallery::weir_rational(n), Rational(rats[n - 1].first, rats[n - 1].second));
    EXPECT_EQ(gallery::weir_index(gallery::weir_rational(n)), n);
  }
  EXPECT_EQ(gallery::weir_rational(1), Rational(1, 2));
  EXPECT_EQ(gallery::weir_rational(3), Rational(2, 3));
  EXPECT_THROW(gallery::weir_rational(0), DomainError);
  EXPECT_THROW(gallery::weir_index(Rational(1)), DomainError);
}

TEST(Weir, PartialMeasuresMatchSweepOracle) {
  Rational prev(0);
  for (std::size_t d = 1; d <= 20; ++d) {
    std::vector<std::pair<Rational, Rational>> spans;
    for (std::size_t n = 1; n <= d; ++n) {
      Rational r = gallery::weir_rational(n);
      Rational h = Rational::power_of_two(-static_cast<long>(n) - 3);
      spans.emplace_back(max(Rational(0), r - h), min(Rational(1), r + h));
    }
    Rational m = gallery::weir_partial(d).integral();
    EXPECT_EQ(m, oracle::union_length(spans));
    EXPECT_GE(m, prev);
    EXPECT_LE(m, Rational(1, 4) - Rational::power_of_two(-static_cast<long>(d) - 2));
    EXPECT_GE(m, Rational(1, 8));
    prev = m;
  }
}

TEST(Weir, DepthParameterChangesOnlyTheLadder) {
  gallery::Params p;
  p.depth = 5;
  gallery::Report r = gallery::run("weir-set", p);
  EXPECT_TRUE(r.ok());
  EXPECT_NE(r.str().find("depth 5"), std::string::npos);
}

TEST(MuAlpha, Family) {
  for (const ExtendedRational& a :
       {ExtendedRational(0), ExtendedRational(1), ExtendedRational(Rational(7, 3)), ExtendedRational::plus_infinity()}) {
    gallery::Params p;
    p.alpha = a;
    EXPECT_TRUE(gallery::run("mu-alpha", p).ok()) << a;
  }
  gallery::Params bad;
  bad.alpha = ExtendedRational(-1);
  EXPECT_FALSE(gallery::run("mu-alpha", bad).ok());
  gallery::SymbolicSet co{true, {"a"}};
  EXPECT_EQ(gallery::mu_alpha(co, ExtendedRational(2)), ExtendedRational(2));
  EXPECT_EQ(gallery::mu_alpha(co.complement(), ExtendedRational(2)), ExtendedRational(0));
}

TEST(Diagonal, Windows) {
  for (long w : {0L, 1L, 3L}) {
    gallery::Params p;
    p.window = w;
    gallery::Report r = gallery::run("diagonal", p);
    EXPECT_TRUE(r.ok()) << r.str();
    EXPECT_NE(r.str().find("window of " + std::to_string(w) + " points"), std::string::npos);
  }
}

TEST(CountingCounterexampleEntry, MatchesBruteForceCounts) {
  for (long n = 0; n <= 6; ++n) {
    auto [plus, minus] = oracle::diagonal_counts(n);
    EXPECT_EQ(plus, 2 * n);
    EXPECT_EQ(minus, 2 * n);
    CountingCounterexample c = counting_counterexample(n);
    EXPECT_EQ(c.positive_part, Rational(plus));
    EXPECT_EQ(c.negative_part, Rational(minus));
  }
  gallery::Params p;
  p.window = 5;
  EXPECT_TRUE(gallery::run("counting-counterexample", p).ok());
}

TEST(Selftest, AllChecksPass) {
  for (const SelftestResult& r : run_selftest(7, 20)) EXPECT_TRUE(r.ok) << r.name << ": " << r.detail;
}
