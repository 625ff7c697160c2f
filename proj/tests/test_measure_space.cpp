#include "oracles.hpp"

#include <gtest/gtest.h>

#include <atomic>
#include <thread>

using namespace riesz;

namespace {

const MeasureSpace kLine = MeasureSpace::interval_line();
const MeasureSpace kCount = MeasureSpace::counting();

Cell iv(long a, long b) { return Cell::interval(Rational(a), Rational(b)); }
Cell fs(std::vector<std::string> e) { return Cell::finite_set(std::move(e)); }

const SemiringPairCheck& pair(const SemiringReport& r, std::size_t i, std::size_t j) {
  for (const auto& p : r.pairs)
    if (p.first == i && p.second == j) return p;
  throw std::logic_error("pair not reported");
}

}  // namespace

TEST(Cell, RejectsReversedIntervalsAndNormalizesSets) {
  EXPECT_THROW(Cell::interval(Rational(2), Rational(1)), DomainError);
  EXPECT_TRUE(Cell::interval(Rational(1), Rational(1)).empty());
  EXPECT_EQ(fs({"b", "a", "b"}).as_finite_set().elements, (std::vector<std::string>{"a", "b"}));
}

TEST(Cell, HalfOpenContainment) {
  Cell c = iv(0, 1);
  EXPECT_TRUE(c.contains(Point::on_line(Rational(0))));
  EXPECT_FALSE(c.contains(Point::on_line(Rational(1))));
  Cell r = Cell::rectangle(iv(0, 1), fs({"a"}));
  EXPECT_TRUE(r.contains(Point::pair(Rational(1, 2), std::string("a"))));
  EXPECT_FALSE(r.contains(Point::pair(Rational(1, 2), std::string("b"))));
}

TEST(CellMeasure, Examples) {
  EXPECT_EQ(kLine.measure(Cell::interval(Rational(1, 2), Rational(5, 2))), Rational(2));
  EXPECT_EQ(kCount.measure(fs({"x1", "x2", "x3"})), Rational(3));
  MeasureSpace prod = MeasureSpace::product(kLine, kCount);
  EXPECT_EQ(prod.measure(Cell::rectangle(iv(0, 1), fs({"a", "b"}))), Rational(2));
  EXPECT_EQ(MeasureSpace::zero().measure(fs({"a", "b", "c"})), Rational(0));
}

TEST(CellMeasure, ForeignCellIsDomainError) {
  EXPECT_THROW(kLine.measure(fs({"a"})), DomainError);
  EXPECT_THROW(kCount.measure(iv(0, 1)), DomainError);
  EXPECT_THROW(MeasureSpace::product(kLine, kLine).measure(iv(0, 1)), DomainError);
}

TEST(SemiringCheck, IntervalPair) {
  SemiringReport r = semiring_check({iv(0, 2), iv(1, 3)}, kLine);
  EXPECT_TRUE(r.passed);
  ASSERT_FALSE(r.pairs.empty());
  const SemiringPairCheck& p = pair(r, 0, 1);
  EXPECT_EQ(p.intersection, iv(1, 2));
  ASSERT_EQ(p.difference.size(), 1u);
  EXPECT_EQ(p.difference[0], iv(0, 1));
}

TEST(SemiringCheck, CountingPair) {
  SemiringReport r = semiring_check({fs({"a", "b"}), fs({"b", "c"})}, kCount);
  EXPECT_TRUE(r.passed);
  const SemiringPairCheck& p = pair(r, 0, 1);
  EXPECT_EQ(p.intersection, fs({"b"}));
  ASSERT_EQ(p.difference.size(), 1u);
  EXPECT_EQ(p.difference[0], fs({"a"}));
}

TEST(SemiringCheck, DisjointRectanglesMatchHandDecomposition) {
  // Worked out by hand: [0,1)x{a} and [0,1)x{b} share no point, so the
  // difference of either from the other is the cell itself.
  MeasureSpace prod = MeasureSpace::product(kLine, kCount);
  Cell a = Cell::rectangle(iv(0, 1), fs({"a"}));
  Cell b = Cell::rectangle(iv(0, 1), fs({"b"}));
  SemiringReport r = semiring_check({a, b}, prod);
  EXPECT_TRUE(r.passed);
  const SemiringPairCheck& p = pair(r, 0, 1);
  EXPECT_TRUE(p.intersection.empty());
  Rational diff_total(0);
  for (const Cell& c : p.difference) diff_total += prod.measure(c);
  EXPECT_EQ(diff_total, Rational(1));
}

TEST(SemiringCheck, RectangleDifferenceSplitsIntoDisjointPieces) {
  MeasureSpace prod = MeasureSpace::product(kLine, kLine);
  Cell big = Cell::rectangle(iv(0, 3), iv(0, 3));
  Cell hole = Cell::rectangle(iv(1, 2), iv(1, 2));
  std::vector<Cell> pieces = big.minus(hole);
  Rational total(0);
  for (const Cell& c : pieces) total += prod.measure(c);
  EXPECT_EQ(total, Rational(8));
  for (std::size_t i = 0; i < pieces.size(); ++i)
    for (std::size_t j = i + 1; j < pieces.size(); ++j) EXPECT_TRUE(pieces[i].intersect(pieces[j]).empty());
}

TEST(SemiringProperty, PassesOnRandomFamilies) {
  oracle::RawGen gen(3);
  for (const MeasureSpace& s : {kLine, kCount, MeasureSpace::zero(), MeasureSpace::product(kLine, kCount),
                                MeasureSpace::product(kLine, kLine), MeasureSpace::product(kCount, kCount)}) {
    for (int i = 0; i < 40; ++i) {
      std::vector<Cell> family;
      for (int j = 0; j < 4; ++j) family.push_back(gen.cell(s));
      SemiringReport r = semiring_check(family, s);
      EXPECT_TRUE(r.passed) << s.str() << ": " << (r.failures.empty() ? "" : r.failures.front());
    }
  }
}

TEST(MeasureProperty, IntervalsAreTranslationInvariantAndSplitAdditively) {
  oracle::RawGen gen(5);
  for (int i = 0; i < 200; ++i) {
    Cell c = gen.interval();
    Rational shift(gen.uniform(-20, 20), gen.uniform(1, 7));
    const Interval& v = c.as_interval();
    EXPECT_EQ(kLine.measure(Cell::interval(v.lo + shift, v.hi + shift)), kLine.measure(c));
    Rational mid = v.lo + (v.hi - v.lo) * Rational(gen.uniform(0, 5), 5);
    EXPECT_EQ(kLine.measure(Cell::interval(v.lo, mid)) + kLine.measure(Cell::interval(mid, v.hi)), kLine.measure(c));
  }
}

TEST(MeasureProperty, RectangleMeasureIsProductOfFactors) {
  oracle::RawGen gen(6);
  for (const MeasureSpace& s : {MeasureSpace::product(kLine, kCount), MeasureSpace::product(kLine, kLine),
                                MeasureSpace::product(kCount, MeasureSpace::zero())}) {
    for (int i = 0; i < 100; ++i) {
      Cell c = gen.cell(s);
      EXPECT_EQ(s.measure(c), s.left().measure(c.left()) * s.right().measure(c.right()));
    }
  }
}

TEST(NullCover, ShrinkingCoverOfZero) {
  NullCover cover(kLine, [](std::size_t k) -> std::optional<Cell> {
    Rational h = Rational::power_of_two(-static_cast<long>(k));
    return Cell::interval(-h, h);
  });
  // finite geometric sums: 2 + 1 + 1/2 + 1/4 at n = 3
  Rational expected(0);
  for (long k = 0; k <= 3; ++k) expected += Rational(2) / Rational(1L << k);
  EXPECT_EQ(null_cover_bound(cover, 3), expected);
  EXPECT_EQ(null_cover_bound(cover, 3), Rational(15, 4));
  EXPECT_EQ(null_cover_bound(cover, 0), Rational(2));
  EXPECT_EQ(cover.first_covering(Point::on_line(Rational(0)), 5), std::optional<std::size_t>(0));
}

TEST(NullCover, EmptyCoverHasZeroTotal) {
  NullCover empty = NullCover::empty(kLine);
  for (std::size_t n : {0u, 1u, 17u}) EXPECT_EQ(null_cover_bound(empty, n), Rational(0));
  EXPECT_EQ(empty.cell(0), nullptr);
}

TEST(NullCover, RationalsCoverStaysBelowHalfEpsilon) {
  const Rational eps(1, 10);
  auto rats = oracle::rationals_by_denominator(400);
  NullCover cover(kLine, [&](std::size_t k) -> std::optional<Cell> {
    if (k >= rats.size()) return std::nullopt;
    Rational r(rats[k].first, rats[k].second);
    Rational h = eps * Rational::power_of_two(-static_cast<long>(k + 1) - 2);
    return Cell::interval(r - h, r + h);
  });
  Rational prev(0);
  for (std::size_t n = 0; n < 400; n += 37) {
    Rational t = null_cover_bound(cover, n);
    EXPECT_LT(t, eps / Rational(2));
    EXPECT_GE(t, prev);
    // geometric series sum_{k=1}^{n+1} eps 2^{-k-1}
    Rational closed = eps / Rational(2) * (Rational(1) - Rational::power_of_two(-static_cast<long>(n + 1)));
    EXPECT_EQ(t, closed);
    prev = t;
  }
  for (std::size_t k = 0; k < 50; ++k) {
    Point p = Point::on_line(Rational(rats[k].first, rats[k].second));
    EXPECT_TRUE(cover.first_covering(p, 400).has_value());
  }
}

TEST(LazyStream, ConcurrentReadersComputeEachElementOnce) {
  std::atomic<int> calls{0};
  auto s = LazyStream<long>::infinite([&](std::size_t n) {
    ++calls;
    return static_cast<long>(n * n);
  });
  std::vector<std::thread> ts;
  for (int t = 0; t < 8; ++t)
    ts.emplace_back([&s] {
      for (std::size_t n = 0; n < 500; ++n) ASSERT_EQ(s.at(n), static_cast<long>(n * n));
    });
  for (auto& t : ts) t.join();
  EXPECT_EQ(calls.load(), 500);
  EXPECT_EQ(s.computed(), 500u);
}

TEST(LazyStream, FiniteStreamEnds) {
  LazyStream<int> s([](std::size_t n) -> std::optional<int> {
    if (n < 3) return static_cast<int>(n);
    return std::nullopt;
  });
  EXPECT_NE(s.get(2), nullptr);
  EXPECT_EQ(s.get(3), nullptr);
  EXPECT_THROW(s.at(5), std::out_of_range);
}
