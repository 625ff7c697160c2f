#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace riesz;

namespace {

const MeasureSpace kLine = MeasureSpace::interval_line();

StepFunction chi(Rational a, Rational b, Rational c = Rational(1)) {
  return StepFunction::indicator(kLine, Cell::interval(std::move(a), std::move(b)), std::move(c));
}

Rational q(std::size_t n) { return Rational(static_cast<long>(n)); }

R1Function prefix_stream() {
  return R1Function::from_stream(kLine, [](std::size_t n) { return chi(0, q(n) / q(n + 1)); });
}

R1Function left_ray() {
  return R1Function::from_stream(kLine, [](std::size_t n) { return chi(-q(n), 0); });
}

R1Function unit() { return R1Function::constant(chi(0, 1)); }

}  // namespace

TEST(R1FromStream, PrefixPartials) {
  R1Function f = prefix_stream();
  for (std::size_t n = 0; n <= 20; ++n) EXPECT_EQ(f.partial(n), q(n) / q(n + 1));
  EXPECT_EQ(f.verified_prefix(), 21u);
}

TEST(R1FromStream, LeftRayPartialsDiverge) {
  R1Function f = left_ray();
  for (std::size_t n = 0; n <= 20; ++n) EXPECT_EQ(f.partial(n), q(n));
}

TEST(R1FromStream, AlternatingStreamFailsAtIndexOne) {
  R1Function f = R1Function::from_stream(kLine, [](std::size_t n) {
    return n % 2 == 0 ? chi(0, 1) : StepFunction::zero(kLine);
  });
  EXPECT_NO_THROW(f.at(0));
  try {
    f.at(3);
    FAIL() << "expected a monotonicity error";
  } catch (const MonotonicityError& e) {
    EXPECT_EQ(e.index(), 1u);
    EXPECT_EQ(e.witness(), Cell::interval(0, 1));
  }
}

TEST(R1FromStream, ForeignElementIsRejected) {
  R1Function f = R1Function::from_stream(kLine, [](std::size_t) {
    return StepFunction::indicator(MeasureSpace::counting(), Cell::finite_set({"a"}));
  });
  EXPECT_THROW(f.at(0), DomainError);
}

TEST(IntegralR1, ConstantStreamStabilizesAtZero) {
  IntegralEstimate e = integral_r1(unit(), 10, 3, Rational(1000000));
  ASSERT_TRUE(e.stabilized());
  EXPECT_EQ(std::get<StabilizedAt>(e.status).index, 0u);
  EXPECT_EQ(std::get<StabilizedAt>(e.status).value, Rational(1));
  EXPECT_EQ(e.value(), std::optional<ExtendedRational>(Rational(1)));
}

TEST(IntegralR1, PrefixStreamIsUnstabilizedWithDeclaredLimit) {
  R1Function f = prefix_stream().with_declared_limit(Rational(1));
  IntegralEstimate e = integral_r1(f, 100, 5, Rational(1000000));
  EXPECT_TRUE(std::holds_alternative<Unstabilized>(e.status));
  EXPECT_EQ(e.lower_bound, Rational(100, 101));
  EXPECT_EQ(e.declared, std::optional<ExtendedRational>(Rational(1)));
  EXPECT_EQ(e.str(), "unstabilized, lower bound 100/101, declared 1");
}

TEST(IntegralR1, LeftRayCrossesAMillion) {
  IntegralEstimate e = integral_r1(left_ray(), 1000001, 5, Rational(1000000));
  ASSERT_TRUE(e.certified_infinite());
  EXPECT_EQ(std::get<CertifiedInfinite>(e.status).index, 1000001u);
}

TEST(IntegralR1, StabilizationNeedsTheWholeWindow) {
  R1Function f = R1Function::from_stream(kLine, [](std::size_t n) { return chi(0, min(q(n), Rational(4))); });
  IntegralEstimate e = integral_r1(f, 10, 6, Rational(100));
  ASSERT_TRUE(e.stabilized());
  EXPECT_EQ(std::get<StabilizedAt>(e.status).index, 4u);
  EXPECT_EQ(std::get<StabilizedAt>(e.status).value, Rational(4));
  EXPECT_FALSE(integral_r1(f, 10, 7, Rational(100)).stabilized());
  EXPECT_THROW(integral_r1(f, 0, 1, Rational(100)), DomainError);
}

TEST(DeclaredLimit, BelowAComputedPartialIsRejected) {
  R1Function f = prefix_stream();
  f.at(10);
  EXPECT_THROW(f.with_declared_limit(Rational(1, 2)), DeclarationError);
  EXPECT_NO_THROW(f.with_declared_limit(Rational(1)));
  EXPECT_NO_THROW(f.with_declared_limit(ExtendedRational::plus_infinity()));
}

TEST(CompareR1, EqualConstants) {
  CompareEvidence ev = compare_r1(unit(), unit(), 4);
  for (const auto& row : ev.residual)
    for (const auto& r : row) EXPECT_EQ(r, Rational(0));
}

TEST(CompareR1, PrefixBelowConstant) {
  CompareEvidence ev = compare_r1(prefix_stream(), unit(), 6);
  for (std::size_t m = 0; m <= 6; ++m)
    for (std::size_t n = m; n <= 6; ++n) EXPECT_EQ(ev.residual[m][n], Rational(0));
  EXPECT_TRUE(ev.rows_vanish);
}

TEST(CompareR1, ConstantAbovePrefixLeavesShrinkingResiduals) {
  CompareEvidence ev = compare_r1(unit(), prefix_stream(), 8);
  for (std::size_t m = 0; m <= 8; ++m)
    for (std::size_t n = 0; n <= 8; ++n) EXPECT_EQ(ev.residual[m][n], Rational(1) / q(n + 1));
  EXPECT_TRUE(ev.rows_non_increasing);
  EXPECT_FALSE(ev.rows_vanish);
}

TEST(R1Lattice, Examples) {
  R1Function f = prefix_stream();
  R1Function z = add(f, R1Function::zero(kLine));
  for (std::size_t n = 0; n <= 10; ++n) EXPECT_EQ(z.partial(n), f.partial(n));
  R1Function g = add(f, R1Function::constant(chi(1, 2)));
  for (std::size_t n = 0; n <= 10; ++n) EXPECT_EQ(g.partial(n), q(n) / q(n + 1) + Rational(1));
  R1Function a = R1Function::constant(chi(0, 2)), b = R1Function::constant(chi(1, 3));
  ASSERT_NE(r1_max(a, b).step(), nullptr);
  EXPECT_EQ(*r1_max(a, b).step(), chi(0, 3));
  EXPECT_EQ(*r1_min(a, b).step(), chi(1, 2));
  EXPECT_THROW(scale_nonneg(Rational(-1), f), DomainError);
  EXPECT_EQ(scale_nonneg(Rational(3), f).partial(4), Rational(12, 5));
}

TEST(R1Lattice, DeclaredLimitsPropagateThroughAddAndScale) {
  R1Function f = prefix_stream().with_declared_limit(Rational(1));
  R1Function g = add(f, R1Function::constant(chi(1, 2)));
  EXPECT_EQ(g.known_integral(), std::optional<ExtendedRational>(Rational(2)));
  EXPECT_EQ(scale_nonneg(Rational(1, 2), f).known_integral(), std::optional<ExtendedRational>(Rational(1, 2)));
}

TEST(SupOfStream, ShrinkingGapsIncreaseToOne) {
  R1Sequence fs = make_r1_sequence(
      [](std::size_t n) { return R1Function::constant(chi(0, Rational(1) - Rational(1) / q(n + 1))); });
  R1Function d = sup_of_r1_stream(fs);
  for (std::size_t k = 0; k <= 12; ++k) {
    EXPECT_EQ(d.at(k), chi(0, Rational(1) - Rational(1) / q(k + 1)));
    EXPECT_EQ(d.partial(k), q(k) / q(k + 1));
  }
  EXPECT_TRUE(sup_squeeze(fs, d, 12, ExtendedRational(1)).holds);
}

TEST(SupOfStream, ConstantSequenceGivesTheCommonStream) {
  R1Sequence fs = make_r1_sequence([](std::size_t) { return prefix_stream(); });
  R1Function d = sup_of_r1_stream(fs);
  for (std::size_t k = 0; k <= 10; ++k) EXPECT_EQ(d.at(k), prefix_stream().at(k));
}

TEST(SupOfStream, GrowingIntervalsDiverge) {
  R1Sequence fs = make_r1_sequence([](std::size_t n) { return R1Function::constant(chi(0, q(n))); });
  R1Function d = sup_of_r1_stream(fs);
  for (std::size_t k = 0; k <= 10; ++k) EXPECT_EQ(d.partial(k), q(k));
  EXPECT_TRUE(sup_squeeze(fs, d, 10).holds);
}

TEST(SupOfStream, DecreasingMembersAreReported) {
  R1Sequence fs = make_r1_sequence([](std::size_t n) { return R1Function::constant(chi(0, n == 2 ? 1 : 2)); });
  R1Function d = sup_of_r1_stream(fs);
  EXPECT_THROW(d.at(3), MonotonicityError);
}

TEST(R1Property, PartialsNeverDecrease) {
  oracle::RawGen gen(21);
  for (int i = 0; i < 30; ++i) {
    std::vector<StepFunction> incs;
    for (int j = 0; j < 12; ++j) incs.push_back(StepFunction::canonicalize(kLine, gen.raw(kLine, true, 3)));
    R1Function f = R1Function::from_stream(kLine, [incs](std::size_t n) {
      StepFunction acc = StepFunction::zero(kLine);
      for (std::size_t j = 0; j <= n && j < incs.size(); ++j) acc = acc + incs[j];
      return acc;
    });
    for (std::size_t n = 1; n < 15; ++n) EXPECT_LE(f.partial(n - 1), f.partial(n));
  }
}

TEST(R1Property, DifferentExhaustionsOfOneTargetAgree) {
  // pairs of streams increasing to the same function, with their common integral
  struct Pair {
    R1Function a, b;
    Rational value;
  };
  std::vector<Pair> catalog;
  catalog.push_back({R1Function::from_stream(kLine, [](std::size_t n) { return chi(0, min(q(n), Rational(4)) / 4); }),
                     R1Function::from_stream(kLine, [](std::size_t n) { return chi(0, min(q(n), Rational(3)) / 3); }),
                     Rational(1)});
  catalog.push_back({prefix_stream().with_declared_limit(Rational(1)),
                     R1Function::from_stream(kLine, [](std::size_t n) { return chi(0, min(q(n), Rational(2)) / 2); }),
                     Rational(1)});
  catalog.push_back({R1Function::from_stream(kLine,
                                             [](std::size_t n) {
                                               return chi(0, Rational(1) - Rational::power_of_two(-static_cast<long>(n)));
                                             })
                         .with_declared_limit(Rational(1)),
                     prefix_stream().with_declared_limit(Rational(1)), Rational(1)});
  catalog.push_back({R1Function::from_stream(kLine, [](std::size_t n) { return chi(-min(q(n), Rational(5)), 0, 2); }),
                     R1Function::constant(chi(-5, 0, 2)), Rational(10)});
  for (const Pair& p : catalog) {
    IntegralEstimate ea = integral_r1(p.a, 60, 8, Rational(1000000));
    IntegralEstimate eb = integral_r1(p.b, 60, 8, Rational(1000000));
    auto va = ea.value(), vb = eb.value();
    ASSERT_TRUE(va && vb);
    EXPECT_EQ(*va, ExtendedRational(p.value));
    EXPECT_EQ(*va, *vb);
    // neither ladder ever passes the other's limit
    for (const auto& x : ea.partials) EXPECT_LE(ExtendedRational(x), *vb);
    for (const auto& x : eb.partials) EXPECT_LE(ExtendedRational(x), *va);
  }
}

TEST(R1Property, LinearityAndLatticeAtEveryIndex) {
  oracle::RawGen gen(22);
  for (int i = 0; i < 20; ++i) {
    StepFunction da = StepFunction::canonicalize(kLine, gen.raw(kLine, true, 3));
    StepFunction db = StepFunction::canonicalize(kLine, gen.raw(kLine, true, 3));
    StepFunction sa = StepFunction::canonicalize(kLine, gen.raw(kLine, false, 3));
    StepFunction sb = StepFunction::canonicalize(kLine, gen.raw(kLine, false, 3));
    R1Function f = R1Function::from_stream(kLine, [=](std::size_t n) { return sa + q(n) * da; });
    R1Function g = R1Function::from_stream(kLine, [=](std::size_t n) { return sb + q(n) * db; });
    Rational c(gen.uniform(0, 9), gen.uniform(1, 3));
    R1Function sum = add(f, g), scaled = scale_nonneg(c, f);
    R1Function lo = r1_min(f, g), hi = r1_max(f, g);
    for (std::size_t n = 0; n <= 8; ++n) {
      EXPECT_EQ(sum.partial(n), f.partial(n) + g.partial(n));
      EXPECT_EQ(scaled.partial(n), c * f.partial(n));
      EXPECT_EQ(lo.partial(n) + hi.partial(n), sum.partial(n));
    }
  }
}
