#include "catalog.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace riesz;
using catalog::chi;
using catalog::q;

namespace {

const MeasureSpace kLine = MeasureSpace::interval_line();

io::Document sample(const std::string& name) { return io::load_document(std::string(RIESZ_SAMPLES_DIR) + "/" + name); }

Rational eval(const std::string& text, long n, long k = 0) {
  return io::Parser::parse_expr(text).eval(Rational(n), Rational(k));
}

}  // namespace

TEST(Expr, Arithmetic) {
  EXPECT_EQ(eval("1 - 1/(n+1)", 3), Rational(3, 4));
  EXPECT_EQ(eval("2^(n+1)", 2), Rational(8));
  EXPECT_EQ(eval("2^-k", 0, 3), Rational(1, 8));
  EXPECT_EQ(eval("-k - 1", 0, 4), Rational(-5));
  EXPECT_EQ(eval("3/4 * (n - 2)", 6), Rational(3));
  EXPECT_TRUE(io::Parser::parse_expr("n + 1").uses('n'));
  EXPECT_FALSE(io::Parser::parse_expr("n + 1").uses('k'));
}

TEST(Expr, Errors) {
  EXPECT_THROW(io::Parser::parse_expr("1 +"), ParseError);
  EXPECT_THROW(io::Parser::parse_expr("(1"), ParseError);
  EXPECT_THROW(io::Parser::parse_expr("m"), ParseError);
  EXPECT_THROW(eval("1/(n-1)", 1), DomainError);
}

TEST(Space, ParsesAndPrints) {
  EXPECT_EQ(io::Parser::parse_space("interval"), kLine);
  EXPECT_EQ(io::Parser::parse_space("counting(Z)"), MeasureSpace::counting("Z"));
  MeasureSpace p = io::Parser::parse_space("product(interval, zero)");
  EXPECT_EQ(p, MeasureSpace::product(kLine, MeasureSpace::zero()));
  EXPECT_EQ(io::Parser::parse_space(p.str()), p);
  EXPECT_THROW(io::Parser::parse_space("lebesgue"), ParseError);
}

TEST(Document, StatementErrors) {
  EXPECT_THROW(io::parse_document("space interval\nstep { [0, 1) }"), ParseError);
  EXPECT_THROW(io::parse_document("space interval\nfunction { }"), ParseError);
  EXPECT_THROW(io::parse_document("space interval\nstep { [0, 1): 1"), ParseError);
  EXPECT_THROW(io::parse_document("space interval\nunion step { [0, 1): 1 }"), ParseError);
  EXPECT_THROW(io::document_function(io::parse_document("step { [0, 1): 1 }")), ParseError);
  EXPECT_THROW(io::document_function(io::parse_document("space interval")), ParseError);
  EXPECT_THROW(io::load_document("/nonexistent/file.txt"), ParseError);
}

TEST(Document, CommentsAndReversedIntervals) {
  io::Document d = io::parse_document("# leading\nspace interval # trailing\nstep { [3, 1): 5, [0, 1): 1 } # done\n");
  EXPECT_EQ(io::document_step(d), chi(0, 1));
}

TEST(Document, StepLimitMustMatch) {
  EXPECT_NO_THROW(io::document_function(io::parse_document("space interval\nstep { [0, 2): 1 } limit 2")));
  EXPECT_THROW(io::document_function(io::parse_document("space interval\nstep { [0, 2): 1 } limit 3")),
               DeclarationError);
}

TEST(Samples, Step) {
  io::Document d = sample("step.txt");
  StepFunction f = io::document_step(d);
  EXPECT_EQ(f, chi(0, 1, 2) - chi(Rational(1, 2), Rational(3, 2)));
  EXPECT_EQ(f.integral(), Rational(1));
}

TEST(Samples, Streams) {
  R2Function prefix = io::document_function(sample("r1_prefix.txt"));
  for (std::size_t k = 0; k <= 20; ++k) EXPECT_EQ(prefix.pos().partial(k), q(k) / q(k + 1));
  EXPECT_EQ(prefix.integral(), std::optional<ExtendedRational>(ExtendedRational(1)));

  R2Function stable = io::document_function(sample("r1_stable.txt"));
  std::vector<Rational> expected{Rational(1), Rational(2), Rational(4), Rational(5), Rational(5), Rational(5)};
  for (std::size_t k = 0; k < expected.size(); ++k) EXPECT_EQ(stable.pos().partial(k), expected[k]);
  IntegralEstimate e = integral_r1(stable.pos(), 20, 5, Rational(1000));
  EXPECT_EQ(e.value(), std::optional<ExtendedRational>(ExtendedRational(5)));

  R2Function div = io::document_function(sample("r1_divergent.txt"));
  EXPECT_EQ(div.pos().partial(9), Rational(10));
}

TEST(Samples, SignedPairs) {
  R2Function f = io::document_function(sample("r2_exact.txt"));
  EXPECT_EQ(f.integral(), std::optional<ExtendedRational>(ExtendedRational(Rational(3, 2))));

  R2Function g = io::document_function(sample("r2_finite.txt"));
  EXPECT_EQ(g.finite_side(), FiniteSide::neg);
  IntegralBounds b = g.bounds(10);
  EXPECT_EQ(b.lower, ExtendedRational(Rational(11 - 3)));
  EXPECT_EQ(b.upper, ExtendedRational::plus_infinity());

  EXPECT_THROW(io::document_function(sample("r2_undefined.txt")), DefinednessError);
}

TEST(Samples, Sequences) {
  io::Document bl = sample("bl_prefix.txt");
  for (std::size_t n = 0; n < 6; ++n)
    EXPECT_EQ(io::sequence_term(bl, n).integral(), std::optional<ExtendedRational>(ExtendedRational(q(n) / q(n + 1))));
  ASSERT_TRUE(bl.declared.has_value());
  EXPECT_EQ(bl.declared->eval(0, 0), ExtendedRational(1));

  io::Document rej = sample("bl_rejected.txt");
  EXPECT_EQ(io::sequence_term(rej, 3).neg().partial(4), Rational(5));

  io::Document esc = sample("fatou_escape.txt");
  EXPECT_EQ(*io::sequence_term(esc, 4).as_step(), chi(4, 5));

  io::Document dom = sample("dominated.txt");
  ASSERT_TRUE(dom.bound.has_value());
  EXPECT_EQ(*dom.bound->build(kLine).step(), chi(0, 2));
  EXPECT_EQ(*io::sequence_term(dom, 1).as_step(), chi(0, 1, Rational(1, 2)) + chi(1, 2, Rational(1, 2)));
}

TEST(Samples, Sets) {
  MeasurableSet a = io::document_set(sample("set_a.txt"));
  MeasurableSet b = io::document_set(sample("set_b.txt"));
  EXPECT_EQ(measure_of(a).exact, std::optional<ExtendedRational>(ExtendedRational(2)));
  EXPECT_EQ(measure_of(set_intersection(a, b)).exact, std::optional<ExtendedRational>(ExtendedRational(1)));
  MeasureValue u = measure_of(io::document_set(sample("set_union.txt")), 30);
  EXPECT_EQ(u.exact, std::optional<ExtendedRational>(ExtendedRational(1)));
  EXPECT_EQ(u.partials[30], Rational(1) - Rational::power_of_two(-31));
  EXPECT_THROW(io::document_set(io::parse_document("space interval\nstep { [0, 1): 2 }")), DomainError);
}

TEST(Samples, ProductFiles) {
  io::Document d = sample("fubini_step.txt");
  EXPECT_EQ(d.require_space(), MeasureSpace::product(kLine, MeasureSpace::counting()));
  EXPECT_EQ(io::document_step(d).integral(), Rational(2));
  R2Function s = io::document_function(sample("fubini_stream.txt"));
  EXPECT_EQ(s.pos().partial(3), Rational(3, 4));
}

TEST(RoundTrip, PrintedStepFunctionsParseBack) {
  oracle::RawGen gen(11);
  for (const MeasureSpace& s : {kLine, MeasureSpace::counting(), MeasureSpace::product(kLine, MeasureSpace::counting()),
                                MeasureSpace::product(kLine, kLine)}) {
    for (int i = 0; i < 60; ++i) {
      StepFunction f = StepFunction::canonicalize(s, gen.raw(s));
      io::Document d = io::parse_document("space " + s.str() + "\n" + f.str());
      EXPECT_EQ(io::document_step(d), f) << f.str();
    }
  }
}
