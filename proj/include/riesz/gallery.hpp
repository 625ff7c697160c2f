#pragma once

// Reproducible worked examples.  Every entry re-derives its claims and
// prints them with a provenance tag; a claim that does not hold makes the
// report fail.

#include "riesz/measurable.hpp"
#include "riesz/product.hpp"

#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace riesz::gallery {

enum class Tag { paper, trivial, derived };

inline std::string to_string(Tag t) {
  switch (t) {
    case Tag::paper: return "[PAPER]";
    case Tag::trivial: return "[TRIVIAL]";
    case Tag::derived: return "[DERIVED]";
  }
  return "[?]";
}

struct Claim {
  Tag tag;
  std::string text;
  bool holds;
};

struct Report {
  std::string id;
  std::string title;
  std::vector<std::string> notes;
  std::vector<Claim> claims;

  bool ok() const {
    for (const auto& c : claims)
      if (!c.holds) return false;
    return true;
  }

  void claim(Tag tag, std::string text, bool holds) { claims.push_back(Claim{tag, std::move(text), holds}); }
  void note(std::string text) { notes.push_back(std::move(text)); }

  std::string str() const {
    std::ostringstream os;
    os << "gallery " << id << ": " << title << "\n";
    for (const auto& n : notes) os << "  " << n << "\n";
    for (const auto& c : claims) os << (c.holds ? "  ok   " : "  FAIL ") << to_string(c.tag) << " " << c.text << "\n";
    os << (ok() ? "all claims hold" : "CLAIM FAILURE") << "\n";
    return os.str();
  }
};

struct Params {
  std::size_t depth = 20;
  ExtendedRational alpha = ExtendedRational(1);
  long window = 5;
  std::size_t horizon = 50;
};

namespace detail {

inline StepFunction chi(const Rational& lo, const Rational& hi) {
  return StepFunction::indicator(MeasureSpace::interval_line(), Cell::interval(lo, hi));
}

inline std::string join(const std::vector<std::string>& parts) {
  std::string out;
  for (const auto& p : parts) out += (out.empty() ? "" : ", ") + p;
  return out;
}

}  // namespace detail

/// f_n = -chi(-inf, 0) + chi(0, n): the negative part is the stream
/// chi[-k, 0) with integral +inf.
inline R2Function sign_term(std::size_t n) {
  const MeasureSpace line = MeasureSpace::interval_line();
  R1Function neg = R1Function::from_stream(line, [](std::size_t k) {
                     return detail::chi(Rational(-static_cast<long>(k)), Rational(0));
                   }).with_declared_limit(ExtendedRational::plus_infinity());
  return R2Function::make(R1Function::constant(detail::chi(0, Rational(static_cast<long>(n)))), neg);
}

/// f_n = -chi(n, inf), negative part chi[n, n + k).
inline R2Function tail_term(std::size_t n) {
  const MeasureSpace line = MeasureSpace::interval_line();
  Rational a(static_cast<long>(n));
  R1Function neg = R1Function::from_stream(line, [a](std::size_t k) {
                     return detail::chi(a, a + Rational(static_cast<long>(k)));
                   }).with_declared_limit(ExtendedRational::plus_infinity());
  return R2Function::make(R1Function::zero(line), neg);
}

inline Report sign_not_in_r2(const Params& p) {
  Report r{"sign-not-in-r2", "f_n = -chi(-inf,0) + chi(0,n) increases to sign, which is not in R2", {}, {}};
  r.note("half-open cells [0, n) and [-k, 0) stand for the open intervals; they differ by null sets");
  BeppoLeviOptions o;
  o.horizon = p.horizon;
  BeppoLeviResult res = generalized_beppo_levi(make_r2_sequence(sign_term), o);
  bool all_minus = true;
  for (const auto& v : res.report.ladder) all_minus = all_minus && v && v->is_minus_infinity();
  r.claim(Tag::paper, "every integral of f_n, n <= " + std::to_string(p.horizon) + ", is certified -inf", all_minus);
  bool rejected = !res.limit && res.report.rejection &&
                  res.report.rejection->find("cannot be omitted") != std::string::npos;
  r.claim(Tag::paper, "the Beppo Levi harness rejects: " + res.report.rejection.value_or("(accepted)"), rejected);

  const std::vector<Rational> xs = {Rational(-3), Rational(-1, 2), Rational(1, 2), Rational(3)};
  bool pointwise = true;
  const std::size_t n = 10;
  for (const Rational& x : xs) {
    Rational v = sign_term(n).approximant(n).value_at(Point::on_line(x));
    pointwise = pointwise && v == Rational(x.sign());
  }
  r.claim(Tag::derived, "f_10 agrees with sign at -3, -1/2, 1/2, 3", pointwise);

  const MeasureSpace line = MeasureSpace::interval_line();
  bool undefined = false;
  try {
    R1Function pos = R1Function::from_stream(line, [](std::size_t k) {
                       return detail::chi(0, Rational(static_cast<long>(k)));
                     }).with_declared_limit(ExtendedRational::plus_infinity());
    R2Function::make(pos, sign_term(0).neg());
  } catch (const DefinednessError&) {
    undefined = true;
  }
  r.claim(Tag::paper, "sign = chi[0,inf) - chi(-inf,0) has both integrals +inf: DefinednessError", undefined);
  return r;
}

inline Report beppo_levi_tail(const Params& p) {
  Report r{"beppo-levi-tail", "f_n = -chi(n,inf) increases to 0 in R2, yet the integrals stay -inf", {}, {}};
  BeppoLeviOptions o;
  o.horizon = p.horizon;
  BeppoLeviResult res = generalized_beppo_levi(make_r2_sequence(tail_term), o);
  bool all_minus = true;
  for (const auto& v : res.report.ladder) all_minus = all_minus && v && v->is_minus_infinity();
  r.claim(Tag::paper, "every integral of f_n, n <= " + std::to_string(p.horizon) + ", is certified -inf", all_minus);
  bool rejected = !res.limit && res.report.rejection &&
                  res.report.rejection->find("cannot be omitted") != std::string::npos;
  r.claim(Tag::paper, "the Beppo Levi harness rejects: " + res.report.rejection.value_or("(accepted)"), rejected);
  bool limit_zero = true;
  for (long x : {0L, 3L, 7L}) {
    std::size_t n = static_cast<std::size_t>(x) + 1;
    limit_zero = limit_zero && tail_term(n).approximant(n + 5).value_at(Point::on_line(Rational(x))).is_zero();
  }
  r.claim(Tag::paper, "f_n(x) = 0 once n > x: the limit is 0, an element of R2 with integral 0", limit_zero);
  r.claim(Tag::paper, "lim integral f_n = -inf differs from integral 0 of the limit", all_minus);
  return r;
}

/// Rationals in (0, 1) by denominator, then numerator, in lowest terms:
/// 1/2, 1/3, 2/3, 1/4, 3/4, 1/5, ...  Index 1 is 1/2.
inline Rational weir_rational(std::size_t n) {
  if (n == 0) throw DomainError("the enumeration starts at index 1");
  std::size_t seen = 0;
  for (long q = 2;; ++q)
    for (long num = 1; num < q; ++num)
      if (std::gcd(num, q) == 1 && ++seen == n) return Rational(num, q);
}

inline std::size_t weir_index(const Rational& r) {
  if (!(Rational(0) < r && r < Rational(1))) throw DomainError(r.str() + " is not in (0, 1)");
  std::size_t seen = 0;
  for (long q = 2;; ++q)
    for (long num = 1; num < q; ++num)
      if (std::gcd(num, q) == 1) {
        ++seen;
        if (Rational(num, q) == r) return seen;
      }
}

/// (r_n - 2^-n-3, r_n + 2^-n-3) clipped to [0, 1).
inline Cell weir_cell(std::size_t n) {
  Rational r = weir_rational(n);
  Rational h = Rational::power_of_two(-static_cast<long>(n) - 3);
  return Cell::interval(max(Rational(0), r - h), min(Rational(1), r + h));
}

/// S_d = union of the first d Weir cells.
inline StepFunction weir_partial(std::size_t d) {
  const MeasureSpace line = MeasureSpace::interval_line();
  StepFunction s = StepFunction::zero(line);
  for (std::size_t n = 1; n <= d; ++n) s = pointwise_max(s, StepFunction::indicator(line, weir_cell(n)));
  return s;
}

inline Report weir_set(const Params& p) {
  Report r{"weir-set", "an open S in (0,1) containing every rational with 0 < mu(S) < 1", {}, {}};
  r.note("enumeration of the rationals in (0,1): by denominator, then numerator, lowest terms (1/2, 1/3, 2/3, 1/4, ...)");
  r.note("depth " + std::to_string(p.depth) + "; cells are half-open, which changes S by a null set");
  const std::size_t d = std::max<std::size_t>(p.depth, 1);
  const MeasureSpace line = MeasureSpace::interval_line();
  R1Function s = R1Function::from_stream(line, [](std::size_t k) { return weir_partial(k + 1); })
                     .with_upper_bound(Rational(1, 4));
  std::vector<Rational> ladder;
  for (std::size_t k = 0; k < d; ++k) ladder.push_back(s.partial(k));
  Rational lower = line.measure(weir_cell(1));
  bool inside = true;
  for (std::size_t n = 1; n <= d; ++n) {
    const Interval iv = weir_cell(n).as_interval();
    inside = inside && Rational(0) <= iv.lo && iv.hi <= Rational(1);
  }
  r.claim(Tag::paper, "S is contained in (0,1): all " + std::to_string(d) + " cells lie in [0,1)", inside);
  r.claim(Tag::derived, "lower bound mu(S) >= mu(first cell) = " + lower.str() + " > 0", lower.sign() > 0);
  bool squeezed = true;
  for (std::size_t k = 0; k < d; ++k) {
    squeezed = squeezed && lower <= ladder[k] && ladder[k] <= Rational(1, 4);
    if (k > 0) squeezed = squeezed && ladder[k - 1] <= ladder[k];
  }
  r.claim(Tag::derived,
          "partials non-decreasing with " + lower.str() + " <= mu(S_d) <= 1/4 for d <= " + std::to_string(d) +
              "; mu(S_" + std::to_string(d) + ") = " + ladder.back().str(),
          squeezed);
  Rational series = Rational(1, 4) - Rational::power_of_two(-static_cast<long>(d) - 2);
  r.claim(Tag::derived, "sum of cell lengths up to depth " + std::to_string(d) + " is " + series.str() + " < 1/4",
          ladder.back() <= series && series < Rational(1, 4));
  r.claim(Tag::paper, "0 < " + lower.str() + " <= mu(S) <= 1/4 < 1", lower.sign() > 0 && Rational(1, 4) < Rational(1));

  Rational gap = Rational(1) - Rational(1, 4);
  r.claim(Tag::paper, "integral of chi(0,1) - chi_S >= 1 - 1/4 = " + gap.str() + " > 0", gap.sign() > 0);

  // Every grid cell of positive length meets S in a rational, where
  // chi(0,1) - chi_S vanishes, so a step minorant is <= 0 on each cell.
  std::size_t worst = 0;
  bool minorant = true;
  for (long m = 1; m <= 16; ++m) {
    for (long i = 0; i < m; ++i) {
      Rational mid(2 * i + 1, 2 * m);
      std::size_t n = weir_index(mid);
      worst = std::max(worst, n);
      minorant = minorant && weir_cell(n).contains(Coordinate(mid));
    }
  }
  r.claim(Tag::paper,
          "on the grids [i/m, (i+1)/m), m <= 16, every cell contains some r_n in S (largest index " +
              std::to_string(worst) + "): a step function below chi(0,1) - chi_S is <= 0 there, so its integral is <= 0",
          minorant);
  r.claim(Tag::paper, "hence chi(0,1) - chi_S is a nonnegative element of R2 outside R1", minorant && gap.sign() > 0);
  return r;
}

/// A set of the countable / co-countable sigma-algebra over an uncountable
/// ground set, kept symbolic: an explicit countable list, or the
/// complement of one.
struct SymbolicSet {
  bool co_countable = false;
  std::vector<PointId> listed;

  SymbolicSet complement() const { return SymbolicSet{!co_countable, listed}; }
  std::string str() const {
    std::string body = "{" + detail::join(listed) + "}";
    return co_countable ? "X \\ " + body : body;
  }
};

inline ExtendedRational mu_alpha(const SymbolicSet& a, const ExtendedRational& alpha) {
  return a.co_countable ? alpha : ExtendedRational(0);
}

inline Report mu_alpha_entry(const Params& p) {
  const ExtendedRational& alpha = p.alpha;
  Report r{"mu-alpha", "distinct extensions of the zero measure on finite subsets of an uncountable X", {}, {}};
  r.note("alpha = " + alpha.str() + "; co-countable sets are represented as complements of explicit lists");
  if (alpha.sign() < 0) {
    r.claim(Tag::paper, "alpha must satisfy 0 <= alpha <= inf", false);
    return r;
  }
  const MeasureSpace zero = MeasureSpace::zero("X");
  std::vector<SymbolicSet> finite = {{false, {}}, {false, {"a"}}, {false, {"a", "b", "c"}}};
  bool agree = true;
  for (const auto& s : finite) {
    Rational base = s.listed.empty() ? Rational(0) : zero.measure(Cell::finite_set(s.listed));
    agree = agree && mu_alpha(s, alpha) == ExtendedRational(base);
  }
  r.claim(Tag::paper, "mu_alpha = mu = 0 on the finite sets {}, {a}, {a,b,c}", agree);
  SymbolicSet co{true, {"a", "b"}};
  bool differs = !(mu_alpha(co, alpha) == ExtendedRational(0));
  r.claim(Tag::paper,
          "on the co-countable " + co.str() + ": mu_alpha = " + mu_alpha(co, alpha).str() + ", mu_0 = 0" +
              (alpha.sign() == 0 ? " (alpha = 0: the two agree)" : ", so the extensions differ"),
          alpha.sign() == 0 ? !differs : differs);
  SymbolicSet a{false, {"a"}};
  SymbolicSet rest{true, {"a"}};
  auto sum = ext_add(mu_alpha(a, alpha), mu_alpha(rest, alpha));
  r.claim(Tag::derived, "additive on {a} and its disjoint complement: 0 + " + alpha.str() + " = mu_alpha(X)",
          sum && *sum == mu_alpha(SymbolicSet{true, {}}, alpha));
  r.claim(Tag::trivial, "complement swaps countable and co-countable",
          co.complement().co_countable == false && a.complement().co_countable == true);
  return r;
}

inline Report counting_counterexample_entry(const Params& p) {
  Report r{"counting-counterexample",
           "f = 1 on x = y + 1, -1 on x = y - 1 over Z x Z: iterated integrals 0, double integral undefined", {}, {}};
  r.note("window [-N, N]^2 for N = 0.." + std::to_string(p.window) + "; section sums run over all of Z");
  bool iterated = true;
  bool growing = true;
  Rational prev(-1);
  std::vector<std::string> parts;
  for (long n = 0; n <= p.window; ++n) {
    CountingCounterexample c = counting_counterexample(n);
    iterated = iterated && c.iterated_xy.is_zero() && c.iterated_yx.is_zero();
    for (const auto& v : c.row_sums) iterated = iterated && v.is_zero();
    growing = growing && c.positive_part == Rational(2 * n) && c.negative_part == Rational(2 * n) &&
              c.absolute == Rational(4 * n) && prev < c.absolute;
    prev = c.absolute;
    parts.push_back("N=" + std::to_string(n) + ": +" + c.positive_part.str() + " -" + c.negative_part.str() + " |f| " +
                    c.absolute.str());
  }
  r.claim(Tag::paper, "both iterated integrals are exactly 0 for every window", iterated);
  r.claim(Tag::derived, "window integrals of f+, f-, |f| are 2N, 2N, 4N (" + detail::join(parts) + ")", growing);
  r.claim(Tag::paper, "f+ and f- have unbounded integrals, so the double integral is undefined", growing);
  return r;
}

inline Report diagonal(const Params& p) {
  Report r{"diagonal", "chi_D for D = {(x,x)} under Zero(X) x Counting(X)", {}, {}};
  const MeasureSpace zero = MeasureSpace::zero("X");
  const MeasureSpace counting = MeasureSpace::counting("X");
  const MeasureSpace prod = MeasureSpace::product(zero, counting);
  std::vector<PointId> window;
  for (long i = 0; i < p.window; ++i) window.push_back("x" + std::to_string(i));
  r.note("window of " + std::to_string(window.size()) + " points {" + detail::join(window) + "}");
  std::vector<Term> terms;
  for (const auto& id : window)
    terms.push_back(Term{Cell::rectangle(Cell::finite_set({id}), Cell::finite_set({id})), Rational(1)});
  StepFunction phi = StepFunction::canonicalize(prod, terms);
  FubiniReport f = fubini_step(phi);
  Rational dy_outer = inner_integral(transpose(phi)).integral();
  r.claim(Tag::derived, "iterated integral over y of (integral over x of chi_D) = " + dy_outer.str(), dy_outer.is_zero());
  r.claim(Tag::derived, "every rectangle {x} x {x} has product measure 0 * 1 = 0; the window double integral is " +
                            f.double_integral.lower.str() + " = 0 * |window|",
          f.double_integral.lower == ExtendedRational(0));
  r.note("chi_D is only locally measurable: it is not an a.e. limit of step functions of finite-measure support, and the");
  r.note("locally measurable extension assigns it integral inf while the iterated integral stays 0, so Fubini fails there");
  return r;
}

using Builder = std::function<Report(const Params&)>;

inline const std::map<std::string, Builder>& entries() {
  static const std::map<std::string, Builder> table = {
      {"sign-not-in-r2", sign_not_in_r2},
      {"beppo-levi-tail", beppo_levi_tail},
      {"weir-set", weir_set},
      {"mu-alpha", mu_alpha_entry},
      {"counting-counterexample", counting_counterexample_entry},
      {"diagonal", diagonal},
  };
  return table;
}

inline Report run(const std::string& id, const Params& p = {}) {
  auto it = entries().find(id);
  if (it == entries().end()) throw DomainError("unknown gallery entry '" + id + "'");
  return it->second(p);
}

}  // namespace riesz::gallery
