#pragma once

// Named sequences with hand-derived limits, shared by the unit tests and the
// acceptance binary.

#include "riesz/riesz.hpp"

#include <functional>
#include <string>
#include <vector>

namespace catalog {

using namespace riesz;

inline const MeasureSpace& line() {
  static const MeasureSpace s = MeasureSpace::interval_line();
  return s;
}

inline Rational q(std::size_t n) { return Rational(static_cast<long>(n)); }

inline StepFunction chi(Rational a, Rational b, Rational c = Rational(1)) {
  return StepFunction::indicator(line(), Cell::interval(std::move(a), std::move(b)), std::move(c));
}

struct MonotoneEntry {
  std::string name;
  std::function<R2Function(std::size_t)> term;
  Rational limit;
};

/// Non-decreasing sequences f_0 <= f_1 <= ... with lim integral f_n = limit.
inline std::vector<MonotoneEntry> monotone_sequences() {
  std::vector<MonotoneEntry> out;
  out.push_back({"chi[0, n/(n+1))", [](std::size_t n) { return R2Function::from_step(chi(0, q(n) / q(n + 1))); },
                 Rational(1)});
  out.push_back({"(1 - 2^-n) chi[0,1)",
                 [](std::size_t n) {
                   return R2Function::from_step(chi(0, 1, Rational(1) - Rational::power_of_two(-static_cast<long>(n))));
                 },
                 Rational(1)});
  out.push_back({"chi[1, 2 - 1/(n+1))",
                 [](std::size_t n) { return R2Function::from_step(chi(1, Rational(2) - Rational(1) / q(n + 1))); },
                 Rational(1)});
  out.push_back({"-chi[0, 1/(n+1))",
                 [](std::size_t n) { return R2Function::from_step(-chi(0, Rational(1) / q(n + 1))); }, Rational(0)});
  out.push_back({"chi[0, 2 - 2^-n)",
                 [](std::size_t n) {
                   return R2Function::from_step(chi(0, Rational(2) - Rational::power_of_two(-static_cast<long>(n))));
                 },
                 Rational(2)});
  out.push_back({"chi[0, 2 - 1/(n+1)) - (stream chi[0, 1 - 2^-k) -> chi[0,1))",
                 [](std::size_t n) {
                   static const R1Function neg =
                       R1Function::from_stream(line(), [](std::size_t k) {
                         return chi(0, Rational(1) - Rational::power_of_two(-static_cast<long>(k)));
                       }).with_declared_limit(Rational(1));
                   return R2Function::make(R1Function::constant(chi(0, Rational(2) - Rational(1) / q(n + 1))), neg);
                 },
                 Rational(1)});
  out.push_back({"(stream chi[0, (1 - 2^-k) n/(n+1))) - chi[0,1)/2",
                 [](std::size_t n) {
                   Rational top = q(n) / q(n + 1);
                   R1Function pos = R1Function::from_stream(line(), [top](std::size_t k) {
                                      return chi(0, top * (Rational(1) - Rational::power_of_two(-static_cast<long>(k))));
                                    }).with_declared_limit(top);
                   return R2Function::make(pos, R1Function::constant(chi(0, 1, Rational(1, 2))));
                 },
                 Rational(1, 2)});
  out.push_back({"-chi(-inf,0) for n < 3, then -chi[-1,0)/(n-2)",
                 [](std::size_t n) {
                   if (n < 3) {
                     R1Function neg = R1Function::from_stream(line(), [](std::size_t k) {
                                        return chi(-q(k), 0);
                                      }).with_declared_limit(ExtendedRational::plus_infinity());
                     return R2Function::make(R1Function::zero(line()), neg);
                   }
                   return R2Function::from_step(-chi(-1, 0, Rational(1) / q(n - 2)));
                 },
                 Rational(0)});
  out.push_back({"n/(n+1) chi{a,b,c} under counting",
                 [](std::size_t n) {
                   return R2Function::from_step(StepFunction::indicator(
                       MeasureSpace::counting(), Cell::finite_set({"a", "b", "c"}), q(n) / q(n + 1)));
                 },
                 Rational(3)});
  out.push_back({"chi[0, n/(n+1)) x {a,b} on interval x counting",
                 [](std::size_t n) {
                   MeasureSpace s = MeasureSpace::product(line(), MeasureSpace::counting());
                   return R2Function::from_step(StepFunction::indicator(
                       s, Cell::rectangle(Cell::interval(0, q(n) / q(n + 1)), Cell::finite_set({"a", "b"}))));
                 },
                 Rational(2)});
  return out;
}

struct ConvergenceEntry {
  std::string name;
  std::function<StepFunction(std::size_t)> term;
  std::optional<StepFunction> bound;  // dominating g, for dominated convergence entries
};

/// Fatou entries are nonnegative; dominated entries satisfy |f_n| <= bound.
inline std::vector<ConvergenceEntry> convergence_sequences() {
  std::vector<ConvergenceEntry> out;
  out.push_back({"escape: chi[n, n+1)", [](std::size_t n) { return chi(q(n), q(n + 1)); }, std::nullopt});
  out.push_back({"constant chi[0,1)", [](std::size_t) { return chi(0, 1); }, std::nullopt});
  out.push_back({"(1 + 1/(n+1)) chi[0,1)", [](std::size_t n) { return chi(0, 1, Rational(1) + Rational(1) / q(n + 1)); },
                 std::nullopt});
  out.push_back({"spike: (n+1) chi[0, 1/(n+1))", [](std::size_t n) { return chi(0, Rational(1) / q(n + 1), q(n + 1)); },
                 std::nullopt});
  out.push_back({"alternating chi[0,1), chi[1,2)", [](std::size_t n) { return n % 2 ? chi(1, 2) : chi(0, 1); },
                 std::nullopt});
  out.push_back({"escape by halves: chi[2^n, 2^n + 2^-n)",
                 [](std::size_t n) {
                   Rational a = Rational::power_of_two(static_cast<long>(n));
                   return chi(a, a + Rational::power_of_two(-static_cast<long>(n)));
                 },
                 std::nullopt});
  out.push_back({"chi[0,1) / (n+1)", [](std::size_t n) { return chi(0, 1, Rational(1) / q(n + 1)); }, chi(0, 1)});
  out.push_back({"chi[0,1) - 2/(n+1) chi[0,1/2)",
                 [](std::size_t n) { return chi(0, 1) - chi(0, Rational(1, 2), Rational(2) / q(n + 1)); }, chi(0, 1)});
  out.push_back({"constant chi[0,1/2) - chi[1/2,1)", [](std::size_t) { return chi(0, Rational(1, 2)) - chi(Rational(1, 2), 1); },
                 chi(0, 1)});
  out.push_back({"(-1)^n chi[0,1) / (n+1)",
                 [](std::size_t n) { return chi(0, 1, Rational(n % 2 ? -1 : 1) / q(n + 1)); }, chi(0, 1)});
  return out;
}

}  // namespace catalog
