#pragma once

// Randomized invariant suite behind `riesz selftest`.

#include "riesz/gallery.hpp"
#include "riesz/random.hpp"

#include <functional>
#include <string>
#include <vector>

namespace riesz {

struct SelftestResult {
  std::string name;
  bool ok;
  std::string detail;
};

namespace detail {

inline std::vector<MeasureSpace> selftest_spaces() {
  const MeasureSpace line = MeasureSpace::interval_line();
  const MeasureSpace count = MeasureSpace::counting();
  return {line, count, MeasureSpace::product(line, count)};
}

inline std::vector<MeasureSpace> product_spaces() {
  const MeasureSpace line = MeasureSpace::interval_line();
  const MeasureSpace count = MeasureSpace::counting();
  return {MeasureSpace::product(line, line), MeasureSpace::product(line, count), MeasureSpace::product(count, count)};
}

inline bool agrees_on_samples(const StepFunction& f, const std::vector<const StepFunction*>& inputs,
                              const std::function<Rational(const std::vector<Rational>&)>& op) {
  std::vector<Cell> cells;
  for (const auto* g : inputs)
    for (const auto& t : g->terms()) cells.push_back(t.cell);
  for (const auto& t : f.terms()) cells.push_back(t.cell);
  for (const Point& p : sample_points(f.space(), cells)) {
    std::vector<Rational> xs;
    for (const auto* g : inputs) xs.push_back(g->value_at(p));
    if (!(f.value_at(p) == op(xs))) return false;
  }
  return true;
}

}  // namespace detail

/// Runs `rounds` random cases of each invariant plus every gallery entry.
inline std::vector<SelftestResult> run_selftest(std::uint64_t seed = 1, int rounds = 100) {
  std::vector<SelftestResult> out;
  RandomSteps gen(seed);
  auto record = [&](std::string name, bool ok, std::string detail = {}) {
    out.push_back(SelftestResult{std::move(name), ok, std::move(detail)});
  };

  for (const MeasureSpace& space : detail::selftest_spaces()) {
    bool lin = true, pos = true, lattice = true, pointwise = true;
    for (int i = 0; i < rounds; ++i) {
      StepFunction a = gen.step(space);
      StepFunction b = gen.step(space);
      Rational c = gen.coefficient();
      lin = lin && (a + b).integral() == a.integral() + b.integral() && (c * a).integral() == c * a.integral();
      StepFunction nn = gen.step(space, true);
      pos = pos && nn.integral().sign() >= 0;
      lattice = lattice && pointwise_min(a, b) + pointwise_max(a, b) == a + b;
      pointwise = pointwise &&
                  detail::agrees_on_samples(a + b, {&a, &b}, [](const auto& x) { return x[0] + x[1]; }) &&
                  detail::agrees_on_samples(pointwise_max(a, b), {&a, &b}, [](const auto& x) { return max(x[0], x[1]); });
    }
    record("step linearity on " + space.str(), lin);
    record("step positivity on " + space.str(), pos);
    record("min + max = sum on " + space.str(), lattice);
    record("pointwise agreement on " + space.str(), pointwise);
  }

  for (const MeasureSpace& space : detail::product_spaces()) {
    bool ok = true;
    std::string detail;
    for (int i = 0; i < rounds && ok; ++i) {
      StepFunction phi = gen.step(space);
      try {
        fubini_triple(phi);
      } catch (const FubiniMismatch& e) {
        ok = false;
        detail = e.what();
      }
    }
    record("fubini on " + space.str(), ok, detail);
  }

  {
    bool ok = true;
    const MeasureSpace line = MeasureSpace::interval_line();
    for (int i = 0; i < rounds; ++i) {
      StepFunction phi = gen.step(line, true);
      Rational t(gen.uniform(1, 8), gen.uniform(1, 4));
      LevelSetBound b = markov_level_bound(phi, t);
      ok = ok && b.total <= b.bound;
    }
    record("level-set measure <= integral / t", ok);
  }

  {
    bool ok = true;
    const MeasureSpace line = MeasureSpace::interval_line();
    for (int i = 0; i < rounds; ++i) {
      L1Certificate f = l1_of_step(gen.step(line));
      L1Certificate g = l1_of_step(gen.step(line));
      Rational c = gen.coefficient();
      Rational nf = *norm_l1(f).value, ng = *norm_l1(g).value;
      ok = ok && *norm_l1(l1_add(f, g)).value <= nf + ng && *norm_l1(l1_scale(c, f)).value == abs(c) * nf;
      R2Function mn = r2_min(f.function(), g.function());
      R2Function mx = r2_max(f.function(), g.function());
      ok = ok && *r2_add(mn, mx).as_step() == *r2_add(f.function(), g.function()).as_step();
    }
    record("L1 norm triangle, homogeneity and min + max = sum", ok);
  }

  {
    bool ok = true;
    for (const MeasureSpace& space : detail::selftest_spaces()) {
      for (int i = 0; i < rounds; ++i) {
        MeasurableSet a = MeasurableSet::from_step(gen.set(space));
        MeasurableSet b = MeasurableSet::from_step(gen.set(space));
        auto m = [](const MeasurableSet& s) { return measure_of(s).exact->value(); };
        ok = ok && m(set_union(a, b)) + m(set_intersection(a, b)) == m(a) + m(b) &&
             m(set_difference(a, b)) + m(set_intersection(a, b)) == m(a);
      }
    }
    record("measure additivity on random sets", ok);
  }

  for (const auto& [id, build] : gallery::entries()) {
    gallery::Report r = build(gallery::Params{});
    record("gallery " + id, r.ok());
  }
  return out;
}

}  // namespace riesz
