#pragma once

// Seeded generators of random cells and step functions for property checks.

#include "riesz/step_function.hpp"

#include <random>
#include <string>
#include <vector>

namespace riesz {

struct RandomStepSpec {
  int max_terms = 6;
  long grid = 8;     // interval endpoints are i / denom with |i| <= grid
  long denom = 2;
  long max_coeff = 4;  // coefficients p / q with |p| <= max_coeff, q in {1, 2}
  std::vector<PointId> ground = {"a", "b", "c", "d", "e"};
};

class RandomSteps {
 public:
  explicit RandomSteps(std::uint64_t seed, RandomStepSpec spec = {}) : rng_(seed), spec_(std::move(spec)) {}

  std::mt19937_64& engine() { return rng_; }
  const RandomStepSpec& spec() const { return spec_; }

  long uniform(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng_); }

  Rational coefficient(bool nonneg = false) {
    long p = uniform(nonneg ? 1 : -spec_.max_coeff, spec_.max_coeff);
    if (p == 0) p = 1;
    return Rational(p, uniform(1, 2));
  }

  Cell cell(const MeasureSpace& space) {
    switch (space.kind()) {
      case MeasureSpace::Kind::interval_line: {
        long a = uniform(-spec_.grid, spec_.grid);
        long b = uniform(-spec_.grid, spec_.grid);
        if (b < a) std::swap(a, b);
        if (a == b) ++b;
        return Cell::interval(Rational(a, spec_.denom), Rational(b, spec_.denom));
      }
      case MeasureSpace::Kind::counting:
      case MeasureSpace::Kind::zero: {
        std::vector<PointId> ids;
        for (const auto& id : spec_.ground)
          if (uniform(0, 2) == 0) ids.push_back(id);
        if (ids.empty()) ids.push_back(spec_.ground[static_cast<std::size_t>(uniform(0, static_cast<long>(spec_.ground.size()) - 1))]);
        return Cell::finite_set(std::move(ids));
      }
      case MeasureSpace::Kind::product: return Cell::rectangle(cell(space.left()), cell(space.right()));
    }
    throw DomainError("unknown space kind");
  }

  std::vector<Term> terms(const MeasureSpace& space, bool nonneg = false) {
    std::vector<Term> raw;
    int n = static_cast<int>(uniform(0, spec_.max_terms));
    for (int i = 0; i < n; ++i) raw.push_back(Term{cell(space), coefficient(nonneg)});
    return raw;
  }

  StepFunction step(const MeasureSpace& space, bool nonneg = false) {
    return StepFunction::canonicalize(space, terms(space, nonneg));
  }

  /// Indicator of a random finite union of cells.
  StepFunction set(const MeasureSpace& space) {
    StepFunction chi = StepFunction::zero(space);
    int n = static_cast<int>(uniform(0, 3));
    for (int i = 0; i < n; ++i) chi = pointwise_max(chi, StepFunction::indicator(space, cell(space)));
    return chi;
  }

 private:
  std::mt19937_64 rng_;
  RandomStepSpec spec_;
};

}  // namespace riesz
