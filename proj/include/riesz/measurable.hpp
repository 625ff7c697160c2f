#pragma once

// Measurable functions as declared a.e. limits of step functions, measurable
// sets through their indicators, and the measure mu(A) = integral of chi_A.

#include "riesz/signed_class.hpp"

#include <algorithm>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace riesz {

/// f = lim phi_n a.e. for a witness stream phi_n.  Convergence is declared,
/// not verified; cauchy_at_samples checks what can be checked.
class MeasurableFunction {
 public:
  using Witness = std::function<StepFunction(std::size_t)>;

  MeasurableFunction(MeasureSpace space, Witness witness, std::string description)
      : space_(std::move(space)), description_(std::move(description)) {
    MeasureSpace s = space_;
    stream_ = LazyStream<StepFunction>::infinite([s, w = std::move(witness)](std::size_t n) {
      StepFunction phi = w(n);
      if (!(phi.space() == s))
        throw DomainError("witness element " + std::to_string(n) + " lives on " + phi.space().str());
      return phi;
    });
  }

  static MeasurableFunction from_step(StepFunction phi, std::string description = {}) {
    MeasureSpace space = phi.space();
    if (description.empty()) description = phi.str();
    MeasurableFunction f(std::move(space), [phi](std::size_t) { return phi; }, std::move(description));
    f.constant_ = true;
    return f.with_declared_limit(R2Function::from_step(phi));
  }

  /// Witness k -> pos.at(k) - neg.at(k), with f itself as declared limit.
  static MeasurableFunction from_r2(const R2Function& f, std::string description) {
    return MeasurableFunction(f.space(), [f](std::size_t k) { return f.approximant(k); }, std::move(description))
        .with_declared_limit(f);
  }

  const MeasureSpace& space() const { return space_; }
  const StepFunction& witness(std::size_t n) const { return stream_.at(n); }
  const std::string& description() const { return description_; }
  bool constant_witness() const { return constant_; }

  /// The limit as an element of R2, when the caller knows it.
  const std::optional<R2Function>& declared_limit() const { return declared_; }

  MeasurableFunction with_declared_limit(R2Function f) const {
    if (!(f.space() == space_)) throw DomainError("declared limit lives on another space");
    MeasurableFunction g = *this;
    g.declared_ = std::move(f);
    return g;
  }

 private:
  MeasureSpace space_;
  LazyStream<StepFunction> stream_;
  std::string description_;
  bool constant_ = false;
  std::optional<R2Function> declared_;
};

namespace detail {

template <class Op>
MeasurableFunction termwise(const MeasurableFunction& a, const MeasurableFunction& b, Op op, const std::string& name) {
  if (!(a.space() == b.space())) throw DomainError("measurable functions live on different spaces");
  return MeasurableFunction(
      a.space(), [a, b, op](std::size_t n) { return combine(a.witness(n), b.witness(n), op); },
      name + "(" + a.description() + ", " + b.description() + ")");
}

}  // namespace detail

inline MeasurableFunction measurable_add(const MeasurableFunction& a, const MeasurableFunction& b) {
  return detail::termwise(a, b, [](const Rational& x, const Rational& y) { return x + y; }, "add");
}
inline MeasurableFunction measurable_mul(const MeasurableFunction& a, const MeasurableFunction& b) {
  return detail::termwise(a, b, [](const Rational& x, const Rational& y) { return x * y; }, "mul");
}
/// a / b where b != 0, and 0 where b = 0.
inline MeasurableFunction measurable_div(const MeasurableFunction& a, const MeasurableFunction& b) {
  return detail::termwise(
      a, b, [](const Rational& x, const Rational& y) { return y.is_zero() ? Rational(0) : x / y; }, "div");
}
inline MeasurableFunction measurable_min(const MeasurableFunction& a, const MeasurableFunction& b) {
  return detail::termwise(a, b, [](const Rational& x, const Rational& y) { return min(x, y); }, "min");
}
inline MeasurableFunction measurable_max(const MeasurableFunction& a, const MeasurableFunction& b) {
  return detail::termwise(a, b, [](const Rational& x, const Rational& y) { return max(x, y); }, "max");
}

struct SampleSpread {
  Point point;
  bool excluded = false;  // covered by the supplied null cover
  Rational spread;        // max - min of phi_n(point) over the index window
};

/// Oscillation of the witness over indices [from, to] at each sample point
/// not covered (within cover_limit cells) by the optional null cover.
inline std::vector<SampleSpread> cauchy_at_samples(const MeasurableFunction& f, const std::vector<Point>& points,
                                                   std::size_t from, std::size_t to,
                                                   const std::optional<NullCover>& cover = std::nullopt,
                                                   std::size_t cover_limit = 64) {
  std::vector<SampleSpread> out;
  for (const Point& p : points) {
    SampleSpread s{p, false, Rational(0)};
    if (cover && cover->first_covering(p, cover_limit)) {
      s.excluded = true;
    } else {
      Rational lo = f.witness(from).value_at(p);
      Rational hi = lo;
      for (std::size_t n = from + 1; n <= to; ++n) {
        Rational v = f.witness(n).value_at(p);
        lo = min(lo, v);
        hi = max(hi, v);
      }
      s.spread = hi - lo;
    }
    out.push_back(std::move(s));
  }
  return out;
}

/// Index where the final run of a.e.-equal witness elements in [0, budget]
/// starts, if that run spans at least window steps.
inline std::optional<std::size_t> witness_stabilization(const MeasurableFunction& f, std::size_t budget,
                                                        std::size_t window) {
  if (f.constant_witness()) return 0;
  std::size_t start = budget;
  while (start > 0 && ae_equal(f.witness(start - 1), f.witness(budget))) --start;
  if (budget - start >= window) return start;
  return std::nullopt;
}

/// Knobs shared by the constructions below.
struct MeasurableOptions {
  std::size_t horizon = 32;  // prefix examined for exact checks
  std::size_t window = 8;    // stabilization window
  BeppoLeviOptions beppo_levi;
};

struct DominatedToL1 {
  std::optional<L1Certificate> certificate;
  DominatedReport evidence;
  std::vector<StepFunction> truncated;  // med{-g, phi_n, g}, n <= horizon
  std::optional<std::string> rejection;
};

/// med{-g, phi_n, g} is dominated by g and converges to f.  The limit gets a
/// certificate when the truncated stream stabilizes or f carries a declared
/// limit; otherwise it is rejected as not certifiable at finite horizon.
inline DominatedToL1 dominated_to_l1(const MeasurableFunction& f, const L1Certificate& g,
                                     const MeasurableOptions& opts = {}) {
  DominatedToL1 out;
  auto gs = g.function().as_step();
  if (!gs) throw DomainError("dominated_to_l1 needs a step-backed dominating function");
  StepFunction lo = -*gs;
  for (std::size_t n = 0; n <= opts.horizon; ++n) out.truncated.push_back(median(lo, f.witness(n), *gs));

  auto stable = witness_stabilization(f, opts.horizon, opts.window);
  if (stable) {
    if (auto w = excess_witness(abs(f.witness(opts.horizon)), *gs)) {
      out.rejection = "witness settles at a function exceeding g on " + w->str();
      return out;
    }
  }
  if (const auto& d = f.declared_limit()) {
    if (auto ds = d->as_step())
      if (auto w = excess_witness(abs(*ds), *gs)) {
        out.rejection = "declared limit exceeds g on " + w->str();
        return out;
      }
  }

  std::vector<StepFunction> truncated = out.truncated;
  L1Sequence seq = make_l1_sequence([truncated](std::size_t n) { return l1_of_step(truncated.at(n)); });
  out.evidence = dominated_check(seq, g, opts.horizon);
  if (out.evidence.rejection) {
    out.rejection = out.evidence.rejection;
    return out;
  }

  std::size_t run = opts.horizon;
  while (run > 0 && ae_equal(out.truncated[run - 1], out.truncated[opts.horizon])) --run;
  if (opts.horizon - run >= opts.window) {
    out.certificate = l1_of_step(out.truncated[opts.horizon]);
  } else if (const auto& d = f.declared_limit()) {
    out.certificate = l1_check(*d);
    if (!out.certificate) out.rejection = "declared limit has no L1 certificate";
  } else {
    out.rejection = "truncations did not stabilize within " + std::to_string(opts.horizon) +
                    " terms and no limit was declared";
  }
  return out;
}

struct NonnegToR2 {
  std::optional<R2Function> value;
  IntegralEstimate estimate;
  BeppoLeviReport report;
  std::size_t offset = 0;  // first witness index used
};

/// min{f, n chi_{A_n}} for an exhaustion A_0 <= A_1 <= ... fed through
/// generalized_beppo_levi.  The witness must be non-decreasing, or constant
/// from some index on, so that the truncations are non-decreasing.
inline NonnegToR2 nonneg_to_r2(const MeasurableFunction& f, const std::function<Cell(std::size_t)>& exhaustion,
                               const MeasurableOptions& opts = {}, const Rational& infinity_threshold = Rational(1000000)) {
  const std::size_t horizon = opts.beppo_levi.horizon;
  for (std::size_t n = 0; n < horizon; ++n) {
    Cell a = exhaustion(n);
    Cell b = exhaustion(n + 1);
    for (const Cell& piece : a.minus(b))
      if (f.space().measure(piece).sign() > 0)
        throw DomainError("exhaustion is not non-decreasing at index " + std::to_string(n) + ": " + piece.str() +
                          " is lost");
  }
  std::size_t offset = 0;
  bool monotone = true;
  for (std::size_t n = 0; n < opts.horizon && monotone; ++n)
    if (!ae_le(f.witness(n), f.witness(n + 1))) monotone = false;
  if (!monotone) {
    auto s = witness_stabilization(f, opts.horizon, opts.window);
    if (!s) throw DomainError("witness of " + f.description() + " is neither non-decreasing nor eventually constant");
    offset = *s;
  }
  const MeasureSpace space = f.space();
  R2Sequence seq = make_r2_sequence([f, exhaustion, offset, space](std::size_t n) {
    StepFunction cap = StepFunction::indicator(space, exhaustion(n), Rational(static_cast<long>(n)));
    return R2Function::from_step(pointwise_min(f.witness(n + offset), cap));
  });
  NonnegToR2 out;
  out.offset = offset;
  BeppoLeviOptions bl = opts.beppo_levi;
  if (const auto& d = f.declared_limit(); d && !bl.declared_limit)
    if (auto v = d->integral()) bl.declared_limit = *v;
  BeppoLeviResult res = generalized_beppo_levi(seq, bl);
  out.report = res.report;
  if (!res.limit) throw DomainError("truncation ladder rejected: " + *res.report.rejection);
  out.value = res.limit;
  out.estimate = integral_r1(res.limit->pos(), horizon, opts.window, infinity_threshold);
  if (!out.estimate.declared) out.estimate.declared = bl.declared_limit;
  return out;
}

/// h = g phi / (g + |phi|), with h = 0 where g = 0.  Requires phi = 0 there.
inline StepFunction h_transform(const StepFunction& g, const StepFunction& phi) {
  return combine(g, phi, [](const Rational& gv, const Rational& x) {
    if (gv.is_zero()) {
      if (!x.is_zero()) throw DomainError("h-transform: function is nonzero where g vanishes");
      return Rational(0);
    }
    return gv * x / (gv + abs(x));
  });
}

/// f = g h / (g - |h|), the inverse of h_transform on |h| < g.
inline StepFunction h_inverse(const StepFunction& g, const StepFunction& h) {
  return combine(g, h, [](const Rational& gv, const Rational& x) {
    if (gv.is_zero()) {
      if (!x.is_zero()) throw DomainError("h-inverse: h is nonzero where g vanishes");
      return Rational(0);
    }
    Rational den = gv - abs(x);
    if (den.sign() <= 0) throw DomainError("h-inverse: |h| reaches g");
    return gv * x / den;
  });
}

struct MeasurableLimit {
  MeasurableFunction h;  // diagonal k -> h_transform(g, phi_{k,k})
  MeasurableFunction f;  // k -> h_inverse(g, h_k)
};

/// Limit of measurable f_n through the bounded transforms h_n = g f_n / (g + |f_n|).
inline MeasurableLimit limit_of_measurable(const LazyStream<MeasurableFunction>& fs, const L1Certificate& g) {
  auto gs = g.function().as_step();
  if (!gs) throw DomainError("limit_of_measurable needs a step-backed g");
  if (auto w = excess_witness(StepFunction::zero(gs->space()), *gs)) throw DomainError("g is negative on " + w->str());
  StepFunction gstep = *gs;
  const MeasureSpace space = gstep.space();
  MeasurableFunction h(space, [fs, gstep](std::size_t k) { return h_transform(gstep, fs.at(k).witness(k)); },
                       "h-transform of the limit");
  MeasurableFunction f(space, [h, gstep](std::size_t k) { return h_inverse(gstep, h.witness(k)); },
                       "inverse h-transform of the limit");
  return MeasurableLimit{std::move(h), std::move(f)};
}

struct FatouGeneralReport {
  std::size_t horizon = 0;
  std::vector<IntegralBounds> integrals;  // of f_n via nonneg_to_r2
  bool infinite_branch = false;           // liminf of the integrals exceeds the threshold
  std::optional<FatouReport> finite;      // fatou_check when every integral is finite and exact
  std::optional<std::string> note;
};

/// Fatou for nonnegative measurable f_n.  When the integrals from the middle
/// of the horizon on all exceed the threshold, the right side is treated as
/// infinite and the inequality is immediate.
inline FatouGeneralReport fatou_general(const LazyStream<MeasurableFunction>& fs, std::size_t horizon,
                                        const std::function<Cell(std::size_t)>& exhaustion,
                                        const Rational& infinity_threshold, const MeasurableOptions& opts = {}) {
  FatouGeneralReport r;
  r.horizon = horizon;
  std::vector<std::optional<L1Certificate>> certs;
  for (std::size_t n = 0; n <= horizon; ++n) {
    NonnegToR2 v = nonneg_to_r2(fs.at(n), exhaustion, opts, infinity_threshold);
    IntegralBounds b{ExtendedRational(v.estimate.lower_bound), ExtendedRational::plus_infinity()};
    if (auto x = v.estimate.value()) b = {*x, *x};
    r.integrals.push_back(b);
    if (b.exact() && b.lower.is_finite()) {
      auto step = v.value->as_step();
      R2Function val = step ? R2Function::from_step(*step) : v.value->with_declared_integral(b.lower);
      certs.push_back(l1_check(val));
    } else {
      certs.push_back(std::nullopt);
    }
  }
  ExtendedRational tail = r.integrals[horizon].lower;
  for (std::size_t n = horizon; n-- > horizon / 2;) tail = std::min(tail, r.integrals[n].lower);
  if (ExtendedRational(infinity_threshold) < tail) {
    r.infinite_branch = true;
    return r;
  }
  if (std::any_of(certs.begin(), certs.end(), [](const auto& c) { return !c; })) {
    r.note = "some integral is not exactly known; finite branch skipped";
    return r;
  }
  r.finite = fatou_check(make_l1_sequence([certs](std::size_t n) { return *certs.at(n); }), horizon);
  return r;
}

/// A set through its indicator.  Finite unions of cells are kept as step
/// functions with coefficient 1.
class MeasurableSet {
 public:
  static MeasurableSet from_cells(const MeasureSpace& space, const std::vector<Cell>& cells) {
    StepFunction chi = StepFunction::zero(space);
    for (const Cell& c : cells) chi = pointwise_max(chi, StepFunction::indicator(space, c));
    return MeasurableSet(R2Function::from_step(std::move(chi)));
  }

  static MeasurableSet empty(const MeasureSpace& space) { return from_cells(space, {}); }

  /// Rejects step functions with a coefficient other than 1 on a cell of
  /// positive measure.
  static MeasurableSet from_step(const StepFunction& chi) {
    std::vector<std::pair<Cell, Rational>> pieces;
    for (const Term& t : chi.terms()) {
      if (t.coeff == Rational(1)) {
        pieces.emplace_back(t.cell, t.coeff);
      } else if (chi.space().measure(t.cell).sign() > 0) {
        throw DomainError("indicator takes value " + t.coeff.str() + " on " + t.cell.str());
      }
    }
    return MeasurableSet(R2Function::from_step(StepFunction::from_pieces(chi.space(), std::move(pieces))));
  }

  static MeasurableSet from_indicator(R2Function chi) {
    if (auto s = chi.as_step()) return from_step(*s);
    return MeasurableSet(std::move(chi));
  }

  const MeasureSpace& space() const { return chi_.space(); }
  const R2Function& indicator() const { return chi_; }
  std::optional<StepFunction> step() const { return chi_.as_step(); }

  std::vector<Cell> cells() const {
    std::vector<Cell> out;
    if (auto s = step())
      for (const Term& t : s->terms()) out.push_back(t.cell);
    return out;
  }

  MeasurableSet with_declared_measure(ExtendedRational m) const {
    return MeasurableSet(chi_.with_declared_integral(std::move(m)));
  }

  std::string str() const {
    if (auto s = step()) {
      if (s->is_zero()) return "{}";
      std::string out;
      for (const Term& t : s->terms()) out += (out.empty() ? "" : " u ") + t.cell.str();
      return out;
    }
    return "set with indicator " + chi_.str();
  }

 private:
  explicit MeasurableSet(R2Function chi) : chi_(std::move(chi)) {}
  R2Function chi_;
};

struct MeasureValue {
  std::optional<ExtendedRational> exact;
  IntegralBounds bounds;
  std::vector<Rational> partials;  // ladder of the positive part, stream-backed sets only
};

inline MeasureValue measure_of(const MeasurableSet& a, std::size_t budget = 64, std::size_t window = 8) {
  MeasureValue m;
  if (auto s = a.step()) {
    m.exact = ExtendedRational(s->integral());
    m.bounds = {*m.exact, *m.exact};
    return m;
  }
  const R2Function& chi = a.indicator();
  m.exact = chi.integral();
  if (!chi.pos().step()) {
    IntegralEstimate e = integral_r1(chi.pos(), budget, window, Rational(0));
    m.partials = e.partials;
    if (!m.exact && e.stabilized() && chi.neg().known_integral())
      m.exact = ext_add(*e.value(), -*chi.neg().known_integral());
  }
  m.bounds = m.exact ? IntegralBounds{*m.exact, *m.exact} : chi.bounds(budget);
  return m;
}

namespace detail {

inline void require_same_space(const MeasurableSet& a, const MeasurableSet& b) {
  if (!(a.space() == b.space())) throw DomainError("sets live on different spaces");
}

}  // namespace detail

/// chi_{A \ B} = chi_A - min{chi_A, chi_B}.
inline MeasurableSet set_difference(const MeasurableSet& a, const MeasurableSet& b) {
  detail::require_same_space(a, b);
  auto sa = a.step();
  auto sb = b.step();
  if (sa && sb) return MeasurableSet::from_step(*sa - pointwise_min(*sa, *sb));
  return MeasurableSet::from_indicator(r2_add(a.indicator(), r2_negate(r2_min(a.indicator(), b.indicator()))));
}

inline MeasurableSet set_union(const MeasurableSet& a, const MeasurableSet& b) {
  detail::require_same_space(a, b);
  auto sa = a.step();
  auto sb = b.step();
  if (sa && sb) return MeasurableSet::from_step(pointwise_max(*sa, *sb));
  return MeasurableSet::from_indicator(r2_max(a.indicator(), b.indicator()));
}

inline MeasurableSet set_intersection(const MeasurableSet& a, const MeasurableSet& b) {
  detail::require_same_space(a, b);
  auto sa = a.step();
  auto sb = b.step();
  if (sa && sb) return MeasurableSet::from_step(pointwise_min(*sa, *sb));
  return MeasurableSet::from_indicator(r2_min(a.indicator(), b.indicator()));
}

using SetSequence = LazyStream<MeasurableSet>;

inline SetSequence make_set_sequence(std::function<MeasurableSet(std::size_t)> gen) {
  return SetSequence::infinite(std::move(gen));
}

/// Union of pairwise disjoint A_0, A_1, ...: the R1 stream of partial sums
/// of indicators.  Disjointness is verified exactly for step-backed members
/// as the partial sums are generated.
inline MeasurableSet disjoint_union(const SetSequence& sets, std::optional<ExtendedRational> declared = std::nullopt) {
  const MeasureSpace space = sets.at(0).space();
  bool all_steps = true;
  for (std::size_t n = 0; n < 4 && all_steps; ++n)
    if (!sets.at(n).step()) all_steps = false;
  R1Function u = R1Function::zero(space);
  if (all_steps) {
    auto sums = std::make_shared<LazyStream<StepFunction>>();
    *sums = LazyStream<StepFunction>::infinite([sets, sums_w = std::weak_ptr(sums), space](std::size_t k) {
      auto s = sets.at(k).step();
      if (!s) throw DomainError("member " + std::to_string(k) + " of a step-backed union is not step-backed");
      StepFunction acc = k == 0 ? *s : sums_w.lock()->at(k - 1) + *s;
      for (const Term& t : acc.terms())
        if (t.coeff != Rational(1) && space.measure(t.cell).sign() > 0)
          throw DomainError("member " + std::to_string(k) + " overlaps an earlier member on " + t.cell.str());
      return acc;
    });
    u = R1Function::from_stream(space, [sums](std::size_t k) { return sums->at(k); });
  } else {
    R1Sequence members = make_r1_sequence([sets](std::size_t n) { return sets.at(n).indicator().pos(); });
    R1Sequence partial = make_r1_sequence([members](std::size_t k) {
      R1Function acc = members.at(0);
      for (std::size_t n = 1; n <= k; ++n) acc = r1_max(acc, members.at(n));
      return acc;
    });
    u = sup_of_r1_stream(partial);
  }
  if (declared) u = u.with_declared_limit(*declared);
  return MeasurableSet::from_indicator(R2Function::make(u, R1Function::zero(space)));
}

/// Intersection of step-backed A_0, A_1, ... as
/// chi_{A_0} - chi of the union of the A_0 \ A_n.
inline MeasurableSet countable_intersection(const SetSequence& sets,
                                            std::optional<ExtendedRational> declared = std::nullopt) {
  auto first = sets.at(0).step();
  if (!first) throw DomainError("countable_intersection needs step-backed members");
  const MeasureSpace space = first->space();
  StepFunction a0 = *first;
  R1Function lost = R1Function::from_stream(space, [sets, a0](std::size_t k) {
    StepFunction acc = StepFunction::zero(a0.space());
    for (std::size_t n = 0; n <= k; ++n) {
      auto s = sets.at(n).step();
      if (!s) throw DomainError("member " + std::to_string(n) + " of an intersection is not step-backed");
      acc = pointwise_max(acc, a0 - pointwise_min(a0, *s));
    }
    return acc;
  });
  R2Function chi = R2Function::make(R1Function::constant(a0), lost.with_upper_bound(a0.integral()));
  if (declared) chi = chi.with_declared_integral(*declared);
  return MeasurableSet::from_indicator(std::move(chi));
}

/// A set known through sample points and a family of covers eps -> cover
/// with total measure < eps.
struct NullSetDescription {
  std::string name;
  MeasureSpace space;
  std::vector<Point> points;
  std::function<NullCover(const Rational&)> covers;
};

struct NullEpsRow {
  Rational eps;
  Rational total;  // measure of the cover cells examined
  Rational union_partial;  // integral of max of their indicators
  std::size_t cells = 0;
  std::size_t uncovered_points = 0;
  bool below = false;  // total < eps and every point covered
};

struct NullEvidence {
  std::vector<NullEpsRow> rows;
  std::optional<MeasurableSet> zero_set;  // cover => measure zero
  std::optional<NullCover> cover;         // measure zero => cover
  bool holds = false;
  std::optional<std::string> rejection;
};

namespace detail {

inline NullEpsRow cover_row(const NullCover& cover, const Rational& eps, const std::vector<Point>& points,
                            std::size_t horizon) {
  NullEpsRow row;
  row.eps = eps;
  StepFunction u = StepFunction::zero(cover.space());
  for (std::size_t k = 0; k <= horizon; ++k) {
    const Cell* c = cover.cell(k);
    if (!c) break;
    ++row.cells;
    row.total += cover.space().measure(*c);
    u = pointwise_max(u, StepFunction::indicator(cover.space(), *c));
  }
  row.union_partial = u.integral();
  for (const Point& p : points)
    if (!cover.first_covering(p, horizon)) ++row.uncovered_points;
  row.below = row.total < eps && row.uncovered_points == 0;
  return row;
}

}  // namespace detail

/// Cover => measure zero: for each eps the union of the cover cells has
/// integral below eps, so chi_A is dominated by R1 functions of arbitrarily
/// small integral and A is the measurable set of measure 0.
inline NullEvidence null_from_cover(const NullSetDescription& d, const std::vector<Rational>& eps_schedule,
                                    std::size_t horizon) {
  NullEvidence ev;
  ev.holds = true;
  for (const Rational& eps : eps_schedule) {
    NullCover cover = d.covers(eps);
    if (!(cover.space() == d.space)) throw DomainError("cover lives on another space");
    ev.rows.push_back(detail::cover_row(cover, eps, d.points, horizon));
    if (!ev.rows.back().below) ev.holds = false;
  }
  if (ev.holds) ev.zero_set = MeasurableSet::empty(d.space);
  else ev.rejection = "some cover has total >= eps or misses a sample point";
  return ev;
}

/// Measure zero => cover.  With chi_A = pos - neg and
/// delta_j = integral(neg) - partial_j(neg), the R1 function pos - neg_j
/// dominates chi_A and has integral delta_j, so the increasing level sets
/// {pos_k - neg_j >= 1/2} cover A a.e. with total at most 2 delta_j.  Each
/// eps gets its own j.
inline NullCover level_set_cover(const R2Function& chi, std::size_t j, std::size_t horizon) {
  struct Buffer {
    std::vector<Cell> cells;
    std::vector<Cell> level;  // previous level set
    std::size_t next_k = 0;
  };
  auto buf = std::make_shared<Buffer>();
  const Rational half(1, 2);
  return NullCover(chi.space(), [chi, j, horizon, buf, half](std::size_t n) -> std::optional<Cell> {
    while (buf->cells.size() <= n && buf->next_k <= horizon) {
      std::size_t k = buf->next_k++;
      StepFunction phi = chi.pos().at(k) - chi.neg().at(j);
      std::vector<Cell> level;
      for (const Term& t : phi.terms())
        if (half <= t.coeff) level.push_back(t.cell);
      for (const Cell& c : level) {
        std::vector<Cell> pieces{c};
        for (const Cell& old : buf->level) {
          std::vector<Cell> next;
          for (const Cell& piece : pieces)
            for (Cell& rest : piece.minus(old))
              if (!rest.empty()) next.push_back(std::move(rest));
          pieces = std::move(next);
        }
        for (Cell& piece : pieces) buf->cells.push_back(std::move(piece));
      }
      buf->level = std::move(level);
      if (chi.pos().step()) buf->next_k = horizon + 1;
    }
    if (n < buf->cells.size()) return buf->cells[n];
    return std::nullopt;
  });
}

inline NullEvidence null_from_set(const MeasurableSet& a, const std::vector<Rational>& eps_schedule,
                                  std::size_t horizon, const std::vector<Point>& points = {}) {
  NullEvidence ev;
  MeasureValue m = measure_of(a);
  if (!m.exact || !(*m.exact == ExtendedRational(0))) {
    ev.rejection = "measure is " + (m.exact ? m.exact->str() : "unknown, at least " + m.bounds.lower.str()) +
                   ", not 0";
    return ev;
  }
  const R2Function chi = a.indicator();
  std::optional<ExtendedRational> neg_total = chi.neg().known_integral();
  if (!neg_total) neg_total = chi.pos().known_integral();
  if (!neg_total || !neg_total->is_finite()) {
    ev.rejection = "integral of the negative part is not known exactly; covers cannot be sized";
    return ev;
  }
  const Rational total = neg_total->value();
  ev.holds = true;
  for (const Rational& eps : eps_schedule) {
    std::optional<std::size_t> j;
    for (std::size_t i = 0; i <= horizon && !j; ++i)
      if (Rational(2) * (total - chi.neg().partial(i)) < eps) j = i;
    if (!j) {
      NullEpsRow row;
      row.eps = eps;
      ev.rows.push_back(row);
      ev.holds = false;
      continue;
    }
    NullCover cover = level_set_cover(chi, *j, horizon);
    ev.rows.push_back(detail::cover_row(cover, eps, points, horizon));
    if (!ev.rows.back().below) ev.holds = false;
    ev.cover = cover;
  }
  if (!ev.holds) ev.rejection = "level-set cover misses eps or a sample point within the horizon";
  return ev;
}

}  // namespace riesz
