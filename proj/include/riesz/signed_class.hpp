#pragma once

// Differences of R1 functions whose integral is defined, the L1 lattice and
// the convergence theorems as finite-horizon evidence producers.

#include "riesz/monotone_class.hpp"

#include <algorithm>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace riesz {

/// Neither side of a difference carries a finite-integral certificate, or a
/// sum would be inf - inf.
class DefinednessError : public DomainError {
 public:
  using DomainError::DomainError;
};

enum class FiniteSide { pos, neg, both };

inline std::string to_string(FiniteSide s) {
  switch (s) {
    case FiniteSide::pos: return "pos";
    case FiniteSide::neg: return "neg";
    case FiniteSide::both: return "both";
  }
  return "?";
}

/// Closed interval of the extended rationals known to contain an integral.
struct IntegralBounds {
  ExtendedRational lower;
  ExtendedRational upper;

  bool exact() const { return lower == upper; }
};

/// f = pos - neg where at least one side has a certified finite integral.
class R2Function {
 public:
  static R2Function make(R1Function pos, R1Function neg) {
    if (!(pos.space() == neg.space())) throw DomainError("R2 parts live on different spaces");
    bool p = pos.certified_finite();
    bool n = neg.certified_finite();
    if (!p && !n) throw DefinednessError("neither part of the difference has a certified finite integral");
    FiniteSide side = p && n ? FiniteSide::both : (p ? FiniteSide::pos : FiniteSide::neg);
    return R2Function(std::move(pos), std::move(neg), side);
  }

  static R2Function from_r1(R1Function f) {
    R1Function zero = R1Function::zero(f.space());
    return make(std::move(f), std::move(zero));
  }

  static R2Function from_step(StepFunction phi) { return from_r1(R1Function::constant(std::move(phi))); }

  const MeasureSpace& space() const { return pos_.space(); }
  const R1Function& pos() const { return pos_; }
  const R1Function& neg() const { return neg_; }
  FiniteSide finite_side() const { return side_; }

  /// The function as one step function, when both parts are.
  std::optional<StepFunction> as_step() const {
    if (pos_.step() && neg_.step()) return *pos_.step() - *neg_.step();
    return std::nullopt;
  }

  /// pos.at(k) - neg.at(k); converges a.e. to f but not monotonically.
  StepFunction approximant(std::size_t k) const { return pos_.at(k) - neg_.at(k); }

  /// Exact integral when it is known.
  std::optional<ExtendedRational> integral() const {
    if (declared_) return declared_;
    auto p = pos_.known_integral();
    auto n = neg_.known_integral();
    if (p && n) return ext_add(*p, -*n);
    if (p && p->is_plus_infinity() && neg_.certified_finite()) return ExtendedRational::plus_infinity();
    if (n && n->is_plus_infinity() && pos_.certified_finite()) return ExtendedRational::minus_infinity();
    return std::nullopt;
  }

  /// Bounds from the partials at index probe and the finite-side
  /// certificates.
  IntegralBounds bounds(std::size_t probe) const {
    if (auto v = integral()) return {*v, *v};
    IntegralBounds b{ExtendedRational::minus_infinity(), ExtendedRational::plus_infinity()};
    if (auto un = neg_.finite_upper()) b.lower = ExtendedRational(pos_.partial(probe) - *un);
    if (auto up = pos_.finite_upper()) b.upper = ExtendedRational(*up - neg_.partial(probe));
    return b;
  }

  /// Attaches the value of the integral.  Must agree with a known value.
  R2Function with_declared_integral(ExtendedRational v) const {
    if (auto k = integral(); k && !(*k == v))
      throw DeclarationError("declared integral " + v.str() + " differs from known integral " + k->str());
    R2Function f = *this;
    f.declared_ = std::move(v);
    return f;
  }

  bool lower_bounded() const { return neg_.certified_finite(); }

  std::string str() const {
    if (auto s = as_step()) return s->str();
    auto v = integral();
    return "R2(finite side " + to_string(side_) + ", integral " + (v ? v->str() : std::string("unknown")) + ")";
  }

 private:
  R2Function(R1Function pos, R1Function neg, FiniteSide side)
      : pos_(std::move(pos)), neg_(std::move(neg)), side_(side) {}

  R1Function pos_;
  R1Function neg_;
  FiniteSide side_;
  std::optional<ExtendedRational> declared_;
};

inline R2Function r2_make(R1Function pos, R1Function neg) { return R2Function::make(std::move(pos), std::move(neg)); }

/// Attaches the stabilized value of f as its declared limit when the stream
/// repeats over the final window of a budget run.
inline R1Function certify_by_stabilization(const R1Function& f, std::size_t budget, std::size_t window) {
  if (f.known_integral()) return f;
  IntegralEstimate e = integral_r1(f, budget, window, Rational(0));
  if (const auto* s = std::get_if<StabilizedAt>(&e.status)) return f.with_declared_limit(ExtendedRational(s->value));
  return f;
}

namespace detail {

inline std::optional<ExtendedRational> scaled(const std::optional<ExtendedRational>& v, const Rational& c) {
  if (!v) return std::nullopt;
  return ext_mul(ExtendedRational(c), *v);
}

}  // namespace detail

inline R2Function r2_negate(const R2Function& f) {
  R2Function out = R2Function::make(f.neg(), f.pos());
  if (auto v = f.integral(); v && !out.integral()) out = out.with_declared_integral(-*v);
  return out;
}

inline R2Function r2_scale(const Rational& c, const R2Function& f) {
  Rational a = abs(c);
  R1Function p = scale_nonneg(a, f.pos());
  R1Function n = scale_nonneg(a, f.neg());
  R2Function out = c.sign() >= 0 ? R2Function::make(std::move(p), std::move(n)) : R2Function::make(std::move(n), std::move(p));
  if (auto v = detail::scaled(f.integral(), c); v && !out.integral()) out = out.with_declared_integral(*v);
  return out;
}

inline R2Function r2_add(const R2Function& f, const R2Function& g) {
  auto vf = f.integral();
  auto vg = g.integral();
  std::optional<ExtendedRational> sum;
  if (vf && vg) {
    sum = ext_add(*vf, *vg);
    if (!sum) throw DefinednessError("sum of integrals " + vf->str() + " and " + vg->str() + " is undefined");
  }
  R2Function out = R2Function::make(add(f.pos(), g.pos()), add(f.neg(), g.neg()));
  if (sum && !out.integral()) out = out.with_declared_integral(*sum);
  return out;
}

/// Same function with both parts nonnegative: subtracts min(phi_1, psi_1)
/// of the first stream elements from both parts.
inline R2Function r2_normalize_nonneg(const R2Function& f) {
  StepFunction m = pointwise_min(f.pos().at(0), f.neg().at(0));
  R1Function shift = R1Function::constant(-m);
  R2Function out = R2Function::make(add(f.pos(), shift), add(f.neg(), shift));
  if (auto v = f.integral(); v && !out.integral()) out = out.with_declared_integral(*v);
  return out;
}

using R2Sequence = LazyStream<R2Function>;

inline R2Sequence make_r2_sequence(std::function<R2Function(std::size_t)> gen) {
  return R2Sequence::infinite(std::move(gen));
}

struct BeppoLeviOptions {
  std::size_t horizon = 100;
  /// Stages of the renormalized construction computed for the report.
  std::size_t construction_depth = 16;
  /// Longest search for a step minorant of a negative part.
  std::size_t minorant_budget = 4096;
  std::size_t diagonal_horizon = 8;
  std::optional<ExtendedRational> declared_limit;
};

struct BeppoLeviReport {
  std::size_t horizon = 0;
  std::optional<std::size_t> first_lower_bounded;
  std::vector<std::optional<ExtendedRational>> ladder;  // integral of f_n, n = 0..horizon
  bool ladder_non_decreasing = true;
  std::size_t exact_monotone_checks = 0;
  std::vector<std::size_t> minorant_index;  // k_m: stream index of the chosen minorant
  std::vector<Rational> h_integrals;        // integral of the accumulated h_m
  bool h_bounded_by_one = true;
  std::optional<ExtendedRational> declared_limit;
  bool declared_consistent = true;  // every ladder value <= declared limit
  std::vector<Rational> g_diagonal_partials;
  std::vector<Rational> h_diagonal_partials;
  std::optional<std::string> construction_note;
  std::optional<std::string> rejection;
};

struct BeppoLeviResult {
  std::optional<R2Function> limit;
  BeppoLeviReport report;
};

namespace detail {

/// One stage of the renormalization: phi is a step minorant of the negative
/// part h of f_{n0+m} with integral(h - phi) < 2^-(m+1).
struct BeppoLeviStage {
  std::size_t k;
  Rational defect;
  R1Function h_acc;  // H_m = sum_{j<=m} (h_j - phi_j)
  R1Function g_acc;  // G_m = H_{m-1} + g_m - phi_m = f_{n0+m} + H_m
};

class BeppoLeviConstruction {
 public:
  BeppoLeviConstruction(R2Sequence fs, std::size_t n0, std::size_t minorant_budget)
      : fs_(std::move(fs)), n0_(n0), budget_(minorant_budget) {
    stages_ = LazyStream<BeppoLeviStage>::infinite([this](std::size_t m) { return build(m); });
  }

  BeppoLeviConstruction(const BeppoLeviConstruction&) = delete;
  BeppoLeviConstruction& operator=(const BeppoLeviConstruction&) = delete;

  const BeppoLeviStage& stage(std::size_t m) const { return stages_.at(m); }
  std::size_t computed() const { return stages_.computed(); }

 private:
  BeppoLeviStage build(std::size_t m) const {
    const R2Function& f = fs_.at(n0_ + m);
    const R1Function& h = f.neg();
    auto total = h.finite_upper();
    if (!total) throw DomainError("negative part of term " + std::to_string(n0_ + m) + " has no finite integral certificate");
    Rational tol = Rational::power_of_two(-static_cast<long>(m + 1));
    std::size_t k = 0;
    while (!(*total - h.partial(k) < tol)) {
      if (++k > budget_)
        throw DomainError("no step minorant within 2^-" + std::to_string(m + 1) + " of the negative part of term " +
                          std::to_string(n0_ + m) + " in " + std::to_string(budget_) + " stream elements");
    }
    R1Function shift = R1Function::constant(-h.at(k));
    R1Function h_prime = add(h, shift);
    R1Function g_prime = add(f.pos(), shift);
    R1Function prev = m == 0 ? R1Function::zero(f.space()) : stage(m - 1).h_acc;
    return BeppoLeviStage{k, *total - h.partial(k), add(prev, h_prime), add(prev, g_prime)};
  }

  R2Sequence fs_;
  std::size_t n0_;
  std::size_t budget_;
  LazyStream<BeppoLeviStage> stages_;
};

}  // namespace detail

/// Limit of a non-decreasing sequence f_0 <= f_1 <= ... of R2 functions,
/// provided some integral of f_n exceeds -inf.  The negative parts are
/// replaced by h_m - phi_m with step minorants phi_m, accumulated into
/// H_m with integral at most 1, and the limit is sup G_m - sup H_m.
inline BeppoLeviResult generalized_beppo_levi(const R2Sequence& fs, const BeppoLeviOptions& opts = {}) {
  BeppoLeviResult out;
  BeppoLeviReport& r = out.report;
  r.horizon = opts.horizon;
  r.declared_limit = opts.declared_limit;

  bool all_minus_infinity = true;
  for (std::size_t n = 0; n <= opts.horizon; ++n) {
    const R2Function& f = fs.at(n);
    auto v = f.integral();
    if (n > 0) {
      auto prev = fs.at(n - 1).as_step();
      auto cur = f.as_step();
      if (prev && cur) {
        ++r.exact_monotone_checks;
        if (auto w = excess_witness(*prev, *cur)) throw MonotonicityError(n, *w, "sequence decreases");
      }
      const auto& pv = r.ladder.back();
      if (pv && v && *v < *pv) r.ladder_non_decreasing = false;
    }
    if (v && r.declared_limit && *r.declared_limit < *v) r.declared_consistent = false;
    if (!(v && v->is_minus_infinity())) all_minus_infinity = false;
    if (!r.first_lower_bounded && f.lower_bounded()) r.first_lower_bounded = n;
    if (r.first_lower_bounded && !f.lower_bounded() && !r.rejection)
      r.rejection = "term " + std::to_string(n) + " follows a term with integral > -inf but has no lower-bound certificate";
    r.ladder.push_back(std::move(v));
  }

  if (!r.first_lower_bounded) {
    r.rejection = all_minus_infinity
                      ? "every integral of f_n (n <= " + std::to_string(opts.horizon) +
                            ") is -inf: the hypothesis that some integral exceeds -inf cannot be omitted"
                      : "no term up to " + std::to_string(opts.horizon) + " has a certified integral > -inf";
    return out;
  }
  if (r.rejection) return out;

  auto construction = std::make_shared<detail::BeppoLeviConstruction>(fs, *r.first_lower_bounded, opts.minorant_budget);
  std::size_t depth = std::min(opts.construction_depth, opts.horizon - *r.first_lower_bounded);
  try {
    for (std::size_t m = 0; m <= depth; ++m) {
      const auto& s = construction->stage(m);
      r.minorant_index.push_back(s.k);
      auto hk = s.h_acc.finite_upper();
      Rational hv = hk ? *hk : s.h_acc.partial(0);
      if (Rational(1) < hv) r.h_bounded_by_one = false;
      r.h_integrals.push_back(std::move(hv));
    }
  } catch (const DomainError& e) {
    r.construction_note = e.what();
    if (r.minorant_index.empty()) {
      r.rejection = std::string("renormalization failed: ") + e.what();
      return out;
    }
  }

  const MeasureSpace space = fs.at(0).space();
  R1Sequence gs = make_r1_sequence([construction](std::size_t m) { return construction->stage(m).g_acc; });
  R1Sequence hs = make_r1_sequence([construction](std::size_t m) { return construction->stage(m).h_acc; });
  R1Function pos = sup_of_r1_stream(gs);
  R1Function neg = sup_of_r1_stream(hs).with_upper_bound(Rational(1));
  R2Function limit = R2Function::make(pos, neg);
  if (opts.declared_limit) limit = limit.with_declared_integral(*opts.declared_limit);

  std::size_t diag = std::min(opts.diagonal_horizon, r.minorant_index.size() - 1);
  for (std::size_t k = 0; k <= diag; ++k) {
    r.g_diagonal_partials.push_back(pos.partial(k));
    r.h_diagonal_partials.push_back(neg.partial(k));
    if (Rational(1) < r.h_diagonal_partials.back()) r.h_bounded_by_one = false;
  }
  out.limit = std::move(limit);
  return out;
}

/// An R2 function whose two parts both have certified finite integrals.
class L1Certificate {
 public:
  const R2Function& function() const { return f_; }
  const MeasureSpace& space() const { return f_.space(); }
  std::optional<Rational> integral() const {
    if (auto v = f_.integral()) return v->value();
    return std::nullopt;
  }
  IntegralBounds bounds(std::size_t probe) const { return f_.bounds(probe); }

 private:
  explicit L1Certificate(R2Function f) : f_(std::move(f)) {}
  R2Function f_;
  friend std::optional<L1Certificate> l1_check(const R2Function& f, std::size_t budget, std::size_t window);
};

/// Accepts f when both parts are certified finite, using stabilization over
/// the given budget for parts that lack a certificate.
inline std::optional<L1Certificate> l1_check(const R2Function& f, std::size_t budget = 64, std::size_t window = 8) {
  R1Function p = certify_by_stabilization(f.pos(), budget, window);
  R1Function n = certify_by_stabilization(f.neg(), budget, window);
  if (!p.certified_finite() || !n.certified_finite()) return std::nullopt;
  R2Function g = R2Function::make(std::move(p), std::move(n));
  if (auto v = f.integral()) {
    if (!v->is_finite()) return std::nullopt;
    if (!g.integral()) g = g.with_declared_integral(*v);
  }
  return L1Certificate(std::move(g));
}

inline L1Certificate l1_of_step(StepFunction phi) { return *l1_check(R2Function::from_step(std::move(phi))); }

/// max{f, g}.  Exact on step functions; when the negative (or positive)
/// parts are both finite the identity
///   max{f1 - f2, g1 - g2} = max{f1 + g2, g1 + f2} - (f2 + g2)
/// (or its mirror with min) is used; otherwise the approximating sequence
/// max{phi_n - f2, psi_n - g2} goes through generalized_beppo_levi.
inline R2Function r2_max(const R2Function& f, const R2Function& g, const BeppoLeviOptions& opts = {}) {
  if (!(f.space() == g.space())) throw DomainError("functions live on different spaces");
  auto fs = f.as_step();
  auto gs = g.as_step();
  if (fs && gs) return R2Function::from_step(pointwise_max(*fs, *gs));
  if (f.neg().certified_finite() && g.neg().certified_finite())
    return R2Function::make(r1_max(add(f.pos(), g.neg()), add(g.pos(), f.neg())), add(f.neg(), g.neg()));
  if (f.pos().certified_finite() && g.pos().certified_finite())
    return R2Function::make(add(f.pos(), g.pos()), r1_min(add(g.pos(), f.neg()), add(f.pos(), g.neg())));
  R2Sequence seq = make_r2_sequence([f, g](std::size_t n) {
    R2Function a = R2Function::make(R1Function::constant(f.pos().at(n)), f.neg());
    R2Function b = R2Function::make(R1Function::constant(g.pos().at(n)), g.neg());
    return R2Function::make(add(a.pos(), b.pos()), r1_min(add(b.pos(), a.neg()), add(a.pos(), b.neg())));
  });
  BeppoLeviResult res = generalized_beppo_levi(seq, opts);
  if (!res.limit) throw DefinednessError("max via monotone limit rejected: " + *res.report.rejection);
  return *res.limit;
}

inline R2Function r2_min(const R2Function& f, const R2Function& g, const BeppoLeviOptions& opts = {}) {
  return r2_negate(r2_max(r2_negate(f), r2_negate(g), opts));
}

inline L1Certificate l1_min(const L1Certificate& f, const L1Certificate& g) {
  auto c = l1_check(r2_min(f.function(), g.function()));
  if (!c) throw DomainError("min of L1 functions lost its certificate");
  return *c;
}

inline L1Certificate l1_add(const L1Certificate& f, const L1Certificate& g) {
  auto c = l1_check(r2_add(f.function(), g.function()));
  if (!c) throw DomainError("sum of L1 functions lost its certificate");
  return *c;
}

inline L1Certificate l1_scale(const Rational& c, const L1Certificate& f) {
  auto r = l1_check(r2_scale(c, f.function()));
  if (!r) throw DomainError("scaled L1 function lost its certificate");
  return *r;
}

struct NormEstimate {
  std::optional<Rational> value;
  Rational lower_bound;
};

/// Integral of |f| = max{f, -f}.
inline NormEstimate norm_l1(const L1Certificate& f, std::size_t probe = 64) {
  R2Function a = r2_max(f.function(), r2_negate(f.function()));
  IntegralBounds b = a.bounds(probe);
  NormEstimate n;
  n.lower_bound = b.lower.is_finite() ? b.lower.value() : Rational(0);
  if (b.exact()) n.value = b.lower.value();
  return n;
}

using L1Sequence = LazyStream<L1Certificate>;

inline L1Sequence make_l1_sequence(std::function<L1Certificate(std::size_t)> gen) {
  return L1Sequence::infinite(std::move(gen));
}

/// Ladder of h_n = min_{n <= k <= horizon} f_k against the integrals of f_k.
struct FatouReport {
  std::size_t horizon = 0;
  std::vector<IntegralBounds> f_integrals;
  std::vector<IntegralBounds> h_integrals;
  std::vector<ExtendedRational> tail_inf;  // min over k in [n, horizon] of the lower bound of f_k
  bool h_non_decreasing = true;
  bool inequality_holds = true;  // upper bound of h_n <= tail_inf_n
  bool equality_everywhere = true;
  bool strict_somewhere = false;
  std::size_t unchecked_terms = 0;  // terms whose sign could not be checked exactly
  std::optional<std::string> rejection;
};

inline FatouReport fatou_check(const L1Sequence& fs, std::size_t horizon, std::size_t probe = 64) {
  FatouReport r;
  r.horizon = horizon;
  for (std::size_t n = 0; n <= horizon; ++n) {
    const L1Certificate& f = fs.at(n);
    if (auto s = f.function().as_step()) {
      if (auto w = excess_witness(StepFunction::zero(f.space()), *s)) {
        r.rejection = "f_" + std::to_string(n) + " is negative on " + w->str();
        return r;
      }
    } else {
      ++r.unchecked_terms;
    }
    r.f_integrals.push_back(f.bounds(probe));
  }
  std::vector<std::optional<L1Certificate>> hs(horizon + 1);
  r.h_integrals.resize(horizon + 1);
  r.tail_inf.resize(horizon + 1);
  for (std::size_t n = horizon + 1; n-- > 0;) {
    hs[n] = n == horizon ? fs.at(n) : l1_min(fs.at(n), *hs[n + 1]);
    r.h_integrals[n] = hs[n]->bounds(probe);
    const ExtendedRational& lo = r.f_integrals[n].lower;
    r.tail_inf[n] = n == horizon ? lo : std::min(lo, r.tail_inf[n + 1]);
    if (n + 1 <= horizon) hs[n + 1].reset();
  }
  for (std::size_t n = 0; n <= horizon; ++n) {
    const IntegralBounds& h = r.h_integrals[n];
    if (n > 0 && h.upper < r.h_integrals[n - 1].lower) r.h_non_decreasing = false;
    if (r.tail_inf[n] < h.upper) r.inequality_holds = false;
    if (!(h.exact() && h.upper == r.tail_inf[n])) r.equality_everywhere = false;
    if (h.upper < r.tail_inf[n]) r.strict_somewhere = true;
  }
  return r;
}

/// Fatou applied to g - f_n and g + f_n gives
///   integral of min_{k>=n} f_k <= inf_k integral f_k <= sup_k integral f_k <= integral of max_{k>=n} f_k
/// with both outer ladders monotone.
struct DominatedReport {
  std::size_t horizon = 0;
  std::vector<IntegralBounds> f_integrals;
  FatouReport upper_side;  // sequence g - f_n
  FatouReport lower_side;  // sequence g + f_n
  std::vector<ExtendedRational> squeeze_lower;
  std::vector<ExtendedRational> squeeze_upper;
  bool squeeze_holds = true;
  std::optional<std::string> rejection;
};

inline DominatedReport dominated_check(const L1Sequence& fs, const L1Certificate& g, std::size_t horizon,
                                       std::size_t probe = 64) {
  DominatedReport r;
  r.horizon = horizon;
  auto gv = g.integral();
  if (!gv) throw DomainError("dominating function needs an exact integral");
  auto gs = g.function().as_step();
  for (std::size_t n = 0; n <= horizon; ++n) {
    const L1Certificate& f = fs.at(n);
    auto s = f.function().as_step();
    if (s && gs)
      if (auto w = excess_witness(abs(*s), *gs)) {
        r.rejection = "|f_" + std::to_string(n) + "| exceeds g on " + w->str();
        return r;
      }
    r.f_integrals.push_back(f.bounds(probe));
  }
  L1Sequence minus = make_l1_sequence([fs, g](std::size_t n) { return l1_add(g, l1_scale(Rational(-1), fs.at(n))); });
  L1Sequence plus = make_l1_sequence([fs, g](std::size_t n) { return l1_add(g, fs.at(n)); });
  r.upper_side = fatou_check(minus, horizon, probe);
  r.lower_side = fatou_check(plus, horizon, probe);
  if (r.upper_side.rejection || r.lower_side.rejection) {
    r.rejection = r.upper_side.rejection ? *r.upper_side.rejection : *r.lower_side.rejection;
    return r;
  }
  ExtendedRational G(*gv);
  for (std::size_t n = 0; n <= horizon; ++n) {
    r.squeeze_lower.push_back(*ext_add(r.lower_side.h_integrals[n].lower, -G));
    r.squeeze_upper.push_back(*ext_add(G, -r.upper_side.h_integrals[n].lower));
  }
  ExtendedRational lo = r.f_integrals[horizon].lower;
  ExtendedRational hi = r.f_integrals[horizon].upper;
  for (std::size_t n = horizon + 1; n-- > 0;) {
    lo = std::min(lo, r.f_integrals[n].lower);
    hi = std::max(hi, r.f_integrals[n].upper);
    if (lo < r.squeeze_lower[n] || r.squeeze_upper[n] < hi) r.squeeze_holds = false;
    if (n > 0 && (r.squeeze_lower[n] < r.squeeze_lower[n - 1] || r.squeeze_upper[n - 1] < r.squeeze_upper[n]))
      r.squeeze_holds = false;
  }
  return r;
}

}  // namespace riesz
