#pragma once

// Functions given as limits of non-decreasing sequences of step functions.
//
// A stream is verified lazily: asking for element n checks
// phi_0 <= phi_1 <= ... <= phi_n exactly, element by element.  Integrals are
// never guessed.  They are exact when the stream stabilizes or is backed by
// a single step function; otherwise the partial ladder is a lower bound and
// a caller may declare the limit, which is checked against every computed
// partial.

#include "riesz/step_function.hpp"
#include "riesz/stream.hpp"

#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace riesz {

/// phi_{index} < phi_{index-1} on a set of positive measure.
class MonotonicityError : public DomainError {
 public:
  MonotonicityError(std::size_t index, Cell witness, const std::string& what)
      : DomainError(what + " at index " + std::to_string(index) + " on " + witness.str()),
        index_(index),
        witness_(std::move(witness)) {}

  std::size_t index() const { return index_; }
  const Cell& witness() const { return witness_; }

 private:
  std::size_t index_;
  Cell witness_;
};

/// A declared limit contradicts a computed partial integral.
class DeclarationError : public DomainError {
 public:
  using DomainError::DomainError;
};

class R1Function {
 public:
  using Generator = std::function<StepFunction(std::size_t)>;

  static R1Function from_stream(MeasureSpace space, Generator gen) {
    R1Function f(space);
    f.chain_ = std::make_shared<Chain>(std::move(space), std::move(gen));
    return f;
  }

  /// The constant stream phi, phi, ...
  static R1Function constant(StepFunction phi) {
    R1Function f(phi.space());
    f.step_ = std::make_shared<const StepFunction>(std::move(phi));
    return f;
  }

  static R1Function zero(MeasureSpace space) { return constant(StepFunction::zero(std::move(space))); }

  const MeasureSpace& space() const { return space_; }

  /// Element n of the defining stream, after verifying monotonicity up to n.
  const StepFunction& at(std::size_t n) const { return step_ ? *step_ : chain_->get(n).phi; }

  Rational partial(std::size_t n) const { return step_ ? step_->integral() : chain_->get(n).partial; }

  /// Number of elements generated and verified so far.
  std::size_t verified_prefix() const { return step_ ? 0 : chain_->size(); }

  /// Set when the function is a single step function.
  const StepFunction* step() const { return step_.get(); }

  /// Attaches a claimed limit of the partial integrals.  Rejected when it is
  /// below a partial that has already been computed.
  R1Function with_declared_limit(ExtendedRational limit) const {
    if (step_ && !(limit == ExtendedRational(step_->integral())))
      throw DeclarationError("declared limit " + limit.str() + " differs from step integral " + step_->integral().str());
    if (chain_) {
      std::size_t n = chain_->size();
      for (std::size_t k = 0; k < n; ++k) check_declared(limit, k, chain_->get(k).partial);
    }
    R1Function f = *this;
    f.declared_ = std::move(limit);
    return f;
  }

  /// Attaches a certified finite upper bound for the integral.
  R1Function with_upper_bound(Rational bound) const {
    R1Function f = *this;
    f.bound_ = std::move(bound);
    return f;
  }

  const std::optional<ExtendedRational>& declared_limit() const { return declared_; }
  const std::optional<Rational>& upper_bound() const { return bound_; }

  /// Integral when it is known exactly: the step integral, or the declared
  /// limit.
  std::optional<ExtendedRational> known_integral() const {
    if (step_) return ExtendedRational(step_->integral());
    return declared_;
  }

  /// A finite number >= the integral, if one is certified.
  std::optional<Rational> finite_upper() const {
    auto k = known_integral();
    if (k && k->is_finite()) return k->value();
    if (k && k->is_minus_infinity()) return std::nullopt;
    return bound_;
  }

  bool certified_finite() const { return finite_upper().has_value(); }

  void check_declared(const ExtendedRational& limit, std::size_t n, const Rational& partial) const {
    if (limit < ExtendedRational(partial))
      throw DeclarationError("declared limit " + limit.str() + " is below partial integral " + partial.str() +
                             " at index " + std::to_string(n));
  }

 private:
  struct Entry {
    StepFunction phi;
    Rational partial;
  };

  class Chain {
   public:
    Chain(MeasureSpace space, Generator gen) : space_(std::move(space)), gen_(std::move(gen)) {}

    const Entry& get(std::size_t n) {
      std::lock_guard lock(mutex_);
      while (entries_.size() <= n) {
        std::size_t k = entries_.size();
        StepFunction phi = gen_(k);
        if (!(phi.space() == space_))
          throw DomainError("stream element " + std::to_string(k) + " lives on " + phi.space().str());
        if (k > 0)
          if (auto w = excess_witness(entries_[k - 1]->phi, phi))
            throw MonotonicityError(k, *w, "stream decreases");
        Rational partial = phi.integral();
        entries_.push_back(std::make_unique<Entry>(Entry{std::move(phi), std::move(partial)}));
      }
      return *entries_[n];
    }

    std::size_t size() {
      std::lock_guard lock(mutex_);
      return entries_.size();
    }

   private:
    MeasureSpace space_;
    Generator gen_;
    std::recursive_mutex mutex_;
    std::vector<std::unique_ptr<Entry>> entries_;
  };

  explicit R1Function(MeasureSpace space) : space_(std::move(space)) {}

  MeasureSpace space_;
  std::shared_ptr<const StepFunction> step_;
  std::shared_ptr<Chain> chain_;
  std::optional<ExtendedRational> declared_;
  std::optional<Rational> bound_;
};

inline R1Function r1_from_stream(MeasureSpace space, R1Function::Generator gen) {
  return R1Function::from_stream(std::move(space), std::move(gen));
}

/// The stream elements phi_{n}, ..., phi_{n+window} coincide a.e.
struct StabilizedAt {
  std::size_t index;
  Rational value;
};
struct Unstabilized {};
/// A partial integral exceeded the threshold.  A lower-bound certificate,
/// not a proof of divergence.
struct CertifiedInfinite {
  Rational threshold;
  std::size_t index;
};

struct IntegralEstimate {
  Rational lower_bound;
  std::variant<StabilizedAt, Unstabilized, CertifiedInfinite> status;
  std::optional<ExtendedRational> declared;
  std::vector<Rational> partials;

  bool stabilized() const { return std::holds_alternative<StabilizedAt>(status); }
  bool certified_infinite() const { return std::holds_alternative<CertifiedInfinite>(status); }

  /// Exact value when the stream stabilized, else the declared limit.
  std::optional<ExtendedRational> value() const {
    if (const auto* s = std::get_if<StabilizedAt>(&status)) return ExtendedRational(s->value);
    return declared;
  }

  std::string str() const {
    std::string s;
    if (const auto* st = std::get_if<StabilizedAt>(&status))
      s = "stabilized at " + std::to_string(st->index) + " with value " + st->value.str();
    else if (const auto* ci = std::get_if<CertifiedInfinite>(&status))
      s = "certified infinite: partial " + std::to_string(ci->index) + " exceeds " + ci->threshold.str();
    else
      s = "unstabilized";
    s += ", lower bound " + lower_bound.str();
    if (declared) s += ", declared " + declared->str();
    return s;
  }
};

/// Computes partials 0..budget.  Stabilization is judged on the final
/// window: if phi_{budget-window} .. phi_{budget} agree a.e. the estimate
/// reports the start of that final constant run and its integral.
inline IntegralEstimate integral_r1(const R1Function& f, std::size_t budget, std::size_t window,
                                    const Rational& infinity_threshold) {
  if (budget < 1) throw DomainError("integral budget must be at least 1");
  IntegralEstimate est;
  est.declared = f.declared_limit();
  if (const StepFunction* phi = f.step()) {
    Rational v = phi->integral();
    est.partials.push_back(v);
    est.lower_bound = v;
    est.status = StabilizedAt{0, std::move(v)};
    return est;
  }
  est.partials.reserve(budget + 1);
  for (std::size_t n = 0; n <= budget; ++n) {
    est.partials.push_back(f.partial(n));
    if (est.declared) f.check_declared(*est.declared, n, est.partials.back());
  }
  est.lower_bound = est.partials.back();
  std::size_t run_start = budget;
  while (run_start > 0 && ae_equal(f.at(run_start - 1), f.at(budget))) --run_start;
  if (window <= budget && budget - run_start >= window) {
    est.status = StabilizedAt{run_start, est.partials.back()};
  } else if (est.lower_bound > infinity_threshold) {
    std::size_t first = 0;
    while (!(est.partials[first] > infinity_threshold)) ++first;
    est.status = CertifiedInfinite{infinity_threshold, first};
  } else {
    est.status = Unstabilized{};
  }
  return est;
}

/// Residual table r(m, n) = integral of (phi_m - psi_n)^+ for the defining
/// streams of f and g; when f <= g every row decreases to 0.
struct CompareEvidence {
  std::vector<std::vector<Rational>> residual;
  bool rows_non_increasing = true;
  bool rows_vanish = true;  // last entry of every row is 0
};

inline CompareEvidence compare_r1(const R1Function& f, const R1Function& g, std::size_t horizon) {
  CompareEvidence ev;
  for (std::size_t m = 0; m <= horizon; ++m) {
    std::vector<Rational> row;
    for (std::size_t n = 0; n <= horizon; ++n) {
      row.push_back(positive_part(f.at(m) - g.at(n)).integral());
      if (n > 0 && row[n - 1] < row[n]) ev.rows_non_increasing = false;
    }
    if (!row.back().is_zero()) ev.rows_vanish = false;
    ev.residual.push_back(std::move(row));
  }
  return ev;
}

namespace detail {

inline void require_same_space(const R1Function& a, const R1Function& b) {
  if (!(a.space() == b.space())) throw DomainError("functions live on different spaces");
}

template <class StepOp>
R1Function termwise(const R1Function& a, const R1Function& b, StepOp op) {
  require_same_space(a, b);
  if (a.step() && b.step()) return R1Function::constant(op(*a.step(), *b.step()));
  return R1Function::from_stream(a.space(), [a, b, op](std::size_t k) { return op(a.at(k), b.at(k)); });
}

}  // namespace detail

/// f + g by termwise sums; integrals add whenever both are known.
inline R1Function add(const R1Function& f, const R1Function& g) {
  R1Function out = detail::termwise(f, g, [](const StepFunction& x, const StepFunction& y) { return x + y; });
  if (out.step()) return out;
  auto kf = f.known_integral();
  auto kg = g.known_integral();
  if (kf && kg)
    if (auto s = ext_add(*kf, *kg)) out = out.with_declared_limit(*s);
  auto uf = f.finite_upper();
  auto ug = g.finite_upper();
  if (uf && ug) out = out.with_upper_bound(*uf + *ug);
  return out;
}

/// c f for c >= 0; negative factors belong to the signed class.
inline R1Function scale_nonneg(const Rational& c, const R1Function& f) {
  if (c.sign() < 0) throw DomainError("R1 is a cone: cannot scale by " + c.str());
  if (c.is_zero()) return R1Function::zero(f.space());
  if (const StepFunction* phi = f.step()) return R1Function::constant(c * *phi);
  R1Function out = R1Function::from_stream(f.space(), [f, c](std::size_t k) { return c * f.at(k); });
  if (auto k = f.known_integral()) out = out.with_declared_limit(ext_mul(ExtendedRational(c), *k));
  if (auto u = f.finite_upper()) out = out.with_upper_bound(c * *u);
  return out;
}

inline R1Function r1_min(const R1Function& f, const R1Function& g) {
  R1Function out = detail::termwise(f, g, [](const StepFunction& x, const StepFunction& y) { return pointwise_min(x, y); });
  if (out.step()) return out;
  auto uf = f.finite_upper();
  auto ug = g.finite_upper();
  if (uf && ug) out = out.with_upper_bound(min(*uf, *ug));
  else if (uf) out = out.with_upper_bound(*uf);
  else if (ug) out = out.with_upper_bound(*ug);
  return out;
}

inline R1Function r1_max(const R1Function& f, const R1Function& g) {
  return detail::termwise(f, g, [](const StepFunction& x, const StepFunction& y) { return pointwise_max(x, y); });
}

/// Memoized sequence of R1 functions.
using R1Sequence = LazyStream<R1Function>;

inline R1Sequence make_r1_sequence(std::function<R1Function(std::size_t)> gen) {
  return R1Sequence::infinite(std::move(gen));
}

/// Limit of a non-decreasing sequence f_0 <= f_1 <= ... of R1 functions via
/// the diagonal stream phi_k = max_{n <= k} phi_{n,k}, where phi_{n,.} is the
/// defining stream of f_n.  Consecutive members that are both single step
/// functions are checked for f_n <= f_{n+1}.
inline R1Function sup_of_r1_stream(const R1Sequence& fs) {
  const MeasureSpace space = fs.at(0).space();
  return R1Function::from_stream(space, [fs](std::size_t k) {
    const R1Function& last = fs.at(k);
    if (k > 0) {
      const R1Function& prev = fs.at(k - 1);
      if (prev.step() && last.step())
        if (auto w = excess_witness(*prev.step(), *last.step()))
          throw MonotonicityError(k, *w, "sequence member decreases");
    }
    StepFunction acc = fs.at(0).at(k);
    for (std::size_t n = 1; n <= k; ++n) acc = pointwise_max(acc, fs.at(n).at(k));
    return acc;
  });
}

/// Finite-horizon squeeze for sup_of_r1_stream: for each k,
/// max_{n<=k} partial_n(k) <= diagonal partial(k) <= declared limit.
struct SupSqueeze {
  std::vector<Rational> diagonal;
  std::vector<Rational> inner_max;
  bool holds = true;
};

inline SupSqueeze sup_squeeze(const R1Sequence& fs, const R1Function& diagonal, std::size_t horizon,
                              const std::optional<ExtendedRational>& declared = std::nullopt) {
  SupSqueeze s;
  for (std::size_t k = 0; k <= horizon; ++k) {
    Rational best = fs.at(0).partial(k);
    for (std::size_t n = 1; n <= k; ++n) best = max(best, fs.at(n).partial(k));
    Rational d = diagonal.partial(k);
    if (d < best) s.holds = false;
    if (declared && *declared < ExtendedRational(d)) s.holds = false;
    if (k > 0 && d < s.diagonal.back()) s.holds = false;
    s.diagonal.push_back(std::move(d));
    s.inner_max.push_back(std::move(best));
  }
  return s;
}

}  // namespace riesz
