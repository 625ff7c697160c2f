#pragma once

// Step functions: finite linear combinations of characteristic functions of
// cells, kept in a canonical disjoint form so that equality almost
// everywhere is decidable by comparing representations.

#include "riesz/measure_space.hpp"

#include <algorithm>
#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace riesz {

struct Term {
  Cell cell;
  Rational coeff;
  friend bool operator==(const Term&, const Term&) = default;
};

class StepFunction;

namespace detail {

// Atoms of the common refinement of finitely many cells of a
// one-dimensional space: consecutive intervals between the sorted endpoints
// on the line, singletons of the union of supports otherwise.
class Refinement {
 public:
  Refinement(const MeasureSpace& space, const std::vector<const Cell*>& cells)
      : line_(space.kind() == MeasureSpace::Kind::interval_line) {
    if (line_) {
      ends_.reserve(2 * cells.size());
      for (const Cell* c : cells) {
        if (c->empty()) continue;
        ends_.push_back(c->as_interval().lo);
        ends_.push_back(c->as_interval().hi);
      }
      std::sort(ends_.begin(), ends_.end());
      ends_.erase(std::unique(ends_.begin(), ends_.end()), ends_.end());
    } else {
      for (const Cell* c : cells)
        for (const auto& e : c->as_finite_set().elements) ids_.push_back(e);
      std::sort(ids_.begin(), ids_.end());
      ids_.erase(std::unique(ids_.begin(), ids_.end()), ids_.end());
    }
  }

  std::size_t size() const { return line_ ? (ends_.empty() ? 0 : ends_.size() - 1) : ids_.size(); }
  bool line() const { return line_; }

  Cell atom(std::size_t i) const {
    return line_ ? Cell::interval(ends_[i], ends_[i + 1]) : Cell::finite_set({ids_[i]});
  }

  /// A point inside atom i.
  Coordinate representative(std::size_t i) const {
    return line_ ? Coordinate(ends_[i]) : Coordinate(ids_[i]);
  }

  template <class F>
  void for_each_atom_in(const Cell& c, F&& f) const {
    if (c.empty()) return;
    if (line_) {
      auto lo = std::lower_bound(ends_.begin(), ends_.end(), c.as_interval().lo);
      auto hi = std::lower_bound(lo, ends_.end(), c.as_interval().hi);
      for (auto it = lo; it != hi; ++it) f(static_cast<std::size_t>(it - ends_.begin()));
    } else {
      for (const auto& e : c.as_finite_set().elements)
        f(static_cast<std::size_t>(std::lower_bound(ids_.begin(), ids_.end(), e) - ids_.begin()));
    }
  }

  /// Groups atoms with equal non-zero values into cells: maximal runs of
  /// consecutive intervals on the line, level sets (ordered by least
  /// element) on finite sets.
  template <class V, class IsZero>
  std::vector<std::pair<Cell, V>> coalesce(std::vector<V> values, IsZero is_zero) const {
    std::vector<std::pair<Cell, V>> out;
    const std::size_t n = values.size();
    if (line_) {
      std::size_t i = 0;
      while (i < n) {
        if (is_zero(values[i])) {
          ++i;
          continue;
        }
        std::size_t j = i;
        while (j + 1 < n && values[j + 1] == values[i]) ++j;
        out.emplace_back(Cell::interval(ends_[i], ends_[j + 1]), std::move(values[i]));
        i = j + 1;
      }
      return out;
    }
    std::vector<std::vector<PointId>> groups;
    std::vector<std::size_t> group_value;
    for (std::size_t i = 0; i < n; ++i) {
      if (is_zero(values[i])) continue;
      std::size_t g = 0;
      while (g < groups.size() && !(values[group_value[g]] == values[i])) ++g;
      if (g == groups.size()) {
        groups.emplace_back();
        group_value.push_back(i);
      }
      groups[g].push_back(ids_[i]);
    }
    for (std::size_t g = 0; g < groups.size(); ++g)
      out.emplace_back(Cell::finite_set(std::move(groups[g])), std::move(values[group_value[g]]));
    return out;
  }

 private:
  bool line_;
  std::vector<Rational> ends_;
  std::vector<PointId> ids_;
};

}  // namespace detail

/// Canonical step function.
///
/// Invariants: cells pairwise disjoint and non-empty, coefficients non-zero,
/// terms sorted in the canonical cell order, adjacent intervals with equal
/// coefficients merged, equal coefficients on finite sets grouped into one
/// cell.  On a product space the first-factor partition is the coarsest one
/// on which the section y -> f(x, y) is constant.
class StepFunction {
 public:
  static StepFunction zero(MeasureSpace space) { return StepFunction(std::move(space), {}); }

  static StepFunction indicator(MeasureSpace space, Cell cell, Rational coeff = Rational(1)) {
    if (!space.is_product()) {
      space.require_owns(cell);
      if (cell.empty() || coeff.is_zero()) return zero(std::move(space));
      std::vector<Term> single;
      single.push_back(Term{std::move(cell), std::move(coeff)});
      return StepFunction(std::move(space), std::move(single));
    }
    std::vector<Term> raw;
    raw.push_back(Term{std::move(cell), std::move(coeff)});
    return canonicalize(std::move(space), std::move(raw));
  }

  /// Canonical form of sum(coeff_i * chi(cell_i)); overlaps are allowed.
  static StepFunction canonicalize(MeasureSpace space, std::vector<Term> raw) {
    for (const auto& t : raw) space.require_owns(t.cell);
    if (!space.is_product()) {
      std::vector<const Cell*> cells;
      cells.reserve(raw.size());
      for (const auto& t : raw) cells.push_back(&t.cell);
      detail::Refinement ref(space, cells);
      std::vector<Rational> values(ref.size());
      for (const auto& t : raw) ref.for_each_atom_in(t.cell, [&](std::size_t i) { values[i] += t.coeff; });
      return from_pieces(std::move(space), ref.coalesce(std::move(values), [](const Rational& v) { return v.is_zero(); }));
    }
    std::vector<const Cell*> lefts;
    lefts.reserve(raw.size());
    for (const auto& t : raw) lefts.push_back(&t.cell.left());
    detail::Refinement ref(space.left(), lefts);
    std::vector<std::vector<Term>> sections(ref.size());
    for (const auto& t : raw)
      ref.for_each_atom_in(t.cell.left(), [&](std::size_t i) { sections[i].push_back(Term{t.cell.right(), t.coeff}); });
    std::vector<StepFunction> values;
    values.reserve(sections.size());
    for (auto& s : sections) values.push_back(canonicalize(space.right(), std::move(s)));
    return from_sections(std::move(space), ref.coalesce(std::move(values), [](const StepFunction& f) { return f.is_zero(); }));
  }

  const MeasureSpace& space() const { return space_; }
  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  /// Value at a point: the coefficient of the unique cell containing it.
  Rational value_at(const Point& p) const {
    for (const auto& t : terms_)
      if (t.cell.contains(p)) return t.coeff;
    return Rational(0);
  }

  /// sum coeff * mu(cell).
  Rational integral() const {
    Rational total;
    for (const auto& t : terms_) {
      Rational m = space_.measure(t.cell);
      m *= t.coeff;
      total += m;
    }
    return total;
  }

  std::string str() const {
    std::string s = "step {";
    for (std::size_t i = 0; i < terms_.size(); ++i)
      s += (i ? ", " : " ") + terms_[i].cell.str() + ": " + terms_[i].coeff.str();
    return s + (terms_.empty() ? "}" : " }");
  }

  friend bool operator==(const StepFunction& a, const StepFunction& b) {
    return a.space_ == b.space_ && a.terms_ == b.terms_;
  }

  /// Builds from terms already in canonical form (no checks beyond
  /// ownership); used by the combinators.
  static StepFunction from_pieces(MeasureSpace space, std::vector<std::pair<Cell, Rational>> pieces) {
    std::vector<Term> terms;
    terms.reserve(pieces.size());
    for (auto& [c, v] : pieces) terms.push_back(Term{std::move(c), std::move(v)});
    return StepFunction(std::move(space), std::move(terms));
  }

 private:
  template <class Op>
  friend StepFunction combine(const StepFunction& a, const StepFunction& b, Op op);

  StepFunction(MeasureSpace space, std::vector<Term> terms) : space_(std::move(space)), terms_(std::move(terms)) {}

  static StepFunction from_sections(MeasureSpace space, std::vector<std::pair<Cell, StepFunction>> pieces) {
    std::vector<Term> terms;
    for (auto& [x, section] : pieces)
      for (const auto& t : section.terms_) terms.push_back(Term{Cell::rectangle(x, t.cell), t.coeff});
    return StepFunction(std::move(space), std::move(terms));
  }

  MeasureSpace space_;
  std::vector<Term> terms_;
};

inline void require_same_space(const StepFunction& a, const StepFunction& b) {
  if (!(a.space() == b.space()))
    throw DomainError("step functions live on different spaces: " + a.space().str() + " and " + b.space().str());
}

/// Pointwise h(x) = op(a(x), b(x)) on the common refinement.  op(0, 0) must
/// be 0 so that the result has finite support.
template <class Op>
StepFunction combine(const StepFunction& a, const StepFunction& b, Op op) {
  require_same_space(a, b);
  if (!op(Rational(0), Rational(0)).is_zero()) throw DomainError("pointwise operation does not fix 0");
  const MeasureSpace& space = a.space();
  if (!space.is_product()) {
    std::vector<const Cell*> cells;
    cells.reserve(a.terms().size() + b.terms().size());
    for (const auto& t : a.terms()) cells.push_back(&t.cell);
    for (const auto& t : b.terms()) cells.push_back(&t.cell);
    detail::Refinement ref(space, cells);
    std::vector<Rational> va(ref.size()), vb(ref.size());
    for (const auto& t : a.terms()) ref.for_each_atom_in(t.cell, [&](std::size_t i) { va[i] = t.coeff; });
    for (const auto& t : b.terms()) ref.for_each_atom_in(t.cell, [&](std::size_t i) { vb[i] = t.coeff; });
    for (std::size_t i = 0; i < va.size(); ++i) va[i] = op(va[i], vb[i]);
    return StepFunction::from_pieces(space, ref.coalesce(std::move(va), [](const Rational& v) { return v.is_zero(); }));
  }
  std::vector<const Cell*> lefts;
  for (const auto& t : a.terms()) lefts.push_back(&t.cell.left());
  for (const auto& t : b.terms()) lefts.push_back(&t.cell.left());
  detail::Refinement ref(space.left(), lefts);
  std::vector<std::vector<Term>> sa(ref.size()), sb(ref.size());
  for (const auto& t : a.terms())
    ref.for_each_atom_in(t.cell.left(), [&](std::size_t i) { sa[i].push_back(Term{t.cell.right(), t.coeff}); });
  for (const auto& t : b.terms())
    ref.for_each_atom_in(t.cell.left(), [&](std::size_t i) { sb[i].push_back(Term{t.cell.right(), t.coeff}); });
  std::vector<StepFunction> values;
  values.reserve(ref.size());
  for (std::size_t i = 0; i < ref.size(); ++i) {
    // Sections of canonical functions are canonical already.
    StepFunction fa(space.right(), std::move(sa[i]));
    StepFunction fb(space.right(), std::move(sb[i]));
    values.push_back(combine(fa, fb, op));
  }
  return StepFunction::from_sections(space, ref.coalesce(std::move(values), [](const StepFunction& f) { return f.is_zero(); }));
}

/// Pointwise h(x) = op(a(x)); op(0) must be 0.
template <class Op>
StepFunction transform(const StepFunction& a, Op op) {
  return combine(a, StepFunction::zero(a.space()), [&](const Rational& x, const Rational&) { return op(x); });
}

inline std::ostream& operator<<(std::ostream& os, const StepFunction& f) { return os << f.str(); }

inline StepFunction operator+(const StepFunction& a, const StepFunction& b) {
  return combine(a, b, [](const Rational& x, const Rational& y) { return x + y; });
}
inline StepFunction operator-(const StepFunction& a, const StepFunction& b) {
  return combine(a, b, [](const Rational& x, const Rational& y) { return x - y; });
}
inline StepFunction operator-(const StepFunction& a) {
  return transform(a, [](const Rational& x) { return -x; });
}
inline StepFunction operator*(const Rational& c, const StepFunction& a) {
  if (c.is_zero()) return StepFunction::zero(a.space());
  std::vector<std::pair<Cell, Rational>> pieces;
  for (const auto& t : a.terms()) pieces.emplace_back(t.cell, c * t.coeff);
  return StepFunction::from_pieces(a.space(), std::move(pieces));
}

inline StepFunction pointwise_min(const StepFunction& a, const StepFunction& b) {
  return combine(a, b, [](const Rational& x, const Rational& y) { return min(x, y); });
}
inline StepFunction pointwise_max(const StepFunction& a, const StepFunction& b) {
  return combine(a, b, [](const Rational& x, const Rational& y) { return max(x, y); });
}
inline StepFunction positive_part(const StepFunction& a) {
  return transform(a, [](const Rational& x) { return max(x, Rational(0)); });
}
inline StepFunction abs(const StepFunction& a) {
  return transform(a, [](const Rational& x) { return abs(x); });
}

inline Rational integrate_step(const StepFunction& f) { return f.integral(); }

namespace detail {

// Sweep over two canonical interval-line step functions looking for a
// non-degenerate interval where a > b.
inline std::optional<Cell> line_excess(const std::vector<Term>& a, const std::vector<Term>& b) {
  static const Rational zero;
  std::size_t i = 0, j = 0;
  const Rational* x = nullptr;
  auto next_break = [](const std::vector<Term>& t, std::size_t k, const Rational& at) -> const Rational* {
    if (k >= t.size()) return nullptr;
    const auto& iv = t[k].cell.as_interval();
    return at < iv.lo ? &iv.lo : &iv.hi;
  };
  while (i < a.size() || j < b.size()) {
    if (!x) {
      const Rational* ca = i < a.size() ? &a[i].cell.as_interval().lo : nullptr;
      const Rational* cb = j < b.size() ? &b[j].cell.as_interval().lo : nullptr;
      x = (!cb || (ca && *ca < *cb)) ? ca : cb;
    }
    const Rational* na = next_break(a, i, *x);
    const Rational* nb = next_break(b, j, *x);
    const Rational* nx = (!nb || (na && *na < *nb)) ? na : nb;
    auto value = [&](const std::vector<Term>& t, std::size_t k) -> const Rational& {
      if (k < t.size() && t[k].cell.as_interval().lo <= *x && *x < t[k].cell.as_interval().hi) return t[k].coeff;
      return zero;
    };
    if (value(a, i) > value(b, j)) return Cell::interval(*x, *nx);
    if (i < a.size() && a[i].cell.as_interval().hi == *nx) ++i;
    if (j < b.size() && b[j].cell.as_interval().hi == *nx) ++j;
    x = nx;
  }
  return std::nullopt;
}

}  // namespace detail

/// A cell of positive measure on which a > b, if any.
inline std::optional<Cell> excess_witness(const StepFunction& a, const StepFunction& b) {
  if (a.space().kind() == MeasureSpace::Kind::interval_line) {
    require_same_space(a, b);
    return detail::line_excess(a.terms(), b.terms());
  }
  StepFunction d = b - a;
  for (const auto& t : d.terms())
    if (t.coeff.sign() < 0 && d.space().measure(t.cell).sign() > 0) return t.cell;
  return std::nullopt;
}

/// a <= b off a null set.
inline bool ae_le(const StepFunction& a, const StepFunction& b) { return !excess_witness(a, b); }

/// a = b off a null set.  On the line and under counting measure this is
/// identity of canonical forms; cells of measure zero (the zero measure,
/// degenerate rectangles) are ignored.
inline bool ae_equal(const StepFunction& a, const StepFunction& b) {
  require_same_space(a, b);
  if (a == b) return true;
  StepFunction d = a - b;
  return std::all_of(d.terms().begin(), d.terms().end(),
                     [&](const Term& t) { return d.space().measure(t.cell).is_zero(); });
}

/// med{lo, x, hi} = max{lo, min{x, hi}}; requires lo <= hi almost everywhere.
inline StepFunction median(const StepFunction& lo, const StepFunction& x, const StepFunction& hi) {
  if (auto w = excess_witness(lo, hi)) throw DomainError("median bounds cross on " + w->str());
  return pointwise_max(lo, pointwise_min(x, hi));
}

/// Level set {phi > t} of a non-negative step function.
struct LevelSetBound {
  std::vector<Cell> cells;
  Rational total;  // measure of the level set
  Rational bound;  // integral(phi) / t
};

/// Reads off {phi > t}; its measure never exceeds integral(phi) / t.
inline LevelSetBound markov_level_bound(const StepFunction& phi, const Rational& t) {
  if (t.sign() <= 0) throw DomainError("level threshold must be positive, got " + t.str());
  if (auto w = excess_witness(StepFunction::zero(phi.space()), phi))
    throw DomainError("level bound needs a non-negative function; negative on " + w->str());
  LevelSetBound out;
  for (const auto& term : phi.terms()) {
    if (term.coeff > t) {
      out.cells.push_back(term.cell);
      out.total += phi.space().measure(term.cell);
    }
  }
  out.bound = phi.integral() / t;
  return out;
}

/// Finite-horizon evidence for "phi_n decreasing to 0 forces the integrals
/// down to 0".
struct LemmaAVerdict {
  std::size_t start = 0;
  std::vector<Rational> integrals;  // integrals[i] belongs to index start + i
  bool monotone = true;             // phi_{n+1} <= phi_n a.e., checked exactly
  bool integrals_non_increasing = true;
  std::optional<std::size_t> first_below;  // first n with integral < eps
  std::optional<std::size_t> violation_index;
  std::optional<Cell> violation_cell;  // cell where phi_n > phi_{n-1}
};

/// Walks phi_start .. phi_horizon, verifying phi_{n+1} <= phi_n exactly and
/// recording the first index whose integral drops below eps.  Stops at the
/// first monotonicity violation.
inline LemmaAVerdict lemmaA_check(const std::function<StepFunction(std::size_t)>& seq, const Rational& eps,
                                  std::size_t horizon, std::size_t start = 0) {
  LemmaAVerdict v;
  v.start = start;
  if (horizon >= start) v.integrals.reserve(horizon - start + 1);
  std::optional<StepFunction> prev;
  for (std::size_t n = start; n <= horizon; ++n) {
    StepFunction cur = seq(n);
    if (prev) {
      if (auto w = excess_witness(cur, *prev)) {
        v.monotone = false;
        v.violation_index = n;
        v.violation_cell = *w;
        break;
      }
    }
    Rational integral = cur.integral();
    if (!v.integrals.empty() && v.integrals.back() < integral) v.integrals_non_increasing = false;
    if (!v.first_below && integral < eps) v.first_below = n;
    v.integrals.push_back(std::move(integral));
    prev = std::move(cur);
  }
  return v;
}

}  // namespace riesz
