#pragma once

// Semirings of sets carrying a finite measure: bounded half-open rational
// intervals with length, finite subsets of an identifier space with the
// counting (or the zero) measure, and products of two such spaces.

#include "riesz/numeric.hpp"
#include "riesz/stream.hpp"

#include <algorithm>
#include <compare>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace riesz {

/// Identifier of a ground point of a counting or zero space.
using PointId = std::string;

/// A point of a one-dimensional space: a rational on the line or a ground id.
using Coordinate = std::variant<Rational, PointId>;

inline std::string coordinate_str(const Coordinate& c) {
  if (const auto* r = std::get_if<Rational>(&c)) return r->str();
  return std::get<PointId>(c);
}

/// A point of a one-dimensional space or of a product of two of them.
struct Point {
  std::vector<Coordinate> coords;

  static Point on_line(Rational x) { return Point{{Coordinate(std::move(x))}}; }
  static Point ground(PointId id) { return Point{{Coordinate(std::move(id))}}; }
  static Point pair(Coordinate x, Coordinate y) { return Point{{std::move(x), std::move(y)}}; }

  std::string str() const {
    if (coords.size() == 1) return coordinate_str(coords[0]);
    return "(" + coordinate_str(coords[0]) + ", " + coordinate_str(coords[1]) + ")";
  }
};

/// Half-open interval [lo, hi); lo == hi is the empty cell.
struct Interval {
  Rational lo;
  Rational hi;
  friend bool operator==(const Interval&, const Interval&) = default;
  friend auto operator<=>(const Interval&, const Interval&) = default;
};

/// Finite subset of a ground identifier space, sorted and duplicate free.
struct FiniteSet {
  std::vector<PointId> elements;
  friend bool operator==(const FiniteSet&, const FiniteSet&) = default;
  friend auto operator<=>(const FiniteSet&, const FiniteSet&) = default;
};

class Cell;

struct Rectangle {
  std::shared_ptr<const Cell> left;
  std::shared_ptr<const Cell> right;
};

/// An element of one of the semirings above.
class Cell {
 public:
  enum class Kind : std::uint8_t { interval, finite_set, rectangle };

  static Cell interval(Rational lo, Rational hi) {
    if (hi < lo) throw DomainError("interval cell with hi < lo: [" + lo.str() + ", " + hi.str() + ")");
    return Cell(Interval{std::move(lo), std::move(hi)});
  }

  static Cell finite_set(std::vector<PointId> elements) {
    std::sort(elements.begin(), elements.end());
    elements.erase(std::unique(elements.begin(), elements.end()), elements.end());
    return Cell(FiniteSet{std::move(elements)});
  }

  static Cell rectangle(Cell left, Cell right) {
    if (left.kind() == Kind::rectangle || right.kind() == Kind::rectangle)
      throw DomainError("rectangles of rectangles are not supported");
    return Cell(Rectangle{std::make_shared<const Cell>(std::move(left)),
                          std::make_shared<const Cell>(std::move(right))});
  }

  Kind kind() const { return static_cast<Kind>(data_.index()); }

  const Interval& as_interval() const { return std::get<Interval>(data_); }
  const FiniteSet& as_finite_set() const { return std::get<FiniteSet>(data_); }
  const Cell& left() const { return *std::get<Rectangle>(data_).left; }
  const Cell& right() const { return *std::get<Rectangle>(data_).right; }

  bool empty() const {
    switch (kind()) {
      case Kind::interval: return as_interval().lo == as_interval().hi;
      case Kind::finite_set: return as_finite_set().elements.empty();
      case Kind::rectangle: return left().empty() || right().empty();
    }
    return true;
  }

  bool contains(const Coordinate& c) const {
    switch (kind()) {
      case Kind::interval: {
        const auto* x = std::get_if<Rational>(&c);
        return x && as_interval().lo <= *x && *x < as_interval().hi;
      }
      case Kind::finite_set: {
        const auto* id = std::get_if<PointId>(&c);
        const auto& e = as_finite_set().elements;
        return id && std::binary_search(e.begin(), e.end(), *id);
      }
      case Kind::rectangle: break;
    }
    return false;
  }

  bool contains(const Point& p) const {
    if (kind() == Kind::rectangle)
      return p.coords.size() == 2 && left().contains(p.coords[0]) && right().contains(p.coords[1]);
    return p.coords.size() == 1 && contains(p.coords[0]);
  }

  /// Intersection; both cells must have the same shape.
  Cell intersect(const Cell& other) const {
    require_same_kind(other);
    switch (kind()) {
      case Kind::interval: {
        const auto& a = as_interval();
        const auto& b = other.as_interval();
        const Rational& lo = max(a.lo, b.lo);
        const Rational& hi = min(a.hi, b.hi);
        return hi <= lo ? Cell::interval(lo, lo) : Cell::interval(lo, hi);
      }
      case Kind::finite_set: {
        std::vector<PointId> out;
        const auto& a = as_finite_set().elements;
        const auto& b = other.as_finite_set().elements;
        std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
        return Cell(FiniteSet{std::move(out)});
      }
      case Kind::rectangle:
        return Cell::rectangle(left().intersect(other.left()), right().intersect(other.right()));
    }
    return *this;
  }

  /// this \ other as a list of pairwise disjoint non-empty cells.
  std::vector<Cell> minus(const Cell& other) const {
    require_same_kind(other);
    std::vector<Cell> out;
    if (empty()) return out;
    switch (kind()) {
      case Kind::interval: {
        const auto& a = as_interval();
        const auto& b = other.as_interval();
        if (other.empty() || b.hi <= a.lo || a.hi <= b.lo) {
          out.push_back(*this);
          break;
        }
        if (a.lo < b.lo) out.push_back(Cell::interval(a.lo, b.lo));
        if (b.hi < a.hi) out.push_back(Cell::interval(b.hi, a.hi));
        break;
      }
      case Kind::finite_set: {
        std::vector<PointId> rest;
        const auto& a = as_finite_set().elements;
        const auto& b = other.as_finite_set().elements;
        std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(rest));
        if (!rest.empty()) out.push_back(Cell(FiniteSet{std::move(rest)}));
        break;
      }
      case Kind::rectangle: {
        // (P x Q) \ (P' x Q') = (P \ P') x Q  u  (P n P') x (Q \ Q')
        for (auto& p : left().minus(other.left())) out.push_back(Cell::rectangle(std::move(p), right()));
        Cell common = left().intersect(other.left());
        if (!common.empty())
          for (auto& q : right().minus(other.right())) out.push_back(Cell::rectangle(common, std::move(q)));
        break;
      }
    }
    return out;
  }

  std::string str() const {
    switch (kind()) {
      case Kind::interval:
        return "[" + as_interval().lo.str() + ", " + as_interval().hi.str() + ")";
      case Kind::finite_set: {
        std::string s = "{";
        const auto& e = as_finite_set().elements;
        for (std::size_t i = 0; i < e.size(); ++i) s += (i ? "," : "") + e[i];
        return s + "}";
      }
      case Kind::rectangle:
        return left().str() + " x " + right().str();
    }
    return {};
  }

  friend bool operator==(const Cell& a, const Cell& b) { return (a <=> b) == 0; }

  /// Canonical order: intervals by (lo, hi), finite sets by their sorted
  /// element lists (so by least element first), rectangles lexicographically.
  friend std::strong_ordering operator<=>(const Cell& a, const Cell& b) {
    if (a.kind() != b.kind()) return a.kind() <=> b.kind();
    switch (a.kind()) {
      case Kind::interval: return a.as_interval() <=> b.as_interval();
      case Kind::finite_set: return a.as_finite_set() <=> b.as_finite_set();
      case Kind::rectangle: {
        auto c = a.left() <=> b.left();
        return c != 0 ? c : a.right() <=> b.right();
      }
    }
    return std::strong_ordering::equal;
  }

 private:
  using Data = std::variant<Interval, FiniteSet, Rectangle>;
  explicit Cell(Data d) : data_(std::move(d)) {}

  void require_same_kind(const Cell& other) const {
    if (kind() != other.kind()) throw DomainError("cells of different shapes: " + str() + " and " + other.str());
  }

  Data data_;
};

/// A semiring with a finite measure on it.
inline std::ostream& operator<<(std::ostream& os, const Cell& c) { return os << c.str(); }

class MeasureSpace {
 public:
  enum class Kind : std::uint8_t { interval_line, counting, zero, product };

  static MeasureSpace interval_line() { return MeasureSpace(Kind::interval_line, {}); }
  static MeasureSpace counting(std::string ground = "X") { return MeasureSpace(Kind::counting, std::move(ground)); }
  static MeasureSpace zero(std::string ground = "X") { return MeasureSpace(Kind::zero, std::move(ground)); }

  /// Product of two one-dimensional spaces with (mu x nu)(P x Q) = mu(P) nu(Q).
  static MeasureSpace product(const MeasureSpace& left, const MeasureSpace& right) {
    if (left.is_product() || right.is_product())
      throw DomainError("products of more than two factors are not supported");
    MeasureSpace s(Kind::product, {});
    s.factors_ = std::make_shared<const std::pair<MeasureSpace, MeasureSpace>>(left, right);
    return s;
  }

  Kind kind() const { return kind_; }
  bool is_product() const { return kind_ == Kind::product; }
  const std::string& ground() const { return ground_; }
  const MeasureSpace& left() const { return require_product().first; }
  const MeasureSpace& right() const { return require_product().second; }

  bool owns(const Cell& c) const {
    switch (kind_) {
      case Kind::interval_line: return c.kind() == Cell::Kind::interval;
      case Kind::counting:
      case Kind::zero: return c.kind() == Cell::Kind::finite_set;
      case Kind::product:
        return c.kind() == Cell::Kind::rectangle && left().owns(c.left()) && right().owns(c.right());
    }
    return false;
  }

  void require_owns(const Cell& c) const {
    if (!owns(c)) throw DomainError("cell " + c.str() + " does not belong to space " + str());
  }

  /// Measure of a cell: length, cardinality, zero, or the product of the
  /// factor measures.
  Rational measure(const Cell& c) const {
    require_owns(c);
    switch (kind_) {
      case Kind::interval_line: return c.as_interval().hi - c.as_interval().lo;
      case Kind::counting: return Rational(static_cast<long>(c.as_finite_set().elements.size()));
      case Kind::zero: return Rational(0);
      case Kind::product: return left().measure(c.left()) * right().measure(c.right());
    }
    return Rational(0);
  }

  std::string str() const {
    switch (kind_) {
      case Kind::interval_line: return "interval";
      case Kind::counting: return ground_ == "X" ? "counting" : "counting(" + ground_ + ")";
      case Kind::zero: return ground_ == "X" ? "zero" : "zero(" + ground_ + ")";
      case Kind::product: return "product(" + left().str() + "," + right().str() + ")";
    }
    return {};
  }

  friend bool operator==(const MeasureSpace& a, const MeasureSpace& b) {
    if (a.kind_ != b.kind_ || a.ground_ != b.ground_) return false;
    if (!a.is_product()) return true;
    return a.left() == b.left() && a.right() == b.right();
  }

 private:
  MeasureSpace(Kind k, std::string ground) : kind_(k), ground_(std::move(ground)) {}

  const std::pair<MeasureSpace, MeasureSpace>& require_product() const {
    if (!factors_) throw DomainError("space " + str() + " is not a product");
    return *factors_;
  }

  Kind kind_;
  std::string ground_;
  std::shared_ptr<const std::pair<MeasureSpace, MeasureSpace>> factors_;
};

/// Representative points of the common refinement of a family of cells:
/// every endpoint and every midpoint between consecutive endpoints on the
/// line, every element of a finite set, and the cartesian product of the
/// factor samples for rectangles.
inline std::vector<Point> sample_points(const MeasureSpace& space, const std::vector<Cell>& cells) {
  auto one_dim = [](const MeasureSpace& s, const std::vector<const Cell*>& cs) {
    std::vector<Coordinate> out;
    if (s.kind() == MeasureSpace::Kind::interval_line) {
      std::vector<Rational> ends;
      for (const Cell* c : cs) {
        ends.push_back(c->as_interval().lo);
        ends.push_back(c->as_interval().hi);
      }
      std::sort(ends.begin(), ends.end());
      ends.erase(std::unique(ends.begin(), ends.end()), ends.end());
      for (std::size_t i = 0; i < ends.size(); ++i) {
        out.emplace_back(ends[i]);
        if (i + 1 < ends.size()) out.emplace_back((ends[i] + ends[i + 1]) / Rational(2));
      }
      if (!ends.empty()) {
        out.emplace_back(ends.front() - Rational(1));
        out.emplace_back(ends.back() + Rational(1));
      }
    } else {
      std::vector<PointId> ids;
      for (const Cell* c : cs)
        for (const auto& e : c->as_finite_set().elements) ids.push_back(e);
      std::sort(ids.begin(), ids.end());
      ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
      for (auto& id : ids) out.emplace_back(id);
    }
    return out;
  };
  std::vector<Point> pts;
  if (!space.is_product()) {
    std::vector<const Cell*> cs;
    for (const auto& c : cells) cs.push_back(&c);
    for (auto& c : one_dim(space, cs)) pts.push_back(Point{{std::move(c)}});
    return pts;
  }
  std::vector<const Cell*> ls, rs;
  for (const auto& c : cells) {
    ls.push_back(&c.left());
    rs.push_back(&c.right());
  }
  auto xs = one_dim(space.left(), ls);
  auto ys = one_dim(space.right(), rs);
  for (const auto& x : xs)
    for (const auto& y : ys) pts.push_back(Point::pair(x, y));
  return pts;
}

/// Outcome of checking the semiring axioms on one ordered pair of cells.
struct SemiringPairCheck {
  std::size_t first = 0;
  std::size_t second = 0;
  Cell intersection = Cell::interval(0, 0);
  std::vector<Cell> difference;
};

struct SemiringReport {
  bool passed = true;
  std::vector<SemiringPairCheck> pairs;
  std::vector<std::string> failures;
};

/// Verifies on every ordered pair (A, B) of the family that A n B is a cell
/// of the space and that A \ B splits into finitely many pairwise disjoint
/// cells of the space, with mu(A) = mu(A n B) + sum mu(pieces) and pointwise
/// coverage on the refinement samples.
inline SemiringReport semiring_check(const std::vector<Cell>& cells, const MeasureSpace& space) {
  SemiringReport report;
  auto fail = [&](std::size_t i, std::size_t j, const std::string& what) {
    report.passed = false;
    report.failures.push_back("pair (" + cells[i].str() + ", " + cells[j].str() + "): " + what);
  };
  for (const auto& c : cells) space.require_owns(c);
  for (std::size_t i = 0; i < cells.size(); ++i) {
    for (std::size_t j = 0; j < cells.size(); ++j) {
      const Cell& a = cells[i];
      const Cell& b = cells[j];
      SemiringPairCheck entry{i, j, a.intersect(b), a.minus(b)};
      if (!space.owns(entry.intersection)) fail(i, j, "intersection leaves the semiring");
      Rational total = space.measure(entry.intersection);
      for (std::size_t p = 0; p < entry.difference.size(); ++p) {
        const Cell& piece = entry.difference[p];
        if (!space.owns(piece)) {
          fail(i, j, "difference piece leaves the semiring");
          continue;
        }
        total += space.measure(piece);
        if (piece.intersect(a) != piece) fail(i, j, "difference piece " + piece.str() + " not inside A");
        if (!piece.intersect(b).empty()) fail(i, j, "difference piece " + piece.str() + " meets B");
        for (std::size_t q = p + 1; q < entry.difference.size(); ++q)
          if (!piece.intersect(entry.difference[q]).empty()) fail(i, j, "difference pieces overlap");
      }
      if (total != space.measure(a)) fail(i, j, "finite additivity fails: " + total.str() + " != " + space.measure(a).str());
      std::vector<Cell> family{a, b};
      for (const auto& pt : sample_points(space, family)) {
        int hits = entry.intersection.contains(pt) ? 1 : 0;
        for (const auto& piece : entry.difference) hits += piece.contains(pt) ? 1 : 0;
        if (hits != (a.contains(pt) ? 1 : 0)) fail(i, j, "decomposition does not cover A exactly at " + pt.str());
      }
      report.pairs.push_back(std::move(entry));
    }
  }
  return report;
}

/// Lazily enumerated countable cover by cells, with its running total
/// measure.  A finite cover is a stream that ends.
class NullCover {
 public:
  NullCover(MeasureSpace space, LazyStream<Cell>::Generator gen)
      : space_(std::move(space)), cells_(std::move(gen)) {}

  static NullCover empty(MeasureSpace space) {
    return NullCover(std::move(space), [](std::size_t) -> std::optional<Cell> { return std::nullopt; });
  }

  static NullCover finite(MeasureSpace space, std::vector<Cell> cells) {
    for (const auto& c : cells) space.require_owns(c);
    return NullCover(std::move(space), [cs = std::move(cells)](std::size_t n) -> std::optional<Cell> {
      if (n < cs.size()) return cs[n];
      return std::nullopt;
    });
  }

  const MeasureSpace& space() const { return space_; }

  /// nullptr past the end of a finite cover.
  const Cell* cell(std::size_t n) const {
    const Cell* c = cells_.get(n);
    if (c) space_.require_owns(*c);
    return c;
  }

  /// sum of mu(cell_k) over k <= n; non-decreasing in n.
  Rational partial_total(std::size_t n) const {
    Rational total;
    for (std::size_t k = 0; k <= n; ++k) {
      const Cell* c = cell(k);
      if (!c) break;
      total += space_.measure(*c);
    }
    return total;
  }

  /// Index of the first cell containing p, searching cells 0..limit.
  std::optional<std::size_t> first_covering(const Point& p, std::size_t limit) const {
    for (std::size_t k = 0; k <= limit; ++k) {
      const Cell* c = cell(k);
      if (!c) break;
      if (c->contains(p)) return k;
    }
    return std::nullopt;
  }

 private:
  MeasureSpace space_;
  LazyStream<Cell> cells_;
};

inline Rational null_cover_bound(const NullCover& cover, std::size_t n) { return cover.partial_total(n); }

}  // namespace riesz
