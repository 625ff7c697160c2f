#pragma once

// Text formats for spaces, step functions, streams, sequences and sets.
//
//   # comment
//   space product(interval, counting)
//   step { [0, 2) x {a}: 2, [0, 1) x {a, b}: -1 }
//
// A document holds `space`, an optional bare function spec, and optional
// `pos`, `neg`, `bound`, `declared`, `set` and `union` statements.  Function
// specs are
//
//   step { CELL: EXPR, ... }
//   stream { CELL: EXPR, ... } [limit EXT]
//   chi_prefix(EXPR, EXPR) [limit EXT]
//   table(step {...}; step {...}) then stream {...} [limit EXT]
//
// Expressions use + - * / ^ and parentheses over integers and the index
// variables n and k.  In a sequence file n is the term index and k the
// stream index; in a single-function file both name the stream index.

#include "riesz/measurable.hpp"

#include <cctype>
#include <fstream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace riesz::io {

/// Rational expression in n and k.
class Expr {
 public:
  static Expr constant(Rational v) {
    Expr e;
    e.node_ = std::make_shared<Node>(Node{Op::lit, std::move(v), 0, nullptr, nullptr});
    return e;
  }

  Rational eval(const Rational& n, const Rational& k) const { return eval(*node_, n, k); }

  bool uses(char var) const { return uses(*node_, var); }

 private:
  enum class Op { lit, var, add, sub, mul, div, pow, neg };
  struct Node {
    Op op;
    Rational value;
    char var;
    std::shared_ptr<const Node> a, b;
  };

  static Rational eval(const Node& x, const Rational& n, const Rational& k) {
    switch (x.op) {
      case Op::lit: return x.value;
      case Op::var: return x.var == 'n' ? n : k;
      case Op::add: return eval(*x.a, n, k) + eval(*x.b, n, k);
      case Op::sub: return eval(*x.a, n, k) - eval(*x.b, n, k);
      case Op::mul: return eval(*x.a, n, k) * eval(*x.b, n, k);
      case Op::div: return eval(*x.a, n, k) / eval(*x.b, n, k);
      case Op::neg: return -eval(*x.a, n, k);
      case Op::pow: {
        Rational base = eval(*x.a, n, k);
        Rational e = eval(*x.b, n, k);
        if (!e.is_integer()) throw DomainError("non-integer exponent " + e.str());
        long m = e.numerator().get_si();
        Rational out(1);
        for (long i = 0; i < (m < 0 ? -m : m); ++i) out *= base;
        return m < 0 ? Rational(1) / out : out;
      }
    }
    return Rational(0);
  }

  static bool uses(const Node& x, char var) {
    if (x.op == Op::var) return x.var == var;
    return (x.a && uses(*x.a, var)) || (x.b && uses(*x.b, var));
  }

  static Expr make(Op op, Expr a, Expr b = {}) {
    Expr e;
    e.node_ = std::make_shared<Node>(Node{op, Rational(0), 0, a.node_, b.node_});
    return e;
  }

  std::shared_ptr<const Node> node_;
  friend class Parser;
};

/// inf, -inf or an expression.
struct ExtExpr {
  std::optional<ExtendedRational> infinite;
  Expr finite;

  ExtendedRational eval(const Rational& n, const Rational& k) const {
    if (infinite) return *infinite;
    return ExtendedRational(finite.eval(n, k));
  }
};

struct CellTemplate {
  enum class Kind { interval, finite_set, rectangle };
  Kind kind = Kind::interval;
  Expr lo, hi;
  std::vector<PointId> ids;
  std::shared_ptr<const CellTemplate> left, right;

  Cell instantiate(const Rational& n, const Rational& k) const {
    switch (kind) {
      case Kind::interval: {
        Rational a = lo.eval(n, k);
        Rational b = hi.eval(n, k);
        if (b < a) return Cell::interval(a, a);
        return Cell::interval(std::move(a), std::move(b));
      }
      case Kind::finite_set: return Cell::finite_set(ids);
      case Kind::rectangle: return Cell::rectangle(left->instantiate(n, k), right->instantiate(n, k));
    }
    throw DomainError("bad cell template");
  }
};

struct StepTemplate {
  std::vector<std::pair<CellTemplate, Expr>> terms;

  StepFunction instantiate(const MeasureSpace& space, const Rational& n, const Rational& k) const {
    std::vector<Term> raw;
    for (const auto& [c, e] : terms) raw.push_back(Term{c.instantiate(n, k), e.eval(n, k)});
    return StepFunction::canonicalize(space, std::move(raw));
  }
};

/// A function spec: a step function or a stream, possibly with a limit.
struct R1Spec {
  enum class Kind { step, stream };
  Kind kind = Kind::step;
  std::vector<StepTemplate> table;  // explicit leading elements
  StepTemplate body;
  std::optional<ExtExpr> limit;

  /// The function for term index n (ignored by single-function files).
  R1Function build(const MeasureSpace& space, std::optional<std::size_t> term = std::nullopt) const {
    auto term_value = [term](std::size_t k) { return Rational(static_cast<long>(term ? *term : k)); };
    R1Function f = R1Function::zero(space);
    if (kind == Kind::step) {
      Rational n = term_value(0);
      f = R1Function::constant(body.instantiate(space, n, n));
    } else {
      R1Spec self = *this;
      f = R1Function::from_stream(space, [self, space, term_value](std::size_t k) {
        Rational kk(static_cast<long>(k));
        if (k < self.table.size()) return self.table[k].instantiate(space, term_value(k), kk);
        return self.body.instantiate(space, term_value(k), kk);
      });
    }
    if (limit) {
      Rational n = term_value(0);
      ExtendedRational v = limit->eval(n, n);
      if (kind == Kind::step) {
        if (!(v == ExtendedRational(f.step()->integral())))
          throw DeclarationError("limit " + v.str() + " contradicts step integral " + f.step()->integral().str());
      } else {
        f = f.with_declared_limit(v);
      }
    }
    return f;
  }
};

/// A parsed document.
struct Document {
  std::optional<MeasureSpace> space;
  std::optional<R1Spec> function;
  std::optional<R1Spec> pos, neg, bound;
  std::optional<ExtExpr> declared;
  std::optional<StepTemplate> set;
  std::optional<StepTemplate> union_members;
  std::optional<ExtExpr> union_limit;

  const MeasureSpace& require_space() const {
    if (!space) throw ParseError("document has no 'space' line");
    return *space;
  }
};

class Parser {
 public:
  explicit Parser(std::string_view text) : s_(strip_comments(text)) {}

  static Expr parse_expr(std::string_view text) {
    Parser p(text);
    Expr e = p.expr();
    p.expect_end();
    return e;
  }

  static MeasureSpace parse_space(std::string_view text) {
    Parser p(text);
    MeasureSpace s = p.space();
    p.expect_end();
    return s;
  }

  static StepTemplate parse_step_block(std::string_view text) {
    Parser p(text);
    StepTemplate t = p.block(true);
    p.expect_end();
    return t;
  }

  Document document() {
    Document d;
    while (!at_end()) {
      std::string kw = peek_word();
      if (kw == "space") {
        word();
        d.space = space();
      } else if (kw == "pos") {
        word();
        d.pos = r1_spec();
      } else if (kw == "neg") {
        word();
        d.neg = r1_spec();
      } else if (kw == "bound") {
        word();
        d.bound = r1_spec();
      } else if (kw == "declared") {
        word();
        d.declared = ext_expr();
      } else if (kw == "set") {
        word();
        d.set = block(false);
      } else if (kw == "union") {
        word();
        if (word() != "stream") fail("expected 'stream' after 'union'");
        d.union_members = block(true);
        if (peek_word() == "limit") {
          word();
          d.union_limit = ext_expr();
        }
      } else if (kw == "step" || kw == "stream" || kw == "chi_prefix" || kw == "table") {
        d.function = r1_spec();
      } else {
        fail("unknown statement '" + kw + "'");
      }
    }
    return d;
  }

 private:
  static std::string strip_comments(std::string_view text) {
    std::string out;
    bool comment = false;
    for (char c : text) {
      if (c == '#') comment = true;
      if (c == '\n') comment = false;
      if (!comment) out.push_back(c);
    }
    return out;
  }

  [[noreturn]] void fail(const std::string& what) const {
    std::size_t line = 1;
    for (std::size_t i = 0; i < pos_ && i < s_.size(); ++i)
      if (s_[i] == '\n') ++line;
    throw ParseError("line " + std::to_string(line) + ": " + what);
  }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool at_end() {
    skip_ws();
    return pos_ >= s_.size();
  }

  void expect_end() {
    if (!at_end()) fail("unexpected trailing text '" + s_.substr(pos_, 20) + "'");
  }

  char peek() {
    skip_ws();
    return pos_ < s_.size() ? s_[pos_] : '\0';
  }

  bool accept(char c) {
    if (peek() != c) return false;
    ++pos_;
    return true;
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  static bool word_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

  std::string peek_word() {
    skip_ws();
    std::size_t e = pos_;
    while (e < s_.size() && word_char(s_[e])) ++e;
    return s_.substr(pos_, e - pos_);
  }

  std::string word() {
    std::string w = peek_word();
    if (w.empty()) fail("expected a word");
    pos_ += w.size();
    return w;
  }

  MeasureSpace space() {
    std::string w = word();
    if (w == "interval") return MeasureSpace::interval_line();
    if (w == "counting" || w == "zero") {
      std::string ground = "X";
      if (accept('(')) {
        ground = word();
        expect(')');
      }
      return w == "counting" ? MeasureSpace::counting(ground) : MeasureSpace::zero(ground);
    }
    if (w == "product") {
      expect('(');
      MeasureSpace a = space();
      expect(',');
      MeasureSpace b = space();
      expect(')');
      return MeasureSpace::product(a, b);
    }
    fail("unknown space '" + w + "'");
  }

  // expr := term (('+'|'-') term)*
  Expr expr() {
    Expr e = term();
    for (;;) {
      if (accept('+')) e = Expr::make(Expr::Op::add, e, term());
      else if (accept('-')) e = Expr::make(Expr::Op::sub, e, term());
      else return e;
    }
  }

  Expr term() {
    Expr e = unary();
    for (;;) {
      if (accept('*')) e = Expr::make(Expr::Op::mul, e, unary());
      else if (accept('/')) e = Expr::make(Expr::Op::div, e, unary());
      else return e;
    }
  }

  Expr unary() {
    if (accept('-')) return Expr::make(Expr::Op::neg, unary());
    if (accept('+')) return unary();
    return power();
  }

  Expr power() {
    Expr base = atom();
    if (accept('^')) return Expr::make(Expr::Op::pow, base, unary());
    return base;
  }

  Expr atom() {
    char c = peek();
    if (c == '(') {
      ++pos_;
      Expr e = expr();
      expect(')');
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t e = pos_;
      while (e < s_.size() && std::isdigit(static_cast<unsigned char>(s_[e]))) ++e;
      Expr x = Expr::constant(Rational(mpz_class(s_.substr(pos_, e - pos_))));
      pos_ = e;
      return x;
    }
    if (c == 'n' || c == 'k') {
      std::string w = peek_word();
      if (w.size() == 1) {
        ++pos_;
        Expr x;
        x.node_ = std::make_shared<Expr::Node>(Expr::Node{Expr::Op::var, Rational(0), c, nullptr, nullptr});
        return x;
      }
    }
    fail("expected a number, n, k or '('");
  }

  ExtExpr ext_expr() {
    ExtExpr e;
    std::size_t save = pos_;
    bool negative = accept('-');
    if (peek_word() == "inf") {
      word();
      e.infinite = negative ? ExtendedRational::minus_infinity() : ExtendedRational::plus_infinity();
      return e;
    }
    pos_ = save;
    e.finite = expr();
    return e;
  }

  CellTemplate simple_cell() {
    CellTemplate c;
    if (accept('[')) {
      c.kind = CellTemplate::Kind::interval;
      c.lo = expr();
      expect(',');
      c.hi = expr();
      expect(')');
      return c;
    }
    if (accept('{')) {
      c.kind = CellTemplate::Kind::finite_set;
      while (!accept('}')) {
        skip_ws();
        std::size_t e = pos_;
        while (e < s_.size() && s_[e] != ',' && s_[e] != '}' && !std::isspace(static_cast<unsigned char>(s_[e]))) ++e;
        if (e == pos_) fail("empty element in finite set");
        c.ids.push_back(s_.substr(pos_, e - pos_));
        pos_ = e;
        accept(',');
      }
      return c;
    }
    fail("expected a cell '[lo, hi)' or '{...}'");
  }

  CellTemplate cell() {
    CellTemplate a = simple_cell();
    std::size_t save = pos_;
    if (peek_word() == "x") {
      word();
      CellTemplate r;
      r.kind = CellTemplate::Kind::rectangle;
      r.left = std::make_shared<CellTemplate>(std::move(a));
      r.right = std::make_shared<CellTemplate>(simple_cell());
      return r;
    }
    pos_ = save;
    return a;
  }

  // '{' (cell [':' expr]) (',' ...)* '}'.  Coefficients default to 1 when
  // not required.
  StepTemplate block(bool coefficients) {
    StepTemplate t;
    expect('{');
    if (accept('}')) return t;
    for (;;) {
      CellTemplate c = cell();
      Expr coeff = Expr::constant(Rational(1));
      if (accept(':')) coeff = expr();
      else if (coefficients) fail("expected ':' and a coefficient");
      t.terms.emplace_back(std::move(c), std::move(coeff));
      if (accept('}')) return t;
      expect(',');
    }
  }

  R1Spec r1_spec() {
    R1Spec r;
    std::string w = word();
    if (w == "step") {
      r.kind = R1Spec::Kind::step;
      r.body = block(true);
    } else if (w == "stream") {
      r.kind = R1Spec::Kind::stream;
      r.body = block(true);
    } else if (w == "chi_prefix") {
      r.kind = R1Spec::Kind::stream;
      expect('(');
      CellTemplate c;
      c.lo = expr();
      expect(',');
      c.hi = expr();
      expect(')');
      r.body.terms.emplace_back(std::move(c), Expr::constant(Rational(1)));
    } else if (w == "table") {
      r.kind = R1Spec::Kind::stream;
      expect('(');
      do {
        if (word() != "step") fail("table entries are 'step {...}'");
        r.table.push_back(block(true));
      } while (accept(';'));
      expect(')');
      if (word() != "then") fail("expected 'then' after table");
      if (word() != "stream") fail("expected 'stream' tail after table");
      r.body = block(true);
    } else {
      fail("expected step, stream, chi_prefix or table, got '" + w + "'");
    }
    if (peek_word() == "limit") {
      word();
      r.limit = ext_expr();
    }
    return r;
  }

  std::string s_;
  std::size_t pos_ = 0;
};

inline Document parse_document(std::string_view text) { return Parser(text).document(); }

inline std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline Document load_document(const std::string& path) { return parse_document(read_file(path)); }

/// The single function of a document: `pos`/`neg` when present, else the
/// bare function spec.
inline R2Function document_function(const Document& d) {
  const MeasureSpace& space = d.require_space();
  R2Function f = [&] {
    if (d.pos || d.neg) {
      R1Function p = d.pos ? d.pos->build(space) : R1Function::zero(space);
      R1Function n = d.neg ? d.neg->build(space) : R1Function::zero(space);
      return R2Function::make(std::move(p), std::move(n));
    }
    if (!d.function) throw ParseError("document defines no function");
    return R2Function::from_r1(d.function->build(space));
  }();
  if (d.declared) f = f.with_declared_integral(d.declared->eval(0, 0));
  return f;
}

inline StepFunction document_step(const Document& d) {
  if (!d.function || d.function->kind != R1Spec::Kind::step) throw ParseError("document has no 'step' block");
  return d.function->body.instantiate(d.require_space(), Rational(0), Rational(0));
}

/// Term n of a sequence document.
inline R2Function sequence_term(const Document& d, std::size_t n) {
  const MeasureSpace& space = d.require_space();
  if (d.pos || d.neg) {
    R1Function p = d.pos ? d.pos->build(space, n) : R1Function::zero(space);
    R1Function q = d.neg ? d.neg->build(space, n) : R1Function::zero(space);
    return R2Function::make(std::move(p), std::move(q));
  }
  if (!d.function) throw ParseError("sequence document defines no terms");
  return R2Function::from_r1(d.function->build(space, n));
}

inline MeasurableSet document_set(const Document& d) {
  const MeasureSpace& space = d.require_space();
  if (d.set) return MeasurableSet::from_step(d.set->instantiate(space, Rational(0), Rational(0)));
  if (d.union_members) {
    StepTemplate members = *d.union_members;
    SetSequence seq = make_set_sequence([members, space](std::size_t n) {
      Rational r(static_cast<long>(n));
      return MeasurableSet::from_step(members.instantiate(space, r, r));
    });
    std::optional<ExtendedRational> limit;
    if (d.union_limit) limit = d.union_limit->eval(0, 0);
    return disjoint_union(seq, limit);
  }
  if (d.function && d.function->kind == R1Spec::Kind::step) return MeasurableSet::from_step(document_step(d));
  throw ParseError("document defines no set");
}

}  // namespace riesz::io
