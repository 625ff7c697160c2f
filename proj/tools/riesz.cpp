// riesz: command-line front end.  Exit codes: 0 success, 1 claim failure or
// rejected input, 2 usage error.

#include "riesz/riesz.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

namespace {

using namespace riesz;

constexpr int kOk = 0;
constexpr int kClaimFailure = 1;
constexpr int kUsage = 2;

std::size_t env_budget(std::size_t fallback) {
  const char* v = std::getenv("RIESZ_BUDGET");
  if (!v || !*v) return fallback;
  try {
    long n = std::stol(v);
    if (n >= 1) return static_cast<std::size_t>(n);
  } catch (const std::exception&) {
  }
  std::cerr << "ignoring RIESZ_BUDGET=" << v << "\n";
  return fallback;
}

std::string bounds_str(const IntegralBounds& b) {
  if (b.exact()) return b.lower.str();
  return "[" + b.lower.str() + ", " + b.upper.str() + "]";
}

template <class T, class F>
void print_ladder(const std::string& label, const std::vector<T>& xs, F str) {
  std::cout << label << ":";
  const std::size_t n = xs.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (n > 10 && i == 5) {
      std::cout << " ...";
      i = n - 4;
      continue;
    }
    std::cout << " " << i << "=" << str(xs[i]);
  }
  std::cout << "\n";
}

void print_rationals(const std::string& label, const std::vector<Rational>& xs) {
  print_ladder(label, xs, [](const Rational& r) { return r.str(); });
}

int cmd_integrate(const std::string& path, std::size_t budget) {
  io::Document d = io::load_document(path);
  if (d.function && d.function->kind == io::R1Spec::Kind::step && !d.pos && !d.neg) {
    StepFunction f = io::document_step(d);
    std::cout << f.str() << "\n";
    std::cout << "integral = " << f.integral() << "\n";
    return kOk;
  }
  R2Function f = io::document_function(d);
  IntegralBounds b = f.bounds(budget);
  std::cout << "integral = " << bounds_str(b) << (b.exact() ? "" : " (bounds at index " + std::to_string(budget) + ")")
            << "\n";
  return kOk;
}

int cmd_r1(const std::string& path, std::size_t budget, std::size_t window, const std::string& threshold) {
  io::Document d = io::load_document(path);
  if (!d.function) throw ParseError("r1 needs a step, stream, chi_prefix or table spec");
  R1Function f = d.function->build(d.require_space());
  IntegralEstimate e = integral_r1(f, budget, window, Rational::parse(threshold));
  print_rationals("partials", e.partials);
  std::cout << "estimate: " << e.str() << "\n";
  return kOk;
}

int cmd_r2_make(const std::string& path, std::size_t budget) {
  io::Document d = io::load_document(path);
  try {
    R2Function f = io::document_function(d);
    auto v = f.integral();
    std::cout << "finite side: " << to_string(f.finite_side()) << "\n";
    std::cout << "integral = " << (v ? v->str() : bounds_str(f.bounds(budget))) << "\n";
    if (auto s = f.as_step()) std::cout << "function: " << s->str() << "\n";
    return kOk;
  } catch (const DefinednessError& e) {
    std::cout << "DefinednessError: " << e.what() << "\n";
    return kClaimFailure;
  }
}

int cmd_beppo_levi(const std::string& path, std::size_t horizon) {
  io::Document d = io::load_document(path);
  BeppoLeviOptions o;
  o.horizon = horizon;
  if (d.declared) o.declared_limit = d.declared->eval(0, 0);
  R2Sequence seq = make_r2_sequence([d](std::size_t n) { return io::sequence_term(d, n); });
  BeppoLeviResult r = generalized_beppo_levi(seq, o);
  const BeppoLeviReport& rep = r.report;
  print_ladder("ladder", rep.ladder, [](const auto& v) { return v ? v->str() : std::string("?"); });
  std::cout << "ladder non-decreasing: " << (rep.ladder_non_decreasing ? "yes" : "no") << "\n";
  std::cout << "exact monotonicity checks: " << rep.exact_monotone_checks << "\n";
  if (rep.first_lower_bounded) std::cout << "first term with integral > -inf: " << *rep.first_lower_bounded << "\n";
  if (!rep.h_integrals.empty()) {
    print_rationals("integral of h_m", rep.h_integrals);
    std::cout << "h_m integrals <= 1: " << (rep.h_bounded_by_one ? "yes" : "no") << "\n";
  }
  if (rep.declared_limit)
    std::cout << "declared limit " << rep.declared_limit->str()
              << (rep.declared_consistent ? " consistent with the ladder" : " CONTRADICTED by the ladder") << "\n";
  if (rep.construction_note) std::cout << "note: " << *rep.construction_note << "\n";
  if (rep.rejection) {
    std::cout << "rejected: " << *rep.rejection << "\n";
    return kClaimFailure;
  }
  std::cout << "limit: " << r.limit->str() << "\n";
  bool ok = rep.h_bounded_by_one && rep.declared_consistent && rep.ladder_non_decreasing;
  return ok ? kOk : kClaimFailure;
}

L1Sequence l1_sequence(const io::Document& d) {
  return make_l1_sequence([d](std::size_t n) {
    auto c = l1_check(io::sequence_term(d, n));
    if (!c) throw DomainError("term " + std::to_string(n) + " is not certified integrable");
    return *c;
  });
}

void print_fatou(const std::string& prefix, const FatouReport& r) {
  print_ladder(prefix + "integral of f_n", r.f_integrals, bounds_str);
  print_ladder(prefix + "integral of h_n = min f_k (n <= k <= horizon)", r.h_integrals, bounds_str);
  print_ladder(prefix + "min of integral f_k (n <= k <= horizon)", r.tail_inf, [](const auto& v) { return v.str(); });
  std::cout << prefix << "h ladder non-decreasing: " << (r.h_non_decreasing ? "yes" : "no") << "\n";
  std::cout << prefix << "integral h_n <= min integral f_k at every n: " << (r.inequality_holds ? "yes" : "no")
            << (r.strict_somewhere ? " (strict somewhere)" : "") << (r.equality_everywhere ? " (equality)" : "")
            << "\n";
}

int cmd_fatou(const std::string& path, std::size_t horizon) {
  io::Document d = io::load_document(path);
  FatouReport r = fatou_check(l1_sequence(d), horizon);
  if (r.rejection) {
    std::cout << "rejected: " << *r.rejection << "\n";
    return kClaimFailure;
  }
  print_fatou("", r);
  return r.inequality_holds && r.h_non_decreasing ? kOk : kClaimFailure;
}

int cmd_dominated(const std::string& path, std::size_t horizon) {
  io::Document d = io::load_document(path);
  if (!d.bound) throw ParseError("dominated needs a 'bound' line");
  auto g = l1_check(R2Function::from_r1(d.bound->build(d.require_space())));
  if (!g) throw DomainError("bound is not certified integrable");
  DominatedReport r = dominated_check(l1_sequence(d), *g, horizon);
  if (r.rejection) {
    std::cout << "rejected: " << *r.rejection << "\n";
    return kClaimFailure;
  }
  print_ladder("integral of f_n", r.f_integrals, bounds_str);
  print_ladder("lower squeeze (integral of min f_k)", r.squeeze_lower, [](const auto& v) { return v.str(); });
  print_ladder("upper squeeze (integral of max f_k)", r.squeeze_upper, [](const auto& v) { return v.str(); });
  std::cout << "squeeze holds at every index: " << (r.squeeze_holds ? "yes" : "no") << "\n";
  return r.squeeze_holds ? kOk : kClaimFailure;
}

int cmd_measure(const std::string& path, std::size_t budget) {
  io::Document d = io::load_document(path);
  MeasurableSet a = io::document_set(d);
  MeasureValue m = measure_of(a, budget);
  std::cout << "set: " << a.str() << "\n";
  if (!m.partials.empty()) print_rationals("partials", m.partials);
  std::cout << "measure = " << (m.exact ? m.exact->str() : bounds_str(m.bounds)) << "\n";
  return kOk;
}

int cmd_sigma_ops(const std::string& pa, const std::string& pb) {
  MeasurableSet a = io::document_set(io::load_document(pa));
  MeasurableSet b = io::document_set(io::load_document(pb));
  auto show = [](const std::string& name, const MeasurableSet& s) {
    MeasureValue m = measure_of(s);
    std::cout << name << ": " << s.str() << "  measure " << (m.exact ? m.exact->str() : bounds_str(m.bounds)) << "\n";
    return m;
  };
  MeasureValue ma = show("A", a);
  MeasureValue mb = show("B", b);
  MeasureValue md = show("A \\ B", set_difference(a, b));
  MeasureValue mu = show("A u B", set_union(a, b));
  MeasureValue mi = show("A n B", set_intersection(a, b));
  if (ma.exact && mb.exact && mu.exact && mi.exact && md.exact) {
    bool add = ext_add(*mu.exact, *mi.exact) == ext_add(*ma.exact, *mb.exact);
    bool diff = ext_add(*md.exact, *mi.exact) == std::optional<ExtendedRational>(*ma.exact);
    std::cout << "mu(A u B) + mu(A n B) = mu(A) + mu(B): " << (add ? "yes" : "NO") << "\n";
    std::cout << "mu(A \\ B) + mu(A n B) = mu(A): " << (diff ? "yes" : "NO") << "\n";
    return add && diff ? kOk : kClaimFailure;
  }
  return kOk;
}

MeasureSpace spaces_option(const std::string& spec) {
  auto comma = spec.find(',');
  if (comma == std::string::npos) throw ParseError("--spaces expects two comma-separated spaces");
  return MeasureSpace::product(io::Parser::parse_space(spec.substr(0, comma)),
                               io::Parser::parse_space(spec.substr(comma + 1)));
}

int cmd_fubini(const std::string& path, const std::string& spaces, std::size_t budget) {
  io::Document d = io::load_document(path);
  if (!spaces.empty()) {
    MeasureSpace s = spaces_option(spaces);
    if (d.space && !(*d.space == s)) throw ParseError("--spaces contradicts the file's space line");
    d.space = s;
  }
  if (!d.require_space().is_product()) throw ParseError("fubini needs a product space");
  FubiniReport r;
  if (d.function && d.function->kind == io::R1Spec::Kind::step && !d.pos && !d.neg) {
    StepFunction phi = io::document_step(d);
    std::cout << phi.str() << "\n";
    r = fubini_step(phi);
  } else if (d.pos || d.neg) {
    const MeasureSpace& s = d.require_space();
    r = fubini_r2(d.pos ? d.pos->build(s) : R1Function::zero(s), d.neg ? d.neg->build(s) : R1Function::zero(s), budget);
  } else {
    r = fubini_r1(io::document_function(d).pos(), budget);
  }
  std::cout << "double integral = " << bounds_str(r.double_integral) << "\n";
  std::cout << "iterated dy dx = " << bounds_str(r.iterated_xy) << "\n";
  std::cout << "iterated dx dy = " << bounds_str(r.iterated_yx) << "\n";
  if (!r.double_ladder.empty() && r.double_ladder.size() > 1) print_rationals("ladder", r.double_ladder);
  if (!r.note.empty()) std::cout << "note: " << r.note << "\n";
  std::cout << "verdict: " << to_string(r.verdict) << "\n";
  return r.verdict == FubiniVerdict::undefined ? kClaimFailure : kOk;
}

int cmd_counterexample(long window) {
  CountingCounterexample c = counting_counterexample(window);
  std::cout << "window [-" << window << ", " << window << "]^2 on Z x Z, f = 1 on x = y + 1, -1 on x = y - 1\n";
  std::cout << "iterated dx dy = " << c.iterated_xy << "\n";
  std::cout << "iterated dy dx = " << c.iterated_yx << "\n";
  std::cout << "integral of f+ on the window = " << c.positive_part << "\n";
  std::cout << "integral of f- on the window = " << c.negative_part << "\n";
  std::cout << "integral of |f| on the window = " << c.absolute << "\n";
  std::cout << "verdict: " << to_string(c.verdict) << " (both parts grow with the window; the double integral is undefined)\n";
  bool ok = c.iterated_xy.is_zero() && c.iterated_yx.is_zero();
  return ok ? kOk : kClaimFailure;
}

int cmd_gallery(const std::string& id, const gallery::Params& p) {
  if (id == "list") {
    for (const auto& [name, build] : gallery::entries()) std::cout << name << "\n";
    return kOk;
  }
  if (!gallery::entries().count(id)) {
    std::cerr << "unknown gallery entry '" << id << "'; try 'riesz gallery list'\n";
    return kUsage;
  }
  gallery::Report r = gallery::run(id, p);
  std::cout << r.str();
  return r.ok() ? kOk : kClaimFailure;
}

int cmd_selftest(std::uint64_t seed, int rounds) {
  bool ok = true;
  for (const auto& r : run_selftest(seed, rounds)) {
    std::cout << (r.ok ? "[PASS] " : "[FAIL] ") << r.name << (r.detail.empty() ? "" : ": " + r.detail) << "\n";
    ok = ok && r.ok;
  }
  return ok ? kOk : kClaimFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact integration with step functions, monotone limits and their differences"};
  app.require_subcommand(1);
  std::function<int()> action;
  const std::size_t default_budget = env_budget(100);

  std::string file, file_b, threshold = "1000000", spaces, gallery_id, alpha = "1";
  std::size_t budget = default_budget, window = 8, horizon = default_budget;
  long cwindow = 5;
  std::uint64_t seed = 1;
  int rounds = 100;
  gallery::Params gp;
  gp.horizon = default_budget;

  auto* integrate = app.add_subcommand("integrate", "integral of a step function or function file");
  integrate->add_option("file", file, "function file")->required();
  integrate->add_option("--budget", budget, "stream index used for bounds");
  integrate->callback([&] { action = [&] { return cmd_integrate(file, budget); }; });

  auto* r1 = app.add_subcommand("r1", "partial ladder and integral estimate of a monotone stream");
  r1->add_option("file", file, "stream file")->required();
  r1->add_option("--budget", budget, "number of stream elements");
  r1->add_option("--window", window, "stabilization window");
  r1->add_option("--threshold", threshold, "partial above which the integral counts as certified infinite");
  r1->callback([&] { action = [&] { return cmd_r1(file, budget, window, threshold); }; });

  auto* r2 = app.add_subcommand("r2", "differences of monotone limits");
  r2->require_subcommand(1);
  auto* make = r2->add_subcommand("make", "build pos - neg and report its integral");
  make->add_option("file", file, "file with pos and neg lines")->required();
  make->callback([&] { action = [&] { return cmd_r2_make(file, budget); }; });

  auto* bl = app.add_subcommand("beppo-levi", "monotone limit of a sequence of differences");
  bl->add_option("file", file, "sequence file")->required();
  bl->add_option("--horizon", horizon, "last term examined");
  bl->callback([&] { action = [&] { return cmd_beppo_levi(file, horizon); }; });

  auto* fatou = app.add_subcommand("fatou", "Fatou inequality ladder for nonnegative integrable terms");
  fatou->add_option("file", file, "sequence file")->required();
  fatou->add_option("--horizon", horizon, "last term examined");
  fatou->callback([&] { action = [&] { return cmd_fatou(file, horizon); }; });

  auto* dom = app.add_subcommand("dominated", "dominated convergence squeeze");
  dom->add_option("file", file, "sequence file with a bound line")->required();
  dom->add_option("--horizon", horizon, "last term examined");
  dom->callback([&] { action = [&] { return cmd_dominated(file, horizon); }; });

  auto* measure = app.add_subcommand("measure", "measure of a set");
  measure->add_option("file", file, "set file")->required();
  measure->add_option("--budget", budget, "stream elements for stream-backed sets");
  measure->callback([&] { action = [&] { return cmd_measure(file, budget); }; });

  auto* sigma = app.add_subcommand("sigma-ops", "difference, union and intersection of two sets");
  sigma->add_option("a", file, "first set file")->required();
  sigma->add_option("b", file_b, "second set file")->required();
  sigma->callback([&] { action = [&] { return cmd_sigma_ops(file, file_b); }; });

  auto* fub = app.add_subcommand("fubini", "double and iterated integrals on a product");
  fub->add_option("file", file, "function file")->required();
  fub->add_option("--spaces", spaces, "factor spaces, e.g. interval,counting");
  fub->add_option("--budget", budget, "stream horizon");
  fub->callback([&] { action = [&] { return cmd_fubini(file, spaces, budget); }; });

  auto* cex = app.add_subcommand("fubini-counterexample", "counting-measure counterexample on Z x Z");
  cex->add_option("--window", cwindow, "window half-width N")->check(CLI::NonNegativeNumber);
  cex->callback([&] { action = [&] { return cmd_counterexample(cwindow); }; });

  auto* gal = app.add_subcommand("gallery", "worked examples with provenance-tagged claims");
  gal->add_option("id", gallery_id, "entry id, or 'list'")->required();
  gal->add_option("--depth", gp.depth, "weir-set depth");
  gal->add_option("--alpha", alpha, "mu-alpha parameter (rational or inf)");
  gal->add_option("--window", gp.window, "window size")->check(CLI::NonNegativeNumber);
  gal->callback([&] {
    action = [&] {
      gp.alpha = ExtendedRational::parse(alpha);
      return cmd_gallery(gallery_id, gp);
    };
  });

  auto* self = app.add_subcommand("selftest", "randomized invariant suite and every gallery entry");
  self->add_option("--seed", seed, "random seed");
  self->add_option("--rounds", rounds, "cases per invariant");
  self->callback([&] { action = [&] { return cmd_selftest(seed, rounds); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }
  try {
    return action();
  } catch (const ParseError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kClaimFailure;
  }
}
