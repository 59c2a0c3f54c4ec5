#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

#include <json.hpp>

#include "levylab/harness.hpp"
#include "levylab/ladder.hpp"
#include "levylab/parallel.hpp"
#include "levylab/pathsim.hpp"
#include "levylab/tail_classes.hpp"
#include "scenario_detail.hpp"

namespace levylab::harness {
namespace {

using nlohmann::json;

constexpr double kRootMatch = 1e-8;

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(10);
  os << v;
  return os.str();
}

bool same_alpha(double a, double b) { return std::abs(a - b) <= kRootMatch * std::max(1.0, b); }

bool is_cp(const LevyModel& m) { return m.kind == ModelKind::CompoundPoissonDrift; }

bool has_tabulated(const LevyModel& m) {
  const auto tab = [](const JumpComponent& c) {
    return c.rate > 0.0 && std::holds_alternative<TabulatedLaw>(c.law.params());
  };
  return tab(m.up) || tab(m.down);
}

std::string catalog_problem(const LevyModel& m) {
  try {
    ladder::wh_factorize(m);
    return {};
  } catch (const LevyLabError& e) {
    return std::string("no Wiener-Hopf factorisation: ") + e.what();
  }
}

// Theorems 2 and 3 live in the regime E e^{alpha X_1} < 1 with alpha the
// exponential decay rate of the upward Levy measure.
void heavy_regime(const Scenario& s, std::vector<std::string>& out) {
  const LevyModel& m = s.model;
  if (!is_cp(m) || !(m.up.rate > 0.0)) {
    out.push_back("needs a compound Poisson model with upward jumps");
    return;
  }
  const MomentReport mom = exp_moment(m, s.alpha);
  if (mom.classification != MomentClass::Subcritical) {
    out.push_back("needs E exp(alpha X_1) < 1, found " + std::string(to_string(mom.classification)) +
                  " at alpha = " + fmt(s.alpha));
  }
  const double bound = psi_domain_bound(m);
  if (!same_alpha(s.alpha, bound)) {
    out.push_back("alpha must equal the decay rate " + fmt(bound) + " of the upward jumps");
  }
}

tails::Distribution tail_distribution(const Scenario& s) {
  const std::string kind = s.text("tail.kind");
  if (kind == "model_tail") {
    if (!(s.model.up.rate > 0.0)) throw DomainError("model_tail needs upward jumps");
    return tails::Distribution::beyond(s.model.up.law, s.real("tail.cutoff"));
  }
  const std::string law = kind == "exp" ? "exponential" : kind;
  return tails::Distribution::of(detail::parse_law(law, s.text("tail.params")));
}

double tilt_for(const LevyModel& model, const ladder::LadderExponentData& asc) {
  if (const auto root = cramer_root(model)) return *root;
  if (asc.finite_at_tail_rate) return asc.tail_rate;
  return 0.0;
}

// Present only when the ascending ladder is a pure-jump killed subordinator.
std::optional<ladder::FirstPassageTable> passage_table(const LevyModel& model,
                                                       const ladder::LadderExponentData& asc,
                                                       double x_max) {
  if (!asc.has_jumps() || asc.d != 0.0) return std::nullopt;
  return ladder::FirstPassageTable(asc, x_max + 1.0, tilt_for(model, asc));
}

const char* flag(bool ok) { return ok ? "1" : "0"; }

double max_of(const std::vector<double>& v) { return *std::max_element(v.begin(), v.end()); }

struct Outcome {
  bool pass = true;
  std::vector<CsvRow> rows;
  json details = json::object();
  std::vector<std::string> failures;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      failures.push_back(what);
    }
  }
};

Outcome run_analyze(const Scenario& s) {
  Outcome out;
  const LevyModel& m = s.model;
  const auto xs = s.reals("analyze.x");
  const double tol = s.real("analyze.tolerance");
  const double e0_tol = s.real("analyze.e0_tolerance");
  const double fact_tol = s.real("analyze.factorization_tolerance");

  const ladder::WienerHopf wh = ladder::wh_factorize(m);
  const auto& asc = wh.ascending;
  const auto& desc = wh.descending;
  const RegularityReport reg = classify_path_regularity(m);
  const auto root = cramer_root(m);
  const MomentReport mom = exp_moment(m, s.alpha);

  json& d = out.details;
  d["mean"] = m.mean();
  d["cramer_root"] = root ? json(*root) : json(nullptr);
  d["moment_class"] = to_string(mom.classification);
  d["moment_value"] = mom.value;
  d["path_case"] = to_string(reg.path_case);
  d["reg_up"] = reg.reg_up;
  d["reg_down"] = reg.reg_down;
  d["n_finite"] = reg.n_finite;
  d["n_mass"] = reg.n_mass ? json(*reg.n_mass) : json(nullptr);
  d["ascending"] = {{"q", asc.q}, {"d", asc.d}, {"jump_mass", asc.jump_mass}};
  d["descending"] = {{"q", desc.q}, {"d", desc.d}, {"jump_mass", desc.jump_mass}};
  d["kappa_hat_alpha"] = ladder::kappa_eval(desc, s.alpha);
  try {
    const auto tc = ladder::theorem_constants(m, s.alpha);
    d["kappa_neg_alpha"] = tc.kappa_neg_alpha;
    d["L"] = tc.L ? json(*tc.L) : json(nullptr);
    d["iglehart_factor"] = tc.iglehart_factor ? json(*tc.iglehart_factor) : json(nullptr);
  } catch (const LevyLabError& e) {
    d["theorem_constants"] = e.what();
  }

  // -psi(l) = kappa(-l) kappa_hat(l) on the common domain.
  double bound = std::min(psi_domain_bound(m), asc.tail_rate);
  if (!std::isfinite(bound)) bound = 4.0;
  double worst = 0.0;
  for (const double f : {0.25, 0.5, 0.75}) {
    const double l = f * bound;
    const double lhs = -psi_eval(m, l);
    const double rhs = ladder::kappa_eval(asc, -l) * ladder::kappa_eval(desc, l);
    worst = std::max(worst, std::abs(lhs - rhs) / std::max({std::abs(lhs), std::abs(rhs), 1e-300}));
  }
  d["factorization_residual"] = worst;
  out.require(worst < fact_tol, "factorisation residual " + fmt(worst));

  if (!(m.mean() < 0.0)) {
    out.details["first_passage"] = "process does not drift to -inf; P(tau_x < inf) = 1";
    for (const double x : xs) out.rows.push_back({x, 1.0, 0.0, 0, "analytic", 0, 1.0, "na"});
    return out;
  }

  const double x_top = max_of(xs);
  const auto pk = ladder::first_passage_function(m, x_top);
  const auto table = passage_table(m, asc, x_top);
  const double step = asc.d > 0.0 ? 1e-3 : (table ? table->step() : 1e-3);
  const ladder::RenewalGrid v = ladder::renewal_measure(asc, x_top + 1.0, step);
  json e0 = json::array();
  for (const double x : xs) {
    const double est = pk(x);
    const double dual = 1.0 - asc.q * v.at(x);
    const bool ok = std::abs(est - dual) <= tol;
    out.require(ok, "pk vs 1 - qV at x = " + fmt(x));
    out.rows.push_back({x, est, 0.0, 0, "analytic", 0, dual, flag(ok)});
    if (table) {
      const double r = table->e0_residual(x);
      e0.push_back({{"x", x}, {"residual", r}});
      out.require(r < e0_tol, "renewal residual at x = " + fmt(x));
    }
  }
  d["e0_residuals"] = e0;
  return out;
}

Outcome run_first_passage(const Scenario& s, unsigned threads) {
  Outcome out;
  const LevyModel& m = s.model;
  const auto xs = s.reals("first_passage.x");
  const std::uint64_t n = s.count("first_passage.n");
  const sim::Method method =
      s.text("first_passage.method") == "crude" ? sim::Method::crude : sim::Method::tilted;
  const double sigma = s.real("first_passage.sigma");
  const double max_rel_se = s.real("first_passage.max_rel_se");
  const double max_censored = s.real("first_passage.max_censored");
  const double e0_tol = s.real("first_passage.e0_tolerance");

  const auto wh = ladder::wh_factorize(m);
  const double x_top = max_of(xs);
  const auto pk = ladder::first_passage_function(m, x_top);
  const auto table = passage_table(m, wh.ascending, x_top);
  json rows = json::array();
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double x = xs[i];
    const std::uint64_t seed = detail::derive_seed(s.seed, "first_passage", i);
    const auto fp = sim::estimate_first_passage(m, x, n, seed, method, threads);
    const double target = pk(x);
    const double se = fp.estimate.std_error;
    const double rel_se = se / fp.estimate.value;
    const bool close = std::abs(fp.estimate.value - target) <= sigma * se;
    const bool precise = rel_se < max_rel_se;
    const bool uncensored = fp.censored_fraction <= max_censored;
    const bool ok = close && precise && uncensored;
    out.require(close, "estimate off the oracle at x = " + fmt(x));
    out.require(precise, "relative standard error " + fmt(rel_se) + " at x = " + fmt(x));
    out.require(uncensored, "censored fraction " + fmt(fp.censored_fraction) + " at x = " + fmt(x));
    json row = {{"x", x},
                {"z", se > 0.0 ? (fp.estimate.value - target) / se : 0.0},
                {"relative_se", rel_se},
                {"censored_fraction", fp.censored_fraction},
                {"bias_bound", fp.bias_bound},
                {"truncation_level", fp.truncation_level}};
    if (table) {
      const double r = table->e0_residual(x);
      row["e0_residual"] = r;
      out.require(r < e0_tol, "renewal residual at x = " + fmt(x));
    }
    rows.push_back(row);
    out.rows.push_back({x, fp.estimate.value, se, n, sim::to_string(method), seed, target,
                        flag(ok)});
  }
  out.details["rows"] = rows;
  return out;
}

Outcome run_identity_b(const Scenario& s, unsigned threads) {
  Outcome out;
  const auto xs = s.reals("identity_b.x");
  const std::uint64_t n = s.count("identity_b.n");
  const double threshold = s.real("identity_b.threshold");
  json rows = json::array();
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const std::uint64_t seed = detail::derive_seed(s.seed, "identity_b", i);
    const auto r = sim::identity_b_check(s.model, xs[i], n, seed, threads);
    const bool ok = std::abs(r.residual) < threshold;
    out.require(ok, "studentized residual " + fmt(r.residual) + " at x = " + fmt(xs[i]));
    rows.push_back({{"x", xs[i]}, {"residual", r.residual}});
    out.rows.push_back({xs[i], r.lhs, r.std_error, r.n, "paired", seed, r.rhs, flag(ok)});
  }
  out.details["rows"] = rows;
  return out;
}

Outcome run_tailclass(const Scenario& s) {
  Outcome out;
  const auto xs = s.reals("tailclass.x");
  const double probe = s.real("tailclass.probe");
  const double tol = s.real("tailclass.tolerance");
  const std::string expect = s.text("tailclass.expect");
  const tails::Distribution g = tail_distribution(s);
  const tails::ClassReport rep = tails::salpha_check(g, s.alpha, xs);
  const double target = 2.0 * rep.mgf_integral;

  json& d = out.details;
  d["distribution"] = g.name();
  d["verdict"] = tails::to_string(rep.verdict);
  d["reason"] = rep.reason;
  d["alpha_hat"] = rep.alpha_hat;
  d["max_profile_dev"] = rep.max_profile_dev;
  d["potter_A"] = rep.potter_A ? json(*rep.potter_A) : json(nullptr);
  d["mgf_integral"] = std::isfinite(rep.mgf_integral) ? json(rep.mgf_integral) : json("inf");

  if (expect != "any") {
    const tails::Verdict wanted =
        expect == "member" ? tails::Verdict::member : tails::Verdict::non_member;
    out.require(rep.verdict == wanted,
                std::string("verdict ") + tails::to_string(rep.verdict) + ", expected " + expect);
  }
  json devs = json::array();
  for (const auto& p : rep.probes) {
    std::string pass = "na";
    if (expect == "member" && p.x == probe) {
      const bool ok = std::isfinite(target) && std::abs(p.conv_ratio - target) <= tol * target;
      out.require(ok, "convolution ratio " + fmt(p.conv_ratio) + " at x = " + fmt(p.x));
      pass = flag(ok);
    }
    devs.push_back({{"x", p.x}, {"profile_dev", p.profile_dev}});
    out.rows.push_back({p.x, p.conv_ratio, 0.0, 0, "convolution", 0,
                        std::isfinite(target) ? target : 0.0, pass});
  }
  d["profile"] = devs;
  if (expect == "member" && std::find(xs.begin(), xs.end(), probe) == xs.end()) {
    out.require(false, "probe x = " + fmt(probe) + " is not on the grid");
  }
  return out;
}

Outcome run_theorem1(const Scenario& s, unsigned threads) {
  Outcome out;
  const auto xs = s.reals("theorem1.x");
  const std::uint64_t budget = s.count("theorem1.excursions");
  sim::Theorem1Options opt;
  opt.sigma_band = s.real("theorem1.sigma");
  opt.asymptotic_from = s.real("theorem1.asymptotic_from");
  opt.threads = threads;
  const std::uint64_t seed = detail::derive_seed(s.seed, "theorem1", 0);
  const auto table = sim::theorem1_experiment(s.model, s.alpha, xs, budget, seed, opt);
  json rows = json::array();
  for (const auto& r : table.rows) {
    out.rows.push_back({r.x, r.ratio, r.std_error, budget, "excursion", seed, r.target,
                        r.asymptotic ? flag(r.within) : "na"});
    rows.push_back({{"x", r.x},
                    {"excursion_tail", r.excursion_tail.value},
                    {"excursion_tail_se", r.excursion_tail.std_error},
                    {"first_passage", r.first_passage}});
  }
  out.details["rows"] = rows;
  out.details["trend_ok"] = table.trend_ok;
  out.require(table.within_all, "ratio outside the band at some asymptotic x");
  out.require(table.trend_ok, "deviation trend increases");
  return out;
}

bool gaps_shrink(const std::vector<double>& gaps) {
  for (std::size_t i = 1; i < gaps.size(); ++i) {
    if (gaps[i] > gaps[i - 1]) return false;
  }
  return true;
}

Outcome run_theorem2(const Scenario& s) {
  Outcome out;
  const LevyModel& m = s.model;
  auto xs = s.reals("theorem2.x");
  std::sort(xs.begin(), xs.end());
  const double tol = s.real("theorem2.tolerance");
  const double fwd_tol = s.real("theorem2.forward_tolerance");
  const auto wh = ladder::wh_factorize(m);
  const double target = ladder::kappa_eval(wh.descending, s.alpha);
  std::vector<double> gaps;
  json fwd = json::array();
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double x = xs[i];
    const double ratio =
        std::exp(log_pi_tail(m, x, Side::up) - ladder::log_vigon_inverse(m, wh.descending, x));
    const double gap = std::abs(ratio - target);
    gaps.push_back(gap);
    std::string pass = "na";
    if (i + 1 == xs.size()) {
      const bool ok = gap <= tol * target;
      out.require(ok, "ratio " + fmt(ratio) + " at x = " + fmt(x) + " outside " + fmt(tol));
      pass = flag(ok);
    }
    const double r = ladder::vigon_forward_residual(m, wh.ascending, wh.descending, x);
    fwd.push_back({{"x", x}, {"residual", r}});
    out.require(r < fwd_tol, "forward residual " + fmt(r) + " at x = " + fmt(x));
    out.rows.push_back({x, ratio, 0.0, 0, "quadrature", 0, target, pass});
  }
  out.details["forward_residuals"] = fwd;
  out.require(gaps_shrink(gaps), "gap to the limit grows along x");
  return out;
}

Outcome run_theorem3(const Scenario& s) {
  Outcome out;
  const LevyModel& m = s.model;
  auto xs = s.reals("theorem3.x");
  std::sort(xs.begin(), xs.end());
  const double tol = s.real("theorem3.tolerance");
  const double e0_tol = s.real("theorem3.e0_tolerance");
  const auto tc = ladder::theorem_constants(m, s.alpha);
  if (!tc.L) throw NotApplicable("limit constant undefined for this model");
  const double target = *tc.L;
  out.details["L"] = target;
  out.details["q"] = tc.q;
  out.details["kappa_hat_alpha"] = tc.kappa_hat_alpha;
  out.details["kappa_neg_alpha"] = tc.kappa_neg_alpha;

  const auto wh = ladder::wh_factorize(m);
  const double x_top = xs.back();
  const auto pk = ladder::first_passage_function(m, x_top);
  const auto table = passage_table(m, wh.ascending, x_top);
  std::vector<double> gaps;
  json e0 = json::array();
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double x = xs[i];
    const double ratio = pk(x) / std::exp(log_pi_tail(m, x, Side::up));
    const double gap = std::abs(ratio - target);
    gaps.push_back(gap);
    std::string pass = "na";
    if (i + 1 == xs.size()) {
      const bool ok = gap <= tol * target;
      out.require(ok, "ratio " + fmt(ratio) + " at x = " + fmt(x) + " outside " + fmt(tol));
      pass = flag(ok);
    }
    if (table) {
      const double r = table->e0_residual(x);
      e0.push_back({{"x", x}, {"residual", r}});
      out.require(r < e0_tol, "renewal residual at x = " + fmt(x));
    }
    out.rows.push_back({x, ratio, 0.0, 0, "renewal", 0, target, pass});
  }
  out.details["e0_residuals"] = e0;
  out.require(gaps_shrink(gaps), "gap to the limit grows along x");
  return out;
}

Outcome dispatch(const Scenario& s, const std::string& e, unsigned threads) {
  if (e == "analyze") return run_analyze(s);
  if (e == "first_passage") return run_first_passage(s, threads);
  if (e == "identity_b") return run_identity_b(s, threads);
  if (e == "tailclass") return run_tailclass(s);
  if (e == "theorem1") return run_theorem1(s, threads);
  if (e == "theorem2") return run_theorem2(s);
  if (e == "theorem3") return run_theorem3(s);
  throw DomainError("unknown experiment '" + e + "'");
}

}  // namespace

namespace detail {

std::uint64_t budget_of(const Scenario& s, const std::string& e) {
  if (e == "first_passage") return s.count("first_passage.n");
  if (e == "identity_b") return s.count("identity_b.n");
  if (e == "theorem1") return s.count("theorem1.excursions");
  if (e == "analyze" || e == "tailclass" || e == "theorem2" || e == "theorem3") {
    return s.reals(e + ".x").size();
  }
  return 0;
}

std::uint64_t derive_seed(std::uint64_t base, const std::string& experiment, std::uint64_t index) {
  std::uint64_t h = 1469598103934665603ULL;
  for (const char c : experiment) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ULL;
  }
  // splitmix64 finaliser
  std::uint64_t z = base + h + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace detail

std::vector<std::string> preconditions(const Scenario& s, const std::string& e) {
  std::vector<std::string> out;
  const LevyModel& m = s.model;
  const std::string catalog = catalog_problem(m);

  if (e == "analyze") {
    if (!catalog.empty()) out.push_back(catalog);
  } else if (e == "first_passage") {
    const std::string method = s.text("first_passage.method");
    if (!is_cp(m)) out.push_back("Brownian first passage is closed-form, nothing to simulate");
    if (!(m.mean() < 0.0)) out.push_back("needs a process drifting to -inf");
    if (method == "tilted") {
      if (!cramer_root(m)) out.push_back("tilted sampling needs a Cramer root");
      if (has_tabulated(m)) out.push_back("tilted sampling of tabulated laws is unavailable");
    } else if (method != "crude") {
      out.push_back("method must be crude or tilted, got '" + method + "'");
    }
    if (!catalog.empty()) out.push_back(catalog);
  } else if (e == "identity_b") {
    const RegularityReport reg = classify_path_regularity(m);
    if (reg.path_case == PathCase::I) {
      out.push_back("needs a Case II/III model, classification is Case I");
    }
    if (!(m.mean() < 0.0)) out.push_back("needs a process drifting to -inf");
    if (!catalog.empty()) out.push_back(catalog);
  } else if (e == "tailclass") {
    const std::string expect = s.text("tailclass.expect");
    if (expect != "member" && expect != "non_member" && expect != "any") {
      out.push_back("expect must be member, non_member or any");
    }
    try {
      tail_distribution(s);
    } catch (const LevyLabError& err) {
      out.push_back(std::string("tail: ") + err.what());
    }
  } else if (e == "theorem1") {
    const RegularityReport reg = classify_path_regularity(m);
    if (reg.path_case == PathCase::I) {
      out.push_back("needs a finite excursion measure; model classified Case I");
    } else {
      if (!(m.mean() < 0.0)) out.push_back("needs a process drifting to -inf");
      if (const auto root = cramer_root(m)) {
        if (!same_alpha(s.alpha, *root)) {
          out.push_back("alpha = " + fmt(s.alpha) + " differs from the Cramer root " + fmt(*root));
        }
      } else {
        heavy_regime(s, out);
      }
      if (!catalog.empty()) out.push_back(catalog);
    }
  } else if (e == "theorem2" || e == "theorem3") {
    heavy_regime(s, out);
    if (!catalog.empty()) out.push_back(catalog);
  }
  return out;
}

ExperimentReport run_single(const Scenario& s, const std::string& experiment,
                            const RunOptions& options) {
  ExperimentReport rep;
  rep.name = experiment;
  const auto start = std::chrono::steady_clock::now();
  if (detail::budget_of(s, experiment) == 0) {
    rep.status = Status::skipped;
    rep.reason = "zero budget";
  } else {
    try {
      Outcome o = dispatch(s, experiment, options.threads);
      rep.rows = std::move(o.rows);
      rep.status = o.pass ? Status::pass : Status::fail;
      for (const auto& f : o.failures) rep.reason += (rep.reason.empty() ? "" : "; ") + f;
      rep.details_json = o.details.dump();
    } catch (const std::exception& e) {
      rep.status = Status::error;
      rep.reason = e.what();
    }
  }
  rep.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

ReportBundle run_experiment(const Scenario& s, const RunOptions& options) {
  std::vector<std::string> names;
  for (const auto& e : s.experiments) {
    if (options.only.empty() ||
        std::find(options.only.begin(), options.only.end(), e) != options.only.end()) {
      names.push_back(e);
    }
  }
  std::sort(names.begin(), names.end());
  ReportBundle bundle;
  bundle.scenario = s.name;
  bundle.seed = s.seed;
  bundle.experiments = run_chunks<ExperimentReport>(
      names.size(), options.threads,
      [&](std::size_t i) { return run_single(s, names[i], options); });
  return bundle;
}

}  // namespace levylab::harness
