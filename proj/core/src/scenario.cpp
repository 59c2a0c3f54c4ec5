#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "levylab/harness.hpp"
#include "levylab/ladder.hpp"
#include "scenario_detail.hpp"

namespace levylab::harness {
namespace {

enum class Type { real, count, reals, word, words, text };

struct Field {
  Type type;
  std::string fallback;  // empty: required
};

const std::map<std::string, Field>& fields() {
  static const std::map<std::string, Field> f{
      {"name", {Type::word, "scenario"}},
      {"seed", {Type::count, "1"}},
      {"alpha", {Type::real, "1"}},
      {"experiments", {Type::words, "analyze"}},
      {"model.kind", {Type::word, ""}},
      {"model.drift", {Type::real, ""}},
      {"model.sigma", {Type::real, "0"}},
      {"model.jumps_up.rate", {Type::real, "0"}},
      {"model.jumps_up.law", {Type::word, "exponential"}},
      {"model.jumps_up.params", {Type::text, "1"}},
      {"model.jumps_down.rate", {Type::real, "0"}},
      {"model.jumps_down.law", {Type::word, "exponential"}},
      {"model.jumps_down.params", {Type::text, "1"}},
      {"tail.kind", {Type::word, "model_tail"}},
      {"tail.params", {Type::text, "1"}},
      {"tail.cutoff", {Type::real, "1"}},
      {"analyze.x", {Type::reals, "0, 1, 2, 3"}},
      {"analyze.tolerance", {Type::real, "1e-4"}},
      {"analyze.e0_tolerance", {Type::real, "1e-8"}},
      {"analyze.factorization_tolerance", {Type::real, "1e-8"}},
      {"first_passage.x", {Type::reals, "1, 2, 3"}},
      {"first_passage.n", {Type::count, "100000"}},
      {"first_passage.method", {Type::word, "tilted"}},
      {"first_passage.sigma", {Type::real, "3"}},
      {"first_passage.max_rel_se", {Type::real, "0.01"}},
      {"first_passage.max_censored", {Type::real, "1e-3"}},
      {"first_passage.e0_tolerance", {Type::real, "1e-8"}},
      {"identity_b.x", {Type::reals, "1, 2"}},
      {"identity_b.n", {Type::count, "1000000"}},
      {"identity_b.threshold", {Type::real, "3"}},
      {"tailclass.x", {Type::reals, "10, 20, 40, 80, 200"}},
      {"tailclass.probe", {Type::real, "40"}},
      {"tailclass.tolerance", {Type::real, "0.05"}},
      {"tailclass.expect", {Type::word, "member"}},
      {"theorem1.x", {Type::reals, "2, 4, 6"}},
      {"theorem1.excursions", {Type::count, "1000000"}},
      {"theorem1.sigma", {Type::real, "3"}},
      {"theorem1.asymptotic_from", {Type::real, "1"}},
      {"theorem2.x", {Type::reals, "10, 20, 30"}},
      {"theorem2.tolerance", {Type::real, "0.02"}},
      {"theorem2.forward_tolerance", {Type::real, "1e-5"}},
      {"theorem3.x", {Type::reals, "20, 35, 50"}},
      {"theorem3.tolerance", {Type::real, "0.15"}},
      {"theorem3.e0_tolerance", {Type::real, "1e-8"}},
  };
  return f;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

bool parse_real(const std::string& s, double& out) {
  try {
    std::size_t used = 0;
    out = std::stod(s, &used);
    return used == s.size() && std::isfinite(out);
  } catch (...) {
    return false;
  }
}

bool parse_count(const std::string& s, std::uint64_t& out) {
  double v = 0.0;
  if (!parse_real(s, v) || v < 0.0 || v != std::floor(v) || v > 1.8e19) return false;
  out = static_cast<std::uint64_t>(v);
  return true;
}

bool valid_word(const std::string& s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
  });
}

std::string check_type(Type type, const std::string& value) {
  double r = 0.0;
  std::uint64_t n = 0;
  switch (type) {
    case Type::real:
      return parse_real(value, r) ? "" : "expected a real number";
    case Type::count:
      return parse_count(value, n) ? "" : "expected a nonnegative integer";
    case Type::reals:
      for (const auto& item : split_list(value)) {
        if (!parse_real(item, r)) return "expected a comma-separated list of reals";
      }
      return "";
    case Type::word:
      return valid_word(value) ? "" : "expected a single word";
    case Type::words:
      for (const auto& item : split_list(value)) {
        if (!valid_word(item)) return "expected a comma-separated list of words";
      }
      return "";
    case Type::text:
      return "";
  }
  return "";
}

JumpComponent build_component(const Scenario& s, const std::string& side) {
  const std::string prefix = "model.jumps_" + side + ".";
  JumpComponent c;
  c.rate = s.real(prefix + "rate");
  if (c.rate == 0.0) return c;
  c.law = detail::parse_law(s.text(prefix + "law"), s.text(prefix + "params"));
  return c;
}

}  // namespace

namespace detail {

JumpLaw parse_law(const std::string& law, const std::string& params) {
  const auto items = split_list(params);
  const auto numbers = [&]() {
    std::vector<double> out;
    for (const auto& item : items) {
      double v = 0.0;
      if (!parse_real(item, v)) throw DomainError("bad law parameter '" + item + "'");
      out.push_back(v);
    }
    return out;
  };
  if (law == "exponential" || law == "exp") {
    const auto p = numbers();
    if (p.size() != 1) throw DomainError("exponential law takes one parameter (rate)");
    return JumpLaw::exponential(p[0]);
  }
  if (law == "tilted_pareto") {
    const auto p = numbers();
    if (p.size() != 2) throw DomainError("tilted_pareto law takes two parameters (alpha, rho)");
    return JumpLaw::tilted_pareto(p[0], p[1]);
  }
  if (law == "tabulated") {
    std::vector<double> xs;
    std::vector<double> ls;
    for (const auto& item : items) {
      const auto colon = item.find(':');
      double x = 0.0;
      double l = 0.0;
      if (colon == std::string::npos || !parse_real(trim(item.substr(0, colon)), x) ||
          !parse_real(trim(item.substr(colon + 1)), l)) {
        throw DomainError("tabulated knots are written x:log_survival");
      }
      xs.push_back(x);
      ls.push_back(l);
    }
    return JumpLaw::tabulated(std::move(xs), std::move(ls));
  }
  throw DomainError("unknown law '" + law + "'");
}

}  // namespace detail

DiagnosticError::DiagnosticError(std::vector<std::string> diagnostics)
    : LevyLabError([&] {
        std::string msg;
        for (const auto& d : diagnostics) msg += (msg.empty() ? "" : "; ") + d;
        return msg;
      }()),
      diagnostics_(std::move(diagnostics)) {}

const std::map<std::string, std::string>& scenario_schema() {
  static const std::map<std::string, std::string> schema = [] {
    std::map<std::string, std::string> m;
    for (const auto& [k, f] : fields()) m[k] = f.fallback;
    return m;
  }();
  return schema;
}

double Scenario::real(const std::string& key) const {
  double v = 0.0;
  parse_real(text(key), v);
  return v;
}

std::uint64_t Scenario::count(const std::string& key) const {
  std::uint64_t v = 0;
  parse_count(text(key), v);
  return v;
}

std::vector<double> Scenario::reals(const std::string& key) const {
  std::vector<double> out;
  for (const auto& item : split_list(text(key))) {
    double v = 0.0;
    parse_real(item, v);
    out.push_back(v);
  }
  return out;
}

const std::string& Scenario::text(const std::string& key) const {
  const auto it = settings.find(key);
  if (it == settings.end()) throw DomainError("scenario has no field '" + key + "'");
  return it->second;
}

Scenario parse_scenario(const std::string& input) {
  std::vector<std::string> problems;
  std::map<std::string, std::string> given;
  std::set<std::string> seen;
  std::istringstream in(input);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::string where = "line " + std::to_string(line_no) + ": ";
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      problems.push_back(where + "expected 'key = value'");
      continue;
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const auto field = fields().find(key);
    if (field == fields().end()) {
      problems.push_back(where + "unknown field '" + key + "'");
      continue;
    }
    if (!seen.insert(key).second) {
      problems.push_back(where + "duplicate field '" + key + "'");
      continue;
    }
    if (value.empty()) {
      problems.push_back(where + "field '" + key + "' has an empty value");
      continue;
    }
    const std::string type_problem = check_type(field->second.type, value);
    if (!type_problem.empty()) {
      problems.push_back(where + "field '" + key + "': " + type_problem);
      continue;
    }
    given[key] = value;
  }

  Scenario s;
  for (const auto& [key, f] : fields()) {
    const auto it = given.find(key);
    if (it != given.end()) {
      s.settings[key] = it->second;
    } else if (f.fallback.empty()) {
      problems.push_back("missing required field '" + key + "'");
    } else {
      s.settings[key] = f.fallback;
    }
  }
  if (!problems.empty()) throw ParseError(problems);

  s.name = s.text("name");
  s.seed = s.count("seed");
  s.alpha = s.real("alpha");
  s.experiments = split_list(s.text("experiments"));
  std::sort(s.experiments.begin(), s.experiments.end());
  s.experiments.erase(std::unique(s.experiments.begin(), s.experiments.end()),
                      s.experiments.end());

  std::vector<std::string> invalid;
  for (const auto& e : s.experiments) {
    if (std::find(kExperimentNames.begin(), kExperimentNames.end(), e) ==
        kExperimentNames.end()) {
      invalid.push_back("experiments: unknown experiment '" + e + "'");
    }
  }
  if (!(s.alpha > 0.0)) invalid.push_back("alpha: must be positive");

  bool model_ok = false;
  try {
    const std::string kind = s.text("model.kind");
    if (kind == "brownian") {
      s.model = LevyModel::brownian(s.real("model.drift"), s.real("model.sigma"));
    } else if (kind == "compound_poisson") {
      s.model = LevyModel::compound_poisson(s.real("model.drift"), build_component(s, "up"),
                                            build_component(s, "down"));
    } else {
      throw DomainError("unknown kind '" + kind + "' (brownian | compound_poisson)");
    }
    model_ok = true;
  } catch (const LevyLabError& e) {
    invalid.push_back(std::string("model: ") + e.what());
  }
  if (model_ok) {
    for (const auto& e : s.experiments) {
      if (detail::budget_of(s, e) == 0) continue;
      for (auto& d : preconditions(s, e)) invalid.push_back(e + ": " + d);
    }
  }
  if (!invalid.empty()) throw ValidationError(invalid);
  return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw LevyLabError("cannot open scenario file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

}  // namespace levylab::harness
