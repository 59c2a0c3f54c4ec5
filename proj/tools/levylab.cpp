#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "levylab/harness.hpp"

namespace lh = levylab::harness;

namespace {

struct Args {
  std::string scenario;
  std::string out = "levylab-out";
  std::optional<std::uint64_t> seed;
  unsigned threads = 1;
};

void add_common(CLI::App* cmd, Args& a) {
  cmd->add_option("scenario", a.scenario, "Scenario file")->required()->check(CLI::ExistingFile);
  cmd->add_option("--out", a.out, "Output directory for CSVs and summary.json");
  cmd->add_option("--seed", a.seed, "Override the scenario seed");
  cmd->add_option("--threads", a.threads, "Worker threads (0 = hardware); results do not depend on it");
}

void print_diagnostics(const lh::DiagnosticError& e, const char* kind) {
  std::cerr << kind << ":\n";
  for (const auto& d : e.diagnostics()) std::cerr << "  " << d << "\n";
}

int run(const Args& a, const std::string& mode) {
  lh::Scenario s = lh::load_scenario(a.scenario);
  if (a.seed) s.seed = *a.seed;

  lh::RunOptions opt;
  opt.threads = a.threads;
  if (mode != "verify") {
    // A focused subcommand runs its experiment even when the scenario omits it.
    const auto problems = lh::preconditions(s, mode);
    if (!problems.empty()) {
      std::vector<std::string> tagged;
      for (const auto& p : problems) tagged.push_back(mode + ": " + p);
      throw lh::ValidationError(tagged);
    }
    s.experiments = {mode};
  }

  const lh::ReportBundle bundle = lh::run_experiment(s, opt);
  const int status = lh::emit_report(bundle, a.out);
  for (const auto& e : bundle.experiments) {
    std::printf("%-14s %-7s %8.2fs  %s\n", e.name.c_str(), lh::to_string(e.status),
                e.wall_seconds, e.reason.c_str());
  }
  if (bundle.experiments.empty()) std::printf("skipped: all\n");
  std::printf("report: %s\n", a.out.c_str());
  return status;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Levy fluctuation-theory lab"};
  app.require_subcommand(1);
  Args args;
  std::string mode;
  for (const char* name : {"analyze", "verify", "tailclass"}) {
    const std::string desc = std::string(name) == "verify"
                                 ? "Run every experiment listed in the scenario"
                                 : std::string("Run only the ") + name + " experiment";
    auto* cmd = app.add_subcommand(name, desc);
    add_common(cmd, args);
    cmd->callback([&mode, name] { mode = name; });
  }
  CLI11_PARSE(app, argc, argv);

  try {
    return run(args, mode);
  } catch (const lh::ParseError& e) {
    print_diagnostics(e, "parse error");
  } catch (const lh::ValidationError& e) {
    print_diagnostics(e, "validation error");
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
  }
  return 2;
}
