#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "levylab/errors.hpp"
#include "levylab/model.hpp"

namespace levylab::harness {

class DiagnosticError : public LevyLabError {
 public:
  explicit DiagnosticError(std::vector<std::string> diagnostics);
  const std::vector<std::string>& diagnostics() const { return diagnostics_; }

 private:
  std::vector<std::string> diagnostics_;
};

class ParseError : public DiagnosticError {
 public:
  using DiagnosticError::DiagnosticError;
};

class ValidationError : public DiagnosticError {
 public:
  using DiagnosticError::DiagnosticError;
};

inline const std::vector<std::string> kExperimentNames{
    "analyze", "first_passage", "identity_b", "tailclass", "theorem1", "theorem2", "theorem3"};

/// Flat `key = value` scenario with defaults filled from the schema.
struct Scenario {
  std::string name;
  std::uint64_t seed = 0;
  double alpha = 1.0;
  std::vector<std::string> experiments;
  LevyModel model;
  std::map<std::string, std::string> settings;  // every schema key, defaults included

  double real(const std::string& key) const;
  std::uint64_t count(const std::string& key) const;
  std::vector<double> reals(const std::string& key) const;
  const std::string& text(const std::string& key) const;
};

Scenario parse_scenario(const std::string& text);
Scenario load_scenario(const std::filesystem::path& path);

/// Precondition violations of one experiment against the scenario's model;
/// empty when it can run.
std::vector<std::string> preconditions(const Scenario& s, const std::string& experiment);

/// Keys accepted by the grammar, with their defaults ("" when required).
const std::map<std::string, std::string>& scenario_schema();

struct CsvRow {
  double x = 0.0;
  double estimate = 0.0;
  double std_error = 0.0;
  std::uint64_t n = 0;
  std::string method;
  std::uint64_t seed = 0;
  double target = 0.0;
  std::string pass;  // "1", "0" or "na"
};

enum class Status { pass, fail, skipped, error };
const char* to_string(Status s);

struct ExperimentReport {
  std::string name;
  Status status = Status::skipped;
  std::string reason;
  std::vector<CsvRow> rows;
  std::string details_json = "{}";
  double wall_seconds = 0.0;
};

struct ReportBundle {
  std::string scenario;
  std::uint64_t seed = 0;
  std::vector<ExperimentReport> experiments;  // sorted by name
};

struct RunOptions {
  unsigned threads = 1;
  std::vector<std::string> only;  // restrict to these experiments when nonempty
};

ExperimentReport run_single(const Scenario& s, const std::string& experiment,
                            const RunOptions& options);
ReportBundle run_experiment(const Scenario& s, const RunOptions& options = {});

std::string csv_body(const ExperimentReport& report);
std::string summary_json(const ReportBundle& bundle);

/// Writes <name>.csv per experiment and summary.json; returns the exit status.
int emit_report(const ReportBundle& bundle, const std::filesystem::path& out_dir);

int exit_status(const ReportBundle& bundle);

}  // namespace levylab::harness
