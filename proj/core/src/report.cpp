#include <cstdio>
#include <fstream>
#include <system_error>

#include <json.hpp>

#include "levylab/harness.hpp"

namespace levylab::harness {
namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_file(const std::filesystem::path& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw LevyLabError("cannot write '" + path.string() + "'");
  out << body;
  out.close();
  if (!out) throw LevyLabError("write failed for '" + path.string() + "'");
}

}  // namespace

const char* to_string(Status s) {
  switch (s) {
    case Status::pass:
      return "pass";
    case Status::fail:
      return "fail";
    case Status::skipped:
      return "skipped";
    case Status::error:
      return "error";
  }
  return "?";
}

std::string csv_body(const ExperimentReport& report) {
  std::string out = "x,estimate,std_error,n,method,seed,target,pass\n";
  for (const auto& r : report.rows) {
    out += num(r.x) + ',' + num(r.estimate) + ',' + num(r.std_error) + ',' +
           std::to_string(r.n) + ',' + r.method + ',' + std::to_string(r.seed) + ',' +
           num(r.target) + ',' + r.pass + '\n';
  }
  return out;
}

int exit_status(const ReportBundle& bundle) {
  for (const auto& e : bundle.experiments) {
    if (e.status == Status::fail || e.status == Status::error) return 1;
  }
  return 0;
}

std::string summary_json(const ReportBundle& bundle) {
  nlohmann::json j;
  j["scenario"] = bundle.scenario;
  j["seed"] = bundle.seed;
  nlohmann::json list = nlohmann::json::array();
  std::vector<std::string> failed;
  double wall = 0.0;
  bool any_ran = false;
  for (const auto& e : bundle.experiments) {
    nlohmann::json item;
    item["name"] = e.name;
    item["status"] = to_string(e.status);
    item["reason"] = e.reason;
    item["wall_seconds"] = e.wall_seconds;
    item["rows"] = e.rows.size();
    item["details"] = nlohmann::json::parse(e.details_json);
    list.push_back(item);
    wall += e.wall_seconds;
    if (e.status != Status::skipped) any_ran = true;
    if (e.status == Status::fail || e.status == Status::error) failed.push_back(e.name);
  }
  j["experiments"] = list;
  j["failed"] = failed;
  j["wall_seconds"] = wall;
  if (!any_ran) {
    j["result"] = "skipped: all";
  } else {
    j["result"] = failed.empty() ? "pass" : "fail";
  }
  j["exit_status"] = exit_status(bundle);
  return j.dump(2) + "\n";
}

int emit_report(const ReportBundle& bundle, const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw LevyLabError("cannot create '" + out_dir.string() + "': " + ec.message());
  for (const auto& e : bundle.experiments) {
    if (e.status == Status::skipped) continue;
    write_file(out_dir / (e.name + ".csv"), csv_body(e));
  }
  write_file(out_dir / "summary.json", summary_json(bundle));
  return exit_status(bundle);
}

}  // namespace levylab::harness
