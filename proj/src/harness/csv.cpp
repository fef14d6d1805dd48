// SPDX-License-Identifier: Apache-2.0
#include "y00/harness/csv.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace y00 {

ResultRow ResultRow::closed_form(std::string experiment, std::string series, std::string x_name, double x,
                                 std::string metric, double value) {
  ResultRow r;
  r.experiment = std::move(experiment);
  r.series = std::move(series);
  r.x_name = std::move(x_name);
  r.x = x;
  r.metric = std::move(metric);
  r.value = value;
  return r;
}

ResultRow ResultRow::measured(std::string experiment, std::string series, std::string x_name, double x,
                              std::string metric, const ErrorReport& e) {
  ResultRow r = closed_form(std::move(experiment), std::move(series), std::move(x_name), x,
                            std::move(metric), e.value);
  r.errors = e.errors;
  r.trials = e.trials;
  r.ci95 = e.ci95;
  return r;
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) return "0";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::string csv_header() { return "experiment,series,x_name,x,metric,value,errors,trials,ci95"; }

namespace {

void check_field(const std::string& s, const char* name) {
  if (s.empty()) throw std::invalid_argument(std::string("result row has an empty ") + name);
  if (s.find_first_of(",\"\n\r") != std::string::npos) {
    throw std::invalid_argument(std::string("result row ") + name + " contains a reserved character");
  }
}

}  // namespace

std::string csv_line(const ResultRow& r) {
  check_field(r.experiment, "experiment");
  check_field(r.series, "series");
  check_field(r.x_name, "x_name");
  check_field(r.metric, "metric");
  if (r.errors > r.trials) throw std::invalid_argument("result row has more errors than trials");
  std::string line = r.experiment + ',' + r.series + ',' + r.x_name + ',' + format_number(r.x) + ',' +
                     r.metric + ',' + format_number(r.value) + ',' + std::to_string(r.errors) + ',' +
                     std::to_string(r.trials) + ',' + format_number(r.ci95);
  return line;
}

void emit_csv(const std::vector<ResultRow>& rows, std::string_view schema, const std::filesystem::path& path) {
  if (schema != kResultsSchema) {
    throw std::invalid_argument("unknown CSV schema '" + std::string(schema) + "'");
  }
  std::string body = csv_header() + "\n";
  for (const auto& r : rows) body += csv_line(r) + "\n";
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  out << body;
  out.flush();
  if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
}

std::vector<ResultRow> read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
  std::string line;
  if (!std::getline(in, line) || line != csv_header()) {
    throw std::runtime_error("'" + path.string() + "' lacks the results header");
  }
  std::vector<ResultRow> rows;
  while (std::getline(in, line)) {
    std::vector<std::string> f;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) f.push_back(cell);
    if (f.size() != 9) throw std::runtime_error("malformed row in '" + path.string() + "': " + line);
    ResultRow r;
    r.experiment = f[0];
    r.series = f[1];
    r.x_name = f[2];
    r.x = std::stod(f[3]);
    r.metric = f[4];
    r.value = std::stod(f[5]);
    r.errors = std::stoull(f[6]);
    r.trials = std::stoull(f[7]);
    r.ci95 = std::stod(f[8]);
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace y00
