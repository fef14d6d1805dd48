// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "y00/analysis.hpp"

namespace y00 {

inline constexpr std::string_view kResultsSchema = "y00-results/1";

/// One result value at one parameter point. Counts are zero for
/// closed-form rows.
struct ResultRow {
  std::string experiment;
  std::string series;
  std::string x_name;
  double x = 0.0;
  std::string metric;
  double value = 0.0;
  std::uint64_t errors = 0;
  std::uint64_t trials = 0;
  double ci95 = 0.0;

  static ResultRow closed_form(std::string experiment, std::string series, std::string x_name, double x,
                               std::string metric, double value);
  static ResultRow measured(std::string experiment, std::string series, std::string x_name, double x,
                            std::string metric, const ErrorReport& r);
};

/// Fixed decimal formatting: %.10g, with inf/-inf/nan spelled out.
std::string format_number(double v);

std::string csv_header();
std::string csv_line(const ResultRow& row);

/// Writes header plus rows in the given order. Throws std::invalid_argument
/// for a wrong schema id or nonconforming rows and std::runtime_error (with
/// the path) when the file cannot be written.
void emit_csv(const std::vector<ResultRow>& rows, std::string_view schema, const std::filesystem::path& path);

/// Parses a file written by emit_csv.
std::vector<ResultRow> read_csv(const std::filesystem::path& path);

}  // namespace y00
