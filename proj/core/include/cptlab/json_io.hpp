#pragma once

#include <initializer_list>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "cptlab/kernel.hpp"
#include "cptlab/law.hpp"
#include "cptlab/preferences.hpp"

namespace cptlab {

// Parse functions throw Error(Parse) as "source:line: message" for syntax
// errors and "source: message" for missing or mistyped fields.

/// {"alpha","beta","gamma","delta","form","c_plus","c_minus","reference_point"};
/// form, scales and reference point are optional.
CptSpec spec_from_json(std::string_view text, std::string_view source = "<input>");
std::string spec_to_json(const CptSpec& spec);

/// {"kind":"atoms","atoms":[[value,pP,pQ],...]} or
/// {"kind":"quantile","grid":[[s,value],...],"tail":{"coef":c,"exp":k}}.
/// Quantile laws also accept "lower_tail" and "measure" ("P" or "Q").
Law law_from_json(std::string_view text, std::string_view source = "<input>");
std::string law_to_json(const Law& law);

/// {"d","k","T","grid","mu","sigma","s0"}.
MarketSpec market_from_json(std::string_view text, std::string_view source = "<input>");
std::string market_to_json(const MarketSpec& market);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view content);

CptSpec load_spec(const std::string& path);
Law load_law(const std::string& path);
MarketSpec load_market(const std::string& path);

/// Shortest text that round-trips a double at 17 significant digits;
/// "inf", "-inf", "nan" for non-finite values.
std::string format_double(double x);

/// Minimal CSV writer: fields are numbers or plain tokens without commas.
class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& out) : out_(out) {}
  void header(std::initializer_list<std::string_view> names);
  CsvWriter& field(double x);
  CsvWriter& field(long long x);
  CsvWriter& field(std::string_view text);
  void end_row();

 private:
  std::ostream& out_;
  bool first_ = true;
};

}  // namespace cptlab
