#include "cptlab/json_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cptlab/error.hpp"

namespace cptlab {
namespace {

using nlohmann::json;

[[noreturn]] void schema_error(std::string_view source, const std::string& what) {
  fail(ErrorCode::Parse, std::string(source) + ": " + what);
}

json parse(std::string_view text, std::string_view source) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    const std::size_t end = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    std::size_t line = 1;
    for (std::size_t i = 0; i < end; ++i)
      if (text[i] == '\n') ++line;
    fail(ErrorCode::Parse, std::string(source) + ":" + std::to_string(line) + ": " + e.what());
  }
}

template <class T>
T get(const json& j, const char* key, std::string_view source) {
  const auto it = j.find(key);
  if (it == j.end()) schema_error(source, std::string("missing field '") + key + "'");
  try {
    return it->get<T>();
  } catch (const json::exception& e) {
    schema_error(source, std::string("field '") + key + "': " + e.what());
  }
}

template <class T>
T get_or(const json& j, const char* key, T fallback, std::string_view source) {
  return j.contains(key) ? get<T>(j, key, source) : fallback;
}

void require_object(const json& j, std::string_view source) {
  if (!j.is_object()) schema_error(source, "expected a JSON object");
}

// Domain errors raised while building the object are reported against the source.
template <class F>
auto build(std::string_view source, F&& f) {
  try {
    return f();
  } catch (const Error& e) {
    if (e.code() == ErrorCode::Parse) throw;
    throw Error(e.code(), std::string(source) + ": " + e.what());
  }
}

json number(double x) { return std::isfinite(x) ? json(x) : json(format_double(x)); }

PowerTail tail_from(const json& j, std::string_view source) {
  require_object(j, source);
  return {get<double>(j, "coef", source), get<double>(j, "exp", source)};
}

}  // namespace

CptSpec spec_from_json(std::string_view text, std::string_view source) {
  const json j = parse(text, source);
  require_object(j, source);
  return build(source, [&] {
    const Form form = form_from_string(get_or<std::string>(j, "form", "power", source));
    return CptSpec(get<double>(j, "alpha", source), get<double>(j, "beta", source),
                   get<double>(j, "gamma", source), get<double>(j, "delta", source), form,
                   get_or(j, "c_plus", 1.0, source), get_or(j, "c_minus", 1.0, source),
                   get_or(j, "reference_point", 0.0, source));
  });
}

std::string spec_to_json(const CptSpec& spec) {
  json j;
  j["alpha"] = spec.alpha();
  j["beta"] = spec.beta();
  j["gamma"] = spec.gamma();
  j["delta"] = spec.delta();
  j["form"] = std::string(to_string(spec.form()));
  j["c_plus"] = spec.c_plus();
  j["c_minus"] = spec.c_minus();
  j["reference_point"] = spec.reference_point();
  return j.dump(2);
}

Law law_from_json(std::string_view text, std::string_view source) {
  const json j = parse(text, source);
  require_object(j, source);
  const auto kind = get<std::string>(j, "kind", source);
  return build(source, [&] {
    if (kind == "atoms") {
      const auto rows = get<std::vector<std::vector<double>>>(j, "atoms", source);
      std::vector<Atom> atoms;
      for (const auto& r : rows) {
        if (r.size() != 3) schema_error(source, "each atom is [value, pP, pQ]");
        atoms.push_back({r[0], r[1], r[2]});
      }
      return Law::discrete(std::move(atoms));
    }
    if (kind == "quantile") {
      const auto rows = get<std::vector<std::vector<double>>>(j, "grid", source);
      std::vector<GridNode> nodes;
      for (const auto& r : rows) {
        if (r.size() != 2) schema_error(source, "each grid node is [s, value]");
        nodes.push_back({r[0], r[1]});
      }
      std::optional<PowerTail> upper, lower;
      if (j.contains("tail") && !j["tail"].is_null()) upper = tail_from(j["tail"], source);
      if (j.contains("lower_tail") && !j["lower_tail"].is_null())
        lower = tail_from(j["lower_tail"], source);
      const auto measure = get_or<std::string>(j, "measure", "P", source);
      if (measure != "P" && measure != "Q") schema_error(source, "measure must be \"P\" or \"Q\"");
      return Law::quantile_grid(std::move(nodes), upper, lower,
                                measure == "P" ? Measure::P : Measure::Q,
                                get_or(j, "light", false, source));
    }
    schema_error(source, "unknown law kind '" + kind + "' (expected atoms or quantile)");
  });
}

std::string law_to_json(const Law& law) {
  json j;
  if (law.is_discrete()) {
    j["kind"] = "atoms";
    json rows = json::array();
    for (const auto& a : law.atoms()) rows.push_back({a.value, a.prob_p, a.prob_q});
    j["atoms"] = std::move(rows);
    return j.dump(2);
  }
  const auto& body = law.body();
  std::vector<GridNode> nodes;
  if (const auto* t = dynamic_cast<const TabulatedQuantile*>(&body))
    nodes.assign(t->nodes().begin(), t->nodes().end());
  else
    nodes = body.tabulate(2001);
  j["kind"] = "quantile";
  json rows = json::array();
  for (const auto& n : nodes) rows.push_back({n.level, number(n.value)});
  j["grid"] = std::move(rows);
  if (const auto t = body.upper_tail()) j["tail"] = {{"coef", t->coef}, {"exp", t->exponent}};
  if (const auto t = body.lower_tail()) j["lower_tail"] = {{"coef", t->coef}, {"exp", t->exponent}};
  j["measure"] = to_string(law.measure_tag());
  if (body.all_moments_finite()) j["light"] = true;
  return j.dump(2);
}

MarketSpec market_from_json(std::string_view text, std::string_view source) {
  const json j = parse(text, source);
  require_object(j, source);
  MarketSpec m;
  m.d = get<int>(j, "d", source);
  m.k = get<int>(j, "k", source);
  m.horizon = get<double>(j, "T", source);
  m.grid = get<std::vector<double>>(j, "grid", source);
  m.mu = get<std::vector<std::vector<double>>>(j, "mu", source);
  m.sigma = get<std::vector<std::vector<std::vector<double>>>>(j, "sigma", source);
  m.initial_prices = get_or(j, "s0", std::vector<double>(static_cast<std::size_t>(std::max(m.d, 0)), 1.0), source);
  build(source, [&] {
    m.validate();
    return 0;
  });
  return m;
}

std::string market_to_json(const MarketSpec& market) {
  json j;
  j["d"] = market.d;
  j["k"] = market.k;
  j["T"] = market.horizon;
  j["grid"] = market.grid;
  j["mu"] = market.mu;
  j["sigma"] = market.sigma;
  j["s0"] = market.initial_prices;
  return j.dump(2);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::Io, path + ": cannot open for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::Io, path + ": cannot open for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) fail(ErrorCode::Io, path + ": write failed");
}

CptSpec load_spec(const std::string& path) { return spec_from_json(read_file(path), path); }
Law load_law(const std::string& path) { return law_from_json(read_file(path), path); }
MarketSpec load_market(const std::string& path) { return market_from_json(read_file(path), path); }

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
  return std::string(buf, r.ptr);
}

void CsvWriter::header(std::initializer_list<std::string_view> names) {
  for (auto n : names) field(n);
  end_row();
}

CsvWriter& CsvWriter::field(double x) { return field(std::string_view(format_double(x))); }

CsvWriter& CsvWriter::field(long long x) { return field(std::string_view(std::to_string(x))); }

CsvWriter& CsvWriter::field(std::string_view text) {
  if (!first_) out_ << ',';
  out_ << text;
  first_ = false;
  return *this;
}

void CsvWriter::end_row() {
  out_ << '\n';
  first_ = true;
}

}  // namespace cptlab
