#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "cptlab/audit.hpp"
#include "cptlab/choquet.hpp"
#include "cptlab/error.hpp"
#include "cptlab/json_io.hpp"
#include "cptlab/kernel.hpp"
#include "cptlab/optimizer.hpp"
#include "cptlab/parallel.hpp"
#include "cptlab/regime.hpp"
#include "cptlab/witness.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;
using namespace cptlab;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitIo = 1;
constexpr int kExitDomain = 2;
constexpr int kExitViolation = 3;

ordered_json num(double x) {
  return std::isfinite(x) ? ordered_json(x) : ordered_json(format_double(x));
}

ordered_json num(const ExtendedValue& v) {
  return v.is_infinite() ? ordered_json("inf") : ordered_json(v.value());
}

void print(const ordered_json& j) { std::cout << j.dump(2) << '\n'; }

// Preference exponents given inline or through --spec-file.
struct SpecArgs {
  std::string file;
  double alpha = NAN, beta = NAN, gamma = NAN, delta = NAN;
  std::string form = "power";

  void attach(CLI::App* cmd) {
    cmd->add_option("--spec-file", file, "CptSpec JSON file");
    cmd->add_option("--alpha", alpha, "utility exponent on gains");
    cmd->add_option("--beta", beta, "utility exponent on losses");
    cmd->add_option("--gamma", gamma, "distortion exponent on gains");
    cmd->add_option("--delta", delta, "distortion exponent on losses");
    cmd->add_option("--form", form, "power or tk")->check(CLI::IsMember({"power", "tk"}));
  }

  CptSpec get() const {
    if (!file.empty()) return load_spec(file);
    if (std::isnan(alpha) || std::isnan(beta) || std::isnan(gamma) || std::isnan(delta))
      fail(ErrorCode::InvalidParameter, "give --spec-file or all of --alpha --beta --gamma --delta");
    return CptSpec(alpha, beta, gamma, delta, form_from_string(form));
  }
};

// Kernel from --market-file or directly from its variance.
struct KernelArgs {
  std::string market_file;
  double v = 0.16;

  void attach(CLI::App* cmd) {
    cmd->add_option("--market-file", market_file, "MarketSpec JSON file");
    cmd->add_option("--v", v, "total kernel variance when no market file is given")
        ->check(CLI::NonNegativeNumber);
  }

  KernelModel get() const {
    if (!market_file.empty()) return solve_market_price_of_risk(load_market(market_file));
    return KernelModel::from_variance(v);
  }
};

std::string output_path(const std::string& dir, const std::string& name) {
  fs::create_directories(dir);
  return (fs::path(dir) / name).string();
}

void write_or_print(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-")
    std::cout << content;
  else
    write_file(path, content);
}

ordered_json verdict_json(const RegimeVerdict& v) {
  return {{"verdict", std::string(to_string(v.verdict))},
          {"cause", std::string(to_string(v.cause))},
          {"tk_caveat", v.tk_caveat}};
}

std::vector<std::int64_t> witness_indices(std::int64_t n_max) {
  std::vector<std::int64_t> out;
  for (std::int64_t n = 1; n <= std::min<std::int64_t>(10, n_max); ++n) out.push_back(n);
  for (std::int64_t decade = 10; decade <= n_max; decade *= 10)
    for (std::int64_t m : {2, 5, 10}) {
      const std::int64_t n = decade * m;
      if (n <= n_max) out.push_back(n);
      if (decade > n_max / 10) break;
    }
  if (out.empty() || out.back() != n_max) out.push_back(n_max);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

ordered_json report_json(const WitnessReport& r) {
  ordered_json rows = ordered_json::array();
  for (const auto& row : r.rows)
    rows.push_back({{"n", row.n},
                    {"closed_form", num(row.closed_form)},
                    {"numeric", num(row.numeric)},
                    {"numeric_kind", to_string(row.numeric_kind)},
                    {"budget_residual", num(row.budget_residual)},
                    {"truncation_level", num(row.truncation_level)},
                    {"gains", num(row.gains)},
                    {"losses", num(row.losses)}});
  return {{"cause", to_string(r.cause)}, {"x0", num(r.x0)},       {"v", num(r.v)},
          {"xi", num(r.xi)},             {"chi", num(r.chi)},     {"prob_a", num(r.prob_a)},
          {"q_a", num(r.q_a)},           {"n0", r.n0},            {"loss_side_certified", r.loss_side_certified},
          {"rows", rows}};
}

std::string witness_csv(const WitnessReport& r) {
  std::ostringstream out;
  CsvWriter csv(out);
  csv.header({"n", "closed_form", "numeric", "budget_residual"});
  for (const auto& row : r.rows) {
    csv.field(static_cast<long long>(row.n)).field(row.closed_form).field(row.numeric).field(row.budget_residual);
    csv.end_row();
  }
  return out.str();
}

std::string join_named(const NamedValues& values) {
  std::string s;
  for (const auto& [k, v] : values) {
    if (!s.empty()) s += ';';
    s += k + '=' + format_double(v);
  }
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cumulative prospect theory portfolio lab"};
  app.require_subcommand(1);
  app.fallthrough();
  std::size_t threads = 0;
  std::string output_dir = ".";
  app.add_option("--threads", threads, "worker threads (overrides CPT_LAB_THREADS)");
  app.add_option("--output-dir", output_dir, "directory for CSV artifacts");

  // classify
  SpecArgs classify_spec;
  auto* classify_cmd = app.add_subcommand("classify", "well-posedness verdict for a spec");
  classify_spec.attach(classify_cmd);

  // classify-grid
  double grid_step = 0.05;
  std::string grid_out = "-";
  auto* grid_cmd = app.add_subcommand("classify-grid", "verdicts on the exponent grid {step, ..., 1}^4");
  grid_cmd->add_option("--step", grid_step, "grid step (1/m)")->required();
  grid_cmd->add_option("--out", grid_out, "CSV path, - for stdout");

  // evaluate
  SpecArgs eval_spec;
  std::string law_file;
  auto* eval_cmd = app.add_subcommand("evaluate", "CPT value of a law");
  eval_spec.attach(eval_cmd);
  eval_cmd->add_option("--law-file", law_file, "Law JSON file")->required();

  // witness
  std::string cause_name;
  std::int64_t n_max = 1000;
  double witness_x0 = 0.0, witness_v = 0.0;
  std::string witness_csv_path;
  SpecArgs witness_spec;
  auto* witness_cmd = app.add_subcommand("witness", "divergent payoff sequence for an ill-posed cause");
  witness_cmd->add_option("--cause", cause_name, "a_ge_b, bd_lt_1 or ag_gt_1")
      ->required()
      ->check(CLI::IsMember({"a_ge_b", "bd_lt_1", "ag_gt_1"}));
  witness_cmd->add_option("--n-max", n_max, "largest index")->check(CLI::PositiveNumber);
  witness_cmd->add_option("--x0", witness_x0, "budget (construction 1 only)");
  witness_cmd->add_option("--v", witness_v, "total kernel variance")->check(CLI::NonNegativeNumber);
  witness_cmd->add_option("--csv", witness_csv_path, "CSV path (default <output-dir>/witness_<cause>.csv)");
  witness_spec.attach(witness_cmd);

  // audit
  std::string lemma_name;
  std::size_t corpus_size = 1000;
  std::uint64_t audit_seed = 1;
  double audit_v = 0.16;
  std::string audit_out = "-";
  auto* audit_cmd = app.add_subcommand("audit", "random-corpus audit of an inequality lemma");
  audit_cmd->add_option("--lemma", lemma_name, "eleql, lemeta or l1l2")
      ->required()
      ->check(CLI::IsMember({"eleql", "lemeta", "l1l2"}));
  audit_cmd->add_option("--corpus-size", corpus_size, "number of random cases");
  audit_cmd->add_option("--seed", audit_seed, "corpus seed");
  audit_cmd->add_option("--v", audit_v, "kernel variance for lemeta")->check(CLI::NonNegativeNumber);
  audit_cmd->add_option("--out", audit_out, "CSV path, - for stdout");

  // market
  std::string market_file;
  std::size_t samples = 0;
  std::uint64_t market_seed = 1;
  std::string sample_measure = "Q";
  bool market_check = false;
  auto* market_cmd = app.add_subcommand("market", "market price of risk, kernel law and samples");
  market_cmd->add_option("--market-file", market_file, "MarketSpec JSON file")->required();
  market_cmd->add_option("--samples", samples, "joint (rho, U, U*) draws written to CSV");
  market_cmd->add_option("--seed", market_seed, "sampling seed");
  market_cmd->add_option("--measure", sample_measure, "P or Q")->check(CLI::IsMember({"P", "Q"}));
  market_cmd->add_flag("--check", market_check, "run the assumption checks");

  // optimize
  SpecArgs opt_spec;
  KernelArgs opt_kernel;
  double opt_x0 = 1.0;
  std::size_t opt_iters = 2000;
  std::uint64_t opt_seed = 1;
  OptimizeOptions opt_options;
  auto* opt_cmd = app.add_subcommand("optimize", "pattern search over grid payoffs");
  opt_spec.attach(opt_cmd);
  opt_kernel.attach(opt_cmd);
  opt_cmd->add_option("--x0", opt_x0, "budget");
  opt_cmd->add_option("--iters", opt_iters, "evaluations per start")->check(CLI::PositiveNumber);
  opt_cmd->add_option("--seed", opt_seed, "search seed");
  opt_cmd->add_option("--u-cells", opt_options.u_cells, "cells along U")->check(CLI::PositiveNumber);
  opt_cmd->add_option("--ustar-cells", opt_options.ustar_cells, "cells along U*")->check(CLI::PositiveNumber);
  opt_cmd->add_option("--starts", opt_options.starts, "multi-start count")->check(CLI::PositiveNumber);
  opt_cmd->add_option("--levels", opt_options.levels, "quantized payoff levels");

  // diverge
  SpecArgs div_spec;
  KernelArgs div_kernel;
  double div_x0 = 0.0, div_target = 100.0;
  std::int64_t div_n_max = std::int64_t{1} << 40;
  auto* div_cmd = app.add_subcommand("diverge", "first witness index whose value exceeds a target");
  div_spec.attach(div_cmd);
  div_kernel.attach(div_cmd);
  div_cmd->add_option("--x0", div_x0, "budget");
  div_cmd->add_option("--target-M", div_target, "value threshold")->required();
  div_cmd->add_option("--n-max", div_n_max, "largest index searched")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitIo;
  }

  try {
    if (threads > 0) set_worker_count(threads);

    if (*classify_cmd) {
      print(verdict_json(classify(classify_spec.get())));
      return kExitOk;
    }

    if (*grid_cmd) {
      require(grid_step > 0.0 && grid_step <= 1.0, ErrorCode::InvalidParameter, "--step must lie in (0, 1]");
      const auto m = static_cast<std::int64_t>(std::llround(1.0 / grid_step));
      require(std::abs(static_cast<double>(m) * grid_step - 1.0) < 1e-9, ErrorCode::InvalidParameter,
              "--step must be 1/m for an integer m");
      std::ostringstream out;
      CsvWriter csv(out);
      csv.header({"alpha", "beta", "gamma", "delta", "verdict", "cause"});
      for (const auto& p : classify_grid(m)) {
        csv.field(p.alpha.value()).field(p.beta.value()).field(p.gamma.value()).field(p.delta.value());
        csv.field(to_string(p.verdict.verdict)).field(to_string(p.verdict.cause));
        csv.end_row();
      }
      write_or_print(grid_out, out.str());
      return kExitOk;
    }

    if (*eval_cmd) {
      const auto spec = eval_spec.get();
      const auto law = load_law(law_file);
      const auto parts = cpt_parts(law, spec);
      const auto value = cpt_value(law, spec);
      print({{"value", num(value)},
             {"kind", to_string(value.kind())},
             {"gains", num(parts.gains)},
             {"losses", num(parts.losses)}});
      return kExitOk;
    }

    if (*witness_cmd) {
      const auto cause = witness_cause_from_string(cause_name.c_str());
      std::optional<CptSpec> spec;
      if (!witness_spec.file.empty() || !std::isnan(witness_spec.alpha)) spec = witness_spec.get();
      if (!spec) {
        // Default exponents for each cause.
        switch (cause) {
          case WitnessCause::AlphaGeBeta: spec = CptSpec::power(0.9, 0.5, 1.0, 1.0); break;
          case WitnessCause::BetaDeltaBelowOne: spec = CptSpec::power(0.95, 0.96, 1.0, 1.0); break;
          case WitnessCause::AlphaGammaAboveOne: spec = CptSpec::power(0.9, 1.0, 0.2, 0.5); break;
        }
      }
      const auto report = run_witness(cause, *spec, KernelModel::from_variance(witness_v), witness_x0,
                                      witness_indices(n_max));
      const std::string path = witness_csv_path.empty()
                                   ? output_path(output_dir, "witness_" + cause_name + ".csv")
                                   : witness_csv_path;
      write_or_print(path, witness_csv(report));
      auto j = report_json(report);
      j["spec"] = ordered_json::parse(spec_to_json(*spec));
      j["csv_path"] = path;
      print(j);
      return kExitOk;
    }

    if (*audit_cmd) {
      const auto lemma = lemma_from_string(lemma_name);
      const auto cases = run_audit_corpus(lemma, corpus_size, audit_seed, audit_v);
      std::ostringstream out;
      CsvWriter csv(out);
      csv.header({"case", "family", "lhs", "rhs", "slack", "status", "exponents", "constants"});
      for (std::size_t i = 0; i < cases.size(); ++i) {
        const auto& c = cases[i];
        csv.field(static_cast<long long>(i)).field(c.family).field(c.lhs).field(c.rhs).field(c.slack());
        csv.field(to_string(c.status)).field(join_named(c.exponents)).field(join_named(c.constants));
        csv.end_row();
      }
      write_or_print(audit_out, out.str());
      const auto s = summarize(cases);
      std::cerr << to_string(lemma) << ": " << s.cases << " cases, " << s.passes << " pass, "
                << s.vacuous << " vacuous, " << s.violations << " violations\n";
      return s.violations == 0 ? kExitOk : kExitViolation;
    }

    if (*market_cmd) {
      const auto market = load_market(market_file);
      const auto model = solve_market_price_of_risk(market);
      ordered_json cells = ordered_json::array();
      for (const auto& c : model.cells())
        cells.push_back({{"t0", c.t0}, {"t1", c.t1}, {"theta", c.theta}, {"theta_bar", c.theta_bar},
                         {"residual", num(c.residual)}, {"variance", num(c.variance)}});
      ordered_json j{{"v", num(model.total_variance())},
                     {"split_time", num(model.split_time())},
                     {"split_variance", num(model.split_variance())},
                     {"cells", cells}};
      if (market_check) {
        const auto report = verify_assumptions(model, 1.0, 100000, market_seed);
        ordered_json checks = ordered_json::array();
        for (const auto& c : report.checks)
          checks.push_back({{"name", c.name}, {"passed", c.passed}, {"expected", num(c.expected)},
                            {"observed", num(c.observed)}, {"tolerance", num(c.tolerance)}});
        j["assumptions"] = checks;
        j["assumptions_passed"] = report.all_passed();
      }
      if (samples > 0) {
        const auto draws = sample_joint(model, sample_measure == "P" ? Measure::P : Measure::Q, samples,
                                        market_seed);
        std::ostringstream out;
        CsvWriter csv(out);
        csv.header({"rho", "U", "U_star"});
        for (const auto& d : draws) {
          csv.field(d.rho).field(d.u).field(d.u_star);
          csv.end_row();
        }
        const auto path = output_path(output_dir, "samples.csv");
        write_file(path, out.str());
        j["samples_csv_path"] = path;
      }
      print(j);
      return kExitOk;
    }

    if (*opt_cmd) {
      const auto spec = opt_spec.get();
      const auto model = opt_kernel.get();
      const auto result = optimize(spec, model, opt_x0, opt_iters, opt_seed, opt_options);

      std::ostringstream trace;
      CsvWriter tcsv(trace);
      tcsv.header({"step", "best_value"});
      for (std::size_t k = 0; k < result.trace.size(); ++k) {
        tcsv.field(static_cast<long long>(k)).field(result.trace[k]);
        tcsv.end_row();
      }
      const auto& p = result.best;
      std::ostringstream prof;
      CsvWriter pcsv(prof);
      pcsv.header({"u_lo", "u_hi", "ustar_lo", "ustar_hi", "p_mass", "q_mass", "value"});
      const std::size_t ns = p.grid().ustar_cells();
      for (std::size_t c = 0; c < p.values().size(); ++c) {
        const std::size_t i = c / ns, s = c % ns;
        pcsv.field(p.grid().u_edges[i]).field(p.grid().u_edges[i + 1]);
        pcsv.field(p.grid().ustar_edges[s]).field(p.grid().ustar_edges[s + 1]);
        pcsv.field(p.p_mass()[c]).field(p.q_mass()[c]).field(p.values()[c]);
        pcsv.end_row();
      }
      const auto trace_path = output_path(output_dir, "trace.csv");
      const auto profile_path = output_path(output_dir, "profile.csv");
      write_file(trace_path, trace.str());
      write_file(profile_path, prof.str());
      ordered_json j{{"best_value", num(result.best_value)},
                     {"trace_csv_path", trace_path},
                     {"profile_csv_path", profile_path},
                     {"best_start", result.best_start},
                     {"evaluations", result.evaluations},
                     {"budget_residual", num(p.budget_residual())}};
      if (spec.form() == Form::PurePower) j["analytic_bound"] = num(analytic_bound(spec, model, opt_x0).value);
      print(j);
      return kExitOk;
    }

    if (*div_cmd) {
      const auto spec = div_spec.get();
      const auto result = diverge(spec, div_kernel.get(), div_x0, div_target, div_n_max);
      auto j = ordered_json{{"n", result.n}, {"value", num(result.value)}, {"target_M", num(div_target)}};
      j["report"] = report_json(result.report);
      print(j);
      return kExitOk;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.code() == ErrorCode::Parse || e.code() == ErrorCode::Io ? kExitIo : kExitDomain;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  }
  return kExitOk;
}
