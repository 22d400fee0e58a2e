#include "cptlab/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <random>

#include "cptlab/error.hpp"
#include "cptlab/parallel.hpp"
#include "cptlab/regime.hpp"

namespace cptlab {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void check_edges(const std::vector<double>& edges, const char* name) {
  require(edges.size() >= 2 && edges.front() == 0.0 && edges.back() == 1.0,
          ErrorCode::InvalidParameter, std::string(name) + " edges must run from 0 to 1");
  for (std::size_t i = 1; i < edges.size(); ++i)
    require(edges[i] > edges[i - 1], ErrorCode::InvalidParameter,
            std::string(name) + " edges must be strictly increasing");
}

std::vector<double> uniform_edges(std::size_t cells) {
  require(cells >= 1, ErrorCode::InvalidParameter, "grid needs at least one cell");
  std::vector<double> e(cells + 1);
  for (std::size_t i = 0; i <= cells; ++i) e[i] = static_cast<double>(i) / static_cast<double>(cells);
  e.back() = 1.0;
  return e;
}

double value_of(const Law& law, const CptSpec& spec, const EngineOptions& options) {
  const auto v = cpt_value(law, spec, options);
  if (v.is_infinite()) return std::numeric_limits<double>::infinity();
  return v.value();
}

// Integral of one payoff segment over [lo, hi] (already inside the segment).
double segment_integral(const PayoffSegment& s, const Level& lo, const Level& hi) {
  using K = PayoffSegment::Kind;
  switch (s.kind) {
    case K::Constant:
      return s.c * (hi.u - lo.u);
    case K::LowPower:
      if (s.k == 1.0) return s.c * std::log(hi.u / lo.u);
      return s.c * (std::pow(hi.u, 1.0 - s.k) - std::pow(lo.u, 1.0 - s.k)) / (1.0 - s.k);
    case K::HighPower:
      if (s.k == 1.0) return -s.c * std::log(lo.w / hi.w);
      return -s.c * (std::pow(lo.w, 1.0 - s.k) - std::pow(hi.w, 1.0 - s.k)) / (1.0 - s.k);
  }
  return 0.0;
}

double payoff_integral(const UPayoff& f, const Level& a, const Level& b) {
  double sum = 0.0;
  for (const auto& s : f.segments()) {
    const Level lo = s.start.u > a.u ? s.start : a;
    const Level hi = s.end.u < b.u ? s.end : b;
    if (hi.u > lo.u) sum += segment_integral(s, lo, hi);
  }
  return sum;
}

struct StartOutcome {
  std::vector<double> values;
  double best = kNegInf;
  std::vector<double> trace;
};

class Search {
 public:
  Search(const CptSpec& spec, const PayoffProfile& base, std::size_t iterations,
         const OptimizeOptions& options)
      : spec_(spec), base_(base), iterations_(iterations), options_(options) {}

  StartOutcome continuous(std::vector<double> start) {
    StartOutcome out;
    PayoffProfile p = base_;
    p.set_values(std::move(start));
    out.values = p.values();
    out.best = score(p, out);
    const std::size_t n = out.values.size();
    double step = options_.initial_step > 0.0 ? options_.initial_step
                                              : std::max(1.0, std::abs(base_.budget()));
    while (out.trace.size() < iterations_ && step >= options_.min_step) {
      bool improved = false;
      for (std::size_t i = 0; i < n && out.trace.size() < iterations_; ++i) {
        for (double sign : {1.0, -1.0}) {
          if (out.trace.size() >= iterations_) break;
          auto cand = out.values;
          cand[i] += sign * step;
          p.set_values(std::move(cand));
          const double val = score(p, out);
          if (val > out.best) {
            out.best = val;
            out.values = p.values();
            improved = true;
            break;
          }
        }
      }
      if (!improved) step *= 0.5;
    }
    return out;
  }

  StartOutcome quantized(std::vector<std::size_t> idx) {
    StartOutcome out;
    const auto& levels = options_.levels;
    PayoffProfile p = base_;
    auto assign = [&](const std::vector<std::size_t>& ix) {
      std::vector<double> v(ix.size());
      for (std::size_t i = 0; i < ix.size(); ++i) v[i] = levels[ix[i]];
      p.set_values(std::move(v));
    };
    assign(idx);
    out.values = p.values();
    out.best = score(p, out);
    const std::size_t n = idx.size(), m = levels.size();
    auto try_move = [&](std::vector<std::size_t> cand) {
      assign(cand);
      const double val = score(p, out);
      if (val > out.best) {
        out.best = val;
        out.values = p.values();
        idx = std::move(cand);
        return true;
      }
      return false;
    };
    while (out.trace.size() < iterations_) {
      bool improved = false;
      for (std::size_t i = 0; i < n && !improved; ++i)
        for (std::size_t l = 0; l < m && !improved && out.trace.size() < iterations_; ++l) {
          if (l == idx[i]) continue;
          auto cand = idx;
          cand[i] = l;
          improved = try_move(std::move(cand));
        }
      for (std::size_t i = 0; i < n && !improved; ++i)
        for (std::size_t j = i + 1; j < n && !improved; ++j)
          for (std::size_t li = 0; li < m && !improved; ++li)
            for (std::size_t lj = 0; lj < m && !improved && out.trace.size() < iterations_; ++lj) {
              if (li == idx[i] || lj == idx[j]) continue;
              auto cand = idx;
              cand[i] = li;
              cand[j] = lj;
              improved = try_move(std::move(cand));
            }
      if (!improved) break;
    }
    return out;
  }

 private:
  double score(const PayoffProfile& p, StartOutcome& out) {
    const double val = value_of(p.law(), spec_, options_.engine);
    out.trace.push_back(std::max(out.best, val));
    return val;
  }
  const CptSpec& spec_;
  const PayoffProfile& base_;
  std::size_t iterations_;
  const OptimizeOptions& options_;
};

}  // namespace

ProfileGrid ProfileGrid::make(std::size_t u_cells, std::size_t ustar_cells, double u_min) {
  require(u_cells >= 1 && ustar_cells >= 1, ErrorCode::InvalidParameter,
          "grid needs at least one cell per axis");
  require(u_min > 0.0 && u_min < 0.5, ErrorCode::InvalidParameter, "u_min must lie in (0, 1/2)");
  if (u_cells <= 2) return uniform(u_cells, ustar_cells);
  const double n = static_cast<double>(u_cells);
  const double scale = std::log(u_min / (1.0 - u_min)) / (2.0 / n - 1.0);
  std::vector<double> e{0.0};
  for (std::size_t i = 1; i < u_cells; ++i) {
    const double t = scale * (2.0 * static_cast<double>(i) / n - 1.0);
    e.push_back(1.0 / (1.0 + std::exp(-t)));
  }
  e.push_back(1.0);
  return from_edges(std::move(e), uniform_edges(ustar_cells));
}

ProfileGrid ProfileGrid::uniform(std::size_t u_cells, std::size_t ustar_cells) {
  return from_edges(uniform_edges(u_cells), uniform_edges(ustar_cells));
}

ProfileGrid ProfileGrid::from_edges(std::vector<double> u_edges, std::vector<double> ustar_edges) {
  check_edges(u_edges, "U");
  check_edges(ustar_edges, "U*");
  return {std::move(u_edges), std::move(ustar_edges)};
}

PayoffProfile::PayoffProfile(ProfileGrid grid, const KernelModel& model, double budget)
    : grid_(std::move(grid)), model_(model), budget_(budget) {
  require(std::isfinite(budget), ErrorCode::InvalidParameter, "budget must be finite");
  const std::size_t nu = grid_.u_cells(), ns = grid_.ustar_cells();
  p_mass_.resize(nu * ns);
  q_mass_.resize(nu * ns);
  for (std::size_t i = 0; i < nu; ++i) {
    const double a = grid_.u_edges[i], b = grid_.u_edges[i + 1];
    const double pu = model_.mass_p(a, b);
    for (std::size_t j = 0; j < ns; ++j) {
      const double ds = grid_.ustar_edges[j + 1] - grid_.ustar_edges[j];
      p_mass_[i * ns + j] = pu * ds;
      q_mass_[i * ns + j] = (b - a) * ds;
    }
  }
  values_.assign(nu * ns, budget_);
}

void PayoffProfile::set_values(std::vector<double> values) {
  require(values.size() == values_.size(), ErrorCode::InvalidParameter,
          "profile needs one value per grid cell");
  for (double v : values)
    require(std::isfinite(v), ErrorCode::InvalidParameter, "profile values must be finite");
  values_ = std::move(values);
  shift_to_budget();
}

double PayoffProfile::q_mean() const {
  double m = 0.0;
  for (std::size_t i = 0; i < values_.size(); ++i) m += values_[i] * q_mass_[i];
  return m;
}

void PayoffProfile::shift_to_budget() {
  // Two passes so the residual is at rounding level even for large spreads.
  for (int pass = 0; pass < 2; ++pass) {
    const double c = budget_ - q_mean();
    for (double& v : values_) v += c;
  }
}

Law PayoffProfile::law() const {
  std::vector<Atom> atoms;
  atoms.reserve(values_.size());
  for (std::size_t i = 0; i < values_.size(); ++i) atoms.push_back({values_[i], p_mass_[i], q_mass_[i]});
  return Law::discrete(std::move(atoms));
}

ExtendedValue evaluate(const PayoffProfile& profile, const CptSpec& spec,
                       const EngineOptions& options) {
  return cpt_value(profile.law(), spec, options);
}

Law monotone_rearrangement(const PayoffProfile& profile) {
  std::vector<std::size_t> order(profile.values().size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  const auto& v = profile.values();
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v[a] > v[b]; });
  std::vector<Atom> atoms;
  double a = 0.0;
  for (std::size_t k = 0; k < order.size(); ++k) {
    const double q = profile.q_mass()[order[k]];
    const double b = k + 1 == order.size() ? 1.0 : std::min(1.0, a + q);
    atoms.push_back({v[order[k]], profile.model().mass_p(a, b), q});
    a = b;
  }
  return Law::discrete(std::move(atoms));
}

PayoffProfile embed(const UPayoff& payoff, const ProfileGrid& grid, const KernelModel& model) {
  const std::size_t nu = grid.u_cells(), ns = grid.ustar_cells();
  std::vector<double> cell(nu);
  double budget = 0.0;
  for (std::size_t i = 0; i < nu; ++i) {
    const Level a = Level::from_u(grid.u_edges[i]);
    const Level b = i + 1 == nu ? Level::from_w(0.0) : Level::from_u(grid.u_edges[i + 1]);
    const double integral = payoff_integral(payoff, a, b);
    cell[i] = integral / (b.u - a.u);
    budget += integral;
  }
  PayoffProfile profile(grid, model, budget);
  std::vector<double> values(nu * ns);
  for (std::size_t i = 0; i < nu; ++i)
    for (std::size_t j = 0; j < ns; ++j) values[i * ns + j] = cell[i];
  profile.set_values(std::move(values));
  return profile;
}

OptimizeResult optimize(const CptSpec& spec, const KernelModel& model, double x0,
                        std::size_t iterations, std::uint64_t seed,
                        const OptimizeOptions& options) {
  const auto verdict = classify(spec);
  if (verdict.verdict != Verdict::WellPosed)
    fail(ErrorCode::Regime, "optimize needs a well-posed spec (got " +
                                std::string(to_string(verdict.verdict)) + ", " +
                                std::string(to_string(verdict.cause)) + "); use diverge");
  require(iterations >= 1, ErrorCode::InvalidParameter, "iterations must be positive");
  require(options.starts >= 1, ErrorCode::InvalidParameter, "need at least one start");
  const bool quantized = !options.levels.empty();
  const PayoffProfile base(ProfileGrid::make(options.u_cells, options.ustar_cells, options.u_min),
                           model, x0);
  const std::size_t n = base.values().size();
  const std::size_t nu = base.grid().u_cells(), ns = base.grid().ustar_cells();
  const double scale = std::max(1.0, std::abs(x0));

  std::vector<StartOutcome> outcomes(options.starts);
  parallel_for(options.starts, [&](std::size_t s) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      0x6f707469u /* "opti" */, static_cast<std::uint32_t>(s)};
    std::mt19937_64 rng(seq);
    Search search(spec, base, iterations, options);
    // Sort each U* column so the payoff is non-increasing in U.
    auto sort_in_u = [&](auto& x, auto greater) {
      for (std::size_t j = 0; j < ns; ++j) {
        std::vector<std::decay_t<decltype(x[0])>> col(nu);
        for (std::size_t i = 0; i < nu; ++i) col[i] = x[i * ns + j];
        std::sort(col.begin(), col.end(), greater);
        for (std::size_t i = 0; i < nu; ++i) x[i * ns + j] = col[i];
      }
    };
    if (quantized) {
      std::uniform_int_distribution<std::size_t> pick(0, options.levels.size() - 1);
      std::vector<std::size_t> idx(n, 0);
      if (s > 0)
        for (auto& i : idx) i = pick(rng);
      if (s == 1)
        sort_in_u(idx, [&](std::size_t a, std::size_t b) { return options.levels[a] > options.levels[b]; });
      outcomes[s] = search.quantized(std::move(idx));
    } else {
      std::normal_distribution<double> z;
      std::vector<double> start(n, x0);
      if (s > 0)
        for (auto& v : start) v = x0 + scale * z(rng);
      if (s == 1) sort_in_u(start, std::greater<double>());
      outcomes[s] = search.continuous(std::move(start));
    }
  });

  std::size_t best = 0;
  std::size_t length = 0, evaluations = 0;
  std::vector<double> start_values;
  for (std::size_t s = 0; s < outcomes.size(); ++s) {
    if (outcomes[s].best > outcomes[best].best) best = s;
    length = std::max(length, outcomes[s].trace.size());
    evaluations += outcomes[s].trace.size();
    start_values.push_back(outcomes[s].best);
  }
  std::vector<double> trace(length, kNegInf);
  for (const auto& o : outcomes)
    for (std::size_t k = 0; k < length; ++k)
      trace[k] = std::max(trace[k], o.trace[std::min(k, o.trace.size() - 1)]);
  PayoffProfile profile = base;
  profile.set_values(outcomes[best].values);
  return {std::move(profile), outcomes[best].best, best, std::move(trace), std::move(start_values),
          evaluations};
}

ExhaustiveResult exhaustive_search(const CptSpec& spec, const ProfileGrid& grid,
                                   const KernelModel& model, double x0,
                                   const std::vector<double>& levels,
                                   const EngineOptions& options) {
  require(!levels.empty(), ErrorCode::InvalidParameter, "need at least one level");
  PayoffProfile p(grid, model, x0);
  const std::size_t n = p.values().size(), m = levels.size();
  require(std::pow(static_cast<double>(m), static_cast<double>(n)) <= 1e7, ErrorCode::Precondition,
          "exhaustive search limited to 1e7 assignments");
  std::vector<std::size_t> idx(n, 0);
  ExhaustiveResult out{kNegInf, idx, 0};
  for (;;) {
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = levels[idx[i]];
    p.set_values(std::move(v));
    const double val = value_of(p.law(), spec, options);
    ++out.evaluated;
    if (val > out.best_value) {
      out.best_value = val;
      out.best_assignment = idx;
    }
    std::size_t k = 0;
    while (k < n && ++idx[k] == m) idx[k++] = 0;
    if (k == n) break;
  }
  return out;
}

DivergeResult diverge(const CptSpec& spec, const KernelModel& model, double x0, double target,
                      std::int64_t n_max) {
  const auto verdict = classify(spec);
  if (verdict.verdict != Verdict::IllPosed)
    fail(ErrorCode::Regime, "diverge needs an ill-posed spec (got " +
                                std::string(to_string(verdict.verdict)) + ", " +
                                std::string(to_string(verdict.cause)) + ")");
  require(std::isfinite(target), ErrorCode::InvalidParameter, "target must be finite");
  const auto cause = witness_cause_for(verdict.cause);
  const bool shifted = cause != WitnessCause::AlphaGeBeta && x0 != 0.0;

  WitnessReport report = run_witness(cause, spec, model, x0, {1});
  report.x0 = x0;
  report.rows.clear();
  std::map<std::int64_t, WitnessRow> rows;

  auto value_at = [&](std::int64_t n) {
    auto it = rows.find(n);
    if (it == rows.end()) {
      WitnessRow row;
      if (!shifted) {
        row = run_witness(cause, spec, model, x0, {n}).rows.front();
      } else {
        // Constructions 2 and 3 are built at x0 = 0; add x0 to every outcome.
        const auto payoff = witness_payoff(cause, spec, n);
        const auto parts = cpt_parts(payoff_law(payoff, model).shifted(x0), spec);
        row.n = n;
        row.closed_form = std::numeric_limits<double>::quiet_NaN();
        row.gains = parts.gains.is_infinite() ? std::numeric_limits<double>::infinity()
                                              : parts.gains.value();
        row.losses = parts.losses.value();
        require(!parts.losses.is_infinite(), ErrorCode::UndefinedFunctional,
                "witness loss side is infinite");
        row.numeric = row.gains - row.losses;
        row.numeric_kind = parts.gains.kind();
        row.budget_residual = std::abs(payoff.mean_q());
      }
      it = rows.emplace(n, row).first;
    }
    const auto& r = it->second;
    return r.numeric_kind == ExtendedValue::Kind::PosInfinite
               ? std::numeric_limits<double>::infinity()
               : r.numeric;
  };

  std::int64_t lo = 0, hi = 1;
  while (!(value_at(hi) > target)) {
    lo = hi;
    require(hi <= n_max / 2, ErrorCode::NonConvergence,
            "no index up to " + std::to_string(n_max) + " exceeds the target");
    hi *= 2;
  }
  while (hi - lo > 1) {
    const std::int64_t mid = lo + (hi - lo) / 2;
    if (value_at(mid) > target)
      hi = mid;
    else
      lo = mid;
  }
  for (auto& [n, row] : rows) report.rows.push_back(row);
  return {hi, rows.at(hi).numeric, std::move(report)};
}

}  // namespace cptlab
