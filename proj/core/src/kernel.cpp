#include "cptlab/kernel.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "cptlab/error.hpp"
#include "cptlab/normal.hpp"
#include "cptlab/parallel.hpp"
#include "cptlab/quadrature.hpp"

namespace cptlab {
namespace {

constexpr std::size_t kChunk = 4096;
constexpr double kScoreRange = 7.5;

}  // namespace

void MarketSpec::validate() const {
  require(d >= 1 && k >= d, ErrorCode::InvalidParameter, "need 1 <= d <= k");
  require(horizon > 0.0 && std::isfinite(horizon), ErrorCode::InvalidParameter,
          "horizon T must be positive");
  require(!grid.empty() && grid.front() == 0.0, ErrorCode::InvalidParameter,
          "time grid must start at 0");
  for (std::size_t i = 1; i < grid.size(); ++i)
    require(grid[i] > grid[i - 1], ErrorCode::InvalidParameter,
            "time grid must be strictly increasing");
  require(grid.back() <= horizon, ErrorCode::InvalidParameter, "time grid runs past the horizon");
  const auto cells = cell_edges().size() - 1;
  require(mu.size() == cells && sigma.size() == cells, ErrorCode::InvalidParameter,
          "mu and sigma need one entry per grid cell (" + std::to_string(cells) + ")");
  for (std::size_t c = 0; c < cells; ++c) {
    require(mu[c].size() == static_cast<std::size_t>(d), ErrorCode::InvalidParameter,
            "mu row " + std::to_string(c) + " must have d entries");
    require(sigma[c].size() == static_cast<std::size_t>(d), ErrorCode::InvalidParameter,
            "sigma cell " + std::to_string(c) + " must have d rows");
    for (const auto& row : sigma[c])
      require(row.size() == static_cast<std::size_t>(k), ErrorCode::InvalidParameter,
              "sigma rows must have k entries");
  }
  require(initial_prices.empty() || initial_prices.size() == static_cast<std::size_t>(d),
          ErrorCode::InvalidParameter, "s0 must have d entries");
  for (double s : initial_prices)
    require(s > 0.0, ErrorCode::InvalidParameter, "initial prices must be positive");
}

std::vector<double> MarketSpec::cell_edges() const {
  auto edges = grid;
  if (edges.size() < 2 || edges.back() < horizon) edges.push_back(horizon);
  return edges;
}

KernelModel KernelModel::from_variance(double v, double split_variance) {
  require(v >= 0.0 && std::isfinite(v), ErrorCode::InvalidParameter,
          "total variance must be finite and >= 0");
  KernelModel m;
  m.v_ = v;
  if (v > 0.0) {
    if (split_variance == 0.0) split_variance = 0.5 * v;
    require(split_variance > 0.0 && split_variance < v, ErrorCode::InvalidParameter,
            "split variance must lie in (0, v)");
    m.v_hat_ = split_variance;
    m.t_hat_ = split_variance / v;
  }
  return m;
}

KernelModel solve_market_price_of_risk(const MarketSpec& market) {
  market.validate();
  const auto edges = market.cell_edges();
  KernelModel model;
  const int d = market.d, k = market.k;
  std::vector<double> partial;  // cumulative variance at the right edge of each cell
  for (std::size_t c = 0; c + 1 < edges.size(); ++c) {
    Eigen::MatrixXd sigma(d, k);
    Eigen::VectorXd mu(d);
    for (int i = 0; i < d; ++i) {
      mu(i) = market.mu[c][i];
      for (int j = 0; j < k; ++j) sigma(i, j) = market.sigma[c][i][j];
    }
    // sigma^T = Q R, so sigma = R^T Q^T; sigma_bar = R^T acts on the first d
    // rotated drivers and theta = Q theta_bar is the least-norm solution.
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(sigma.transpose());
    const Eigen::MatrixXd r = qr.matrixQR().topRows(d).triangularView<Eigen::Upper>();
    const double scale = std::max(r.cwiseAbs().maxCoeff(), 1e-300);
    for (int i = 0; i < d; ++i)
      require(std::abs(r(i, i)) > 1e-13 * scale, ErrorCode::SingularMatrix,
              "sigma sigma^T is singular on cell " + std::to_string(c));
    const Eigen::MatrixXd sigma_bar = r.transpose();
    const Eigen::VectorXd theta_bar = sigma_bar.triangularView<Eigen::Lower>().solve(-mu);
    Eigen::VectorXd padded = Eigen::VectorXd::Zero(k);
    padded.head(d) = theta_bar;
    const Eigen::VectorXd theta = qr.householderQ() * padded;

    KernelModel::Cell cell;
    cell.t0 = edges[c];
    cell.t1 = edges[c + 1];
    cell.theta.assign(theta.data(), theta.data() + k);
    cell.theta_bar.assign(theta_bar.data(), theta_bar.data() + d);
    cell.sigma_bar.assign(d, std::vector<double>(d));
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) cell.sigma_bar[i][j] = sigma_bar(i, j);
    cell.residual = (sigma * theta + mu).cwiseAbs().maxCoeff();
    cell.variance = theta.squaredNorm() * (cell.t1 - cell.t0);
    model.v_ += cell.variance;
    partial.push_back(model.v_);
    model.cells_.push_back(std::move(cell));
  }
  if (model.v_ > 0.0) {
    // Earliest interior grid point with partial variance in (0, v).
    for (std::size_t c = 0; c + 1 < partial.size(); ++c) {
      if (partial[c] > 0.0 && partial[c] < model.v_) {
        model.t_hat_ = model.cells_[c].t1;
        model.v_hat_ = partial[c];
        break;
      }
    }
    if (model.v_hat_ == 0.0) {
      // No such grid point: split the first cell carrying variance at its midpoint.
      double before = 0.0;
      for (const auto& cell : model.cells_) {
        if (cell.variance > 0.0) {
          model.t_hat_ = 0.5 * (cell.t0 + cell.t1);
          model.v_hat_ = before + 0.5 * cell.variance;
          break;
        }
        before += cell.variance;
      }
    }
  }
  return model;
}

double KernelModel::rho_at(double u) const {
  if (v_ == 0.0) return 1.0;
  return std::exp(0.5 * v_ + std::sqrt(v_) * normal::quantile(u));
}

double KernelModel::cdf_p(double u) const {
  if (u <= 0.0) return 0.0;
  if (u >= 1.0) return 1.0;
  if (v_ == 0.0) return u;
  return normal::cdf(normal::quantile(u) + std::sqrt(v_));
}

double KernelModel::upper_p(double w) const {
  if (w <= 0.0) return 0.0;
  if (w >= 1.0) return 1.0;
  if (v_ == 0.0) return w;
  return normal::cdf(normal::quantile(w) - std::sqrt(v_));
}

double KernelModel::mass_p(double u0, double u1) const {
  if (u1 <= u0) return 0.0;
  if (u0 >= 0.5) return upper_p(1.0 - u0) - upper_p(1.0 - u1);
  return cdf_p(u1) - cdf_p(u0);
}

double KernelModel::moment_p(double r) const { return std::exp(0.5 * r * (r - 1.0) * v_); }

Law kernel_law(const KernelModel& model, Measure measure, int grid_size) {
  const double v = model.total_variance();
  require(v > 0.0, ErrorCode::DegenerateMarket, "kernel law needs total variance v > 0");
  require(grid_size >= 3, ErrorCode::InvalidParameter, "grid size must be at least 3");
  if (grid_size % 2 == 0) ++grid_size;  // keep the median on a node
  const double sd = std::sqrt(v);
  const double log_mean = measure == Measure::P ? -0.5 * v : 0.5 * v;
  std::vector<GridNode> nodes;
  nodes.reserve(static_cast<std::size_t>(grid_size) + 1);
  nodes.push_back({0.0, 0.0});
  for (int i = 0; i < grid_size; ++i) {
    const double z = -kScoreRange + 2.0 * kScoreRange * i / (grid_size - 1);
    nodes.push_back({normal::cdf(z), std::exp(log_mean + sd * z)});
  }
  // Local power fit of the log-normal survival at the last node.
  const double x_end = nodes.back().value;
  const double mass = 1.0 - nodes.back().level;
  const double kappa = normal::pdf(kScoreRange) / (normal::sf(kScoreRange) * sd);
  const PowerTail tail{mass * std::pow(x_end, kappa), kappa};
  return Law::quantile_grid(std::move(nodes), tail, std::nullopt, measure, true);
}

std::vector<JointSample> sample_joint(const KernelModel& model, Measure measure, std::size_t n,
                                      std::uint64_t seed) {
  const double v = model.total_variance();
  const double vh = model.split_variance();
  require(v > 0.0, ErrorCode::DegenerateMarket, "sampling needs total variance v > 0");
  require(vh > 0.0 && vh < v, ErrorCode::InvalidParameter, "split variance must lie in (0, v)");
  std::vector<JointSample> out(n);
  const std::size_t chunks = (n + kChunk - 1) / kChunk;
  const double sd_hat = std::sqrt(vh);
  const double sd_rest = std::sqrt(v - vh);
  const double sd_total = std::sqrt(v);
  const double sd_g = std::sqrt(v * (v - vh) / vh);
  const bool under_q = measure == Measure::Q;
  parallel_for(chunks, [&](std::size_t chunk) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(chunk), static_cast<std::uint32_t>(chunk >> 32)};
    std::mt19937_64 rng(seq);
    std::normal_distribution<double> gauss;
    const std::size_t begin = chunk * kChunk;
    const std::size_t end = std::min(n, begin + kChunk);
    for (std::size_t i = begin; i < end; ++i) {
      // Stochastic integral I_t = int theta dW at t_hat and T; under Q the
      // Girsanov drift adds the partial variance.
      const double z1 = gauss(rng);
      const double z2 = gauss(rng);
      const double i_hat = sd_hat * z1 + (under_q ? vh : 0.0);
      const double i_end = i_hat + sd_rest * z2 + (under_q ? v - vh : 0.0);
      const double log_rho = i_end - 0.5 * v;
      const double g = (v / vh) * i_hat - i_end;
      out[i].rho = std::exp(log_rho);
      out[i].u = normal::cdf((log_rho - 0.5 * v) / sd_total);
      out[i].u_star = normal::cdf(g / sd_g);
    }
  });
  return out;
}

bool AssumptionReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed; });
}

AssumptionReport verify_assumptions(const KernelModel& model, double x0, std::size_t mc_samples,
                                    std::uint64_t seed) {
  AssumptionReport report;
  const double v = model.total_variance();
  report.checks.push_back({"continuity of F_rho^Q", v > 0.0, 1.0, v > 0.0 ? 1.0 : 0.0, 0.0});

  const double sd = std::sqrt(v);
  for (double p : {1.0, 2.0, 4.0, 8.0}) {
    for (double r : {p, -p}) {
      const double closed = model.moment_p(r);
      double numeric = 1.0;
      if (v > 0.0) {
        const double center = r * sd;
        auto integrand = [&](double z) { return std::exp(r * (-0.5 * v + sd * z)) * normal::pdf(z); };
        quad::Options opts;
        opts.abs_tol = 1e-14;
        const double cut = center;
        numeric = quad::integrate(integrand, center - 40.0, center + 40.0, std::span(&cut, 1), opts)
                      .value;
      }
      const double tol = 1e-9 * closed;
      report.checks.push_back({"E_P[rho^" + std::to_string(static_cast<int>(r)) + "]",
                               std::isfinite(closed) && std::abs(numeric - closed) <= tol, closed,
                               numeric, tol});
    }
  }

  report.checks.push_back({"budget E_Q[x0/rho] closed form", true, x0, x0 * model.moment_p(0.0),
                           0.0});
  if (v > 0.0 && mc_samples > 1) {
    auto mc = [&](Measure m, auto&& fn) {
      const auto draws = sample_joint(model, m, mc_samples, seed);
      double sum = 0.0, sum_sq = 0.0;
      for (const auto& s : draws) {
        const double x = fn(s);
        sum += x;
        sum_sq += x * x;
      }
      const double count = static_cast<double>(draws.size());
      const double mean = sum / count;
      const double var = std::max(0.0, sum_sq / count - mean * mean) * count / (count - 1.0);
      return std::pair{mean, std::sqrt(var / count)};
    };
    const auto [budget, budget_se] = mc(Measure::Q, [&](const JointSample& s) { return x0 / s.rho; });
    report.checks.push_back({"budget E_Q[x0/rho] Monte Carlo",
                             std::abs(budget - x0) <= 3.0 * budget_se, x0, budget,
                             3.0 * budget_se});
    const auto [mart, mart_se] = mc(Measure::P, [](const JointSample& s) { return s.rho; });
    report.checks.push_back({"martingale E_P[rho] Monte Carlo",
                             std::abs(mart - 1.0) <= 3.0 * mart_se, 1.0, mart, 3.0 * mart_se});
  }
  return report;
}

}  // namespace cptlab
