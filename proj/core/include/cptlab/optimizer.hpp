#pragma once

#include <cstdint>
#include <vector>

#include "cptlab/choquet.hpp"
#include "cptlab/kernel.hpp"
#include "cptlab/preferences.hpp"
#include "cptlab/witness.hpp"

namespace cptlab {

/// Cell edges of a tensor grid over (U, U*) in (0,1)^2.
struct ProfileGrid {
  std::vector<double> u_edges;
  std::vector<double> ustar_edges;

  std::size_t u_cells() const { return u_edges.size() - 1; }
  std::size_t ustar_cells() const { return ustar_edges.size() - 1; }
  std::size_t size() const { return u_cells() * ustar_cells(); }

  /// U edges equally spaced in logit(u), so geometric near 0 and 1 with the
  /// first interior edge at u_min; U* edges uniform.
  static ProfileGrid make(std::size_t u_cells, std::size_t ustar_cells, double u_min = 1e-3);
  static ProfileGrid uniform(std::size_t u_cells, std::size_t ustar_cells);
  static ProfileGrid from_edges(std::vector<double> u_edges, std::vector<double> ustar_edges);
};

/// Payoff constant on each grid cell, stored row-major as [u_cell][ustar_cell].
class PayoffProfile {
 public:
  /// All cells start at the budget (the constant payoff).
  PayoffProfile(ProfileGrid grid, const KernelModel& model, double budget);

  const ProfileGrid& grid() const noexcept { return grid_; }
  const KernelModel& model() const noexcept { return model_; }
  double budget() const noexcept { return budget_; }
  const std::vector<double>& values() const noexcept { return values_; }
  const std::vector<double>& p_mass() const noexcept { return p_mass_; }
  const std::vector<double>& q_mass() const noexcept { return q_mass_; }

  /// Replaces the values and shifts them additively onto the budget.
  void set_values(std::vector<double> values);
  double q_mean() const;
  double budget_residual() const { return q_mean() - budget_; }

  /// Law of the payoff: one atom per cell with its P and Q masses.
  Law law() const;

 private:
  void shift_to_budget();

  ProfileGrid grid_;
  KernelModel model_;
  double budget_;
  std::vector<double> values_;
  std::vector<double> p_mass_;
  std::vector<double> q_mass_;
};

ExtendedValue evaluate(const PayoffProfile& profile, const CptSpec& spec,
                       const EngineOptions& options = {});

/// Same Q-law as the profile, placed non-increasing in U (largest values where
/// the kernel is cheapest). Cells are split wherever the Q-masses require it.
Law monotone_rearrangement(const PayoffProfile& profile);

/// Cell-wise Q-average of f(U) on the grid; the budget is E_Q[f(U)].
PayoffProfile embed(const UPayoff& payoff, const ProfileGrid& grid, const KernelModel& model);

struct OptimizeOptions {
  std::size_t u_cells = 8;
  std::size_t ustar_cells = 1;
  double u_min = 1e-3;
  std::size_t starts = 4;
  double initial_step = 0.0;  // 0 means max(1, |x0|)
  double min_step = 1e-7;
  /// Non-empty: payoff values restricted to these levels before the budget shift.
  std::vector<double> levels;
  EngineOptions engine;
};

struct OptimizeResult {
  PayoffProfile best;
  double best_value;
  std::size_t best_start;
  /// Best-so-far over all starts after each evaluation step; non-decreasing.
  std::vector<double> trace;
  std::vector<double> start_values;
  std::size_t evaluations;
};

/// Coordinate pattern search from several starts: start 0 is the constant x0,
/// start 1 a random profile sorted non-increasing in U, the rest random.
/// `iterations` bounds the evaluations per start. Requires a WellPosed spec.
OptimizeResult optimize(const CptSpec& spec, const KernelModel& model, double x0,
                        std::size_t iterations, std::uint64_t seed,
                        const OptimizeOptions& options = {});

/// Best value over every assignment of `levels` to the cells, each shifted
/// onto the budget.
struct ExhaustiveResult {
  double best_value;
  std::vector<std::size_t> best_assignment;
  std::size_t evaluated;
};
ExhaustiveResult exhaustive_search(const CptSpec& spec, const ProfileGrid& grid,
                                   const KernelModel& model, double x0,
                                   const std::vector<double>& levels,
                                   const EngineOptions& options = {});

struct DivergeResult {
  std::int64_t n;
  double value;
  WitnessReport report;  // every evaluated index, sorted
};

/// First index n with V(X_n) > target for the witness matching the spec's
/// cause: galloping over powers of two, then bisection, which assumes V(X_n)
/// is non-decreasing in n. Requires an IllPosed spec.
DivergeResult diverge(const CptSpec& spec, const KernelModel& model, double x0, double target,
                      std::int64_t n_max = std::int64_t{1} << 40);

}  // namespace cptlab
