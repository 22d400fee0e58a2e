#pragma once

#include <memory>
#include <optional>
#include <span>
#include <vector>

namespace cptlab {

enum class Measure { P, Q };

const char* to_string(Measure measure) noexcept;

/// One support point carrying its mass under both the physical measure P and
/// the pricing measure Q; prob_q / prob_p is the kernel rho on the atom.
struct Atom {
  double value = 0.0;
  double prob_p = 0.0;
  double prob_q = 0.0;
};

/// Power tail: survival of |X| beyond the tabulated body is coef * y^-exponent.
struct PowerTail {
  double coef = 1.0;
  double exponent = 1.0;
};

struct GridNode {
  double level = 0.0;  // s in [0, 1]
  double value = 0.0;  // quantile at s
};

/// A continuous (or mixed) scalar law in a single measure.
///
/// The body occupies [body_min(), body_max()]; outside it the law is given by
/// explicit power tails, never by extrapolation. Survival and the left-limit
/// CDF are separate calls so either side can be evaluated without
/// cancellation.
class ContinuousLaw {
 public:
  virtual ~ContinuousLaw() = default;

  /// Pr{X > x}.
  virtual double survival(double x) const = 0;
  /// Pr{X < x}.
  virtual double cdf_below(double x) const = 0;
  /// Quantile at level s in (0, 1).
  virtual double quantile(double s) const = 0;

  virtual double body_min() const = 0;
  virtual double body_max() const = 0;
  virtual std::optional<PowerTail> upper_tail() const { return std::nullopt; }
  virtual std::optional<PowerTail> lower_tail() const { return std::nullopt; }

  /// True when the tails are sub-polynomial (every moment exists) and the
  /// power tails above are only local fits.
  virtual bool all_moments_finite() const { return false; }

  /// Abscissae where the survival function has kinks or jumps.
  virtual std::vector<double> breakpoints() const { return {}; }

  /// E[min(X, a)] for a nonnegative law. The default integrates the survival
  /// function numerically; exact implementations override it.
  virtual double truncated_mean(double a) const;

  /// Consistency between body and fitted tails; relative mismatch at the
  /// junction points (0 when there are no tails).
  virtual double tail_mismatch() const { return 0.0; }

  /// Tabulated form used for serialization.
  virtual std::vector<GridNode> tabulate(int points) const;
};

/// Piecewise-linear quantile function on a tabulated grid with optional
/// power tails. Equal levels encode gaps in the support; equal values encode
/// atoms.
class TabulatedQuantile final : public ContinuousLaw {
 public:
  TabulatedQuantile(std::vector<GridNode> nodes, std::optional<PowerTail> upper,
                    std::optional<PowerTail> lower, bool light_tails = false);

  double survival(double x) const override;
  double cdf_below(double x) const override;
  double quantile(double s) const override;
  double body_min() const override { return nodes_.front().value; }
  double body_max() const override { return nodes_.back().value; }
  std::optional<PowerTail> upper_tail() const override { return upper_; }
  std::optional<PowerTail> lower_tail() const override { return lower_; }
  bool all_moments_finite() const override { return light_tails_; }
  std::vector<double> breakpoints() const override;
  double truncated_mean(double a) const override;
  double tail_mismatch() const override;
  std::vector<GridNode> tabulate(int points) const override;

  std::span<const GridNode> nodes() const noexcept { return nodes_; }

 private:
  std::vector<GridNode> nodes_;
  std::optional<PowerTail> upper_;
  std::optional<PowerTail> lower_;
  bool light_tails_;
};

/// Law of a scalar payoff: either sorted discrete atoms with both measures'
/// weights, or a continuous law tagged with the measure it describes.
class Law {
 public:
  enum class Kind { DiscreteAtoms, QuantileGrid };

  /// Atoms are sorted and equal values merged. Each measure must sum to one
  /// within 1e-12.
  static Law discrete(std::vector<Atom> atoms);
  static Law constant(double value);
  static Law continuous(std::shared_ptr<const ContinuousLaw> body, Measure tag);
  static Law quantile_grid(std::vector<GridNode> nodes, std::optional<PowerTail> upper,
                           std::optional<PowerTail> lower = std::nullopt,
                           Measure tag = Measure::P, bool light_tails = false);

  Kind kind() const noexcept { return kind_; }
  bool is_discrete() const noexcept { return kind_ == Kind::DiscreteAtoms; }
  std::span<const Atom> atoms() const noexcept { return atoms_; }
  const ContinuousLaw& body() const;
  std::shared_ptr<const ContinuousLaw> body_ptr() const noexcept { return body_; }
  Measure measure_tag() const noexcept { return tag_; }

  bool nonnegative() const;
  /// Lowest point of the support (-inf with a lower tail).
  double support_min() const;
  /// Highest point of the support (+inf with an upper tail).
  double support_max() const;

  /// Mean under the given measure (atoms) or the tagged measure.
  double mean(Measure measure = Measure::P) const;

  /// Atom law with every value multiplied by `factor` > 0.
  Law scaled(double factor) const;
  /// Atom law with every value shifted by `offset`.
  Law shifted(double offset) const;

 private:
  Kind kind_ = Kind::DiscreteAtoms;
  std::vector<Atom> atoms_;
  std::shared_ptr<const ContinuousLaw> body_;
  Measure tag_ = Measure::P;
};

}  // namespace cptlab
