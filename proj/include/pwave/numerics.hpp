#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "pwave/errors.hpp"

namespace pwave {

/// Ordered sample points of the lightcone phase xi (cm).
///
/// Points are shared between every table built on the same grid, so copies
/// are cheap. A grid built by `uniform()` answers interval lookups in O(1);
/// any other grid uses binary search.
class Grid {
 public:
  enum class Spacing { uniform, geometric, irregular };

  explicit Grid(std::vector<double> points);

  static Grid uniform(double start, double stop, std::size_t intervals);
  /// Points start + (stop - start) (r^k - 1) / (r^n - 1), k = 0..n.
  static Grid geometric(double start, double stop, std::size_t intervals, double ratio);

  std::span<const double> points() const { return *points_; }
  std::size_t size() const { return points_->size(); }
  double operator[](std::size_t i) const { return (*points_)[i]; }
  double front() const { return points_->front(); }
  double back() const { return points_->back(); }
  Spacing spacing() const { return spacing_; }
  bool is_uniform() const { return spacing_ == Spacing::uniform; }
  /// Node spacing; only meaningful for uniform grids.
  double step() const { return step_; }
  bool contains(double x) const { return x >= front() && x <= back(); }

  /// Index k with points[k] <= x <= points[k+1]; x is clamped to the grid.
  std::size_t interval(double x) const;

  /// Index of the node equal to x, or size() if x is not a node.
  std::size_t find_node(double x) const;

  friend bool operator==(const Grid& a, const Grid& b) {
    return a.points_ == b.points_ || *a.points_ == *b.points_;
  }

 private:
  Grid(std::shared_ptr<const std::vector<double>> points, Spacing spacing, double step);

  std::shared_ptr<const std::vector<double>> points_;
  Spacing spacing_ = Spacing::irregular;
  double step_ = 0.0;
};

/// Piecewise cubic Hermite table: node values plus node slopes.
class Table {
 public:
  Table(Grid grid, std::vector<double> values, std::vector<double> slopes);
  /// Slopes from three-point finite differences.
  Table(Grid grid, std::vector<double> values);

  /// Throws OutOfRange outside [grid.front(), grid.back()].
  double operator()(double x) const;
  double derivative(double x) const;

  const Grid& grid() const { return grid_; }
  std::span<const double> values() const { return values_; }
  std::span<const double> slopes() const { return slopes_; }
  double front_value() const { return values_.front(); }
  double back_value() const { return values_.back(); }

 private:
  Grid grid_;
  std::vector<double> values_;
  std::vector<double> slopes_;
};

enum class Monotonicity { nondecreasing, strictly_increasing };

/// Hermite table whose interpolant is monotone.
///
/// Construction rejects samples that break the declared monotonicity and
/// applies Fritsch-Carlson limiting to the slopes; flat segments get zero
/// slopes so the interpolant is constant there.
class MonotoneTable {
 public:
  MonotoneTable(Grid grid, std::vector<double> values, std::vector<double> slopes,
                Monotonicity monotonicity);

  double operator()(double x) const { return table_(x); }
  double derivative(double x) const { return table_.derivative(x); }

  /// The table of x -> x + f(x). Always strictly increasing.
  MonotoneTable plus_identity() const;

  const Table& table() const { return table_; }
  const Grid& grid() const { return table_.grid(); }
  std::span<const double> values() const { return table_.values(); }
  Monotonicity monotonicity() const { return monotonicity_; }
  double min_value() const { return table_.front_value(); }
  double max_value() const { return table_.back_value(); }

 private:
  MonotoneTable(Table table, Monotonicity monotonicity)
      : table_(std::move(table)), monotonicity_(monotonicity) {}

  Table table_;
  Monotonicity monotonicity_;
};

enum class QuadratureRule {
  automatic,    ///< fourth order on uniform grids with >= 4 nodes, else trapezoid
  trapezoid,
  fourth_order,
};

/// Cumulative integral F(x_i) = int_anchor^{x_i} f on the grid nodes.
///
/// The result has F(anchor) == 0 exactly when the anchor is a node, and
/// uses the samples as Hermite slopes. On uniform grids the default rule is
/// the 4-point cumulative rule h/24 (-f[i-1] + 13 f[i] + 13 f[i+1] - f[i+2])
/// (one-sided at the ends). An interval whose endpoint samples are both
/// nonnegative never receives a negative increment: the trapezoid is used
/// there instead.
Table cumulative_integral(std::span<const double> samples, const Grid& grid,
                          double anchor = 0.0,
                          QuadratureRule rule = QuadratureRule::automatic);

/// Same, for nonnegative integrands; the result is a nondecreasing table.
MonotoneTable cumulative_integral_monotone(std::span<const double> samples, const Grid& grid,
                                           double anchor = 0.0,
                                           QuadratureRule rule = QuadratureRule::automatic);

/// Integral of f over [a, b] by 5-point Gauss-Legendre (exact to degree 9).
template <class F>
double gauss_legendre5(F&& f, double a, double b) {
  constexpr double x[5] = {-0.9061798459386640, -0.5384693101056831, 0.0, 0.5384693101056831,
                           0.9061798459386640};
  constexpr double w[5] = {0.2369268850561891, 0.4786286704993665, 0.5688888888888889,
                           0.4786286704993665, 0.2369268850561891};
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double sum = 0.0;
  for (int j = 0; j < 5; ++j) sum += w[j] * f(mid + half * x[j]);
  return half * sum;
}

/// Same, with [a, b] split at every sorted breakpoint strictly inside it.
template <class F>
double gauss_legendre5_split(F&& f, double a, double b, std::span<const double> breaks) {
  double sum = 0.0;
  double lo = a;
  for (auto it = std::upper_bound(breaks.begin(), breaks.end(), a); it != breaks.end() && *it < b;
       ++it) {
    sum += gauss_legendre5(f, lo, *it);
    lo = *it;
  }
  return sum + gauss_legendre5(f, lo, b);
}

inline constexpr double kRootTolerance = 1e-12;

/// Root of a monotone function on [lo, hi] by bisection with secant steps.
///
/// Requires f(lo) * f(hi) <= 0, otherwise throws BracketError. Stops once
/// the bracket is narrower than `tol` (absolute, in x).
template <class F>
double find_root_monotone(F&& f, double lo, double hi, double tol = kRootTolerance,
                          int max_iterations = 400) {
  if (!(lo <= hi)) throw InvalidArgument("find_root_monotone: empty bracket");
  double flo = f(lo);
  double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if (std::signbit(flo) == std::signbit(fhi) || std::isnan(flo) || std::isnan(fhi)) {
    throw BracketError("find_root_monotone: no sign change on [" + std::to_string(lo) + ", " +
                       std::to_string(hi) + "]");
  }
  bool last_step_was_slow = false;
  for (int it = 0; it < max_iterations && hi - lo > tol; ++it) {
    const double width = hi - lo;
    double x = hi - fhi * (hi - lo) / (fhi - flo);
    if (last_step_was_slow || !(x > lo && x < hi)) x = 0.5 * (lo + hi);
    const double fx = f(x);
    if (fx == 0.0) return x;
    if (std::signbit(fx) == std::signbit(flo)) {
      lo = x;
      flo = fx;
    } else {
      hi = x;
      fhi = fx;
    }
    last_step_was_slow = (hi - lo) > 0.5 * width;
  }
  // Final secant estimate inside the (tiny) bracket.
  const double x = hi - fhi * (hi - lo) / (fhi - flo);
  return (x >= lo && x <= hi) ? x : 0.5 * (lo + hi);
}

/// x with table(x) == y, for strictly increasing tables.
///
/// Throws OutOfRange carrying the violated bound when y lies outside the
/// table's range.
double invert_monotone(const MonotoneTable& table, double y, double tol = kRootTolerance);

}  // namespace pwave
