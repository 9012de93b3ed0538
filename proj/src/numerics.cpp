#include "pwave/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace pwave {

namespace {

void check_points(const std::vector<double>& points) {
  if (points.size() < 2) throw InvalidArgument("Grid: need at least 2 points");
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!std::isfinite(points[i])) throw InvalidArgument("Grid: non-finite point");
    if (i > 0 && !(points[i] > points[i - 1])) {
      std::ostringstream msg;
      msg << "Grid: points not strictly increasing at index " << i;
      throw InvalidArgument(msg.str());
    }
  }
}

// Cubic Hermite basis on [x0, x0 + h] at t = (x - x0) / h.
double hermite(double y0, double y1, double m0, double m1, double h, double t) {
  const double t2 = t * t;
  const double t3 = t2 * t;
  return (2 * t3 - 3 * t2 + 1) * y0 + (t3 - 2 * t2 + t) * h * m0 + (-2 * t3 + 3 * t2) * y1 +
         (t3 - t2) * h * m1;
}

double hermite_derivative(double y0, double y1, double m0, double m1, double h, double t) {
  const double t2 = t * t;
  return ((6 * t2 - 6 * t) * y0 + (6 * t2 - 6 * t) * -y1) / h + (3 * t2 - 4 * t + 1) * m0 +
         (3 * t2 - 2 * t) * m1;
}

void check_samples(std::span<const double> samples, const Grid& grid) {
  if (samples.size() != grid.size()) {
    std::ostringstream msg;
    msg << "cumulative_integral: " << samples.size() << " samples for a grid of " << grid.size()
        << " points";
    throw InvalidArgument(msg.str());
  }
  for (double s : samples) {
    if (!std::isfinite(s)) throw InvalidArgument("cumulative_integral: non-finite sample");
  }
}

}  // namespace

// ---------------------------------------------------------------- Grid

Grid::Grid(std::vector<double> points) {
  check_points(points);
  points_ = std::make_shared<const std::vector<double>>(std::move(points));
}

Grid::Grid(std::shared_ptr<const std::vector<double>> points, Spacing spacing, double step)
    : points_(std::move(points)), spacing_(spacing), step_(step) {}

Grid Grid::uniform(double start, double stop, std::size_t intervals) {
  if (intervals < 1) throw InvalidArgument("Grid::uniform: need at least one interval");
  if (!(stop > start) || !std::isfinite(start) || !std::isfinite(stop)) {
    throw InvalidArgument("Grid::uniform: need finite start < stop");
  }
  const double h = (stop - start) / static_cast<double>(intervals);
  std::vector<double> points(intervals + 1);
  for (std::size_t k = 0; k <= intervals; ++k) points[k] = start + static_cast<double>(k) * h;
  points.back() = stop;
  check_points(points);
  return Grid(std::make_shared<const std::vector<double>>(std::move(points)), Spacing::uniform, h);
}

Grid Grid::geometric(double start, double stop, std::size_t intervals, double ratio) {
  if (intervals < 1) throw InvalidArgument("Grid::geometric: need at least one interval");
  if (!(ratio > 0.0) || ratio == 1.0) throw InvalidArgument("Grid::geometric: ratio must be > 0, != 1");
  if (!(stop > start)) throw InvalidArgument("Grid::geometric: need start < stop");
  const double n = static_cast<double>(intervals);
  const double denom = std::pow(ratio, n) - 1.0;
  std::vector<double> points(intervals + 1);
  for (std::size_t k = 0; k <= intervals; ++k) {
    points[k] = start + (stop - start) * (std::pow(ratio, static_cast<double>(k)) - 1.0) / denom;
  }
  points.front() = start;
  points.back() = stop;
  check_points(points);
  return Grid(std::make_shared<const std::vector<double>>(std::move(points)), Spacing::geometric,
              0.0);
}

std::size_t Grid::interval(double x) const {
  const auto& p = *points_;
  const std::size_t last = p.size() - 2;
  if (!(x > p.front())) return 0;
  if (x >= p.back()) return last;
  std::size_t k;
  if (spacing_ == Spacing::uniform) {
    const double guess = std::floor((x - p.front()) / step_);
    k = guess < 0.0 ? 0 : std::min(static_cast<std::size_t>(guess), last);
    while (k > 0 && p[k] > x) --k;
    while (k < last && p[k + 1] < x) ++k;
  } else {
    auto it = std::upper_bound(p.begin(), p.end(), x);
    k = static_cast<std::size_t>(it - p.begin()) - 1;
    k = std::min(k, last);
  }
  return k;
}

std::size_t Grid::find_node(double x) const {
  if (!contains(x)) return size();
  const std::size_t k = interval(x);
  if ((*points_)[k] == x) return k;
  if ((*points_)[k + 1] == x) return k + 1;
  return size();
}

// ---------------------------------------------------------------- Table

Table::Table(Grid grid, std::vector<double> values, std::vector<double> slopes)
    : grid_(std::move(grid)), values_(std::move(values)), slopes_(std::move(slopes)) {
  if (values_.size() != grid_.size() || slopes_.size() != grid_.size()) {
    throw InvalidArgument("Table: values/slopes do not match the grid");
  }
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i]) || !std::isfinite(slopes_[i])) {
      throw InvalidArgument("Table: non-finite entry");
    }
  }
}

Table::Table(Grid grid, std::vector<double> values) : grid_(std::move(grid)) {
  if (values.size() != grid_.size()) throw InvalidArgument("Table: values do not match the grid");
  const auto x = grid_.points();
  const std::size_t n = values.size();
  std::vector<double> slopes(n);
  if (n == 2) {
    slopes[0] = slopes[1] = (values[1] - values[0]) / (x[1] - x[0]);
  } else {
    for (std::size_t i = 1; i + 1 < n; ++i) {
      const double h0 = x[i] - x[i - 1];
      const double h1 = x[i + 1] - x[i];
      const double d0 = (values[i] - values[i - 1]) / h0;
      const double d1 = (values[i + 1] - values[i]) / h1;
      slopes[i] = (h1 * d0 + h0 * d1) / (h0 + h1);
    }
    slopes[0] = 2 * (values[1] - values[0]) / (x[1] - x[0]) - slopes[1];
    slopes[n - 1] = 2 * (values[n - 1] - values[n - 2]) / (x[n - 1] - x[n - 2]) - slopes[n - 2];
  }
  values_ = std::move(values);
  slopes_ = std::move(slopes);
}

double Table::operator()(double x) const {
  if (!grid_.contains(x)) {
    const double bound = x < grid_.front() ? grid_.front() : grid_.back();
    throw OutOfRange("Table: abscissa outside the grid", x, bound);
  }
  const std::size_t k = grid_.interval(x);
  const double x0 = grid_[k];
  const double h = grid_[k + 1] - x0;
  return hermite(values_[k], values_[k + 1], slopes_[k], slopes_[k + 1], h, (x - x0) / h);
}

double Table::derivative(double x) const {
  if (!grid_.contains(x)) {
    const double bound = x < grid_.front() ? grid_.front() : grid_.back();
    throw OutOfRange("Table: abscissa outside the grid", x, bound);
  }
  const std::size_t k = grid_.interval(x);
  const double x0 = grid_[k];
  const double h = grid_[k + 1] - x0;
  return hermite_derivative(values_[k], values_[k + 1], slopes_[k], slopes_[k + 1], h,
                            (x - x0) / h);
}

// ---------------------------------------------------------------- MonotoneTable

MonotoneTable::MonotoneTable(Grid grid, std::vector<double> values, std::vector<double> slopes,
                             Monotonicity monotonicity)
    : table_(grid, values, slopes), monotonicity_(monotonicity) {
  const auto x = grid.points();
  const std::size_t n = values.size();
  for (std::size_t i = 1; i < n; ++i) {
    const bool ok = monotonicity == Monotonicity::strictly_increasing ? values[i] > values[i - 1]
                                                                      : values[i] >= values[i - 1];
    if (!ok) {
      std::ostringstream msg;
      msg << "MonotoneTable: values violate "
          << (monotonicity == Monotonicity::strictly_increasing ? "strict increase"
                                                                : "nondecrease")
          << " at index " << i;
      throw InvalidArgument(msg.str());
    }
  }
  for (double& m : slopes) m = std::max(m, 0.0);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    const double delta = (values[k + 1] - values[k]) / (x[k + 1] - x[k]);
    if (delta == 0.0) {
      slopes[k] = 0.0;
      slopes[k + 1] = 0.0;
      continue;
    }
    const double a = slopes[k] / delta;
    const double b = slopes[k + 1] / delta;
    const double r2 = a * a + b * b;
    if (r2 > 9.0) {
      const double tau = 3.0 / std::sqrt(r2);
      slopes[k] = tau * a * delta;
      slopes[k + 1] = tau * b * delta;
    }
  }
  table_ = Table(std::move(grid), std::move(values), std::move(slopes));
}

MonotoneTable MonotoneTable::plus_identity() const {
  const auto x = grid().points();
  std::vector<double> values(table_.values().begin(), table_.values().end());
  std::vector<double> slopes(table_.slopes().begin(), table_.slopes().end());
  for (std::size_t i = 0; i < values.size(); ++i) {
    values[i] += x[i];
    slopes[i] += 1.0;
  }
  // Hermite interpolation reproduces the identity exactly, so the limited
  // slopes of f plus one give an interpolant equal to x + f(x).
  return MonotoneTable(Table(grid(), std::move(values), std::move(slopes)),
                       Monotonicity::strictly_increasing);
}

// ---------------------------------------------------------------- quadrature

Table cumulative_integral(std::span<const double> samples, const Grid& grid, double anchor,
                          QuadratureRule rule) {
  check_samples(samples, grid);
  if (!grid.contains(anchor)) {
    throw OutOfRange("cumulative_integral: anchor outside the grid", anchor,
                     anchor < grid.front() ? grid.front() : grid.back());
  }
  const auto x = grid.points();
  const std::size_t n = x.size();
  const auto& f = samples;

  bool fourth = false;
  switch (rule) {
    case QuadratureRule::automatic:
      fourth = grid.is_uniform() && n >= 4;
      break;
    case QuadratureRule::trapezoid:
      break;
    case QuadratureRule::fourth_order:
      if (!grid.is_uniform() || n < 4) {
        throw InvalidArgument("cumulative_integral: fourth-order rule needs a uniform grid of >= 4 nodes");
      }
      fourth = true;
      break;
  }

  std::vector<double> F(n, 0.0);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double h = x[i + 1] - x[i];
    const double trap = 0.5 * h * (f[i] + f[i + 1]);
    double inc = trap;
    if (fourth) {
      if (i == 0) {
        inc = h * (9 * f[0] + 19 * f[1] - 5 * f[2] + f[3]) / 24.0;
      } else if (i + 2 == n) {
        inc = h * (f[i - 2] - 5 * f[i - 1] + 19 * f[i] + 9 * f[i + 1]) / 24.0;
      } else {
        inc = h * (13 * (f[i] + f[i + 1]) - (f[i - 1] + f[i + 2])) / 24.0;
      }
      if (inc < 0.0 && f[i] >= 0.0 && f[i + 1] >= 0.0) inc = trap;
    }
    F[i + 1] = F[i] + inc;
  }

  const std::size_t node = grid.find_node(anchor);
  std::vector<double> slopes(f.begin(), f.end());
  if (node < n) {
    const double offset = F[node];
    for (double& v : F) v -= offset;
    F[node] = 0.0;
  } else {
    Table raw(grid, F, slopes);
    const double offset = raw(anchor);
    for (double& v : F) v -= offset;
  }
  return Table(grid, std::move(F), std::move(slopes));
}

MonotoneTable cumulative_integral_monotone(std::span<const double> samples, const Grid& grid,
                                           double anchor, QuadratureRule rule) {
  for (double s : samples) {
    if (s < 0.0) throw InvalidArgument("cumulative_integral_monotone: negative sample");
  }
  Table t = cumulative_integral(samples, grid, anchor, rule);
  return MonotoneTable(grid, std::vector<double>(t.values().begin(), t.values().end()),
                       std::vector<double>(t.slopes().begin(), t.slopes().end()),
                       Monotonicity::nondecreasing);
}

// ---------------------------------------------------------------- inversion

double invert_monotone(const MonotoneTable& table, double y, double tol) {
  if (table.monotonicity() != Monotonicity::strictly_increasing) {
    throw InvalidArgument("invert_monotone: table is not strictly increasing");
  }
  if (!std::isfinite(y)) throw InvalidArgument("invert_monotone: non-finite target");
  const auto v = table.values();
  if (y < v.front()) throw OutOfRange("invert_monotone: below table range", y, v.front());
  if (y > v.back()) throw OutOfRange("invert_monotone: above table range", y, v.back());

  const auto& grid = table.grid();
  auto it = std::upper_bound(v.begin(), v.end(), y);
  std::size_t k = it == v.begin() ? 0 : static_cast<std::size_t>(it - v.begin()) - 1;
  k = std::min(k, v.size() - 2);
  if (v[k] == y) return grid[k];
  if (v[k + 1] == y) return grid[k + 1];

  const Table& t = table.table();
  return find_root_monotone([&](double x) { return t(x) - y; }, grid[k], grid[k + 1], tol);
}

}  // namespace pwave
