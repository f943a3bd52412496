#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <vector>

namespace stabcert {

// Which Banach norm a state lives in: L1(Omega) or C0 with the sup norm.
enum class NormTag { L1, Sup };

// Uniform 1-D cell grid on (x_min, x_max); states are sampled at cell centers.
struct Grid {
  double x_min = 0.0;
  double x_max = 1.0;
  int n_cells = 0;

  Grid() = default;
  Grid(double xmin, double xmax, int n) : x_min(xmin), x_max(xmax), n_cells(n) {
    if (n < 2) throw std::invalid_argument("Grid: n_cells must be >= 2");
    if (!(xmax > xmin)) throw std::invalid_argument("Grid: x_max must exceed x_min");
    if (!std::isfinite(xmin) || !std::isfinite(xmax))
      throw std::invalid_argument("Grid: bounds must be finite");
  }

  double dx() const { return (x_max - x_min) / n_cells; }
  double center(int i) const { return x_min + (i + 0.5) * dx(); }
  double length() const { return x_max - x_min; }

  friend bool operator==(const Grid& a, const Grid& b) {
    return a.x_min == b.x_min && a.x_max == b.x_max && a.n_cells == b.n_cells;
  }
};

// A state y sampled at the cell centers of a grid, tagged with its norm.
class GridFunction {
 public:
  GridFunction() = default;
  GridFunction(Grid grid, std::vector<double> values, NormTag tag)
      : grid_(grid), values_(std::move(values)), tag_(tag) {
    if (static_cast<int>(values_.size()) != grid_.n_cells)
      throw std::invalid_argument("GridFunction: values length does not match grid");
    for (double v : values_)
      if (!std::isfinite(v))
        throw std::invalid_argument("GridFunction: values must be finite");
  }

  static GridFunction zeros(const Grid& grid, NormTag tag) {
    return GridFunction(grid, std::vector<double>(grid.n_cells, 0.0), tag);
  }
  static GridFunction constant(const Grid& grid, NormTag tag, double c) {
    return GridFunction(grid, std::vector<double>(grid.n_cells, c), tag);
  }
  static GridFunction sample(const Grid& grid, NormTag tag,
                             const std::function<double(double)>& f) {
    std::vector<double> v(grid.n_cells);
    for (int i = 0; i < grid.n_cells; ++i) v[i] = f(grid.center(i));
    return GridFunction(grid, std::move(v), tag);
  }

  const Grid& grid() const { return grid_; }
  NormTag norm_tag() const { return tag_; }
  int size() const { return static_cast<int>(values_.size()); }
  double operator[](int i) const { return values_[i]; }
  double& operator[](int i) { return values_[i]; }
  const std::vector<double>& values() const { return values_; }
  std::vector<double>& values() { return values_; }

  GridFunction with_tag(NormTag tag) const { return GridFunction(grid_, values_, tag); }

 private:
  Grid grid_;
  std::vector<double> values_;
  NormTag tag_ = NormTag::L1;
};

// ||y||: midpoint-rule L1 norm dx*sum|y_i|, or the discrete sup norm max|y_i|.
double norm(const GridFunction& y);

void require_same_grid(const GridFunction& a, const GridFunction& b, const char* where);

GridFunction add(const GridFunction& a, const GridFunction& b);
GridFunction sub(const GridFunction& a, const GridFunction& b);
GridFunction scaled(const GridFunction& a, double c);

}  // namespace stabcert
