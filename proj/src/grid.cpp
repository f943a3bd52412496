#include "stabcert/grid.hpp"

#include <algorithm>

namespace stabcert {

double norm(const GridFunction& y) {
  if (y.norm_tag() == NormTag::L1) {
    double s = 0.0;
    for (double v : y.values()) s += std::abs(v);
    return y.grid().dx() * s;
  }
  double m = 0.0;
  for (double v : y.values()) m = std::max(m, std::abs(v));
  return m;
}

void require_same_grid(const GridFunction& a, const GridFunction& b, const char* where) {
  if (!(a.grid() == b.grid()))
    throw std::invalid_argument(std::string(where) + ": incompatible discretizations");
}

GridFunction add(const GridFunction& a, const GridFunction& b) {
  require_same_grid(a, b, "add");
  std::vector<double> v(a.size());
  for (int i = 0; i < a.size(); ++i) v[i] = a[i] + b[i];
  return GridFunction(a.grid(), std::move(v), a.norm_tag());
}

GridFunction sub(const GridFunction& a, const GridFunction& b) {
  require_same_grid(a, b, "sub");
  std::vector<double> v(a.size());
  for (int i = 0; i < a.size(); ++i) v[i] = a[i] - b[i];
  return GridFunction(a.grid(), std::move(v), a.norm_tag());
}

GridFunction scaled(const GridFunction& a, double c) {
  std::vector<double> v(a.size());
  for (int i = 0; i < a.size(); ++i) v[i] = c * a[i];
  return GridFunction(a.grid(), std::move(v), a.norm_tag());
}

}  // namespace stabcert
