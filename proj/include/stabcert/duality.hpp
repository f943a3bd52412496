#pragma once

#include "stabcert/grid.hpp"

namespace stabcert {

// A selection from the (set-valued) duality map J.
//
// L1Sign:   the functional scale * sign(y(.)), scale = ||y||_1, with the
//           selection sign(0) = 0 (valid since sign(0) = [-1,1]).
// PointMass: weight * delta_{x_index}, weight = y(index), at the smallest
//           index attaining max|y|.
struct DualityElement {
  enum class Kind { L1Sign, PointMass };

  Kind kind = Kind::L1Sign;
  Grid grid;
  std::vector<double> sign_values;  // L1Sign only, entries in [-1,1]
  double scale = 0.0;               // L1Sign only, >= 0
  int index = 0;                    // PointMass only
  double weight = 0.0;              // PointMass only
};

// Selects an element of J(y). Zero input yields the zero functional.
DualityElement duality_select(const GridFunction& y);

// <z, j>: L1Sign -> scale * dx * sum z_i * sign_i; PointMass -> z(index) * weight.
// Throws if z lives on a different grid than the element.
double pair(const GridFunction& z, const DualityElement& j);

}  // namespace stabcert
