#include "stabcert/duality.hpp"

namespace stabcert {

DualityElement duality_select(const GridFunction& y) {
  DualityElement j;
  j.grid = y.grid();
  if (y.norm_tag() == NormTag::L1) {
    j.kind = DualityElement::Kind::L1Sign;
    j.sign_values.resize(y.size());
    double s = 0.0;
    for (int i = 0; i < y.size(); ++i) {
      const double v = y[i];
      j.sign_values[i] = (v > 0.0) ? 1.0 : (v < 0.0 ? -1.0 : 0.0);
      s += std::abs(v);
    }
    j.scale = y.grid().dx() * s;
    return j;
  }
  j.kind = DualityElement::Kind::PointMass;
  int arg = 0;
  double best = -1.0;
  for (int i = 0; i < y.size(); ++i) {
    const double a = std::abs(y[i]);
    if (a > best) {  // strict: keeps the smallest index on ties
      best = a;
      arg = i;
    }
  }
  j.index = arg;
  j.weight = y[arg];
  return j;
}

double pair(const GridFunction& z, const DualityElement& j) {
  if (!(z.grid() == j.grid))
    throw std::invalid_argument("pair: incompatible discretizations");
  if (j.kind == DualityElement::Kind::L1Sign) {
    double s = 0.0;
    for (int i = 0; i < z.size(); ++i) s += z[i] * j.sign_values[i];
    return j.scale * z.grid().dx() * s;
  }
  return z[j.index] * j.weight;
}

}  // namespace stabcert
