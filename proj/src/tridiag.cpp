#include "stabcert/tridiag.hpp"

#include <algorithm>
#include <cmath>

namespace stabcert {

TriDiagMatrix TriDiagMatrix::zero(int n, NormTag tag) {
  TriDiagMatrix m;
  m.n = n;
  m.sub.assign(n, 0.0);
  m.diag.assign(n, 0.0);
  m.sup.assign(n, 0.0);
  m.dissip_norm = tag;
  return m;
}

TriDiagMatrix TriDiagMatrix::transposed() const {
  TriDiagMatrix t = zero(n, dissip_norm);
  t.diag = diag;
  for (int i = 0; i + 1 < n; ++i) {
    t.sup[i] = sub[i + 1];
    t.sub[i + 1] = sup[i];
  }
  return t;
}

std::vector<double> TriDiagMatrix::apply(const std::vector<double>& y) const {
  std::vector<double> r(n, 0.0);
  for (int i = 0; i < n; ++i) {
    double s = diag[i] * y[i];
    if (i > 0) s += sub[i] * y[i - 1];
    if (i + 1 < n) s += sup[i] * y[i + 1];
    r[i] = s;
  }
  return r;
}

GridFunction TriDiagMatrix::apply(const GridFunction& y) const {
  return GridFunction(y.grid(), apply(y.values()), y.norm_tag());
}

std::vector<double> solve_shifted(const TriDiagMatrix& A, double lambda,
                                  const std::vector<double>& rhs) {
  const int n = A.n;
  // (lambda*I - A) w = rhs, Thomas sweep.
  std::vector<double> c(n, 0.0), d(n, 0.0);
  double piv = lambda - A.diag[0];
  if (piv == 0.0 || !std::isfinite(piv))
    throw std::runtime_error("solve_shifted: singular system (lambda in discrete spectrum)");
  c[0] = -A.sup[0] / piv;
  d[0] = rhs[0] / piv;
  for (int i = 1; i < n; ++i) {
    const double a = -A.sub[i];
    piv = (lambda - A.diag[i]) - a * c[i - 1];
    if (piv == 0.0 || !std::isfinite(piv))
      throw std::runtime_error("solve_shifted: singular system (lambda in discrete spectrum)");
    c[i] = -A.sup[i] / piv;
    d[i] = (rhs[i] - a * d[i - 1]) / piv;
  }
  std::vector<double> w(n, 0.0);
  w[n - 1] = d[n - 1];
  for (int i = n - 2; i >= 0; --i) w[i] = d[i] - c[i] * w[i + 1];
  return w;
}

double hille_yosida_norm(const TriDiagMatrix& A, double lambda, NormTag tag) {
  const int n = A.n;
  // L1 on a uniform grid: max column sum of |lambda (lambda I - A)^{-1}|;
  // sup: max row sum, obtained from the transpose.
  const TriDiagMatrix M = (tag == NormTag::L1) ? A : A.transposed();
  std::vector<double> e(n, 0.0);
  double worst = 0.0;
  for (int j = 0; j < n; ++j) {
    e[j] = 1.0;
    const std::vector<double> col = solve_shifted(M, lambda, e);
    e[j] = 0.0;
    double s = 0.0;
    for (double v : col) s += std::abs(v);
    worst = std::max(worst, lambda * s);
  }
  return worst;
}

}  // namespace stabcert
