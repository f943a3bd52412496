#pragma once

#include "stabcert/grid.hpp"

namespace stabcert {

// Tridiagonal generator matrix (discrete A) together with the norm it is
// dissipative in. sub[0] and sup[n-1] are unused.
struct TriDiagMatrix {
  int n = 0;
  std::vector<double> sub, diag, sup;
  NormTag dissip_norm = NormTag::L1;

  static TriDiagMatrix zero(int n, NormTag tag);
  TriDiagMatrix transposed() const;
  std::vector<double> apply(const std::vector<double>& y) const;
  GridFunction apply(const GridFunction& y) const;
};

// Solves (lambda*I - A) w = rhs by the Thomas algorithm. Throws on a
// vanishing pivot (lambda in the discrete spectrum).
std::vector<double> solve_shifted(const TriDiagMatrix& A, double lambda,
                                  const std::vector<double>& rhs);

// Induced operator norm ||lambda (lambda*I - A)^{-1}|| in the given norm.
// On a uniform grid the weighted-L1 induced norm reduces to the max column
// sum of the inverse and the sup norm to the max row sum.
double hille_yosida_norm(const TriDiagMatrix& A, double lambda, NormTag tag);

}  // namespace stabcert
