#pragma once

#include <cstddef>
#include <vector>

#include "parframe/types.hpp"

namespace parframe {

/// Ordered basis of su(n): d = n^2-1 hermitian traceless matrices with
/// Tr(g_a g_b) = N delta_ab. The diagonal generators span the Cartan
/// subalgebra; cartan_indices records their slots in the ordering.
struct GeneratorBasis {
  int n = 0;
  std::vector<CMatrix> generators;
  double norm_factor = 2.0;
  std::vector<int> cartan_indices;

  int dim() const { return static_cast<int>(generators.size()); }
  bool is_cartan(int a) const;
};

/// A hermitian matrix together with its real coefficients in a basis,
/// M = sum_j coeffs[j] g_j + trace_part * I.
struct AlgebraElement {
  CMatrix matrix;
  RVector coeffs;
  double trace_part = 0.0;  // Tr(M)/n; zero for elements of the algebra
};

/// Antisymmetric tensor f with [g_a, g_b] = i f_abc g_c.
class StructureConstants {
 public:
  explicit StructureConstants(int dim)
      : dim_(dim), f_(static_cast<std::size_t>(dim) * dim * dim, 0.0) {}

  double operator()(int a, int b, int c) const { return f_[index(a, b, c)]; }
  double& operator()(int a, int b, int c) { return f_[index(a, b, c)]; }
  int dim() const { return dim_; }

 private:
  std::size_t index(int a, int b, int c) const {
    return (static_cast<std::size_t>(a) * dim_ + b) * dim_ + c;
  }

  int dim_;
  std::vector<double> f_;
};

/// An unordered generator pair (a < b) whose commutator is diagonal.
/// Cartan-Cartan pairs commute outright and are flagged trivial.
struct CartanPair {
  int a;
  int b;
  bool trivial;
};

/// Generalized Gell-Mann basis with norm_factor N = 2: per index pair i<j one
/// real-symmetric and one imaginary-antisymmetric generator, then the n-1
/// diagonal generators. n=2 yields the Pauli matrices (sigma_x, sigma_y,
/// sigma_z); n=3 is remapped to the standard Gell-Mann ordering lambda_1..8.
GeneratorBasis build_basis(int n);

/// Coefficients of hermitian M in the basis: coeffs_j = Tr(M g_j)/N, plus the
/// residual trace part Tr(M)/n.
AlgebraElement expand(const GeneratorBasis& basis, const CMatrix& M);

/// f_abc = Tr([g_a, g_b] g_c)/(iN), antisymmetrized in (a, b) exactly.
StructureConstants structure_constants(const GeneratorBasis& basis);

/// True iff every off-diagonal entry magnitude is at most
/// max(tol * (1 + max entry magnitude), 1e-14).
bool is_diagonal(const CMatrix& M, double tol);

/// All pairs (a, b), a < b, with [g_a, g_b] diagonal per is_diagonal.
std::vector<CartanPair> cartan_pairs(const GeneratorBasis& basis,
                                     double tol = 1e-10);

}  // namespace parframe
