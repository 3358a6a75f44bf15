#include "parframe/lie_algebra.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace parframe {

namespace {

// Construction-time invariant checks; any violation is a library bug.
void check_basis(const GeneratorBasis& basis) {
  const int d = basis.dim();
  const int n = basis.n;
  for (int a = 0; a < d; ++a) {
    const CMatrix& g = basis.generators[a];
    if (g.rows() != n || g.cols() != n)
      throw std::logic_error("build_basis: generator dimension mismatch");
    if (hermiticity_defect(g) > 1e-12)
      throw std::logic_error("build_basis: generator not hermitian");
    if (std::abs(g.trace()) > 1e-12)
      throw std::logic_error("build_basis: generator not traceless");
  }
  for (int a = 0; a < d; ++a) {
    for (int b = a; b < d; ++b) {
      const Complex tr = (basis.generators[a] * basis.generators[b]).trace();
      const double want = (a == b) ? basis.norm_factor : 0.0;
      if (std::abs(tr - want) > 1e-12)
        throw std::logic_error("build_basis: trace orthonormality violated");
    }
  }
  for (int idx : basis.cartan_indices) {
    const CMatrix& g = basis.generators[idx];
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (i != j && std::abs(g(i, j)) > 1e-14)
          throw std::logic_error("build_basis: Cartan generator not diagonal");
  }
  for (int i : basis.cartan_indices)
    for (int j : basis.cartan_indices)
      if (commutator(basis.generators[i], basis.generators[j])
              .cwiseAbs()
              .maxCoeff() > 1e-12)
        throw std::logic_error("build_basis: Cartan generators do not commute");
}

}  // namespace

bool GeneratorBasis::is_cartan(int a) const {
  return std::find(cartan_indices.begin(), cartan_indices.end(), a) !=
         cartan_indices.end();
}

GeneratorBasis build_basis(int n) {
  if (n < 2) throw std::invalid_argument("build_basis: n must be >= 2");

  GeneratorBasis basis;
  basis.n = n;
  basis.norm_factor = 2.0;

  // Off-diagonal generators, pairs (i, j) in lexicographic order, the
  // real-symmetric one first.
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      CMatrix sym = CMatrix::Zero(n, n);
      sym(i, j) = 1.0;
      sym(j, i) = 1.0;
      CMatrix asym = CMatrix::Zero(n, n);
      asym(i, j) = Complex(0.0, -1.0);
      asym(j, i) = Complex(0.0, 1.0);
      basis.generators.push_back(std::move(sym));
      basis.generators.push_back(std::move(asym));
    }
  }
  // Diagonal generators D_l = c_l (E_00 + ... + E_ll - (l+1) E_{l+1,l+1}),
  // normalized to Tr(D_l^2) = 2.
  for (int l = 0; l + 1 < n; ++l) {
    const double c = std::sqrt(2.0 / ((l + 1.0) * (l + 2.0)));
    CMatrix diag = CMatrix::Zero(n, n);
    for (int k = 0; k <= l; ++k) diag(k, k) = c;
    diag(l + 1, l + 1) = -(l + 1.0) * c;
    basis.generators.push_back(std::move(diag));
  }

  const int d = n * n - 1;
  if (n == 3) {
    // Order-mapping table onto the standard Gell-Mann sequence lambda_1..8.
    static constexpr int kStandardSlots[8] = {0, 1, 6, 2, 3, 4, 5, 7};
    std::vector<CMatrix> ordered(8);
    for (int s = 0; s < 8; ++s) ordered[s] = basis.generators[kStandardSlots[s]];
    basis.generators = std::move(ordered);
    basis.cartan_indices = {2, 7};
  } else {
    for (int a = d - (n - 1); a < d; ++a) basis.cartan_indices.push_back(a);
  }

  check_basis(basis);
  return basis;
}

AlgebraElement expand(const GeneratorBasis& basis, const CMatrix& M) {
  const int n = basis.n;
  if (M.rows() != n || M.cols() != n)
    throw std::invalid_argument("expand: matrix dimension mismatch with basis");
  if (hermiticity_defect(M) > 1e-12 * (1.0 + M.cwiseAbs().maxCoeff()))
    throw std::invalid_argument("expand: matrix is not hermitian");

  AlgebraElement el;
  el.matrix = M;
  el.trace_part = M.trace().real() / n;
  el.coeffs.resize(basis.dim());
  for (int j = 0; j < basis.dim(); ++j) {
    const Complex c = (M * basis.generators[j]).trace() / basis.norm_factor;
    if (std::abs(c.imag()) > 1e-12)
      throw std::runtime_error("expand: coefficient has imaginary residue");
    el.coeffs[j] = c.real();
  }
  return el;
}

StructureConstants structure_constants(const GeneratorBasis& basis) {
  const int d = basis.dim();
  StructureConstants f(d);
  const Complex i_unit(0.0, 1.0);
  for (int a = 0; a < d; ++a) {
    for (int b = a + 1; b < d; ++b) {
      const CMatrix comm = commutator(basis.generators[a], basis.generators[b]);
      for (int c = 0; c < d; ++c) {
        const Complex val =
            (comm * basis.generators[c]).trace() / (i_unit * basis.norm_factor);
        if (std::abs(val.imag()) > 1e-12)
          throw std::runtime_error(
              "structure_constants: f_abc has imaginary residue at (" +
              std::to_string(a) + "," + std::to_string(b) + "," +
              std::to_string(c) + ")");
        f(a, b, c) = val.real();
        f(b, a, c) = -val.real();
      }
    }
  }
  return f;
}

bool is_diagonal(const CMatrix& M, double tol) {
  const double scale = M.cwiseAbs().maxCoeff();
  const double threshold = std::max(tol * (1.0 + scale), 1e-14);
  for (Eigen::Index i = 0; i < M.rows(); ++i)
    for (Eigen::Index j = 0; j < M.cols(); ++j)
      if (i != j && std::abs(M(i, j)) > threshold) return false;
  return true;
}

std::vector<CartanPair> cartan_pairs(const GeneratorBasis& basis, double tol) {
  std::vector<CartanPair> pairs;
  const int d = basis.dim();
  for (int a = 0; a < d; ++a) {
    for (int b = a + 1; b < d; ++b) {
      const CMatrix comm = commutator(basis.generators[a], basis.generators[b]);
      if (is_diagonal(comm, tol))
        pairs.push_back({a, b, basis.is_cartan(a) && basis.is_cartan(b)});
    }
  }
  return pairs;
}

}  // namespace parframe
