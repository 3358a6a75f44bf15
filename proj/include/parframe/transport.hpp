#pragma once

#include <functional>
#include <string>
#include <vector>

#include "parframe/types.hpp"

namespace parframe {

/// Time-dependent hermitian candidate generator on [0, duration]. The
/// transport layer projects it onto the horizontal subspace before use.
struct GeneratorPath {
  std::function<CMatrix(double)> evaluator;
  double duration = 0.0;
  std::string description;
};

/// One point of a transported unitary path. Columns of U are the moving
/// frame states |n(t)> = U(t)|n>.
struct TransportState {
  double t = 0.0;
  CMatrix U;
  double unitarity_defect = 0.0;   // max |U^dag U - I|
  double horizontal_residual = 0.0;  // max_n |<n(t)|h(t)|n(t)>|
};

struct IntegratorConfig {
  double dt = 0.0;
  int corrector_iterations = 2;
  std::string scheme = "exp-midpoint";
};

/// Removes the moving-basis diagonal of H_cand:
/// h = H_cand - U diag(U^dag H_cand U) U^dag.
/// The result has <n(t)|h|n(t)> = 0 for every column of U and Tr h = 0.
CMatrix horizontal_project(const CMatrix& H_cand, const CMatrix& U);

/// exp(-i h dt) for hermitian h, via eigendecomposition; unitary to roundoff.
CMatrix unitary_exp(const CMatrix& h, double dt);

/// One exponential-midpoint step of U' = -i h(t) U with h re-projected at the
/// midpoint estimate (corrector_iterations fixed-point sweeps). Order dt^2
/// globally; each factor is the exponential of an anti-hermitian matrix, so
/// unitarity is preserved by construction.
TransportState step(const TransportState& state, const GeneratorPath& path,
                    const IntegratorConfig& cfg);

/// Transport U0 along the path over the uniform grid t = 0, dt, ..., duration.
/// dt must divide the duration to one part in 1e-9.
std::vector<TransportState> evolve(const CMatrix& U0, const GeneratorPath& path,
                                   const IntegratorConfig& cfg);

}  // namespace parframe
