#pragma once

#include <vector>

#include "parframe/lie_algebra.hpp"
#include "parframe/transport.hpp"
#include "parframe/types.hpp"

namespace parframe {

/// Real adjoint frame vector for generator index a at time t:
/// e^j = Tr(U g_a U^dag g_j)/N.
struct FrameVector {
  int a = 0;
  double t = 0.0;
  RVector e;
};

/// Classical-transport defect for one pair (a, b) along a run, by two
/// independent routes: the commutator trace formula (exact at grid points)
/// and a central finite difference of the frame vectors. The first and last
/// fd entries use second-order one-sided stencils and are excluded from the
/// interior maxima.
struct DefectSeries {
  int a = 0;
  int b = 0;
  RVector times;
  RVector defect_commutator;
  RVector defect_fd;
  bool fd_ends_one_sided = true;
  double max_abs_commutator = 0.0;  // over the whole grid
  double max_abs_fd = 0.0;          // over interior (central) points
  double max_abs_discrepancy = 0.0;  // interior |fd - commutator|
};

/// All d frame vectors at one transported unitary; rows form an orthogonal
/// d x d matrix (the adjoint representation of U).
std::vector<FrameVector> adjoint_frame(const GeneratorBasis& basis,
                                       const CMatrix& U, double t = 0.0);

/// de_a/dt . e_b evaluated from the equation of motion of g_a(t) = U g_a U^dag:
/// Tr(g_a'(t) g_b(t))/N with g_a'(t) = -i[h, g_a(t)]. Requires h horizontal
/// with respect to U (moving-basis diagonal below 1e-10).
double defect_commutator(const GeneratorBasis& basis, const CMatrix& U,
                         const CMatrix& h, int a, int b);

/// Both defect series over a transport run for one pair.
DefectSeries defect_series(const GeneratorBasis& basis,
                           const std::vector<TransportState>& run,
                           const GeneratorPath& path, int a, int b);

/// max_{n,m} |<n(t)|g_a(t)|m(t)> - <n|g_a|m>|; an algebraic identity, so the
/// return value is a roundoff-scale self-test.
double matrix_element_invariance(const GeneratorBasis& basis, const CMatrix& U,
                                 int a);

}  // namespace parframe
