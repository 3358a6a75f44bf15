#include "parframe/frame.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace parframe {

namespace {

void check_index(const GeneratorBasis& basis, int a, const char* who) {
  if (a < 0 || a >= basis.dim())
    throw std::invalid_argument(std::string(who) + ": generator index " +
                                std::to_string(a) + " out of range");
}

RVector frame_components(const GeneratorBasis& basis, const CMatrix& moved) {
  const int d = basis.dim();
  RVector e(d);
  for (int j = 0; j < d; ++j) {
    const Complex c = (moved * basis.generators[j]).trace() / basis.norm_factor;
    if (std::abs(c.imag()) > 1e-12)
      throw std::runtime_error(
          "adjoint_frame: component has imaginary residue");
    e[j] = c.real();
  }
  return e;
}

}  // namespace

std::vector<FrameVector> adjoint_frame(const GeneratorBasis& basis,
                                       const CMatrix& U, double t) {
  if (U.rows() != basis.n || U.cols() != basis.n)
    throw std::invalid_argument("adjoint_frame: dimension mismatch");
  if (unitarity_defect(U) > 1e-10)
    throw std::runtime_error("adjoint_frame: U is not unitary");

  std::vector<FrameVector> frame;
  frame.reserve(basis.dim());
  for (int a = 0; a < basis.dim(); ++a) {
    const CMatrix moved = U * basis.generators[a] * U.adjoint();
    FrameVector v;
    v.a = a;
    v.t = t;
    v.e = frame_components(basis, moved);
    if (std::abs(v.e.norm() - 1.0) > 1e-10)
      throw std::runtime_error("adjoint_frame: frame vector norm drifted");
    frame.push_back(std::move(v));
  }
  return frame;
}

double defect_commutator(const GeneratorBasis& basis, const CMatrix& U,
                         const CMatrix& h, int a, int b) {
  check_index(basis, a, "defect_commutator");
  check_index(basis, b, "defect_commutator");
  if ((U.adjoint() * h * U).diagonal().cwiseAbs().maxCoeff() > 1e-10)
    throw std::invalid_argument(
        "defect_commutator: h is not horizontal with respect to U");

  const CMatrix ga_t = U * basis.generators[a] * U.adjoint();
  const CMatrix gb_t = U * basis.generators[b] * U.adjoint();
  const CMatrix ga_dot = Complex(0.0, -1.0) * commutator(h, ga_t);
  const Complex val = (ga_dot * gb_t).trace() / basis.norm_factor;
  if (std::abs(val.imag()) > 1e-12)
    throw std::runtime_error("defect_commutator: imaginary residue in trace");
  return val.real();
}

DefectSeries defect_series(const GeneratorBasis& basis,
                           const std::vector<TransportState>& run,
                           const GeneratorPath& path, int a, int b) {
  check_index(basis, a, "defect_series");
  check_index(basis, b, "defect_series");
  const auto m = run.size();
  if (m < 3)
    throw std::invalid_argument(
        "defect_series: need at least 3 grid points for finite differences");

  DefectSeries series;
  series.a = a;
  series.b = b;
  series.times.resize(m);
  series.defect_commutator.resize(m);
  series.defect_fd.resize(m);

  std::vector<RVector> ea(m), eb(m);
  for (std::size_t k = 0; k < m; ++k) {
    const TransportState& s = run[k];
    series.times[k] = s.t;
    const CMatrix h = horizontal_project(path.evaluator(s.t), s.U);
    series.defect_commutator[k] = defect_commutator(basis, s.U, h, a, b);
    ea[k] = frame_components(basis, s.U * basis.generators[a] * s.U.adjoint());
    eb[k] = frame_components(basis, s.U * basis.generators[b] * s.U.adjoint());
  }

  const double dt = series.times[1] - series.times[0];
  for (std::size_t k = 1; k + 1 < m; ++k)
    series.defect_fd[k] = (ea[k + 1] - ea[k - 1]).dot(eb[k]) / (2.0 * dt);
  series.defect_fd[0] =
      (-3.0 * ea[0] + 4.0 * ea[1] - ea[2]).dot(eb[0]) / (2.0 * dt);
  series.defect_fd[m - 1] =
      (3.0 * ea[m - 1] - 4.0 * ea[m - 2] + ea[m - 3]).dot(eb[m - 1]) /
      (2.0 * dt);

  series.max_abs_commutator = series.defect_commutator.cwiseAbs().maxCoeff();
  series.max_abs_fd =
      series.defect_fd.segment(1, m - 2).cwiseAbs().maxCoeff();
  series.max_abs_discrepancy =
      (series.defect_fd.segment(1, m - 2) -
       series.defect_commutator.segment(1, m - 2))
          .cwiseAbs()
          .maxCoeff();
  return series;
}

double matrix_element_invariance(const GeneratorBasis& basis, const CMatrix& U,
                                 int a) {
  check_index(basis, a, "matrix_element_invariance");
  if (unitarity_defect(U) > 1e-10)
    throw std::runtime_error("matrix_element_invariance: U is not unitary");
  const CMatrix& g = basis.generators[a];
  const CMatrix moved_elements = U.adjoint() * (U * g * U.adjoint()) * U;
  return (moved_elements - g).cwiseAbs().maxCoeff();
}

}  // namespace parframe
