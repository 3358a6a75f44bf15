#include "parframe/transport.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace parframe {

namespace {

CMatrix sample_path(const GeneratorPath& path, double t) {
  CMatrix H = path.evaluator(t);
  if (hermiticity_defect(H) > 1e-12 * (1.0 + H.cwiseAbs().maxCoeff()))
    throw std::runtime_error("transport: path evaluator returned a "
                             "non-hermitian matrix at t=" + std::to_string(t));
  return H;
}

double moving_diagonal_max(const CMatrix& h, const CMatrix& U) {
  return (U.adjoint() * h * U).diagonal().cwiseAbs().maxCoeff();
}

}  // namespace

CMatrix horizontal_project(const CMatrix& H_cand, const CMatrix& U) {
  if (H_cand.rows() != U.rows() || H_cand.cols() != U.cols())
    throw std::invalid_argument("horizontal_project: dimension mismatch");
  if (unitarity_defect(U) > 1e-10)
    throw std::runtime_error(
        "horizontal_project: U is not unitary (integrator drift?)");
  const RVector d = (U.adjoint() * H_cand * U).diagonal().real();
  return H_cand - U * d.asDiagonal() * U.adjoint();
}

CMatrix unitary_exp(const CMatrix& h, double dt) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("unitary_exp: eigendecomposition failed");
  const CVector phases =
      (Complex(0.0, -dt) * es.eigenvalues().cast<Complex>().array()).exp();
  CMatrix result =
      es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
  if (!result.allFinite())
    throw std::runtime_error("unitary_exp: non-finite result (malformed path)");
  return result;
}

TransportState step(const TransportState& state, const GeneratorPath& path,
                    const IntegratorConfig& cfg) {
  const double dt = cfg.dt;
  if (state.t + dt > path.duration + 1e-12)
    throw std::invalid_argument("step: time step exceeds path duration");

  // Midpoint generator via fixed-point correction, freshly projected at every
  // evaluation so the horizontality constraint holds identically.
  CMatrix h = horizontal_project(sample_path(path, state.t), state.U);
  for (int it = 0; it < cfg.corrector_iterations; ++it) {
    const CMatrix U_half = unitary_exp(h, dt / 2.0) * state.U;
    h = horizontal_project(sample_path(path, state.t + dt / 2.0), U_half);
  }

  TransportState next;
  next.t = state.t + dt;
  next.U = unitary_exp(h, dt) * state.U;
  next.unitarity_defect = parframe::unitarity_defect(next.U);
  next.horizontal_residual = moving_diagonal_max(
      horizontal_project(sample_path(path, next.t), next.U), next.U);
  return next;
}

std::vector<TransportState> evolve(const CMatrix& U0, const GeneratorPath& path,
                                   const IntegratorConfig& cfg) {
  if (unitarity_defect(U0) > 1e-12)
    throw std::invalid_argument("evolve: U0 is not unitary");
  if (!path.evaluator) throw std::invalid_argument("evolve: empty path");
  if (cfg.corrector_iterations < 1)
    throw std::invalid_argument("evolve: corrector_iterations must be >= 1");

  std::vector<TransportState> states;
  TransportState first;
  first.t = 0.0;
  first.U = U0;
  first.unitarity_defect = unitarity_defect(U0);
  first.horizontal_residual = moving_diagonal_max(
      horizontal_project(sample_path(path, 0.0), U0), U0);
  states.push_back(std::move(first));

  if (path.duration <= 0.0) return states;

  if (cfg.dt <= 0.0) throw std::invalid_argument("evolve: dt must be positive");
  const double steps_real = path.duration / cfg.dt;
  const long steps = std::lround(steps_real);
  if (steps < 1 || std::abs(steps_real - steps) > 1e-9 * steps)
    throw std::invalid_argument(
        "evolve: dt does not divide the path duration (grid alignment)");

  states.reserve(static_cast<std::size_t>(steps) + 1);
  for (long k = 0; k < steps; ++k) {
    try {
      states.push_back(step(states.back(), path, cfg));
    } catch (const std::exception& e) {
      throw std::runtime_error("evolve: step failed at t=" +
                               std::to_string(states.back().t) + ": " +
                               e.what());
    }
    states.back().t = (k + 1) * cfg.dt;  // exact grid times, no accumulation
    if (states.back().unitarity_defect > 1e-10)
      throw std::runtime_error("evolve: unitarity defect exceeded 1e-10 at t=" +
                               std::to_string(states.back().t));
  }
  return states;
}

}  // namespace parframe
