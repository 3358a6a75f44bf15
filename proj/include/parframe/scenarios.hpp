#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "parframe/lie_algebra.hpp"
#include "parframe/transport.hpp"
#include "parframe/types.hpp"

namespace parframe {

/// A ready-to-run experiment: basis, initial frame, candidate generator path
/// and the integrator grid. The stored dt is snapped to divide the duration
/// exactly (see snap_dt).
struct Scenario {
  std::string name;
  GeneratorBasis basis;
  CMatrix initial_frame;  // U0
  GeneratorPath path;
  IntegratorConfig integrator;
  bool loop_flag = false;
  std::uint64_t seed = 0;
};

/// Diagonal phases of U0^dag U(T) for a closed loop, in (-pi, pi], plus the
/// largest off-diagonal magnitude (how far the loop is from returning the
/// frame to its initial eigenbasis).
struct HolonomyResult {
  RVector phases;
  double off_diagonal_leak = 0.0;
};

/// Largest divisor-aligned step near dt: duration / round(duration/dt).
double snap_dt(double duration, double dt);

/// su(2) cone loop: U0 = exp(-i theta sigma_y / 2) so the frame axis starts at
/// polar angle theta; the candidate generator (omega/2) sigma_z sweeps the
/// axis once around the cone over T = 2 pi / omega.
Scenario su2_cone(double theta, double omega, double dt);

/// Truncated random Fourier path on su(n): H(t) = sum_{k=1..modes}
/// A_k cos(2 pi k t/T) + B_k sin(2 pi k t/T), with hermitian traceless A_k,
/// B_k drawn deterministically from the seed (entries within [-1, 1], scaled
/// by 1/(2k) so higher modes decay and the path stays smooth).
Scenario random_horizontal(int n, std::uint64_t seed, int modes,
                           double duration, double dt);

/// Geometric phases of a completed loop run.
HolonomyResult holonomy(const Scenario& scenario,
                        const std::vector<TransportState>& run);

/// Moving-diagonal residual of the re-mixed frame |n'(t)> = U(t) u_mix |n>,
/// maximized over the run: zero iff the mixed frame is also parallel
/// transported (true only for diagonal u_mix).
double nonlinearity_defect(const std::vector<TransportState>& run,
                           const GeneratorPath& path, const CMatrix& u_mix);

/// Deterministic uniform draw in [-1, 1) built on mt19937_64 (the stdlib
/// distribution object is implementation-defined, this mapping is not).
double uniform_pm1(std::mt19937_64& rng);

/// Random hermitian traceless matrix with entries drawn within
/// [-scale, scale]; fixed draw order (row-major, real then imaginary).
CMatrix random_hermitian_traceless(std::mt19937_64& rng, int n, double scale);

/// Random unitary from a seeded dense draw, QR-orthonormalized with a fixed
/// phase gauge.
CMatrix random_unitary(std::mt19937_64& rng, int n);

}  // namespace parframe
