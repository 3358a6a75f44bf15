#include "parframe/scenarios.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>


namespace parframe {

double snap_dt(double duration, double dt) {
  if (dt <= 0.0) throw std::invalid_argument("snap_dt: dt must be positive");
  if (duration <= 0.0)
    throw std::invalid_argument("snap_dt: duration must be positive");
  const long steps = std::max(1L, std::lround(duration / dt));
  return duration / static_cast<double>(steps);
}

double uniform_pm1(std::mt19937_64& rng) {
  // 53 mantissa bits from the top of the draw -> exact double in [0, 1)
  const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return 2.0 * u - 1.0;
}

CMatrix random_hermitian_traceless(std::mt19937_64& rng, int n, double scale) {
  CMatrix G(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double re = scale * uniform_pm1(rng);
      const double im = scale * uniform_pm1(rng);
      G(i, j) = Complex(re, im);
    }
  CMatrix A = 0.5 * (G + G.adjoint());
  const double tr = A.trace().real() / n;
  A -= tr * CMatrix::Identity(n, n);
  return A;
}

CMatrix random_unitary(std::mt19937_64& rng, int n) {
  CMatrix G(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      G(i, j) = Complex(uniform_pm1(rng), uniform_pm1(rng));
  Eigen::HouseholderQR<CMatrix> qr(G);
  CMatrix Q = qr.householderQ();
  // fix the phase gauge so the factorization is unique
  const CMatrix R = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < n; ++j) {
    const Complex r = R(j, j);
    if (std::abs(r) > 0.0) Q.col(j) *= r / std::abs(r);
  }
  return Q;
}

Scenario su2_cone(double theta, double omega, double dt) {
  constexpr double pi = std::numbers::pi;
  if (!(theta > 0.0 && theta < pi))
    throw std::invalid_argument(
        "su2_cone: theta must lie strictly inside (0, pi); the cone "
        "degenerates at the poles");
  if (omega == 0.0)
    throw std::invalid_argument("su2_cone: omega must be nonzero");

  Scenario s;
  s.name = "su2_cone";
  s.basis = build_basis(2);
  const CMatrix& sigma_y = s.basis.generators[1];
  const CMatrix sigma_z = s.basis.generators[2];
  s.initial_frame = unitary_exp(sigma_y, theta / 2.0);  // exp(-i theta sy / 2)
  const double duration = 2.0 * pi / std::abs(omega);
  s.path.duration = duration;
  s.path.description = "su2_cone theta=" + std::to_string(theta);
  s.path.evaluator = [sigma_z, omega](double) -> CMatrix {
    return 0.5 * omega * sigma_z;
  };
  s.integrator.dt = snap_dt(duration, dt);
  s.loop_flag = true;
  return s;
}

Scenario random_horizontal(int n, std::uint64_t seed, int modes,
                           double duration, double dt) {
  if (n < 2) throw std::invalid_argument("random_horizontal: n must be >= 2");
  if (modes < 1)
    throw std::invalid_argument("random_horizontal: modes must be >= 1");
  if (duration <= 0.0)
    throw std::invalid_argument("random_horizontal: duration must be positive");

  std::mt19937_64 rng(seed);
  std::vector<CMatrix> cos_coef, sin_coef;
  for (int k = 1; k <= modes; ++k) {
    const double scale = 1.0 / (2.0 * k);
    cos_coef.push_back(random_hermitian_traceless(rng, n, scale));
    sin_coef.push_back(random_hermitian_traceless(rng, n, scale));
  }

  Scenario s;
  s.name = "random_horizontal";
  s.basis = build_basis(n);
  s.initial_frame = CMatrix::Identity(n, n);
  s.seed = seed;
  s.path.duration = duration;
  s.path.description =
      "random_horizontal n=" + std::to_string(n) + " seed=" +
      std::to_string(seed);
  s.path.evaluator = [cos_coef, sin_coef, duration,
                      n](double t) -> CMatrix {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    CMatrix H = CMatrix::Zero(n, n);
    for (std::size_t k = 0; k < cos_coef.size(); ++k) {
      const double w = two_pi * (k + 1.0) * t / duration;
      H += cos_coef[k] * std::cos(w) + sin_coef[k] * std::sin(w);
    }
    return H;
  };
  s.integrator.dt = snap_dt(duration, dt);
  s.loop_flag = false;
  return s;
}

HolonomyResult holonomy(const Scenario& scenario,
                        const std::vector<TransportState>& run) {
  if (!scenario.loop_flag)
    throw std::invalid_argument("holonomy: scenario is not a closed loop");
  if (run.empty()) throw std::invalid_argument("holonomy: empty run");
  if (std::abs(run.back().t - scenario.path.duration) > 1e-9)
    throw std::invalid_argument("holonomy: run does not reach the duration");

  const CMatrix V = scenario.initial_frame.adjoint() * run.back().U;
  const int n = static_cast<int>(V.rows());
  HolonomyResult result;
  result.phases.resize(n);
  constexpr double pi = std::numbers::pi;
  for (int k = 0; k < n; ++k) {
    double phase = std::arg(V(k, k));
    if (phase <= -pi) phase += 2.0 * pi;  // report in (-pi, pi]
    result.phases[k] = phase;
  }
  double leak = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j) leak = std::max(leak, std::abs(V(i, j)));
  result.off_diagonal_leak = leak;
  return result;
}

double nonlinearity_defect(const std::vector<TransportState>& run,
                           const GeneratorPath& path, const CMatrix& u_mix) {
  if (unitarity_defect(u_mix) > 1e-10)
    throw std::invalid_argument("nonlinearity_defect: u_mix is not unitary");
  double worst = 0.0;
  for (const TransportState& s : run) {
    const CMatrix h = horizontal_project(path.evaluator(s.t), s.U);
    const CMatrix W = s.U * u_mix;
    worst = std::max(
        worst, (W.adjoint() * h * W).diagonal().cwiseAbs().maxCoeff());
  }
  return worst;
}

}  // namespace parframe
