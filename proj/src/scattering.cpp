#include "wgscatter/scattering.hpp"

#include <spdlog/spdlog.h>

#include <Eigen/LU>

#include <cmath>
#include <sstream>

namespace wgscatter {
namespace {

const Complex I(0.0, 1.0);

} // namespace

double ScatteringProblem::energy() const {
  if (total_energy_override)
    return *total_energy_override;
  return total_energy(incidence, atom, guide);
}

double ScatteringProblem::chi() const {
  return wgscatter::chi(laser.wavenumber_kL, guide.width_a);
}

void ScatteringProblem::validate() const {
  atom.validate();
  guide.validate();
  laser.validate();
  incidence.validate();
  config.validate();
  const int N = config.truncation_N;
  if (incidence.incident_channel.mode_n > N)
    throw ConfigError("incident mode " +
                      std::to_string(incidence.incident_channel.mode_n) +
                      " exceeds truncation N=" + std::to_string(N));
  const double E = energy();
  if (!(E > 0.0) || !std::isfinite(E))
    throw ConfigError("total energy must be positive");
  for (int n = 1; n <= N; ++n) {
    const double En = transverse_energy(n, guide.width_a, atom.mass);
    if (std::abs(E - En) < kThresholdMargin * std::abs(E))
      throw ConfigError("energy sits on the threshold of transverse mode " +
                        std::to_string(n) + " (|E - E_n|/E < 1e-9)");
  }
  const double E0 =
      transverse_energy(incidence.incident_channel.mode_n, guide.width_a, atom.mass);
  if (!(E > E0))
    throw ConfigError("incident channel " + to_string(incidence.incident_channel) +
                      " is closed at this energy");
}

ComplexVector ScatteringSolution::backward_raw() const {
  ComplexVector raw(backward_rescaled.size());
  for (Eigen::Index a = 0; a < raw.size(); ++a)
    raw(a) = backward_rescaled(a) *
             std::exp(I * eigensystem.wavenumbers(a) * length_L);
  return raw;
}

ScatteringSolution solve(const ScatteringProblem &problem) {
  problem.validate();
  const int N = problem.config.truncation_N;
  const EMatrixSpec region = EMatrixSpec::make(
      problem.energy(), problem.laser.rabi_frequency_omega, N, problem.chi(),
      problem.guide.width_a, problem.atom.mass);
  return solve(problem, region);
}

ScatteringSolution solve(const ScatteringProblem &problem,
                         const EMatrixSpec &region) {
  problem.validate();
  const int N = problem.config.truncation_N;
  if (region.size() != N)
    throw ConfigError("laser-region operator size does not match truncation N");
  const int M = 2 * N;
  const double E = problem.energy();
  const double mass = problem.atom.mass;
  const double L = problem.laser.region_length_L;

  ScatteringSolution s;
  s.truncation_N = N;
  s.energy = E;
  s.length_L = L;
  s.incident_index = problem.incidence.incident_channel.index(N);
  s.eigensystem = diagonalize(build_e_matrix(region), mass);

  s.channel_wavenumbers.resize(M);
  for (int c = 0; c < M; ++c) {
    const int n = Channel::from_index(static_cast<std::size_t>(c), N).mode_n;
    s.channel_wavenumbers(c) = longitudinal_wavenumber(
        E, transverse_energy(n, problem.guide.width_a, mass), mass);
  }
  const double k0 = s.channel_wavenumbers(static_cast<Eigen::Index>(s.incident_index)).real();

  const ComplexMatrix &V = s.eigensystem.eigenvectors;
  const ComplexVector q = s.eigensystem.wavenumbers / k0;
  const ComplexVector k = s.channel_wavenumbers / k0;
  ComplexVector phase(M);
  for (int a = 0; a < M; ++a)
    phase(a) = std::exp(I * s.eigensystem.wavenumbers(a) * L);

  // Unknowns [R | A | B~ | T~], rows (i)..(iv); derivative rows divided by i k0.
  const Eigen::Index R0 = 0, A0 = M, B0 = 2 * M, T0 = 3 * M;
  ComplexMatrix sys = ComplexMatrix::Zero(4 * M, 4 * M);
  ComplexVector rhs = ComplexVector::Zero(4 * M);
  const ComplexMatrix Vq = V * q.asDiagonal();
  const ComplexMatrix Ve = V * phase.asDiagonal();
  const ComplexMatrix Vqe = Vq * phase.asDiagonal();

  sys.block(0, A0, M, M) = V;
  sys.block(0, B0, M, M) = Ve;
  sys.block(M, A0, M, M) = Vq;
  sys.block(M, B0, M, M) = -Vqe;
  sys.block(2 * M, A0, M, M) = Ve;
  sys.block(2 * M, B0, M, M) = V;
  sys.block(3 * M, A0, M, M) = Vqe;
  sys.block(3 * M, B0, M, M) = -Vq;
  for (int c = 0; c < M; ++c) {
    sys(c, R0 + c) = -1.0;
    sys(M + c, R0 + c) = k(c);
    sys(2 * M + c, T0 + c) = -1.0;
    sys(3 * M + c, T0 + c) = -k(c);
  }
  const auto c0 = static_cast<Eigen::Index>(s.incident_index);
  rhs(c0) = 1.0;
  rhs(M + c0) = k(c0);

  const Eigen::PartialPivLU<ComplexMatrix> lu(sys);
  const double rcond = lu.rcond();
  s.condition_estimate = rcond > 0.0 ? 1.0 / rcond : std::numeric_limits<double>::infinity();
  spdlog::debug("matching system {}x{}: condition estimate {:.3e}", 4 * M, 4 * M,
                s.condition_estimate);
  if (!(s.condition_estimate <= kMaxConditionEstimate)) {
    Eigen::Index worst_c = 0, worst_a = 0;
    const double min_k = k.cwiseAbs().minCoeff(&worst_c);
    const double min_q = q.cwiseAbs().minCoeff(&worst_a);
    std::ostringstream msg;
    msg << "matching system is near-singular (condition estimate "
        << s.condition_estimate << "); ";
    if (min_q < min_k)
      msg << "interior mode " << worst_a << " has q/k0 = " << min_q
          << " (eigenvalue close to zero)";
    else
      msg << "channel " << to_string(Channel::from_index(static_cast<std::size_t>(worst_c), N))
          << " has k/k0 = " << min_k << " (close to threshold)";
    throw NumericalError(msg.str());
  }

  const ComplexVector x = lu.solve(rhs);
  s.reflection = x.segment(R0, M);
  s.forward = x.segment(A0, M);
  s.backward_rescaled = x.segment(B0, M);
  s.transmission_tilde = x.segment(T0, M);
  s.transmission.resize(M);
  for (int c = 0; c < M; ++c) {
    const Complex kc = s.channel_wavenumbers(c);
    s.transmission(c) = kc.imag() == 0.0
                            ? s.transmission_tilde(c) * std::exp(-I * kc * L)
                            : s.transmission_tilde(c);
  }

  s.probabilities = channel_probabilities(s);
  s.unitarity_deficit = unitarity_deficit(s);
  return s;
}

std::vector<ChannelProbability> channel_probabilities(const ScatteringSolution &s) {
  const int M = 2 * s.truncation_N;
  const double k0 =
      s.channel_wavenumbers(static_cast<Eigen::Index>(s.incident_index)).real();
  std::vector<ChannelProbability> out(M);
  for (int c = 0; c < M; ++c) {
    auto &p = out[c];
    p.channel = Channel::from_index(static_cast<std::size_t>(c), s.truncation_N);
    const Complex kc = s.channel_wavenumbers(c);
    p.open = kc.imag() == 0.0 && kc.real() > 0.0;
    p.reflection_modulus = std::abs(s.reflection(c));
    p.transmission_modulus = std::abs(s.transmission(c));
    if (p.open) {
      p.reflection = std::norm(s.reflection(c)) * kc.real() / k0;
      p.transmission = std::norm(s.transmission_tilde(c)) * kc.real() / k0;
    }
  }
  return out;
}

double unitarity_deficit(const ScatteringSolution &s) {
  double total = 0.0;
  for (const auto &p : s.probabilities)
    total += p.reflection + p.transmission;
  return std::abs(1.0 - total);
}

double matching_residual(const ScatteringSolution &s) {
  const int M = 2 * s.truncation_N;
  const double k0 =
      s.channel_wavenumbers(static_cast<Eigen::Index>(s.incident_index)).real();
  const ComplexMatrix &V = s.eigensystem.eigenvectors;
  ComplexVector e(M), iq(M);
  for (int a = 0; a < M; ++a) {
    e(a) = std::exp(I * s.eigensystem.wavenumbers(a) * s.length_L);
    iq(a) = I * s.eigensystem.wavenumbers(a) / k0;
  }
  const ComplexVector &A = s.forward;
  const ComplexVector &B = s.backward_rescaled;
  ComplexVector inc = ComplexVector::Zero(M);
  inc(static_cast<Eigen::Index>(s.incident_index)) = 1.0;
  const ComplexVector ik = I * s.channel_wavenumbers / k0;

  const ComplexVector left_psi = inc + s.reflection;
  const ComplexVector left_dpsi = ik.cwiseProduct(inc - s.reflection);
  const ComplexVector in0_psi = V * (A + e.cwiseProduct(B));
  const ComplexVector in0_dpsi = V * iq.cwiseProduct(A - e.cwiseProduct(B));
  const ComplexVector inL_psi = V * (e.cwiseProduct(A) + B);
  const ComplexVector inL_dpsi = V * iq.cwiseProduct(e.cwiseProduct(A) - B);
  const ComplexVector right_psi = s.transmission_tilde;
  const ComplexVector right_dpsi = ik.cwiseProduct(s.transmission_tilde);

  return std::max({(left_psi - in0_psi).cwiseAbs().maxCoeff(),
                   (left_dpsi - in0_dpsi).cwiseAbs().maxCoeff(),
                   (inL_psi - right_psi).cwiseAbs().maxCoeff(),
                   (inL_dpsi - right_dpsi).cwiseAbs().maxCoeff()});
}

double interior_population(const ScatteringSolution &s, double x,
                           const Channel &channel) {
  if (x < 0.0 || x > s.length_L)
    throw ConfigError("interior position outside the laser region [0, L]");
  const int M = 2 * s.truncation_N;
  ComplexVector modes(M);
  for (int a = 0; a < M; ++a) {
    const Complex qa = s.eigensystem.wavenumbers(a);
    modes(a) = s.forward(a) * std::exp(I * qa * x) +
               s.backward_rescaled(a) * std::exp(I * qa * (s.length_L - x));
  }
  const auto c = static_cast<Eigen::Index>(channel.index(s.truncation_N));
  return std::norm(s.eigensystem.eigenvectors.row(c).transpose().cwiseProduct(modes).sum());
}

std::vector<double> level_populations(const ScatteringSolution &s) {
  const int M = 2 * s.truncation_N;
  const double k0 =
      s.channel_wavenumbers(static_cast<Eigen::Index>(s.incident_index)).real();
  std::vector<double> pop(M, 0.0);
  double total = 0.0;
  for (int a = 0; a < M; ++a) {
    const Complex qa = s.eigensystem.wavenumbers(a);
    const double flux = std::max(qa.real(), 0.0) / k0;
    if (flux == 0.0)
      continue;
    pop[a] = (std::norm(s.forward(a)) + std::norm(s.backward_rescaled(a))) * flux;
    total += pop[a];
  }
  if (total > 0.0)
    for (auto &p : pop)
      p /= total;
  return pop;
}

} // namespace wgscatter
