#include "ddcorr/exact.hpp"

#include <cmath>
#include <stdexcept>

namespace ddcorr {

namespace {

constexpr double kHermitianInputTol = 1e-10;

struct Eigensystem {
  RVector values;
  CMatrix vectors;
};

Eigensystem diagonalize(const CMatrix& h) {
  if (h.rows() != h.cols() || h.rows() == 0) {
    throw std::invalid_argument("herm_propagator: matrix must be square and non-empty");
  }
  if (hermiticity_error(h) > kHermitianInputTol) {
    throw std::invalid_argument("herm_propagator: matrix is not Hermitian");
  }
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(h);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("herm_propagator: eigendecomposition failed");
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

void apply_phases(CMatrix& m, const RVector& w, double dt) {
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    m.row(r) *= std::polar(1.0, -w(r) * dt);
  }
}

}  // namespace

std::vector<Segment> segments(const PulseTimeline& timeline) {
  std::vector<Segment> out;
  out.reserve(timeline.flip_times.size() + 1);
  double start = 0.0;
  int sign = 1;
  for (double flip : timeline.flip_times) {
    out.push_back({flip - start, sign});
    start = flip;
    sign = -sign;
  }
  out.push_back({timeline.total_time - start, sign});
  return out;
}

CMatrix herm_propagator(const CMatrix& h, double dt) {
  if (!(dt >= 0.0)) throw std::invalid_argument("herm_propagator: dt must be >= 0");
  const auto es = diagonalize(h);
  CMatrix m = es.vectors.adjoint();
  apply_phases(m, es.values, dt);
  return es.vectors * m;
}

ConditionalEvolution::ConditionalEvolution(const TargetCluster& cluster) : dim_(cluster.dim()) {
  auto plus = diagonalize(cluster.conditional_hamiltonian(+1));
  auto minus = diagonalize(cluster.conditional_hamiltonian(-1));
  w_plus_ = std::move(plus.values);
  v_plus_ = std::move(plus.vectors);
  w_minus_ = std::move(minus.values);
  v_minus_ = std::move(minus.vectors);
  plus_from_minus_ = v_plus_.adjoint() * v_minus_;
  minus_from_plus_ = v_minus_.adjoint() * v_plus_;
}

CMatrix ConditionalEvolution::propagator(const PulseTimeline& timeline, int sensor_sign) const {
  if (sensor_sign != 1 && sensor_sign != -1) {
    throw std::invalid_argument("propagator: sensor sign must be +1 or -1");
  }
  // Carry the running product in the eigenbasis of the current segment's
  // Hamiltonian; a sign toggle is a change of basis.
  const auto segs = segments(timeline);
  bool plus = sensor_sign == 1;
  CMatrix m = plus ? v_plus_.adjoint() : v_minus_.adjoint();
  CMatrix scratch(m.rows(), m.cols());
  for (std::size_t k = 0; k < segs.size(); ++k) {
    apply_phases(m, plus ? w_plus_ : w_minus_, segs[k].duration);
    if (k + 1 < segs.size()) {
      scratch.noalias() = (plus ? minus_from_plus_ : plus_from_minus_) * m;
      m.swap(scratch);
      plus = !plus;
    }
  }
  return (plus ? v_plus_ : v_minus_) * m;
}

ConditionalPropagators ConditionalEvolution::propagators(const PulseTimeline& timeline) const {
  return {propagator(timeline, +1), propagator(timeline, -1)};
}

CoherenceValue ConditionalEvolution::coherence(const PulseTimeline& timeline) const {
  const auto u = propagators(timeline);
  // Tr[A^dagger B] = sum conj(A_ij) B_ij
  const Complex tr = u.u_minus.conjugate().cwiseProduct(u.u_plus).sum();
  return tr / static_cast<double>(dim_);
}

CMatrix conditional_propagator(const TargetCluster& cluster, const PulseTimeline& timeline,
                               int sensor_sign) {
  return ConditionalEvolution(cluster).propagator(timeline, sensor_sign);
}

CoherenceValue coherence_cluster(const TargetCluster& cluster, const PulseTimeline& timeline) {
  return ConditionalEvolution(cluster).coherence(timeline);
}

CoherenceValue coherence_system(const SystemModel& system, const PulseTimeline& timeline) {
  CoherenceValue l{1.0, 0.0};
  for (const auto& c : system.clusters()) l *= coherence_cluster(c, timeline);
  return l;
}

}  // namespace ddcorr
