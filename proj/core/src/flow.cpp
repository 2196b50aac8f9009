#include "magtor/flow.hpp"

#include <algorithm>
#include <cmath>

#include "magtor/classical.hpp"

namespace magtor {

MagneticFlow::MagneticFlow(const TorusMagneticSystem& sys) {
  const Eigen::MatrixXd h = to_eigen(sys.metric().matrix());
  const Eigen::MatrixXd omega = to_eigen(sys.magnetic().matrix());
  h_inv_ = h.llt().solve(Eigen::MatrixXd::Identity(h.rows(), h.cols()));
  generator_ = -omega * h_inv_;
  // G is invertible because omega is nondegenerate.
  position_factor_ = h_inv_ * generator_.partialPivLu().inverse();
}

CotangentState MagneticFlow::on_cover(const CotangentState& state, double t) const {
  const Eigen::MatrixXd propagator = matrix_exponential(t * generator_);
  const Eigen::VectorXd p = propagator * state.p;
  const Eigen::VectorXd q = state.q + position_factor_ * (p - state.p);
  return {q, p};
}

CotangentState MagneticFlow::operator()(const CotangentState& state, double t) const {
  CotangentState out = on_cover(state, t);
  out.q = reduce_mod_lattice(out.q);
  return out;
}

double MagneticFlow::energy(const Eigen::VectorXd& p) const { return 0.5 * p.dot(h_inv_ * p); }

Eigen::VectorXd reduce_mod_lattice(const Eigen::VectorXd& q) {
  Eigen::VectorXd out = q;
  for (Eigen::Index i = 0; i < out.size(); ++i) {
    out(i) -= std::floor(out(i));
    if (out(i) >= 1.0) out(i) = 0.0;  // -tiny rounds up to 1.0
  }
  return out;
}

CotangentState magnetic_flow(const TorusMagneticSystem& sys, const CotangentState& state, double t) {
  return MagneticFlow(sys)(state, t);
}

ConjugacyReport flow_conjugacy_check(const TorusMagneticSystem& sys, const RatMatrix& a,
                                     std::span<const CotangentState> states, std::span<const double> times,
                                     double tol) {
  const PhiMap phi = build_phi(a, sys.magnetic());
  const MagneticFlow flow(sys);
  ConjugacyReport report;
  for (const auto& state : states) {
    const auto [phi_q, phi_p] = phi.apply(state.q, state.p);
    for (double t : times) {
      const CotangentState moved = flow.on_cover(state, t);
      const auto [lhs_q, lhs_p] = phi.apply(moved.q, moved.p);
      const CotangentState rhs = flow.on_cover({phi_q, phi_p}, t);
      const double deviation =
          std::max((lhs_q - rhs.q).cwiseAbs().maxCoeff(), (lhs_p - rhs.p).cwiseAbs().maxCoeff());
      report.worst_deviation = std::max(report.worst_deviation, deviation);
    }
  }
  report.ok = report.worst_deviation <= tol;
  return report;
}

}  // namespace magtor
