#pragma once

#include <span>
#include <string_view>

#include <Eigen/Dense>

#include "magtor/exact.hpp"
#include "magtor/system.hpp"

namespace magtor {

/// A point of T*M: q is a position (any representative of q mod Z^{2m}), p a
/// momentum covector.
struct CotangentState {
  Eigen::VectorXd q;
  Eigen::VectorXd p;
};

/// Closed-form Hamiltonian flow of H = 1/2 p^T h^{-1} p for the twisted form.
///
/// With i_{X_H} Omega = dH and Omega = [[C, I], [-I, 0]]:
///   dq/dt = h^{-1} p,   dp/dt = G p,   G = -omega h^{-1},
/// so p(t) = exp(tG) p0 and q(t) = q0 + h^{-1} G^{-1} (exp(tG) - I) p0.
/// The opposite sign convention only reverses time.
class MagneticFlow {
 public:
  static constexpr std::string_view kSignConvention =
      "i_{X_H} Omega = dH; dq/dt = h^-1 p, dp/dt = -omega h^-1 p";

  explicit MagneticFlow(const TorusMagneticSystem& sys);

  /// Flow on the universal cover R^{2m} x R^{2m}.
  CotangentState on_cover(const CotangentState& state, double t) const;
  /// Flow on the torus: q reduced to [0, 1)^{2m}.
  CotangentState operator()(const CotangentState& state, double t) const;

  double energy(const Eigen::VectorXd& p) const;
  std::size_t dim() const noexcept { return static_cast<std::size_t>(h_inv_.rows()); }

 private:
  Eigen::MatrixXd h_inv_;
  Eigen::MatrixXd generator_;
  Eigen::MatrixXd position_factor_;  // h^{-1} G^{-1}
};

CotangentState magnetic_flow(const TorusMagneticSystem& sys, const CotangentState& state, double t);

/// Reduces every coordinate of q into [0, 1).
Eigen::VectorXd reduce_mod_lattice(const Eigen::VectorXd& q);

struct ConjugacyReport {
  double worst_deviation = 0.0;
  bool ok = false;
};

/// Compares Phi(flow_t(x)) with flow_t(Phi(x)) on the universal cover for
/// every state and time, Phi built from the symplectic A.
ConjugacyReport flow_conjugacy_check(const TorusMagneticSystem& sys, const RatMatrix& a,
                                     std::span<const CotangentState> states,
                                     std::span<const double> times, double tol = 1e-8);

}  // namespace magtor
