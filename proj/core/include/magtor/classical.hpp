#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "magtor/exact.hpp"
#include "magtor/normal_form.hpp"
#include "magtor/system.hpp"

namespace magtor {

/// True iff A^T omega A == omega exactly.
bool is_linear_symplectomorphism(const RatMatrix& a, const SymplecticGram& magnetic);

/// The twisted form omega_0 + pi^* omega on T*R^{2m} = R^{4m} as the constant
/// bilinear form [[C, I], [-I, 0]], C the Gram matrix of omega.
class TwistedForm {
 public:
  explicit TwistedForm(const SymplecticGram& magnetic);

  const RatMatrix& matrix() const noexcept { return omega_; }
  /// [[0, -I], [I, C]].
  const RatMatrix& inverse() const noexcept { return inverse_; }
  std::size_t dim() const noexcept { return omega_.rows(); }

 private:
  RatMatrix omega_;
  RatMatrix inverse_;
};

/// Phi(q, p) = (A q + C^{-1}(A^{-T} - I) p, p). The pq block is zero and the
/// pp block the identity, so only the top row of blocks is stored.
struct PhiMap {
  RatMatrix block_qq;
  RatMatrix block_qp;

  /// The full 4m x 4m matrix.
  RatMatrix assembled() const;
  /// Applies Phi to a phase-space point on the universal cover.
  std::pair<Eigen::VectorXd, Eigen::VectorXd> apply(const Eigen::VectorXd& q,
                                                    const Eigen::VectorXd& p) const;
};

/// Throws NotSymplectic unless A preserves omega.
PhiMap build_phi(const RatMatrix& a, const SymplecticGram& magnetic);

struct PhiVerification {
  bool preserves_form = false;
  bool preserves_hamiltonian = false;
  bool lattice_equivariant = false;
  std::vector<std::string> failures;

  bool ok() const noexcept { return failures.empty(); }
};

/// Checks Phi^T Omega Phi == Omega exactly, H o Phi == H and
/// Phi(q + q0, p) == (A q0, 0) + Phi(q, p). The last two follow from the
/// block shape (Phi fixes p, H depends on p alone, Phi is linear); they are
/// confirmed structurally and by an exact spot check.
PhiVerification verify_phi(const PhiMap& phi, const TwistedForm& form, const MetricGram& metric);

/// Product of `n_factors` random generators of Sp(Gram(omega_r), Z): block
/// transvections [[I, S], [0, I]] and [[I, 0], [S, I]] with R S symmetric, and
/// the block swap [[0, -I], [I, 0]]. Deterministic in `seed`.
IntMatrix sample_symplectic_integer(const ChernFactors& r, std::uint64_t seed, int n_factors);

/// Integer symplectic matrix for an arbitrary integral omega, obtained by
/// conjugating a normal-form sample with the reduction transform.
IntMatrix sample_symplectic_for(const SymplecticGram& magnetic, std::uint64_t seed, int n_factors);

/// A^T h A, exactly. Throws SingularTransform if det A == 0.
MetricGram deform_metric(const MetricGram& metric, const RatMatrix& a);

/// A curve A_t = exp(t X) in Sp(omega) and the metrics h_t = A_t^T h A_t.
struct DeformationFamily {
  Eigen::MatrixXd base_metric;
  /// X = omega^{-1} S, so omega X = S is symmetric.
  Eigen::MatrixXd generator;
  std::vector<double> times;
};

struct DeformedMetric {
  double t = 0.0;
  Eigen::MatrixXd transform;
  Eigen::MatrixXd metric;
  /// max |A_t^T omega A_t - omega|.
  double symplectic_defect = 0.0;
};

struct DeformationResult {
  DeformationFamily family;
  std::vector<DeformedMetric> members;
};

/// S is symmetrized first. tr(omega^{-1} S) vanishes for every symmetric S
/// (skew times symmetric), so det A_t = 1 and the volume class is kept.
DeformationResult deformation_family(const MetricGram& metric, const SymplecticGram& magnetic,
                                     const Eigen::MatrixXd& s, std::span<const double> times);

/// exp(M) by scaling and squaring with a Pade core.
Eigen::MatrixXd matrix_exponential(const Eigen::MatrixXd& m);

}  // namespace magtor
