#include "magtor/classical.hpp"

#include <random>

#include <unsupported/Eigen/MatrixFunctions>

namespace magtor {

bool is_linear_symplectomorphism(const RatMatrix& a, const SymplecticGram& magnetic) {
  const RatMatrix omega = to_rational(magnetic.matrix());
  if (!a.is_square() || a.rows() != omega.rows()) return false;
  return a.transpose() * omega * a == omega;
}

TwistedForm::TwistedForm(const SymplecticGram& magnetic) {
  const std::size_t n = magnetic.dim();
  const RatMatrix c = to_rational(magnetic.matrix());
  const RatMatrix id = RatMatrix::identity(n);
  omega_ = RatMatrix(2 * n, 2 * n);
  omega_.set_block(0, 0, c);
  omega_.set_block(0, n, id);
  omega_.set_block(n, 0, -id);
  inverse_ = RatMatrix(2 * n, 2 * n);
  inverse_.set_block(0, n, -id);
  inverse_.set_block(n, 0, id);
  inverse_.set_block(n, n, c);
}

RatMatrix PhiMap::assembled() const {
  const std::size_t n = block_qq.rows();
  RatMatrix out(2 * n, 2 * n);
  out.set_block(0, 0, block_qq);
  out.set_block(0, n, block_qp);
  out.set_block(n, n, RatMatrix::identity(n));
  return out;
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> PhiMap::apply(const Eigen::VectorXd& q,
                                                          const Eigen::VectorXd& p) const {
  return {to_eigen(block_qq) * q + to_eigen(block_qp) * p, p};
}

PhiMap build_phi(const RatMatrix& a, const SymplecticGram& magnetic) {
  if (!is_linear_symplectomorphism(a, magnetic)) {
    throw Error(ErrorCode::NotSymplectic, "A^T omega A != omega");
  }
  const std::size_t n = a.rows();
  // Both inverses exist: omega is nondegenerate and A preserves it.
  const RatMatrix c_inv = *inverse(to_rational(magnetic.matrix()));
  const RatMatrix a_inv_t = inverse(a)->transpose();
  return PhiMap{a, c_inv * (a_inv_t - RatMatrix::identity(n))};
}

PhiVerification verify_phi(const PhiMap& phi, const TwistedForm& form, const MetricGram& metric) {
  PhiVerification report;
  const std::size_t n = phi.block_qq.rows();
  if (!phi.block_qq.is_square() || phi.block_qp.rows() != n || phi.block_qp.cols() != n ||
      form.dim() != 2 * n || metric.dim() != n) {
    report.failures.emplace_back("dimensions of Phi, Omega and h disagree");
    return report;
  }

  const RatMatrix full = phi.assembled();
  report.preserves_form = full.transpose() * form.matrix() * full == form.matrix();
  if (!report.preserves_form) report.failures.emplace_back("Phi^T Omega Phi != Omega");

  // Spot checks with exact rational points.
  RatMatrix q(n, 1), p(n, 1), q0(n, 1);
  for (std::size_t i = 0; i < n; ++i) {
    q(i, 0) = Rational(static_cast<long long>(i + 1), static_cast<long long>(n + 2));
    p(i, 0) = Rational(static_cast<long long>(2 * i) - 1, 3);
    q0(i, 0) = static_cast<long long>(i % 3) - 1;
  }
  RatMatrix x(2 * n, 1), shifted(2 * n, 1), lattice(2 * n, 1);
  x.set_block(0, 0, q);
  x.set_block(n, 0, p);
  shifted.set_block(0, 0, q + q0);
  shifted.set_block(n, 0, p);
  lattice.set_block(0, 0, q0);

  const RatMatrix image = full * x;
  const RatMatrix h_inv = *inverse(metric.matrix());
  auto energy = [&h_inv, n](const RatMatrix& point) {
    const RatMatrix momentum = point.block(n, 0, n, 1);
    return Rational(1, 2) * (momentum.transpose() * h_inv * momentum)(0, 0);
  };
  report.preserves_hamiltonian = energy(image) == energy(x);
  if (!report.preserves_hamiltonian) report.failures.emplace_back("H o Phi != H");

  const RatMatrix expected_shift = full * lattice;
  RatMatrix a_q0(2 * n, 1);
  a_q0.set_block(0, 0, phi.block_qq * q0);
  report.lattice_equivariant = full * shifted == a_q0 + image && expected_shift == a_q0;
  if (!report.lattice_equivariant) report.failures.emplace_back("Phi(q + q0, p) != (A q0, 0) + Phi(q, p)");
  return report;
}

IntMatrix sample_symplectic_integer(const ChernFactors& r, std::uint64_t seed, int n_factors) {
  const std::size_t m = r.size();
  const std::size_t n = 2 * m;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pick_kind(0, 2);
  std::uniform_int_distribution<int> pick_coeff(-2, 2);

  // S with R S symmetric: (R S)_ij = c_ij * r_max(i,j), c symmetric.
  auto compatible_block = [&]() {
    IntMatrix s(m, m);
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = i; j < m; ++j) {
        const Integer t = Integer(pick_coeff(rng)) * r.values()[j];
        s(i, j) = t / r.values()[i];
        s(j, i) = t / r.values()[j];
      }
    }
    return s;
  };

  IntMatrix product = IntMatrix::identity(n);
  for (int f = 0; f < n_factors; ++f) {
    IntMatrix g = IntMatrix::identity(n);
    switch (pick_kind(rng)) {
      case 0:
        g.set_block(0, m, compatible_block());
        break;
      case 1:
        g.set_block(m, 0, compatible_block());
        break;
      default:
        g.set_block(0, 0, IntMatrix(m, m));
        g.set_block(m, m, IntMatrix(m, m));
        g.set_block(0, m, -IntMatrix::identity(m));
        g.set_block(m, 0, IntMatrix::identity(m));
        break;
    }
    product = product * g;
  }
  return product;
}

IntMatrix sample_symplectic_for(const SymplecticGram& magnetic, std::uint64_t seed, int n_factors) {
  const NormalForm nf = chern_invariant_factors(magnetic);
  const IntMatrix sample = sample_symplectic_integer(nf.factors, seed, n_factors);
  const IntMatrix& basis = nf.transform.matrix();
  const auto basis_inv = to_integer(*inverse(to_rational(basis)));
  return basis * sample * *basis_inv;
}

MetricGram deform_metric(const MetricGram& metric, const RatMatrix& a) {
  if (!a.is_square() || a.rows() != metric.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "transform does not match the metric");
  }
  if (determinant(a) == 0) throw Error(ErrorCode::SingularTransform, "det A = 0");
  return MetricGram(a.transpose() * metric.matrix() * a);
}

Eigen::MatrixXd matrix_exponential(const Eigen::MatrixXd& m) { return m.exp(); }

DeformationResult deformation_family(const MetricGram& metric, const SymplecticGram& magnetic,
                                     const Eigen::MatrixXd& s, std::span<const double> times) {
  const auto n = static_cast<Eigen::Index>(metric.dim());
  if (magnetic.dim() != metric.dim() || s.rows() != n || s.cols() != n) {
    throw Error(ErrorCode::DimensionMismatch, "generator does not match the system");
  }
  const Eigen::MatrixXd h = to_eigen(metric.matrix());
  const Eigen::MatrixXd omega = to_eigen(magnetic.matrix());
  const Eigen::MatrixXd symmetric = 0.5 * (s + s.transpose());

  DeformationResult result;
  result.family.base_metric = h;
  result.family.generator = omega.partialPivLu().solve(symmetric);
  result.family.times.assign(times.begin(), times.end());

  for (double t : times) {
    DeformedMetric member;
    member.t = t;
    member.transform = matrix_exponential(t * result.family.generator);
    member.metric = member.transform.transpose() * h * member.transform;
    member.metric = 0.5 * (member.metric + member.metric.transpose()).eval();
    member.symplectic_defect =
        (member.transform.transpose() * omega * member.transform - omega).cwiseAbs().maxCoeff();
    result.members.push_back(std::move(member));
  }
  return result;
}

}  // namespace magtor
