#include "magtor/system.hpp"

#include <algorithm>
#include <cmath>

namespace magtor {

MetricGram::MetricGram(RatMatrix entries) : entries_(std::move(entries)) {
  if (!entries_.is_square()) throw Error(ErrorCode::DimensionMismatch, "metric Gram matrix is not square");
}

SymplecticGram::SymplecticGram(IntMatrix entries) : entries_(std::move(entries)) {
  if (!entries_.is_square()) throw Error(ErrorCode::DimensionMismatch, "magnetic Gram matrix is not square");
}

TorusMagneticSystem::TorusMagneticSystem(MetricGram metric, SymplecticGram magnetic)
    : metric_(std::move(metric)), magnetic_(std::move(magnetic)) {
  if (metric_.dim() != magnetic_.dim()) {
    throw Error(ErrorCode::DimensionMismatch,
                "metric is " + std::to_string(metric_.dim()) + "x" + std::to_string(metric_.dim()) +
                    " but magnetic is " + std::to_string(magnetic_.dim()) + "x" +
                    std::to_string(magnetic_.dim()));
  }
  if (metric_.dim() == 0 || metric_.dim() % 2 != 0) {
    throw Error(ErrorCode::OddDimension, "dimension must be a positive even number, got " +
                                             std::to_string(metric_.dim()));
  }
}

ValidationReport validate_system(const TorusMagneticSystem& sys) {
  ValidationReport report;
  auto record = [&report](std::string name, bool passed, std::string detail, ErrorCode code) {
    if (!passed && !report.failure) report.failure = code;
    report.checks.push_back({std::move(name), passed, std::move(detail)});
  };

  const RatMatrix& h = sys.metric().matrix();
  const IntMatrix& w = sys.magnetic().matrix();

  record("dimension", true, "2m = " + std::to_string(sys.dim()), ErrorCode::OddDimension);

  const bool symmetric = is_symmetric(h);
  record("metric_symmetric", symmetric, symmetric ? "" : "h^T != h", ErrorCode::MetricNotSymmetric);

  const auto minors = leading_principal_minors(h);
  const auto bad_minor =
      std::find_if(minors.begin(), minors.end(), [](const Rational& d) { return d <= 0; });
  const bool positive = symmetric && bad_minor == minors.end();
  std::string minor_detail;
  if (bad_minor != minors.end()) {
    const auto order = static_cast<std::size_t>(bad_minor - minors.begin()) + 1;
    minor_detail = "leading minor of order " + std::to_string(order) + " is " + to_string(*bad_minor);
  } else if (!symmetric) {
    minor_detail = "not symmetric";
  }
  record("metric_positive_definite", positive, minor_detail, ErrorCode::MetricNotPositiveDefinite);

  const bool skew = is_skew(w);
  record("magnetic_skew", skew, skew ? "" : "omega^T != -omega", ErrorCode::MagneticNotSkew);

  // Integrality is carried by the type; recorded so the report lists every invariant.
  record("magnetic_integral", true, "", ErrorCode::SchemaViolation);

  const Integer det = determinant(w);
  record("magnetic_nondegenerate", det != 0, "det(omega) = " + det.str(), ErrorCode::MagneticDegenerate);

  return report;
}

void require_valid(const TorusMagneticSystem& sys) {
  const ValidationReport report = validate_system(sys);
  if (report.ok()) return;
  for (const auto& check : report.checks) {
    if (!check.passed) throw Error(*report.failure, check.name + (check.detail.empty() ? "" : ": " + check.detail));
  }
}

RatMatrix f_matrix(const TorusMagneticSystem& sys) {
  const auto h_inv = inverse(sys.metric().matrix());
  if (!h_inv) throw Error(ErrorCode::MetricNotPositiveDefinite, "metric is singular");
  return *h_inv * to_rational(sys.magnetic().matrix());
}

Integer symplectic_volume(const SymplecticGram& magnetic) {
  const Integer det = determinant(magnetic.matrix());
  if (det == 0) throw Error(ErrorCode::MagneticDegenerate, "det(omega) = 0");
  auto root = exact_sqrt(det);
  if (!root) throw Error(ErrorCode::NotPerfectSquare, "det(omega) = " + det.str() + " is not a square");
  return *root;
}

bool approx_equal(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
}

SpectralSignature spectral_signature(const Eigen::MatrixXd& metric, const Eigen::MatrixXd& magnetic,
                                     double sympl_volume, double tol) {
  const Eigen::Index n = metric.rows();
  if (n == 0 || n % 2 != 0 || metric.cols() != n || magnetic.rows() != n || magnetic.cols() != n) {
    throw Error(ErrorCode::DimensionMismatch, "signature needs two 2m x 2m matrices");
  }
  const Eigen::LLT<Eigen::MatrixXd> llt(metric);
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorCode::MetricNotPositiveDefinite, "Cholesky factorization failed");
  }
  // S = L^{-1} omega L^{-T} is similar to F = h^{-1} omega and skew-symmetric.
  const Eigen::MatrixXd lower = llt.matrixL();
  const Eigen::MatrixXd half = lower.triangularView<Eigen::Lower>().solve(magnetic);
  const Eigen::MatrixXd skew =
      lower.triangularView<Eigen::Lower>().solve(half.transpose()).transpose();

  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(skew);
  Eigen::VectorXd sigma = svd.singularValues();  // descending
  SpectralSignature sig;
  sig.m = static_cast<int>(n / 2);
  sig.sympl_volume = sympl_volume;
  for (Eigen::Index j = 0; j < n; j += 2) {
    const double upper = sigma(j);
    const double lower_val = sigma(j + 1);
    if (!(lower_val > 0.0) || std::abs(upper - lower_val) > tol * std::max(1.0, upper)) {
      throw Error(ErrorCode::PairingFailure, "singular values " + std::to_string(upper) + " and " +
                                                 std::to_string(lower_val) + " do not pair");
    }
    sig.d_squared.push_back(lower_val);
  }
  std::sort(sig.d_squared.begin(), sig.d_squared.end());
  return sig;
}

SpectralSignature spectral_signature(const TorusMagneticSystem& sys, double tol) {
  const double volume = symplectic_volume(sys.magnetic()).convert_to<double>();
  return spectral_signature(to_eigen(sys.metric().matrix()), to_eigen(sys.magnetic().matrix()),
                            volume, tol);
}

bool signatures_match(const SpectralSignature& a, const SpectralSignature& b, double tol) {
  if (a.m != b.m || a.d_squared.size() != b.d_squared.size()) return false;
  if (!approx_equal(a.sympl_volume, b.sympl_volume, tol)) return false;
  for (std::size_t j = 0; j < a.d_squared.size(); ++j) {
    if (!approx_equal(a.d_squared[j], b.d_squared[j], tol)) return false;
  }
  return true;
}

}  // namespace magtor
