#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "magtor/exact.hpp"

namespace magtor {

/// Relative tolerance used for every floating-point comparison unless the
/// caller overrides it.
inline constexpr double kDefaultTolerance = 1e-9;

/// Gram matrix of a translation-invariant metric on R^{2m}. Symmetry and
/// positive definiteness are checked by validate_system, not here, so invalid
/// inputs can still be reported on.
class MetricGram {
 public:
  explicit MetricGram(RatMatrix entries);

  const RatMatrix& matrix() const noexcept { return entries_; }
  std::size_t dim() const noexcept { return entries_.rows(); }

  friend bool operator==(const MetricGram&, const MetricGram&) = default;

 private:
  RatMatrix entries_;
};

/// Gram matrix of an integral translation-invariant 2-form (the magnetic field).
class SymplecticGram {
 public:
  explicit SymplecticGram(IntMatrix entries);

  const IntMatrix& matrix() const noexcept { return entries_; }
  std::size_t dim() const noexcept { return entries_.rows(); }

  friend bool operator==(const SymplecticGram&, const SymplecticGram&) = default;

 private:
  IntMatrix entries_;
};

/// A flat torus Z^{2m}\R^{2m} with metric and magnetic field.
class TorusMagneticSystem {
 public:
  /// Throws DimensionMismatch / OddDimension if the two Gram matrices do not
  /// share one even size.
  TorusMagneticSystem(MetricGram metric, SymplecticGram magnetic);

  int m() const noexcept { return static_cast<int>(metric_.dim() / 2); }
  std::size_t dim() const noexcept { return metric_.dim(); }
  const MetricGram& metric() const noexcept { return metric_; }
  const SymplecticGram& magnetic() const noexcept { return magnetic_; }

  friend bool operator==(const TorusMagneticSystem&, const TorusMagneticSystem&) = default;

 private:
  MetricGram metric_;
  SymplecticGram magnetic_;
};

struct ValidationCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct ValidationReport {
  std::vector<ValidationCheck> checks;
  /// Code for the first failed check, if any.
  std::optional<ErrorCode> failure;

  bool ok() const noexcept { return !failure.has_value(); }
};

ValidationReport validate_system(const TorusMagneticSystem& sys);

/// Throws the first failed invariant as an Error.
void require_valid(const TorusMagneticSystem& sys);

/// F = h^{-1} omega, exactly.
RatMatrix f_matrix(const TorusMagneticSystem& sys);

/// sqrt(det omega). The determinant of an integer skew matrix is the square of
/// its Pfaffian, so this is always an integer.
Integer symplectic_volume(const SymplecticGram& magnetic);

/// The eigenvalues of F are +-i d_j^2; this holds the d_j^2 sorted ascending
/// (repeats kept) plus the symplectic volume.
struct SpectralSignature {
  int m = 0;
  std::vector<double> d_squared;
  double sympl_volume = 0.0;
};

/// Floating core shared with the deformation code: Cholesky h = L L^T, then
/// the singular values of the skew matrix L^{-1} omega L^{-T}, which come in
/// equal pairs. Throws PairingFailure when a pair splits by more than `tol`
/// (relative).
SpectralSignature spectral_signature(const Eigen::MatrixXd& metric,
                                     const Eigen::MatrixXd& magnetic, double sympl_volume,
                                     double tol = kDefaultTolerance);

SpectralSignature spectral_signature(const TorusMagneticSystem& sys,
                                     double tol = kDefaultTolerance);

/// Multiset comparison of d^2 (relative tolerance) and exact-within-tol volume.
bool signatures_match(const SpectralSignature& a, const SpectralSignature& b,
                      double tol = kDefaultTolerance);

/// Relative closeness |a - b| <= tol * max(1, |a|, |b|).
bool approx_equal(double a, double b, double tol = kDefaultTolerance);

}  // namespace magtor
