#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "magtor/system.hpp"

namespace magtor {

/// Squared h-lengths v^T h v of the nonzero lattice vectors v in Z^{2m}, with
/// multiplicity, in ascending order.
struct LengthSpectrum {
  std::vector<double> squared_lengths;
  /// More than max_count vectors were found; only the smallest are kept.
  bool truncated = false;
  /// Enumeration nodes visited.
  std::size_t candidates = 0;
};

/// Lenstra-Lenstra-Lovasz reduction of a Gram matrix (delta = 0.99). Returns
/// the unimodular change of basis U; U^T G U is the reduced Gram matrix.
Eigen::MatrixXd lll_reduce_gram(const Eigen::MatrixXd& gram);

/// Complete enumeration of the ellipsoid v^T h v <= bound (Fincke-Pohst on the
/// LLL-reduced basis). Throws BoundTooLarge once more than 100 * max_count
/// candidates have been visited.
LengthSpectrum length_spectrum(const Eigen::MatrixXd& gram, double bound, std::size_t max_count);
LengthSpectrum length_spectrum(const MetricGram& metric, double bound, std::size_t max_count);

/// Multiset equality with relative tolerance.
bool same_length_spectrum(const LengthSpectrum& a, const LengthSpectrum& b,
                          double tol = kDefaultTolerance);

}  // namespace magtor
