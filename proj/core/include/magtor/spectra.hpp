#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "magtor/exact.hpp"
#include "magtor/system.hpp"

namespace magtor {

struct LandauLevel {
  double energy = 0.0;
  Integer multiplicity;
};

/// Spec(k omega, h) truncated at an energy cutoff. Levels are sorted and
/// distinct: index tuples whose energies agree within the merge tolerance are
/// one level with summed multiplicity.
struct LandauSpectrum {
  int k = 1;
  double cutoff = 0.0;
  std::vector<LandauLevel> levels;
};

/// Relative width used to merge coincident energies: 1e-9 * (1 + |nu|).
inline constexpr double kMergeTolerance = 1e-9;

/// All (1/k) nu(j), nu(j) = pi * sum_i d_i^2 (2 j_i + 1), j in (Z>=0)^m, up to
/// `cutoff`, each counted k^m V times.
///
/// Throws NonIntegralVolume if sig.sympl_volume is not within 1e-9 of a
/// positive integer and CutoffTooSmall if not even the ground level fits.
LandauSpectrum landau_spectrum(const SpectralSignature& sig, int k, double cutoff);

struct SpectrumComparison {
  bool equal = false;
  /// Human-readable description of the first disagreement.
  std::string mismatch;

  explicit operator bool() const noexcept { return equal; }
};

/// Compares both spectra below min(cutoffs): energies within `tol`
/// (relative), multiplicities exactly. Throws InvalidArgument when k differs.
SpectrumComparison spectra_equal(const LandauSpectrum& a, const LandauSpectrum& b,
                                 double tol = kDefaultTolerance);

struct EquivalenceReport {
  bool equivalent = false;
  bool d_squared_match = false;
  bool volume_match = false;
  SpectralSignature first;
  SpectralSignature second;
  Integer first_volume;
  Integer second_volume;
  std::string reason;

  explicit operator bool() const noexcept { return equivalent; }
};

/// Quantum equivalence: same eigenvalues of h^{-1} omega and the same
/// symplectic volume. A positive verdict covers every level k.
EquivalenceReport quantum_equivalent(const TorusMagneticSystem& first,
                                     const TorusMagneticSystem& second,
                                     double tol = kDefaultTolerance);

/// Kaehler iff all d_j^2 equal 1, i.e. F^2 = -Id. When the floating test
/// passes by more than round-off, F^2 + Id == 0 is confirmed exactly and the
/// exact answer wins.
bool is_kahler(const TorusMagneticSystem& sys, double tol = kDefaultTolerance);

struct ReconstructionResult {
  SpectralSignature signature;
  /// 1-based depth of the deepest input level the induction had to read.
  std::size_t levels_consumed = 0;
  /// Regenerating the spectrum from `signature` reproduces the input.
  bool consistent = false;
};

/// Recovers {d_j^2} and V from a truncated spectrum by peeling off the
/// levels explained by the d^2 found so far.
///
/// Throws InsufficientCutoff when the induction runs out of levels and
/// InconsistentSpectrum when multiplicities are not the required multiples.
ReconstructionResult reconstruct_signature(const LandauSpectrum& spectrum);

struct ConsistencyReport {
  bool all_equal = false;
  /// First k at which the spectra differ, 0 if none.
  int first_failing_k = 0;
  bool quantum_equivalent = false;
  /// all_equal == quantum_equivalent.
  bool agrees = false;

  explicit operator bool() const noexcept { return all_equal; }
};

/// Compares truncated spectra at k = 1..k_max and checks that the outcome
/// matches the quantum_equivalent verdict.
ConsistencyReport all_k_consistency(const TorusMagneticSystem& first,
                                    const TorusMagneticSystem& second, int k_max, double cutoff,
                                    double tol = kDefaultTolerance);

}  // namespace magtor
