#pragma once

#include <vector>

#include "magtor/exact.hpp"
#include "magtor/system.hpp"

namespace magtor {

/// Chern invariant factors r_1 | r_2 | ... | r_m, all >= 1.
class ChernFactors {
 public:
  /// Throws InvalidFactors if an entry is < 1 or the divisibility chain breaks.
  explicit ChernFactors(std::vector<Integer> r);

  const std::vector<Integer>& values() const noexcept { return r_; }
  std::size_t size() const noexcept { return r_.size(); }
  Integer product() const;

  friend bool operator==(const ChernFactors&, const ChernFactors&) = default;

 private:
  std::vector<Integer> r_;
};

/// Integer matrix with determinant +-1.
///
/// Pf(A^T omega A) = det(A) Pf(omega), so when the Pfaffian of omega and that
/// of its normal form have opposite signs, no determinant +1 witness exists and
/// the reduction returns one with determinant -1. `determinant()` exposes which
/// case occurred.
class UnimodularTransform {
 public:
  /// Throws NotUnimodular if |det| != 1.
  explicit UnimodularTransform(IntMatrix a);

  const IntMatrix& matrix() const noexcept { return a_; }
  int determinant() const noexcept { return det_; }

 private:
  IntMatrix a_;
  int det_ = 1;
};

struct NormalForm {
  ChernFactors factors;
  UnimodularTransform transform;

  bool orientation_preserving() const noexcept { return transform.determinant() == 1; }
};

/// Gram(omega_r) = [[0, R], [-R, 0]], R = diag(r), in (x_1..x_m, y_1..y_m) order.
IntMatrix standard_form_gram(const ChernFactors& r);

/// The standard structure J0 = [[0, I], [-I, 0]] of size 2m.
IntMatrix standard_symplectic(int m);

/// Skew-symmetric Smith reduction. Returns r and A with A^T omega A =
/// Gram(omega_r) exactly. Throws DegenerateInput when det(omega) = 0.
NormalForm chern_invariant_factors(const SymplecticGram& magnetic);

/// True iff A^T omega A == Gram(omega_r) exactly, det(A) == +1 and r is a
/// divisibility chain.
bool verify_normal_form(const SymplecticGram& magnetic, const ChernFactors& r,
                        const UnimodularTransform& a);

enum class Obstruction { NotSymplectomorphic, Inconclusive };

constexpr std::string_view to_string(Obstruction verdict) {
  return verdict == Obstruction::NotSymplectomorphic ? "NotSymplectomorphic" : "Inconclusive";
}

struct ObstructionReport {
  Obstruction verdict = Obstruction::Inconclusive;
  ChernFactors first;
  ChernFactors second;
};

/// Different Chern factors rule out a symplectomorphism of the twisted
/// cotangent bundles (with or without the zero section). Equal factors prove
/// nothing: the forms need not be cohomologous.
ObstructionReport phase_space_obstruction(const SymplecticGram& first, const SymplecticGram& second);

}  // namespace magtor
