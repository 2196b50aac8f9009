#include "magtor/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace magtor {

namespace {

constexpr double kPi = std::numbers::pi;

double merge_width(double nu) { return kMergeTolerance * (1.0 + std::abs(nu)); }

Integer integral_volume(double volume) {
  const double rounded = std::round(volume);
  if (rounded < 1.0 || std::abs(volume - rounded) > 1e-9 * std::max(1.0, volume)) {
    throw Error(ErrorCode::NonIntegralVolume,
                "symplectic volume " + std::to_string(volume) + " is not a positive integer");
  }
  return Integer(static_cast<long long>(rounded));
}

Integer power(const Integer& base, int exponent) {
  Integer out = 1;
  for (int i = 0; i < exponent; ++i) out *= base;
  return out;
}

// offset + pi * sum_i d_i^2 (2 j_i + 1) for every j in (Z>=0)^m up to `limit`.
// Partial sums only prune; each leaf value is recomputed in a fixed order so
// the same tuple always produces the same double.
class TupleEnumerator {
 public:
  TupleEnumerator(const std::vector<double>& d_squared, double offset, double limit)
      : d_squared_(d_squared), offset_(offset), limit_(limit), index_(d_squared.size(), 0) {}

  std::vector<double> run() {
    values_.clear();
    double sum = 0.0;
    for (double d : d_squared_) sum += d;
    const double base = offset_ + kPi * sum;
    if (base <= limit_) visit(0, base);
    return std::move(values_);
  }

 private:
  void visit(std::size_t axis, double partial) {
    if (axis == d_squared_.size()) {
      double sum = 0.0;
      for (std::size_t i = 0; i < d_squared_.size(); ++i) {
        sum += d_squared_[i] * static_cast<double>(2 * index_[i] + 1);
      }
      const double nu = offset_ + kPi * sum;
      if (nu <= limit_) values_.push_back(nu);
      return;
    }
    const double step = 2.0 * kPi * d_squared_[axis];
    for (long long j = 0;; ++j) {
      const double value = partial + step * static_cast<double>(j);
      // Prune with slack so round-off in the running sum never drops a leaf.
      if (value > limit_ + merge_width(limit_)) break;
      index_[axis] = j;
      visit(axis + 1, value);
    }
    index_[axis] = 0;
  }

  const std::vector<double>& d_squared_;
  double offset_;
  double limit_;
  std::vector<long long> index_;
  std::vector<double> values_;
};

std::vector<double> enumerate_nu(const std::vector<double>& d_squared, double limit) {
  return TupleEnumerator(d_squared, 0.0, limit).run();
}

}  // namespace

LandauSpectrum landau_spectrum(const SpectralSignature& sig, int k, double cutoff) {
  if (k < 1) throw Error(ErrorCode::InvalidArgument, "k must be a positive integer");
  if (!(cutoff > 0.0)) throw Error(ErrorCode::InvalidArgument, "cutoff must be positive");
  if (sig.d_squared.size() != static_cast<std::size_t>(sig.m) || sig.m < 1) {
    throw Error(ErrorCode::InvalidArgument, "signature has inconsistent size");
  }
  const Integer unit = power(Integer(k), sig.m) * integral_volume(sig.sympl_volume);

  // Inclusion is decided on nu = k * E so that (sig, k, c) and (sig, 1, k c)
  // select and merge exactly the same tuples.
  const double scaled_cutoff = static_cast<double>(k) * cutoff;
  const double limit = scaled_cutoff + merge_width(scaled_cutoff);
  std::vector<double> nus = enumerate_nu(sig.d_squared, limit);
  if (nus.empty()) {
    throw Error(ErrorCode::CutoffTooSmall, "no level at or below cutoff " + std::to_string(cutoff));
  }
  std::sort(nus.begin(), nus.end());

  LandauSpectrum out;
  out.k = k;
  out.cutoff = cutoff;
  std::size_t start = 0;
  while (start < nus.size()) {
    std::size_t end = start + 1;
    while (end < nus.size() && nus[end] - nus[start] <= merge_width(nus[start])) ++end;
    out.levels.push_back({nus[start] / static_cast<double>(k), unit * static_cast<long long>(end - start)});
    start = end;
  }
  return out;
}

SpectrumComparison spectra_equal(const LandauSpectrum& a, const LandauSpectrum& b, double tol) {
  if (a.k != b.k) {
    throw Error(ErrorCode::InvalidArgument,
                "spectra at different levels k=" + std::to_string(a.k) + " and k=" + std::to_string(b.k));
  }
  const double cutoff = std::min(a.cutoff, b.cutoff);
  const double limit = cutoff + merge_width(cutoff);
  auto truncated = [limit](const LandauSpectrum& s) {
    std::vector<const LandauLevel*> out;
    for (const auto& level : s.levels) {
      if (level.energy <= limit) out.push_back(&level);
    }
    return out;
  };
  const auto left = truncated(a);
  const auto right = truncated(b);

  SpectrumComparison result;
  const std::size_t common = std::min(left.size(), right.size());
  for (std::size_t i = 0; i < common; ++i) {
    if (!approx_equal(left[i]->energy, right[i]->energy, tol)) {
      result.mismatch = "level " + std::to_string(i) + ": energy " + std::to_string(left[i]->energy) +
                        " vs " + std::to_string(right[i]->energy);
      return result;
    }
    if (left[i]->multiplicity != right[i]->multiplicity) {
      result.mismatch = "level " + std::to_string(i) + " (energy " + std::to_string(left[i]->energy) +
                        "): multiplicity " + left[i]->multiplicity.str() + " vs " +
                        right[i]->multiplicity.str();
      return result;
    }
  }
  if (left.size() != right.size()) {
    result.mismatch = "level counts differ below cutoff: " + std::to_string(left.size()) + " vs " +
                      std::to_string(right.size());
    return result;
  }
  result.equal = true;
  return result;
}

EquivalenceReport quantum_equivalent(const TorusMagneticSystem& first, const TorusMagneticSystem& second,
                                     double tol) {
  if (first.dim() != second.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "systems have dimensions " + std::to_string(first.dim()) +
                                                  " and " + std::to_string(second.dim()));
  }
  EquivalenceReport report;
  report.first = spectral_signature(first, tol);
  report.second = spectral_signature(second, tol);
  report.first_volume = symplectic_volume(first.magnetic());
  report.second_volume = symplectic_volume(second.magnetic());

  report.volume_match = report.first_volume == report.second_volume;
  report.d_squared_match = true;
  for (std::size_t j = 0; j < report.first.d_squared.size(); ++j) {
    if (!approx_equal(report.first.d_squared[j], report.second.d_squared[j], tol)) {
      report.d_squared_match = false;
      break;
    }
  }
  report.equivalent = report.volume_match && report.d_squared_match;
  if (!report.d_squared_match) {
    report.reason = "eigenvalues of h^-1 omega differ";
  } else if (!report.volume_match) {
    report.reason = "symplectic volumes differ: " + report.first_volume.str() + " vs " +
                    report.second_volume.str();
  }
  return report;
}

bool is_kahler(const TorusMagneticSystem& sys, double tol) {
  const SpectralSignature sig = spectral_signature(sys, tol);
  double deviation = 0.0;
  for (double d : sig.d_squared) deviation = std::max(deviation, std::abs(d - 1.0));
  if (deviation > tol) return false;
  if (deviation <= 1e-13) return true;
  const RatMatrix f = f_matrix(sys);
  return (f * f + RatMatrix::identity(f.rows())).is_zero();
}

namespace {

// Counts, per input level, the tuples over the coordinates found so far.
// Coordinates not yet found sit at j = 0.
std::vector<Integer> explained_counts(const std::vector<double>& found, const std::vector<double>& nus,
                                      double limit, double hard_limit) {
  std::vector<Integer> counts(nus.size(), 0);
  double found_sum = 0.0;
  for (double d : found) found_sum += d;
  // ground + 2 pi sum_i d_i^2 j_i, written in the enumerator's offset form.
  TupleEnumerator enumerator(found, nus.front() - kPi * found_sum, limit);
  for (double nu : enumerator.run()) {
    auto it = std::lower_bound(nus.begin(), nus.end(), nu - merge_width(nu));
    if (it == nus.end() || std::abs(*it - nu) > merge_width(nu)) {
      if (nu <= hard_limit) {
        throw Error(ErrorCode::InconsistentSpectrum,
                    "predicted level " + std::to_string(nu) + " is missing from the spectrum");
      }
      continue;
    }
    counts[static_cast<std::size_t>(it - nus.begin())] += 1;
  }
  return counts;
}

}  // namespace

ReconstructionResult reconstruct_signature(const LandauSpectrum& spectrum) {
  if (spectrum.levels.empty()) throw Error(ErrorCode::InvalidArgument, "empty spectrum");
  if (spectrum.k < 1) throw Error(ErrorCode::InvalidArgument, "k must be a positive integer");
  const double k = static_cast<double>(spectrum.k);

  std::vector<double> nus;
  nus.reserve(spectrum.levels.size());
  for (const auto& level : spectrum.levels) nus.push_back(k * level.energy);
  if (!std::is_sorted(nus.begin(), nus.end())) {
    throw Error(ErrorCode::InconsistentSpectrum, "levels are not sorted");
  }

  // Every multiplicity is (number of tuples) * k^m V; the ground level is a
  // single tuple, so its multiplicity is the unit.
  const Integer unit = spectrum.levels.front().multiplicity;
  if (unit < 1) throw Error(ErrorCode::InconsistentSpectrum, "non-positive ground multiplicity");
  std::vector<Integer> counts;
  counts.reserve(nus.size());
  for (const auto& level : spectrum.levels) {
    if (level.multiplicity % unit != 0) {
      throw Error(ErrorCode::InconsistentSpectrum, "multiplicity " + level.multiplicity.str() +
                                                       " is not a multiple of " + unit.str());
    }
    counts.push_back(level.multiplicity / unit);
  }

  const double scaled_cutoff = k * spectrum.cutoff;
  const double limit = scaled_cutoff + merge_width(scaled_cutoff);
  const double hard_limit = scaled_cutoff - merge_width(scaled_cutoff);
  const double total = nus.front() / kPi;
  const double sum_tolerance = 1e-8 * (1.0 + total);

  ReconstructionResult result;
  result.levels_consumed = 1;
  std::vector<double> found;
  std::vector<Integer> remaining = counts;
  remaining.front() -= 1;
  double found_sum = 0.0;

  while (std::abs(found_sum - total) > sum_tolerance) {
    if (found_sum > total + sum_tolerance) {
      throw Error(ErrorCode::InconsistentSpectrum, "recovered d^2 exceed the ground-level sum");
    }
    const auto next = std::find_if(remaining.begin(), remaining.end(), [](const Integer& c) { return c > 0; });
    if (next == remaining.end()) {
      throw Error(ErrorCode::InsufficientCutoff,
                  "spectrum ends before all d^2 are determined; raise the cutoff");
    }
    const auto index = static_cast<std::size_t>(next - remaining.begin());
    result.levels_consumed = std::max(result.levels_consumed, index + 1);
    const double d_squared = (nus[index] - nus.front()) / (2.0 * kPi);
    const auto copies = next->convert_to<long long>();
    if (found_sum + static_cast<double>(copies) * d_squared > total + sum_tolerance) {
      throw Error(ErrorCode::InconsistentSpectrum, "level " + std::to_string(index) +
                                                       " implies more d^2 than the ground level allows");
    }
    for (long long c = 0; c < copies; ++c) {
      found.push_back(d_squared);
      found_sum += d_squared;
    }
    const std::vector<Integer> explained = explained_counts(found, nus, limit, hard_limit);
    for (std::size_t i = 0; i < counts.size(); ++i) {
      remaining[i] = counts[i] - explained[i];
      if (remaining[i] < 0) {
        throw Error(ErrorCode::InconsistentSpectrum,
                    "level " + std::to_string(i) + " has fewer states than the recovered d^2 require");
      }
    }
  }

  const int m = static_cast<int>(found.size());
  const Integer k_power = power(Integer(spectrum.k), m);
  if (unit % k_power != 0) {
    throw Error(ErrorCode::InconsistentSpectrum,
                "ground multiplicity " + unit.str() + " is not divisible by k^m = " + k_power.str());
  }
  std::sort(found.begin(), found.end());
  result.signature.m = m;
  result.signature.d_squared = std::move(found);
  result.signature.sympl_volume = Integer(unit / k_power).convert_to<double>();

  const bool fully_explained =
      std::all_of(remaining.begin(), remaining.end(), [](const Integer& c) { return c == 0; });
  const LandauSpectrum regenerated = landau_spectrum(result.signature, spectrum.k, spectrum.cutoff);
  result.consistent = fully_explained && spectra_equal(regenerated, spectrum, kDefaultTolerance).equal;
  return result;
}

ConsistencyReport all_k_consistency(const TorusMagneticSystem& first, const TorusMagneticSystem& second,
                                    int k_max, double cutoff, double tol) {
  if (k_max < 1) throw Error(ErrorCode::InvalidArgument, "k_max must be positive");
  const EquivalenceReport verdict = quantum_equivalent(first, second, tol);
  ConsistencyReport report;
  report.quantum_equivalent = verdict.equivalent;
  report.all_equal = true;
  for (int k = 1; k <= k_max; ++k) {
    const LandauSpectrum a = landau_spectrum(verdict.first, k, cutoff);
    const LandauSpectrum b = landau_spectrum(verdict.second, k, cutoff);
    if (!spectra_equal(a, b, tol)) {
      report.all_equal = false;
      report.first_failing_k = k;
      break;
    }
  }
  report.agrees = report.all_equal == report.quantum_equivalent;
  return report;
}

}  // namespace magtor
