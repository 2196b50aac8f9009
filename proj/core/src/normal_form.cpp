#include "magtor/normal_form.hpp"

#include <optional>
#include <utility>

namespace magtor {

ChernFactors::ChernFactors(std::vector<Integer> r) : r_(std::move(r)) {
  for (std::size_t j = 0; j < r_.size(); ++j) {
    if (r_[j] < 1) throw Error(ErrorCode::InvalidFactors, "factor " + r_[j].str() + " is not positive");
    if (j > 0 && r_[j] % r_[j - 1] != 0) {
      throw Error(ErrorCode::InvalidFactors, r_[j - 1].str() + " does not divide " + r_[j].str());
    }
  }
}

Integer ChernFactors::product() const {
  Integer p = 1;
  for (const auto& v : r_) p *= v;
  return p;
}

UnimodularTransform::UnimodularTransform(IntMatrix a) : a_(std::move(a)) {
  if (!a_.is_square()) throw Error(ErrorCode::NotUnimodular, "transform is not square");
  const Integer det = magtor::determinant(a_);
  if (det != 1 && det != -1) throw Error(ErrorCode::NotUnimodular, "det = " + det.str());
  det_ = det == 1 ? 1 : -1;
}

IntMatrix standard_form_gram(const ChernFactors& r) {
  const std::size_t m = r.size();
  IntMatrix g(2 * m, 2 * m);
  for (std::size_t j = 0; j < m; ++j) {
    g(j, m + j) = r.values()[j];
    g(m + j, j) = -r.values()[j];
  }
  return g;
}

IntMatrix standard_symplectic(int m) {
  return standard_form_gram(ChernFactors(std::vector<Integer>(static_cast<std::size_t>(m), Integer(1))));
}

namespace {

// Works on W = P^T omega P by elementary changes of the basis P. Every
// operation is applied to both, so W == P^T omega P holds throughout.
class SkewReducer {
 public:
  explicit SkewReducer(const IntMatrix& omega)
      : n_(omega.rows()), w_(omega), p_(IntMatrix::identity(omega.rows())) {}

  // e_target <- e_target + c * e_source
  void add_multiple(std::size_t target, std::size_t source, const Integer& c) {
    if (c == 0) return;
    for (std::size_t k = 0; k < n_; ++k) p_(k, target) += c * p_(k, source);
    for (std::size_t k = 0; k < n_; ++k) w_(target, k) += c * w_(source, k);
    for (std::size_t k = 0; k < n_; ++k) w_(k, target) += c * w_(k, source);
  }

  void swap(std::size_t i, std::size_t j) {
    if (i == j) return;
    for (std::size_t k = 0; k < n_; ++k) std::swap(p_(k, i), p_(k, j));
    for (std::size_t k = 0; k < n_; ++k) std::swap(w_(i, k), w_(j, k));
    for (std::size_t k = 0; k < n_; ++k) std::swap(w_(k, i), w_(k, j));
    sign_ = -sign_;
  }

  void negate(std::size_t i) {
    for (std::size_t k = 0; k < n_; ++k) p_(k, i) = -p_(k, i);
    for (std::size_t k = 0; k < n_; ++k) w_(i, k) = -w_(i, k);
    for (std::size_t k = 0; k < n_; ++k) w_(k, i) = -w_(k, i);
    sign_ = -sign_;
  }

  // Reduces to the interleaved block form diag([[0, r_k], [-r_k, 0]]) with
  // r_k | r_{k+1}. Returns the r_k.
  std::vector<Integer> reduce() {
    std::vector<Integer> factors;
    for (std::size_t t = 0; t < n_; t += 2) {
      while (true) {
        const auto pivot = find_pivot(t);
        if (!pivot) throw Error(ErrorCode::DegenerateInput, "omega is degenerate");
        swap(t, pivot->first);
        swap(t + 1, pivot->second);
        if (w_(t, t + 1) < 0) negate(t + 1);
        if (!clear_pair(t)) continue;
        if (auto bad = find_non_multiple(t)) {
          // Pull the offending entry into row t; the next clearing pass leaves
          // a remainder smaller than the current pivot.
          add_multiple(t, *bad, 1);
          continue;
        }
        break;
      }
      factors.push_back(w_(t, t + 1));
    }
    return factors;
  }

  const IntMatrix& basis() const noexcept { return p_; }
  const IntMatrix& form() const noexcept { return w_; }
  int sign() const noexcept { return sign_; }

 private:
  // Smallest nonzero |W(a, b)| over the active block; ties go to the lowest
  // row, then the lowest column. Skewness makes a < b.
  std::optional<std::pair<std::size_t, std::size_t>> find_pivot(std::size_t t) const {
    std::optional<std::pair<std::size_t, std::size_t>> best;
    Integer best_abs;
    for (std::size_t a = t; a < n_; ++a) {
      for (std::size_t b = t; b < n_; ++b) {
        if (w_(a, b) == 0) continue;
        const Integer v = abs(w_(a, b));
        if (!best || v < best_abs) {
          best = {a, b};
          best_abs = v;
        }
      }
    }
    return best;
  }

  // Reduces rows t and t+1 modulo the pivot p = W(t, t+1). Returns true if
  // both rows are now zero outside the pivot block.
  bool clear_pair(std::size_t t) {
    const Integer p = w_(t, t + 1);
    bool clean = true;
    for (std::size_t l = t + 2; l < n_; ++l) {
      // W(t+1, l) changes by -c*p under e_l += c e_t.
      add_multiple(l, t, w_(t + 1, l) / p);
      // W(t, l) changes by +c*p under e_l += c e_{t+1}.
      add_multiple(l, t + 1, -(w_(t, l) / p));
      if (w_(t, l) != 0 || w_(t + 1, l) != 0) clean = false;
    }
    return clean;
  }

  std::optional<std::size_t> find_non_multiple(std::size_t t) const {
    const Integer& p = w_(t, t + 1);
    for (std::size_t a = t + 2; a < n_; ++a)
      for (std::size_t b = a + 1; b < n_; ++b)
        if (w_(a, b) % p != 0) return a;
    return std::nullopt;
  }

  std::size_t n_;
  IntMatrix w_;
  IntMatrix p_;
  int sign_ = 1;
};

/// r when omega is already [[0, R], [-R, 0]] with r a divisibility chain.
std::optional<ChernFactors> already_normal(const IntMatrix& omega) {
  const std::size_t m = omega.rows() / 2;
  std::vector<Integer> r;
  for (std::size_t j = 0; j < m; ++j) {
    if (omega(j, m + j) < 1) return std::nullopt;
    if (j > 0 && omega(j, m + j) % r.back() != 0) return std::nullopt;
    r.push_back(omega(j, m + j));
  }
  ChernFactors factors(std::move(r));
  if (standard_form_gram(factors) != omega) return std::nullopt;
  return factors;
}

}  // namespace

NormalForm chern_invariant_factors(const SymplecticGram& magnetic) {
  const IntMatrix& omega = magnetic.matrix();
  if (!is_skew(omega)) throw Error(ErrorCode::MagneticNotSkew, "omega is not skew-symmetric");
  if (omega.rows() == 0 || omega.rows() % 2 != 0) throw Error(ErrorCode::OddDimension, "odd dimension");
  if (determinant(omega) == 0) throw Error(ErrorCode::DegenerateInput, "det(omega) = 0");

  if (auto r = already_normal(omega)) {
    return NormalForm{std::move(*r), UnimodularTransform(IntMatrix::identity(omega.rows()))};
  }

  SkewReducer reducer(omega);
  ChernFactors factors(reducer.reduce());

  // Interleaved (e_1, f_1, e_2, f_2, ...) -> block (e_1..e_m, f_1..f_m).
  const std::size_t n = omega.rows();
  const std::size_t m = n / 2;
  IntMatrix a(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t j = 0; j < m; ++j) {
      a(k, j) = reducer.basis()(k, 2 * j);
      a(k, m + j) = reducer.basis()(k, 2 * j + 1);
    }
  }
  UnimodularTransform transform(std::move(a));
  if (transform.matrix().transpose() * omega * transform.matrix() != standard_form_gram(factors)) {
    throw Error(ErrorCode::Internal, "normal form reduction lost the congruence");
  }
  return NormalForm{std::move(factors), std::move(transform)};
}

bool verify_normal_form(const SymplecticGram& magnetic, const ChernFactors& r, const UnimodularTransform& a) {
  const IntMatrix& omega = magnetic.matrix();
  if (a.matrix().rows() != omega.rows() || 2 * r.size() != omega.rows()) return false;
  for (std::size_t j = 1; j < r.size(); ++j) {
    if (r.values()[j] % r.values()[j - 1] != 0) return false;
  }
  if (a.determinant() != 1) return false;
  return a.matrix().transpose() * omega * a.matrix() == standard_form_gram(r);
}

ObstructionReport phase_space_obstruction(const SymplecticGram& first, const SymplecticGram& second) {
  if (first.dim() != second.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "forms have dimensions " + std::to_string(first.dim()) +
                                                  " and " + std::to_string(second.dim()));
  }
  NormalForm a = chern_invariant_factors(first);
  NormalForm b = chern_invariant_factors(second);
  const Obstruction verdict =
      a.factors == b.factors ? Obstruction::Inconclusive : Obstruction::NotSymplectomorphic;
  return ObstructionReport{verdict, std::move(a.factors), std::move(b.factors)};
}

}  // namespace magtor
