#include "magtor/lengths.hpp"

#include <algorithm>
#include <cmath>

namespace magtor {

namespace {

constexpr double kLovaszDelta = 0.99;

struct GramSchmidt {
  Eigen::MatrixXd mu;
  Eigen::VectorXd norms;  // |b_i^*|^2
};

GramSchmidt gram_schmidt(const Eigen::MatrixXd& g) {
  const Eigen::Index n = g.rows();
  GramSchmidt gs{Eigen::MatrixXd::Zero(n, n), Eigen::VectorXd::Zero(n)};
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < i; ++j) {
      double v = g(i, j);
      for (Eigen::Index k = 0; k < j; ++k) v -= gs.mu(j, k) * gs.mu(i, k) * gs.norms(k);
      gs.mu(i, j) = v / gs.norms(j);
    }
    double v = g(i, i);
    for (Eigen::Index k = 0; k < i; ++k) v -= gs.mu(i, k) * gs.mu(i, k) * gs.norms(k);
    gs.norms(i) = v;
  }
  return gs;
}

class EllipsoidEnumerator {
 public:
  EllipsoidEnumerator(const Eigen::MatrixXd& reduced, double limit, std::size_t budget)
      : n_(reduced.rows()), limit_(limit), budget_(budget), coords_(Eigen::VectorXd::Zero(n_)) {
    const Eigen::LLT<Eigen::MatrixXd> llt(reduced);
    if (llt.info() != Eigen::Success) {
      throw Error(ErrorCode::MetricNotPositiveDefinite, "Cholesky factorization failed");
    }
    upper_ = llt.matrixU();
  }

  std::vector<Eigen::VectorXd> run() {
    visit(n_ - 1, 0.0);
    return std::move(found_);
  }

  std::size_t candidates() const noexcept { return candidates_; }

 private:
  // v^T G v = sum_i R_ii^2 (v_i - c_i)^2 with c_i = -sum_{j>i} R_ij v_j / R_ii.
  void visit(Eigen::Index i, double used) {
    double center = 0.0;
    for (Eigen::Index j = i + 1; j < n_; ++j) center -= upper_(i, j) * coords_(j);
    center /= upper_(i, i);
    const double radius = std::sqrt(std::max(0.0, limit_ - used)) / upper_(i, i);
    const auto lo = static_cast<long long>(std::ceil(center - radius));
    const auto hi = static_cast<long long>(std::floor(center + radius));
    for (long long v = lo; v <= hi; ++v) {
      if (++candidates_ > budget_) {
        throw Error(ErrorCode::BoundTooLarge, "enumeration exceeded " + std::to_string(budget_) + " candidates");
      }
      const double offset = upper_(i, i) * (static_cast<double>(v) - center);
      const double next = used + offset * offset;
      if (next > limit_) continue;
      coords_(i) = static_cast<double>(v);
      if (i == 0) {
        if (coords_.cwiseAbs().maxCoeff() > 0.0) found_.push_back(coords_);
      } else {
        visit(i - 1, next);
      }
    }
    coords_(i) = 0.0;
  }

  Eigen::Index n_;
  double limit_;
  std::size_t budget_;
  Eigen::MatrixXd upper_;
  Eigen::VectorXd coords_;
  std::size_t candidates_ = 0;
  std::vector<Eigen::VectorXd> found_;
};

}  // namespace

Eigen::MatrixXd lll_reduce_gram(const Eigen::MatrixXd& gram) {
  const Eigen::Index n = gram.rows();
  Eigen::MatrixXd basis = Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd g = gram;
  Eigen::Index k = 1;
  for (int guard = 0; k < n && guard < 10000; ++guard) {
    GramSchmidt gs = gram_schmidt(g);
    for (Eigen::Index j = k - 1; j >= 0; --j) {
      const double q = std::round(gs.mu(k, j));
      if (q == 0.0) continue;
      basis.col(k) -= q * basis.col(j);
      g = basis.transpose() * gram * basis;
      gs = gram_schmidt(g);
    }
    if (gs.norms(k) >= (kLovaszDelta - gs.mu(k, k - 1) * gs.mu(k, k - 1)) * gs.norms(k - 1)) {
      ++k;
    } else {
      const Eigen::VectorXd previous = basis.col(k - 1);
      basis.col(k - 1) = basis.col(k);
      basis.col(k) = previous;
      g = basis.transpose() * gram * basis;
      k = std::max<Eigen::Index>(k - 1, 1);
    }
  }
  return basis;
}

LengthSpectrum length_spectrum(const Eigen::MatrixXd& gram, double bound, std::size_t max_count) {
  if (gram.rows() == 0 || gram.rows() != gram.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "Gram matrix must be square");
  }
  if (!(bound > 0.0) || max_count == 0) throw Error(ErrorCode::InvalidArgument, "bound and max_count must be positive");

  const double limit = bound + kDefaultTolerance * (1.0 + bound);
  const Eigen::MatrixXd basis = lll_reduce_gram(gram);
  const Eigen::MatrixXd reduced = basis.transpose() * gram * basis;

  // Slack in the search radius so no boundary vector is lost to round-off;
  // membership is decided on the original Gram matrix below.
  EllipsoidEnumerator enumerator(reduced, limit * (1.0 + 1e-9), 100 * max_count);
  const std::vector<Eigen::VectorXd> coords = enumerator.run();

  LengthSpectrum out;
  out.candidates = enumerator.candidates();
  for (const auto& c : coords) {
    const Eigen::VectorXd v = (basis * c).array().round().matrix();
    const double length = v.dot(gram * v);
    if (length <= limit) out.squared_lengths.push_back(length);
  }
  std::sort(out.squared_lengths.begin(), out.squared_lengths.end());
  if (out.squared_lengths.size() > max_count) {
    out.squared_lengths.resize(max_count);
    out.truncated = true;
  }
  return out;
}

LengthSpectrum length_spectrum(const MetricGram& metric, double bound, std::size_t max_count) {
  return length_spectrum(to_eigen(metric.matrix()), bound, max_count);
}

bool same_length_spectrum(const LengthSpectrum& a, const LengthSpectrum& b, double tol) {
  if (a.squared_lengths.size() != b.squared_lengths.size()) return false;
  for (std::size_t i = 0; i < a.squared_lengths.size(); ++i) {
    if (!approx_equal(a.squared_lengths[i], b.squared_lengths[i], tol)) return false;
  }
  return true;
}

}  // namespace magtor
