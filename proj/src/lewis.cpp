#include "rcss/lewis.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

namespace rcss {

namespace {

constexpr double kWeightFloor = 1e-12;

// tau via the t x t Gram G(w) = M^T diag(w)^exponent M.
Vector tau_by_gram(const Matrix& m, const Vector& scale, bool* ridged) {
  const Matrix b = scale.asDiagonal() * m;
  Matrix g = b.transpose() * b;
  Eigen::LDLT<Matrix> ldlt(g);
  const auto singular = [&] {
    if (ldlt.info() != Eigen::Success) return true;
    const Vector dvec = ldlt.vectorD();
    const double dmax = dvec.cwiseAbs().maxCoeff();
    return dvec.minCoeff() <=
           static_cast<double>(g.rows()) *
               std::numeric_limits<double>::epsilon() * dmax;
  };
  if (singular()) {
    g.diagonal().array() += 1e-12 * g.trace();
    ldlt.compute(g);
    *ridged = true;
  }
  const Matrix x = ldlt.solve(m.transpose());  // t x n
  Vector tau(m.rows());
  for (Eigen::Index i = 0; i < m.rows(); ++i) tau(i) = m.row(i).dot(x.col(i));
  return tau;
}

// Wide inputs (fewer rows than columns): with C = diag(scale) M, the
// quadratic form a_i^T (C^T C)^+ a_i equals scale_i^{-2} [P]_{ii} for the
// projector P onto the row space, computed from the small n x n kernel CC^T.
Vector tau_by_kernel(const Matrix& m, const Vector& scale) {
  const Matrix c = scale.asDiagonal() * m;
  const Matrix kernel = c * c.transpose();
  Eigen::SelfAdjointEigenSolver<Matrix> eig(kernel);
  const Vector& ev = eig.eigenvalues();
  const double tol = static_cast<double>(kernel.rows()) *
                     std::numeric_limits<double>::epsilon() *
                     std::max(ev.cwiseAbs().maxCoeff(), 0.0);
  Vector tau(m.rows());
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    double proj = 0.0;
    for (Eigen::Index l = 0; l < ev.size(); ++l)
      if (ev(l) > tol) proj += eig.eigenvectors()(i, l) * eig.eigenvectors()(i, l);
    const double s = scale(i);
    tau(i) = s > 0.0 ? proj / (s * s) : 0.0;
  }
  return tau;
}

// tau_i = a_i^T G(w)^+ a_i for all rows at once; sets `ridged` when the tall
// path needed regularization.
Vector quadratic_forms(const Matrix& m, const Vector& w, double exponent,
                       bool* ridged) {
  Vector scale(m.rows());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    scale(i) =
        m.row(i).isZero(0.0)
            ? 0.0
            : std::pow(std::max(w(i), kWeightFloor), exponent / 2.0);
  Vector tau = m.rows() < m.cols() ? tau_by_kernel(m, scale)
                                   : tau_by_gram(m, scale, ridged);
  return tau.cwiseMax(0.0);
}

}  // namespace

LewisWeights lewis_weights(const Matrix& m, double p, double tol,
                           int max_iter) {
  require(m.rows() > 0 && m.cols() > 0, "lewis_weights: empty input");
  require(p >= 1.0, "lewis_weights: p must be >= 1");
  const Eigen::Index n = m.rows();
  const double exponent = 1.0 - 2.0 / p;  // in [-1, 0] for p in [1, 2]

  LewisWeights out;
  out.p = p;
  out.w = Vector::Ones(n);
  for (Eigen::Index i = 0; i < n; ++i)
    if (m.row(i).isZero(0.0)) out.w(i) = 0.0;

  for (int it = 0; it < max_iter; ++it) {
    Vector tau = quadratic_forms(m, out.w, exponent, &out.ridged);
    Vector next(n);
    for (Eigen::Index i = 0; i < n; ++i) next(i) = std::pow(tau(i), p / 2.0);
    double change = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double scale = std::max({out.w(i), next(i), kWeightFloor});
      change = std::max(change, std::abs(next(i) - out.w(i)) / scale);
    }
    out.w = next;
    out.iterations = it + 1;
    if (change < tol) {
      out.converged = true;
      break;
    }
  }

  // fixed-point residual: |w_i - l_i(diag(w)^{1/2-1/p} m)| with
  // l_i = w_i^{1-2/p} * tau_i(w)
  Vector tau = quadratic_forms(m, out.w, exponent, &out.ridged);
  double res = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double li =
        out.w(i) == 0.0
            ? 0.0
            : std::pow(std::max(out.w(i), kWeightFloor), exponent) * tau(i);
    res = std::max(res, std::abs(out.w(i) - li));
  }
  out.residual = res;
  return out;
}

LewisSample lewis_sample(const LewisWeights& lw, int t_c, SeedStream stream) {
  require(t_c >= 1, "lewis_sample: t_c must be >= 1");
  const Eigen::Index n = lw.w.size();
  const double total = lw.w.sum();
  require(total > 0.0, "lewis_sample: all weights are zero");

  // cumulative distribution over the positive-weight rows only, so rounding
  // gaps near 1 can never land on a zero-weight row
  std::vector<Index> support;
  std::vector<double> cumulative;
  support.reserve(static_cast<size_t>(n));
  cumulative.reserve(static_cast<size_t>(n));
  double acc = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (lw.w(i) <= 0.0) continue;
    acc += lw.w(i) / total;
    support.push_back(static_cast<Index>(i));
    cumulative.push_back(acc);
  }
  cumulative.back() = 1.0;

  LewisSample sample;
  sample.indices.resize(static_cast<size_t>(t_c));
  sample.weights.resize(t_c);
  for (int j = 0; j < t_c; ++j) {
    const double u = stream.next_unit();
    const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    const Index idx =
        support[static_cast<size_t>(it - cumulative.begin())];
    const double lambda = lw.w(idx) / total;
    sample.indices[static_cast<size_t>(j)] = idx;
    sample.weights(j) = 1.0 / std::pow(t_c * lambda, 1.0 / lw.p);
  }
  return sample;
}

}  // namespace rcss
