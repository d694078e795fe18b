#include "rcss/numerics.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>
#include <cmath>

namespace rcss {

double entrywise_lp_norm(const Matrix& a, PNorm p) {
  const double pv = p.value();
  double acc = 0.0;
  for (Eigen::Index j = 0; j < a.cols(); ++j)
    for (Eigen::Index i = 0; i < a.rows(); ++i)
      acc += std::pow(std::abs(a(i, j)), pv);
  return std::pow(acc, 1.0 / pv);
}

double lp2_norm(const Matrix& a, PNorm p) {
  const double pv = p.value();
  double acc = 0.0;
  for (Eigen::Index j = 0; j < a.cols(); ++j)
    acc += std::pow(a.col(j).norm(), pv);
  return std::pow(acc, 1.0 / pv);
}

Matrix orthonormal_basis(const Matrix& u) {
  if (u.cols() == 0 || u.norm() == 0.0) return Matrix(u.rows(), 0);
  Eigen::ColPivHouseholderQR<Matrix> qr(u);
  qr.setThreshold(static_cast<double>(std::max(u.rows(), u.cols())) *
                  std::numeric_limits<double>::epsilon());
  const Eigen::Index rank = qr.rank();
  Matrix q = qr.householderQ() * Matrix::Identity(u.rows(), rank);
  return q;
}

double projection_cost_p2(const Matrix& u, const Matrix& a, PNorm p) {
  require(u.rows() == a.rows(), "projection_cost_p2: row mismatch");
  const Matrix q = orthonormal_basis(u);
  const double pv = p.value();
  double acc = 0.0;
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    Vector col = a.col(j);
    if (q.cols() > 0) col -= q * (q.transpose() * col);
    acc += std::pow(col.norm(), pv);
  }
  return std::pow(acc, 1.0 / pv);
}

Vector leverage_scores(const Matrix& m) {
  require(m.rows() > 0 && m.cols() > 0, "leverage_scores: empty input");
  Eigen::BDCSVD<Matrix> svd(m, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  const double tol = static_cast<double>(std::max(m.rows(), m.cols())) *
                     std::numeric_limits<double>::epsilon() *
                     (sv.size() > 0 ? sv(0) : 0.0);
  Eigen::Index rank = 0;
  while (rank < sv.size() && sv(rank) > tol) ++rank;
  Vector scores(m.rows());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    scores(i) = svd.matrixU().row(i).head(rank).squaredNorm();
  return scores;
}

Matrix pseudoinverse(const Matrix& m) {
  if (m.size() == 0) return m.transpose();
  Eigen::BDCSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  const double tol = static_cast<double>(std::max(m.rows(), m.cols())) *
                     std::numeric_limits<double>::epsilon() *
                     (sv.size() > 0 ? sv(0) : 0.0);
  Vector inv = Vector::Zero(sv.size());
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > tol) inv(i) = 1.0 / sv(i);
  return svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
}

namespace {

double lp_objective(const Matrix& b, const Vector& y, const Vector& v,
                    double pv) {
  double acc = 0.0;
  Vector r = b * v - y;
  for (Eigen::Index i = 0; i < r.size(); ++i)
    acc += std::pow(std::abs(r(i)), pv);
  return std::pow(acc, 1.0 / pv);
}

Vector solve_weighted_ls(const Matrix& b, const Vector& y, const Vector& w) {
  Vector ws = w.array().sqrt();
  Matrix bw = ws.asDiagonal() * b;
  Vector yw = ws.asDiagonal() * y;
  return bw.colPivHouseholderQr().solve(yw);
}

}  // namespace

LpRegressionResult lp_regression(const Matrix& b, const Vector& y, PNorm p,
                                 double tol, int max_iter) {
  require(b.rows() == y.size(), "lp_regression: dimension mismatch");
  const double pv = p.value();
  constexpr double kWeightFloor = 1e-10;

  LpRegressionResult best;
  Vector w = Vector::Ones(b.rows());
  Vector v;
  double prev_obj = std::numeric_limits<double>::infinity();
  int it = 0;
  for (it = 0; it < max_iter; ++it) {
    v = solve_weighted_ls(b, y, w);
    const double obj = lp_objective(b, y, v, pv);
    if (it == 0 || obj < best.objective) {
      best.coef = v;
      best.objective = obj;
    }
    if (it > 0 && std::abs(prev_obj - obj) <= tol * std::max(1.0, obj)) {
      best.converged = true;
      ++it;
      break;
    }
    prev_obj = obj;
    Vector r = b * v - y;
    Vector target(r.size());
    for (Eigen::Index i = 0; i < r.size(); ++i)
      target(i) = std::pow(std::max(std::abs(r(i)), kWeightFloor), pv - 2.0);
    w = (it == 0) ? target : Vector(0.5 * (w + target));
  }
  best.iterations = it;
  return best;
}

double svd_rank_k_error(const Matrix& a, int k, PNorm p) {
  require(k >= 1 && k <= std::min(a.rows(), a.cols()),
          "svd_rank_k_error: k out of range");
  Eigen::BDCSVD<Matrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  Matrix ak = svd.matrixU().leftCols(k) *
              svd.singularValues().head(k).asDiagonal() *
              svd.matrixV().leftCols(k).transpose();
  return entrywise_lp_norm(ak - a, p);
}

}  // namespace rcss
