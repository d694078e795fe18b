#pragma once
//
// Dense matrix primitives: entrywise and column-wise norms, exact subspace
// projection costs, leverage scores, Moore-Penrose pseudoinverse and IRLS
// lp regression. Everything here is deterministic and pure.
//

#include "rcss/types.hpp"

namespace rcss {

// (sum_ij |A_ij|^p)^(1/p)
double entrywise_lp_norm(const Matrix& a, PNorm p);

// (sum_j ||A_*j||_2^p)^(1/p)
double lp2_norm(const Matrix& a, PNorm p);

// Orthonormal basis of colspan(U) via column-pivoted QR. Rank threshold is
// max(rows, cols) * machine epsilon relative to the largest pivot, so
// rank-deficient input yields a basis of the actual span.
Matrix orthonormal_basis(const Matrix& u);

// min over V of ||UV - A||_{p,2}, evaluated exactly: the p-th power of the
// l_{p,2} cost decomposes across columns, and each column's best fit is its
// Euclidean projection onto colspan(U).
double projection_cost_p2(const Matrix& u, const Matrix& a, PNorm p);

// Statistical leverage scores of the rows of m: l_i = ||U_{i,*}||_2^2 from the
// thin SVD. Scores lie in [0, 1] and sum to rank(m).
Vector leverage_scores(const Matrix& m);

// Moore-Penrose pseudoinverse (SVD based). Zero matrix maps to its transposed
// zero.
Matrix pseudoinverse(const Matrix& m);

struct LpRegressionResult {
  Vector coef;
  double objective = 0.0;  // ||B coef - y||_p
  int iterations = 0;
  bool converged = false;
};

// Approximate argmin_v ||B v - y||_p via iteratively reweighted least squares.
// The first pass solves with uniform weights (plain least squares) and the
// least-squares iterate is always kept as a candidate, so the returned
// objective never exceeds the l2 solution's lp objective. Weight updates use
// a 1e-10 residual floor and are damped by one half.
LpRegressionResult lp_regression(const Matrix& b, const Vector& y, PNorm p,
                                 double tol = 1e-8, int max_iter = 100);

// ||A_k - A||_p for the Frobenius-optimal rank-k truncation A_k.
double svd_rank_k_error(const Matrix& a, int k, PNorm p);

}  // namespace rcss
