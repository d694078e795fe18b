#pragma once
//
// Synthetic benchmark matrix: (k+n) x (k+n), the top-left k x k block is
// n^{3/2} times the identity and the bottom-right n x n block is all ones.
// The best k columns are k-1 identity columns plus any ones column (l1 error
// n^{3/2}); rank-k SVD drops the ones block entirely and pays n^2.
//

#include "rcss/rng.hpp"
#include "rcss/types.hpp"

namespace rcss {

Matrix gen_synthetic(int n, int k);

// Column permutation used by the streaming experiments; deterministic in seed.
std::vector<Index> random_permutation(Index n, SeedStream stream);
Matrix permute_columns(const Matrix& a, const std::vector<Index>& perm);

Matrix random_matrix(Eigen::Index rows, Eigen::Index cols, SeedStream stream);

}  // namespace rcss
