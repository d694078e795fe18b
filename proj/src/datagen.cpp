#include "rcss/datagen.hpp"

#include <cmath>

namespace rcss {

Matrix gen_synthetic(int n, int k) {
  require(n >= 1 && k >= 1, "gen_synthetic: n, k must be >= 1");
  Matrix a = Matrix::Zero(k + n, k + n);
  const double scale = std::pow(static_cast<double>(n), 1.5);
  for (int i = 0; i < k; ++i) a(i, i) = scale;
  a.bottomRightCorner(n, n).setOnes();
  return a;
}

std::vector<Index> random_permutation(Index n, SeedStream stream) {
  std::vector<Index> perm(static_cast<size_t>(n));
  for (Index i = 0; i < n; ++i) perm[static_cast<size_t>(i)] = i;
  for (Index i = n - 1; i > 0; --i) {
    const auto j = static_cast<Index>(
        stream.next_below(static_cast<std::uint64_t>(i + 1)));
    std::swap(perm[static_cast<size_t>(i)], perm[static_cast<size_t>(j)]);
  }
  return perm;
}

Matrix permute_columns(const Matrix& a, const std::vector<Index>& perm) {
  require(perm.size() == static_cast<size_t>(a.cols()),
          "permute_columns: size mismatch");
  Matrix out(a.rows(), a.cols());
  for (size_t j = 0; j < perm.size(); ++j)
    out.col(static_cast<Eigen::Index>(j)) = a.col(perm[j]);
  return out;
}

Matrix random_matrix(Eigen::Index rows, Eigen::Index cols, SeedStream stream) {
  Matrix a(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) {
      // Box-Muller on open-interval uniforms
      const double u = stream.next_open_unit();
      const double v = stream.next_unit();
      a(i, j) = std::sqrt(-2.0 * std::log(u)) *
                std::cos(2.0 * 3.14159265358979323846 * v);
    }
  return a;
}

}  // namespace rcss
