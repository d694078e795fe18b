#pragma once
//
// Shared domain types. Matrices are dense, column-addressed doubles; every
// algorithm in the library treats a matrix as an ordered collection of
// columns.
//

#include <Eigen/Dense>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace rcss {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = std::int64_t;

// Norm exponent for the entrywise and column-wise norms, restricted to the
// range the sketching machinery supports.
class PNorm {
 public:
  explicit PNorm(double p) : value_(p) {
    if (!(p >= 1.0 && p < 2.0))
      throw std::invalid_argument("PNorm: p must satisfy 1 <= p < 2");
  }
  double value() const { return value_; }

 private:
  double value_;
};

inline bool all_finite(const Matrix& a) { return a.allFinite(); }

inline void require(bool cond, const char* msg) {
  if (!cond) throw std::invalid_argument(msg);
}

}  // namespace rcss
