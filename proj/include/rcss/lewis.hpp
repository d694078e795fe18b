#pragma once
//
// lp Lewis weights via fixed-point iteration and the multinomial
// sample-and-reweight step built on them.
//

#include "rcss/rng.hpp"
#include "rcss/types.hpp"

namespace rcss {

struct LewisWeights {
  Vector w;            // one weight per row of the target
  double p = 2.0;
  double residual = 0.0;  // max_i |w_i - l_i(diag(w)^{1/2-1/p} M)|
  int iterations = 0;
  bool converged = false;
  bool ridged = false;  // Gram matrix needed a ridge
};

// Row Lewis weights of m (n x d): the unique fixed point of
// w_i = l_i(diag(w)^{1/2-1/p} m). Iterates w_i <- (a_i^T G(w)^{-1} a_i)^{p/2}
// with G(w) = m^T diag(w)^{1-2/p} m, starting from all-ones; geometric
// convergence for p < 4. At p = 2 the exponent vanishes and the weights equal
// the leverage scores exactly. A singular Gram matrix gets a 1e-12 * trace
// ridge and the result is flagged.
LewisWeights lewis_weights(const Matrix& m, double p, double tol = 1e-8,
                           int max_iter = 100);

struct LewisSample {
  std::vector<Index> indices;  // t_c i.i.d. draws from lambda_i = w_i / sum(w)
  Vector weights;              // per draw, 1 / (t_c * lambda_i)^{1/p}
};

LewisSample lewis_sample(const LewisWeights& lw, int t_c, SeedStream stream);

}  // namespace rcss
