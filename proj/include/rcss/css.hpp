#pragma once
//
// Column subset selection in the l_{p,2} norm: the bi-criteria sampling
// algorithm (sparse embed, Lewis-weight sample, pseudoinverse right factor)
// and the lazier-than-lazy greedy algorithm driven by the utility
// Phi_A(T) = ||A||_{p,2}^p - ||A - pi_T A||_{p,2}^p.
//

#include <optional>
#include <string>

#include "rcss/numerics.hpp"
#include "rcss/rng.hpp"
#include "rcss/types.hpp"

namespace rcss {

struct SelectionResult {
  std::vector<Index> indices;  // selected global column ids, in pick order
  Matrix left_factor;          // the selected (possibly rescaled) columns
  std::optional<Matrix> right_factor;
  double err_p2 = 0.0;
  std::optional<double> err_p;
  struct Meta {
    std::string algorithm;
    std::uint64_t seed = 0;
    std::string params;
    bool flagged = false;  // early stop / non-convergence along the way
  } meta;
};

struct RegularCssConfig {
  int embed_rows = 0;      // 0 -> ceil(k/2)
  int embed_sparsity = 0;  // 0 -> ceil(k/2), clamped to embed_rows
  int t_prime = 0;         // sampled column count; 0 -> k
  bool rescale = true;     // keep the sampling rescale on the left factor
  bool dedup = false;      // drop duplicate draws (off: bi-criteria count is t')
  bool compute_right_factor = true;
};

// Bi-criteria count for a target rank when the empirical t' = k is too lean.
int theory_t_prime(int k);

SelectionResult regular_css_p2(const Matrix& a, int k, PNorm p,
                               const RegularCssConfig& cfg, SeedStream seed);

struct GreedyCssConfig {
  int pool_size = 0;  // candidates per round; 0 -> ceil((n/k) * ln(1/delta))
  bool compute_right_factor = true;
};

SelectionResult greedy_css_p2(const Matrix& a, int k, PNorm p, int r,
                              double delta, SeedStream seed,
                              const GreedyCssConfig& cfg = {});

// Phi_A(T), evaluated exactly through the projection cost.
double phi_utility(const Matrix& a, const std::vector<Index>& t, PNorm p);

// Incremental greedy bookkeeping: orthonormal basis of the selected span plus
// per-column squared residual norms, updated in O(nd) per commit. Residuals
// only ever shrink, so Phi is non-decreasing without tolerance games.
class GreedyState {
 public:
  GreedyState(const Matrix& a, PNorm p);

  // l_{p,2}^p cost after hypothetically adding column j.
  double cost_pow_with(const Matrix& a, Index j) const;
  void commit(const Matrix& a, Index j);

  double cost_pow() const { return cost_pow_; }
  double phi() const { return total_pow_ - cost_pow_; }
  const Matrix& basis() const { return basis_; }
  const Vector& residual_sq() const { return residual_sq_; }
  const std::vector<Index>& selected() const { return selected_; }

 private:
  // residual direction of column j against the current basis, empty when the
  // column is already in span (norm below 1e-10 of the column norm)
  Vector residual_direction(const Matrix& a, Index j) const;

  double p_;
  double total_pow_;    // ||A||_{p,2}^p
  double cost_pow_;     // current ||A - pi_T A||_{p,2}^p
  Matrix basis_;        // d x |basis|
  Vector residual_sq_;  // per-column squared residual norms
  std::vector<Index> selected_;
};

// Subroutine dispatch shared by the streaming and distributed drivers.
enum class CssKind { Regular, Greedy };

struct CssConfig {
  CssKind kind = CssKind::Regular;
  RegularCssConfig regular;
  int greedy_r = 0;  // 0 -> k
  double greedy_delta = 0.1;
  GreedyCssConfig greedy;
};

SelectionResult run_css(const Matrix& a, int k, PNorm p, const CssConfig& cfg,
                        SeedStream seed);

}  // namespace rcss
