#pragma once
//
// Strong coresets for the l_{p,2} norm: weighted column subsets that preserve
// the cost of projecting onto any low-rank subspace. Columns are sampled by
// the lp Lewis weights of the (sketched) matrix transpose and rescaled by
// 1/(t_c * lambda_i)^{1/p}; the unsketched source columns ride along
// unrescaled so the final selection can be mapped back to real data.
//

#include <iosfwd>

#include "rcss/lewis.hpp"
#include "rcss/rng.hpp"
#include "rcss/types.hpp"

namespace rcss {

struct WeightedColumnSet {
  Matrix sketched;   // t_s x m, rescaled
  Matrix originals;  // d x m, unrescaled
  std::vector<Index> global_indices;  // m source column ids
  Vector weights;    // m rescale factors (composed across merges)
  double p = 1.0;
  std::uint64_t seed_lineage = 0;

  int cols() const { return static_cast<int>(sketched.cols()); }
  bool empty() const { return cols() == 0; }

  // Unit-weight wrapper around raw columns.
  static WeightedColumnSet pass_through(Matrix sketched, Matrix originals,
                                        std::vector<Index> indices, double p);
};

// Sample t_c columns (with replacement) of `in` by the lp Lewis weights of
// in.sketched's transpose; weights compose multiplicatively with the weights
// already carried by `in`.
WeightedColumnSet build_strong_coreset(const WeightedColumnSet& in, int t_c,
                                       SeedStream stream);

// Convenience overload matching the raw-columns call site.
WeightedColumnSet build_strong_coreset(const Matrix& sketched,
                                       const Matrix& originals,
                                       std::vector<Index> global_indices,
                                       double p, int t_c, SeedStream stream);

// Sampling below the target size cannot help: inputs with at most t_c columns
// pass through unchanged, larger ones are reduced with build_strong_coreset.
WeightedColumnSet reduce_to_coreset(const WeightedColumnSet& in, int t_c,
                                    SeedStream stream);

// Coreset of the column-wise concatenation of a and b. Indices, originals and
// weight products propagate through the sampling; a union at or below t_c
// columns is returned as-is.
WeightedColumnSet merge_coresets(const WeightedColumnSet& a,
                                 const WeightedColumnSet& b, int t_c,
                                 SeedStream stream);

WeightedColumnSet concat_sets(const WeightedColumnSet& a,
                              const WeightedColumnSet& b);

// High-probability boosting: multiply the sample count by ceil(log2(1/delta)).
int boosted_coreset_size(int t_c, double delta);

// Self-describing binary record (dims, p, indices, weights, column data,
// seed lineage).
void write_column_set(std::ostream& os, const WeightedColumnSet& set);
WeightedColumnSet read_column_set(std::istream& is);

}  // namespace rcss
