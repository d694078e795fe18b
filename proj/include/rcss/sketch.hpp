#pragma once
//
// Oblivious sketching: dense p-stable sketch matrices (Chambers-Mallows-Stuck
// generator) and sparse sign embeddings with fixed per-column sparsity.
// Sketches are reproducible from (params, seed) and are shipped around as
// specs, never as dense payloads.
//

#include "rcss/rng.hpp"
#include "rcss/types.hpp"

namespace rcss {

// CMS formula evaluated at explicit uniforms theta in (-pi/2, pi/2) and
// r in (0, 1). At p = 1 the exponent (1-p)/p vanishes and this is tan(theta).
double p_stable_from_uniforms(double p, double theta, double r);

// One standard p-stable draw; edge draws (theta = +-pi/2, r = 0) are
// resampled.
double sample_p_stable(PNorm p, SeedStream& stream);

struct PStableSketch {
  int rows = 0;       // t
  int cols = 0;       // d
  double p = 1.0;
  std::uint64_t seed = 0;
  double scale = 1.0;  // the Theta(1/t^{1/p}) constant c
  Matrix entries;      // rows x cols, c * X_ij / t^{1/p}

  // Test hook: wraps explicit entries (e.g. an identity) in sketch clothing.
  static PStableSketch from_entries(Matrix m, double p, std::uint64_t seed,
                                    double scale);
};

// Entry (i, j) = scale * X_ij / t^{1/p}, with draws consumed row-major from
// the stream derived from `seed`, so reconstruction is bit-identical.
PStableSketch make_p_stable_sketch(int t, int d, PNorm p, std::uint64_t seed,
                                   double scale_c = 1.0);

struct SparseEmbedding {
  int rows = 0;  // m
  int cols = 0;  // n
  int sparsity = 0;
  std::uint64_t seed = 0;
  // column j has nonzeros at row_index[j*s .. j*s+s-1] with the matching signs
  std::vector<int> row_index;
  std::vector<double> sign;  // +-1/sqrt(s)
};

SparseEmbedding make_sparse_embedding(int m, int n, int s, std::uint64_t seed);

// Exact products S * A.
Matrix apply_sketch(const PStableSketch& s, const Matrix& a);
Matrix apply_sketch(const SparseEmbedding& s, const Matrix& a);

// Dense form of a sparse embedding (test oracle / small problems).
Matrix densify(const SparseEmbedding& s);

// Serializable description: sketches are regenerated, never stored dense.
struct SketchSpec {
  enum class Kind { PStable, Sparse } kind = Kind::PStable;
  int rows = 0;
  int cols = 0;
  double p = 1.0;
  int sparsity = 0;
  std::uint64_t seed = 0;
  double scale = 1.0;
};

SketchSpec spec_of(const PStableSketch& s);
SketchSpec spec_of(const SparseEmbedding& s);
PStableSketch rebuild_p_stable(const SketchSpec& spec);
SparseEmbedding rebuild_sparse(const SketchSpec& spec);

// Shipped defaults: the empirical setting uses ceil(0.5 * d) sketch rows; the
// documented library default is k * ceil(log2(n*d))^2 rows.
int empirical_sketch_rows(int d);
int theory_sketch_rows(int k, int n, int d);

}  // namespace rcss
