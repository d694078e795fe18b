#include "rcss/sketch.hpp"

#include <cmath>
#include <numbers>

namespace rcss {

double p_stable_from_uniforms(double p, double theta, double r) {
  const double a = std::sin(p * theta) / std::pow(std::cos(theta), 1.0 / p);
  const double b =
      std::pow(std::cos(theta * (1.0 - p)) / std::log(1.0 / r), (1.0 - p) / p);
  return a * b;
}

double sample_p_stable(PNorm p, SeedStream& stream) {
  for (;;) {
    const double u = stream.next_unit();
    const double r = stream.next_unit();
    if (u == 0.0 || r == 0.0) continue;  // theta = -pi/2 or log singularity
    const double theta = std::numbers::pi * (u - 0.5);
    return p_stable_from_uniforms(p.value(), theta, r);
  }
}

PStableSketch PStableSketch::from_entries(Matrix m, double p,
                                          std::uint64_t seed, double scale) {
  PStableSketch s;
  s.rows = static_cast<int>(m.rows());
  s.cols = static_cast<int>(m.cols());
  s.p = p;
  s.seed = seed;
  s.scale = scale;
  s.entries = std::move(m);
  return s;
}

PStableSketch make_p_stable_sketch(int t, int d, PNorm p, std::uint64_t seed,
                                   double scale_c) {
  require(t >= 1 && d >= 1, "make_p_stable_sketch: t, d must be >= 1");
  PStableSketch s;
  s.rows = t;
  s.cols = d;
  s.p = p.value();
  s.seed = seed;
  s.scale = scale_c;
  s.entries.resize(t, d);
  SeedStream stream(seed);
  const double factor = scale_c / std::pow(static_cast<double>(t), 1.0 / p.value());
  for (int i = 0; i < t; ++i)
    for (int j = 0; j < d; ++j)
      s.entries(i, j) = factor * sample_p_stable(p, stream);
  return s;
}

SparseEmbedding make_sparse_embedding(int m, int n, int s, std::uint64_t seed) {
  require(s >= 1 && s <= m, "make_sparse_embedding: need 1 <= s <= m");
  require(n >= 1, "make_sparse_embedding: n must be >= 1");
  SparseEmbedding e;
  e.rows = m;
  e.cols = n;
  e.sparsity = s;
  e.seed = seed;
  e.row_index.resize(static_cast<size_t>(n) * s);
  e.sign.resize(static_cast<size_t>(n) * s);
  SeedStream stream(seed);
  const double value = 1.0 / std::sqrt(static_cast<double>(s));
  std::vector<int> pool(m);
  for (int j = 0; j < n; ++j) {
    // partial Fisher-Yates: s distinct rows per column
    for (int i = 0; i < m; ++i) pool[i] = i;
    for (int l = 0; l < s; ++l) {
      const int pick =
          l + static_cast<int>(stream.next_below(static_cast<std::uint64_t>(m - l)));
      std::swap(pool[l], pool[pick]);
      e.row_index[static_cast<size_t>(j) * s + l] = pool[l];
      e.sign[static_cast<size_t>(j) * s + l] = stream.next_bool() ? value : -value;
    }
  }
  return e;
}

Matrix apply_sketch(const PStableSketch& s, const Matrix& a) {
  require(s.cols == a.rows(), "apply_sketch: dimension mismatch");
  return s.entries * a;
}

Matrix apply_sketch(const SparseEmbedding& s, const Matrix& a) {
  require(s.cols == a.rows(), "apply_sketch: dimension mismatch");
  Matrix out = Matrix::Zero(s.rows, a.cols());
  for (int j = 0; j < s.cols; ++j)
    for (int l = 0; l < s.sparsity; ++l) {
      const size_t idx = static_cast<size_t>(j) * s.sparsity + l;
      out.row(s.row_index[idx]) += s.sign[idx] * a.row(j);
    }
  return out;
}

Matrix densify(const SparseEmbedding& s) {
  Matrix out = Matrix::Zero(s.rows, s.cols);
  for (int j = 0; j < s.cols; ++j)
    for (int l = 0; l < s.sparsity; ++l) {
      const size_t idx = static_cast<size_t>(j) * s.sparsity + l;
      out(s.row_index[idx], j) += s.sign[idx];
    }
  return out;
}

SketchSpec spec_of(const PStableSketch& s) {
  return {SketchSpec::Kind::PStable, s.rows, s.cols, s.p, 0, s.seed, s.scale};
}

SketchSpec spec_of(const SparseEmbedding& s) {
  return {SketchSpec::Kind::Sparse, s.rows, s.cols, 0.0, s.sparsity, s.seed, 1.0};
}

PStableSketch rebuild_p_stable(const SketchSpec& spec) {
  return make_p_stable_sketch(spec.rows, spec.cols, PNorm(spec.p), spec.seed,
                              spec.scale);
}

SparseEmbedding rebuild_sparse(const SketchSpec& spec) {
  return make_sparse_embedding(spec.rows, spec.cols, spec.sparsity, spec.seed);
}

int empirical_sketch_rows(int d) { return (d + 1) / 2; }

int theory_sketch_rows(int k, int n, int d) {
  const double lg = std::ceil(std::log2(static_cast<double>(n) * d));
  return static_cast<int>(k * lg * lg);
}

}  // namespace rcss
