#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>
#include <sstream>

#include "rcss/coreset.hpp"
#include "rcss/datagen.hpp"
#include "rcss/numerics.hpp"

using namespace rcss;

TEST_CASE("lewis weights at p=2 are the leverage scores") {
  const Matrix m = random_matrix(12, 4, SeedStream(1));
  const LewisWeights lw = lewis_weights(m, 2.0);
  const Vector lev = leverage_scores(m);
  CHECK((lw.w - lev).cwiseAbs().maxCoeff() < 1e-8);
  CHECK(lw.converged);
}

TEST_CASE("lewis weights of an orthonormal square matrix are all one") {
  const LewisWeights lw = lewis_weights(Matrix::Identity(5, 5), 1.0);
  for (int i = 0; i < 5; ++i) CHECK(lw.w(i) == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("lewis fixed point: residual and weight sum") {
  const Matrix m = random_matrix(30, 4, SeedStream(2));
  const LewisWeights lw = lewis_weights(m, 1.0, 1e-8, 100);
  CHECK(lw.converged);
  CHECK(lw.residual < 1e-6);
  CHECK(lw.w.sum() == doctest::Approx(4.0).epsilon(1e-4));

  for (const double p : {1.25, 1.5, 1.75}) {
    const LewisWeights other = lewis_weights(m, p);
    CHECK(other.residual < 1e-6);
    CHECK(other.w.sum() == doctest::Approx(4.0).epsilon(1e-3));
  }
}

TEST_CASE("lewis fixed point agrees with independent SVD leverage scores") {
  // l_i(diag(w)^{1/2-1/p} M) recomputed through the SVD must reproduce w,
  // on both the tall and the wide (kernel) code paths
  for (const auto& [rows, cols] : {std::pair{30, 4}, std::pair{6, 40}}) {
    const Matrix m = random_matrix(rows, cols, SeedStream(100 + rows));
    for (const double p : {1.0, 1.5}) {
      const LewisWeights lw = lewis_weights(m, p);
      Matrix weighted = m;
      for (int i = 0; i < rows; ++i)
        weighted.row(i) *= std::pow(lw.w(i), 0.5 - 1.0 / p);
      const Vector lev = leverage_scores(weighted);
      CHECK((lw.w - lev).cwiseAbs().maxCoeff() < 1e-6);
    }
  }
}

TEST_CASE("lewis weights flag a ridged Gram matrix") {
  // duplicate columns make the Gram matrix singular
  Matrix m(10, 2);
  m.col(0) = random_matrix(10, 1, SeedStream(60));
  m.col(1) = m.col(0);
  const LewisWeights lw = lewis_weights(m, 1.5);
  CHECK(lw.ridged);
  CHECK(lw.w.sum() == doctest::Approx(1.0).epsilon(1e-3));  // rank 1
}

TEST_CASE("lewis sample: uniform, degenerate, empirical frequencies") {
  LewisWeights uniform;
  uniform.p = 1.5;
  uniform.w = Vector::Ones(8);
  const LewisSample s = lewis_sample(uniform, 4, SeedStream(3));
  for (int j = 0; j < 4; ++j)
    CHECK(s.weights(j) == doctest::Approx(std::pow(8.0 / 4.0, 1.0 / 1.5)));

  LewisWeights single;
  single.p = 1.0;
  single.w = Vector::Zero(6);
  single.w(4) = 0.7;
  const LewisSample only = lewis_sample(single, 10, SeedStream(4));
  for (const Index idx : only.indices) CHECK(idx == 4);

  LewisWeights skewed;
  skewed.p = 1.0;
  skewed.w = Vector(5);
  skewed.w << 1, 2, 3, 4, 5;
  const LewisSample big = lewis_sample(skewed, 100000, SeedStream(5));
  std::map<Index, int> counts;
  for (const Index idx : big.indices) counts[idx]++;
  for (int i = 0; i < 5; ++i) {
    const double expected = skewed.w(i) / 15.0;
    CHECK(double(counts[i]) / 100000.0 == doctest::Approx(expected).epsilon(0.1));
    CHECK(std::abs(double(counts[i]) / 100000.0 - expected) < 0.01);
  }

  LewisWeights zero;
  zero.p = 1.0;
  zero.w = Vector::Zero(3);
  CHECK_THROWS(lewis_sample(zero, 2, SeedStream(6)));

  // zero-weight rows are never drawn, whatever the rounding near 1 does
  LewisWeights mixed;
  mixed.p = 1.0;
  mixed.w = Vector::Zero(7);
  mixed.w(1) = 1e-9;
  mixed.w(3) = 3.0;
  const LewisSample ms = lewis_sample(mixed, 5000, SeedStream(7));
  for (int j = 0; j < 5000; ++j) {
    const Index idx = ms.indices[size_t(j)];
    CHECK((idx == 1 || idx == 3));
    CHECK(std::isfinite(ms.weights(j)));
  }
}

TEST_CASE("strong coreset: construction invariants in the uniform case") {
  const int n = 10, t_c = 40;
  Matrix cols = random_matrix(6, n, SeedStream(7));
  std::vector<Index> ids(n);
  for (int j = 0; j < n; ++j) ids[size_t(j)] = 100 + j;
  const WeightedColumnSet coreset =
      build_strong_coreset(cols, cols, ids, 1.0, t_c, SeedStream(8));
  CHECK(coreset.cols() == t_c);
  CHECK(coreset.global_indices.size() == size_t(t_c));
  CHECK(coreset.weights.size() == t_c);
  for (int j = 0; j < t_c; ++j) {
    CHECK(coreset.weights(j) > 0.0);
    CHECK(std::isfinite(coreset.weights(j)));
    const Index src = coreset.global_indices[size_t(j)] - 100;
    // sketched column = weight * source sketched column, originals bit-exact
    CHECK((coreset.sketched.col(j) - coreset.weights(j) * cols.col(src))
              .cwiseAbs()
              .maxCoeff() < 1e-12);
    CHECK(coreset.originals.col(j) == cols.col(src));
  }
}

TEST_CASE("strong coreset preserves rank-1 projection costs on orthogonal input") {
  // 8 equal-norm orthogonal columns; per-direction Lewis mass is uniform so
  // the t_c = 4k sample keeps every cost ratio near one
  const int d = 16, k = 8, t_c = 4 * k;
  Matrix a = Matrix::Zero(d, k);
  for (int j = 0; j < k; ++j) a(j, j) = 5.0;
  std::vector<Index> ids(k);
  for (int j = 0; j < k; ++j) ids[size_t(j)] = j;
  const PNorm p(1.3);
  const WeightedColumnSet coreset =
      build_strong_coreset(a, a, ids, p.value(), t_c, SeedStream(9));
  SeedStream ustream(10);
  for (int trial = 0; trial < 100; ++trial) {
    const Matrix u = random_matrix(d, 1, ustream.derive(trial));
    const double cost_full = projection_cost_p2(u, a, p);
    const double cost_core = projection_cost_p2(u, coreset.sketched, p);
    CHECK(cost_core > 0.5 * cost_full);
    CHECK(cost_core < 1.5 * cost_full);
  }
}

TEST_CASE("merge: with an empty set, and duplicate single columns") {
  Matrix one = random_matrix(5, 1, SeedStream(11));
  const WeightedColumnSet x =
      WeightedColumnSet::pass_through(one, one, {42}, 1.0);
  WeightedColumnSet empty;
  empty.p = 1.0;
  empty.sketched.resize(5, 0);
  empty.originals.resize(5, 0);
  empty.weights.resize(0);

  const WeightedColumnSet merged = merge_coresets(x, empty, 10, SeedStream(12));
  CHECK(merged.cols() == 1);
  CHECK(merged.global_indices[0] == 42);
  CHECK(merged.sketched == x.sketched);

  const WeightedColumnSet twice = merge_coresets(x, x, 10, SeedStream(13));
  for (const Index idx : twice.global_indices) CHECK(idx == 42);

  // force actual sampling: target below the union size
  const WeightedColumnSet sampled = merge_coresets(x, x, 1, SeedStream(14));
  CHECK(sampled.cols() == 1);
  CHECK(sampled.global_indices[0] == 42);
}

TEST_CASE("merge provenance: weights compose multiplicatively") {
  const int n = 30, t_c = 8;
  const Matrix sketched = random_matrix(6, n, SeedStream(15));
  const Matrix originals = random_matrix(9, n, SeedStream(16));
  std::vector<Index> ids(n);
  for (int j = 0; j < n; ++j) ids[size_t(j)] = j;
  const WeightedColumnSet base =
      WeightedColumnSet::pass_through(sketched, originals, ids, 1.0);
  const WeightedColumnSet first =
      build_strong_coreset(base, t_c, SeedStream(17));
  const WeightedColumnSet second =
      merge_coresets(first, first, t_c, SeedStream(18));
  for (int j = 0; j < second.cols(); ++j) {
    const Index src = second.global_indices[size_t(j)];
    CHECK((second.sketched.col(j) -
           second.weights(j) * sketched.col(src))
              .cwiseAbs()
              .maxCoeff() < 1e-12 * std::max(1.0, second.weights(j)));
    CHECK(second.originals.col(j) == originals.col(src));
  }
}

TEST_CASE("merged coreset preserves the union's projection costs") {
  // union of two 20-column sets at t_c = 60 passes through, so the costs are
  // exact; a smaller target exercises the sampled path statistically
  const Matrix a = random_matrix(8, 20, SeedStream(19));
  const Matrix b = random_matrix(8, 20, SeedStream(20));
  std::vector<Index> ida(20), idb(20);
  for (int j = 0; j < 20; ++j) {
    ida[size_t(j)] = j;
    idb[size_t(j)] = 20 + j;
  }
  const PNorm p(1.0);
  const WeightedColumnSet sa = WeightedColumnSet::pass_through(a, a, ida, 1.0);
  const WeightedColumnSet sb = WeightedColumnSet::pass_through(b, b, idb, 1.0);
  Matrix un(8, 40);
  un << a, b;

  const WeightedColumnSet pass = merge_coresets(sa, sb, 60, SeedStream(21));
  CHECK(pass.cols() == 40);
  const Matrix q = random_matrix(8, 2, SeedStream(22));
  CHECK(projection_cost_p2(q, pass.sketched, p) ==
        doctest::Approx(projection_cost_p2(q, un, p)).epsilon(1e-12));

  const WeightedColumnSet reduced = merge_coresets(sa, sb, 30, SeedStream(23));
  CHECK(reduced.cols() == 30);
  int ok = 0;
  SeedStream ustream(24);
  for (int trial = 0; trial < 50; ++trial) {
    const Matrix u = random_matrix(8, 2, ustream.derive(trial));
    const double full = projection_cost_p2(u, un, p);
    const double core = projection_cost_p2(u, reduced.sketched, p);
    if (core > 0.4 * full && core < 1.6 * full) ++ok;
  }
  CHECK(ok >= 45);
}

TEST_CASE("column set serialization round-trips bit-exactly") {
  const Matrix sketched = random_matrix(4, 7, SeedStream(25));
  const Matrix originals = random_matrix(6, 7, SeedStream(26));
  std::vector<Index> ids = {3, 1, 4, 1, 5, 9, 2};
  WeightedColumnSet set =
      WeightedColumnSet::pass_through(sketched, originals, ids, 1.5);
  set.weights(2) = 0.25;
  set.seed_lineage = 0xDEADBEEF;

  std::stringstream buffer;
  write_column_set(buffer, set);
  const WeightedColumnSet back = read_column_set(buffer);
  CHECK(back.sketched == set.sketched);
  CHECK(back.originals == set.originals);
  CHECK(back.global_indices == set.global_indices);
  CHECK(back.weights == set.weights);
  CHECK(back.p == set.p);
  CHECK(back.seed_lineage == set.seed_lineage);
}

TEST_CASE("boosted coreset size") {
  CHECK(boosted_coreset_size(20, 1.0) == 20);
  CHECK(boosted_coreset_size(20, 0.5) == 20);
  CHECK(boosted_coreset_size(20, 0.25) == 40);
  CHECK(boosted_coreset_size(20, 0.01) == 20 * 7);
}
