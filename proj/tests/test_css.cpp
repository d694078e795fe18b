#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "rcss/css.hpp"
#include "rcss/datagen.hpp"

using namespace rcss;

namespace {

// independent subset-cost oracle: per-column least squares via the normal
// equations, no shared code with projection_cost_p2
double subset_cost_oracle(const Matrix& a, const std::vector<Index>& subset,
                          double p) {
  Matrix u(a.rows(), static_cast<Eigen::Index>(subset.size()));
  for (size_t j = 0; j < subset.size(); ++j)
    u.col(static_cast<Eigen::Index>(j)) = a.col(subset[j]);
  const Matrix gram = u.transpose() * u;
  double acc = 0.0;
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    const Vector x = gram.ldlt().solve(u.transpose() * a.col(j));
    acc += std::pow((a.col(j) - u * x).norm(), p);
  }
  return std::pow(acc, 1.0 / p);
}

double best_pair_cost(const Matrix& a, double p, std::vector<Index>* best_out) {
  double best = 1e300;
  for (Index i = 0; i < a.cols(); ++i)
    for (Index j = i + 1; j < a.cols(); ++j) {
      const double cost = subset_cost_oracle(a, {i, j}, p);
      if (cost < best) {
        best = cost;
        if (best_out) *best_out = {i, j};
      }
    }
  return best;
}

// from-scratch greedy with the same tie rule, built on the oracle cost
std::vector<Index> greedy_oracle(const Matrix& a, int r, double p) {
  std::vector<Index> picked;
  for (int step = 0; step < r; ++step) {
    Index best = -1;
    double best_cost = 1e300;
    for (Index j = 0; j < a.cols(); ++j) {
      if (std::find(picked.begin(), picked.end(), j) != picked.end()) continue;
      std::vector<Index> trial = picked;
      trial.push_back(j);
      const double cost = subset_cost_oracle(a, trial, p);
      if (cost < best_cost - 1e-12) {
        best_cost = cost;
        best = j;
      }
    }
    picked.push_back(best);
  }
  return picked;
}

}  // namespace

TEST_CASE("regular css recovers an exact rank-k span") {
  // 3 distinct orthogonal columns, each repeated 4 times
  const int k = 3, reps = 4;
  Matrix a = Matrix::Zero(6, k * reps);
  for (int j = 0; j < k * reps; ++j) a(j % k, j) = 2.0 + (j % k);
  RegularCssConfig cfg;
  cfg.t_prime = 3 * k;
  const SelectionResult sel =
      regular_css_p2(a, k, PNorm(1.0), cfg, SeedStream(31));
  CHECK(sel.err_p2 < 1e-9);
  CHECK(sel.indices.size() == size_t(3 * k));
  CHECK(static_cast<Eigen::Index>(sel.indices.size()) == sel.left_factor.cols());
}

TEST_CASE("regular css is within 3x of the best pair on a small instance") {
  const Matrix a = random_matrix(5, 8, SeedStream(32));
  const double best = best_pair_cost(a, 1.0, nullptr);
  RegularCssConfig cfg;
  cfg.t_prime = 2;
  const SelectionResult sel =
      regular_css_p2(a, 2, PNorm(1.0), cfg, SeedStream(33));
  CHECK(sel.err_p2 <= 3.0 * best);
}

TEST_CASE("regular css defaults and result invariants") {
  const Matrix a = random_matrix(6, 12, SeedStream(34));
  const SelectionResult sel =
      regular_css_p2(a, 5, PNorm(1.5), RegularCssConfig{}, SeedStream(35));
  // embed defaults m = s = ceil(k/2), t' defaults to k
  CHECK(sel.meta.params.find("m=3 s=3 t_prime=5") != std::string::npos);
  CHECK(sel.indices.size() == 5);
  CHECK(sel.err_p2 ==
        doctest::Approx(projection_cost_p2(sel.left_factor, a, PNorm(1.5)))
            .epsilon(1e-9));
  REQUIRE(sel.right_factor.has_value());
  CHECK(sel.right_factor->rows() == 5);
  CHECK(sel.right_factor->cols() == 12);
  for (const Index idx : sel.indices) {
    CHECK(idx >= 0);
    CHECK(idx < 12);
  }
}

TEST_CASE("regular css determinism and dedup option") {
  const Matrix a = random_matrix(6, 12, SeedStream(36));
  RegularCssConfig cfg;
  cfg.t_prime = 8;
  const SelectionResult s1 = regular_css_p2(a, 3, PNorm(1.0), cfg, SeedStream(37));
  const SelectionResult s2 = regular_css_p2(a, 3, PNorm(1.0), cfg, SeedStream(37));
  CHECK(s1.indices == s2.indices);
  CHECK(s1.err_p2 == s2.err_p2);
  CHECK(s1.left_factor == s2.left_factor);

  cfg.dedup = true;
  const SelectionResult dd = regular_css_p2(a, 3, PNorm(1.0), cfg, SeedStream(37));
  std::vector<Index> sorted = dd.indices;
  std::sort(sorted.begin(), sorted.end());
  CHECK(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end());
}

TEST_CASE("greedy picks the dominant column first") {
  Matrix a = Matrix::Zero(6, 5);
  a.col(2) = Vector::LinSpaced(6, 1.0, 2.0);
  GreedyCssConfig cfg;
  cfg.pool_size = 5;  // full pool
  const SelectionResult sel =
      greedy_css_p2(a, 2, PNorm(1.0), 1, 0.1, SeedStream(41), cfg);
  REQUIRE(sel.indices.size() == 1);
  CHECK(sel.indices[0] == 2);
  CHECK(sel.err_p2 < 1e-12);
}

TEST_CASE("greedy error sequence is non-increasing, phi non-decreasing") {
  const Matrix a = random_matrix(7, 12, SeedStream(42));
  const PNorm p(1.4);
  GreedyState state(a, p);
  double prev_cost = state.cost_pow();
  double prev_phi = state.phi();
  SeedStream pick(43);
  std::vector<Index> left(12);
  for (int j = 0; j < 12; ++j) left[size_t(j)] = j;
  for (int step = 0; step < 12; ++step) {
    const size_t at = size_t(pick.next_below(left.size()));
    state.commit(a, left[at]);
    left.erase(left.begin() + static_cast<std::ptrdiff_t>(at));
    CHECK(state.cost_pow() <= prev_cost);
    CHECK(state.phi() >= prev_phi);
    prev_cost = state.cost_pow();
    prev_phi = state.phi();
  }
  CHECK(state.cost_pow() < 1e-9);  // all columns selected
}

TEST_CASE("greedy matches the exhaustive oracle on n=6, k=2") {
  const Matrix a = random_matrix(4, 6, SeedStream(44));
  const PNorm p(1.0);
  GreedyCssConfig cfg;
  cfg.pool_size = 6;  // full candidate pool every round
  const SelectionResult sel = greedy_css_p2(a, 2, p, 2, 0.1, SeedStream(45), cfg);

  const std::vector<Index> oracle_pick = greedy_oracle(a, 2, 1.0);
  CHECK(sel.indices == oracle_pick);
  CHECK(sel.err_p2 ==
        doctest::Approx(subset_cost_oracle(a, oracle_pick, 1.0)).epsilon(1e-7));

  std::vector<Index> best_pair;
  const double best = best_pair_cost(a, 1.0, &best_pair);
  CHECK(sel.err_p2 >= best - 1e-9);
}

TEST_CASE("incremental orthogonalization matches from-scratch residuals") {
  const Matrix a = random_matrix(9, 10, SeedStream(46));
  GreedyState state(a, PNorm(1.0));
  SeedStream pick(47);
  for (int step = 0; step < 6; ++step) {
    state.commit(a, static_cast<Index>(pick.next_below(10)));
    Matrix selected(a.rows(), static_cast<Eigen::Index>(state.selected().size()));
    for (size_t j = 0; j < state.selected().size(); ++j)
      selected.col(static_cast<Eigen::Index>(j)) = a.col(state.selected()[j]);
    const Matrix q = orthonormal_basis(selected);
    for (Eigen::Index l = 0; l < a.cols(); ++l) {
      const Vector res = a.col(l) - q * (q.transpose() * a.col(l));
      CHECK(std::abs(state.residual_sq()(l) - res.squaredNorm()) <=
            1e-8 * (1.0 + a.col(l).squaredNorm()));
    }
    // phi recomputable from scratch
    const double phi = phi_utility(a, state.selected(), PNorm(1.0));
    CHECK(std::abs(state.phi() - phi) <= 1e-8 * (1.0 + std::abs(phi)));
  }
}

TEST_CASE("greedy early stop is flagged when r exceeds n") {
  const Matrix a = random_matrix(4, 3, SeedStream(48));
  GreedyCssConfig cfg;
  cfg.pool_size = 3;
  const SelectionResult sel = greedy_css_p2(a, 2, PNorm(1.0), 3, 0.1,
                                            SeedStream(49), cfg);
  CHECK(sel.indices.size() == 3);
  CHECK_FALSE(sel.meta.flagged);
}

TEST_CASE("greedy determinism") {
  const Matrix a = random_matrix(6, 20, SeedStream(50));
  const SelectionResult s1 = greedy_css_p2(a, 4, PNorm(1.0), 4, 0.2, SeedStream(51));
  const SelectionResult s2 = greedy_css_p2(a, 4, PNorm(1.0), 4, 0.2, SeedStream(51));
  CHECK(s1.indices == s2.indices);
  CHECK(s1.err_p2 == s2.err_p2);
}

TEST_CASE("phi utility: endpoints and exhaustive monotonicity") {
  const Matrix a = random_matrix(6, 10, SeedStream(52));
  const PNorm p(1.2);
  CHECK(phi_utility(a, {}, p) == 0.0);

  std::vector<Index> all(10);
  for (int j = 0; j < 10; ++j) all[size_t(j)] = j;
  const double total = std::pow(lp2_norm(a, p), p.value());
  CHECK(phi_utility(a, all, p) == doctest::Approx(total).epsilon(1e-9));

  // all subsets of [10]: phi(T + {i}) >= phi(T)
  std::vector<double> phi_of(1 << 10);
  for (unsigned mask = 0; mask < (1u << 10); ++mask) {
    std::vector<Index> t;
    for (int j = 0; j < 10; ++j)
      if (mask & (1u << j)) t.push_back(j);
    phi_of[mask] = phi_utility(a, t, p);
  }
  for (unsigned mask = 0; mask < (1u << 10); ++mask)
    for (int j = 0; j < 10; ++j)
      if (!(mask & (1u << j)))
        CHECK(phi_of[mask | (1u << j)] >= phi_of[mask] - 1e-9);
}
