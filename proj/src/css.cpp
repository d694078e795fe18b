#include "rcss/css.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "rcss/lewis.hpp"
#include "rcss/sketch.hpp"

namespace rcss {

int theory_t_prime(int k) {
  const int lg = static_cast<int>(std::ceil(std::log2(std::max(2, k))));
  return k * lg * lg;
}

namespace {

Matrix gather_columns(const Matrix& a, const std::vector<Index>& indices) {
  Matrix out(a.rows(), static_cast<Eigen::Index>(indices.size()));
  for (size_t j = 0; j < indices.size(); ++j)
    out.col(static_cast<Eigen::Index>(j)) = a.col(indices[j]);
  return out;
}

}  // namespace

SelectionResult regular_css_p2(const Matrix& a, int k, PNorm p,
                               const RegularCssConfig& cfg, SeedStream seed) {
  const int n = static_cast<int>(a.cols());
  require(k >= 1 && k <= n, "regular_css_p2: k out of range");

  const int m = cfg.embed_rows > 0 ? cfg.embed_rows : (k + 1) / 2;
  const int s =
      std::min(m, cfg.embed_sparsity > 0 ? cfg.embed_sparsity : (k + 1) / 2);
  const int t_prime = cfg.t_prime > 0 ? cfg.t_prime : k;

  const SparseEmbedding embed = make_sparse_embedding(
      m, static_cast<int>(a.rows()), s, seed.derive(seed_tag::kEmbed).key());
  const Matrix sa = apply_sketch(embed, a);
  const LewisWeights lw = lewis_weights(sa.transpose(), p.value());
  const LewisSample sample =
      lewis_sample(lw, t_prime, seed.derive(seed_tag::kSample));

  SelectionResult result;
  result.meta.algorithm = "regular-css-p2";
  result.meta.seed = seed.key();
  result.meta.flagged = !lw.converged;
  {
    std::ostringstream params;
    params << "m=" << m << " s=" << s << " t_prime=" << t_prime
           << " rescale=" << cfg.rescale << " dedup=" << cfg.dedup;
    result.meta.params = params.str();
  }

  result.indices = sample.indices;
  Vector weights = sample.weights;
  if (cfg.dedup) {
    std::vector<Index> unique;
    std::vector<double> uw;
    for (size_t j = 0; j < result.indices.size(); ++j) {
      if (std::find(unique.begin(), unique.end(), result.indices[j]) !=
          unique.end())
        continue;
      unique.push_back(result.indices[j]);
      uw.push_back(weights(static_cast<Eigen::Index>(j)));
    }
    result.indices = std::move(unique);
    weights = Eigen::Map<Vector>(uw.data(), static_cast<Eigen::Index>(uw.size()));
  }

  result.left_factor = gather_columns(a, result.indices);
  if (cfg.rescale)
    for (Eigen::Index j = 0; j < result.left_factor.cols(); ++j)
      result.left_factor.col(j) *= weights(j);

  if (cfg.compute_right_factor)
    result.right_factor = pseudoinverse(result.left_factor) * a;
  result.err_p2 = projection_cost_p2(result.left_factor, a, p);
  return result;
}

GreedyState::GreedyState(const Matrix& a, PNorm p)
    : p_(p.value()), basis_(a.rows(), 0), residual_sq_(a.cols()) {
  for (Eigen::Index j = 0; j < a.cols(); ++j)
    residual_sq_(j) = a.col(j).squaredNorm();
  total_pow_ = 0.0;
  for (Eigen::Index j = 0; j < a.cols(); ++j)
    total_pow_ += std::pow(residual_sq_(j), p_ / 2.0);
  cost_pow_ = total_pow_;
}

Vector GreedyState::residual_direction(const Matrix& a, Index j) const {
  Vector q = a.col(j);
  const double col_norm = q.norm();
  if (basis_.cols() > 0) {
    q -= basis_ * (basis_.transpose() * q);
    q -= basis_ * (basis_.transpose() * q);  // re-orthogonalization pass
  }
  const double norm = q.norm();
  if (norm < 1e-10 * col_norm || norm == 0.0) return Vector();
  return q / norm;
}

double GreedyState::cost_pow_with(const Matrix& a, Index j) const {
  const Vector q = residual_direction(a, j);
  if (q.size() == 0) return cost_pow_;
  const Eigen::RowVectorXd proj = q.transpose() * a;
  double acc = 0.0;
  for (Eigen::Index l = 0; l < a.cols(); ++l) {
    const double rs = std::max(residual_sq_(l) - proj(l) * proj(l), 0.0);
    acc += std::pow(rs, p_ / 2.0);
  }
  return acc;
}

void GreedyState::commit(const Matrix& a, Index j) {
  const Vector q = residual_direction(a, j);
  selected_.push_back(j);
  if (q.size() == 0) return;  // in span: no basis vector, no residual change
  const Eigen::RowVectorXd proj = q.transpose() * a;
  for (Eigen::Index l = 0; l < a.cols(); ++l)
    residual_sq_(l) = std::max(residual_sq_(l) - proj(l) * proj(l), 0.0);
  basis_.conservativeResize(Eigen::NoChange, basis_.cols() + 1);
  basis_.col(basis_.cols() - 1) = q;
  double acc = 0.0;
  for (Eigen::Index l = 0; l < a.cols(); ++l)
    acc += std::pow(residual_sq_(l), p_ / 2.0);
  cost_pow_ = std::min(cost_pow_, acc);
}

SelectionResult greedy_css_p2(const Matrix& a, int k, PNorm p, int r,
                              double delta, SeedStream seed,
                              const GreedyCssConfig& cfg) {
  const int n = static_cast<int>(a.cols());
  require(k >= 1, "greedy_css_p2: k must be >= 1");
  require(r >= 1 && r <= n, "greedy_css_p2: need 1 <= r <= n");
  require(delta > 0.0 && delta < 1.0, "greedy_css_p2: delta in (0, 1)");

  const int pool_size =
      cfg.pool_size > 0
          ? cfg.pool_size
          : static_cast<int>(std::ceil(static_cast<double>(n) / k *
                                       std::log(1.0 / delta)));

  SelectionResult result;
  result.meta.algorithm = "greedy-css-p2";
  result.meta.seed = seed.key();
  {
    std::ostringstream params;
    params << "r=" << r << " delta=" << delta << " pool=" << pool_size;
    result.meta.params = params.str();
  }

  SeedStream pool_stream = seed.derive(seed_tag::kPool);
  GreedyState state(a, p);
  std::vector<Index> unselected(static_cast<size_t>(n));
  for (int j = 0; j < n; ++j) unselected[static_cast<size_t>(j)] = j;

  for (int step = 0; step < r; ++step) {
    if (unselected.empty()) {
      result.meta.flagged = true;
      break;
    }
    const int c = std::min<int>(pool_size, static_cast<int>(unselected.size()));
    // partial Fisher-Yates over a copy, then ascending order so ties go to
    // the smallest index
    std::vector<Index> pool(unselected);
    for (int l = 0; l < c; ++l) {
      const size_t pick =
          l + static_cast<size_t>(pool_stream.next_below(pool.size() - l));
      std::swap(pool[static_cast<size_t>(l)], pool[pick]);
    }
    pool.resize(static_cast<size_t>(c));
    std::sort(pool.begin(), pool.end());

    Index best = pool.front();
    double best_cost = state.cost_pow_with(a, best);
    for (size_t l = 1; l < pool.size(); ++l) {
      const double cost = state.cost_pow_with(a, pool[l]);
      if (cost < best_cost) {
        best_cost = cost;
        best = pool[l];
      }
    }
    state.commit(a, best);
    unselected.erase(std::find(unselected.begin(), unselected.end(), best));
  }

  result.indices = state.selected();
  result.left_factor = gather_columns(a, result.indices);
  if (cfg.compute_right_factor)
    result.right_factor = pseudoinverse(result.left_factor) * a;
  result.err_p2 = std::pow(state.cost_pow(), 1.0 / p.value());
  return result;
}

double phi_utility(const Matrix& a, const std::vector<Index>& t, PNorm p) {
  for (Index idx : t)
    require(idx >= 0 && idx < a.cols(), "phi_utility: index out of range");
  if (t.empty()) return 0.0;
  const Matrix at = gather_columns(a, t);
  const double total = std::pow(lp2_norm(a, p), p.value());
  const double rest = std::pow(projection_cost_p2(at, a, p), p.value());
  return total - rest;
}

SelectionResult run_css(const Matrix& a, int k, PNorm p, const CssConfig& cfg,
                        SeedStream seed) {
  if (cfg.kind == CssKind::Regular)
    return regular_css_p2(a, k, p, cfg.regular, seed);
  const int r = cfg.greedy_r > 0 ? cfg.greedy_r : k;
  return greedy_css_p2(a, k, p, std::min<int>(r, static_cast<int>(a.cols())),
                       cfg.greedy_delta, seed, cfg.greedy);
}

}  // namespace rcss
