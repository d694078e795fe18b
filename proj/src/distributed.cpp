#include "rcss/distributed.hpp"

#include <cmath>
#include <sstream>

namespace rcss {

long long ProtocolTranscript::total_words() const {
  long long total = 0;
  for (const Message& m : messages) total += m.words;
  return total;
}

namespace {

const char* kind_name(Message::Kind k) {
  switch (k) {
    case Message::Kind::SketchSeed: return "sketch-seed";
    case Message::Kind::Coreset: return "coreset";
    case Message::Kind::Selection: return "selection";
  }
  return "?";
}

}  // namespace

std::string ProtocolTranscript::to_lines() const {
  std::ostringstream os;
  os << "servers " << servers << "\n";
  os << "rounds " << rounds << "\n";
  for (const Message& m : messages)
    os << "msg " << m.from << " " << m.to << " " << kind_name(m.kind) << " "
       << m.words << "\n";
  os << "total_words " << total_words() << "\n";
  return os.str();
}

long long account_sketch_broadcast_words(const SketchSpec& spec, bool dense) {
  if (dense)
    return 4 + static_cast<long long>(spec.rows) * spec.cols;  // dims + entries
  return 5;  // rows, cols, p, seed, scale
}

long long account_coreset_words(int cols, int sketch_rows, int original_rows) {
  // dims header + sketched and original reals + weight and index per column
  return 4 + static_cast<long long>(cols) * (sketch_rows + original_rows) +
         2LL * cols;
}

long long account_coreset_words(const WeightedColumnSet& set) {
  return account_coreset_words(set.cols(),
                               static_cast<int>(set.sketched.rows()),
                               static_cast<int>(set.originals.rows()));
}

long long account_selection_words(int selected_cols, int d) {
  return 2 + static_cast<long long>(selected_cols) * d + selected_cols;
}

namespace {

// Server-side steps. These only see broadcast payloads and the server's own
// shard, never coordinator state.

WeightedColumnSet server_build_coreset(const Matrix& shard,
                                       const std::vector<Index>& global_ids,
                                       const SketchSpec& sketch_spec, double p,
                                       int t_c, SeedStream seed) {
  if (shard.cols() == 0) {
    WeightedColumnSet empty;
    empty.p = p;
    empty.sketched.resize(sketch_spec.rows, 0);
    empty.originals.resize(shard.rows(), 0);
    empty.weights.resize(0);
    return empty;
  }
  const PStableSketch sketch = rebuild_p_stable(sketch_spec);
  const Matrix sketched = apply_sketch(sketch, shard);
  return reduce_to_coreset(
      WeightedColumnSet::pass_through(sketched, shard, global_ids, p), t_c,
      seed);
}

double server_error_pow(const Matrix& shard, const Matrix& selected, double p) {
  if (shard.cols() == 0) return 0.0;
  // duplicate draws span nothing new; solve against distinct columns
  Matrix basis(selected.rows(), 0);
  for (Eigen::Index j = 0; j < selected.cols(); ++j) {
    bool seen = false;
    for (Eigen::Index l = 0; l < basis.cols() && !seen; ++l)
      seen = (basis.col(l) - selected.col(j)).isZero(0.0);
    if (seen) continue;
    basis.conservativeResize(Eigen::NoChange, basis.cols() + 1);
    basis.col(basis.cols() - 1) = selected.col(j);
  }
  double acc = 0.0;
  for (Eigen::Index j = 0; j < shard.cols(); ++j) {
    const LpRegressionResult fit =
        lp_regression(basis, shard.col(j), PNorm(p), 1e-8, 200);
    acc += std::pow(fit.objective, p);
  }
  return acc;
}

ProtocolOutput run_protocol_impl(const std::vector<Matrix>& shards,
                                 const std::vector<std::vector<Index>>& ids,
                                 const ProtocolConfig& cfg,
                                 std::uint64_t master_seed) {
  const int s = static_cast<int>(shards.size());
  require(s >= 1, "run_protocol: need at least one server");
  Eigen::Index d = -1;
  for (const Matrix& shard : shards) {
    if (d < 0) d = shard.rows();
    require(shard.rows() == d, "run_protocol: inconsistent d across shards");
  }

  const int t_c = cfg.coreset_size > 0 ? cfg.coreset_size : 2 * cfg.k;
  int effective_t_c = t_c;
  if (cfg.boost_delta < 1.0)
    effective_t_c = boosted_coreset_size(t_c, cfg.boost_delta / s);

  SeedStream master(master_seed);
  const int sketch_rows = cfg.sketch_rows > 0
                              ? cfg.sketch_rows
                              : empirical_sketch_rows(static_cast<int>(d));
  SketchSpec sketch_spec;
  sketch_spec.kind = SketchSpec::Kind::PStable;
  sketch_spec.rows = sketch_rows;
  sketch_spec.cols = static_cast<int>(d);
  sketch_spec.p = cfg.p;
  sketch_spec.seed = master.derive(seed_tag::kSketch).key();
  sketch_spec.scale = cfg.sketch_scale;

  ProtocolOutput out;
  out.transcript.servers = s;
  out.transcript.rounds = 1;

  // setup: coordinator -> servers
  for (int i = 0; i < s; ++i)
    out.transcript.messages.push_back(
        {kCoordinator, i, Message::Kind::SketchSeed,
         account_sketch_broadcast_words(sketch_spec, cfg.send_dense_sketch)});

  // servers -> coordinator
  std::vector<WeightedColumnSet> coresets;
  coresets.reserve(static_cast<size_t>(s));
  for (int i = 0; i < s; ++i) {
    WeightedColumnSet coreset = server_build_coreset(
        shards[static_cast<size_t>(i)], ids[static_cast<size_t>(i)],
        sketch_spec, cfg.p, effective_t_c,
        master.derive(seed_tag::kCoreset).derive(static_cast<std::uint64_t>(i)));
    out.transcript.messages.push_back(
        {i, kCoordinator, Message::Kind::Coreset, account_coreset_words(coreset)});
    coresets.push_back(std::move(coreset));
  }

  // coordinator: stack, select, map back to true columns
  WeightedColumnSet stacked;
  for (const WeightedColumnSet& c : coresets) stacked = concat_sets(stacked, c);
  require(!stacked.empty(), "run_protocol: no columns reached the coordinator");

  SelectionResult picked = run_css(stacked.sketched, cfg.k, PNorm(cfg.p),
                                   cfg.css, master.derive(seed_tag::kCss));
  SelectionResult& sel = out.selection;
  sel.meta = picked.meta;
  sel.meta.algorithm = "distributed+" + picked.meta.algorithm;
  sel.meta.seed = master.key();
  sel.err_p2 = picked.err_p2;
  sel.left_factor.resize(d, static_cast<Eigen::Index>(picked.indices.size()));
  for (size_t j = 0; j < picked.indices.size(); ++j) {
    const Index local = picked.indices[j];
    sel.indices.push_back(stacked.global_indices[static_cast<size_t>(local)]);
    sel.left_factor.col(static_cast<Eigen::Index>(j)) =
        stacked.originals.col(local);
  }

  // selection broadcast: coordinator -> servers
  for (int i = 0; i < s; ++i)
    out.transcript.messages.push_back(
        {kCoordinator, i, Message::Kind::Selection,
         account_selection_words(static_cast<int>(sel.left_factor.cols()),
                                 static_cast<int>(d))});

  // servers solve their local regressions; only scalar errors come back and
  // they are not protocol traffic
  if (cfg.compute_errors) {
    double err_pow = 0.0;
    for (int i = 0; i < s; ++i)
      err_pow += server_error_pow(shards[static_cast<size_t>(i)],
                                  sel.left_factor, cfg.p);
    sel.err_p = std::pow(err_pow, 1.0 / cfg.p);
  }
  return out;
}

}  // namespace

ProtocolOutput run_protocol(const std::vector<ServerShard>& shards,
                            const ProtocolConfig& cfg,
                            std::uint64_t master_seed) {
  std::vector<Matrix> cols;
  std::vector<std::vector<Index>> ids;
  for (const ServerShard& shard : shards) {
    require(shard.id == static_cast<int>(cols.size()),
            "run_protocol: shards must be ordered by id 0..s-1");
    cols.push_back(shard.columns);
    std::vector<Index> shard_ids(static_cast<size_t>(shard.columns.cols()));
    for (size_t j = 0; j < shard_ids.size(); ++j)
      shard_ids[j] = shard.index_offset + static_cast<Index>(j);
    ids.push_back(std::move(shard_ids));
  }
  return run_protocol_impl(cols, ids, cfg, master_seed);
}

ProtocolOutput run_protocol(const AssignedShards& shards,
                            const ProtocolConfig& cfg,
                            std::uint64_t master_seed) {
  std::vector<Matrix> cols;
  for (const ServerShard& shard : shards.shards) cols.push_back(shard.columns);
  return run_protocol_impl(cols, shards.global_ids, cfg, master_seed);
}

std::vector<ServerShard> shard_contiguous(const Matrix& a, int s) {
  require(s >= 1, "shard_contiguous: s must be >= 1");
  const Eigen::Index n = a.cols();
  std::vector<ServerShard> shards;
  Eigen::Index start = 0;
  for (int i = 0; i < s; ++i) {
    const Eigen::Index count = n / s + (i < n % s ? 1 : 0);
    ServerShard shard;
    shard.id = i;
    shard.index_offset = start;
    shard.columns = a.middleCols(start, count);
    shards.push_back(std::move(shard));
    start += count;
  }
  return shards;
}

AssignedShards shard_by_assignment(const Matrix& a,
                                   const std::vector<int>& owner, int s) {
  require(s >= 1, "shard_by_assignment: s must be >= 1");
  require(owner.size() == static_cast<size_t>(a.cols()),
          "shard_by_assignment: one owner per column required");
  AssignedShards out;
  out.shards.resize(static_cast<size_t>(s));
  out.global_ids.resize(static_cast<size_t>(s));
  for (int i = 0; i < s; ++i) out.shards[static_cast<size_t>(i)].id = i;
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    const int o = owner[static_cast<size_t>(j)];
    require(o >= 0 && o < s, "shard_by_assignment: owner out of range");
    out.global_ids[static_cast<size_t>(o)].push_back(j);
  }
  for (int i = 0; i < s; ++i) {
    auto& ids = out.global_ids[static_cast<size_t>(i)];
    Matrix& cols = out.shards[static_cast<size_t>(i)].columns;
    cols.resize(a.rows(), static_cast<Eigen::Index>(ids.size()));
    for (size_t j = 0; j < ids.size(); ++j)
      cols.col(static_cast<Eigen::Index>(j)) = a.col(ids[j]);
  }
  return out;
}

}  // namespace rcss
