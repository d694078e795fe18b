#include "rcss/streaming.hpp"

#include <sstream>

namespace rcss {

namespace {

int resolved_batch(const StreamConfig& cfg) {
  return cfg.batch_size > 0 ? cfg.batch_size : 5 * cfg.k;
}
int resolved_coreset(const StreamConfig& cfg) {
  return cfg.coreset_size > 0 ? cfg.coreset_size : 2 * cfg.k;
}

}  // namespace

ColumnStream::ColumnStream(int d, const StreamConfig& cfg,
                           std::uint64_t master_seed)
    : cfg_(cfg), d_(d), sketch_(), master_(master_seed) {
  require(d >= 1, "ColumnStream: d must be >= 1");
  cfg_.batch_size = resolved_batch(cfg);
  cfg_.coreset_size = resolved_coreset(cfg);
  if (cfg_.sketch_rows <= 0) cfg_.sketch_rows = empirical_sketch_rows(d);
  sketch_ = make_p_stable_sketch(cfg_.sketch_rows, d, PNorm(cfg_.p),
                                 master_.derive(seed_tag::kSketch).key(),
                                 cfg_.sketch_scale);
  buffer_sketched_.resize(cfg_.sketch_rows, cfg_.batch_size);
  buffer_original_.resize(d, cfg_.batch_size);
  buffer_indices_.resize(static_cast<size_t>(cfg_.batch_size));
}

SeedStream ColumnStream::next_build_seed() {
  return master_.derive(seed_tag::kCoreset).derive(builds_++);
}

long long ColumnStream::stored_columns() const {
  long long total = buffer_count_;
  for (const Entry& e : entries_) total += e.set.cols();
  return total;
}

long long ColumnStream::stored_words() const {
  // reals plus one index word per stored column; the sketch is regenerated
  // from its seed and not charged
  long long words = 0;
  for (const Entry& e : entries_)
    words += static_cast<long long>(e.set.cols()) *
             (cfg_.sketch_rows + d_ + 2);  // sketched + original + weight + id
  words += static_cast<long long>(buffer_count_) * (cfg_.sketch_rows + d_ + 1);
  return words;
}

void ColumnStream::note_usage() {
  space_.peak_columns = std::max(space_.peak_columns, stored_columns());
  space_.peak_words = std::max(space_.peak_words, stored_words());
}

void ColumnStream::ingest(const Vector& column) {
  require(!finalized_, "ColumnStream: already finalized");
  require(column.size() == d_, "ColumnStream: wrong column dimension");
  buffer_sketched_.col(buffer_count_) = sketch_.entries * column;
  buffer_original_.col(buffer_count_) = column;
  buffer_indices_[static_cast<size_t>(buffer_count_)] = seen_;
  ++buffer_count_;
  ++seen_;
  note_usage();
  if (buffer_count_ == cfg_.batch_size) push_batch();
  note_usage();
}

void ColumnStream::push_batch() {
  if (buffer_count_ == 0) return;
  WeightedColumnSet batch = WeightedColumnSet::pass_through(
      buffer_sketched_.leftCols(buffer_count_),
      buffer_original_.leftCols(buffer_count_),
      std::vector<Index>(buffer_indices_.begin(),
                         buffer_indices_.begin() + buffer_count_),
      cfg_.p);
  entries_.push_back(
      {reduce_to_coreset(batch, cfg_.coreset_size, next_build_seed()), 0});
  buffer_count_ = 0;
  recursive_merge();
}

void ColumnStream::recursive_merge() {
  while (entries_.size() >= 2 &&
         entries_[entries_.size() - 2].level == entries_.back().level) {
    Entry b = std::move(entries_.back());
    entries_.pop_back();
    Entry a = std::move(entries_.back());
    entries_.pop_back();
    entries_.push_back({merge_coresets(a.set, b.set, cfg_.coreset_size,
                                       next_build_seed()),
                        a.level + 1});
    ++space_.merge_count;
  }
}

SelectionResult ColumnStream::finalize(const CssConfig& css) {
  require(!finalized_, "ColumnStream: already finalized");
  require(seen_ > 0, "ColumnStream: empty stream");
  finalized_ = true;
  push_batch();
  note_usage();
  space_.final_list_length = static_cast<int>(entries_.size());

  WeightedColumnSet all;
  for (const Entry& e : entries_) all = concat_sets(all, e.set);

  SelectionResult picked = run_css(all.sketched, cfg_.k, PNorm(cfg_.p), css,
                                   master_.derive(seed_tag::kCss));

  SelectionResult result;
  result.meta = picked.meta;
  result.meta.algorithm = "streaming+" + picked.meta.algorithm;
  result.meta.seed = master_.key();
  result.err_p2 = picked.err_p2;  // error on the coreset concatenation
  result.indices.reserve(picked.indices.size());
  result.left_factor.resize(d_, static_cast<Eigen::Index>(picked.indices.size()));
  for (size_t j = 0; j < picked.indices.size(); ++j) {
    const Index local = picked.indices[j];
    result.indices.push_back(all.global_indices[static_cast<size_t>(local)]);
    result.left_factor.col(static_cast<Eigen::Index>(j)) =
        all.originals.col(local);
  }
  return result;
}

UniformBaseline::UniformBaseline(int k, std::uint64_t seed)
    : k_(k), stream_(seed) {
  require(k >= 1, "UniformBaseline: k must be >= 1");
}

void UniformBaseline::ingest(const Vector& column) {
  const Index id = seen_++;
  if (static_cast<int>(columns_.size()) < k_) {
    columns_.push_back(column);
    indices_.push_back(id);
    return;
  }
  if (!stream_.next_bool()) return;  // discard with probability 1/2
  const auto slot =
      static_cast<size_t>(stream_.next_below(static_cast<std::uint64_t>(k_)));
  columns_[slot] = column;
  indices_[slot] = id;
}

SelectionResult UniformBaseline::finalize() const {
  SelectionResult result;
  result.meta.algorithm = "uniform-streaming";
  result.indices = indices_;
  result.left_factor.resize(
      columns_.empty() ? 0 : columns_.front().size(),
      static_cast<Eigen::Index>(columns_.size()));
  for (size_t j = 0; j < columns_.size(); ++j)
    result.left_factor.col(static_cast<Eigen::Index>(j)) = columns_[j];
  return result;
}

SelectionResult stream_select(const Matrix& a, const StreamConfig& cfg,
                              const CssConfig& css, std::uint64_t master_seed,
                              SpaceReport* report) {
  ColumnStream stream(static_cast<int>(a.rows()), cfg, master_seed);
  for (Eigen::Index j = 0; j < a.cols(); ++j) stream.ingest(a.col(j));
  SelectionResult result = stream.finalize(css);
  if (report) *report = stream.space();
  return result;
}

SelectionResult uniform_streaming_baseline(const Matrix& a, int k,
                                           std::uint64_t seed) {
  UniformBaseline baseline(k, seed);
  for (Eigen::Index j = 0; j < a.cols(); ++j) baseline.ingest(a.col(j));
  return baseline.finalize();
}

}  // namespace rcss
