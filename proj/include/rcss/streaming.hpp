#pragma once
//
// One-pass column-update streaming with merge-and-reduce. Arriving columns
// are sketched into a batch buffer; full batches become level-0 coresets and
// equal-level coresets are greedily merged, so at most one coreset per tree
// level is alive at any quiescent point. The unsketched batch columns ride
// along so the final selection maps back to true input columns.
//

#include "rcss/coreset.hpp"
#include "rcss/css.hpp"
#include "rcss/sketch.hpp"

namespace rcss {

struct StreamConfig {
  int k = 1;
  double p = 1.0;
  int batch_size = 0;    // r; 0 -> 5k
  int coreset_size = 0;  // t_c; 0 -> 2k
  int sketch_rows = 0;   // 0 -> ceil(0.5 * d)
  double sketch_scale = 1.0;
};

struct SpaceReport {
  long long peak_columns = 0;  // stored columns incl. buffer, max over time
  long long peak_words = 0;    // 1 word per stored real or index
  long long merge_count = 0;   // pair merges performed
  int final_list_length = 0;   // coresets left when the stream ended
};

class ColumnStream {
 public:
  // The sketch is derived from the master seed and regenerable; it is not
  // counted as stored state.
  ColumnStream(int d, const StreamConfig& cfg, std::uint64_t master_seed);

  // One column of the stream; never re-reads earlier columns.
  void ingest(const Vector& column);

  // Flush the partial batch, merge, run the configured subroutine on the
  // concatenation of the remaining coresets and map the selection back to
  // true columns. The stream is consumed afterwards.
  SelectionResult finalize(const CssConfig& css);

  const SpaceReport& space() const { return space_; }

  struct Entry {
    WeightedColumnSet set;
    int level;
  };
  const std::vector<Entry>& entries() const { return entries_; }
  int buffered() const { return buffer_count_; }
  long long seen() const { return seen_; }
  long long stored_columns() const;
  long long stored_words() const;
  const StreamConfig& config() const { return cfg_; }
  const PStableSketch& sketch() const { return sketch_; }

 private:
  void push_batch();
  void recursive_merge();
  void note_usage();
  SeedStream next_build_seed();

  StreamConfig cfg_;
  int d_;
  PStableSketch sketch_;
  SeedStream master_;
  std::uint64_t builds_ = 0;

  std::vector<Entry> entries_;  // levels strictly decreasing front to back
  Matrix buffer_sketched_;      // t_s x r, first buffer_count_ columns live
  Matrix buffer_original_;      // d x r
  std::vector<Index> buffer_indices_;
  int buffer_count_ = 0;
  long long seen_ = 0;
  bool finalized_ = false;
  SpaceReport space_;
};

// Keep-or-replace streaming baseline: the first k columns are kept; each
// later column is kept with probability 1/2 and, if kept, evicts a uniformly
// random slot.
class UniformBaseline {
 public:
  UniformBaseline(int k, std::uint64_t seed);
  void ingest(const Vector& column);
  SelectionResult finalize() const;

 private:
  int k_;
  SeedStream stream_;
  long long seen_ = 0;
  std::vector<Index> indices_;
  std::vector<Vector> columns_;
};

// Convenience wrappers feeding a whole matrix column by column.
SelectionResult stream_select(const Matrix& a, const StreamConfig& cfg,
                              const CssConfig& css, std::uint64_t master_seed,
                              SpaceReport* report = nullptr);
SelectionResult uniform_streaming_baseline(const Matrix& a, int k,
                                           std::uint64_t seed);

}  // namespace rcss
