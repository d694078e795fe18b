#pragma once
//
// Simulated one-round coordinator/server protocol. Servers sketch their
// column shard with a sketch regenerated from a broadcast seed, send a
// weighted coreset plus the matching unsketched columns, the coordinator
// selects columns from the stacked coresets and broadcasts them, and each
// server solves its local lp regression. All information crossing the
// coordinator/server boundary goes through recorded, word-accounted messages;
// two runs with the same master seed produce byte-identical transcripts.
//

#include <string>

#include "rcss/coreset.hpp"
#include "rcss/css.hpp"
#include "rcss/sketch.hpp"

namespace rcss {

struct ServerShard {
  int id = 0;
  Matrix columns;         // d x n_i
  Index index_offset = 0; // first global column id held by this server
};

struct Message {
  enum class Kind { SketchSeed, Coreset, Selection };
  int from = 0;  // kCoordinator or a server id
  int to = 0;
  Kind kind = Kind::SketchSeed;
  long long words = 0;
};

constexpr int kCoordinator = -1;

struct ProtocolTranscript {
  int servers = 0;
  int rounds = 1;
  std::vector<Message> messages;  // normalized by server id within each phase
  long long total_words() const;
  std::string to_lines() const;  // line-delimited records for audit
};

// Word accounting: one word per real number, one per integer index, plus a
// small fixed header of dimension words per message.
long long account_sketch_broadcast_words(const SketchSpec& spec, bool dense);
long long account_coreset_words(int cols, int sketch_rows, int original_rows);
long long account_coreset_words(const WeightedColumnSet& set);
long long account_selection_words(int selected_cols, int d);

struct ProtocolConfig {
  int k = 1;
  double p = 1.0;
  int coreset_size = 0;  // t_c; 0 -> 2k
  int sketch_rows = 0;   // 0 -> ceil(0.5 * d)
  double sketch_scale = 1.0;
  // < 1 turns on the log-factor oversampling with per-server budget delta/s
  double boost_delta = 1.0;
  // count the dense sketch instead of its seed in the setup broadcast
  bool send_dense_sketch = false;
  bool compute_errors = true;  // servers run the final regression step
  CssConfig css;
};

struct ProtocolOutput {
  SelectionResult selection;  // err_p filled from the servers' local solves
  ProtocolTranscript transcript;
};

ProtocolOutput run_protocol(const std::vector<ServerShard>& shards,
                            const ProtocolConfig& cfg,
                            std::uint64_t master_seed);

// Contiguous block partition of a matrix over s servers (the default).
std::vector<ServerShard> shard_contiguous(const Matrix& a, int s);

// Explicit assignment: owner[j] in [0, s) names the server holding column j.
// Each shard keeps its columns in ascending global order; index_offset is
// meaningless for non-contiguous shards, so per-column ids are kept instead.
struct AssignedShards {
  std::vector<ServerShard> shards;
  std::vector<std::vector<Index>> global_ids;  // per server, per column
};
AssignedShards shard_by_assignment(const Matrix& a,
                                   const std::vector<int>& owner, int s);

ProtocolOutput run_protocol(const AssignedShards& shards,
                            const ProtocolConfig& cfg,
                            std::uint64_t master_seed);

}  // namespace rcss
