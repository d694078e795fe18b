#pragma once
//
// Experiment harness: flat key-value configs, per-(algorithm, seed) metric
// rows, and CSV / text report emission. Every emitted number is a pure
// function of (config, seed); error ratios are always evaluated against the
// exact original matrix, via per-column IRLS regression (tol 1e-8, at most
// 200 iterations).
//

#include <string>
#include <vector>

#include "rcss/css.hpp"
#include "rcss/types.hpp"

namespace rcss {

struct ExperimentConfig {
  enum class Mode { Streaming, Distributed, Offline };
  enum class Algorithm { Regular, Greedy, Uniform, Svd };

  Mode mode = Mode::Streaming;
  Algorithm algorithm = Algorithm::Regular;
  int k = 1;
  double p = 1.0;
  std::vector<std::uint64_t> seeds;

  std::string dataset = "synthetic";  // "synthetic" or a file path
  std::string format = "binary";
  bool csv_header = false;
  int synthetic_n = 100;
  int synthetic_k = 0;  // 0 -> k

  int batch_size = 0;    // streaming r; 0 -> 5k
  int coreset_size = 0;  // t_c; 0 -> 2k
  int sketch_rows = 0;   // 0 -> ceil(0.5 d)
  int servers = 5;
  std::string shard_assignment;  // owner-per-column file; empty -> contiguous
  int t_prime = 0;  // bi-criteria output count; 0 -> k
  double delta = 0.1;

  std::string output_dir;
  bool write_transcripts = false;

  // Parses "key = value" lines; '#' starts a comment; unknown keys are
  // rejected with the offending line number.
  static ExperimentConfig from_file(const std::string& path);
  static ExperimentConfig from_text(const std::string& text,
                                    const std::string& origin = "<config>");
};

struct MetricsRow {
  std::string algorithm;
  std::uint64_t seed = 0;
  double err_ratio = 0.0;       // min_V ||A_I V - A||_p / ||A||_p
  double wall_seconds = 0.0;    // selection only
  long long resource_words = 0; // peak space (streaming) or total comm words
  bool failed = false;
  std::string error;
};

struct Summary {
  int runs = 0;
  int failures = 0;
  double mean_err = 0.0;
  double std_err = 0.0;
  double mean_seconds = 0.0;
  double std_seconds = 0.0;
};

// min_V ||[selected] V - A||_p / ||A||_p, per-column IRLS on the distinct
// selected columns.
double lp_error_ratio(const Matrix& a, const Matrix& selected, PNorm p);

std::vector<MetricsRow> run_experiment(const ExperimentConfig& cfg);

Summary summarize(const std::vector<MetricsRow>& rows);
std::string summary_text(const ExperimentConfig& cfg,
                         const std::vector<MetricsRow>& rows);

void write_metrics_csv(const std::string& path,
                       const std::vector<MetricsRow>& rows);
std::vector<MetricsRow> read_metrics_csv(const std::string& path);

// Runs the experiment and writes metrics.csv / summary.txt (and transcripts
// when asked) under cfg.output_dir.
void run_and_report(const ExperimentConfig& cfg);

}  // namespace rcss
