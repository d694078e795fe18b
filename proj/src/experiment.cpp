#include "rcss/experiment.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "rcss/datagen.hpp"
#include "rcss/distributed.hpp"
#include "rcss/io.hpp"
#include "rcss/numerics.hpp"
#include "rcss/streaming.hpp"

namespace rcss {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

[[noreturn]] void config_fail(const std::string& origin, long line,
                              const std::string& what) {
  std::ostringstream os;
  os << origin << ":" << line << ": " << what;
  throw std::runtime_error(os.str());
}

ExperimentConfig::Mode parse_mode(const std::string& v) {
  if (v == "streaming") return ExperimentConfig::Mode::Streaming;
  if (v == "distributed") return ExperimentConfig::Mode::Distributed;
  if (v == "offline") return ExperimentConfig::Mode::Offline;
  throw std::runtime_error("unknown mode: " + v);
}

ExperimentConfig::Algorithm parse_algorithm(const std::string& v) {
  if (v == "regular") return ExperimentConfig::Algorithm::Regular;
  if (v == "greedy") return ExperimentConfig::Algorithm::Greedy;
  if (v == "uniform") return ExperimentConfig::Algorithm::Uniform;
  if (v == "svd") return ExperimentConfig::Algorithm::Svd;
  throw std::runtime_error("unknown algorithm: " + v);
}

std::vector<std::uint64_t> parse_seeds(const std::string& v) {
  std::vector<std::uint64_t> seeds;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    seeds.push_back(std::stoull(item));
  }
  return seeds;
}

bool parse_bool(const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw std::runtime_error("not a boolean: " + v);
}

const char* algorithm_name(ExperimentConfig::Algorithm a) {
  switch (a) {
    case ExperimentConfig::Algorithm::Regular: return "regular";
    case ExperimentConfig::Algorithm::Greedy: return "greedy";
    case ExperimentConfig::Algorithm::Uniform: return "uniform";
    case ExperimentConfig::Algorithm::Svd: return "svd";
  }
  return "?";
}

const char* mode_name(ExperimentConfig::Mode m) {
  switch (m) {
    case ExperimentConfig::Mode::Streaming: return "streaming";
    case ExperimentConfig::Mode::Distributed: return "distributed";
    case ExperimentConfig::Mode::Offline: return "offline";
  }
  return "?";
}

}  // namespace

ExperimentConfig ExperimentConfig::from_text(const std::string& text,
                                             const std::string& origin) {
  ExperimentConfig cfg;
  std::stringstream ss(text);
  std::string line;
  long line_no = 0;
  while (std::getline(ss, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      config_fail(origin, line_no, "expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    try {
      if (key == "mode") cfg.mode = parse_mode(value);
      else if (key == "algorithm") cfg.algorithm = parse_algorithm(value);
      else if (key == "k") cfg.k = std::stoi(value);
      else if (key == "p") cfg.p = std::stod(value);
      else if (key == "seeds") cfg.seeds = parse_seeds(value);
      else if (key == "dataset") cfg.dataset = value;
      else if (key == "format") cfg.format = value;
      else if (key == "header") cfg.csv_header = parse_bool(value);
      else if (key == "synthetic_n") cfg.synthetic_n = std::stoi(value);
      else if (key == "synthetic_k") cfg.synthetic_k = std::stoi(value);
      else if (key == "batch_size") cfg.batch_size = std::stoi(value);
      else if (key == "coreset_size") cfg.coreset_size = std::stoi(value);
      else if (key == "sketch_rows") cfg.sketch_rows = std::stoi(value);
      else if (key == "servers") cfg.servers = std::stoi(value);
      else if (key == "shard_assignment") cfg.shard_assignment = value;
      else if (key == "t_prime") cfg.t_prime = std::stoi(value);
      else if (key == "delta") cfg.delta = std::stod(value);
      else if (key == "output") cfg.output_dir = value;
      else if (key == "transcripts") cfg.write_transcripts = parse_bool(value);
      else config_fail(origin, line_no, "unknown key '" + key + "'");
    } catch (const std::runtime_error&) {
      throw;
    } catch (const std::exception& e) {
      config_fail(origin, line_no, "bad value for '" + key + "': " + e.what());
    }
  }
  if (cfg.seeds.empty()) cfg.seeds = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  if (cfg.k < 1) throw std::runtime_error(origin + ": k must be >= 1");
  PNorm check(cfg.p);  // validates the range
  (void)check;
  return cfg;
}

ExperimentConfig ExperimentConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(path + ": cannot open");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return from_text(buffer.str(), path);
}

double lp_error_ratio(const Matrix& a, const Matrix& selected, PNorm p) {
  const double denom = entrywise_lp_norm(a, p);
  if (selected.cols() == 0) return 1.0;
  Matrix basis(selected.rows(), 0);
  for (Eigen::Index j = 0; j < selected.cols(); ++j) {
    bool dup = false;
    for (Eigen::Index l = 0; l < basis.cols() && !dup; ++l)
      dup = (basis.col(l) - selected.col(j)).isZero(0.0);
    if (dup) continue;
    basis.conservativeResize(Eigen::NoChange, basis.cols() + 1);
    basis.col(basis.cols() - 1) = selected.col(j);
  }
  double err_pow = 0.0;
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    const LpRegressionResult fit = lp_regression(basis, a.col(j), p, 1e-8, 200);
    err_pow += std::pow(fit.objective, p.value());
  }
  return std::pow(err_pow, 1.0 / p.value()) / denom;
}

namespace {

Matrix load_dataset(const ExperimentConfig& cfg) {
  if (cfg.dataset == "synthetic") {
    const int sk = cfg.synthetic_k > 0 ? cfg.synthetic_k : cfg.k;
    return gen_synthetic(cfg.synthetic_n, sk);
  }
  return load_matrix(cfg.dataset, format_from_name(cfg.format), cfg.csv_header);
}

CssConfig make_css_config(const ExperimentConfig& cfg) {
  CssConfig css;
  if (cfg.algorithm == ExperimentConfig::Algorithm::Greedy) {
    css.kind = CssKind::Greedy;
    css.greedy_r = cfg.t_prime > 0 ? cfg.t_prime : cfg.k;
    css.greedy_delta = cfg.delta;
  } else {
    css.kind = CssKind::Regular;
    css.regular.t_prime = cfg.t_prime;
  }
  return css;
}

StreamConfig make_stream_config(const ExperimentConfig& cfg, int batch) {
  StreamConfig sc;
  sc.k = cfg.k;
  sc.p = cfg.p;
  sc.batch_size = batch;
  sc.coreset_size = cfg.coreset_size;
  sc.sketch_rows = cfg.sketch_rows;
  return sc;
}

struct RunOutcome {
  Matrix selected;
  double seconds = 0.0;
  long long words = 0;
  double svd_error = -1.0;  // set only by the svd baseline
  std::string transcript;
};

RunOutcome run_cell(const ExperimentConfig& cfg, const Matrix& a,
                    std::uint64_t seed) {
  using clock = std::chrono::steady_clock;
  RunOutcome out;
  const PNorm p(cfg.p);

  if (cfg.algorithm == ExperimentConfig::Algorithm::Svd) {
    const auto start = clock::now();
    out.svd_error = svd_rank_k_error(a, cfg.k, p);
    out.seconds = std::chrono::duration<double>(clock::now() - start).count();
    out.selected.resize(a.rows(), 0);
    return out;
  }

  if (cfg.algorithm == ExperimentConfig::Algorithm::Uniform) {
    if (cfg.mode == ExperimentConfig::Mode::Streaming) {
      const Matrix permuted = permute_columns(
          a, random_permutation(a.cols(),
                                SeedStream(seed).derive(seed_tag::kPermute)));
      const auto start = clock::now();
      const SelectionResult sel = uniform_streaming_baseline(
          permuted, cfg.k, SeedStream(seed).derive(seed_tag::kBaseline).key());
      out.seconds = std::chrono::duration<double>(clock::now() - start).count();
      out.selected = sel.left_factor;
      out.words = static_cast<long long>(cfg.k) * a.rows();
    } else {
      // distributed / offline uniform: pick k columns uniformly at random
      const auto start = clock::now();
      SeedStream stream = SeedStream(seed).derive(seed_tag::kBaseline);
      std::vector<Index> pool(static_cast<size_t>(a.cols()));
      for (size_t j = 0; j < pool.size(); ++j) pool[j] = static_cast<Index>(j);
      out.selected.resize(a.rows(), cfg.k);
      for (int l = 0; l < cfg.k; ++l) {
        const size_t pick =
            l + static_cast<size_t>(stream.next_below(pool.size() - l));
        std::swap(pool[static_cast<size_t>(l)], pool[pick]);
        out.selected.col(l) = a.col(pool[static_cast<size_t>(l)]);
      }
      out.seconds = std::chrono::duration<double>(clock::now() - start).count();
      out.words = static_cast<long long>(cfg.k) * a.rows();
    }
    return out;
  }

  const CssConfig css = make_css_config(cfg);

  if (cfg.mode == ExperimentConfig::Mode::Distributed) {
    ProtocolConfig pc;
    pc.k = cfg.k;
    pc.p = cfg.p;
    pc.coreset_size = cfg.coreset_size;
    pc.sketch_rows = cfg.sketch_rows;
    pc.css = css;
    pc.compute_errors = false;  // the harness evaluates against exact A
    const auto start = clock::now();
    ProtocolOutput proto =
        cfg.shard_assignment.empty()
            ? run_protocol(shard_contiguous(a, cfg.servers), pc, seed)
            : run_protocol(
                  shard_by_assignment(a, load_assignment(cfg.shard_assignment),
                                      cfg.servers),
                  pc, seed);
    out.seconds = std::chrono::duration<double>(clock::now() - start).count();
    out.selected = proto.selection.left_factor;
    out.words = proto.transcript.total_words();
    out.transcript = proto.transcript.to_lines();
    return out;
  }

  // streaming, and offline as its single-batch degenerate form; both apply
  // the per-seed column permutation so the two coincide whenever one batch
  // covers the input
  const bool offline = cfg.mode == ExperimentConfig::Mode::Offline;
  const Matrix input = permute_columns(
      a, random_permutation(a.cols(),
                            SeedStream(seed).derive(seed_tag::kPermute)));
  const int batch = offline ? static_cast<int>(a.cols())
                            : (cfg.batch_size > 0 ? cfg.batch_size : 5 * cfg.k);
  const StreamConfig sc = make_stream_config(cfg, batch);
  const auto start = clock::now();
  SpaceReport report;
  const SelectionResult sel = stream_select(input, sc, css, seed, &report);
  out.seconds = std::chrono::duration<double>(clock::now() - start).count();
  out.selected = sel.left_factor;
  out.words = report.peak_words;
  return out;
}

}  // namespace

std::vector<MetricsRow> run_experiment(const ExperimentConfig& cfg) {
  const Matrix a = load_dataset(cfg);
  const PNorm p(cfg.p);
  std::vector<MetricsRow> rows;
  rows.reserve(cfg.seeds.size());
  for (const std::uint64_t seed : cfg.seeds) {
    MetricsRow row;
    row.algorithm = algorithm_name(cfg.algorithm);
    row.seed = seed;
    try {
      const RunOutcome outcome = run_cell(cfg, a, seed);
      row.wall_seconds = outcome.seconds;
      row.resource_words = outcome.words;
      if (outcome.svd_error >= 0.0)
        row.err_ratio = outcome.svd_error / entrywise_lp_norm(a, p);
      else
        row.err_ratio = lp_error_ratio(a, outcome.selected, p);
      if (!std::isfinite(row.err_ratio) || row.err_ratio < 0.0)
        throw std::runtime_error("non-finite error ratio");
      if (cfg.write_transcripts && !outcome.transcript.empty() &&
          cfg.mode == ExperimentConfig::Mode::Distributed &&
          !cfg.output_dir.empty()) {
        std::filesystem::create_directories(cfg.output_dir);
        std::ofstream ts(cfg.output_dir + "/transcript_" +
                         std::to_string(seed) + ".txt");
        ts << outcome.transcript;
      }
    } catch (const std::exception& e) {
      row.failed = true;
      row.error = e.what();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

Summary summarize(const std::vector<MetricsRow>& rows) {
  Summary s;
  double err_acc = 0.0, sec_acc = 0.0;
  for (const MetricsRow& row : rows) {
    ++s.runs;
    if (row.failed) {
      ++s.failures;
      continue;
    }
    err_acc += row.err_ratio;
    sec_acc += row.wall_seconds;
  }
  const int ok = s.runs - s.failures;
  if (ok == 0) return s;
  s.mean_err = err_acc / ok;
  s.mean_seconds = sec_acc / ok;
  double err_var = 0.0, sec_var = 0.0;
  for (const MetricsRow& row : rows) {
    if (row.failed) continue;
    err_var += (row.err_ratio - s.mean_err) * (row.err_ratio - s.mean_err);
    sec_var += (row.wall_seconds - s.mean_seconds) *
               (row.wall_seconds - s.mean_seconds);
  }
  if (ok > 1) {
    s.std_err = std::sqrt(err_var / (ok - 1));
    s.std_seconds = std::sqrt(sec_var / (ok - 1));
  }
  return s;
}

std::string summary_text(const ExperimentConfig& cfg,
                         const std::vector<MetricsRow>& rows) {
  const Summary s = summarize(rows);
  std::ostringstream os;
  os << "# mode=" << mode_name(cfg.mode)
     << " algorithm=" << algorithm_name(cfg.algorithm) << " k=" << cfg.k
     << " p=" << cfg.p << " dataset=" << cfg.dataset << "\n";
  os << "# error ratios use per-column IRLS regression, tol 1e-8, max 200 "
        "iterations\n";
  os << std::left << std::setw(12) << "algorithm" << std::setw(8) << "runs"
     << std::setw(10) << "failed" << std::setw(30) << "err_ratio (mean+-std)"
     << std::setw(30) << "seconds (mean+-std)" << "\n";
  os << std::left << std::setw(12) << algorithm_name(cfg.algorithm)
     << std::setw(8) << s.runs << std::setw(10) << s.failures;
  std::ostringstream err, sec;
  err << std::setprecision(6) << s.mean_err << " +- " << s.std_err;
  sec << std::setprecision(4) << s.mean_seconds << " +- " << s.std_seconds;
  os << std::setw(30) << err.str() << std::setw(30) << sec.str() << "\n";
  return os.str();
}

void write_metrics_csv(const std::string& path,
                       const std::vector<MetricsRow>& rows) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error(path + ": cannot open for writing");
  out.precision(17);
  out << "algorithm,seed,err_ratio,wall_seconds,resource_words,failed,error\n";
  for (const MetricsRow& row : rows)
    out << row.algorithm << ',' << row.seed << ',' << row.err_ratio << ','
        << row.wall_seconds << ',' << row.resource_words << ','
        << (row.failed ? 1 : 0) << ',' << row.error << "\n";
}

std::vector<MetricsRow> read_metrics_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(path + ": cannot open");
  std::vector<MetricsRow> rows;
  std::string line;
  std::getline(in, line);  // header
  long line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string field;
    MetricsRow row;
    try {
      std::getline(ss, row.algorithm, ',');
      std::getline(ss, field, ',');
      row.seed = std::stoull(field);
      std::getline(ss, field, ',');
      row.err_ratio = std::stod(field);
      std::getline(ss, field, ',');
      row.wall_seconds = std::stod(field);
      std::getline(ss, field, ',');
      row.resource_words = std::stoll(field);
      std::getline(ss, field, ',');
      row.failed = field == "1";
      std::getline(ss, row.error);
    } catch (const std::exception& e) {
      std::ostringstream os;
      os << path << ":" << line_no << ": malformed metrics row: " << e.what();
      throw std::runtime_error(os.str());
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

void run_and_report(const ExperimentConfig& cfg) {
  const std::vector<MetricsRow> rows = run_experiment(cfg);
  const std::string dir = cfg.output_dir.empty() ? "." : cfg.output_dir;
  std::filesystem::create_directories(dir);
  write_metrics_csv(dir + "/metrics.csv", rows);
  std::ofstream summary(dir + "/summary.txt");
  summary << summary_text(cfg, rows);
}

}  // namespace rcss
