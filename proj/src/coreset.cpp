#include "rcss/coreset.hpp"

#include <cmath>
#include <cstring>
#include <istream>
#include <ostream>

namespace rcss {

WeightedColumnSet WeightedColumnSet::pass_through(Matrix sketched,
                                                  Matrix originals,
                                                  std::vector<Index> indices,
                                                  double p) {
  require(sketched.cols() == originals.cols(),
          "pass_through: sketched/original column mismatch");
  require(static_cast<size_t>(sketched.cols()) == indices.size(),
          "pass_through: index count mismatch");
  WeightedColumnSet set;
  set.weights = Vector::Ones(sketched.cols());
  set.sketched = std::move(sketched);
  set.originals = std::move(originals);
  set.global_indices = std::move(indices);
  set.p = p;
  return set;
}

WeightedColumnSet build_strong_coreset(const WeightedColumnSet& in, int t_c,
                                       SeedStream stream) {
  require(!in.empty(), "build_strong_coreset: empty input");
  const LewisWeights lw = lewis_weights(in.sketched.transpose(), in.p);
  const LewisSample sample = lewis_sample(lw, t_c, stream);

  WeightedColumnSet out;
  out.p = in.p;
  out.seed_lineage = stream.key();
  out.sketched.resize(in.sketched.rows(), t_c);
  out.originals.resize(in.originals.rows(), t_c);
  out.global_indices.resize(static_cast<size_t>(t_c));
  out.weights.resize(t_c);
  for (int j = 0; j < t_c; ++j) {
    const Index src = sample.indices[static_cast<size_t>(j)];
    const double w = sample.weights(j);
    out.sketched.col(j) = in.sketched.col(src) * w;
    out.originals.col(j) = in.originals.col(src);
    out.global_indices[static_cast<size_t>(j)] =
        in.global_indices[static_cast<size_t>(src)];
    out.weights(j) = in.weights(src) * w;
  }
  return out;
}

WeightedColumnSet build_strong_coreset(const Matrix& sketched,
                                       const Matrix& originals,
                                       std::vector<Index> global_indices,
                                       double p, int t_c, SeedStream stream) {
  return build_strong_coreset(
      WeightedColumnSet::pass_through(sketched, originals,
                                      std::move(global_indices), p),
      t_c, stream);
}

WeightedColumnSet reduce_to_coreset(const WeightedColumnSet& in, int t_c,
                                    SeedStream stream) {
  if (in.cols() <= t_c) return in;
  return build_strong_coreset(in, t_c, stream);
}

WeightedColumnSet concat_sets(const WeightedColumnSet& a,
                              const WeightedColumnSet& b) {
  if (a.empty()) return b;
  if (b.empty()) return a;
  require(a.p == b.p, "concat_sets: p mismatch");
  require(a.sketched.rows() == b.sketched.rows() &&
              a.originals.rows() == b.originals.rows(),
          "concat_sets: dimension mismatch");
  WeightedColumnSet out;
  out.p = a.p;
  const int m = a.cols() + b.cols();
  out.sketched.resize(a.sketched.rows(), m);
  out.sketched << a.sketched, b.sketched;
  out.originals.resize(a.originals.rows(), m);
  out.originals << a.originals, b.originals;
  out.global_indices = a.global_indices;
  out.global_indices.insert(out.global_indices.end(), b.global_indices.begin(),
                            b.global_indices.end());
  out.weights.resize(m);
  out.weights << a.weights, b.weights;
  return out;
}

WeightedColumnSet merge_coresets(const WeightedColumnSet& a,
                                 const WeightedColumnSet& b, int t_c,
                                 SeedStream stream) {
  return reduce_to_coreset(concat_sets(a, b), t_c, stream);
}

int boosted_coreset_size(int t_c, double delta) {
  require(delta > 0.0 && delta <= 1.0, "boosted_coreset_size: bad delta");
  const int factor =
      std::max(1, static_cast<int>(std::ceil(std::log2(1.0 / delta))));
  return t_c * factor;
}

namespace {

constexpr std::uint32_t kMagic = 0x52435353;  // "RCSS"
constexpr std::uint32_t kVersion = 1;

template <typename T>
void put(std::ostream& os, const T& v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::istream& is) {
  T v{};
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!is) throw std::runtime_error("column set record: truncated input");
  return v;
}

}  // namespace

void write_column_set(std::ostream& os, const WeightedColumnSet& set) {
  put(os, kMagic);
  put(os, kVersion);
  put(os, static_cast<std::uint64_t>(set.sketched.rows()));
  put(os, static_cast<std::uint64_t>(set.originals.rows()));
  put(os, static_cast<std::uint64_t>(set.cols()));
  put(os, set.p);
  put(os, set.seed_lineage);
  for (Index idx : set.global_indices) put(os, idx);
  for (int j = 0; j < set.cols(); ++j) put(os, set.weights(j));
  for (int j = 0; j < set.cols(); ++j)
    for (int i = 0; i < set.sketched.rows(); ++i) put(os, set.sketched(i, j));
  for (int j = 0; j < set.cols(); ++j)
    for (int i = 0; i < set.originals.rows(); ++i) put(os, set.originals(i, j));
}

WeightedColumnSet read_column_set(std::istream& is) {
  if (get<std::uint32_t>(is) != kMagic)
    throw std::runtime_error("column set record: bad magic");
  if (get<std::uint32_t>(is) != kVersion)
    throw std::runtime_error("column set record: unsupported version");
  const auto t_s = static_cast<Eigen::Index>(get<std::uint64_t>(is));
  const auto d = static_cast<Eigen::Index>(get<std::uint64_t>(is));
  const auto m = static_cast<Eigen::Index>(get<std::uint64_t>(is));
  WeightedColumnSet set;
  set.p = get<double>(is);
  set.seed_lineage = get<std::uint64_t>(is);
  set.global_indices.resize(static_cast<size_t>(m));
  for (auto& idx : set.global_indices) idx = get<Index>(is);
  set.weights.resize(m);
  for (Eigen::Index j = 0; j < m; ++j) set.weights(j) = get<double>(is);
  set.sketched.resize(t_s, m);
  for (Eigen::Index j = 0; j < m; ++j)
    for (Eigen::Index i = 0; i < t_s; ++i) set.sketched(i, j) = get<double>(is);
  set.originals.resize(d, m);
  for (Eigen::Index j = 0; j < m; ++j)
    for (Eigen::Index i = 0; i < d; ++i) set.originals(i, j) = get<double>(is);
  return set;
}

}  // namespace rcss
