#pragma once
//
// Counter-based splittable 64-bit generator. Every randomized component takes
// an explicit SeedStream; sub-streams derived with derive() are independent,
// so streaming merges, servers and experiment cells can share one master seed
// without coordination. Output is pure 64-bit integer arithmetic and therefore
// identical across platforms.
//

#include <cstdint>

namespace rcss {

class SeedStream {
 public:
  explicit SeedStream(std::uint64_t seed) : key_(seed) {}

  // i-th output is mix(key + i*gamma); no hidden state beyond the counter.
  std::uint64_t next_u64() {
    counter_ += kGamma;
    return mix(key_ + counter_);
  }

  // uniform in [0, 1), 53-bit resolution
  double next_unit() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // uniform in (0, 1); zero draws are resampled
  double next_open_unit() {
    double u = next_unit();
    while (u == 0.0) u = next_unit();
    return u;
  }

  // uniform integer in [0, n), rejection sampled to avoid modulo bias
  std::uint64_t next_below(std::uint64_t n) {
    const std::uint64_t limit = n * ((~std::uint64_t{0}) / n);
    std::uint64_t x = next_u64();
    while (x >= limit) x = next_u64();
    return x % n;
  }

  bool next_bool() { return (next_u64() & 1u) != 0; }

  // Independent child stream; does not advance this stream.
  SeedStream derive(std::uint64_t tag) const {
    return SeedStream(mix(key_ ^ mix(tag + kDeriveSalt)));
  }

  std::uint64_t key() const { return key_; }

 private:
  static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ull;
  static constexpr std::uint64_t kDeriveSalt = 0xD1B54A32D192ED03ull;

  static std::uint64_t mix(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ull;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBull;
    z ^= z >> 31;
    return z;
  }

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

// Derivation tags shared by the streaming and distributed pipelines. Keeping
// them in one place makes the s=1 protocol run and the single-batch stream
// consume identical sub-streams.
namespace seed_tag {
constexpr std::uint64_t kSketch = 1;
constexpr std::uint64_t kCoreset = 2;
constexpr std::uint64_t kCss = 3;
constexpr std::uint64_t kBaseline = 4;
constexpr std::uint64_t kPermute = 5;
constexpr std::uint64_t kEmbed = 6;
constexpr std::uint64_t kSample = 7;
constexpr std::uint64_t kPool = 8;
}  // namespace seed_tag

}  // namespace rcss
