#pragma once

#include <cstdint>
#include <initializer_list>
#include <numeric>
#include <vector>

namespace coltype::rng {

// Splitmix64 finalizer. All sampling in the pipeline is built on this one
// mixing function so exports are byte-reproducible across platforms; only
// unsigned 64-bit arithmetic is used.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ULL;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBULL;
  z ^= z >> 31;
  return z;
}

constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;

// Stream tags, part of the reproducibility contract: schema sampling draws
// from key(base_seed, epoch, kStreamSchemaSample), the cells of one column
// from key(base_seed, epoch, kStreamTableCells, table_index, column_index).
constexpr std::uint64_t kStreamSchemaSample = 0x5C;
constexpr std::uint64_t kStreamTableCells = 0xCE;

// Folds a list of words (seed, epoch, table index, ...) into one stream key.
inline std::uint64_t derive_key(std::initializer_list<std::uint64_t> words) {
  std::uint64_t h = 0x243F6A8885A308D3ULL;
  for (std::uint64_t w : words) h = mix64(h ^ mix64(w + kGamma));
  return h;
}

// Counter-based splitmix64 stream. Each draw advances the counter by the
// golden gamma and finalizes it.
class Stream {
 public:
  explicit Stream(std::uint64_t key) : state_(key) {}

  std::uint64_t next() {
    state_ += kGamma;
    return mix64(state_);
  }

  // Unbiased-enough bounded draw via the multiply-shift trick; n >= 1.
  std::uint64_t next_below(std::uint64_t n) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next()) * static_cast<unsigned __int128>(n)) >> 64);
  }

  // Uniform double in [0, 1) with 53 random bits.
  double next_unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t state_;
};

// First m positions of a Fisher-Yates shuffle of [0, n); result is in draw
// order, so m == n yields a full deterministic shuffle.
inline std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t m,
                                                           Stream& stream) {
  std::vector<std::size_t> indices(n);
  std::iota(indices.begin(), indices.end(), std::size_t{0});
  for (std::size_t i = 0; i < m && i < n; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(stream.next_below(n - i));
    std::swap(indices[i], indices[j]);
  }
  indices.resize(m < n ? m : n);
  return indices;
}

}  // namespace coltype::rng

namespace coltype {

// Determinism contract for every "randomly select" in the pipeline: the same
// (base_seed, epoch) always reproduces the same draws, and distinct epochs
// give independent streams.
struct SamplerSeed {
  std::uint64_t base_seed = 0;
  std::uint64_t epoch = 0;
};

}  // namespace coltype
