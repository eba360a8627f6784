#pragma once

#include <cstdint>
#include <cstring>
#include <fstream>
#include <span>
#include <string>
#include <vector>

#include "mrfq/errors.hpp"
#include "mrfq/polynomial.hpp"

namespace mrfq {

// M assignments in {-1,+1}^n, bit-packed one bit per site (+1 -> 1, -1 -> 0).
// The generating seed is recorded so every experiment replays.
class SampleSet {
 public:
  SampleSet() = default;

  SampleSet(int n, std::uint64_t seed) : n_(n), seed_(seed) {
    if (n < 1) throw InvalidInput("sample dimension must be positive");
    words_per_row_ = (static_cast<std::size_t>(n) + 63) / 64;
  }

  int n() const { return n_; }
  std::size_t size() const { return count_; }
  std::uint64_t seed() const { return seed_; }

  void append(std::span<const std::int8_t> z) {
    if (static_cast<int>(z.size()) != n_) {
      throw InvalidInput("sample length mismatch");
    }
    std::size_t base = bits_.size();
    bits_.resize(base + words_per_row_, 0);
    for (int i = 0; i < n_; ++i) {
      if (z[i] != 1 && z[i] != -1) throw InvalidInput("sample entries must be +-1");
      if (z[i] == 1) bits_[base + i / 64] |= std::uint64_t{1} << (i % 64);
    }
    ++count_;
  }

  // Value of site j (1-based) in sample m (0-based).
  std::int8_t get(std::size_t m, int j) const {
    std::size_t bit = static_cast<std::size_t>(j - 1);
    std::uint64_t w = bits_[m * words_per_row_ + bit / 64];
    return (w >> (bit % 64)) & 1 ? std::int8_t{1} : std::int8_t{-1};
  }

  Assignment row(std::size_t m) const {
    Assignment z(n_);
    for (int j = 1; j <= n_; ++j) z[j - 1] = get(m, j);
    return z;
  }

  // First word of row m; for n <= 64 this is the whole row, bit i-1 = site i.
  std::uint64_t row_word(std::size_t m) const { return bits_[m * words_per_row_]; }

  static constexpr std::uint32_t kMagic = 0x4D524653;  // "MRFS"

  void save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InvalidInput("cannot open sample file for writing: " + path);
    std::uint32_t magic = kMagic;
    std::uint32_t n32 = static_cast<std::uint32_t>(n_);
    std::uint64_t m64 = count_;
    out.write(reinterpret_cast<const char*>(&magic), sizeof magic);
    out.write(reinterpret_cast<const char*>(&n32), sizeof n32);
    out.write(reinterpret_cast<const char*>(&m64), sizeof m64);
    out.write(reinterpret_cast<const char*>(&seed_), sizeof seed_);
    out.write(reinterpret_cast<const char*>(bits_.data()),
              static_cast<std::streamsize>(bits_.size() * sizeof(std::uint64_t)));
  }

  static SampleSet load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidInput("cannot open sample file: " + path);
    std::uint32_t magic = 0, n32 = 0;
    std::uint64_t m64 = 0, seed = 0;
    in.read(reinterpret_cast<char*>(&magic), sizeof magic);
    in.read(reinterpret_cast<char*>(&n32), sizeof n32);
    in.read(reinterpret_cast<char*>(&m64), sizeof m64);
    in.read(reinterpret_cast<char*>(&seed), sizeof seed);
    if (!in || magic != kMagic) throw InvalidInput("bad sample file header");
    SampleSet s(static_cast<int>(n32), seed);
    s.count_ = m64;
    s.bits_.resize(s.words_per_row_ * m64);
    in.read(reinterpret_cast<char*>(s.bits_.data()),
            static_cast<std::streamsize>(s.bits_.size() * sizeof(std::uint64_t)));
    if (!in) throw InvalidInput("truncated sample file");
    return s;
  }

  // Rows of +-1 for interoperability with other tools.
  void export_csv(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw InvalidInput("cannot open csv file for writing: " + path);
    for (std::size_t m = 0; m < count_; ++m) {
      for (int j = 1; j <= n_; ++j) {
        if (j > 1) out << ',';
        out << static_cast<int>(get(m, j));
      }
      out << '\n';
    }
  }

 private:
  int n_ = 0;
  std::uint64_t seed_ = 0;
  std::size_t count_ = 0;
  std::size_t words_per_row_ = 0;
  std::vector<std::uint64_t> bits_;
};

}  // namespace mrfq
