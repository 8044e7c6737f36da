// Copyright 2026 The sdirng Authors
// SPDX-License-Identifier: Apache-2.0

#include "sdirng/extractor.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <fstream>
#include <mutex>
#include <string>
#include <thread>

#include "sdirng/error.hpp"

namespace sdirng {

ExtractorFunction::ExtractorFunction(unsigned n_r, unsigned m, std::vector<std::uint32_t> table,
                                     std::uint64_t seed)
    : n_r_(n_r), m_(m), table_(std::move(table)), seed_(seed) {
  require(n_r >= 1 && n_r <= kMaxExtractorInput, ErrorCode::SizeLimit,
          "extractor input length must be in [1, " + std::to_string(kMaxExtractorInput) + "]");
  require(m >= 1 && m <= n_r, ErrorCode::InvalidArgument, "extractor output length must be in [1, n_r]");
  require(table_.size() == (std::size_t{1} << n_r), ErrorCode::DimensionMismatch,
          "extractor table must have 2^n_r entries");
  const std::uint32_t limit = std::uint32_t{1} << m;
  for (auto w : table_) require(w < limit, ErrorCode::InvalidArgument, "extractor table entry out of range");
}

ExtractorFunction ExtractorFunction::parity(unsigned n_r) {
  require(n_r >= 1 && n_r <= kMaxExtractorInput, ErrorCode::SizeLimit, "parity input length out of range");
  std::vector<std::uint32_t> t(std::size_t{1} << n_r);
  for (std::size_t s = 0; s < t.size(); ++s) t[s] = static_cast<std::uint32_t>(std::popcount(s) & 1);
  return ExtractorFunction(n_r, 1, std::move(t));
}

ExtractorFunction ExtractorFunction::constant(unsigned n_r, unsigned m, std::uint32_t value) {
  require(n_r >= 1 && n_r <= kMaxExtractorInput, ErrorCode::SizeLimit, "constant input length out of range");
  return ExtractorFunction(n_r, m, std::vector<std::uint32_t>(std::size_t{1} << n_r, value));
}

std::uint32_t ExtractorFunction::apply(std::span<const std::uint8_t> bits) const {
  require(bits.size() == n_r_, ErrorCode::DimensionMismatch, "extractor input has wrong length");
  std::uint32_t r = 0;
  for (unsigned i = 0; i < n_r_; ++i) {
    require(bits[i] <= 1, ErrorCode::InvalidArgument, "extractor input must be bits");
    r |= std::uint32_t{bits[i]} << i;
  }
  return table_[r];
}

void fwht(std::span<std::int64_t> v) {
  const std::size_t n = v.size();
  require(n > 0 && (n & (n - 1)) == 0, ErrorCode::DimensionMismatch, "WHT length must be a power of two");
  for (std::size_t h = 1; h < n; h <<= 1)
    for (std::size_t i = 0; i < n; i += h << 1)
      for (std::size_t j = i; j < i + h; ++j) {
        const std::int64_t x = v[j], y = v[j + h];
        v[j] = x + y;
        v[j + h] = x - y;
      }
}

double BiasSpectrum::at(std::uint32_t k, std::uint32_t r) const {
  return std::ldexp(static_cast<double>(scaled_at(k, r)), -static_cast<int>(n_r + m));
}

namespace {

void word_indicator(const ExtractorFunction& g, std::uint32_t k, std::vector<std::int64_t>& buf) {
  const auto& t = g.table();
  for (std::size_t s = 0; s < t.size(); ++s) buf[s] = t[s] == k ? 1 : 0;
  fwht(buf);
  const std::int64_t scale = std::int64_t{1} << g.m();
  for (auto& x : buf) x *= scale;
  buf[0] -= std::int64_t{1} << g.n_r();
}

}  // namespace

BiasSpectrum bias_spectrum(const ExtractorFunction& g) {
  require(g.n_r() + g.m() <= 28, ErrorCode::SizeLimit, "full bias spectrum too large to store");
  BiasSpectrum b;
  b.n_r = g.n_r();
  b.m = g.m();
  const std::size_t len = std::size_t{1} << g.n_r();
  b.scaled.resize(len << g.m());
  std::vector<std::int64_t> buf(len);
  for (std::uint32_t k = 0; k < (std::uint32_t{1} << g.m()); ++k) {
    word_indicator(g, k, buf);
    std::copy(buf.begin(), buf.end(), b.scaled.begin() + static_cast<std::ptrdiff_t>(std::size_t{k} * len));
  }
  return b;
}

PropertyCheck check_property(ExtractorFunction& g, unsigned workers) {
  const unsigned n = g.n_r(), m = g.m();
  const std::uint32_t words = std::uint32_t{1} << m;
  using i128 = __int128;
  const i128 n4 = static_cast<i128>(n) * n * n * n;
  const i128 limit = n4 << (n + m);  // V^2 <= n^4 2^{n+m}
  const std::size_t len = std::size_t{1} << n;
  const std::size_t mem_cap = std::max<std::size_t>(1, (std::size_t{1} << 30) / (len * sizeof(std::int64_t)));
  workers = static_cast<unsigned>(std::clamp<std::size_t>(workers, 1, std::min<std::size_t>(words, mem_cap)));

  std::atomic<std::uint32_t> first_bad{words};
  std::atomic<std::uint32_t> next{0};
  std::mutex mu;
  PropertyCheck best;
  best.bound = static_cast<double>(n) * n * std::sqrt(std::ldexp(1.0, static_cast<int>(n) - static_cast<int>(m)));
  std::int64_t best_abs = -1;
  std::uint32_t bad_r = 0;
  std::int64_t bad_abs = 0;

  auto work = [&] {
    std::vector<std::int64_t> buf(len);
    while (true) {
      const std::uint32_t k = next.fetch_add(1);
      if (k >= words || k > first_bad.load()) return;
      word_indicator(g, k, buf);
      std::int64_t local_abs = -1;
      std::uint32_t local_r = 0;
      bool bad = false;
      for (std::size_t r = 0; r < len; ++r) {
        const std::int64_t v = buf[r] < 0 ? -buf[r] : buf[r];
        if (static_cast<i128>(v) * v > limit) {
          bad = true;
          local_r = static_cast<std::uint32_t>(r);
          local_abs = v;
          break;
        }
        if (v > local_abs) {
          local_abs = v;
          local_r = static_cast<std::uint32_t>(r);
        }
      }
      std::lock_guard<std::mutex> lock(mu);
      if (bad) {
        if (k < first_bad.load()) {
          first_bad.store(k);
          bad_r = local_r;
          bad_abs = local_abs;
        }
      } else if (local_abs > best_abs || (local_abs == best_abs && k < best.k)) {
        best_abs = local_abs;
        best.k = k;
        best.r = local_r;
      }
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  const double scale = std::ldexp(1.0, -static_cast<int>(m));
  if (first_bad.load() < words) {
    best.holds = false;
    best.k = first_bad.load();
    best.r = bad_r;
    best.value = static_cast<double>(bad_abs) * scale;
  } else {
    best.holds = true;
    best.value = static_cast<double>(best_abs) * scale;
  }
  g.set_verified(best.holds);
  return best;
}

Construction construct_random_extractor(unsigned n_r, unsigned m, std::size_t max_attempts,
                                        std::uint64_t seed, unsigned workers) {
  require(n_r >= 1 && n_r <= kMaxExtractorInput, ErrorCode::SizeLimit,
          "extractor input length must be in [1, " + std::to_string(kMaxExtractorInput) + "]");
  require(m >= 1 && m <= n_r, ErrorCode::InvalidArgument, "extractor output length must be in [1, n_r]");
  require(max_attempts >= 1, ErrorCode::InvalidArgument, "need at least one attempt");
  const std::uint64_t words = std::uint64_t{1} << m;
  for (std::size_t attempt = 1; attempt <= max_attempts; ++attempt) {
    Rng rng(derive_seed(seed, attempt));
    std::vector<std::uint32_t> t(std::size_t{1} << n_r);
    for (auto& w : t) w = static_cast<std::uint32_t>(rng.below(words));
    ExtractorFunction g(n_r, m, std::move(t), seed);
    if (check_property(g, workers).holds) return {std::move(g), attempt};
  }
  fail(ErrorCode::Exhausted, "no extractor satisfying the bias bound after " + std::to_string(max_attempts) +
                                 " attempts (n_r=" + std::to_string(n_r) + ", m=" + std::to_string(m) + ")");
}

std::uint8_t xor_extract(std::span<const std::uint8_t> bits) {
  std::uint8_t x = 0;
  for (auto b : bits) x ^= static_cast<std::uint8_t>(b & 1);
  return x;
}

namespace {

constexpr char kMagic[4] = {'S', 'D', 'I', 'X'};
constexpr std::uint8_t kVersion = 1;

void put_le(std::ostream& os, std::uint64_t v, int bytes) {
  for (int i = 0; i < bytes; ++i) os.put(static_cast<char>((v >> (8 * i)) & 0xff));
}

std::uint64_t get_le(std::istream& is, int bytes) {
  std::uint64_t v = 0;
  for (int i = 0; i < bytes; ++i) {
    const int c = is.get();
    if (c == EOF) fail(ErrorCode::Io, "extractor file truncated");
    v |= static_cast<std::uint64_t>(c & 0xff) << (8 * i);
  }
  return v;
}

}  // namespace

void save_extractor(const ExtractorFunction& g, const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) fail(ErrorCode::Io, "cannot open " + path.string() + " for writing");
  os.write(kMagic, 4);
  put_le(os, kVersion, 1);
  put_le(os, g.n_r(), 4);
  put_le(os, g.m(), 4);
  put_le(os, g.verified() ? 1 : 0, 1);
  put_le(os, g.seed(), 8);
  for (auto w : g.table()) put_le(os, w, 4);
  if (!os) fail(ErrorCode::Io, "write failed for " + path.string());
}

ExtractorFunction load_extractor(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) fail(ErrorCode::Io, "cannot open " + path.string());
  char magic[4];
  if (!is.read(magic, 4) || !std::equal(magic, magic + 4, kMagic))
    fail(ErrorCode::Io, path.string() + " is not an extractor file");
  if (get_le(is, 1) != kVersion) fail(ErrorCode::Io, "unsupported extractor file version");
  const auto n_r = static_cast<unsigned>(get_le(is, 4));
  const auto m = static_cast<unsigned>(get_le(is, 4));
  const bool verified = get_le(is, 1) != 0;
  const std::uint64_t seed = get_le(is, 8);
  if (n_r < 1 || n_r > kMaxExtractorInput) fail(ErrorCode::Io, "extractor file has invalid n_r");
  std::vector<std::uint32_t> t(std::size_t{1} << n_r);
  for (auto& w : t) w = static_cast<std::uint32_t>(get_le(is, 4));
  if (is.peek() != EOF) fail(ErrorCode::Io, "trailing bytes in extractor file");
  ExtractorFunction g(n_r, m, std::move(t), seed);
  g.set_verified(verified);
  return g;
}

}  // namespace sdirng
