// Copyright 2026 The sdirng Authors
// SPDX-License-Identifier: Apache-2.0

#include <bit>
#include <cstring>
#include <fstream>

#include "sdirng/error.hpp"
#include "sdirng/protocol.hpp"

namespace sdirng {

namespace {

constexpr char kMagic[4] = {'S', 'D', 'I', 'T'};
constexpr std::uint8_t kVersion = 1;

class Writer {
 public:
  explicit Writer(std::ostream& os) : os_(os) {}
  void u(std::uint64_t v, int bytes) {
    for (int i = 0; i < bytes; ++i) os_.put(static_cast<char>((v >> (8 * i)) & 0xff));
  }
  void f(double v) { u(std::bit_cast<std::uint64_t>(v), 8); }

 private:
  std::ostream& os_;
};

class Reader {
 public:
  explicit Reader(std::istream& is) : is_(is) {}
  std::uint64_t u(int bytes) {
    std::uint64_t v = 0;
    for (int i = 0; i < bytes; ++i) {
      const int c = is_.get();
      if (c == EOF) fail(ErrorCode::Io, "transcript file truncated");
      v |= static_cast<std::uint64_t>(c & 0xff) << (8 * i);
    }
    return v;
  }
  double f() { return std::bit_cast<double>(u(8)); }

 private:
  std::istream& is_;
};

}  // namespace

void save_transcript(const ProtocolConfig& cfg, const ProtocolTranscript& t, const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) fail(ErrorCode::Io, "cannot open " + path.string() + " for writing");
  Writer w(os);
  os.write(kMagic, 4);
  w.u(kVersion, 1);
  w.u(cfg.n, 8);
  w.f(cfg.p_e);
  w.f(cfg.epsilon);
  w.f(cfg.delta);
  w.u(cfg.seed, 8);
  w.u(static_cast<std::uint8_t>(cfg.extractor), 1);
  // run-length labels
  std::vector<std::pair<RoundLabel, std::uint64_t>> runs;
  for (auto l : t.labels) {
    if (runs.empty() || runs.back().first != l)
      runs.emplace_back(l, 1);
    else
      ++runs.back().second;
  }
  w.u(runs.size(), 8);
  for (const auto& [l, len] : runs) {
    w.u(static_cast<std::uint8_t>(l), 1);
    w.u(len, 8);
  }
  w.u(t.z.size(), 8);
  for (const auto& z : t.z) w.u(static_cast<std::uint64_t>(z.a | (z.x << 1)), 1);
  w.u(t.raw.size(), 8);
  for (std::size_t i = 0; i < t.raw.size(); i += 8) {
    std::uint8_t byte = 0;
    for (std::size_t j = 0; j < 8 && i + j < t.raw.size(); ++j) byte |= static_cast<std::uint8_t>((t.raw[i + j] & 1) << j);
    w.u(byte, 1);
  }
  if (!os) fail(ErrorCode::Io, "write failed for " + path.string());
}

TranscriptFile load_transcript(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) fail(ErrorCode::Io, "cannot open " + path.string());
  char magic[4];
  if (!is.read(magic, 4) || std::memcmp(magic, kMagic, 4) != 0)
    fail(ErrorCode::Io, path.string() + " is not a transcript file");
  Reader r(is);
  if (r.u(1) != kVersion) fail(ErrorCode::Io, "unsupported transcript version");
  TranscriptFile out;
  auto& cfg = out.config;
  cfg.n = r.u(8);
  cfg.p_e = r.f();
  cfg.epsilon = r.f();
  cfg.delta = r.f();
  cfg.seed = r.u(8);
  const auto mode = r.u(1);
  if (mode > 1) fail(ErrorCode::Io, "transcript has an unknown extractor mode");
  cfg.extractor = static_cast<ExtractorType>(mode);
  auto& t = out.transcript;
  const auto nruns = r.u(8);
  for (std::uint64_t i = 0; i < nruns; ++i) {
    const auto l = r.u(1);
    const auto len = r.u(8);
    if (l > 1 || len > cfg.n || t.labels.size() + len > cfg.n) fail(ErrorCode::Io, "corrupt label run");
    t.labels.insert(t.labels.end(), len, static_cast<RoundLabel>(l));
  }
  if (t.labels.size() != cfg.n) fail(ErrorCode::Io, "label runs do not cover n rounds");
  const auto ne = r.u(8);
  if (ne > cfg.n) fail(ErrorCode::Io, "corrupt tuple count");
  t.z.resize(ne);
  for (auto& z : t.z) {
    const auto v = r.u(1);
    if (v > 3) fail(ErrorCode::Io, "corrupt tuple");
    z.a = static_cast<std::uint8_t>(v & 1);
    z.x = static_cast<std::uint8_t>((v >> 1) & 1);
    ++t.counts.c[z.a][z.x];
  }
  const auto nr = r.u(8);
  if (nr + ne != cfg.n) fail(ErrorCode::Io, "round counts do not add up to n");
  t.raw.resize(nr);
  for (std::size_t i = 0; i < nr; i += 8) {
    const auto byte = r.u(1);
    for (std::size_t j = 0; j < 8 && i + j < nr; ++j) t.raw[i + j] = static_cast<std::uint8_t>((byte >> j) & 1);
  }
  if (is.peek() != EOF) fail(ErrorCode::Io, "trailing bytes in transcript file");
  std::uint64_t raw_labels = 0;
  for (auto l : t.labels) raw_labels += l == RoundLabel::RawKey;
  if (raw_labels != nr) fail(ErrorCode::Io, "labels disagree with the raw-bit count");
  return out;
}

}  // namespace sdirng
