#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace qgmap {

// Malformed or oversized user input. The CLI maps this to exit code 2.
struct input_error : std::runtime_error {
  explicit input_error(const std::string& what) : std::runtime_error(what) {}
};

// 2-bit base alphabet: A=0, C=1, G=2, T=3.
using base_code = std::uint8_t;

// A q-gram encoded base-4, first base in the most significant digit.
using qgram_code = std::uint32_t;

using rng_engine = std::mt19937_64;

// 2*16 bits exactly fill the 32-bit q-gram code word.
inline constexpr unsigned max_qgram_length = 16;

inline base_code random_base(rng_engine& rng) {
  return static_cast<base_code>(rng() & 3u);
}

inline base_code encode_base(char symbol, rng_engine& rng) {
  switch (symbol) {
    case 'A': case 'a': return 0;
    case 'C': case 'c': return 1;
    case 'G': case 'g': return 2;
    case 'T': case 't': return 3;
    case 'N': case 'n': return random_base(rng);
    default:
      throw input_error(std::string("unsupported base symbol '") + symbol + "'");
  }
}

inline char decode_base(base_code code) { return "ACGT"[code & 3u]; }

inline base_code complement_code(base_code code) {
  return static_cast<base_code>(3u - code);
}

inline std::vector<base_code> encode_sequence(std::string_view seq, rng_engine& rng) {
  std::vector<base_code> codes;
  codes.reserve(seq.size());
  for (char c : seq) codes.push_back(encode_base(c, rng));
  return codes;
}

inline std::vector<base_code> reverse_complement(std::span<const base_code> codes) {
  std::vector<base_code> rc(codes.size());
  for (std::size_t i = 0; i < codes.size(); ++i)
    rc[i] = complement_code(codes[codes.size() - 1 - i]);
  return rc;
}

inline std::string reverse_complement(std::string_view seq) {
  std::string rc(seq.size(), ' ');
  for (std::size_t i = 0; i < seq.size(); ++i) {
    char c = seq[seq.size() - 1 - i];
    switch (c) {
      case 'A': case 'a': rc[i] = 'T'; break;
      case 'C': case 'c': rc[i] = 'G'; break;
      case 'G': case 'g': rc[i] = 'C'; break;
      case 'T': case 't': rc[i] = 'A'; break;
      default: rc[i] = 'N'; break;
    }
  }
  return rc;
}

inline qgram_code encode_qgram(std::span<const base_code> window) {
  qgram_code g = 0;
  for (base_code c : window) g = (g << 2) | qgram_code(c & 3u);
  return g;
}

inline std::string decode_qgram(qgram_code g, unsigned q) {
  std::string s(q, 'A');
  for (unsigned t = 0; t < q; ++t)
    s[q - 1 - t] = decode_base(static_cast<base_code>((g >> (2 * t)) & 3u));
  return s;
}

// Buffered reads concatenated at a fixed stride. Read r occupies
// [r*stride, r*stride + length(r)); the tail of each slot is padding.
// valid_qgram_positions lists every text position whose q-gram lies
// entirely inside a single read, so windows never cross a read end or
// touch padding.
struct PackedReadText {
  std::vector<base_code> codes;
  std::uint32_t stride = 0;
  std::uint32_t read_count = 0;
  unsigned q = 0;
  std::vector<std::uint32_t> read_lengths;
  std::vector<std::uint32_t> valid_qgram_positions;

  std::size_t size() const { return codes.size(); }

  std::span<const base_code> read(std::uint32_t r) const {
    return {codes.data() + std::size_t(r) * stride, read_lengths[r]};
  }

  qgram_code qgram_at(std::size_t pos) const {
    return encode_qgram({codes.data() + pos, q});
  }
};

inline PackedReadText pack_encoded_reads(const std::vector<std::vector<base_code>>& reads,
                                         std::uint32_t stride, unsigned q) {
  if (q == 0 || q > max_qgram_length)
    throw input_error("q must be in [1, " + std::to_string(max_qgram_length) + "]");
  PackedReadText text;
  text.stride = stride;
  text.read_count = static_cast<std::uint32_t>(reads.size());
  text.q = q;
  text.codes.assign(std::size_t(stride) * reads.size(), 0);
  text.read_lengths.reserve(reads.size());
  for (std::size_t r = 0; r < reads.size(); ++r) {
    const auto& read = reads[r];
    if (read.size() > stride)
      throw input_error("read of length " + std::to_string(read.size()) +
                        " exceeds stride " + std::to_string(stride));
    const std::size_t base = r * std::size_t(stride);
    std::copy(read.begin(), read.end(), text.codes.begin() + base);
    text.read_lengths.push_back(static_cast<std::uint32_t>(read.size()));
    if (read.size() >= q)
      for (std::size_t p = 0; p + q <= read.size(); ++p)
        text.valid_qgram_positions.push_back(static_cast<std::uint32_t>(base + p));
  }
  return text;
}

inline PackedReadText pack_reads(const std::vector<std::string>& reads,
                                 std::uint32_t stride, unsigned q, rng_engine& rng) {
  std::vector<std::vector<base_code>> encoded;
  encoded.reserve(reads.size());
  for (const auto& r : reads) encoded.push_back(encode_sequence(r, rng));
  return pack_encoded_reads(encoded, stride, q);
}

}  // namespace qgmap
