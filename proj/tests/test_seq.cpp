#include <catch2/catch_amalgamated.hpp>

#include "qgmap/seq.hpp"

using namespace qgmap;

TEST_CASE("base encoding is the fixed 2-bit alphabet") {
  rng_engine rng(1);
  CHECK(encode_base('A', rng) == 0);
  CHECK(encode_base('C', rng) == 1);
  CHECK(encode_base('G', rng) == 2);
  CHECK(encode_base('T', rng) == 3);
  CHECK(encode_base('c', rng) == 1);
  CHECK(encode_base('t', rng) == 3);
}

TEST_CASE("N draws from the seeded source, reproducibly") {
  rng_engine a(42), b(42);
  for (int i = 0; i < 100; ++i) {
    const base_code x = encode_base('N', a);
    CHECK(x <= 3);
    CHECK(x == encode_base('N', b));
  }
}

TEST_CASE("non-IUPAC symbols are rejected") {
  rng_engine rng(1);
  CHECK_THROWS_AS(encode_base('X', rng), input_error);
  CHECK_THROWS_AS(encode_base('-', rng), input_error);
}

TEST_CASE("q-gram encoding puts the first base in the top digit") {
  rng_engine rng(1);
  auto enc = [&](std::string_view s) { return encode_qgram(encode_sequence(s, rng)); };
  CHECK(enc("AC") == 1);
  CHECK(enc("GT") == 11);
  CHECK(enc("AAAAAAAAAAAAAAAA") == 0);
  CHECK(enc("CT") == 0b0111);
}

TEST_CASE("q-gram codes round-trip for random windows up to q=16") {
  std::mt19937_64 rng(7);
  for (int iter = 0; iter < 200; ++iter) {
    const unsigned q = 1 + unsigned(rng() % max_qgram_length);
    std::vector<base_code> window(q);
    for (auto& c : window) c = base_code(rng() & 3u);
    const qgram_code g = encode_qgram(window);
    std::vector<base_code> back(q);
    for (unsigned t = 0; t < q; ++t)
      back[q - 1 - t] = base_code((g >> (2 * t)) & 3u);
    CHECK(back == window);
    CHECK(decode_qgram(g, q).size() == q);
  }
}

TEST_CASE("pack_reads places reads at the stride and excludes boundary q-grams") {
  rng_engine rng(1);
  const auto text = pack_reads({"ACGT", "TACG"}, 4, 2, rng);
  CHECK(text.codes.size() == 8);
  CHECK(text.read_count == 2);
  CHECK(text.valid_qgram_positions == std::vector<std::uint32_t>{0, 1, 2, 4, 5, 6});
}

TEST_CASE("pack_reads marks padding positions invalid") {
  rng_engine rng(1);
  const auto text = pack_reads({"AC"}, 4, 2, rng);
  CHECK(text.codes.size() == 4);
  CHECK(text.valid_qgram_positions == std::vector<std::uint32_t>{0});
}

TEST_CASE("packing no reads yields an empty text") {
  rng_engine rng(1);
  const auto text = pack_reads({}, 4, 2, rng);
  CHECK(text.codes.empty());
  CHECK(text.valid_qgram_positions.empty());
}

TEST_CASE("reads longer than the stride are rejected") {
  rng_engine rng(1);
  CHECK_THROWS_AS(pack_reads({"ACGTA"}, 4, 2, rng), input_error);
}

TEST_CASE("valid positions never reach past their read") {
  std::mt19937_64 gen(11);
  for (int iter = 0; iter < 50; ++iter) {
    const unsigned q = 1 + unsigned(gen() % 8);
    std::vector<std::string> reads(gen() % 6);
    std::uint32_t m = 1;
    for (auto& r : reads) {
      r.resize(gen() % 12);
      for (auto& c : r) c = "ACGT"[gen() & 3u];
      m = std::max<std::uint32_t>(m, std::uint32_t(r.size()));
    }
    rng_engine rng(5);
    const auto text = pack_reads(reads, m, q, rng);
    for (std::uint32_t p : text.valid_qgram_positions) {
      const std::uint32_t r = p / m;
      CHECK(p % m + q <= text.read_lengths[r]);
    }
  }
}

TEST_CASE("packing is bit-identical under a fixed seed") {
  const std::vector<std::string> reads{"ACGNNTA", "NNNN", "GGGTACGT"};
  rng_engine a(99), b(99);
  const auto ta = pack_reads(reads, 8, 3, a);
  const auto tb = pack_reads(reads, 8, 3, b);
  CHECK(ta.codes == tb.codes);
  CHECK(ta.valid_qgram_positions == tb.valid_qgram_positions);
}

TEST_CASE("reverse complement round-trips") {
  std::mt19937_64 gen(3);
  std::vector<base_code> codes(37);
  for (auto& c : codes) c = base_code(gen() & 3u);
  const auto rc = reverse_complement(std::span<const base_code>(codes));
  const auto back = reverse_complement(std::span<const base_code>(rc));
  CHECK(back == codes);
  CHECK(reverse_complement(std::string_view("ACGTN")) == "NACGT");
}
