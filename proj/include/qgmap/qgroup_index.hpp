#pragma once

#include <atomic>
#include <bit>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <sstream>
#include <vector>

#include "qgmap/parallel.hpp"
#include "qgmap/seq.hpp"

namespace qgmap {

// Occurrence index over the 4^q q-gram space, grouped into machine words of
// width w. Four arrays:
//   occupancy    one bit per q-gram, telling whether it occurs at all
//   group_starts per group, base offset into occ_starts (sentinel appended;
//                optionally sampled to every second group)
//   occ_starts   per occurring q-gram, start of its slice of positions
//                (sentinel appended)
//   positions    all occurrence positions, bucketed by numeric q-gram order
// Unlike a flat 4^q-entry address table, the per-q-gram offsets exist only
// for q-grams that actually occur, which is what keeps the index small for
// large q. Lookup cost stays constant per returned position.
template <class GroupWord = std::uint32_t>
class QGroupIndex {
public:
  using group_word = GroupWord;
  static constexpr unsigned group_width = std::numeric_limits<GroupWord>::digits;

  QGroupIndex() = default;

  unsigned q() const { return q_; }
  bool sampled() const { return sampled_; }
  std::size_t group_count() const { return occupancy_.size(); }
  std::size_t occurrence_count() const { return positions_.size(); }
  std::size_t distinct_qgram_count() const { return occ_starts_.empty() ? 0 : occ_starts_.size() - 1; }

  const std::vector<GroupWord>& occupancy() const { return occupancy_; }
  const std::vector<std::uint32_t>& group_starts() const { return group_starts_; }
  const std::vector<std::uint32_t>& occ_starts() const { return occ_starts_; }
  const std::vector<std::uint32_t>& positions() const { return positions_; }

  // Half-open interval of positions holding g's occurrences, or nothing if
  // g does not occur. One rank computation, no per-group branches beyond
  // the all-zero short-circuit.
  std::optional<std::pair<std::uint32_t, std::uint32_t>> index_pair(qgram_code g) const {
    const std::size_t i = g / group_width;
    const unsigned j = g % group_width;
    const GroupWord word = occupancy_[i];
    if (word == 0 || !((word >> j) & GroupWord(1))) return std::nullopt;
    const std::uint32_t base = group_base(i) + rank_below(word, j);
    return std::make_pair(occ_starts_[base], occ_starts_[base + 1]);
  }

  std::span<const std::uint32_t> occurrences(qgram_code g) const {
    const auto pair = index_pair(g);
    if (!pair) return {};
    return {positions_.data() + pair->first, pair->second - pair->first};
  }

  // Lengths and cheap checksums of the four arrays, for test tooling.
  std::string debug_summary() const {
    auto fold = [](auto const& v) {
      std::uint64_t h = 1469598103934665603ull;
      for (auto x : v) { h ^= std::uint64_t(x); h *= 1099511628211ull; }
      return h;
    };
    std::ostringstream os;
    os << "occupancy len=" << occupancy_.size() << " sum=" << fold(occupancy_) << '\n'
       << "group_starts len=" << group_starts_.size() << " sum=" << fold(group_starts_) << '\n'
       << "occ_starts len=" << occ_starts_.size() << " sum=" << fold(occ_starts_) << '\n'
       << "positions len=" << positions_.size() << " sum=" << fold(positions_) << '\n';
    return os.str();
  }

  static std::uint32_t rank_below(GroupWord word, unsigned j) {
    const GroupWord mask = (j == 0) ? GroupWord(0) : GroupWord(~GroupWord(0) >> (group_width - j));
    return static_cast<std::uint32_t>(std::popcount(static_cast<GroupWord>(word & mask)));
  }

  template <class W>
  friend QGroupIndex<W> build_qgroup_index(const PackedReadText&, unsigned);
  template <class W>
  friend QGroupIndex<W> sample_group_starts(const QGroupIndex<W>&);

private:
  std::uint32_t group_base(std::size_t i) const {
    if (!sampled_) return group_starts_[i];
    const std::uint32_t even = group_starts_[i / 2];
    if ((i & 1) == 0) return even;
    return even + static_cast<std::uint32_t>(std::popcount(occupancy_[i - 1]));
  }

  std::vector<GroupWord> occupancy_;
  std::vector<std::uint32_t> group_starts_;
  std::vector<std::uint32_t> occ_starts_;
  std::vector<std::uint32_t> positions_;
  unsigned q_ = 0;
  bool sampled_ = false;
};

struct GroupCoords {
  std::size_t group;
  unsigned bit;
};

inline GroupCoords group_and_bit(qgram_code g, unsigned width) {
  return {g / width, static_cast<unsigned>(g % width)};
}

template <class GroupWord>
std::uint32_t grouprank(std::span<const GroupWord> occupancy, std::size_t group, unsigned bit) {
  return QGroupIndex<GroupWord>::rank_below(occupancy[group], bit);
}

// Six data-parallel passes: occupancy scatter, per-group popcounts, scan,
// per-q-gram count scatter, scan, position scatter. Only positions listed
// in text.valid_qgram_positions are indexed. Position order within one
// q-gram's interval is unspecified.
template <class GroupWord = std::uint32_t>
QGroupIndex<GroupWord> build_qgroup_index(const PackedReadText& text, unsigned threads = 1) {
  constexpr unsigned width = QGroupIndex<GroupWord>::group_width;
  if (text.q == 0 || text.q > max_qgram_length)
    throw input_error("q must be in [1, " + std::to_string(max_qgram_length) + "]");

  QGroupIndex<GroupWord> index;
  index.q_ = text.q;
  const std::size_t qgram_space = std::size_t(1) << (2 * text.q);
  const std::size_t ngroups = (qgram_space + width - 1) / width;
  const auto& valid = text.valid_qgram_positions;

  index.occupancy_.assign(ngroups, 0);
  par::parallel_for(valid.size(), threads, [&](std::size_t b, std::size_t e) {
    for (std::size_t t = b; t < e; ++t) {
      const auto [i, j] = group_and_bit(text.qgram_at(valid[t]), width);
      std::atomic_ref<GroupWord>(index.occupancy_[i])
          .fetch_or(GroupWord(1) << j, std::memory_order_relaxed);
    }
  });

  index.group_starts_.resize(ngroups);
  par::parallel_for(ngroups, threads, [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i)
      index.group_starts_[i] = static_cast<std::uint32_t>(std::popcount(index.occupancy_[i]));
  });
  const std::uint32_t distinct = par::exclusive_scan_in_place(index.group_starts_, threads);
  index.group_starts_.push_back(distinct);

  par::CounterArray counts(distinct);
  par::parallel_for(valid.size(), threads, [&](std::size_t b, std::size_t e) {
    for (std::size_t t = b; t < e; ++t) {
      const auto [i, j] = group_and_bit(text.qgram_at(valid[t]), width);
      counts.bump(index.group_starts_[i] + QGroupIndex<GroupWord>::rank_below(index.occupancy_[i], j));
    }
  });

  index.occ_starts_.resize(distinct);
  par::parallel_for(distinct, threads, [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) index.occ_starts_[i] = counts.value(i);
  });
  const std::uint32_t total = par::exclusive_scan_in_place(index.occ_starts_, threads);
  index.occ_starts_.push_back(total);

  index.positions_.resize(valid.size());
  par::CounterArray cursors(distinct);
  par::scatter_with_counters<std::uint32_t>(
      valid.size(), index.occ_starts_, cursors, index.positions_,
      [&](std::size_t t, auto&& put) {
        const std::uint32_t p = valid[t];
        const auto [i, j] = group_and_bit(text.qgram_at(p), width);
        put(index.group_starts_[i] + QGroupIndex<GroupWord>::rank_below(index.occupancy_[i], j), p);
      },
      threads);

  return index;
}

// Drops the odd entries of group_starts; lookups for odd groups recover the
// base with one extra popcount over the preceding group. Occurrence results
// are unchanged for every q-gram.
template <class GroupWord>
QGroupIndex<GroupWord> sample_group_starts(const QGroupIndex<GroupWord>& index) {
  QGroupIndex<GroupWord> out = index;
  if (index.sampled_) return out;
  std::vector<std::uint32_t> halved;
  halved.reserve(index.group_starts_.size() / 2 + 1);
  for (std::size_t i = 0; i < index.group_starts_.size(); i += 2)
    halved.push_back(index.group_starts_[i]);
  out.group_starts_ = std::move(halved);
  out.sampled_ = true;
  return out;
}

struct IndexSize {
  std::uint64_t qgroup_words;
  std::uint64_t classic_words;
  double ratio;
};

// Word budget of this index versus a flat address-table q-gram index over
// the same text: occupancy and group_starts take 2/w * 4^q words, the
// per-occurring-q-gram offsets min(4^q, |T|), the positions |T|.
inline IndexSize index_size_words(unsigned q, std::uint64_t text_len, unsigned width) {
  const std::uint64_t qgram_space = std::uint64_t(1) << (2 * q);
  const std::uint64_t qgroup = (2 * qgram_space + width - 1) / width +
                               std::min(qgram_space, text_len) + text_len;
  const std::uint64_t classic = qgram_space + text_len;
  return {qgroup, classic, double(qgroup) / double(classic)};
}

}  // namespace qgmap
