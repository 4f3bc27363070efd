#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ni/descriptor.hpp"
#include "ni/enumerate.hpp"
#include "ni/identity.hpp"

namespace ni {

/// NIs of one descriptor with their viable indexes and successive gaps.
struct GapSequence {
  Descriptor descriptor;
  Mode mode = Mode::irreducible;
  std::vector<Identity> identities;
  std::vector<std::uint64_t> viable_indexes;
  std::vector<std::uint64_t> gaps;  // gaps[i] = viable_indexes[i + 1] - viable_indexes[i]
};

/// Universe whose viable indexes define the gaps for a mode. Irreducible
/// lists count positions among identities without "<N<N" rather than among
/// the larger semantic-irreducible universe.
inline Mode gap_universe(Mode m) { return m == Mode::irreducible ? Mode::strict : m; }

inline GapSequence gaps_from_records(const Descriptor& d, Mode m, const std::vector<EnumerationRecord>& records) {
  GapSequence g{d, m, {}, {}, {}};
  for (const auto& r : records) {
    if (!g.viable_indexes.empty()) g.gaps.push_back(r.viable_index - g.viable_indexes.back());
    g.identities.push_back(r.identity);
    g.viable_indexes.push_back(r.viable_index);
  }
  return g;
}

inline GapSequence gap_sequence(const Descriptor& d, Mode m) {
  return gaps_from_records(d, m, collect_ni(d, gap_universe(m)));
}

inline void write_gaps_csv(std::ostream& os, const GapSequence& g) {
  os << "index,viable_index,gap,identity\n";
  for (std::size_t i = 0; i < g.identities.size(); ++i) {
    os << i << ',' << g.viable_indexes[i] << ',';
    if (i > 0) os << g.gaps[i - 1];
    os << ',' << format_identity(g.identities[i]) << '\n';
  }
}

struct RepeatOptions {
  std::size_t min_len = 2;
  std::size_t min_reps = 2;
  std::size_t max_len = 0;  // 0: half the sequence
  bool detect_splits = false;
  std::size_t max_split_parts = 4;
};

/// Boundary- or absorption-truncated occurrence of a pattern.
struct PartialOccurrence {
  std::size_t position = 0;
  bool prefix = false;  // a prefix of the pattern; otherwise a suffix
  std::size_t length = 0;
};

/// Occurrence where one pattern element is replaced by consecutive parts
/// with the same sum ("41" appearing as "18, 2, 21").
struct SplitOccurrence {
  std::size_t position = 0;
  std::size_t element = 0;
  std::vector<std::uint64_t> parts;
};

struct RepeatReport {
  std::vector<std::uint64_t> pattern;
  std::vector<std::size_t> positions;  // non-overlapping full occurrences
  std::map<std::uint64_t, std::size_t> preceded_by;
  std::vector<PartialOccurrence> partials;
  std::vector<SplitOccurrence> splits;

  std::size_t count() const { return positions.size(); }
};

namespace detail {

using Seq = std::vector<std::uint64_t>;

inline bool matches_at(const Seq& s, std::size_t pos, const Seq& p, std::size_t from, std::size_t len) {
  if (pos + len > s.size()) return false;
  return std::equal(p.begin() + static_cast<std::ptrdiff_t>(from), p.begin() + static_cast<std::ptrdiff_t>(from + len),
                    s.begin() + static_cast<std::ptrdiff_t>(pos));
}

inline std::uint64_t sum(const Seq& p, std::size_t from, std::size_t to) {
  std::uint64_t t = 0;
  for (std::size_t i = from; i < to; ++i) t += p[i];
  return t;
}

// Window mining over the positions not yet claimed by an earlier tile.
class Miner {
 public:
  Miner(const Seq& s, const RepeatOptions& opt) : s_(s), opt_(opt), blocked_(s.size(), false) {}

  void block(std::size_t from, std::size_t to) {
    for (std::size_t i = from; i < to && i < s_.size(); ++i) blocked_[i] = true;
  }

  bool free_span(std::size_t pos, std::size_t len) const {
    if (pos + len > s_.size()) return false;
    for (std::size_t i = pos; i < pos + len; ++i)
      if (blocked_[i]) return false;
    return true;
  }

  bool occurs_at(std::size_t pos, const Seq& p) const {
    return free_span(pos, p.size()) && matches_at(s_, pos, p, 0, p.size());
  }

  // Greedy left-to-right non-overlapping occurrences.
  std::vector<std::size_t> occurrences(const Seq& p) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i + p.size() <= s_.size();) {
      if (occurs_at(i, p)) {
        out.push_back(i);
        i += p.size();
      } else {
        ++i;
      }
    }
    return out;
  }

  std::size_t count_of(const Seq& p) {
    auto it = cache_.find(p);
    if (it != cache_.end()) return it->second;
    const auto c = occurrences(p).size();
    cache_.emplace(p, c);
    return c;
  }

  // Maximal windows: no one-element extension repeats as often.
  std::vector<Seq> maximal_windows() {
    cache_.clear();
    std::vector<Seq> out;
    const std::size_t N = s_.size();
    const std::size_t min_len = std::max<std::size_t>(opt_.min_len, 1);
    const std::size_t min_reps = std::max<std::size_t>(opt_.min_reps, 2);
    const std::size_t max_len = opt_.max_len ? std::min(opt_.max_len, N) : N / 2;
    for (std::size_t len = min_len; len <= max_len; ++len) {
      std::map<Seq, std::size_t> windows;
      for (std::size_t i = 0; i + len <= N; ++i) {
        if (!free_span(i, len)) continue;
        windows.emplace(Seq(s_.begin() + static_cast<std::ptrdiff_t>(i), s_.begin() + static_cast<std::ptrdiff_t>(i + len)), i);
      }
      for (const auto& [w, first] : windows) {
        const auto c = count_of(w);
        if (c < min_reps) continue;
        bool maximal = true;
        for (std::size_t i = first; i + len <= N && maximal; ++i) {
          if (!occurs_at(i, w)) continue;
          if (i > 0 && !blocked_[i - 1]) {
            Seq ext{s_[i - 1]};
            ext.insert(ext.end(), w.begin(), w.end());
            if (count_of(ext) >= c) maximal = false;
          }
          if (i + len < N && !blocked_[i + len] && maximal) {
            Seq ext = w;
            ext.push_back(s_[i + len]);
            if (count_of(ext) >= c) maximal = false;
          }
        }
        if (maximal) out.push_back(w);
      }
    }
    return out;
  }

  RepeatReport report(const Seq& p) const {
    RepeatReport r;
    r.pattern = p;
    r.positions = occurrences(p);
    for (auto pos : r.positions) {
      if (pos > 0) ++r.preceded_by[s_[pos - 1]];
    }
    partials(r);
    if (opt_.detect_splits) splits(r);
    return r;
  }

 private:
  // Truncated occurrences on unclaimed positions, longest first. A suffix
  // counts when the value before it is large enough to have absorbed the
  // missing front (or it starts the sequence); prefixes mirror this.
  void partials(RepeatReport& r) const {
    const auto& p = r.pattern;
    const std::size_t L = p.size();
    std::vector<bool> covered = blocked_;
    for (auto pos : r.positions)
      for (std::size_t i = 0; i < L; ++i) covered[pos + i] = true;
    auto free = [&](std::size_t pos, std::size_t len) {
      for (std::size_t i = pos; i < pos + len; ++i)
        if (covered[i]) return false;
      return true;
    };
    const std::size_t min_part = std::max<std::size_t>(2, (L + 1) / 2);
    for (std::size_t len = L - 1; len >= min_part; --len) {
      const std::uint64_t missing_front = sum(p, 0, L - len);
      const std::uint64_t missing_back = sum(p, len, L);
      for (std::size_t pos = 0; pos + len <= s_.size(); ++pos) {
        if (!free(pos, len)) continue;
        bool hit = false, is_prefix = false;
        if (matches_at(s_, pos, p, L - len, len) && (pos == 0 || s_[pos - 1] >= missing_front)) {
          hit = true;
        } else if (matches_at(s_, pos, p, 0, len) && (pos + len == s_.size() || s_[pos + len] >= missing_back)) {
          hit = true;
          is_prefix = true;
        }
        if (!hit) continue;
        r.partials.push_back(PartialOccurrence{pos, is_prefix, len});
        for (std::size_t i = pos; i < pos + len; ++i) covered[i] = true;
      }
    }
    std::sort(r.partials.begin(), r.partials.end(),
              [](const PartialOccurrence& a, const PartialOccurrence& b) { return a.position < b.position; });
  }

  void splits(RepeatReport& r) const {
    const auto& p = r.pattern;
    const std::size_t L = p.size();
    for (std::size_t pos = 0; pos < s_.size(); ++pos) {
      for (std::size_t e = 0; e < L; ++e) {
        if (!matches_at(s_, pos, p, 0, e)) break;
        for (std::size_t m = 2; m <= opt_.max_split_parts && pos + e + m <= s_.size(); ++m) {
          const std::uint64_t parts_sum = sum(s_, pos + e, pos + e + m);
          if (parts_sum > p[e]) break;
          if (parts_sum != p[e]) continue;
          if (!matches_at(s_, pos + e + m, p, e + 1, L - e - 1)) continue;
          r.splits.push_back(SplitOccurrence{pos, e, Seq(s_.begin() + static_cast<std::ptrdiff_t>(pos + e),
                                                          s_.begin() + static_cast<std::ptrdiff_t>(pos + e + m))});
        }
      }
    }
  }

  const Seq& s_;
  RepeatOptions opt_;
  std::vector<bool> blocked_;
  std::map<Seq, std::size_t> cache_;
};

inline void order_reports(std::vector<RepeatReport>& out) {
  std::stable_sort(out.begin(), out.end(), [](const RepeatReport& a, const RepeatReport& b) {
    if (a.count() != b.count()) return a.count() > b.count();
    return a.positions.front() < b.positions.front();
  });
}

}  // namespace detail

/// Maximal windows of length >= min_len repeating >= min_reps times without
/// overlap. A window is maximal when no one-element extension on either
/// side repeats as often. Results are ordered by descending count, then by
/// first position.
inline std::vector<RepeatReport> find_repeats(const std::vector<std::uint64_t>& s, const RepeatOptions& opt = {}) {
  detail::Miner miner(s, opt);
  std::vector<RepeatReport> out;
  for (const auto& w : miner.maximal_windows()) out.push_back(miner.report(w));
  detail::order_reports(out);
  return out;
}

/// Reads the sequence as tiles: the most frequent maximal window (longest on
/// ties) is taken first, its occurrences and the value leading into each are
/// claimed, and mining resumes on what is left. Returns the tiles in the
/// order they were taken.
inline std::vector<RepeatReport> tile_repeats(const std::vector<std::uint64_t>& s, const RepeatOptions& opt = {}) {
  detail::Miner miner(s, opt);
  std::vector<RepeatReport> out;
  for (;;) {
    const auto windows = miner.maximal_windows();
    if (windows.empty()) break;
    const detail::Seq* best = nullptr;
    std::size_t best_count = 0;
    for (const auto& w : windows) {
      const auto c = miner.count_of(w);
      if (!best || c > best_count || (c == best_count && w.size() > best->size())) {
        best = &w;
        best_count = c;
      }
    }
    RepeatReport r = miner.report(*best);
    for (auto pos : r.positions) miner.block(pos == 0 ? 0 : pos - 1, pos + r.pattern.size());
    out.push_back(std::move(r));
  }
  return out;
}

inline const RepeatReport* find_pattern(const std::vector<RepeatReport>& reports, const std::vector<std::uint64_t>& p) {
  for (const auto& r : reports)
    if (r.pattern == p) return &r;
  return nullptr;
}

inline nlohmann::json to_json(const RepeatReport& r) {
  nlohmann::json j;
  j["pattern"] = r.pattern;
  j["count"] = r.count();
  j["positions"] = r.positions;
  nlohmann::json prec = nlohmann::json::object();
  for (const auto& [v, c] : r.preceded_by) prec[std::to_string(v)] = c;
  j["preceded_by"] = prec;
  j["partials"] = nlohmann::json::array();
  for (const auto& p : r.partials) {
    j["partials"].push_back({{"position", p.position}, {"kind", p.prefix ? "prefix" : "suffix"}, {"length", p.length}});
  }
  j["splits"] = nlohmann::json::array();
  for (const auto& sp : r.splits) {
    j["splits"].push_back({{"position", sp.position}, {"element", sp.element}, {"parts", sp.parts}});
  }
  return j;
}

inline nlohmann::json to_json(const std::vector<RepeatReport>& reports) {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& r : reports) j.push_back(to_json(r));
  return j;
}

}  // namespace ni
