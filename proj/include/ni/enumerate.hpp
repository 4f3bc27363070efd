#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <istream>
#include <map>
#include <mutex>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <string_view>
#include <thread>
#include <unordered_map>
#include <vector>

#include "ni/descriptor.hpp"
#include "ni/dice.hpp"
#include "ni/error.hpp"
#include "ni/identity.hpp"

namespace ni {

/// Which viable identities an enumeration walks.
///
/// duplicative        every viable identity.
/// alphabetical_dupe  '='-runs listed in alphabetical order.
/// strict             alphabetical, and no face joined by '<' to a face of
///                    the same die ("N<N" anywhere).
/// irreducible        alphabetical, and no two neighbouring runs made only of
///                    faces of one die; NIs must also carry the canonical
///                    die-A labelling.
enum class Mode { irreducible, strict, alphabetical_dupe, duplicative };

inline std::string_view to_string(Mode m) {
  switch (m) {
    case Mode::irreducible: return "irreducible";
    case Mode::strict: return "strict";
    case Mode::alphabetical_dupe: return "alphabetical-dupe";
    case Mode::duplicative: return "duplicative";
  }
  return "?";
}

inline Mode parse_mode(std::string_view s) {
  if (s == "irreducible") return Mode::irreducible;
  if (s == "strict") return Mode::strict;
  if (s == "alphabetical-dupe" || s == "dupe") return Mode::alphabetical_dupe;
  if (s == "duplicative") return Mode::duplicative;
  throw Error("unknown enumeration mode '" + std::string(s) + "'");
}

struct EnumerationRecord {
  Identity identity;
  std::uint64_t viable_index = 0;
  EncodedIdentity encoding;
};

/// Largest combination count the oracle and long enumerations may touch.
/// NI_BUDGET overrides the default.
inline std::uint64_t combination_budget(std::uint64_t fallback = 200'000'000ULL) {
  if (const char* env = std::getenv("NI_BUDGET")) {
    char* end = nullptr;
    const auto v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0') return v;
  }
  return fallback;
}

namespace detail {

inline constexpr int enum_max_dice = 9;
inline constexpr int enum_max_sides = 15;

// Depth-first walker over base-2k digit strings in ascending order.
class Walker {
 public:
  Walker(const Descriptor& d, Mode mode)
      : k_(d.dice), n_(d.sides), mode_(mode), pattern_(pattern_from_descriptor(d)) {
    if (d.sides < 1) throw InvalidDescriptor("enumeration needs a side count");
    if (k_ > enum_max_dice || n_ > enum_max_sides) throw InvalidDescriptor("descriptor too large to enumerate");
    for (int i = 0; i < k_; ++i)
      for (int j = 0; j < k_; ++j)
        if (pattern_.beats(i, j)) required_.emplace_back(i, j);
  }

  struct State {
    std::array<std::uint8_t, enum_max_dice> count{};  // faces placed per die
    std::array<std::uint8_t, enum_max_dice> closed{};  // faces strictly below the current run
    std::array<std::int32_t, enum_max_dice * enum_max_dice> wins{};
    int last = 0;
    int cur_pure = 0;    // die of the current run if it holds one die only, else -1
    int prev_pure = -1;  // same for the run before it
    int placed = 1;
  };

  State root() const {
    State s;
    s.count[0] = 1;
    return s;
  }

  int dice() const { return k_; }
  int sides() const { return n_; }
  int length() const { return k_ * n_ - 1; }
  const WinPattern& pattern() const { return pattern_; }

  // Applies digit to s; false if the digit leaves the mode's universe.
  bool step(State& s, int digit) const {
    const bool less = digit >= k_;
    const int die = digit % k_;
    if (s.count[die] >= n_) return false;
    if (mode_ != Mode::duplicative && !less && die < s.last) return false;
    if (mode_ == Mode::strict && less && die == s.last) return false;
    if (less) {
      if (mode_ == Mode::irreducible && s.prev_pure >= 0 && s.prev_pure == s.cur_pure) return false;
      for (int e = 0; e < k_; ++e) s.closed[e] = s.count[e];
      s.prev_pure = s.cur_pure;
      s.cur_pure = die;
    } else if (s.cur_pure != die) {
      s.cur_pure = -1;
    }
    for (int e = 0; e < k_; ++e) s.wins[die * k_ + e] += s.closed[e];
    s.wins[die * k_ + die] = 0;
    ++s.count[die];
    s.last = die;
    ++s.placed;
    return true;
  }

  bool complete_ok(const State& s) const {
    return !(mode_ == Mode::irreducible && s.prev_pure >= 0 && s.prev_pure == s.cur_pure);
  }

  bool beats_match(const State& s) const {
    for (int i = 0; i < k_; ++i)
      for (int j = i + 1; j < k_; ++j) {
        const int a = s.wins[i * k_ + j], b = s.wins[j * k_ + i];
        if (a == b || (a > b) != pattern_.beats(i, j)) return false;
      }
    return true;
  }

  // No completion of s can realise the pattern.
  bool hopeless(const State& s) const {
    for (auto [i, j] : required_) {
      const long max_ij = s.wins[i * k_ + j] + static_cast<long>(n_ - s.count[i]) * n_;
      const long min_ji = s.wins[j * k_ + i] + static_cast<long>(n_ - s.count[j]) * s.closed[i];
      if (max_ij <= min_ji) return true;
    }
    return false;
  }

  // Number of completions of s inside the mode's universe.
  std::uint64_t completions(const State& s) const {
    if (s.placed == k_ * n_) return complete_ok(s) ? 1 : 0;
    const auto key = memo_key(s);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    std::uint64_t total = 0;
    for (int digit = 0; digit < 2 * k_; ++digit) {
      State t = s;
      if (step(t, digit)) total += completions(t);
    }
    memo_.emplace(key, total);
    return total;
  }

 private:
  std::uint64_t memo_key(const State& s) const {
    std::uint64_t key = 0;
    for (int e = 0; e < k_; ++e) key = key * 16 + s.count[e];
    key = key * 16 + static_cast<std::uint64_t>(s.last);
    key = key * 16 + static_cast<std::uint64_t>(s.cur_pure + 1);
    key = key * 16 + static_cast<std::uint64_t>(s.prev_pure + 1);
    return key;
  }

  int k_;
  int n_;
  Mode mode_;
  WinPattern pattern_;
  std::vector<std::pair<int, int>> required_;
  mutable std::unordered_map<std::uint64_t, std::uint64_t> memo_;
};

inline Identity identity_from_digits(const std::vector<std::uint8_t>& digits, int k) {
  return decode_identity(EncodedIdentity{k, digits});
}

struct SearchOptions {
  bool ni_only = false;  // emit NIs only
  bool prune = false;    // skip subtrees that cannot hold an NI
};

// Walks the subtree below `prefix` (digits already applied to `state`).
// `index` is the viable index of the first identity in the subtree.
template <typename Emit>
void walk(const Walker& w, Mode mode, const Walker::State& state, std::vector<std::uint8_t>& digits,
          std::uint64_t& index, const SearchOptions& opt, Emit& emit) {
  if (state.placed == w.dice() * w.sides()) {
    if (!w.complete_ok(state)) return;
    if (!opt.ni_only) {
      emit(digits, index++);
      return;
    }
    if (w.beats_match(state)) {
      bool canonical = true;
      if (mode == Mode::irreducible) {
        // Die A shares its lowest face with another die: confirm the labelling.
        const Identity id = identity_from_digits(digits, w.dice());
        if (id.size() > 1 && id.join(1) == Op::equal && id.die(1) != 0) {
          canonical = dice_to_identity(solve(id), w.pattern()) == id;
        }
      }
      if (canonical) emit(digits, index);
    }
    ++index;
    return;
  }
  if (opt.prune && w.hopeless(state)) {
    index += w.completions(state);
    return;
  }
  for (int digit = 0; digit < 2 * w.dice(); ++digit) {
    Walker::State next = state;
    if (!w.step(next, digit)) continue;
    digits.push_back(static_cast<std::uint8_t>(digit));
    walk(w, mode, next, digits, index, opt, emit);
    digits.pop_back();
  }
}

}  // namespace detail

/// Streams the viable identities of a descriptor in ascending encoding order.
/// With `bounded`, subtrees that cannot contain a nontransitive identity are
/// skipped, which generalises the fixed "55500000" stopping point.
template <typename Visitor>
void enumerate_viable(const Descriptor& d, Mode mode, Visitor&& visit, bool bounded = false) {
  detail::Walker w(d, mode);
  std::vector<std::uint8_t> digits;
  std::uint64_t index = 0;
  auto emit = [&](const std::vector<std::uint8_t>& ds, std::uint64_t idx) {
    visit(detail::identity_from_digits(ds, w.dice()), idx);
  };
  detail::walk(w, mode, w.root(), digits, index, detail::SearchOptions{false, bounded}, emit);
}

/// Number of viable identities in the mode's universe.
inline std::uint64_t count_viable(const Descriptor& d, Mode mode) {
  detail::Walker w(d, mode);
  return w.completions(w.root());
}

/// Streams the nontransitive identities in viable-index order.
template <typename Visitor>
void enumerate_ni(const Descriptor& d, Mode mode, Visitor&& visit) {
  detail::Walker w(d, mode);
  std::vector<std::uint8_t> digits;
  std::uint64_t index = 0;
  auto emit = [&](const std::vector<std::uint8_t>& ds, std::uint64_t idx) {
    EnumerationRecord r{detail::identity_from_digits(ds, w.dice()), idx, EncodedIdentity{w.dice(), ds}};
    visit(r);
  };
  detail::walk(w, mode, w.root(), digits, index, detail::SearchOptions{true, true}, emit);
}

struct ParallelOptions {
  int jobs = 1;
  int split_depth = 2;  // digits fixed per work unit
  std::optional<std::string> checkpoint;
};

/// Enumerates NIs with the encoding space split by leading digits into work
/// units. Every unit knows its starting viable index, so concatenating unit
/// results in prefix order restores the global order. Completed units are
/// appended to the checkpoint file, if any, and skipped on restart.
inline std::vector<EnumerationRecord> enumerate_ni_partitioned(const Descriptor& d, Mode mode,
                                                               const ParallelOptions& opt = {}) {
  detail::Walker w(d, mode);
  struct Unit {
    std::vector<std::uint8_t> prefix;
    detail::Walker::State state;
    std::uint64_t start = 0;
    std::vector<EnumerationRecord> records;
    bool done = false;
  };

  std::vector<Unit> units;
  std::uint64_t offset = 0;
  std::function<void(const detail::Walker::State&, std::vector<std::uint8_t>&)> split =
      [&](const detail::Walker::State& s, std::vector<std::uint8_t>& prefix) {
        if (static_cast<int>(prefix.size()) == std::min(opt.split_depth, w.length())) {
          const auto size = w.completions(s);
          if (size == 0) return;
          units.push_back(Unit{prefix, s, offset, {}, false});
          offset += size;
          return;
        }
        for (int digit = 0; digit < 2 * w.dice(); ++digit) {
          auto t = s;
          if (!w.step(t, digit)) continue;
          prefix.push_back(static_cast<std::uint8_t>(digit));
          split(t, prefix);
          prefix.pop_back();
        }
      };
  std::vector<std::uint8_t> prefix;
  split(w.root(), prefix);

  auto unit_key = [](const Unit& u) { return EncodedIdentity{0, u.prefix}.to_string(); };

  std::map<std::string, std::size_t> by_key;
  for (std::size_t i = 0; i < units.size(); ++i) by_key[unit_key(units[i])] = i;

  const std::string header = "# checkpoint " + format_descriptor(d) + " " + std::string(to_string(mode));
  if (opt.checkpoint) {
    std::ifstream in(*opt.checkpoint);
    std::string line;
    if (in && std::getline(in, line) && line != header) {
      throw Error("checkpoint file belongs to a different enumeration");
    }
    Unit* current = nullptr;
    std::vector<EnumerationRecord> pending;
    while (std::getline(in, line)) {
      if (line.rfind("unit ", 0) == 0) {
        auto it = by_key.find(line.substr(5));
        current = it == by_key.end() ? nullptr : &units[it->second];
        pending.clear();
      } else if (line == "end" && current) {
        current->records = std::move(pending);
        current->done = true;
        current = nullptr;
        pending.clear();
      } else if (current) {
        const auto space = line.find(' ');
        EnumerationRecord r;
        r.viable_index = std::stoull(line.substr(0, space));
        r.encoding = parse_encoding(line.substr(space + 1), w.dice());
        r.identity = decode_identity(r.encoding);
        pending.push_back(std::move(r));
      }
    }
  }

  std::ofstream log;
  if (opt.checkpoint) {
    const bool fresh = !std::ifstream(*opt.checkpoint).good();
    log.open(*opt.checkpoint, std::ios::app);
    if (fresh) log << header << '\n' << std::flush;
  }
  std::mutex log_mutex;

  auto run_unit = [&](Unit& u) {
    // Each worker gets its own walker: the completion memo is not thread safe.
    detail::Walker local(d, mode);
    std::vector<std::uint8_t> digits = u.prefix;
    std::uint64_t index = u.start;
    auto emit = [&](const std::vector<std::uint8_t>& ds, std::uint64_t idx) {
      u.records.push_back(
          EnumerationRecord{detail::identity_from_digits(ds, local.dice()), idx, EncodedIdentity{local.dice(), ds}});
    };
    detail::walk(local, mode, u.state, digits, index, detail::SearchOptions{true, true}, emit);
    u.done = true;
    if (log.is_open()) {
      std::lock_guard lock(log_mutex);
      log << "unit " << unit_key(u) << '\n';
      for (const auto& r : u.records) log << r.viable_index << ' ' << r.encoding.to_string() << '\n';
      log << "end\n" << std::flush;
    }
  };

  std::vector<Unit*> todo;
  for (auto& u : units)
    if (!u.done) todo.push_back(&u);
  const int jobs = std::max(1, opt.jobs);
  if (jobs == 1) {
    for (Unit* u : todo) run_unit(*u);
  } else {
    std::size_t next = 0;
    std::mutex next_mutex;
    std::vector<std::thread> pool;
    for (int t = 0; t < jobs; ++t) {
      pool.emplace_back([&] {
        for (;;) {
          Unit* u = nullptr;
          {
            std::lock_guard lock(next_mutex);
            if (next == todo.size()) return;
            u = todo[next++];
          }
          run_unit(*u);
        }
      });
    }
    for (auto& th : pool) th.join();
  }

  std::vector<EnumerationRecord> out;
  for (auto& u : units) {
    for (auto& r : u.records) out.push_back(std::move(r));
  }
  return out;
}

inline std::vector<EnumerationRecord> collect_ni(const Descriptor& d, Mode mode) {
  std::vector<EnumerationRecord> out;
  enumerate_ni(d, mode, [&](const EnumerationRecord& r) { out.push_back(r); });
  return out;
}

/// Independent check: every k-set of distinct non-decreasing face lists over
/// 1..vmax, kept when perfectly nontransitive and mapped to its canonical
/// identity.
inline std::set<Identity> brute_force_oracle(int dice, int sides, int vmax,
                                             std::uint64_t budget = combination_budget()) {
  const Descriptor d = make_descriptor(dice, sides);
  const WinPattern target = pattern_from_descriptor(d);

  std::vector<std::vector<int>> lists;
  std::vector<int> cur;
  std::function<void(int)> gen = [&](int lo) {
    if (static_cast<int>(cur.size()) == sides) {
      lists.push_back(cur);
      return;
    }
    for (int v = lo; v <= vmax; ++v) {
      cur.push_back(v);
      gen(v);
      cur.pop_back();
    }
  };
  gen(1);

  // C(m, k) k-subsets of distinct lists; identical dice always tie.
  const auto m = static_cast<long double>(lists.size());
  long double combos = 1;
  for (int i = 0; i < dice; ++i) combos = combos * (m - i) / (i + 1);
  if (combos > static_cast<long double>(budget)) {
    throw BudgetExceeded("oracle sweep needs about " + std::to_string(static_cast<unsigned long long>(combos)) +
                         " combinations, above the budget of " + std::to_string(budget));
  }

  const std::size_t count = lists.size();
  std::vector<std::int8_t> cmp(count * count, 0);  // sign of wins(a,b) - wins(b,a)
  for (std::size_t a = 0; a < count; ++a)
    for (std::size_t b = 0; b < count; ++b) {
      long wa = 0, wb = 0;
      for (int x : lists[a])
        for (int y : lists[b]) {
          wa += x > y;
          wb += y > x;
        }
      cmp[a * count + b] = static_cast<std::int8_t>((wa > wb) - (wa < wb));
    }

  std::set<Identity> found;
  std::vector<std::size_t> pick(static_cast<std::size_t>(dice));
  std::function<void(int, std::size_t)> choose = [&](int depth, std::size_t from) {
    if (depth == dice) {
      WinPattern measured(dice);
      for (int i = 0; i < dice; ++i)
        for (int j = 0; j < dice; ++j) {
          if (i == j) continue;
          const auto c = cmp[pick[static_cast<std::size_t>(i)] * count + pick[static_cast<std::size_t>(j)]];
          if (c == 0) return;
          if (c > 0) measured.set(i, j);
        }
      for (int i = 0; i < dice; ++i) {
        if (measured.out_degree(i) != (dice - 1) / 2) return;
      }
      std::vector<std::vector<int>> faces;
      for (auto p : pick) faces.push_back(lists[p]);
      const DiceSet ds(std::move(faces));
      if (!is_nontransitive_up_to_labels(ds, target)) return;
      found.insert(dice_to_identity(ds, target));
      return;
    }
    for (std::size_t i = from; i < count; ++i) {
      pick[static_cast<std::size_t>(depth)] = i;
      // Prune pairs that already tie.
      bool tie = false;
      for (int prev = 0; prev < depth && !tie; ++prev) tie = cmp[pick[static_cast<std::size_t>(prev)] * count + i] == 0;
      if (!tie) choose(depth + 1, i + 1);
    }
  };
  choose(0, 0);
  return found;
}

// NI list files: "# <descriptor> <mode>" then one identity per line.
inline void write_ni_list(std::ostream& os, const Descriptor& d, Mode mode, const std::vector<Identity>& ids) {
  os << "# " << format_descriptor(d) << ' ' << to_string(mode) << '\n';
  for (const auto& id : ids) os << format_identity(id) << '\n';
}

/// Reads identities from a list file or any text with one identity per line;
/// blank lines and '#' comments are skipped.
inline std::vector<Identity> read_identities(std::istream& is) {
  std::vector<Identity> out;
  std::string line;
  while (std::getline(is, line)) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    out.push_back(parse_identity(line));
  }
  return out;
}

}  // namespace ni
