#pragma once

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ni/ni.hpp"

namespace ni::cli {

enum Exit : int { ok = 0, failure = 1, usage = 2 };

namespace detail {

inline std::vector<Identity> read_identity_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  return read_identities(in);
}

// An argument naming an existing file contributes every identity in it;
// anything else is parsed as an identity.
inline std::vector<Identity> load_identities(const std::vector<std::string>& args) {
  std::vector<Identity> out;
  for (const auto& a : args) {
    std::error_code ec;
    if (std::filesystem::is_regular_file(a, ec)) {
      auto ids = read_identity_file(a);
      out.insert(out.end(), ids.begin(), ids.end());
    } else {
      out.push_back(parse_identity(a));
    }
  }
  return out;
}

inline Identity load_one(const std::string& arg) {
  auto ids = load_identities({arg});
  if (ids.size() != 1) throw Error("expected exactly one identity in " + arg);
  return ids.front();
}

inline Op parse_op(const std::string& s) {
  if (s == "<") return Op::less;
  if (s == "=") return Op::equal;
  throw SyntaxError("operator must be '<' or '='", 0);
}

inline std::vector<Die> parse_letters(const std::string& s) {
  std::vector<Die> out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const char c = s[i];
    if (c == ',' || c == ' ') continue;
    if (c < 'A' || c > 'Z') throw SyntaxError("expected die letters", i);
    out.push_back(static_cast<Die>(c - 'A'));
  }
  return out;
}

inline void print_expansion(std::ostream& out, std::ostream& err, const Expansion& e, bool raw, int& status) {
  out << format_identity(raw ? e.raw : e.identity) << '\n';
  if (!e.nontransitive) {
    err << "not nontransitive: " << format_identity(e.identity) << '\n';
    status = failure;
  }
}

}  // namespace detail

/// Runs one command line. argv[0] is the program name.
inline int run(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Nontransitive identity toolkit", "ni"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for every subcommand");

  // parse
  auto* parse_cmd = app.add_subcommand("parse", "Parse an identity and print its normal form");
  std::string parse_text;
  std::string parse_level;
  parse_cmd->add_option("identity", parse_text, "Identity text")->required();
  parse_cmd->add_option("--canonical", parse_level, "Canonicalize: alphabetical-dupe or irreducible")
      ->check(CLI::IsMember({"alphabetical-dupe", "irreducible"}));
  std::string parse_format = "text";
  parse_cmd->add_option("--format", parse_format)->check(CLI::IsMember({"text", "json"}));

  // solve
  auto* solve_cmd = app.add_subcommand("solve", "Solve an identity into minimal dice");
  std::string solve_text;
  solve_cmd->add_option("identity", solve_text, "Identity text or file")->required();

  // check
  auto* check_cmd = app.add_subcommand("check", "Check a dice file against a descriptor");
  std::string check_file, check_desc;
  check_cmd->add_option("dice", check_file, "Dice file ('A: 1 6 8' per line)")->required();
  check_cmd->add_option("--descriptor,-d", check_desc, "Descriptor such as [3D3S]")->required();

  // enum
  auto* enum_cmd = app.add_subcommand("enum", "Enumerate the nontransitive identities of a descriptor");
  std::string enum_desc, enum_mode = "irreducible", enum_format = "text";
  std::optional<std::string> enum_out, enum_checkpoint;
  int enum_jobs = 1;
  bool enum_long = false, enum_header = false;
  enum_cmd->add_option("--descriptor,-d", enum_desc)->required();
  enum_cmd->add_option("--mode,-m", enum_mode)
      ->check(CLI::IsMember({"irreducible", "strict", "alphabetical-dupe", "dupe", "duplicative"}));
  enum_cmd->add_option("--jobs,-j", enum_jobs)->check(CLI::Range(1, 256));
  enum_cmd->add_option("--checkpoint", enum_checkpoint, "Resume file for partitioned runs");
  enum_cmd->add_option("--out,-o", enum_out, "Write the list to a file");
  enum_cmd->add_option("--format", enum_format)->check(CLI::IsMember({"text", "csv"}));
  enum_cmd->add_flag("--header", enum_header, "Start the list with a '# descriptor mode' line");
  enum_cmd->add_flag("--long-run", enum_long, "Allow enumerations above NI_BUDGET");

  // expand
  auto* expand_cmd = app.add_subcommand("expand", "Apply an expansion operation");
  expand_cmd->require_subcommand(1);
  bool expand_raw = false;
  expand_cmd->add_flag("--raw", expand_raw, "Print the literal construction instead of the canonical form");
  auto* add_zero_cmd = expand_cmd->add_subcommand("add-zero", "Append one tied face to every die");
  std::vector<std::string> add_zero_ids;
  add_zero_cmd->add_option("identities", add_zero_ids, "Identities or list files")->required();
  auto* mul_one_cmd = expand_cmd->add_subcommand("mul-one", "Double every face");
  std::vector<std::string> mul_one_ids;
  std::string mul_one_op = "=";
  mul_one_cmd->add_option("identities", mul_one_ids)->required();
  mul_one_cmd->add_option("--op", mul_one_op, "Joiner between the copies: '=' or '<'");
  auto* add_cmd = expand_cmd->add_subcommand("add", "Concatenate identities of one shape");
  std::vector<std::string> add_ids;
  std::string add_joiners;
  add_cmd->add_option("identities", add_ids)->required();
  add_cmd->add_option("--joiners", add_joiners, "One '<' or '=' per gap (default all '<')");
  std::string nest_base;
  std::vector<std::string> nest_subs;
  auto* nest_faces_cmd = expand_cmd->add_subcommand("nest-faces", "Substitute an identity into every base face");
  nest_faces_cmd->add_option("base", nest_base)->required();
  nest_faces_cmd->add_option("subs", nest_subs, "One substituting identity, or one per base die")->required();
  auto* nest_dice_cmd = expand_cmd->add_subcommand("nest-dice", "Dice multiplication");
  nest_dice_cmd->add_option("base", nest_base)->required();
  nest_dice_cmd->add_option("subs", nest_subs, "One substituting identity, or one per base die")->required();

  // relabel
  auto* relabel_cmd = app.add_subcommand("relabel", "Move a 5-dice identity between step patterns");
  std::vector<std::string> relabel_ids;
  std::string relabel_from = "[5D:]", relabel_to = "[5D:1]";
  relabel_cmd->add_option("identities", relabel_ids)->required();
  relabel_cmd->add_option("--from", relabel_from);
  relabel_cmd->add_option("--to", relabel_to);

  // decompose
  auto* decompose_cmd = app.add_subcommand("decompose", "List the composing 3-dice identities of a [5D:] NI");
  std::string decompose_arg;
  decompose_cmd->add_option("identity", decompose_arg, "Identity or file")->required();

  // compose
  auto* compose_cmd = app.add_subcommand("compose", "Compose a [5D:] NI from five 3-dice NIs");
  std::optional<std::string> compose_spec;
  std::optional<std::string> compose_pool;
  std::size_t compose_limit = 50;
  compose_cmd->add_option("--spec", compose_spec, "Spec file of 'ABD: <identity>' lines");
  compose_cmd->add_option("--generate", compose_pool, "Search compositions over a list of 3-dice NIs");
  compose_cmd->add_option("--limit", compose_limit, "Maximum identities for --generate");

  // analyze
  auto* analyze_cmd = app.add_subcommand("analyze", "Viable-index gap analysis");
  analyze_cmd->require_subcommand(1);
  std::string an_desc, an_mode = "irreducible", an_format = "csv";
  std::optional<std::string> an_gaps_file;
  std::size_t an_min_len = 4, an_min_reps = 3, an_max_len = 0;
  bool an_tiled = false, an_splits = false;
  auto* gaps_cmd = analyze_cmd->add_subcommand("gaps", "Print the gap sequence");
  gaps_cmd->add_option("--descriptor,-d", an_desc)->required();
  gaps_cmd->add_option("--mode,-m", an_mode);
  gaps_cmd->add_option("--format", an_format)->check(CLI::IsMember({"csv", "text", "json"}));
  auto* repeats_cmd = analyze_cmd->add_subcommand("repeats", "Mine repeated gap patterns");
  repeats_cmd->add_option("--descriptor,-d", an_desc);
  repeats_cmd->add_option("--mode,-m", an_mode);
  repeats_cmd->add_option("--gaps", an_gaps_file, "Read gaps (one integer per line) instead of enumerating");
  repeats_cmd->add_option("--min-len", an_min_len);
  repeats_cmd->add_option("--min-reps", an_min_reps);
  repeats_cmd->add_option("--max-len", an_max_len);
  repeats_cmd->add_flag("--tiled", an_tiled, "Take the most frequent pattern first, then mine the rest");
  repeats_cmd->add_flag("--splits", an_splits, "Report occurrences with one element split into parts");

  // oracle
  auto* oracle_cmd = app.add_subcommand("oracle", "Brute-force NIs from explicit dice");
  int or_dice = 3, or_sides = 3, or_vmax = 9;
  oracle_cmd->add_option("--dice", or_dice);
  oracle_cmd->add_option("--sides", or_sides);
  oracle_cmd->add_option("--vmax", or_vmax);

  // removal
  auto* removal_cmd = app.add_subcommand("removal", "Check whether dropping dice leaves an NI");
  std::string rm_id, rm_drop, rm_desc;
  bool rm_all = false;
  removal_cmd->add_option("identity", rm_id)->required();
  removal_cmd->add_option("--drop", rm_drop, "Letters of the dice to drop");
  removal_cmd->add_option("--descriptor,-d", rm_desc, "Target descriptor")->required();
  removal_cmd->add_flag("--all", rm_all, "Try every drop set of the right size");

  std::vector<std::string> reversed(argv.begin() + (argv.empty() ? 0 : 1), argv.end());
  std::reverse(reversed.begin(), reversed.end());
  try {
    app.parse(std::move(reversed));
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return ok;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return ok;
  } catch (const CLI::ParseError& e) {
    err << e.what() << '\n';
    return usage;
  }

  try {
    if (*parse_cmd) {
      Identity id = parse_identity(parse_text);
      if (!parse_level.empty()) {
        id = canonicalize(id, parse_level == "irreducible" ? CanonLevel::irreducible : CanonLevel::alphabetical_dupe);
      }
      const int k = id.dice_count();
      const int n = static_cast<int>(id.face_count(0));
      const bool viable = is_viable(id, k, n);
      std::optional<std::string> encoding;
      if (!id.empty() && id.die(0) == 0) encoding = encode_identity(id, k).to_string();
      if (parse_format == "json") {
        nlohmann::json j{{"identity", format_identity(id)}, {"slots", id.size()}, {"dice", k}, {"viable", viable}};
        if (viable) j["sides"] = n;
        if (encoding) j["encoding"] = *encoding;
        out << j.dump() << '\n';
      } else {
        out << format_identity(id) << '\n';
        out << "slots: " << id.size() << '\n';
        out << "dice: " << k << '\n';
        if (viable) out << "sides: " << n << '\n';
        else out << "viable: no\n";
        if (encoding) out << "encoding: " << *encoding << '\n';
      }
      return ok;
    }

    if (*solve_cmd) {
      write_dice(out, solve(detail::load_one(solve_text)));
      return ok;
    }

    if (*check_cmd) {
      std::ifstream in(check_file);
      if (!in) throw Error("cannot open " + check_file);
      const DiceSet ds = read_dice(in);
      const Descriptor d = parse_descriptor(check_desc);
      if (d.sides > 0 && d.sides != ds.sides()) {
        err << "side count mismatch\n";
        return failure;
      }
      if (!is_nontransitive_up_to_labels(ds, pattern_from_descriptor(d))) {
        err << "win pattern mismatch\n";
        return failure;
      }
      out << format_identity(dice_to_identity(ds, d)) << '\n';
      return ok;
    }

    if (*enum_cmd) {
      const Descriptor d = parse_descriptor(enum_desc);
      if (d.sides == 0) throw InvalidDescriptor("enumeration needs a side count");
      const Mode mode = parse_mode(enum_mode);
      const auto viable = count_viable(d, mode);
      const auto budget = combination_budget();
      if (viable > budget && !enum_long) {
        err << format_descriptor(d) << " has " << viable << " viable identities, above the budget of " << budget
            << "; pass --long-run or raise NI_BUDGET\n";
        return failure;
      }
      std::vector<EnumerationRecord> records;
      if (enum_jobs > 1 || enum_checkpoint) {
        records = enumerate_ni_partitioned(d, mode, ParallelOptions{enum_jobs, 2, enum_checkpoint});
      } else {
        records = collect_ni(d, mode);
      }
      std::ofstream file;
      if (enum_out) {
        file.open(*enum_out);
        if (!file) throw Error("cannot write " + *enum_out);
      }
      std::ostream& sink = enum_out ? static_cast<std::ostream&>(file) : out;
      if (enum_format == "csv") {
        sink << "index,viable_index,encoding,identity\n";
        for (std::size_t i = 0; i < records.size(); ++i) {
          sink << i << ',' << records[i].viable_index << ',' << records[i].encoding.to_string() << ','
               << format_identity(records[i].identity) << '\n';
        }
      } else {
        if (enum_header) sink << "# " << format_descriptor(d) << ' ' << to_string(mode) << '\n';
        for (const auto& r : records) sink << format_identity(r.identity) << '\n';
      }
      err << records.size() << " NIs among " << viable << " viable identities\n";
      return ok;
    }

    if (*expand_cmd) {
      int status = ok;
      if (*add_zero_cmd) {
        for (const auto& id : detail::load_identities(add_zero_ids)) detail::print_expansion(out, err, add_zero(id), expand_raw, status);
      } else if (*mul_one_cmd) {
        const Op op = detail::parse_op(mul_one_op);
        for (const auto& id : detail::load_identities(mul_one_ids)) {
          detail::print_expansion(out, err, multiply_by_one(id, op), expand_raw, status);
        }
      } else if (*add_cmd) {
        const auto ids = detail::load_identities(add_ids);
        std::vector<Op> joiners;
        if (add_joiners.empty()) {
          joiners.assign(ids.empty() ? 0 : ids.size() - 1, Op::less);
        } else {
          for (char c : add_joiners) joiners.push_back(detail::parse_op(std::string(1, c)));
        }
        detail::print_expansion(out, err, identity_addition(ids, joiners), expand_raw, status);
      } else {
        const NestMode mode = *nest_dice_cmd ? NestMode::dice_multiplication : NestMode::face_exponentiation;
        const Identity base = detail::load_one(nest_base);
        const auto subs = detail::load_identities(nest_subs);
        const SubstitutionPlan plan = subs.size() == 1 ? SubstitutionPlan::uniform(base, subs.front(), mode)
                                                       : SubstitutionPlan::per_die(base, subs, mode);
        detail::print_expansion(out, err, nest(base, plan), expand_raw, status);
      }
      return status;
    }

    if (*relabel_cmd) {
      const Descriptor from = parse_descriptor(relabel_from);
      const Descriptor to = parse_descriptor(relabel_to);
      const WinPattern target = pattern_from_descriptor(to);
      int status = ok;
      for (const auto& id : detail::load_identities(relabel_ids)) {
        const Identity r = step_relabel(id, from, to);
        out << format_identity(r) << '\n';
        if (!is_nontransitive(r, target)) {
          err << "not nontransitive under " << format_descriptor(to) << ": " << format_identity(r) << '\n';
          status = failure;
        }
      }
      return status;
    }

    if (*decompose_cmd) {
      write_composition_spec(out, CompositionSpec{decompose5(detail::load_one(decompose_arg))});
      return ok;
    }

    if (*compose_cmd) {
      if (compose_spec.has_value() == compose_pool.has_value()) {
        err << "compose needs exactly one of --spec or --generate\n";
        return usage;
      }
      if (compose_pool) {
        for (const auto& id : generate_compositions(detail::read_identity_file(*compose_pool), compose_limit)) {
          out << format_identity(id) << '\n';
        }
        return ok;
      }
      std::ifstream in(*compose_spec);
      if (!in) throw Error("cannot open " + *compose_spec);
      const auto result = compose5(read_composition_spec(in));
      if (result.empty()) {
        err << "no interleaving satisfies the spec\n";
        return failure;
      }
      for (const auto& id : result) out << format_identity(id) << '\n';
      return ok;
    }

    if (*analyze_cmd) {
      const Mode mode = parse_mode(an_mode);
      if (*gaps_cmd) {
        const auto g = gap_sequence(parse_descriptor(an_desc), mode);
        if (an_format == "csv") {
          write_gaps_csv(out, g);
        } else if (an_format == "json") {
          out << nlohmann::json{{"descriptor", format_descriptor(g.descriptor)},
                                {"mode", std::string(to_string(g.mode))},
                                {"viable_indexes", g.viable_indexes},
                                {"gaps", g.gaps}}
                     .dump()
              << '\n';
        } else {
          for (std::size_t i = 0; i < g.gaps.size(); ++i) out << (i ? ", " : "") << g.gaps[i];
          out << '\n';
        }
        return ok;
      }
      std::vector<std::uint64_t> gaps;
      if (an_gaps_file) {
        std::ifstream in(*an_gaps_file);
        if (!in) throw Error("cannot open " + *an_gaps_file);
        std::uint64_t v;
        while (in >> v) gaps.push_back(v);
        if (!in.eof()) throw SyntaxError("gap files hold one non-negative integer per line", 0);
      } else {
        if (an_desc.empty()) {
          err << "repeats needs --descriptor or --gaps\n";
          return usage;
        }
        gaps = gap_sequence(parse_descriptor(an_desc), mode).gaps;
      }
      RepeatOptions opt;
      opt.min_len = an_min_len;
      opt.min_reps = an_min_reps;
      opt.max_len = an_max_len;
      opt.detect_splits = an_splits;
      const auto reports = an_tiled ? tile_repeats(gaps, opt) : find_repeats(gaps, opt);
      out << to_json(reports).dump(2) << '\n';
      return ok;
    }

    if (*oracle_cmd) {
      for (const auto& id : brute_force_oracle(or_dice, or_sides, or_vmax)) out << format_identity(id) << '\n';
      return ok;
    }

    if (*removal_cmd) {
      const Identity id = detail::load_one(rm_id);
      const Descriptor target = parse_descriptor(rm_desc);
      const int k = id.dice_count();
      if (!rm_all) {
        const bool result = check_removal(id, detail::parse_letters(rm_drop), target);
        out << (result ? "true" : "false") << '\n';
        return result ? ok : failure;
      }
      const int drop_count = k - target.dice;
      if (drop_count < 0) throw ShapeMismatch("target has more dice than the identity");
      std::vector<bool> mask(static_cast<std::size_t>(k), false);
      std::fill(mask.end() - drop_count, mask.end(), true);
      std::size_t tried = 0, realised = 0;
      do {
        std::vector<Die> drop;
        for (int d = 0; d < k; ++d)
          if (mask[static_cast<std::size_t>(d)]) drop.push_back(static_cast<Die>(d));
        ++tried;
        if (check_removal(id, drop, target)) {
          ++realised;
          for (Die d : drop) out << die_letter(d);
          out << '\n';
        }
      } while (std::next_permutation(mask.begin(), mask.end()));
      err << realised << " of " << tried << " drop sets leave a " << format_descriptor(target) << " NI\n";
      return realised ? ok : failure;
    }
  } catch (const SyntaxError& e) {
    err << "syntax error: " << e.what() << '\n';
    return usage;
  } catch (const InvalidDescriptor& e) {
    err << "invalid descriptor: " << e.what() << '\n';
    return usage;
  } catch (const Error& e) {
    err << e.what() << '\n';
    return failure;
  }
  return usage;
}

}  // namespace ni::cli
