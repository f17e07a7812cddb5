#pragma once

// Command-line front end. Parsing fills a CliConfig; run() executes it and
// maps failures to exit codes: 1 for bad input or configuration, 2 when an
// internal cross-check disagrees, 3 when check finds a non-dividing set.

#include "gcdlcm/report_json.hpp"
#include "gcdlcm/search.hpp"
#include "gcdlcm/verification_suite.hpp"

#include "CLI11.hpp"

#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>
#include <string>

namespace gcdlcm::cli {

inline constexpr int exit_ok = 0;
inline constexpr int exit_config = 1;
inline constexpr int exit_internal = 2;
inline constexpr int exit_not_divides = 3;

struct CliConfig {
  std::string command;
  std::optional<std::string> set_literal;
  bool close = false;
  unsigned long e = 1;
  std::string frame;
  std::string sizes;
  std::string shard = "0/1";
  std::optional<std::string> journal;
  std::string output;  // empty picks the command's default
  std::string targets = "conjecture1,conjecture2,corollary37-audit";
  std::size_t workers = 1;
  std::optional<std::uint64_t> limit;
  std::string max_element = "9223372036854775808";  // 2^63
};

/// Parsed --set with its closure when one was requested.
struct ResolvedSet {
  std::vector<Integer> input;
  GcdClosedSet set;
  bool closure_applied;
};

inline std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, sep)) {
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    out.push_back(b == std::string::npos ? "" : item.substr(b, e - b + 1));
  }
  if (!text.empty() && text.back() == sep) out.emplace_back();
  return out;
}

inline Integer parse_positive(const std::string& text, const char* what) {
  const Integer z = parse_integer(text);
  if (sgn(z) <= 0) throw std::invalid_argument(std::string(what) + " must be positive, got " + text);
  return z;
}

inline ResolvedSet resolve_set(const CliConfig& c) {
  if (!c.set_literal) throw std::invalid_argument("--set is required for " + c.command);
  const Integer cap = parse_positive(c.max_element, "--max-element");
  std::vector<Integer> xs;
  std::set<Integer> seen;
  for (const auto& tok : split(*c.set_literal, ',')) {
    if (tok.empty()) throw std::invalid_argument("empty entry in --set '" + *c.set_literal + "'");
    const Integer x = parse_positive(tok, "set elements");
    if (x > cap) throw std::invalid_argument("element " + tok + " exceeds --max-element " + cap.get_str());
    if (!seen.insert(x).second) throw std::invalid_argument("duplicate element " + tok + " in --set");
    xs.push_back(x);
  }
  if (!c.close) return ResolvedSet{xs, GcdClosedSet::from_elements(xs), false};
  auto closed = gcd_closure(xs);
  const bool grew = closed.size() != xs.size();
  return ResolvedSet{xs, std::move(closed), grew};
}

inline Json input_json(const ResolvedSet& r) {
  Json a = Json::array();
  for (const auto& x : r.input) a.push_back(x.get_str());
  return Json{{"input", a}, {"closure_applied", r.closure_applied}};
}

inline std::string join(const GcdClosedSet& s, const std::vector<Index>& idx) {
  if (idx.empty()) return "-";
  std::string out;
  for (Index i : idx) out += (out.empty() ? "" : ",") + s[i].get_str();
  return out;
}

inline std::string yes_no(bool b) { return b ? "yes" : "no"; }

inline std::string input_line(const ResolvedSet& r) {
  std::string out;
  for (const auto& x : r.input) out += (out.empty() ? "" : ",") + x.get_str();
  return "{" + out + "}";
}

// ---------------------------------------------------------------------------
// Commands

inline int cmd_analyze(const CliConfig& c, std::ostream& out) {
  const auto rs = resolve_set(c);
  const auto& s = rs.set;
  const auto r = structural_flags(s);
  if (c.output == "dot") {
    write_hasse_dot(out, s);
    return exit_ok;
  }
  if (c.output == "json") {
    Json j = input_json(rs);
    const Json body = structure_json(s, r);
    for (auto& [k, v] : body.items()) j[k] = v;
    out << j.dump(2) << '\n';
    return exit_ok;
  }
  out << "set       " << s.to_string() << '\n';
  if (rs.closure_applied) out << "closure   applied to input " << input_line(rs) << '\n';
  std::size_t w = 7;
  for (Index i = 0; i < s.size(); ++i) w = std::max({w, s[i].get_str().size(), join(s, r.elements[i].gtd).size()});
  w += 2;
  out << std::left << std::setw(static_cast<int>(w)) << "element" << std::setw(static_cast<int>(w)) << "GTD"
      << std::setw(static_cast<int>(w)) << "D_S" << "multiples" << '\n';
  for (Index i = 0; i < s.size(); ++i) {
    const auto& e = r.elements[i];
    out << std::setw(static_cast<int>(w)) << s[i].get_str() << std::setw(static_cast<int>(w)) << join(s, e.gtd)
        << std::setw(static_cast<int>(w)) << join(s, e.dset) << join(s, e.multiples) << '\n';
  }
  out << std::right;
  out << "divisor chain     " << yes_no(r.is_divisor_chain) << '\n'
      << "factor-closed     " << yes_no(r.is_factor_closed) << '\n'
      << "multiple-closed   " << yes_no(r.is_multiple_closed) << '\n'
      << "max GTD count     " << r.max_gtd_count << '\n'
      << "condition C       " << yes_no(r.condition_c.holds) << " (checked " << join(s, r.condition_c.checked)
      << "; violated " << join(s, r.condition_c.violations) << ")\n"
      << "condition M       " << yes_no(r.condition_m.holds) << " (checked " << join(s, r.condition_m.checked)
      << "; violated " << join(s, r.condition_m.violations) << ")\n";
  return exit_ok;
}

inline int cmd_check(const CliConfig& c, std::ostream& out) {
  const auto rs = resolve_set(c);
  const auto& s = rs.set;
  const auto rep = divisibility_report(s, structural_flags(s), c.e);
  const int code = rep.verdict == Verdict::Divides ? exit_ok : exit_not_divides;
  if (c.output == "json") {
    Json j = input_json(rs);
    const Json body = divisibility_json(s, rep);
    for (auto& [k, v] : body.items()) j[k] = v;
    out << j.dump(2) << '\n';
    return code;
  }
  out << "set       " << s.to_string() << '\n';
  if (rs.closure_applied) out << "closure   applied to input " << input_line(rs) << '\n';
  out << "e         " << c.e << '\n' << "verdict   " << to_string(rep.verdict) << '\n';
  if (rep.witness)
    out << "witness   U[" << s[rep.witness->row].get_str() << "][" << s[rep.witness->col].get_str()
        << "] = " << rep.witness->value.get_str() << '\n';
  if (s.size() <= 12) {
    out << "U = [S^e] (S^e)^-1\n";
    for (const auto& row : rep.u.to_strings()) {
      out << ' ';
      for (const auto& v : row) out << ' ' << std::setw(8) << v;
      out << '\n';
    }
  }
  return code;
}

inline int cmd_verify(const CliConfig& c, std::ostream& out) {
  const bool json = c.output == "json";
  bool ok = true;
  Json checks = Json::array();
  run_verification_suite([&](const SuiteCheck& k) {
    ok = ok && k.passed;
    if (json) {
      checks.push_back(Json{{"name", k.name}, {"passed", k.passed}, {"cases", k.cases}, {"detail", k.detail}});
      return;
    }
    out << (k.passed ? "PASS  " : "FAIL  ") << k.name << " (" << k.cases << " cases)";
    if (!k.passed) out << ": " << k.detail;
    out << std::endl;
  });
  if (json) out << Json{{"passed", ok}, {"checks", checks}}.dump(2) << '\n';
  return ok ? exit_ok : exit_internal;
}

inline SearchTask task_from_config(const CliConfig& c) {
  SearchTask t;
  if (c.frame.empty()) throw std::invalid_argument("--frame is required for search");
  if (c.sizes.empty()) throw std::invalid_argument("--sizes is required for search");
  t.frame = parse_positive(c.frame, "--frame");
  const auto dots = c.sizes.find("..");
  auto size_of = [](const std::string& s) {
    const Integer z = parse_positive(s, "--sizes");
    if (!z.fits_ulong_p() || z > max_search_size)
      throw std::invalid_argument("--sizes bound " + s + " exceeds " + std::to_string(max_search_size));
    return static_cast<std::size_t>(z.get_ui());
  };
  if (dots == std::string::npos) {
    t.min_size = t.max_size = size_of(c.sizes);
  } else {
    t.min_size = size_of(c.sizes.substr(0, dots));
    t.max_size = size_of(c.sizes.substr(dots + 2));
  }
  const auto parts = split(c.shard, '/');
  if (parts.size() != 2) throw std::invalid_argument("--shard expects i/t, got '" + c.shard + "'");
  const Integer i = parse_integer(parts[0]), total = parse_positive(parts[1], "shard count");
  if (sgn(i) < 0 || i >= total || !total.fits_ulong_p())
    throw std::invalid_argument("--shard index must satisfy 0 <= i < t, got '" + c.shard + "'");
  t.shard = {i.get_ui(), total.get_ui()};
  t.targets.clear();
  for (const auto& name : split(c.targets, ',')) t.targets.insert(parse_target(name));
  t.e = c.e;
  t.limit = c.limit;
  t.magnitude_cap = parse_positive(c.max_element, "--max-element");
  validate(t);
  return t;
}

/// Shared by search and resume: streams or journals the hunt, then summarizes.
inline int drive_hunt(const SearchTask& t, const CliConfig& c, std::ostream& out) {
  const bool json = c.output == "json";
  std::map<std::string, std::uint64_t> flag_counts;
  std::uint64_t evaluated = 0, not_divides = 0;
  auto observe = [&](const SearchRecord& r) {
    ++evaluated;
    if (r.verdict == Verdict::DoesNotDivide) ++not_divides;
    for (const auto& f : r.flags) ++flag_counts[f];
  };
  std::uint64_t end = 0;
  if (c.journal) {
    end = run_journaled(t, *c.journal, c.workers, observe);
  } else {
    end = hunt(t, 0, c.workers, [&](const SearchRecord& r) {
      observe(r);
      if (json) {
        out << record_json(r).dump() << '\n';
      } else {
        out << std::setw(8) << r.cursor << "  " << r.set.to_string() << "  " << to_string(r.verdict);
        for (const auto& f : r.flags) out << "  [" << f << ']';
        out << '\n';
      }
    });
  }
  Json flags = Json::object();
  for (const auto& [k, v] : flag_counts) flags[k] = v;
  if (json) {
    if (c.journal)
      out << Json{{"fingerprint", task_fingerprint(t)}, {"journal", *c.journal}, {"cursor", end},
                  {"evaluated", evaluated}, {"does_not_divide", not_divides}, {"flags", flags}}
                 .dump()
          << '\n';
    return exit_ok;
  }
  out << "task " << task_fingerprint(t) << ": cursor " << end << ", evaluated " << evaluated << " this run, "
      << not_divides << " not dividing\n";
  if (flag_counts.empty()) out << "flags: none\n";
  for (const auto& [k, v] : flag_counts) out << "flag " << k << ": " << v << '\n';
  return exit_ok;
}

inline int cmd_search(const CliConfig& c, std::ostream& out) { return drive_hunt(task_from_config(c), c, out); }

inline int cmd_resume(const CliConfig& c, std::ostream& out) {
  if (!c.journal) throw std::invalid_argument("--journal is required for resume");
  return drive_hunt(resume(*c.journal).task, c, out);
}

inline int cmd_export(const CliConfig& c, std::ostream& out) {
  const auto s = resolve_set(c).set;
  if (c.output == "csv") out << coefficient_csv(s, coefficient_table_fast(s, c.e));
  else write_hasse_dot(out, s);
  return exit_ok;
}

/// Executes a parsed configuration. Diagnostics go to err.
inline int run(CliConfig c, std::ostream& out, std::ostream& err) {
  static const std::map<std::string, std::pair<std::string, std::set<std::string>>> outputs{
      {"analyze", {"table", {"table", "json", "dot"}}}, {"check", {"table", {"table", "json"}}},
      {"verify-paper", {"table", {"table", "json"}}},    {"search", {"table", {"table", "json"}}},
      {"resume", {"table", {"table", "json"}}},          {"export", {"dot", {"dot", "csv"}}}};
  try {
    const auto it = outputs.find(c.command);
    if (it == outputs.end()) throw std::invalid_argument("unknown command '" + c.command + "'");
    if (c.output.empty()) c.output = it->second.first;
    if (!it->second.second.count(c.output))
      throw std::invalid_argument("--output " + c.output + " is not available for " + c.command);
    if (c.e == 0) throw std::invalid_argument("--e must be a positive integer");
    if (c.command == "analyze") return cmd_analyze(c, out);
    if (c.command == "check") return cmd_check(c, out);
    if (c.command == "verify-paper") return cmd_verify(c, out);
    if (c.command == "search") return cmd_search(c, out);
    if (c.command == "resume") return cmd_resume(c, out);
    return cmd_export(c, out);
  } catch (const InternalError& e) {
    err << "internal error: " << e.what() << '\n';
    return exit_internal;
  } catch (const JournalError& e) {
    err << "journal error at byte " << e.offset() << ": " << e.what() << '\n';
    return exit_config;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return exit_config;
  }
}

/// Parses argv into a config. Returns an exit code when the process should
/// stop here (help requested or a parse error).
inline std::optional<int> parse(int argc, const char* const* argv, CliConfig& c, std::ostream& out,
                                std::ostream& err) {
  CLI::App app{"Exact GCD/LCM matrix divisibility on gcd-closed sets", "gcdlcm"};
  app.require_subcommand(1, 1);
  app.set_help_all_flag("--help-all", "Show help for every command");

  auto add_set = [&](CLI::App* sub) {
    sub->add_option("--set", c.set_literal, "Comma-separated positive integers")->required();
    sub->add_flag("--close", c.close, "Replace the input by its gcd closure");
    sub->add_option("--max-element", c.max_element, "Largest accepted element")->capture_default_str();
  };
  auto add_output = [&](CLI::App* sub, const std::string& choices) {
    sub->add_option("--output", c.output, "Output format: " + choices);
  };
  auto add_e = [&](CLI::App* sub) {
    sub->add_option("--e", c.e, "Exponent of the power function x^e")->capture_default_str();
  };
  auto add_run = [&](CLI::App* sub) {
    sub->add_option("--workers", c.workers, "Evaluation threads")->check(CLI::Range(1, 256))->capture_default_str();
  };

  auto* analyze = app.add_subcommand("analyze", "Structure report for a set");
  add_set(analyze);
  add_output(analyze, "table, json, dot");
  auto* check = app.add_subcommand("check", "Decide whether (S^e) divides [S^e] (exit 3 when it does not)");
  add_set(check);
  add_e(check);
  add_output(check, "table, json");
  auto* verify = app.add_subcommand("verify-paper", "Run the built-in verification suite");
  add_output(verify, "table, json");
  auto* search = app.add_subcommand("search", "Enumerate gcd-closed subsets of a frame's divisors and record findings");
  search->add_option("--frame", c.frame, "Frame N; sets are drawn from the divisors of N")->required();
  search->add_option("--sizes", c.sizes, "Set sizes, 'n' or 'a..b'")->required();
  search->add_option("--shard", c.shard, "Shard i/t")->capture_default_str();
  search->add_option("--journal", c.journal, "Append records to this journal (resumable)");
  search->add_option("--targets", c.targets, "conjecture1, conjecture2, corollary37-audit")->capture_default_str();
  search->add_option("--limit", c.limit, "Stop after this many records");
  search->add_option("--max-element", c.max_element, "Ignore divisors above this bound")->capture_default_str();
  add_e(search);
  add_run(search);
  add_output(search, "table, json");
  auto* res = app.add_subcommand("resume", "Continue the search recorded in a journal");
  res->add_option("--journal", c.journal, "Journal to continue")->required();
  add_run(res);
  add_output(res, "table, json");
  auto* exp = app.add_subcommand("export", "Hasse diagram (dot) or coefficient table (csv)");
  add_set(exp);
  add_e(exp);
  add_output(exp, "dot, csv");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? exit_ok : exit_config;
  }
  for (auto* sub : app.get_subcommands()) c.command = sub->get_name();
  return std::nullopt;
}

inline int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CliConfig c;
  if (auto code = parse(argc, argv, c, out, err)) return *code;
  return run(std::move(c), out, err);
}

}  // namespace gcdlcm::cli
