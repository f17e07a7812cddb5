#pragma once

// Exhaustive enumeration of gcd-closed subsets of a divisor frame, the
// counterexample hunt over them, and the append-only journal that makes long
// runs resumable.

#include "gcdlcm/report_json.hpp"
#include "gcdlcm/theorems.hpp"

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <ctime>
#include <exception>
#include <fstream>
#include <functional>
#include <iomanip>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace gcdlcm {

// ---------------------------------------------------------------------------
// Enumeration

struct ShardSpec {
  std::size_t index = 0;
  std::size_t total = 1;
  friend bool operator==(const ShardSpec&, const ShardSpec&) = default;
};

inline constexpr std::size_t default_max_divisors = 64;

/// Divisor-count limit for frames; GCDLCM_MAX_DIVISORS overrides the default.
inline std::size_t max_frame_divisors() {
  if (const char* env = std::getenv("GCDLCM_MAX_DIVISORS"); env && *env) {
    char* end = nullptr;
    const unsigned long v = std::strtoul(env, &end, 10);
    if (*end != '\0' || v == 0) throw std::invalid_argument(std::string("GCDLCM_MAX_DIVISORS: not a positive integer: ") + env);
    return v;
  }
  return default_max_divisors;
}

inline std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

/// Shard of a candidate, from the first ceil(n/2) elements joined by commas.
inline std::size_t shard_of(const std::vector<Integer>& prefix, std::size_t total) {
  std::string key;
  for (std::size_t i = 0; i < prefix.size(); ++i) {
    if (i) key += ',';
    key += prefix[i].get_str();
  }
  return static_cast<std::size_t>(fnv1a64(key) % total);
}

/// Divisors of frame not exceeding cap. Throws std::invalid_argument when the
/// frame has more divisors than the configured limit.
inline std::vector<Integer> frame_universe(const Integer& frame, const std::optional<Integer>& cap = std::nullopt) {
  if (sgn(frame) <= 0) throw std::invalid_argument("frame must be a positive integer, got " + frame.get_str());
  Integer count = 1;
  for (const auto& pp : factorize(frame)) count *= pp.exponent + 1;
  const std::size_t limit = max_frame_divisors();
  if (count > limit)
    throw std::invalid_argument("frame " + frame.get_str() + " has " + count.get_str() +
                                " divisors, above the limit of " + std::to_string(limit));
  auto ds = divisors(frame);
  if (cap) ds.erase(std::remove_if(ds.begin(), ds.end(), [&](const Integer& d) { return d > *cap; }), ds.end());
  return ds;
}

/// Pull cursor over the gcd-closed n-subsets of a sorted universe, in
/// lexicographic order of element lists. A sorted prefix of a gcd-closed set
/// is gcd-closed, so depth-first extension only needs gcd(new, chosen) to be
/// chosen already. Candidates outside the shard are cut at depth ceil(n/2).
class GcdClosedEnumerator {
 public:
  GcdClosedEnumerator(std::vector<Integer> universe, std::size_t n, ShardSpec shard = {})
      : u_(std::move(universe)), n_(n), shard_(shard), hash_depth_((n + 1) / 2) {
    if (n == 0) throw std::invalid_argument("enumeration size must be positive");
    if (shard.total == 0 || shard.index >= shard.total)
      throw std::invalid_argument("shard index must be below the shard total");
    const std::size_t m = u_.size();
    gcd_.assign(m * m, npos);
    for (std::size_t a = 0; a < m; ++a)
      for (std::size_t b = 0; b < m; ++b) {
        const Integer g = gcd(u_[a], u_[b]);
        auto it = std::lower_bound(u_.begin(), u_.end(), g);
        if (it != u_.end() && *it == g) gcd_[a * m + b] = static_cast<std::size_t>(it - u_.begin());
      }
    chosen_.assign(m, 0);
    done_ = n_ > m;
  }

  GcdClosedEnumerator(const Integer& frame, std::size_t n, ShardSpec shard = {})
      : GcdClosedEnumerator(frame_universe(frame), n, shard) {}

  std::optional<GcdClosedSet> next() {
    if (done_) return std::nullopt;
    std::size_t from = 0;
    if (started_) {
      from = stack_.back() + 1;
      pop();
    }
    started_ = true;
    for (;;) {
      if (push_from(from)) {
        if (stack_.size() == n_) return current();
        from = stack_.back() + 1;
        continue;
      }
      if (stack_.empty()) {
        done_ = true;
        return std::nullopt;
      }
      from = stack_.back() + 1;
      pop();
    }
  }

  /// Advances past k sets; returns how many were actually skipped.
  std::uint64_t skip(std::uint64_t k) {
    std::uint64_t s = 0;
    while (s < k && next()) ++s;
    return s;
  }

 private:
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  bool admissible(std::size_t k) const {
    const std::size_t m = u_.size();
    for (std::size_t c : stack_) {
      const std::size_t g = gcd_[c * m + k];
      if (g == npos || !chosen_[g]) return false;
    }
    return true;
  }

  bool in_shard() const {
    if (shard_.total == 1) return true;
    std::vector<Integer> prefix;
    for (std::size_t c : stack_) prefix.push_back(u_[c]);
    return shard_of(prefix, shard_.total) == shard_.index;
  }

  bool push_from(std::size_t from) {
    const std::size_t need = n_ - stack_.size();
    for (std::size_t k = from; k + need <= u_.size(); ++k) {
      if (!admissible(k)) continue;
      stack_.push_back(k);
      chosen_[k] = 1;
      if (stack_.size() == hash_depth_ && !in_shard()) {
        pop();
        continue;
      }
      return true;
    }
    return false;
  }

  void pop() {
    chosen_[stack_.back()] = 0;
    stack_.pop_back();
  }

  GcdClosedSet current() const {
    std::vector<Integer> xs;
    for (std::size_t c : stack_) xs.push_back(u_[c]);
    return GcdClosedSet::from_elements(std::move(xs));
  }

  std::vector<Integer> u_;
  std::size_t n_;
  ShardSpec shard_;
  std::size_t hash_depth_;
  std::vector<std::size_t> gcd_;
  std::vector<char> chosen_;
  std::vector<std::size_t> stack_;
  bool started_ = false;
  bool done_ = false;
};

inline std::vector<GcdClosedSet> enumerate_gcd_closed(const Integer& frame, std::size_t n, ShardSpec shard = {}) {
  GcdClosedEnumerator it(frame, n, shard);
  std::vector<GcdClosedSet> out;
  while (auto s = it.next()) out.push_back(std::move(*s));
  return out;
}

// ---------------------------------------------------------------------------
// Tasks and records

enum class Target { Conjecture1, Conjecture2, Corollary37Audit };

inline const char* to_string(Target t) {
  switch (t) {
    case Target::Conjecture1: return "conjecture1";
    case Target::Conjecture2: return "conjecture2";
    case Target::Corollary37Audit: return "corollary37-audit";
  }
  return "?";
}

inline Target parse_target(const std::string& s) {
  if (s == "conjecture1") return Target::Conjecture1;
  if (s == "conjecture2") return Target::Conjecture2;
  if (s == "corollary37-audit") return Target::Corollary37Audit;
  throw std::invalid_argument("unknown target '" + s + "'");
}

inline constexpr std::size_t max_search_size = 12;

struct SearchTask {
  Integer frame = 1;
  std::size_t min_size = 1;
  std::size_t max_size = 1;
  Integer magnitude_cap = Integer(1) << 63;  // universe = divisors of frame up to this
  std::set<Target> targets{Target::Conjecture1, Target::Conjecture2, Target::Corollary37Audit};
  unsigned long e = 1;
  ShardSpec shard;
  std::optional<std::uint64_t> limit;  // stop after this many records
};

inline void validate(const SearchTask& t) {
  if (t.min_size == 0 || t.min_size > t.max_size || t.max_size > max_search_size)
    throw std::invalid_argument("size range must satisfy 1 <= min <= max <= " + std::to_string(max_search_size));
  if (t.e == 0) throw std::invalid_argument("exponent e must be a positive integer");
  if (t.shard.total == 0 || t.shard.index >= t.shard.total) throw std::invalid_argument("shard index must be below the shard total");
  if (sgn(t.magnitude_cap) <= 0) throw std::invalid_argument("magnitude cap must be positive");
  if (t.targets.empty()) throw std::invalid_argument("at least one target is required");
  frame_universe(t.frame);
}

inline Json task_json(const SearchTask& t) {
  Json targets = Json::array();
  for (auto x : t.targets) targets.push_back(to_string(x));
  return Json{{"frame", t.frame.get_str()},
              {"min_size", t.min_size},
              {"max_size", t.max_size},
              {"magnitude_cap", t.magnitude_cap.get_str()},
              {"targets", targets},
              {"e", t.e},
              {"shard", Json{{"index", t.shard.index}, {"total", t.shard.total}}},
              {"limit", t.limit ? Json(*t.limit) : Json(nullptr)}};
}

inline SearchTask task_from_json(const Json& j) {
  SearchTask t;
  t.frame = parse_integer(j.at("frame").get<std::string>());
  t.min_size = j.at("min_size").get<std::size_t>();
  t.max_size = j.at("max_size").get<std::size_t>();
  t.magnitude_cap = parse_integer(j.at("magnitude_cap").get<std::string>());
  t.targets.clear();
  for (const auto& x : j.at("targets")) t.targets.insert(parse_target(x.get<std::string>()));
  t.e = j.at("e").get<unsigned long>();
  t.shard.index = j.at("shard").at("index").get<std::size_t>();
  t.shard.total = j.at("shard").at("total").get<std::size_t>();
  if (!j.at("limit").is_null()) t.limit = j.at("limit").get<std::uint64_t>();
  return t;
}

/// Hash of the canonical task serialization, 16 hex digits.
inline std::string task_fingerprint(const SearchTask& t) {
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << fnv1a64(task_json(t).dump());
  return os.str();
}

/// Exponent pattern of each prime across the elements, columns sorted, so
/// sets that differ only by a relabelling of primes share a signature.
inline std::string multiplicative_signature(const GcdClosedSet& s) {
  Integer l = 1;
  for (const auto& x : s.elements()) l = lcm(l, x);
  std::vector<std::vector<unsigned long>> columns;
  for (const auto& pp : factorize(l)) {
    std::vector<unsigned long> col;
    for (const auto& x : s.elements()) col.push_back(mpz_remove(Integer().get_mpz_t(), x.get_mpz_t(), pp.prime.get_mpz_t()));
    columns.push_back(std::move(col));
  }
  std::sort(columns.begin(), columns.end());
  std::string out = "[";
  for (std::size_t c = 0; c < columns.size(); ++c) {
    out += c ? ",[" : "[";
    for (std::size_t k = 0; k < columns[c].size(); ++k) out += (k ? "," : "") + std::to_string(columns[c][k]);
    out += "]";
  }
  return out + "]";
}

struct SearchRecord {
  std::uint64_t cursor = 0;
  GcdClosedSet set;
  StructureReport structure;
  std::string signature;
  Verdict verdict = Verdict::Divides;
  std::optional<ClassificationVerdict> classification;
  std::vector<std::string> flags;
  std::string timestamp;
};

inline std::vector<std::string> filter_flags(const std::vector<std::string>& flags, const std::set<Target>& targets) {
  std::vector<std::string> out;
  for (const auto& f : flags) {
    const bool keep = (f.rfind("conjecture1", 0) == 0 && targets.count(Target::Conjecture1)) ||
                      (f.rfind("conjecture2", 0) == 0 && targets.count(Target::Conjecture2)) ||
                      (f.rfind("corollary37", 0) == 0 && targets.count(Target::Corollary37Audit));
    if (keep) out.push_back(f);
  }
  return out;
}

/// Everything in a record except cursor and timestamp.
inline SearchRecord evaluate_set(GcdClosedSet s, unsigned long e, const std::set<Target>& targets) {
  auto structure = structural_flags(s);
  const Verdict verdict = divisibility_report(s, structure, e).verdict;
  std::optional<ClassificationVerdict> cls;
  if (s.size() <= 8) cls = classify_small(s, structure);
  auto flags = filter_flags(finding_flags(s, structure, verdict), targets);
  auto sig = multiplicative_signature(s);
  return SearchRecord{0, std::move(s), std::move(structure), std::move(sig), verdict, cls, std::move(flags), {}};
}

inline std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

inline Json record_json(const SearchRecord& r) {
  const auto& st = r.structure;
  Json structure{{"size", r.set.size()},
                 {"max_gtd_count", st.max_gtd_count},
                 {"divisor_chain", st.is_divisor_chain},
                 {"factor_closed", st.is_factor_closed},
                 {"condition_c", st.condition_c.holds},
                 {"condition_m", st.condition_m.holds},
                 {"signature", r.signature}};
  return Json{{"cursor", r.cursor},
              {"set", set_json(r.set)},
              {"structure", structure},
              {"verdict", to_string(r.verdict)},
              {"classification", r.classification ? classification_json(*r.classification) : Json(nullptr)},
              {"flags", r.flags},
              {"timestamp", r.timestamp}};
}

// ---------------------------------------------------------------------------
// Hunt

/// Concatenated stream over sizes min..max of the task's shard.
class TaskStream {
 public:
  explicit TaskStream(const SearchTask& t) : task_(t), universe_(frame_universe(t.frame, t.magnitude_cap)), size_(t.min_size) {
    open();
  }

  std::optional<GcdClosedSet> next() {
    while (it_) {
      if (auto s = it_->next()) return s;
      if (++size_ > task_.max_size) {
        it_.reset();
        break;
      }
      open();
    }
    return std::nullopt;
  }

 private:
  void open() { it_.emplace(universe_, size_, task_.shard); }

  SearchTask task_;
  std::vector<Integer> universe_;
  std::size_t size_;
  std::optional<GcdClosedEnumerator> it_;
};

/// Evaluates the task's stream from start_cursor on, calling sink once per
/// record in stream order. Sets are evaluated in batches on up to `workers`
/// threads; any failure aborts the run. Returns the cursor after the last
/// record emitted.
inline std::uint64_t hunt(const SearchTask& task, std::uint64_t start_cursor, std::size_t workers,
                          const std::function<void(const SearchRecord&)>& sink) {
  validate(task);
  workers = std::max<std::size_t>(workers, 1);
  TaskStream stream(task);
  std::uint64_t cursor = 0;
  while (cursor < start_cursor && stream.next()) ++cursor;
  if (cursor < start_cursor) return cursor;

  const std::size_t batch_size = workers * 32;
  std::vector<GcdClosedSet> batch;
  std::vector<std::optional<SearchRecord>> out;
  for (;;) {
    batch.clear();
    while (batch.size() < batch_size && (!task.limit || cursor + batch.size() < *task.limit)) {
      auto s = stream.next();
      if (!s) break;
      batch.push_back(std::move(*s));
    }
    if (batch.empty()) return cursor;

    out.assign(batch.size(), std::nullopt);
    std::vector<std::exception_ptr> errors(workers);
    auto work = [&](std::size_t w) {
      try {
        for (std::size_t k = w; k < batch.size(); k += workers) out[k] = evaluate_set(batch[k], task.e, task.targets);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    };
    if (workers == 1) {
      work(0);
    } else {
      std::vector<std::thread> pool;
      for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work, w);
      for (auto& th : pool) th.join();
    }
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
    for (auto& rec : out) {
      rec->cursor = cursor++;
      rec->timestamp = utc_timestamp();
      sink(*rec);
    }
  }
}

// ---------------------------------------------------------------------------
// Journal

inline constexpr const char* journal_format = "gcdlcm-journal/1";

class JournalError : public std::runtime_error {
 public:
  JournalError(const std::string& what, std::uint64_t offset)
      : std::runtime_error(what + " at byte offset " + std::to_string(offset)), offset_(offset) {}
  std::uint64_t offset() const noexcept { return offset_; }

 private:
  std::uint64_t offset_;
};

struct JournalState {
  SearchTask task;
  std::string fingerprint;
  std::uint64_t cursor = 0;  // completed records
};

inline Json journal_header(const SearchTask& t) {
  return Json{{"format", journal_format}, {"fingerprint", task_fingerprint(t)}, {"task", task_json(t)}};
}

/// Parses a journal: header line, then one record per LF-terminated line with
/// consecutive cursors from 0. Any deviation is a JournalError carrying the
/// byte offset of the offending line.
inline JournalState read_journal(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open journal " + path);
  const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (bytes.empty()) throw JournalError("journal has no header", 0);

  JournalState st;
  std::size_t pos = 0;
  bool header = true;
  while (pos < bytes.size()) {
    const std::size_t eol = bytes.find('\n', pos);
    if (eol == std::string::npos) throw JournalError("unterminated line", pos);
    Json j;
    try {
      j = Json::parse(bytes.begin() + static_cast<long>(pos), bytes.begin() + static_cast<long>(eol));
    } catch (const Json::exception& e) {
      throw JournalError(std::string("malformed JSON (") + e.what() + ")", pos);
    }
    try {
      if (header) {
        if (j.at("format") != journal_format) throw JournalError("unknown journal format", pos);
        st.task = task_from_json(j.at("task"));
        st.fingerprint = j.at("fingerprint").get<std::string>();
        if (st.fingerprint != task_fingerprint(st.task)) throw JournalError("fingerprint does not match task", pos);
        header = false;
      } else {
        if (j.at("cursor").get<std::uint64_t>() != st.cursor) throw JournalError("record out of sequence", pos);
        ++st.cursor;
      }
    } catch (const Json::exception& e) {
      throw JournalError(std::string("malformed record (") + e.what() + ")", pos);
    } catch (const std::invalid_argument& e) {
      throw JournalError(std::string("malformed task (") + e.what() + ")", pos);
    }
    pos = eol + 1;
  }
  return st;
}

inline JournalState resume(const std::string& path) { return read_journal(path); }

/// Append-only writer. A fresh or empty file receives the header; an existing
/// journal must carry the same task fingerprint.
class JournalWriter {
 public:
  JournalWriter(const std::string& path, const SearchTask& task) {
    std::ifstream probe(path, std::ios::binary | std::ios::ate);
    const bool fresh = !probe || probe.tellg() == 0;
    probe.close();
    if (!fresh) {
      const auto st = read_journal(path);
      if (st.fingerprint != task_fingerprint(task))
        throw JournalError("journal belongs to task " + st.fingerprint + ", not " + task_fingerprint(task), 0);
      cursor_ = st.cursor;
    }
    out_.open(path, std::ios::binary | std::ios::app);
    if (!out_) throw std::invalid_argument("cannot write journal " + path);
    if (fresh) write_line(journal_header(task).dump());
  }

  std::uint64_t cursor() const noexcept { return cursor_; }

  void append(const SearchRecord& r) {
    if (r.cursor != cursor_) throw InternalError("journal append out of sequence");
    write_line(record_json(r).dump());
    ++cursor_;
  }

 private:
  void write_line(const std::string& line) {
    out_ << line << '\n';
    out_.flush();
    if (!out_) throw std::runtime_error("journal write failed");
  }

  std::ofstream out_;
  std::uint64_t cursor_ = 0;
};

/// Runs (or continues) a task against a journal; returns the final cursor.
inline std::uint64_t run_journaled(const SearchTask& task, const std::string& path, std::size_t workers,
                                   const std::function<void(const SearchRecord&)>& observe = {}) {
  validate(task);
  JournalWriter w(path, task);
  return hunt(task, w.cursor(), workers, [&](const SearchRecord& r) {
    w.append(r);
    if (observe) observe(r);
  });
}

/// Journal text with every record's timestamp removed, for comparisons.
inline std::string strip_timestamps(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open journal " + path);
  std::string line, out;
  while (std::getline(in, line)) {
    Json j = Json::parse(line);
    j.erase("timestamp");
    out += j.dump();
    out += '\n';
  }
  return out;
}

}  // namespace gcdlcm
