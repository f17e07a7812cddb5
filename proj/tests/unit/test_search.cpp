#include "gcdlcm/search.hpp"

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>

#include "oracles.hpp"
#include "support.hpp"

using namespace gcdlcm;
using testing_support::ints;
using testing_support::set_of;
namespace fs = std::filesystem;

namespace {

std::vector<std::vector<std::int64_t>> oracle_of_size(long frame, std::size_t n) {
  std::vector<std::vector<std::int64_t>> out;
  for (auto& v : oracle::closed_subsets(frame, n))
    if (v.size() == n) out.push_back(v);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::vector<std::int64_t>> as_lists(const std::vector<GcdClosedSet>& sets) {
  std::vector<std::vector<std::int64_t>> out;
  for (const auto& s : sets) out.push_back(testing_support::as_i64(s));
  return out;
}

class ScratchDir {
 public:
  explicit ScratchDir(const std::string& name) : path_(fs::temp_directory_path() / ("gcdlcm_test_" + name)) {
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~ScratchDir() { fs::remove_all(path_); }
  std::string file(const std::string& name) const { return (path_ / name).string(); }

 private:
  fs::path path_;
};

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path);
  std::vector<std::string> lines;
  for (std::string l; std::getline(in, l);) lines.push_back(l);
  return lines;
}

void write_lines(const std::string& path, const std::vector<std::string>& lines) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  for (const auto& l : lines) out << l << '\n';
}

SearchTask small_task() {
  SearchTask t;
  t.frame = 60;
  t.min_size = 2;
  t.max_size = 5;
  return t;
}

}  // namespace

TEST(Enumerate, Examples) {
  const auto twelve = as_lists(enumerate_gcd_closed(12, 2));
  EXPECT_EQ(twelve, oracle_of_size(12, 2));
  EXPECT_NE(std::find(twelve.begin(), twelve.end(), std::vector<std::int64_t>{3, 12}), twelve.end());
  EXPECT_EQ(std::find(twelve.begin(), twelve.end(), std::vector<std::int64_t>{4, 6}), twelve.end());
  EXPECT_EQ(as_lists(enumerate_gcd_closed(7, 2)), (std::vector<std::vector<std::int64_t>>{{1, 7}}));
  const auto thirty = enumerate_gcd_closed(30, 8);
  ASSERT_EQ(thirty.size(), 1u);
  EXPECT_EQ(thirty[0].elements(), ints({1, 2, 3, 5, 6, 10, 15, 30}));
  EXPECT_TRUE(enumerate_gcd_closed(30, 9).empty());
}

TEST(Enumerate, SoundAndCompleteOnSmallFrames) {
  for (long frame : {12L, 30L, 36L, 48L, 60L, 72L, 120L})
    for (std::size_t n = 1; n <= oracle::divisors(frame).size(); ++n)
      EXPECT_EQ(as_lists(enumerate_gcd_closed(frame, n)), oracle_of_size(frame, n)) << frame << " n=" << n;
}

TEST(Enumerate, ShardsPartitionTheStream) {
  for (std::size_t n = 1; n <= 8; ++n) {
    const auto whole = as_lists(enumerate_gcd_closed(60, n));
    std::vector<std::vector<std::int64_t>> merged;
    for (std::size_t i = 0; i < 3; ++i) {
      const auto part = as_lists(enumerate_gcd_closed(60, n, {i, 3}));
      EXPECT_TRUE(std::is_sorted(part.begin(), part.end()));
      merged.insert(merged.end(), part.begin(), part.end());
    }
    std::sort(merged.begin(), merged.end());
    EXPECT_EQ(merged, whole) << "n=" << n;
  }
}

TEST(Enumerate, ShardIsHashOfLeadingHalf) {
  for (const auto& s : enumerate_gcd_closed(60, 5, {1, 4})) {
    const std::vector<Integer> lead(s.elements().begin(), s.elements().begin() + 3);
    EXPECT_EQ(shard_of(lead, 4), 1u);
  }
}

TEST(Enumerate, SkipMatchesPulling) {
  GcdClosedEnumerator a(360, 4), b(360, 4);
  EXPECT_EQ(a.skip(25), 25u);
  for (int k = 0; k < 25; ++k) b.next();
  EXPECT_EQ(a.next()->elements(), b.next()->elements());
}

TEST(Enumerate, FrameLimit) {
  // 2^6 * 3^2 * 5 * 7 has 7*3*2*2 = 84 divisors
  EXPECT_THROW(enumerate_gcd_closed(64 * 9 * 35, 2), std::invalid_argument);
  ::setenv("GCDLCM_MAX_DIVISORS", "100", 1);
  EXPECT_NO_THROW(GcdClosedEnumerator(Integer(64 * 9 * 35), 2));
  ::setenv("GCDLCM_MAX_DIVISORS", "4", 1);
  EXPECT_THROW(enumerate_gcd_closed(12, 2), std::invalid_argument);
  ::setenv("GCDLCM_MAX_DIVISORS", "many", 1);
  EXPECT_THROW(max_frame_divisors(), std::invalid_argument);
  ::unsetenv("GCDLCM_MAX_DIVISORS");
  EXPECT_EQ(max_frame_divisors(), 64u);
  EXPECT_THROW(GcdClosedEnumerator(Integer(12), 0), std::invalid_argument);
  EXPECT_THROW(GcdClosedEnumerator(Integer(12), 2, ShardSpec{2, 2}), std::invalid_argument);
}

TEST(Enumerate, MagnitudeCapRestrictsUniverse) {
  EXPECT_EQ(frame_universe(60, Integer(10)), ints({1, 2, 3, 4, 5, 6, 10}));
  SearchTask t = small_task();
  t.magnitude_cap = 10;
  t.min_size = t.max_size = 2;
  std::vector<std::vector<std::int64_t>> seen;
  hunt(t, 0, 1, [&](const SearchRecord& r) { seen.push_back(testing_support::as_i64(r.set)); });
  for (const auto& v : seen) EXPECT_LE(v.back(), 10);
  EXPECT_FALSE(seen.empty());
}

TEST(Task, Validation) {
  auto t = small_task();
  EXPECT_NO_THROW(validate(t));
  t.max_size = 13;
  EXPECT_THROW(validate(t), std::invalid_argument);
  t = small_task();
  t.min_size = 0;
  EXPECT_THROW(validate(t), std::invalid_argument);
  t = small_task();
  t.min_size = 6;
  EXPECT_THROW(validate(t), std::invalid_argument);
  t = small_task();
  t.e = 0;
  EXPECT_THROW(validate(t), std::invalid_argument);
  t = small_task();
  t.shard = {3, 3};
  EXPECT_THROW(validate(t), std::invalid_argument);
  t = small_task();
  t.targets.clear();
  EXPECT_THROW(validate(t), std::invalid_argument);
  EXPECT_THROW(parse_target("conjecture3"), std::invalid_argument);
}

TEST(Task, JsonRoundTripAndFingerprint) {
  auto t = small_task();
  t.shard = {1, 4};
  t.limit = 77;
  t.targets = {Target::Conjecture2};
  const auto back = task_from_json(Json::parse(task_json(t).dump()));
  EXPECT_EQ(task_json(back).dump(), task_json(t).dump());
  EXPECT_EQ(task_fingerprint(back), task_fingerprint(t));
  EXPECT_EQ(task_fingerprint(t).size(), 16u);
  auto other = t;
  other.e = 2;
  EXPECT_NE(task_fingerprint(other), task_fingerprint(t));
}

TEST(Records, SignatureIgnoresPrimeLabels) {
  EXPECT_EQ(multiplicative_signature(set_of({1, 2, 3, 6})), multiplicative_signature(set_of({1, 5, 7, 35})));
  EXPECT_NE(multiplicative_signature(set_of({1, 2, 3, 6})), multiplicative_signature(set_of({1, 2, 4})));
  EXPECT_EQ(multiplicative_signature(set_of({1, 2, 4})), "[[0,1,2]]");
  EXPECT_EQ(multiplicative_signature(set_of({1})), "[]");
}

TEST(Records, EvaluateAndSerialize) {
  auto rec = evaluate_set(set_of({1, 2, 3, 12}), 1, {Target::Corollary37Audit});
  EXPECT_EQ(rec.verdict, Verdict::DoesNotDivide);
  ASSERT_TRUE(rec.classification);
  EXPECT_TRUE(rec.flags.empty());
  rec.cursor = 4;
  rec.timestamp = "2026-01-01T00:00:00Z";
  const auto j = record_json(rec);
  EXPECT_EQ(j.begin().key(), "cursor");
  EXPECT_EQ((--j.end()).key(), "timestamp");
  EXPECT_EQ(j["verdict"], "does-not-divide");
  EXPECT_EQ(j["set"], Json::parse(R"(["1","2","3","12"])"));
  EXPECT_EQ(j["classification"]["case"], "none");
}

TEST(Records, FlagsFilteredByTarget) {
  const std::vector<std::string> all{"conjecture1-counterexample", "conjecture1-boundary", "conjecture2-counterexample",
                                     "corollary37-violation"};
  EXPECT_EQ(filter_flags(all, {Target::Conjecture2}), std::vector<std::string>{"conjecture2-counterexample"});
  EXPECT_EQ(filter_flags(all, {Target::Conjecture1}).size(), 2u);
}

TEST(Hunt, SmallSetsOfFrame30AllDivide) {
  SearchTask t;
  t.frame = 30;
  t.min_size = 1;
  t.max_size = 3;
  std::uint64_t count = 0;
  const auto end = hunt(t, 0, 2, [&](const SearchRecord& r) {
    EXPECT_EQ(r.cursor, count++);
    EXPECT_EQ(r.verdict, Verdict::Divides) << r.set.to_string();
  });
  std::size_t expected = 0;
  for (std::size_t n = 1; n <= 3; ++n) expected += oracle_of_size(30, n).size();
  EXPECT_EQ(end, expected);
  EXPECT_EQ(count, expected);
}

TEST(Hunt, NoConditionMCounterexamplesOnFrame60) {
  SearchTask t;
  t.frame = 60;
  t.min_size = 4;
  t.max_size = 6;
  t.targets = {Target::Conjecture2};
  std::uint64_t n = 0;
  hunt(t, 0, 3, [&](const SearchRecord& r) {
    ++n;
    EXPECT_TRUE(r.flags.empty()) << r.set.to_string();
  });
  EXPECT_GT(n, 100u);
}

TEST(Hunt, WorkersDoNotChangeOrderAndLimitStops) {
  auto t = small_task();
  std::vector<std::string> one, four;
  hunt(t, 0, 1, [&](const SearchRecord& r) { one.push_back(record_json(r).dump()); });
  hunt(t, 0, 4, [&](const SearchRecord& r) { four.push_back(record_json(r).dump()); });
  ASSERT_EQ(one.size(), four.size());
  for (std::size_t k = 0; k < one.size(); ++k) {
    auto a = Json::parse(one[k]), b = Json::parse(four[k]);
    a.erase("timestamp");
    b.erase("timestamp");
    EXPECT_EQ(a, b);
  }
  t.limit = 10;
  EXPECT_EQ(hunt(t, 0, 2, [](const SearchRecord&) {}), 10u);
  EXPECT_EQ(hunt(t, 7, 2, [](const SearchRecord&) {}), 10u);
}

TEST(Journal, HeaderOnlyMeansStart) {
  ScratchDir dir("journal_empty");
  const auto path = dir.file("j.jsonl");
  auto t = small_task();
  t.limit = 0;
  run_journaled(t, path, 1);
  const auto st = resume(path);
  EXPECT_EQ(st.cursor, 0u);
  EXPECT_EQ(st.fingerprint, task_fingerprint(t));
  EXPECT_EQ(read_lines(path).size(), 1u);
}

TEST(Journal, ResumeContinuesWithoutGapsOrDuplicates) {
  ScratchDir dir("journal_resume");
  const auto full = dir.file("full.jsonl"), part = dir.file("part.jsonl");
  const auto t = small_task();
  const auto total = run_journaled(t, full, 2);
  ASSERT_GT(total, 150u);
  EXPECT_EQ(resume(full).cursor, total);

  auto lines = read_lines(full);
  lines.resize(101);  // header + 100 records
  write_lines(part, lines);
  const auto st = resume(part);
  EXPECT_EQ(st.cursor, 100u);
  EXPECT_EQ(task_json(st.task).dump(), task_json(t).dump());
  EXPECT_EQ(run_journaled(st.task, part, 3), total);
  EXPECT_EQ(strip_timestamps(part), strip_timestamps(full));
  // a finished journal resumes to its end without appending
  EXPECT_EQ(run_journaled(t, full, 1), total);
  EXPECT_EQ(read_lines(full).size(), total + 1);
}

TEST(Journal, Errors) {
  ScratchDir dir("journal_errors");
  const auto path = dir.file("j.jsonl");
  auto t = small_task();
  t.limit = 5;
  run_journaled(t, path, 1);

  auto other = t;
  other.frame = 36;
  try {
    run_journaled(other, path, 1);
    FAIL() << "fingerprint mismatch accepted";
  } catch (const JournalError&) {
  }

  auto lines = read_lines(path);
  std::uint64_t offset = 0;
  for (int k = 0; k < 3; ++k) offset += lines[k].size() + 1;
  lines[3] = lines[3].substr(0, lines[3].size() / 2);
  write_lines(path, lines);
  try {
    resume(path);
    FAIL() << "corrupt journal accepted";
  } catch (const JournalError& e) {
    EXPECT_EQ(e.offset(), offset);
  }

  write_lines(path, {});
  try {
    resume(path);
    FAIL() << "empty file accepted";
  } catch (const JournalError& e) {
    EXPECT_EQ(e.offset(), 0u);
  }

  lines = read_lines(dir.file("missing"));
  EXPECT_THROW(resume(dir.file("missing")), std::invalid_argument);

  // tampered task under an unchanged fingerprint
  run_journaled(t, dir.file("k.jsonl"), 1);
  auto k = read_lines(dir.file("k.jsonl"));
  auto header = Json::parse(k[0]);
  header["task"]["e"] = 3;
  k[0] = header.dump();
  write_lines(dir.file("k.jsonl"), k);
  EXPECT_THROW(resume(dir.file("k.jsonl")), JournalError);

  // records out of sequence
  run_journaled(t, dir.file("s.jsonl"), 1);
  auto s = read_lines(dir.file("s.jsonl"));
  std::swap(s[2], s[3]);
  write_lines(dir.file("s.jsonl"), s);
  EXPECT_THROW(resume(dir.file("s.jsonl")), JournalError);
}
