#include <doctest.h>

#include <filesystem>
#include <set>

#include "mqunits/report.hpp"

using namespace mqu;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / ("mqunits_test_" + name + "_" + std::to_string(::getpid()));
  fs::remove_all(d);
  return d;
}

}  // namespace

TEST_CASE("verify_pair on the reference pairs") {
  ClassNumberMemo memo;
  const PairReport a = verify_pair(5, 11, memo);
  CHECK(a.condition.tag == Condition::Cond1);
  CHECK(a.passed());
  CHECK(a.q_indices == std::make_pair(6, 8));
  CHECK(a.kuroda_results == std::make_pair(std::int64_t{1}, std::int64_t{4}));
  CHECK(a.fsu_cm->torsion_order == 8);
  CHECK(a.lemma_witnesses.size() == 4);
  CHECK(a.h2_table.size() == 15);

  const PairReport b = verify_pair(5, 3, memo);
  CHECK(b.condition.tag == Condition::Cond2);
  CHECK(b.passed());
  CHECK(b.kuroda_results == std::make_pair(std::int64_t{1}, std::int64_t{2}));
  CHECK(b.fsu_cm->torsion_label() == "zeta24");

  const PairReport c = verify_pair(5, 7, memo);
  CHECK(c.condition.tag == Condition::NotApplicable);
  CHECK(c.checks.empty());
  CHECK_FALSE(c.fsu_real);
}

TEST_CASE("every registered check appears exactly once") {
  ClassNumberMemo memo;
  const auto registry = check_registry();
  CHECK(std::set<std::string>(registry.begin(), registry.end()).size() == registry.size());
  const PairReport r = verify_pair(13, 3, memo);
  REQUIRE(r.checks.size() == registry.size());
  for (std::size_t i = 0; i < registry.size(); ++i) CHECK(r.checks[i].id == registry[i]);
  CHECK(r.passed());
}

TEST_CASE("JSON round trip and determinism") {
  for (auto [p, q] : std::vector<std::pair<std::int64_t, std::int64_t>>{{5, 11}, {5, 3}, {5, 7}}) {
    ClassNumberMemo m1, m2;
    const PairReport r1 = verify_pair(p, q, m1);
    const PairReport r2 = verify_pair(p, q, m2);
    CHECK(emit_json(r1, false) == emit_json(r2, false));
    const PairReport back = pair_report_from_json(Json::parse(emit_json(r1)));
    CHECK(back == r1);
    CHECK(emit_json(back) == emit_json(r1));
  }
  ClassNumberMemo memo;
  const std::string j = emit_json(verify_pair(5, 11, memo));
  CHECK(j.find("\"q_index_log2\": 6") != std::string::npos);
  CHECK(j.find("\"schema\": \"mqunits-report/1\"") != std::string::npos);
  const Json parsed = Json::parse(j);
  std::vector<std::string> keys;
  for (const auto& [k, v] : parsed.items()) keys.push_back(k);
  CHECK(keys == std::vector<std::string>{"schema", "p", "q", "condition", "passed", "lemma_witnesses", "fsu_real",
                                         "fsu_cm", "q_indices", "h2_table", "kuroda_results", "structures",
                                         "norm_table_signs", "checks", "elapsed_ms"});
  CHECK_THROWS(pair_report_from_json(Json{{"schema", "other/1"}}));
}

TEST_CASE("text report has one PASS/FAIL line per check") {
  ClassNumberMemo memo;
  const PairReport r = verify_pair(5, 11, memo);
  const std::string t = emit_text(r);
  std::size_t lines = 0, pass = 0;
  std::size_t start = t.find('\n') + 1;
  while (start < t.size()) {
    const std::size_t end = t.find('\n', start);
    const std::string line = t.substr(start, end - start);
    ++lines;
    pass += line.rfind("PASS ", 0) == 0;
    start = end + 1;
  }
  CHECK(lines == r.checks.size());
  CHECK(pass == r.checks.size());
}

TEST_CASE("failed checks are reported, not thrown") {
  ClassNumberMemo memo;
  PairReport r = verify_pair(5, 11, memo);
  r.checks[3].pass = false;
  CHECK_FALSE(r.passed());
  CHECK(emit_text(r).find("FAIL lemma.2q") != std::string::npos);
}

TEST_CASE("scan enumeration and ordering") {
  CHECK(scan_pairs(12) == std::vector<std::pair<std::int64_t, std::int64_t>>{{5, 3}, {5, 11}});
  CHECK(scan_pairs(3).empty());
  CHECK(scan_pairs(200).size() == 156);

  std::vector<std::pair<std::int64_t, std::int64_t>> seen;
  const ScanSummary s = scan(12, {}, [&](const PairReport& r) { seen.emplace_back(r.p, r.q); });
  CHECK(seen == scan_pairs(12));
  CHECK(s.pairs_examined == 2);
  CHECK(s.cond1_count == 1);
  CHECK(s.cond2_count == 1);
  CHECK(s.failures.empty());
  CHECK(scan(3, {}).pairs_examined == 0);
  CHECK_THROWS(scan(2, {}));
  CHECK(scan_summary_from_json(to_json(s)) == s);
}

TEST_CASE("parallel scan matches the sequential one") {
  std::vector<std::string> seq, par;
  ScanOptions one;
  ScanOptions four;
  four.jobs = 4;
  const ScanSummary a = scan(40, one, [&](const PairReport& r) { seq.push_back(emit_json(r, false)); });
  const ScanSummary b = scan(40, four, [&](const PairReport& r) { par.push_back(emit_json(r, false)); });
  CHECK(a == b);
  CHECK(seq == par);
  CHECK(a.pairs_examined == 12);
}

TEST_CASE("cache coherence") {
  const fs::path dir = fresh_dir("cache");
  ScanOptions opts;
  opts.cache_dir = dir;
  opts.jobs = 2;
  std::vector<std::string> cold, warm, none;
  const ScanSummary a = scan(30, opts, [&](const PairReport& r) { cold.push_back(emit_json(r, false)); });
  CHECK(fs::exists(dir / "pairs" / "5_11.json"));
  CHECK(fs::exists(dir / "classnumbers.json"));
  for (const auto& e : fs::directory_iterator(dir / "pairs")) CHECK(e.path().extension() == ".json");
  const ScanSummary b = scan(30, opts, [&](const PairReport& r) { warm.push_back(emit_json(r, false)); });
  const ScanSummary c = scan(30, {}, [&](const PairReport& r) { none.push_back(emit_json(r, false)); });
  CHECK(a == b);
  CHECK(a == c);
  CHECK(cold == warm);
  CHECK(cold == none);

  ResultCache cache(dir);
  CHECK(cache.load(5, 11));
  CHECK_FALSE(cache.load(5, 7));
  write_atomic(dir / "pairs" / "5_3.json", "{ not json");
  CHECK_FALSE(cache.load(5, 3));
  ClassNumberMemo memo;
  cache.load_memo(memo);
  CHECK(memo.size() > 0);
  fs::remove_all(dir);
}
