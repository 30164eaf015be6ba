#pragma once

// Per-pair verification pipeline, its JSON/text reports, pair scans and the
// on-disk result cache.

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include <json.hpp>

#include "mqunits/classnum.hpp"
#include "mqunits/quadratic.hpp"
#include "mqunits/units.hpp"

namespace mqu {

using Json = nlohmann::ordered_json;

inline constexpr const char* kReportSchema = "mqunits-report/1";

struct Check {
  std::string id;
  bool pass = false;
  std::string detail;

  friend bool operator==(const Check&, const Check&) = default;
};

struct PairReport {
  std::int64_t p = 0;
  std::int64_t q = 0;
  ConditionClass condition;
  std::vector<DecompositionWitness> lemma_witnesses;
  std::optional<FsuResult> fsu_real;
  std::optional<FsuResult> fsu_cm;
  std::pair<int, int> q_indices{0, 0};  // (real, cm) as log2
  std::vector<ClassNumberReport> h2_table;
  std::pair<std::int64_t, std::int64_t> kuroda_results{0, 0};  // (h2 K+, h2 K); 0 when undefined
  std::optional<StructureReport> structures;
  std::map<std::string, int> sign_exponents;  // norm table symbols u, v, r, s, t
  std::vector<Check> checks;
  std::int64_t elapsed_ms = 0;

  bool passed() const;
  friend bool operator==(const PairReport&, const PairReport&) = default;
};

/// Check ids every applicable pair reports, in emission order.
std::vector<std::string> check_registry();

/// Runs the full pipeline. Pairs outside both conditions get a report with
/// the condition only. Falsified and other errors become failed checks.
PairReport verify_pair(std::int64_t p, std::int64_t q, ClassNumberMemo& memo);

Json to_json(const PairReport& r, bool include_elapsed = true);
PairReport pair_report_from_json(const Json& j);
/// Pretty JSON, two-space indent.
std::string emit_json(const PairReport& r, bool include_elapsed = true);
/// One header line, then one "PASS"/"FAIL" line per check.
std::string emit_text(const PairReport& r);

Json to_json(const FsuResult& f);
FsuResult fsu_from_json(const Json& j);
Json to_json(const ClassNumberReport& c);
ClassNumberReport class_number_from_json(const Json& j);
Json to_json(const StructureReport& s);
StructureReport structures_from_json(const Json& j);

struct ScanSummary {
  std::pair<std::int64_t, std::int64_t> range{3, 3};
  std::int64_t pairs_examined = 0;
  std::int64_t cond1_count = 0;
  std::int64_t cond2_count = 0;
  std::vector<std::tuple<std::int64_t, std::int64_t, std::string>> failures;

  friend bool operator==(const ScanSummary&, const ScanSummary&) = default;
};

Json to_json(const ScanSummary& s);
ScanSummary scan_summary_from_json(const Json& j);
std::string emit_text(const ScanSummary& s);

/// Pairs (p, q) with p = 5, q = 3 (mod 8), both prime and at most max_prime,
/// ordered by (p, q).
std::vector<std::pair<std::int64_t, std::int64_t>> scan_pairs(std::int64_t max_prime);

/// Directory of pairs/<p>_<q>.json plus classnumbers.json. Writes go to a
/// temporary file that is then renamed into place.
class ResultCache {
 public:
  explicit ResultCache(std::filesystem::path root);

  const std::filesystem::path& root() const { return root_; }
  std::optional<PairReport> load(std::int64_t p, std::int64_t q) const;
  void store(const PairReport& r) const;
  void load_memo(ClassNumberMemo& memo) const;
  void store_memo(const ClassNumberMemo& memo) const;

 private:
  std::filesystem::path pair_path(std::int64_t p, std::int64_t q) const;
  std::filesystem::path root_;
};

void write_atomic(const std::filesystem::path& path, const std::string& contents);

struct ScanOptions {
  unsigned jobs = 1;
  std::optional<std::filesystem::path> cache_dir;
};

/// Verifies every pair of scan_pairs(max_prime). `sink` sees the reports in
/// (p, q) order whatever the completion order of the workers.
ScanSummary scan(std::int64_t max_prime, const ScanOptions& options,
                 const std::function<void(const PairReport&)>& sink = {});

}  // namespace mqu
