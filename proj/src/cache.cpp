#include <atomic>
#include <condition_variable>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "mqunits/report.hpp"

namespace mqu {

namespace fs = std::filesystem;

void write_atomic(const fs::path& path, const std::string& contents) {
  fs::create_directories(path.parent_path());
  std::ostringstream name;
  name << path.filename().string() << ".tmp." << std::this_thread::get_id();
  const fs::path tmp = path.parent_path() / name.str();
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << contents;
    if (!out.flush()) throw std::runtime_error("cannot write " + tmp.string());
  }
  fs::rename(tmp, path);
}

ResultCache::ResultCache(fs::path root) : root_(std::move(root)) { fs::create_directories(root_ / "pairs"); }

fs::path ResultCache::pair_path(std::int64_t p, std::int64_t q) const {
  return root_ / "pairs" / (std::to_string(p) + "_" + std::to_string(q) + ".json");
}

std::optional<PairReport> ResultCache::load(std::int64_t p, std::int64_t q) const {
  std::ifstream in(pair_path(p, q));
  if (!in) return std::nullopt;
  try {
    PairReport r = pair_report_from_json(Json::parse(in));
    if (r.p != p || r.q != q) return std::nullopt;
    return r;
  } catch (const std::exception&) {
    return std::nullopt;  // unreadable entries are recomputed
  }
}

void ResultCache::store(const PairReport& r) const { write_atomic(pair_path(r.p, r.q), emit_json(r) + "\n"); }

void ResultCache::load_memo(ClassNumberMemo& memo) const {
  std::ifstream in(root_ / "classnumbers.json");
  if (!in) return;
  try {
    const Json j = Json::parse(in);
    for (const auto& e : j.at("entries")) memo.insert(class_number_from_json(e));
  } catch (const std::exception&) {
  }
}

void ResultCache::store_memo(const ClassNumberMemo& memo) const {
  Json entries = Json::array();
  for (const auto& [d, r] : memo.snapshot()) entries.push_back(to_json(r));
  write_atomic(root_ / "classnumbers.json", Json{{"schema", "mqunits-classnumbers/1"}, {"entries", entries}}.dump(1) + "\n");
}

std::vector<std::pair<std::int64_t, std::int64_t>> scan_pairs(std::int64_t max_prime) {
  std::vector<std::int64_t> ps, qs;
  if (max_prime >= 3) {
    for (std::uint64_t r : primes_up_to(static_cast<std::uint64_t>(max_prime))) {
      if (r % 8 == 5) ps.push_back(static_cast<std::int64_t>(r));
      if (r % 8 == 3) qs.push_back(static_cast<std::int64_t>(r));
    }
  }
  std::vector<std::pair<std::int64_t, std::int64_t>> out;
  for (std::int64_t p : ps) {
    for (std::int64_t q : qs) out.emplace_back(p, q);
  }
  return out;
}

ScanSummary scan(std::int64_t max_prime, const ScanOptions& options,
                 const std::function<void(const PairReport&)>& sink) {
  if (max_prime < 3) throw std::invalid_argument("scan: max must be at least 3");
  const auto pairs = scan_pairs(max_prime);
  std::optional<ResultCache> cache;
  if (options.cache_dir) cache.emplace(*options.cache_dir);
  ClassNumberMemo memo;
  if (cache) cache->load_memo(memo);

  std::vector<std::optional<PairReport>> results(pairs.size());
  std::mutex mutex;
  std::condition_variable ready;
  std::atomic<std::size_t> next{0};

  auto worker = [&] {
    for (std::size_t i; (i = next++) < pairs.size();) {
      const auto [p, q] = pairs[i];
      std::optional<PairReport> r = cache ? cache->load(p, q) : std::nullopt;
      if (!r) {
        r = verify_pair(p, q, memo);
        if (cache) cache->store(*r);
      }
      std::lock_guard lock(mutex);
      results[i] = std::move(r);
      ready.notify_all();
    }
  };

  const unsigned jobs = std::max(1u, options.jobs);
  std::vector<std::jthread> threads;
  for (unsigned k = 0; k < jobs; ++k) threads.emplace_back(worker);

  ScanSummary summary;
  summary.range = {3, max_prime};
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    PairReport r;
    {
      std::unique_lock lock(mutex);
      ready.wait(lock, [&] { return results[i].has_value(); });
      r = std::move(*results[i]);
      results[i].reset();
    }
    ++summary.pairs_examined;
    if (r.condition.tag == Condition::Cond1) ++summary.cond1_count;
    if (r.condition.tag == Condition::Cond2) ++summary.cond2_count;
    for (const auto& c : r.checks) {
      if (!c.pass) summary.failures.emplace_back(r.p, r.q, c.id);
    }
    if (sink) sink(r);
  }
  threads.clear();
  if (cache) cache->store_memo(memo);
  return summary;
}

}  // namespace mqu
