// mqunits: verify unit groups and 2-class numbers of the multiquadratic
// fields attached to prime pairs p = 5, q = 3 (mod 8).

#include <CLI11.hpp>

#include <iostream>
#include <sstream>

#include "mqunits/report.hpp"

namespace {

using namespace mqu;

std::vector<std::int64_t> parse_list(const std::string& text) {
  std::vector<std::int64_t> out;
  std::stringstream in(text);
  for (std::string item; std::getline(in, item, ',');) {
    std::size_t used = 0;
    const long long v = std::stoll(item, &used);
    if (used != item.size()) throw std::invalid_argument("bad radicand: " + item);
    out.push_back(v);
  }
  return out;
}

void print_fsu(const FsuResult& f, bool json) {
  if (json) {
    std::cout << to_json(f).dump(2) << "\n";
    return;
  }
  std::cout << to_string(f.field) << "\n"
            << "torsion " << f.torsion_label() << ", q = 2^" << f.q_index_log2 << "\n";
  for (const auto& g : f.generators) {
    std::cout << "  " << unit_label(g.exponents, 0, 0);
    if (g.torsion_exponent) std::cout << " (twist " << f.torsion_label() << "^" << g.torsion_exponent << ")";
    std::cout << " = " << to_string(g.witness) << "\n";
  }
}

int run_verify(std::int64_t p, std::int64_t q, bool json) {
  if (!is_prime(static_cast<std::uint64_t>(p)) || !is_prime(static_cast<std::uint64_t>(q)) || p == 2 || q == 2) {
    std::cerr << "verify: p and q must be odd primes\n";
    return 2;
  }
  ClassNumberMemo memo;
  const PairReport r = verify_pair(p, q, memo);
  std::cout << (json ? emit_json(r) + "\n" : emit_text(r));
  return r.passed() ? 0 : 1;
}

int run_scan(std::int64_t max, unsigned jobs, const std::string& cache, bool json) {
  ScanOptions options;
  options.jobs = jobs;
  if (!cache.empty()) options.cache_dir = cache;
  const ScanSummary s = scan(max, options, [&](const PairReport& r) {
    if (json) {
      std::cout << to_json(r).dump() << "\n";
    } else {
      const std::string text = emit_text(r);
      std::cout << text.substr(0, text.find('\n') + 1);
      for (const auto& c : r.checks) {
        if (!c.pass) std::cout << "  FAIL " << c.id << "  " << c.detail << "\n";
      }
    }
    std::cout.flush();
  });
  std::cout << (json ? to_json(s).dump() + "\n" : emit_text(s));
  return s.failures.empty() ? 0 : 1;
}

int run_fsu(const std::string& radicands, bool cm, bool json) {
  std::vector<std::int64_t> gens;
  try {
    gens = parse_list(radicands);
    FieldBasis probe(gens);
    for (std::int64_t g : gens) {
      if (g < 0) throw std::invalid_argument("radicands must be positive; use --cm to adjoin i");
    }
  } catch (const std::exception& e) {
    std::cerr << "fsu: " << e.what() << "\n";
    return 2;
  }
  const FsuResult real = fsu_real(FieldBasis(gens));
  if (!cm) {
    print_fsu(real, json);
    return 0;
  }
  std::vector<std::int64_t> cm_gens = gens;
  cm_gens.push_back(-1);
  const AziziResult a = azizi_extend(real, FieldBasis(cm_gens));
  print_fsu(a.fsu, json);
  return 0;
}

int run_classnum(std::int64_t D, bool json) {
  if (!is_fundamental_discriminant(D)) {
    std::cerr << "classnum: " << D << " is not a fundamental discriminant\n";
    return 2;
  }
  if (D < -kMaxAbsDiscriminant || D > kMaxAbsDiscriminant) {
    std::cerr << "classnum: |D| too large\n";
    return 2;
  }
  const ClassNumberReport r = D < 0 ? class_number_imaginary(D) : class_number_real(D % 4 == 0 ? D / 4 : D);
  if (json) {
    std::cout << to_json(r).dump(2) << "\n";
    return 0;
  }
  std::cout << "D = " << r.discriminant << ": h = " << r.h << ", h2 = " << r.h2;
  if (r.imaginary()) {
    std::cout << ", 2-rank " << r.two_rank << ", structure [";
    for (std::size_t i = 0; i < r.group_structure.size(); ++i) std::cout << (i ? ", " : "") << r.group_structure[i];
    std::cout << "]";
  } else {
    std::cout << ", narrow h = " << r.narrow_h;
  }
  std::cout << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Unit groups and 2-class numbers of multiquadratic fields for prime pairs"};
  app.require_subcommand(1);

  std::int64_t p = 0, q = 0, max = 0, disc = 0;
  unsigned jobs = 1;
  bool json = false, cm = false;
  std::string cache, radicands;

  auto* verify = app.add_subcommand("verify", "Run every check for one pair");
  verify->add_option("--p", p, "Prime = 5 (mod 8)")->required();
  verify->add_option("--q", q, "Prime = 3 (mod 8)")->required();
  verify->add_flag("--json", json, "Emit the JSON report");

  auto* scan_cmd = app.add_subcommand("scan", "Verify all pairs up to a bound");
  scan_cmd->add_option("--max", max, "Largest prime")->required()->check(CLI::Range(std::int64_t{3}, std::int64_t{1} << 20));
  scan_cmd->add_option("--jobs", jobs, "Worker threads")->check(CLI::Range(1u, 256u));
  scan_cmd->add_option("--cache", cache, "Cache directory");
  scan_cmd->add_flag("--json", json, "Emit one JSON report per line, then the summary");

  auto* fsu_cmd = app.add_subcommand("fsu", "Fundamental units of Q(sqrt(d1), ..., sqrt(dk))");
  fsu_cmd->add_option("--radicands", radicands, "Comma separated squarefree radicands")->required();
  fsu_cmd->add_flag("--cm", cm, "Adjoin i");
  fsu_cmd->add_flag("--json", json, "Emit JSON");

  auto* classnum_cmd = app.add_subcommand("classnum", "Class number of a quadratic field");
  classnum_cmd->add_option("--disc", disc, "Fundamental discriminant")->required();
  classnum_cmd->add_flag("--json", json, "Emit JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*verify) return run_verify(p, q, json);
    if (*scan_cmd) return run_scan(max, jobs, cache, json);
    if (*fsu_cmd) return run_fsu(radicands, cm, json);
    if (*classnum_cmd) return run_classnum(disc, json);
  } catch (const Falsified& e) {
    std::cerr << "falsified: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
