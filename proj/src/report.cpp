#include <sstream>

#include "mqunits/report.hpp"

namespace mqu {
namespace {

Json exponents_json(const ExponentMap& e) {
  Json j = Json::object();
  for (const auto& [d, x] : e) j[std::to_string(d)] = to_string(x);
  return j;
}

ExponentMap exponents_from(const Json& j) {
  ExponentMap e;
  for (const auto& [k, v] : j.items()) e[std::stoll(k)] = parse_rational(v.get<std::string>());
  return e;
}

Json witness_json(const DecompositionWitness& w) {
  Json c = Json::array();
  for (const auto& s : w.candidates) {
    c.push_back(Json{{"id", s.id}, {"plus_shape", s.plus_shape}, {"minus_shape", s.minus_shape}, {"holds", s.holds}});
  }
  return Json{{"radicand_tag", to_string(w.radicand_tag)},
              {"radicand", w.radicand},
              {"case", w.case_id},
              {"u1", w.u1.get_str()},
              {"u2", w.u2.get_str()},
              {"surd1", w.surd1},
              {"surd2", w.surd2},
              {"multiplier", w.multiplier},
              {"relation", w.relation},
              {"candidates", c},
              {"excluded_shapes", w.excluded_shapes}};
}

DecompositionWitness witness_from(const Json& j) {
  DecompositionWitness w;
  w.radicand_tag = parse_radicand_tag(j.at("radicand_tag").get<std::string>());
  w.radicand = j.at("radicand").get<std::int64_t>();
  w.case_id = j.at("case").get<std::string>();
  w.u1 = Int(j.at("u1").get<std::string>());
  w.u2 = Int(j.at("u2").get<std::string>());
  w.surd1 = j.at("surd1").get<std::int64_t>();
  w.surd2 = j.at("surd2").get<std::int64_t>();
  w.multiplier = j.at("multiplier").get<int>();
  w.relation = j.at("relation").get<std::string>();
  for (const auto& c : j.at("candidates")) {
    w.candidates.push_back({c.at("id").get<std::string>(), c.at("plus_shape").get<std::int64_t>(),
                            c.at("minus_shape").get<std::int64_t>(), c.at("holds").get<bool>()});
  }
  w.excluded_shapes = j.at("excluded_shapes").get<std::vector<std::string>>();
  return w;
}

Json fsu_json(const FsuResult& f, std::int64_t p, std::int64_t q) {
  Json gens = Json::array();
  for (const auto& g : f.generators) {
    gens.push_back(Json{{"label", unit_label(g.exponents, p, q)},
                        {"torsion_exponent", g.torsion_exponent},
                        {"exponents", exponents_json(g.exponents)},
                        {"witness", to_string(g.witness)}});
  }
  return Json{{"field", f.field.generators()},
              {"torsion_order", f.torsion_order},
              {"torsion", f.torsion_label()},
              {"base_radicands", f.base_radicands},
              {"generators", gens},
              {"q_index_log2", f.q_index_log2}};
}

template <class T, class F>
std::optional<T> optional_from(const Json& j, const char* key, F&& f) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return f(j.at(key));
}

}  // namespace

Json to_json(const FsuResult& f) { return fsu_json(f, 0, 0); }

FsuResult fsu_from_json(const Json& j) {
  FsuResult f{FieldBasis(j.at("field").get<std::vector<std::int64_t>>()), j.at("torsion_order").get<int>(),
              j.at("base_radicands").get<std::vector<std::int64_t>>(), {}, j.at("q_index_log2").get<int>()};
  for (const auto& g : j.at("generators")) {
    f.generators.push_back(UnitExpr{g.at("torsion_exponent").get<int>(), exponents_from(g.at("exponents")),
                                    parse_field_element(g.at("witness").get<std::string>(), f.field)});
  }
  return f;
}

Json to_json(const ClassNumberReport& c) {
  Json j{{"discriminant", c.discriminant}, {"radicand", c.radicand}, {"h", c.h}, {"h2", c.h2}, {"narrow_h", c.narrow_h}};
  if (c.imaginary()) {
    j["two_rank"] = c.two_rank;
    j["group_structure"] = c.group_structure;
  }
  return j;
}

ClassNumberReport class_number_from_json(const Json& j) {
  ClassNumberReport c;
  c.discriminant = j.at("discriminant").get<std::int64_t>();
  c.radicand = j.at("radicand").get<std::int64_t>();
  c.h = j.at("h").get<std::int64_t>();
  c.h2 = j.at("h2").get<std::int64_t>();
  c.narrow_h = j.at("narrow_h").get<std::int64_t>();
  if (j.contains("two_rank")) c.two_rank = j.at("two_rank").get<int>();
  if (j.contains("group_structure")) c.group_structure = j.at("group_structure").get<std::vector<std::int64_t>>();
  return c;
}

Json to_json(const StructureReport& s) {
  const int off = s.m - 1;
  std::string formula = "2^(n";
  if (off > 0) formula += "+" + std::to_string(off);
  if (off < 0) formula += std::to_string(off);
  formula += ")";
  return Json{{"m", s.m},
              {"cl2_genus_base", to_string(s.cl2_genus_base)},
              {"cl2_L", to_string(s.cl2_L)},
              {"cl2_F", to_string(s.cl2_F)},
              {"cl2_K", to_string(s.cl2_K)},
              {"gal_F2", to_string(s.gal_F2)},
              {"gal_k2", to_string(s.gal_k2)},
              {"h2_Ln", formula},
              {"h2_Ln_plus", std::int64_t{1} << s.h2_Ln_plus_log2},
              {"iwasawa", Json{{"lambda", s.iwasawa.first}, {"nu", s.iwasawa.second}}}};
}

StructureReport structures_from_json(const Json& j) {
  StructureReport s;
  s.m = j.at("m").get<int>();
  s.cl2_genus_base = parse_group_label(j.at("cl2_genus_base").get<std::string>());
  s.cl2_L = parse_group_label(j.at("cl2_L").get<std::string>());
  s.cl2_F = parse_group_label(j.at("cl2_F").get<std::string>());
  s.cl2_K = parse_group_label(j.at("cl2_K").get<std::string>());
  s.gal_F2 = parse_group_label(j.at("gal_F2").get<std::string>());
  s.gal_k2 = parse_group_label(j.at("gal_k2").get<std::string>());
  const auto plus = *exact_log2(Int(j.at("h2_Ln_plus").get<std::int64_t>()));
  s.h2_Ln_plus_log2 = plus;
  s.iwasawa = {j.at("iwasawa").at("lambda").get<int>(), j.at("iwasawa").at("nu").get<int>()};
  return s;
}

Json to_json(const PairReport& r, bool include_elapsed) {
  Json j;
  j["schema"] = kReportSchema;
  j["p"] = r.p;
  j["q"] = r.q;
  j["condition"] = Json{{"tag", to_string(r.condition.tag)}, {"reason", r.condition.reason}};
  j["passed"] = r.passed();
  Json lw = Json::array();
  for (const auto& w : r.lemma_witnesses) lw.push_back(witness_json(w));
  j["lemma_witnesses"] = lw;
  j["fsu_real"] = r.fsu_real ? fsu_json(*r.fsu_real, r.p, r.q) : Json(nullptr);
  j["fsu_cm"] = r.fsu_cm ? fsu_json(*r.fsu_cm, r.p, r.q) : Json(nullptr);
  j["q_indices"] = Json{{"real_log2", r.q_indices.first}, {"cm_log2", r.q_indices.second}};
  Json h2 = Json::array();
  for (const auto& c : r.h2_table) h2.push_back(to_json(c));
  j["h2_table"] = h2;
  j["kuroda_results"] = Json{{"h2_Kplus", r.kuroda_results.first}, {"h2_K", r.kuroda_results.second}};
  j["structures"] = r.structures ? to_json(*r.structures) : Json(nullptr);
  j["norm_table_signs"] = r.sign_exponents;
  Json checks = Json::array();
  for (const auto& c : r.checks) checks.push_back(Json{{"id", c.id}, {"pass", c.pass}, {"detail", c.detail}});
  j["checks"] = checks;
  if (include_elapsed) j["elapsed_ms"] = r.elapsed_ms;
  return j;
}

PairReport pair_report_from_json(const Json& j) {
  if (j.at("schema").get<std::string>() != kReportSchema) {
    throw std::invalid_argument("report: unknown schema " + j.at("schema").get<std::string>());
  }
  PairReport r;
  r.p = j.at("p").get<std::int64_t>();
  r.q = j.at("q").get<std::int64_t>();
  r.condition = {parse_condition(j.at("condition").at("tag").get<std::string>()), r.p, r.q,
                 j.at("condition").at("reason").get<std::string>()};
  for (const auto& w : j.at("lemma_witnesses")) r.lemma_witnesses.push_back(witness_from(w));
  r.fsu_real = optional_from<FsuResult>(j, "fsu_real", fsu_from_json);
  r.fsu_cm = optional_from<FsuResult>(j, "fsu_cm", fsu_from_json);
  r.q_indices = {j.at("q_indices").at("real_log2").get<int>(), j.at("q_indices").at("cm_log2").get<int>()};
  for (const auto& c : j.at("h2_table")) r.h2_table.push_back(class_number_from_json(c));
  r.kuroda_results = {j.at("kuroda_results").at("h2_Kplus").get<std::int64_t>(),
                      j.at("kuroda_results").at("h2_K").get<std::int64_t>()};
  r.structures = optional_from<StructureReport>(j, "structures", structures_from_json);
  r.sign_exponents = j.at("norm_table_signs").get<std::map<std::string, int>>();
  for (const auto& c : j.at("checks")) {
    r.checks.push_back({c.at("id").get<std::string>(), c.at("pass").get<bool>(), c.at("detail").get<std::string>()});
  }
  if (j.contains("elapsed_ms")) r.elapsed_ms = j.at("elapsed_ms").get<std::int64_t>();
  return r;
}

std::string emit_json(const PairReport& r, bool include_elapsed) { return to_json(r, include_elapsed).dump(2); }

std::string emit_text(const PairReport& r) {
  std::ostringstream out;
  out << "(" << r.p << ", " << r.q << ") " << to_string(r.condition.tag);
  if (!r.condition.applicable()) {
    out << ": " << r.condition.reason << "\n";
    return out.str();
  }
  std::size_t passed = 0;
  for (const auto& c : r.checks) passed += c.pass;
  out << ": " << passed << "/" << r.checks.size() << " checks pass";
  if (r.fsu_real) out << ", q(K+) = 2^" << r.q_indices.first;
  if (r.fsu_cm) out << ", q(K) = 2^" << r.q_indices.second << ", torsion " << r.fsu_cm->torsion_label();
  out << ", h2(K+) = " << r.kuroda_results.first << ", h2(K) = " << r.kuroda_results.second << "\n";
  for (const auto& c : r.checks) {
    out << (c.pass ? "PASS " : "FAIL ") << c.id;
    if (!c.detail.empty()) out << "  " << c.detail;
    out << "\n";
  }
  return out.str();
}

Json to_json(const ScanSummary& s) {
  Json failures = Json::array();
  for (const auto& [p, q, id] : s.failures) failures.push_back(Json{{"p", p}, {"q", q}, {"check", id}});
  return Json{{"schema", "mqunits-scan/1"},
              {"range", Json::array({s.range.first, s.range.second})},
              {"pairs_examined", s.pairs_examined},
              {"cond1_count", s.cond1_count},
              {"cond2_count", s.cond2_count},
              {"failures", failures}};
}

ScanSummary scan_summary_from_json(const Json& j) {
  ScanSummary s;
  s.range = {j.at("range").at(0).get<std::int64_t>(), j.at("range").at(1).get<std::int64_t>()};
  s.pairs_examined = j.at("pairs_examined").get<std::int64_t>();
  s.cond1_count = j.at("cond1_count").get<std::int64_t>();
  s.cond2_count = j.at("cond2_count").get<std::int64_t>();
  for (const auto& f : j.at("failures")) {
    s.failures.emplace_back(f.at("p").get<std::int64_t>(), f.at("q").get<std::int64_t>(), f.at("check").get<std::string>());
  }
  return s;
}

std::string emit_text(const ScanSummary& s) {
  std::ostringstream out;
  out << "scan " << s.range.first << ".." << s.range.second << ": " << s.pairs_examined << " pairs, "
      << s.cond1_count << " Cond1, " << s.cond2_count << " Cond2, " << s.failures.size() << " failed checks\n";
  for (const auto& [p, q, id] : s.failures) out << "FAIL (" << p << ", " << q << ") " << id << "\n";
  return out.str();
}

}  // namespace mqu
