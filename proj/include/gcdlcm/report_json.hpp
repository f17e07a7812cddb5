#pragma once

// JSON and CSV renderings of reports. Integers are emitted as decimal strings
// and rationals as "p/q" (or "p" when integral) so nothing passes through a
// floating-point type.

#include "gcdlcm/identities.hpp"
#include "gcdlcm/theorems.hpp"

#include "json.hpp"

#include <sstream>
#include <string>
#include <vector>

namespace gcdlcm {

using Json = nlohmann::ordered_json;

inline Json to_json(const Integer& z) { return z.get_str(); }

inline Json values_json(const GcdClosedSet& s, const std::vector<Index>& idx) {
  Json a = Json::array();
  for (Index i : idx) a.push_back(s[i].get_str());
  return a;
}

inline Json set_json(const GcdClosedSet& s) {
  Json a = Json::array();
  for (const auto& x : s.elements()) a.push_back(x.get_str());
  return a;
}

inline Json rational_json(const Rational& q) {
  return Json{{"numerator", q.get_num().get_str()}, {"denominator", q.get_den().get_str()}, {"value", q.get_str()}};
}

inline Json condition_json(const GcdClosedSet& s, const ConditionResult& c) {
  return Json{{"holds", c.holds}, {"checked", values_json(s, c.checked)}, {"violations", values_json(s, c.violations)}};
}

inline Json structure_json(const GcdClosedSet& s, const StructureReport& r) {
  Json elements = Json::array();
  for (Index i = 0; i < s.size(); ++i) {
    const auto& e = r.elements[i];
    elements.push_back(Json{{"element", s[i].get_str()},
                            {"gtd", values_json(s, e.gtd)},
                            {"dset", values_json(s, e.dset)},
                            {"multiples", values_json(s, e.multiples)}});
  }
  return Json{{"set", set_json(s)},
              {"size", s.size()},
              {"elements", elements},
              {"divisor_chain", r.is_divisor_chain},
              {"factor_closed", r.is_factor_closed},
              {"multiple_closed", r.is_multiple_closed},
              {"max_gtd_count", r.max_gtd_count},
              {"condition_c", condition_json(s, r.condition_c)},
              {"condition_m", condition_json(s, r.condition_m)}};
}

inline Json matrix_json(const ExactMatrix& m) {
  Json rows = Json::array();
  for (const auto& row : m.to_strings()) rows.push_back(row);
  return rows;
}

inline Json entry_json(const GcdClosedSet& s, const MatrixEntry& e) {
  Json j{{"row", e.row}, {"col", e.col}, {"row_element", s[e.row].get_str()}, {"col_element", s[e.col].get_str()}};
  const Json q = rational_json(e.value);
  for (auto& [k, v] : q.items()) j[k] = v;
  return j;
}

/// U is included only up to max_u_dim rows.
inline Json divisibility_json(const GcdClosedSet& s, const DivisibilityReport& rep, std::size_t max_u_dim = 12) {
  Json alphas = Json::array();
  for (const auto& a : rep.alphas) alphas.push_back(a.get_str());
  Json j{{"set", set_json(s)},
         {"e", rep.e},
         {"verdict", to_string(rep.verdict)},
         {"witness", rep.witness ? entry_json(s, *rep.witness) : Json(nullptr)},
         {"alphas", alphas}};
  if (s.size() <= max_u_dim) j["u"] = matrix_json(rep.u);
  return j;
}

inline Json match_json(const GcdClosedSet& s, const TheoremMatch& m) {
  return Json{{"theorem", to_string(m.id)},
              {"anchor", m.anchor_element.get_str()},
              {"gtd", values_json(s, m.gtd)},
              {"dset", values_json(s, m.dset)},
              {"dset_is_chain", m.dset_is_chain}};
}

inline Json check_json(const GcdClosedSet& s, const TheoremCheck& c) {
  Json j = match_json(s, c.match);
  j["predicted"] = to_string(c.predicted);
  j["computed"] = to_string(c.computed);
  j["entry"] = c.entry ? entry_json(s, *c.entry) : Json(nullptr);
  if (c.witness) {
    Json w{{"q", s[c.witness->q].get_str()}, {"n", s[c.witness->n].get_str()}};
    const Json q = rational_json(c.witness->value);
    for (auto& [k, v] : q.items()) w[k] = v;
    j["witness"] = w;
  } else {
    j["witness"] = nullptr;
  }
  j["closed_form_matches"] = c.closed_form_matches ? Json(*c.closed_form_matches) : Json(nullptr);
  j["confirmed"] = c.confirmed;
  return j;
}

inline Json classification_json(const ClassificationVerdict& v) {
  return Json{{"case", to_string(v.which)}, {"predicted", to_string(v.predicted)}};
}

/// Verification record: every theorem whose hypothesis the set meets, each
/// checked against the exact verdict, plus the small-set prediction.
inline Json verification_json(const GcdClosedSet& s, const StructureReport& r, unsigned long e = 1) {
  Json checks = Json::array();
  for (const auto& m : all_theorem_35_matches(s, r)) checks.push_back(check_json(s, verify_theorem_on_instance(s, r, m, e)));
  if (s.size() == 8)
    if (auto m = match_theorem_36(s, r)) checks.push_back(check_json(s, verify_theorem_on_instance(s, r, *m, e)));
  const auto rep = divisibility_report(s, r, e);
  Json j{{"set", set_json(s)}, {"e", e}, {"verdict", to_string(rep.verdict)}, {"theorems", checks}};
  j["classification"] = s.size() <= 8 ? classification_json(classify_small(s, r)) : Json(nullptr);
  return j;
}

inline Json identities_json(const std::vector<IdentityResult>& rs) {
  Json a = Json::array();
  for (const auto& r : rs) a.push_back(Json{{"name", r.name}, {"holds", r.holds}, {"detail", r.detail}});
  return a;
}

/// c_ij as a square table with element labels, followed by an alpha row.
inline std::string coefficient_csv(const GcdClosedSet& s, const CoefficientTable& t) {
  std::ostringstream os;
  os << "x_i\\x_j";
  for (const auto& x : s.elements()) os << ',' << x.get_str();
  os << '\n';
  for (Index i = 0; i < t.n; ++i) {
    os << s[i].get_str();
    for (Index j = 0; j < t.n; ++j) os << ',' << t(i, j);
    os << '\n';
  }
  os << "alpha_" << t.e;
  for (const auto& a : t.alpha) os << ',' << a.get_str();
  os << '\n';
  return os.str();
}

}  // namespace gcdlcm
