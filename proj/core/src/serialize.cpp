#include "cuspforms/serialize.hpp"

#include <fstream>
#include <sstream>

#include "cuspforms/errors.hpp"

namespace cuspforms {

namespace {

std::string bigint_to_string(const BigInt& v) { return v.str(); }

BigInt bigint_from_string(const std::string& s) {
  if (s.empty()) throw ValidationError("empty integer literal");
  std::size_t k = s[0] == '-' ? 1 : 0;
  if (k == s.size()) throw ValidationError("bad integer literal: " + s);
  for (; k < s.size(); ++k)
    if (s[k] < '0' || s[k] > '9')
      throw ValidationError("bad integer literal: " + s);
  return BigInt(s);
}

std::int64_t require_i64(const Json& j, const char* field) {
  if (!j.contains(field) || !j[field].is_number_integer())
    throw ValidationError(std::string("missing integer field: ") + field);
  return j[field].get<std::int64_t>();
}

const Json& require_array(const Json& j, const char* field) {
  if (!j.contains(field) || !j[field].is_array())
    throw ValidationError(std::string("missing array field: ") + field);
  return j[field];
}

}  // namespace

Json cyclotomic_to_json(const Cyclotomic& v) {
  Json out;
  out["level"] = v.level();
  out["pscale"] = v.pscale();
  Json coeffs = Json::array();
  for (const BigInt& c : v.coeffs()) coeffs.push_back(bigint_to_string(c));
  out["coeffs"] = std::move(coeffs);
  return out;
}

Cyclotomic cyclotomic_from_json(std::int64_t p, const Json& j) {
  const int level = static_cast<int>(require_i64(j, "level"));
  const long long pscale = require_i64(j, "pscale");
  std::vector<BigInt> coeffs;
  for (const auto& c : require_array(j, "coeffs")) {
    if (!c.is_string())
      throw ValidationError("cyclotomic coefficients must be strings");
    coeffs.push_back(bigint_from_string(c.get<std::string>()));
  }
  return Cyclotomic(p, level, pscale, std::move(coeffs));
}

Json window_to_json(const LatticeWindow& w) {
  Json out;
  out["p"] = w.p();
  out["n"] = w.n();
  Json subspace = Json::array();
  for (Coord c : w.coords()) subspace.push_back(Json::array({c.i, c.j}));
  out["subspace"] = std::move(subspace);
  out["a"] = w.support_scale();
  out["b"] = w.invariance_scale();
  return out;
}

LatticeWindow window_from_json(const Json& j) {
  const std::int64_t p = require_i64(j, "p");
  const int n = static_cast<int>(require_i64(j, "n"));
  CoordList coords;
  for (const auto& c : require_array(j, "subspace")) {
    if (!c.is_array() || c.size() != 2 || !c[0].is_number_integer() ||
        !c[1].is_number_integer())
      throw ValidationError("subspace entries must be [i, j] pairs");
    coords.push_back(Coord{static_cast<int>(c[0].get<std::int64_t>()),
                           static_cast<int>(c[1].get<std::int64_t>())});
  }
  try {
    return LatticeWindow(p, n, coords, static_cast<int>(require_i64(j, "a")),
                         static_cast<int>(require_i64(j, "b")));
  } catch (const Error& e) {
    throw ValidationError(std::string("window: ") + e.what());
  }
}

namespace {

Json point_digits(const LatticeWindow& w, std::int64_t key) {
  Json out = Json::array();
  for (std::int64_t d : w.values_of_key(key)) out.push_back(d);
  return out;
}

std::int64_t key_from_digits(const LatticeWindow& w, const Json& arr,
                             const char* what) {
  if (!arr.is_array() ||
      arr.size() != static_cast<std::size_t>(w.dim()))
    throw ValidationError(std::string(what) +
                          ": digit vector has wrong length");
  std::vector<std::int64_t> digits;
  for (const auto& d : arr) {
    if (!d.is_number_integer())
      throw ValidationError(std::string(what) + ": digits must be integers");
    std::int64_t v = d.get<std::int64_t>();
    if (v < 0 || v >= w.radix())
      throw ValidationError(std::string(what) + ": digit out of range");
    digits.push_back(v);
  }
  return w.key_of_values(digits);
}

Json entries_to_json(const LatticeWindow& w,
                     const std::map<std::int64_t, Cyclotomic>& entries,
                     const char* point_field) {
  Json out = Json::array();
  for (const auto& [key, val] : entries) {
    Json row;
    row[point_field] = point_digits(w, key);
    row["value"] = cyclotomic_to_json(val);
    out.push_back(std::move(row));
  }
  return out;
}

std::map<std::int64_t, Cyclotomic> entries_from_json(const LatticeWindow& w,
                                                     const Json& arr,
                                                     const char* point_field) {
  std::map<std::int64_t, Cyclotomic> out;
  for (const auto& row : arr) {
    if (!row.contains(point_field))
      throw ValidationError(std::string("entry missing field: ") +
                            point_field);
    std::int64_t key = key_from_digits(w, row[point_field], point_field);
    if (!row.contains("value"))
      throw ValidationError("entry missing field: value");
    Cyclotomic val = cyclotomic_from_json(w.p(), row["value"]);
    if (out.count(key)) throw ValidationError("duplicate entry point");
    if (!val.is_zero()) out.emplace(key, std::move(val));
  }
  return out;
}

}  // namespace

Json schwartz_to_json(const SchwartzFunction& f) {
  Json out = window_to_json(f.window());
  out["entries"] = entries_to_json(f.window(), f.entries(), "point");
  return out;
}

SchwartzFunction schwartz_from_json(const Json& j) {
  LatticeWindow w = window_from_json(j);
  SchwartzFunction f(w);
  for (auto& [key, val] :
       entries_from_json(w, require_array(j, "entries"), "point"))
    f.set(key, std::move(val));
  return f;
}

Json parabolic_to_json(const ParabolicData& P) {
  Json out;
  out["composition"] = P.composition;
  return out;
}

ParabolicData parabolic_from_json(const Json& j) {
  std::vector<int> composition;
  for (const auto& c : require_array(j, "composition")) {
    if (!c.is_number_integer())
      throw ValidationError("composition parts must be integers");
    composition.push_back(static_cast<int>(c.get<std::int64_t>()));
  }
  return parabolic_from_composition(composition);
}

Json group_function_to_json(const GroupFunction& f) {
  Json out;
  out["model"] = model_name(f.model());
  out["p"] = f.p();
  out["n"] = f.rank();
  out["n_level"] = f.n_level();
  out["m_level"] = f.m_level();
  Json prov;
  prov["n0"] = f.provenance().n0;
  prov["n1"] = f.provenance().n1;
  prov["val_lambda"] = f.provenance().val_lambda;
  out["provenance"] = std::move(prov);
  out["entries"] = entries_to_json(f.window(), f.entries(), "coset");
  return out;
}

GroupFunction group_function_from_json(const Json& j) {
  if (!j.contains("model") || !j["model"].is_string())
    throw ValidationError("missing string field: model");
  GroupModel model = model_from_name(j["model"].get<std::string>());
  const std::int64_t p = require_i64(j, "p");
  const int n = static_cast<int>(require_i64(j, "n"));
  const int n_level = static_cast<int>(require_i64(j, "n_level"));
  const int m_level = static_cast<int>(require_i64(j, "m_level"));
  if (!j.contains("provenance"))
    throw ValidationError("missing object field: provenance");
  const Json& pj = j["provenance"];
  LiftProvenance prov{static_cast<int>(require_i64(pj, "n0")),
                      static_cast<int>(require_i64(pj, "n1")),
                      static_cast<int>(require_i64(pj, "val_lambda"))};
  LatticeWindow w(p, n, full_coords(n), n_level, m_level);
  return GroupFunction(
      model, w, prov,
      entries_from_json(w, require_array(j, "entries"), "coset"));
}

void save_json(const Json& j, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open for writing: " + path);
  out << j.dump(2) << "\n";
  if (!out) throw Error("write failed: " + path);
}

Json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open for reading: " + path);
  Json j = Json::parse(in, nullptr, true);
  return j;
}

}  // namespace cuspforms
