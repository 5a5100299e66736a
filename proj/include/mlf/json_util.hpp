#pragma once

// JSON helpers: canonical encoding with arbitrary-precision integers as
// decimal strings, key order fixed by construction (ordered_json).

#include <string>

#include <nlohmann/json.hpp>

#include "mlf/abelian.hpp"

namespace mlf {

using Json = nlohmann::ordered_json;

inline Json int_json(const Int& x) { return x.str(); }

inline Int int_from_json(const Json& j) {
  require(j.is_string(), errc::malformed_blob, "integer fields are decimal strings");
  return Int(j.get<std::string>());
}

inline Json ivec_json(const std::vector<Int>& v) {
  Json a = Json::array();
  for (auto& x : v) a.push_back(int_json(x));
  return a;
}

inline std::vector<Int> ivec_from_json(const Json& j) {
  require(j.is_array(), errc::malformed_blob, "expected an array");
  std::vector<Int> out;
  for (auto& x : j) out.push_back(int_from_json(x));
  return out;
}

inline Json imat_json(const IMat& m) {
  Json a = Json::array();
  for (auto& row : m) a.push_back(ivec_json(row));
  return a;
}

inline IMat imat_from_json(const Json& j) {
  require(j.is_array(), errc::malformed_blob, "expected a matrix");
  IMat out;
  for (auto& row : j) out.push_back(ivec_from_json(row));
  return out;
}

inline Json invariants_json(const ProfinInvariants& inv) {
  Json er = Json::array();
  for (auto& [p, r] : inv.extra_ranks) {
    Json pair = Json::array();
    pair.push_back(int_json(p));
    pair.push_back(r);
    er.push_back(pair);
  }
  Json out;
  out["zhat_rank"] = inv.zhat_rank;
  out["extra_ranks"] = er;
  out["torsion"] = ivec_json(inv.torsion);
  return out;
}

inline ProfinInvariants invariants_from_json(const Json& j) {
  ProfinInvariants inv;
  require(j.is_object() && j.contains("zhat_rank") && j.contains("extra_ranks") &&
              j.contains("torsion") && j.size() == 3,
          errc::malformed_blob, "invariants must be {zhat_rank, extra_ranks, torsion}");
  inv.zhat_rank = j["zhat_rank"].get<long>();
  for (auto& pair : j["extra_ranks"])
    inv.extra_ranks.emplace_back(int_from_json(pair[0]), pair[1].get<long>());
  inv.torsion = ivec_from_json(j["torsion"]);
  return inv;
}

// FNV-1a over the canonical dump; stable across runs and platforms
inline std::string content_hash(const Json& j) {
  std::string s = j.dump();
  unsigned long long h = 1469598103934665603ull;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  char buf[17];
  snprintf(buf, sizeof buf, "%016llx", h);
  return std::string(buf);
}

}  // namespace mlf
