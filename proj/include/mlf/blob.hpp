#pragma once

// Label-stripped serialized towers of truncated Artin modules ("blobs"):
// abstract module data, filtration tags, transfer matrices, Galois actions,
// and a norm-subgroup directory. Carries no field presentations; the
// reconstruction layer consumes blobs only.

#include <set>
#include <string>
#include <vector>

#include "mlf/artin.hpp"
#include "mlf/json_util.hpp"

namespace mlf {

struct BlobNode {
  std::string id;
  ProfinInvariants invariants;
  std::vector<Int> moduli;                         // [M, q-1, p^a, p^c x d]
  std::vector<std::pair<long, IMat>> filtration;   // level -> tag subgroup basis
  int depth = 0;
  long class_depth = 0;  // coordinates determine classes modulo U(class_depth)

  AbAmbient ambient() const { return AbAmbient{moduli}; }
  Subgroup tag(int level) const {
    AbAmbient amb = ambient();
    for (auto& [lv, gens] : filtration)
      if (lv == level) return gens.empty() ? Subgroup::zero(amb) : Subgroup::from_gens(amb, gens);
    return Subgroup::zero(amb);
  }
};

struct BlobEdge {
  std::string from, to;
  IMat ver;                   // rows: images of the from-module generators
  std::vector<IMat> actions;  // per from-module generator
};

struct BlobDirEntry {
  IMat gens;  // norm subgroup generators in base coordinates
  ProfinInvariants invariants;  // of the corresponding extension's module
  Int index = 1, f_rel = 1, e_rel = 1;
};

struct MabBlob {
  int version = 1;
  std::vector<BlobNode> nodes;  // base first, then sorted by id
  std::vector<BlobEdge> edges;
  std::vector<BlobDirEntry> directory;

  const BlobNode& base() const {
    require(!nodes.empty(), errc::malformed_blob, "blob without nodes");
    return nodes.front();
  }
  const BlobNode& node_by_id(const std::string& id) const {
    for (auto& n : nodes)
      if (n.id == id) return n;
    fail(errc::malformed_blob, "dangling node id");
  }
  const BlobEdge& edge_to(const std::string& id) const {
    for (auto& e : edges)
      if (e.to == id) return e;
    fail(errc::malformed_blob, "no edge to node");
  }
};

// ---- kernel of the ground-truth cyclotomic character (norm subgroups of
// cyclotomic extensions without building them) ----

inline Subgroup chi_kernel(const ArtinModule& mod, const Int& ell, int nu) {
  Int lnu = pow_int(ell, nu);
  UnitGroupZM zm = UnitGroupZM::build(lnu);
  IMat hom(mod.amb.rank(), std::vector<Int>(zm.amb.rank(), 0));
  for (size_t i = 0; i < mod.amb.rank(); ++i) {
    std::vector<Int> e(mod.amb.rank(), 0);
    e[i] = 1;
    Int v = cyclo_char_value(mod, ell, nu, e);
    auto cs = zm.dlog(v);
    for (size_t j = 0; j < zm.amb.rank(); ++j) hom[i][j] = cs[j];
  }
  return Subgroup::zero(zm.amb).preimage(mod.amb, hom);
}

// ---- export ----

struct TowerBundle {  // a built tower, kept on the labeled side
  FieldPtr base_field;
  ArtinModule base_module;
  std::vector<CycloAdjunction> adjunctions;
  std::vector<ArtinModule> node_modules;
};

inline TowerBundle build_tower(const FieldPtr& K, const std::vector<Int>& ms, ArtinParams par) {
  TowerBundle tb;
  tb.base_field = K;
  tb.base_module = artin_module(K, par);
  for (auto& m : ms) {
    CycloAdjunction adj = adjoin_cyclotomic(K, m);
    ArtinParams parL = par;
    int e_rel = adj.ext->e / K->e;
    parL.depth = tb.base_module.depth * e_rel;
    tb.node_modules.push_back(artin_module(adj.ext, parL));
    tb.adjunctions.push_back(std::move(adj));
  }
  return tb;
}

namespace detail {

inline Json node_content_json(const BlobNode& n) {
  Json filt = Json::array();
  for (auto& [lv, gens] : n.filtration) {
    Json entry = Json::array();
    entry.push_back(lv);
    entry.push_back(imat_json(gens));
    filt.push_back(entry);
  }
  Json j;
  j["invariants"] = invariants_json(n.invariants);
  Json mod;
  mod["moduli"] = ivec_json(n.moduli);
  IMat id(n.moduli.size(), std::vector<Int>(n.moduli.size(), 0));
  for (size_t i = 0; i < n.moduli.size(); ++i) id[i][i] = 1;
  mod["gens"] = imat_json(id);
  j["module"] = mod;
  j["filtration"] = filt;
  j["depth"] = n.depth;
  j["class_depth"] = n.class_depth;
  return j;
}

inline BlobNode strip_module(const ArtinModule& mod, int tag_levels) {
  BlobNode n;
  n.invariants = mod.invariants();
  n.moduli = mod.amb.moduli;
  n.depth = mod.depth;
  n.class_depth = mod.class_prec;
  int cap = std::min<int>(tag_levels, mod.depth);
  for (int lv = 0; lv <= cap; ++lv) n.filtration.emplace_back(lv, mod.tags[lv].basis);
  n.id = content_hash(node_content_json(n));
  return n;
}

}  // namespace detail

inline MabBlob export_blob(const TowerBundle& tb, int directory_bound = 4,
                           int tag_levels = 1 << 20) {
  MabBlob blob;
  const ArtinModule& base = tb.base_module;
  BlobNode bn = detail::strip_module(base, tag_levels);
  blob.nodes.push_back(bn);

  // self-edge: identity transfer, trivial conjugation action
  {
    BlobEdge se;
    se.from = se.to = bn.id;
    size_t r = base.amb.rank();
    IMat id(r, std::vector<Int>(r, 0));
    for (size_t i = 0; i < r; ++i) id[i][i] = 1;
    se.ver = id;
    se.actions.assign(r, id);
    blob.edges.push_back(std::move(se));
  }

  std::vector<std::pair<BlobNode, BlobEdge>> rest;
  for (size_t i = 0; i < tb.adjunctions.size(); ++i) {
    BlobNode n = detail::strip_module(tb.node_modules[i], tag_levels);
    BlobEdge e;
    e.from = bn.id;
    e.ver = ver_matrix(base, tb.node_modules[i], tb.adjunctions[i]);
    e.actions = galois_action_matrices(base, tb.node_modules[i], tb.adjunctions[i]);
    rest.emplace_back(std::move(n), std::move(e));
  }
  std::sort(rest.begin(), rest.end(),
            [](const auto& a, const auto& b) { return a.first.id < b.first.id; });
  std::set<std::string> used{bn.id};
  for (auto& [n, e] : rest) {
    std::string id = n.id;
    int salt = 1;
    while (used.count(id)) id = n.id + "-" + std::to_string(++salt);
    used.insert(id);
    BlobNode node = n;
    node.id = id;
    BlobEdge edge = e;
    edge.to = id;
    blob.nodes.push_back(std::move(node));
    blob.edges.push_back(std::move(edge));
  }

  // directory with honestly synthesized extension invariants
  const FieldPtr& K = tb.base_field;
  std::vector<Subgroup> chi_kernels;  // kernel of chi mod p^j, j = 1..c-1
  for (int j = 1; j < base.c; ++j) chi_kernels.push_back(chi_kernel(base, K->p, j));
  for (auto& ns : directory(base, directory_bound)) {
    BlobDirEntry de;
    de.gens = ns.sub.basis;
    de.index = ns.index;
    de.f_rel = ns.f_rel;
    de.e_rel = ns.e_rel;
    long dN = K->d * to_long(ns.index);
    long fN = K->f * to_long(ns.f_rel);
    int aN = 0;
    for (int j = 1; j < base.c; ++j) {
      if (chi_kernels[j - 1].contains_subgroup(ns.sub))
        aN = j;
      else
        break;
    }
    ProfinInvariants inv;
    inv.zhat_rank = 1;
    inv.extra_ranks = {{K->p, dN}};
    Int t = (pow_int(K->p, fN) - 1) * pow_int(K->p, aN);
    if (t > 1) inv.torsion = {t};
    de.invariants = inv;
    blob.directory.push_back(std::move(de));
  }
  return blob;
}

// ---- serialization ----

inline Json blob_json(const MabBlob& blob) {
  Json nodes = Json::array();
  for (auto& n : blob.nodes) {
    Json j = detail::node_content_json(n);
    Json withid;
    withid["id"] = n.id;
    for (auto& [k, v] : j.items()) withid[k] = v;
    nodes.push_back(withid);
  }
  Json edges = Json::array();
  for (auto& e : blob.edges) {
    Json j;
    j["from"] = e.from;
    j["to"] = e.to;
    j["ver"] = imat_json(e.ver);
    Json acts = Json::array();
    for (auto& a : e.actions) acts.push_back(imat_json(a));
    j["actions"] = acts;
    edges.push_back(j);
  }
  Json dir = Json::array();
  for (auto& d : blob.directory) {
    Json j;
    j["gens"] = imat_json(d.gens);
    j["invariants"] = invariants_json(d.invariants);
    j["index"] = int_json(d.index);
    j["f_rel"] = int_json(d.f_rel);
    j["e_rel"] = int_json(d.e_rel);
    dir.push_back(j);
  }
  Json out;
  out["version"] = blob.version;
  out["nodes"] = nodes;
  out["edges"] = edges;
  out["directory"] = dir;
  return out;
}

// Strict parser: unknown keys are rejected (this is what keeps smuggled
// field labels out of blobs).
inline MabBlob blob_from_json(const Json& j) {
  require(j.is_object(), errc::malformed_blob, "blob must be an object");
  static const std::set<std::string> top_keys{"version", "nodes", "edges", "directory"};
  for (auto& [k, v] : j.items())
    require(top_keys.count(k) > 0, errc::malformed_blob, "unexpected key: " + k);
  require(j.contains("version") && j.contains("nodes") && j.contains("edges") &&
              j.contains("directory"),
          errc::malformed_blob, "missing top-level key");
  MabBlob blob;
  blob.version = j["version"].get<int>();
  require(blob.version == 1, errc::malformed_blob, "unsupported blob version");

  static const std::set<std::string> node_keys{"id", "invariants", "module", "filtration",
                                               "depth", "class_depth"};
  for (auto& nj : j["nodes"]) {
    for (auto& [k, v] : nj.items())
      require(node_keys.count(k) > 0, errc::malformed_blob, "unexpected node key: " + k);
    BlobNode n;
    n.id = nj.at("id").get<std::string>();
    for (char ch : n.id)
      require((ch >= '0' && ch <= '9') || (ch >= 'a' && ch <= 'f') || ch == '-',
              errc::malformed_blob, "node ids are lowercase hex hashes");
    n.invariants = invariants_from_json(nj.at("invariants"));
    static const std::set<std::string> mod_keys{"moduli", "gens"};
    for (auto& [k, v] : nj.at("module").items())
      require(mod_keys.count(k) > 0, errc::malformed_blob, "unexpected module key: " + k);
    n.moduli = ivec_from_json(nj.at("module").at("moduli"));
    n.depth = nj.at("depth").get<int>();
    n.class_depth = nj.at("class_depth").get<long>();
    for (auto& entry : nj.at("filtration")) {
      require(entry.is_array() && entry.size() == 2, errc::malformed_blob, "bad filtration entry");
      n.filtration.emplace_back(entry[0].get<long>(), imat_from_json(entry[1]));
    }
    blob.nodes.push_back(std::move(n));
  }
  static const std::set<std::string> edge_keys{"from", "to", "ver", "actions"};
  for (auto& ej : j["edges"]) {
    for (auto& [k, v] : ej.items())
      require(edge_keys.count(k) > 0, errc::malformed_blob, "unexpected edge key: " + k);
    BlobEdge e;
    e.from = ej.at("from").get<std::string>();
    e.to = ej.at("to").get<std::string>();
    e.ver = imat_from_json(ej.at("ver"));
    for (auto& a : ej.at("actions")) e.actions.push_back(imat_from_json(a));
    blob.edges.push_back(std::move(e));
  }
  static const std::set<std::string> dir_keys{"gens", "invariants", "index", "f_rel", "e_rel"};
  for (auto& dj : j["directory"]) {
    for (auto& [k, v] : dj.items())
      require(dir_keys.count(k) > 0, errc::malformed_blob, "unexpected directory key: " + k);
    BlobDirEntry d;
    d.gens = imat_from_json(dj.at("gens"));
    d.invariants = invariants_from_json(dj.at("invariants"));
    d.index = int_from_json(dj.at("index"));
    d.f_rel = int_from_json(dj.at("f_rel"));
    d.e_rel = int_from_json(dj.at("e_rel"));
    blob.directory.push_back(std::move(d));
  }
  // structural sanity
  for (auto& e : blob.edges) {
    blob.node_by_id(e.from);
    blob.node_by_id(e.to);
  }
  return blob;
}

inline bool blob_roundtrip_ok(const MabBlob& blob) {
  Json j1 = blob_json(blob);
  MabBlob again = blob_from_json(j1);
  return blob_json(again).dump() == j1.dump();
}

}  // namespace mlf
