// Command-line front end: field inspection, tower export, reconstruction
// from blobs, Herbrand transforms, Hodge-Tate profiles, and the finite-level
// check batteries. Every command writes a deterministic JSON report.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "mlf/groups_catalog.hpp"
#include "mlf/ramification_oracle.hpp"
#include "mlf/reconstruct.hpp"
#include "mlf/session.hpp"

using namespace mlf;

namespace {

int log_level() {
  const char* v = std::getenv("MLF_LOG");
  if (!v) return 1;
  std::string s(v);
  if (s == "error") return 0;
  if (s == "debug") return 2;
  return 1;
}

void log_info(const std::string& msg) {
  if (log_level() >= 1) std::cerr << "[mlf] " << msg << "\n";
}

// "x^2-2x+2" or "x^3-2"-style integer polynomials, little-endian output
std::vector<Int> parse_poly(const std::string& in) {
  std::vector<Int> coeffs;
  auto bump = [&](size_t deg, const Int& c) {
    if (coeffs.size() <= deg) coeffs.resize(deg + 1, 0);
    coeffs[deg] += c;
  };
  size_t i = 0;
  std::string s;
  for (char ch : in)
    if (!isspace(static_cast<unsigned char>(ch))) s.push_back(ch);
  while (i < s.size()) {
    int sign = 1;
    while (i < s.size() && (s[i] == '+' || s[i] == '-')) {
      if (s[i] == '-') sign = -sign;
      ++i;
    }
    require(i < s.size(), errc::usage, "dangling sign in polynomial");
    Int coef = 1;
    bool saw_num = false;
    std::string num;
    while (i < s.size() && isdigit(static_cast<unsigned char>(s[i]))) num.push_back(s[i++]);
    if (!num.empty()) {
      coef = Int(num);
      saw_num = true;
    }
    size_t deg = 0;
    if (i < s.size() && s[i] == 'x') {
      ++i;
      deg = 1;
      if (i < s.size() && s[i] == '^') {
        ++i;
        std::string d;
        while (i < s.size() && isdigit(static_cast<unsigned char>(s[i]))) d.push_back(s[i++]);
        require(!d.empty(), errc::usage, "missing exponent");
        deg = std::stoul(d);
      }
    } else {
      require(saw_num, errc::usage, "malformed polynomial term");
    }
    bump(deg, sign * coef);
  }
  require(!coeffs.empty() && coeffs.back() != 0, errc::usage, "empty polynomial");
  return coeffs;
}

struct FieldArgs {
  std::string name;  // catalog name or Qp(zetaM)
  long p = 0;
  int f = 1;
  std::string eis;
};

FieldPtr resolve_field(const FieldArgs& fa, const SessionConfig& cfg) {
  if (!fa.name.empty()) {
    for (auto& cf : standard_catalog(cfg.c))
      if (cf.name == fa.name) return cf.field;
    // Qp(zetaM)
    auto lp = fa.name.find("(zeta");
    if (fa.name.size() > 1 && fa.name[0] == 'Q' && lp != std::string::npos &&
        fa.name.back() == ')') {
      Int p(fa.name.substr(1, lp - 1));
      Int m(fa.name.substr(lp + 5, fa.name.size() - lp - 6));
      FieldPtr base = catalog_make(p, 1, {-p, 1}, cfg.c + 2);
      return adjoin_cyclotomic(base, m).ext;
    }
    fail(errc::usage, "unknown field name: " + fa.name);
  }
  require(fa.p >= 2 && !fa.eis.empty(), errc::usage, "need --field or --p/--eis");
  auto eis = parse_poly(fa.eis);
  int prec = cfg.prec > 0 ? cfg.prec
                          : default_precision(Int(fa.p), static_cast<int>(eis.size()) - 1, cfg.c);
  return make_field_zcoeffs(Int(fa.p), fa.f, eis, prec);
}

Json field_json(const FieldPtr& F) {
  Json j;
  j["p"] = int_json(F->p);
  j["f"] = F->f;
  j["unram_min_poly"] = [&] {
    Json a = Json::array();
    for (long c : F->unram) a.push_back(int_json(Int(c)));
    return a;
  }();
  j["eis_poly"] = [&] {
    Json a = Json::array();
    for (auto& cu : F->eis) a.push_back(ivec_json(cu));
    return a;
  }();
  j["N"] = F->N;
  return j;
}

Json config_json(const SessionConfig& cfg) {
  Json j;
  j["prec"] = cfg.prec;
  j["tors_exp"] = cfg.c;
  j["frob_mod"] = int_json(cfg.mfrob);
  j["unit_depth"] = cfg.unit_depth;
  j["degree_bound"] = cfg.degree_bound;
  j["tower_depth"] = cfg.tower_depth;
  j["window"] = cfg.window;
  j["jobs"] = cfg.jobs;
  return j;
}

Json report_shell(const std::string& command, const SessionConfig& cfg, Json inputs,
                  Json outputs) {
  Json j;
  j["command"] = command;
  j["config"] = config_json(cfg);
  Json norm;
  norm["artin"] = "arithmetic frobenius; units act on p-power roots of unity by the "
                  "inverse of the normalized norm";
  norm["herbrand"] = "classical integrand (index inside the inertia layer)";
  norm["characters"] = "algebraic exponents act as u -> prod sigma(u)^{n_sigma}";
  j["normalization"] = norm;
  j["inputs"] = std::move(inputs);
  j["outputs"] = std::move(outputs);
  return j;
}

void emit(const Json& report, const std::string& out_path) {
  std::string payload = report.dump(2);
  payload.push_back('\n');
  if (out_path.empty()) {
    std::cout << payload;
  } else {
    std::ofstream os(out_path, std::ios::binary);
    require(static_cast<bool>(os), errc::usage, "cannot open output file");
    os << payload;
    log_info("wrote " + out_path);
  }
}

MabBlob load_blob(const std::string& path) {
  std::ifstream is(path);
  require(static_cast<bool>(is), errc::usage, "cannot open blob: " + path);
  Json j;
  try {
    is >> j;
  } catch (const std::exception& e) {
    fail(errc::malformed_blob, std::string("blob parse: ") + e.what());
  }
  return blob_from_json(j);
}

std::vector<Int> parse_int_list(const std::string& s) {
  std::vector<Int> out;
  std::string cur;
  for (char ch : s) {
    if (ch == ',') {
      if (!cur.empty()) out.push_back(Int(cur));
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  if (!cur.empty()) out.push_back(Int(cur));
  return out;
}

Json subgroup_json(const Subgroup& s) {
  Json j;
  j["order"] = int_json(s.order());
  j["basis"] = imat_json(s.basis);
  return j;
}

Json char_json(const CharacterSpec& s) {
  Json j;
  j["target"] = field_json(s.target);
  j["frob_value"] = ivec_json(s.gen_values.front().c);
  Json at = Json::array();
  for (size_t i = 0; i < s.alg_type.size(); ++i) {
    Json pr = Json::array();
    pr.push_back(static_cast<long>(i));
    pr.push_back(int_json(s.alg_type[i]));
    at.push_back(pr);
  }
  j["alg_type"] = at;
  Json fin = Json::array();
  for (size_t i = 1; i < s.gen_values.size(); ++i) fin.push_back(ivec_json(s.gen_values[i].c));
  j["finite_part"] = fin;
  j["n0"] = s.n0;
  return j;
}

Json herbrand_json(const HerbrandFn& h) {
  Json br = Json::array(), sl = Json::array();
  for (auto& b : h.breaks) {
    Json pair = Json::array();
    pair.push_back(int_json(boost::multiprecision::numerator(b)));
    pair.push_back(int_json(boost::multiprecision::denominator(b)));
    br.push_back(pair);
  }
  for (auto& x : h.slopes) {
    Json pair = Json::array();
    pair.push_back(int_json(boost::multiprecision::numerator(x)));
    pair.push_back(int_json(boost::multiprecision::denominator(x)));
    sl.push_back(pair);
  }
  Json j;
  j["breakpoints"] = br;
  j["slopes"] = sl;
  return j;
}

// filtration input "0:6,1:3" as (jump, order) pairs for psi/phi
Filtration<struct OrdSub> parse_filtration(const std::string& s);

struct OrdSub {
  Int n;
  Int order() const { return n; }
  bool operator==(const OrdSub& o) const { return n == o.n; }
};

Filtration<OrdSub> parse_filtration_impl(const std::string& s) {
  Filtration<OrdSub> f;
  std::string cur;
  auto flushpair = [&](const std::string& item) {
    auto c = item.find(':');
    require(c != std::string::npos, errc::usage, "jumps are v:order pairs");
    Rat v;
    std::string vs = item.substr(0, c);
    auto slash = vs.find('/');
    if (slash == std::string::npos)
      v = Rat(Int(vs));
    else
      v = Rat(Int(vs.substr(0, slash)), Int(vs.substr(slash + 1)));
    f.jumps.push_back({v, OrdSub{Int(item.substr(c + 1))}});
  };
  for (char ch : s) {
    if (ch == ',') {
      flushpair(cur);
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  if (!cur.empty()) flushpair(cur);
  f.canonicalize();
  return f;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"computational toolkit for mixed-characteristic local fields"};
  app.require_subcommand(1);
  app.fallthrough();

  SessionConfig cfg;
  std::string out_path;
  app.add_option("--prec", cfg.prec, "storage precision exponent (0: per-field default)");
  app.add_option("--tors-exp", cfg.c, "principal-unit exponent c");
  std::string frob_mod_s;
  app.add_option("--frob-mod", frob_mod_s, "frob modulus M");
  app.add_option("--unit-depth", cfg.unit_depth, "unit filtration depth (0: derived)");
  app.add_option("--degree-bound", cfg.degree_bound, "directory degree bound");
  app.add_option("--tower-depth", cfg.tower_depth, "tower ladder depth");
  app.add_option("--window", cfg.window, "appendix-A buffer window");
  app.add_option("--jobs", cfg.jobs, "worker count (reports are order-independent)");
  app.add_option("--out", out_path, "output path for the JSON report");

  FieldArgs fa, ea;
  auto add_field_opts = [&](CLI::App* cmd) {
    cmd->add_option("--field", fa.name, "catalog field name or Qp(zetaM)");
    cmd->add_option("--p", fa.p, "residue characteristic");
    cmd->add_option("--f", fa.f, "inertia degree");
    cmd->add_option("--eis", fa.eis, "Eisenstein polynomial, e.g. \"x^2-2\"");
  };
  auto add_efield_opts = [&](CLI::App* cmd) {
    cmd->add_option("--efield", ea.name, "target field E (catalog name or Qp(zetaM))");
  };

  // field
  auto* c_field = app.add_subcommand("field", "field-level computations");
  auto* c_field_info = c_field->add_subcommand("info", "invariants of a field");
  add_field_opts(c_field_info);
  auto* c_field_module = c_field->add_subcommand("module", "the truncated Artin module");
  add_field_opts(c_field_module);
  auto* c_field_ext = c_field->add_subcommand("extensions", "norm subgroup directory");
  add_field_opts(c_field_ext);

  // tower
  std::string ms_arg;
  auto* c_tower = app.add_subcommand("tower", "cyclotomic towers");
  auto* c_tower_build = c_tower->add_subcommand("build", "build K(zeta_m) nodes");
  add_field_opts(c_tower_build);
  c_tower_build->add_option("--ms", ms_arg, "comma-separated cyclotomic orders");
  auto* c_tower_export = c_tower->add_subcommand("export", "export the label-stripped blob");
  add_field_opts(c_tower_export);
  c_tower_export->add_option("--ms", ms_arg, "comma-separated cyclotomic orders");

  // reconstruct
  std::string blob_path, blob2_path;
  long ell = 2;
  int nu = 1;
  auto* c_rec = app.add_subcommand("reconstruct", "blob-side reconstruction");
  auto* c_rec_inv = c_rec->add_subcommand("invariants", "p, d, e, f from the blob");
  c_rec_inv->add_option("--blob", blob_path, "blob path")->required();
  auto* c_rec_chi = c_rec->add_subcommand("chi", "cyclotomic character mod ell^nu");
  c_rec_chi->add_option("--blob", blob_path, "blob path")->required();
  c_rec_chi->add_option("--ell", ell, "prime ell")->required();
  c_rec_chi->add_option("--nu", nu, "exponent nu")->required();
  auto* c_rec_inertia = c_rec->add_subcommand("inertia", "inertia and wild inertia");
  c_rec_inertia->add_option("--blob", blob_path, "blob path")->required();
  auto* c_rec_add = c_rec->add_subcommand("additive", "additive module stages");
  c_rec_add->add_option("--blob", blob_path, "blob path")->required();
  auto* c_rec_field = c_rec->add_subcommand("field", "recover a defining polynomial");
  c_rec_field->add_option("--blob", blob_path, "blob path")->required();
  add_field_opts(c_rec_field);
  add_efield_opts(c_rec_field);

  // herbrand
  std::string jumps_arg;
  long hm = 9;
  auto* c_her = app.add_subcommand("herbrand", "psi/phi transition functions");
  auto* c_her_psi = c_her->add_subcommand("psi", "psi of a filtration");
  c_her_psi->add_option("--jumps", jumps_arg, "v:order pairs, e.g. 0:6,1:3")->required();
  auto* c_her_phi = c_her->add_subcommand("phi", "phi of a filtration");
  c_her_phi->add_option("--jumps", jumps_arg, "v:order pairs")->required();
  auto* c_her_check = c_her->add_subcommand("check", "oracle cross-check on Qp(zetaM)");
  c_her_check->add_option("--p", fa.p, "base prime")->required();
  c_her_check->add_option("--m", hm, "cyclotomic order M")->required();

  // ht
  std::string char_kind = "canonical";
  auto* c_ht = app.add_subcommand("ht", "Hodge-Tate profiles of abelian characters");
  auto* c_ht_num = c_ht->add_subcommand("numbers", "weight multiplicities");
  add_field_opts(c_ht_num);
  add_efield_opts(c_ht_num);
  c_ht_num->add_option("--char", char_kind, "canonical | norm | trivial");
  auto* c_ht_uni = c_ht->add_subcommand("uniformizing", "uniformizing test");
  add_field_opts(c_ht_uni);
  add_efield_opts(c_ht_uni);
  c_ht_uni->add_option("--char", char_kind, "canonical | norm | trivial");

  // check
  std::string group_name = "S4";
  int l16_m = 1, l16_n = 1;
  long axm = 4;
  auto* c_check = app.add_subcommand("check", "verification batteries");
  auto* c_check_a = c_check->add_subcommand("appendixA", "windowed transfer checks");
  add_field_opts(c_check_a);
  c_check_a->add_option("--m", axm, "cyclotomic order for the step")->required();
  auto* c_check_l16 = c_check->add_subcommand("lemma16", "finite solvable tower check");
  c_check_l16->add_option("--group", group_name, "catalog group name");
  c_check_l16->add_option("--m", l16_m, "m");
  c_check_l16->add_option("--n", l16_n, "n");
  auto* c_check_self = c_check->add_subcommand("selftest", "catalog round-trip battery");

  // distinguish
  int dist_depth = 2;
  auto* c_dist = app.add_subcommand("distinguish", "compare two blobs");
  c_dist->add_option("--blob", blob_path, "first blob")->required();
  c_dist->add_option("--blob2", blob2_path, "second blob")->required();
  c_dist->add_option("--depth", dist_depth, "comparison depth");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 64;
  }

  try {
    if (!frob_mod_s.empty()) cfg.mfrob = Int(frob_mod_s);

    if (c_field_info->parsed()) {
      FieldPtr F = resolve_field(fa, cfg);
      Json out;
      out["p"] = int_json(F->p);
      out["e"] = F->e;
      out["f"] = F->f;
      out["d"] = F->d;
      out["q"] = int_json(F->q);
      out["field"] = field_json(F);
      emit(report_shell("field info", cfg, field_json(F), out), out_path);
    } else if (c_field_module->parsed()) {
      FieldPtr F = resolve_field(fa, cfg);
      auto mod = artin_module(F, cfg.artin());
      Json out;
      out["moduli"] = ivec_json(mod.amb.moduli);
      out["wild_exponent"] = mod.a;
      out["principal_exponent"] = mod.c;
      out["depth"] = mod.depth;
      out["class_depth"] = mod.class_prec;
      Json tags = Json::array();
      for (int j = 0; j <= std::min(mod.depth, 10); ++j)
        tags.push_back(int_json(mod.tags[j].order()));
      out["tag_orders"] = tags;
      emit(report_shell("field module", cfg, field_json(F), out), out_path);
    } else if (c_field_ext->parsed()) {
      FieldPtr F = resolve_field(fa, cfg);
      auto mod = artin_module(F, cfg.artin());
      Json entries = Json::array();
      for (auto& ns : directory(mod, cfg.degree_bound)) {
        Json e;
        e["index"] = int_json(ns.index);
        e["e_rel"] = int_json(ns.e_rel);
        e["f_rel"] = int_json(ns.f_rel);
        e["gens"] = imat_json(ns.sub.basis);
        entries.push_back(e);
      }
      Json out;
      out["count"] = entries.size();
      out["entries"] = entries;
      emit(report_shell("field extensions", cfg, field_json(F), out), out_path);
    } else if (c_tower_build->parsed() || c_tower_export->parsed()) {
      FieldPtr F = resolve_field(fa, cfg);
      std::vector<Int> ms = parse_int_list(ms_arg);
      TowerBundle tb = build_tower(F, ms, cfg.artin());
      MabBlob blob = export_blob(tb, cfg.degree_bound);
      Json inputs = field_json(F);
      inputs["ms"] = ivec_json(ms);
      if (c_tower_export->parsed()) {
        emit(blob_json(blob), out_path);
      } else {
        Json nodes = Json::array();
        for (auto& n : blob.nodes) {
          Json nj;
          nj["id"] = n.id;
          nj["invariants"] = invariants_json(n.invariants);
          nodes.push_back(nj);
        }
        Json out;
        out["nodes"] = nodes;
        emit(report_shell("tower build", cfg, inputs, out), out_path);
      }
    } else if (c_rec_inv->parsed()) {
      MabBlob blob = load_blob(blob_path);
      auto inv = recon_invariants(blob.base().invariants);
      Json out;
      out["p"] = int_json(inv.p);
      out["d"] = inv.d;
      out["e"] = inv.e;
      out["f"] = inv.f;
      Json in;
      in["blob"] = blob_path;
      emit(report_shell("reconstruct invariants", cfg, in, out), out_path);
    } else if (c_rec_chi->parsed()) {
      MabBlob blob = load_blob(blob_path);
      auto rep = reconstruct_chi(blob, Int(ell), nu);
      Json out;
      out["ell"] = ell;
      out["nu"] = nu;
      out["values"] = ivec_json(rep.values);
      out["nodes_used"] = rep.nodes_used;
      Json in;
      in["blob"] = blob_path;
      emit(report_shell("reconstruct chi", cfg, in, out), out_path);
    } else if (c_rec_inertia->parsed()) {
      MabBlob blob = load_blob(blob_path);
      auto rep = inertia_detect(blob);
      Json out;
      out["inertia"] = subgroup_json(rep.inertia);
      out["wild"] = subgroup_json(rep.wild);
      out["exact"] = rep.exact;
      out["tame_available"] = rep.tame_available;
      out["tame_agrees"] = rep.tame_agrees;
      Json in;
      in["blob"] = blob_path;
      emit(report_shell("reconstruct inertia", cfg, in, out), out_path);
      if (!rep.exact) return 2;
    } else if (c_rec_add->parsed()) {
      MabBlob blob = load_blob(blob_path);
      auto rec = additive_reconstruct(blob);
      Json stages = Json::array();
      for (auto& st : rec.stages) {
        Json sj;
        sj["node"] = st.node_id;
        sj["rank"] = st.rank;
        sj["scale_exponent"] = st.r;
        Json acts = Json::array();
        for (auto& a : st.actions) acts.push_back(imat_json(a));
        sj["actions"] = acts;
        stages.push_back(sj);
      }
      Json out;
      out["stages"] = stages;
      Json in;
      in["blob"] = blob_path;
      emit(report_shell("reconstruct additive", cfg, in, out), out_path);
    } else if (c_rec_field->parsed()) {
      MabBlob blob = load_blob(blob_path);
      FieldPtr K = resolve_field(fa, cfg);
      SessionConfig ecfg = cfg;
      FieldArgs efa;
      efa.name = ea.name;
      FieldPtr E = resolve_field(efa, ecfg);
      auto mod = artin_module(K, cfg.artin());
      auto rho = canonical_uniformizing(mod, E);
      auto rec = recover_field(blob, E, rho.gen_values);
      Json out;
      out["minpoly"] = ivec_json(rec.minpoly);
      out["presentation"] = field_json(rec.presentation);
      auto inv = field_invariants(rec.presentation);
      out["invariants"] = Json{{"p", int_json(inv.p)}, {"d", inv.d}, {"e", inv.e}, {"f", inv.f}};
      Json in;
      in["blob"] = blob_path;
      in["E"] = field_json(E);
      emit(report_shell("reconstruct field", cfg, in, out), out_path);
    } else if (c_her_psi->parsed() || c_her_phi->parsed()) {
      auto f = parse_filtration_impl(jumps_arg);
      HerbrandFn h = c_her_psi->parsed() ? psi_of(f) : phi_of(f);
      Json in;
      in["jumps"] = jumps_arg;
      emit(report_shell(c_her_psi->parsed() ? "herbrand psi" : "herbrand phi", cfg, in,
                        herbrand_json(h)),
           out_path);
    } else if (c_her_check->parsed()) {
      require(fa.p >= 2, errc::usage, "need --p");
      SessionConfig c2 = cfg;
      FieldPtr base = catalog_make(Int(fa.p), 1, {-Int(fa.p), 1}, cfg.c + 2);
      auto adj = adjoin_cyclotomic(base, Int(hm));
      auto ram = lower_numbering_oracle(adj);
      auto mod = artin_module(base, c2.artin());
      auto ns = norm_subgroup_of(mod, adj);
      auto filt = unit_filtration_of_quotient(mod, ns);
      bool match = filt.profile().size() == ram.upper.profile().size();
      if (match)
        for (size_t i = 0; i < filt.profile().size(); ++i)
          match = match && filt.profile()[i] == ram.upper.profile()[i];
      Json out;
      out["oracle_upper"] = [&] {
        Json a = Json::array();
        for (auto& [v, o] : ram.upper.profile()) {
          Json pr = Json::array();
          pr.push_back(int_json(boost::multiprecision::numerator(v)));
          pr.push_back(int_json(boost::multiprecision::denominator(v)));
          pr.push_back(int_json(o));
          a.push_back(pr);
        }
        return a;
      }();
      out["reciprocity_match"] = match;
      Json in;
      in["p"] = fa.p;
      in["m"] = hm;
      emit(report_shell("herbrand check", cfg, in, out), out_path);
      if (!match) return 70;
    } else if (c_ht_num->parsed() || c_ht_uni->parsed()) {
      FieldPtr K = resolve_field(fa, cfg);
      FieldArgs efa;
      efa.name = ea.name.empty() ? fa.name : ea.name;
      SessionConfig e2 = cfg;
      FieldPtr E = efa.name.empty() ? K : resolve_field(efa, e2);
      auto mod = artin_module(K, cfg.artin());
      CharacterSpec s = [&] {
        if (char_kind == "canonical") return canonical_uniformizing(mod, E);
        if (char_kind == "norm") {
          auto embs = embeddings(K, E);
          return algebraic_character(mod, E, std::vector<Int>(embs.size(), 1));
        }
        if (char_kind == "trivial")
          return finite_order_character(mod, E,
                                        std::vector<KElem>(mod.amb.rank(), KElem::one(E)));
        fail(errc::usage, "unknown character kind: " + char_kind);
      }();
      Json in;
      in["K"] = field_json(K);
      in["E"] = field_json(E);
      in["char"] = char_kind;
      in["spec"] = char_json(s);
      if (c_ht_num->parsed()) {
        auto prof = ht_numbers(s);
        Json mult = Json::array();
        for (auto& [w, m] : prof.mult) {
          Json pr = Json::array();
          pr.push_back(int_json(w));
          pr.push_back(int_json(m));
          mult.push_back(pr);
        }
        Json out;
        out["multiplicities"] = mult;
        out["total"] = int_json(prof.total);
        out["hodge_tate"] = prof.hodge_tate;
        emit(report_shell("ht numbers", cfg, in, out), out_path);
      } else {
        auto v = is_uniformizing(s, mod);
        Json out;
        out["uniformizing"] = v.uniformizing;
        out["witness_embedding"] = v.witness_embedding;
        out["witness_level"] = v.witness_level;
        emit(report_shell("ht uniformizing", cfg, in, out), out_path);
      }
    } else if (c_check_a->parsed()) {
      FieldPtr K = resolve_field(fa, cfg);
      auto adj = adjoin_cyclotomic(K, Int(axm));
      auto modK = artin_module(K, cfg.artin());
      ArtinParams parL = cfg.artin();
      parL.depth = modK.depth * (adj.ext->e / K->e);
      auto modL = artin_module(adj.ext, parL);
      auto rep = appendixA_checks(modK, modL, adj, cfg.window);
      Json out;
      out["ver_kernel_window_trivial"] = rep.ver_kernel_window_trivial;
      out["transfer_norm_identity"] = rep.transfer_norm_identity;
      out["fixed_points_equal_image"] = rep.fixed_points_equal_image;
      out["power_intersection_ok"] = rep.power_intersection_ok;
      out["power_order_shrinks"] = rep.power_order_shrinks;
      Json in;
      in["K"] = field_json(K);
      in["m"] = axm;
      emit(report_shell("check appendixA", cfg, in, out), out_path);
      bool all = rep.ver_kernel_window_trivial && rep.transfer_norm_identity &&
                 rep.fixed_points_equal_image && rep.power_intersection_ok &&
                 rep.power_order_shrinks;
      if (!all) return 70;
    } else if (c_check_l16->parsed()) {
      FiniteGroup g = [&] {
        for (auto& ng : solvable_catalog())
          if (ng.name == group_name) return ng.group;
        fail(errc::usage, "unknown group: " + group_name);
      }();
      auto rep = lemma16_check(g, l16_m, l16_n);
      Json entries = Json::array();
      for (auto& e : rep.entries) {
        Json ej;
        ej["subgroup_order"] = static_cast<long>(e.h.size());
        ej["pass"] = e.pass;
        entries.push_back(ej);
      }
      Json out;
      out["all_pass"] = rep.all_pass;
      out["entries"] = entries;
      Json in;
      in["group"] = group_name;
      in["m"] = l16_m;
      in["n"] = l16_n;
      emit(report_shell("check lemma16", cfg, in, out), out_path);
      if (!rep.all_pass) return 70;
    } else if (c_check_self->parsed()) {
      Json rows = Json::array();
      bool all = true;
      for (auto& cf : standard_catalog(cfg.c)) {
        auto mod = artin_module(cf.field, cfg.artin());
        auto got = recon_invariants(mod.invariants());
        bool ok = got == field_invariants(cf.field);
        all = all && ok;
        Json r;
        r["field"] = cf.name;
        r["ok"] = ok;
        rows.push_back(r);
      }
      Json out;
      out["all_pass"] = all;
      out["fields"] = rows;
      emit(report_shell("check selftest", cfg, Json::object(), out), out_path);
      if (!all) return 70;
    } else if (c_dist->parsed()) {
      MabBlob b1 = load_blob(blob_path);
      MabBlob b2 = load_blob(blob2_path);
      auto rep = distinguish(b1, b2);
      Json out;
      out["verdict"] = rep.distinguished ? "distinguished" : "indistinguishable_at_depth";
      if (rep.distinguished) {
        Json w;
        w["kind"] = rep.witness_kind;
        w["lhs"] = rep.lhs;
        w["rhs"] = rep.rhs;
        out["witness"] = w;
      }
      Json in;
      in["blob"] = blob_path;
      in["blob2"] = blob2_path;
      in["depth"] = dist_depth;
      emit(report_shell("distinguish", cfg, in, out), out_path);
    }
    return 0;
  } catch (const error& e) {
    std::cerr << "error: " << e.what() << "\n";
    switch (e.code()) {
      case errc::usage:
        return 64;
      case errc::precision_too_low:
      case errc::precision_loss:
      case errc::depth_too_shallow:
      case errc::directory_too_shallow:
      case errc::window_too_narrow:
      case errc::span_rank_deficient:
      case errc::no_valid_tower_node:
        return 2;
      default:
        return 70;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 70;
  }
}
