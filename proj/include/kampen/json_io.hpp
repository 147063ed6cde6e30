#pragma once

#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "kampen/certificates.hpp"
#include "kampen/core.hpp"
#include "kampen/embedding.hpp"
#include "kampen/simplicial.hpp"
#include "kampen/smith.hpp"
#include "kampen/z2complex.hpp"

namespace kampen {

using Json = nlohmann::ordered_json;

inline Json int_json(const Int& v) {
  static const Int lo = std::numeric_limits<long long>::min();
  static const Int hi = std::numeric_limits<long long>::max();
  if (v >= lo && v <= hi) return Json(static_cast<long long>(v));
  return Json(v.str());
}

inline Int json_int(const Json& j) {
  if (j.is_number_integer()) return Int(j.get<long long>());
  if (j.is_string()) {
    try {
      return Int(j.get<std::string>());
    } catch (const std::exception&) {
      throw input_error("not an integer: " + j.dump());
    }
  }
  throw input_error("expected an integer, got " + j.dump());
}

// ---- complex files: {"name": ..., "maximal_simplices": [[...], ...]} ----

inline Json complex_to_json(const SimplicialComplex& K) {
  Json j;
  j["name"] = K.name;
  Json mx = Json::array();
  for (const auto& s : K.maximal_simplices()) mx.push_back(s);
  j["maximal_simplices"] = std::move(mx);
  return j;
}

inline SimplicialComplex complex_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("name") || !j.contains("maximal_simplices"))
    throw input_error("complex file needs fields \"name\" and \"maximal_simplices\"");
  if (!j["name"].is_string()) throw input_error("complex name must be a string");
  if (!j["maximal_simplices"].is_array())
    throw input_error("maximal_simplices must be an array of vertex lists");
  std::vector<VertexList> maximal;
  for (const Json& s : j["maximal_simplices"]) {
    if (!s.is_array()) throw input_error("each maximal simplex must be an array");
    VertexList vl;
    for (const Json& v : s) {
      if (!v.is_number_integer()) throw input_error("vertices must be integers");
      vl.push_back(v.get<int>());
    }
    maximal.push_back(std::move(vl));
  }
  return SimplicialComplex::from_maximal(j["name"].get<std::string>(), maximal);
}

inline Json parse_json_text(const std::string& text, const std::string& what) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw input_error("malformed JSON in " + what + ": " + e.what());
  }
}

inline SimplicialComplex load_complex(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw input_error("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return complex_from_json(parse_json_text(ss.str(), path));
}

// Digest of the canonical compact serialization, so formatting differences
// in input files do not change it.
inline std::string complex_digest(const SimplicialComplex& K) {
  return fnv1a_hex(complex_to_json(K).dump());
}

// ---- chain files: {"dimension", "ring", "terms": [{"cell", "coeff"}]} ----

inline Json product_cell_json(const ProductCell& c) {
  return Json::array({Json(c.a), Json(c.b)});
}

inline ProductCell product_cell_from_json(const Json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_array() || !j[1].is_array())
    throw input_error("a product cell is a pair of vertex lists");
  ProductCell c;
  for (const Json& v : j[0]) c.a.push_back(v.get<int>());
  for (const Json& v : j[1]) c.b.push_back(v.get<int>());
  return c;
}

inline Json chain_json_raw(int dim, Ring ring, Json terms) {
  Json j;
  j["dimension"] = dim;
  j["ring"] = ring_name(ring);
  j["terms"] = std::move(terms);
  return j;
}

inline Json dp_chain_json(const Z2Complex<ProductCell>& Z, int d, const Vec& x,
                          Ring ring = Ring::Z) {
  Json terms = Json::array();
  for (int i = 0; i < Z.ncells(d); ++i) {
    if (x[i] == 0) continue;
    Json t;
    t["cell"] = product_cell_json(Z.cells[d][i]);
    t["coeff"] = int_json(x[i]);
    terms.push_back(std::move(t));
  }
  return chain_json_raw(d, ring, std::move(terms));
}

inline Json quotient_chain_json(const Z2Complex<ProductCell>& Z, const QuotientComplex& Q,
                                int d, const Vec& x, Ring ring = Ring::Z) {
  Json terms = Json::array();
  for (int q = 0; q < Q.ncells(d); ++q) {
    if (x[q] == 0) continue;
    Json t;
    t["cell"] = product_cell_json(Z.cells[d][Q.src_of[d][q]]);
    t["coeff"] = int_json(x[q]);
    terms.push_back(std::move(t));
  }
  return chain_json_raw(d, ring, std::move(terms));
}

inline Json pchain_json(const PChain& ch, int dim, Ring ring = Ring::Z) {
  Json terms = Json::array();
  for (const auto& [cell, v] : ch) {
    if (v == 0) continue;
    Json t;
    t["cell"] = product_cell_json(cell);
    t["coeff"] = int_json(v);
    terms.push_back(std::move(t));
  }
  return chain_json_raw(dim, ring, std::move(terms));
}

struct ParsedChain {
  int dimension = 0;
  Ring ring = Ring::Z;
  PChain terms;
};

inline ParsedChain chain_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("dimension") || !j.contains("ring") || !j.contains("terms"))
    throw input_error("chain file needs fields \"dimension\", \"ring\", \"terms\"");
  ParsedChain ch;
  ch.dimension = j["dimension"].get<int>();
  std::string rn = j["ring"].get<std::string>();
  if (rn == "Z")
    ch.ring = Ring::Z;
  else if (rn == "Z2")
    ch.ring = Ring::Z2;
  else
    throw input_error("unknown ring " + rn);
  for (const Json& t : j["terms"]) {
    ProductCell cell = product_cell_from_json(t["cell"]);
    if (cell.dim() != ch.dimension)
      throw input_error("chain term dimension mismatch");
    pchain_add_term(ch.terms, cell, json_int(t["coeff"]));
  }
  return ch;
}

// ---- matrix dump (triplets) ----

inline Json sparse_json(const SparseIntMatrix& M) {
  Json j;
  j["rows"] = M.rows;
  j["cols"] = M.cols;
  Json entries = Json::array();
  for (int c = 0; c < M.cols; ++c)
    for (const auto& [r, v] : M.column[c])
      entries.push_back(Json::array({r, c, int_json(v)}));
  j["entries"] = std::move(entries);
  return j;
}

// ---- report headers ----

inline Json report_header(const SimplicialComplex& K, std::uint64_t seed) {
  Json j;
  j["version"] = version;
  j["seed"] = seed;
  Json in;
  in["name"] = K.name;
  in["digest"] = complex_digest(K);
  j["input"] = std::move(in);
  return j;
}

// ---- Smith report ----

inline Json smith_report_json(const SimplicialComplex& K, const Z2Complex<ProductCell>& Z,
                              const QuotientComplex& Q, const SmithReport& sr,
                              const ReducedReport* red, const SmithReport* mod2,
                              std::uint64_t seed) {
  Json j = report_header(K, seed);
  j["deleted_product_f"] = Z.f_vector();
  j["max_k"] = sr.max_k;
  j["mod2"] = sr.mod2;
  Ring ring = sr.mod2 ? Ring::Z2 : Ring::Z;
  Json classes = Json::array();
  for (int k = 0; k <= sr.max_k; ++k) {
    Json c;
    c["k"] = k;
    c["rho"] = rho_name(rho_of_degree(k));
    c["vanishes"] = static_cast<bool>(sr.vanish[k]);
    c["representative"] = k <= Z.dim ? dp_chain_json(Z, k, sr.reps[k], ring) : Json();
    classes.push_back(std::move(c));
  }
  j["classes"] = std::move(classes);
  j["index"] = sr.index >= 0 ? Json(sr.index) : Json();
  if (red) {
    Json rc = Json::array();
    for (int k = 0; k <= red->max_k; ++k) {
      Json c;
      c["k"] = k;
      c["ring"] = k % 2 == 0 ? "Z" : "Z2";
      c["vanishes"] = static_cast<bool>(red->vanish[k]);
      c["representative"] = k <= Q.dim
                                ? quotient_chain_json(Z, Q, k, red->reps[k],
                                                      k % 2 == 0 ? Ring::Z : Ring::Z2)
                                : Json();
      rc.push_back(std::move(c));
    }
    j["reduced_classes"] = std::move(rc);
    j["reduced_index"] = red->index >= 0 ? Json(red->index) : Json();
  }
  if (mod2) {
    Json mc = Json::array();
    for (int k = 0; k <= mod2->max_k; ++k) {
      Json c;
      c["k"] = k;
      c["vanishes"] = static_cast<bool>(mod2->vanish[k]);
      mc.push_back(std::move(c));
    }
    j["mod2_classes"] = std::move(mc);
    j["mod2_index"] = mod2->index >= 0 ? Json(mod2->index) : Json();
  }
  return j;
}

// ---- resolution dump ----

inline Json resolution_json(const SimplicialComplex& K, const Z2Complex<ProductCell>& Z,
                            const std::vector<Vec>& phis, std::uint64_t seed) {
  Json j = report_header(K, seed);
  j["deleted_product_f"] = Z.f_vector();
  Json ph = Json::array();
  for (size_t i = 0; i < phis.size(); ++i)
    ph.push_back(dp_chain_json(Z, static_cast<int>(i), phis[i], Ring::Z));
  j["phis"] = std::move(ph);
  return j;
}

// ---- certificates ----

inline Json torsion_certificate_json(const Z2Complex<ProductCell>& Z,
                                     const QuotientComplex& Q,
                                     const TorsionCertificate& cert) {
  Json j;
  j["dimension"] = cert.dim;
  j["order"] = int_json(cert.n);
  j["value"] = int_json(cert.value);
  j["c"] = quotient_chain_json(Z, Q, cert.dim, cert.c);
  j["z"] = quotient_chain_json(Z, Q, cert.dim - 1, cert.z);
  return j;
}

// ---- obstruction report ----

inline Json obstruction_report_json(const SimplicialComplex& K, const ObstructionReport& rep,
                                    std::uint64_t seed) {
  Json j = report_header(K, seed);
  j["m"] = rep.m;
  j["general_position_trivial"] = rep.trivial_general_position;
  Json params = Json::array();
  for (const Int& t : rep.params) params.push_back(int_json(t));
  j["params"] = std::move(params);
  j["deleted_product_f"] = rep.f_dp;
  if (rep.trivial_general_position || rep.theta.empty()) {
    j["cocycle"] = Json();
    j["vanishes"] = true;
    j["smith_vanishes"] = true;
    j["reduced"] = Json();
    j["mod2_vanishes"] = true;
    j["torsion_certificate"] = Json();
    j["mod2_witness"] = Json();
    j["verdict"] = "zero";
    return j;
  }
  Z2Complex<ProductCell> Z = build_deleted_product(K);
  QuotientComplex Q = build_quotient(Z);
  j["cocycle"] = dp_chain_json(Z, rep.m, rep.theta, Ring::Z);
  j["vanishes"] = rep.vanishes;
  j["smith_vanishes"] = rep.smith_vanishes;
  Json red;
  red["ring"] = rep.m % 2 == 0 ? "Z" : "Z2";
  red["vanishes"] = rep.reduced_vanishes;
  red["representative"] =
      quotient_chain_json(Z, Q, rep.m, rep.reduced, rep.m % 2 == 0 ? Ring::Z : Ring::Z2);
  j["reduced"] = std::move(red);
  j["mod2_vanishes"] = rep.mod2_vanishes;
  j["torsion_certificate"] =
      rep.torsion ? torsion_certificate_json(Z, Q, *rep.torsion) : Json();
  j["mod2_witness"] = rep.mod2_witness
                          ? quotient_chain_json(Z, Q, rep.m, *rep.mod2_witness, Ring::Z2)
                          : Json();
  j["verdict"] = rep.vanishes ? "zero" : "nonzero";
  return j;
}

// ---- join report ----

inline Json trace_json(const std::vector<TraceStep>& trace) {
  Json t = Json::array();
  for (const TraceStep& s : trace) {
    Json e;
    e["step"] = s.name;
    e["detail"] = s.detail;
    e["ok"] = s.ok;
    t.push_back(std::move(e));
  }
  return t;
}

inline Json join_report_json(const SimplicialComplex& K, const JoinReport& rep,
                             std::uint64_t seed) {
  Json j = report_header(K, seed);
  j["m"] = rep.m;
  j["f_K"] = rep.f_K;
  j["f_L"] = rep.f_L;
  j["hypothesis_holds"] = rep.hypothesis_holds;
  j["direct_nonzero"] = rep.direct_nonzero;
  j["certified"] = rep.certified;
  j["mod2_certified"] = rep.mod2_certified;
  if (rep.hypothesis_holds) {
    JoinContext ctx = build_join_context(K);
    j["order"] = int_json(rep.n);
    j["evaluation"] = int_json(rep.eval);
    j["source_certificate"] = torsion_certificate_json(ctx.ZK, ctx.QK, rep.source);
    Json jc;
    jc["u"] = rep.cert.u;
    jc["v"] = rep.cert.v;
    jc["w"] = rep.cert.w;
    jc["order"] = int_json(rep.cert.n);
    jc["c"] = pchain_json(rep.cert.c, rep.m);
    jc["z"] = pchain_json(rep.cert.z, rep.m - 1);
    jc["zeta"] = pchain_json(rep.cert.zeta, rep.m + 2);
    jc["pz"] = quotient_chain_json(ctx.ZL, ctx.QL, rep.m + 2, rep.cert.pz);
    jc["dt"] = quotient_chain_json(ctx.ZL, ctx.QL, rep.m + 1, rep.cert.dt);
    j["join_certificate"] = std::move(jc);
  } else {
    j["order"] = Json();
    j["evaluation"] = Json();
    j["source_certificate"] = Json();
    j["join_certificate"] = Json();
  }
  j["trace"] = trace_json(rep.trace);
  j["verdict"] = rep.hypothesis_holds
                     ? (rep.certified && rep.mod2_certified && rep.direct_nonzero
                            ? "verified"
                            : "failed")
                     : "hypothesis_fails";
  return j;
}

// ---- one assembly function per CLI subcommand, so the binary and the
// ---- format tests produce reports through the same code path

inline std::string render_report(const Json& j) { return j.dump(2) + "\n"; }

inline Json dp_report_json(const SimplicialComplex& K, bool with_cells,
                           std::uint64_t seed) {
  Z2Complex<ProductCell> Z = build_deleted_product(K);
  Z.validate();
  Json j = report_header(K, seed);
  j["f"] = Z.f_vector();
  j["dim"] = Z.dim;
  if (with_cells) {
    Json all = Json::array();
    for (int d = 0; d <= Z.dim; ++d) {
      Json layer = Json::array();
      for (int i = 0; i < Z.ncells(d); ++i) {
        Json c;
        c["cell"] = product_cell_json(Z.cells[d][i]);
        c["fundamental_domain"] = static_cast<bool>(Z.in_fd[d][i]);
        c["partner"] = Z.tau_partner[d][i];
        c["tau_sign"] = Z.tau_sign[d][i];
        layer.push_back(std::move(c));
      }
      all.push_back(std::move(layer));
    }
    j["cells"] = std::move(all);
  }
  return j;
}

inline Json quotient_report_json(const SimplicialComplex& K, std::uint64_t seed) {
  Z2Complex<ProductCell> Z = build_deleted_product(K);
  Z.validate();
  QuotientComplex Q = build_quotient(Z);
  Json j = report_header(K, seed);
  j["f"] = Q.f_vector();
  j["dim"] = Q.dim;
  Json cells = Json::array();
  for (int d = 0; d <= Q.dim; ++d) {
    Json layer = Json::array();
    for (int q = 0; q < Q.ncells(d); ++q)
      layer.push_back(product_cell_json(Z.cells[d][Q.src_of[d][q]]));
    cells.push_back(std::move(layer));
  }
  j["cells"] = std::move(cells);
  Json bnd = Json::array();
  for (int d = 1; d <= Q.dim; ++d) bnd.push_back(sparse_json(Q.bnd[d]));
  j["boundary"] = std::move(bnd);
  return j;
}

inline Json smith_command_json(const SimplicialComplex& K, bool mod2, int max_k,
                               std::uint64_t seed) {
  Z2Complex<ProductCell> Z = build_deleted_product(K);
  QuotientComplex Q = build_quotient(Z);
  if (mod2) {
    SmithReport sr = smith_classes_and_index(Z, max_k, true);
    return smith_report_json(K, Z, Q, sr, nullptr, nullptr, seed);
  }
  SmithReport sr = smith_classes_and_index(Z, max_k, false);
  ReducedReport red = reduced_classes(Z, Q, sr.phis, sr.max_k);
  SmithReport m2 = smith_classes_and_index(Z, max_k, true);
  return smith_report_json(K, Z, Q, sr, &red, &m2, seed);
}

inline Json resolution_command_json(const SimplicialComplex& K, int max_n,
                                    std::uint64_t seed) {
  Z2Complex<ProductCell> Z = build_deleted_product(K);
  if (Z.empty()) throw input_error("resolution: deleted product is empty");
  int n = max_n >= 0 ? max_n : Z.dim;
  std::vector<Vec> phis = resolution_of_one(Z, n, false, false);
  return resolution_json(K, Z, phis, seed);
}

inline Json vk_command_json(const SimplicialComplex& K, int m,
                            const std::vector<Int>& params, std::uint64_t seed) {
  int mm = m >= 1 ? m : 2 * K.dim();
  return obstruction_report_json(K, embedding_class_report(K, mm, params), seed);
}

struct CertifyResult {
  Json report;
  bool vanishes = true;
};

inline CertifyResult certify_command_json(const SimplicialComplex& K, int m, bool mod2,
                                          std::uint64_t seed) {
  if (!mod2 && m % 2 != 0)
    throw input_error("integer certificates need even m; use --mod2 for odd m");
  ObstructionReport rep = embedding_class_report(K, m);
  Json j = report_header(K, seed);
  j["m"] = m;
  j["mod2"] = mod2;
  CertifyResult out;
  if (mod2) {
    out.vanishes = rep.mod2_vanishes;
    j["class_vanishes"] = rep.mod2_vanishes;
    j["witness"] = Json();
    if (!rep.mod2_vanishes && rep.mod2_witness) {
      Z2Complex<ProductCell> Z = build_deleted_product(K);
      QuotientComplex Q = build_quotient(Z);
      j["witness"] = quotient_chain_json(Z, Q, m, *rep.mod2_witness, Ring::Z2);
    }
    j["verdict"] = rep.mod2_vanishes ? "zero" : "nonzero";
  } else {
    out.vanishes = rep.vanishes;
    j["class_vanishes"] = rep.vanishes;
    j["certificate"] = Json();
    if (!rep.vanishes && rep.torsion) {
      Z2Complex<ProductCell> Z = build_deleted_product(K);
      QuotientComplex Q = build_quotient(Z);
      j["certificate"] = torsion_certificate_json(Z, Q, *rep.torsion);
    }
    j["verdict"] = rep.vanishes ? "zero" : "nonzero";
  }
  out.report = std::move(j);
  return out;
}

struct JoinVerifyResult {
  Json report;
  bool hypothesis_holds = false;
};

inline JoinVerifyResult join_command_json(const SimplicialComplex& K, int m,
                                          std::uint64_t seed) {
  JoinReport rep = verify_join_theorem(K, m);
  return {join_report_json(K, rep, seed), rep.hypothesis_holds};
}

}  // namespace kampen
