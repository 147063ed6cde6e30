#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "kampen/json_io.hpp"
#include "kampen/linalg.hpp"

namespace {

using namespace kampen;

void write_output(const Json& j, const std::string& out) {
  std::string text = render_report(j);
  if (out.empty()) {
    std::cout << text;
  } else {
    std::ofstream f(out);
    if (!f) throw input_error("cannot write " + out);
    f << text;
  }
}

int thread_cap() {
  const char* env = std::getenv("KAMPEN_THREADS");
  if (!env) return 1;
  int n = std::atoi(env);
  return n >= 1 ? n : 1;
}

std::vector<Int> parse_params(const std::string& s) {
  std::vector<Int> out;
  if (s.empty()) return out;
  std::string cur;
  for (char ch : s + ",") {
    if (ch == ',') {
      if (cur.empty()) throw input_error("empty entry in parameter list");
      try {
        out.emplace_back(cur);
      } catch (const std::exception&) {
        throw input_error("bad parameter value: " + cur);
      }
      cur.clear();
    } else if (ch == ' ') {
      continue;
    } else {
      cur.push_back(ch);
    }
  }
  return out;
}

SimplicialComplex gen_complex(const std::string& family, const std::vector<int>& params) {
  std::string f = family;
  if (f == "complete") f = "complete_graph";
  if (f == "bipartite") f = "complete_bipartite";
  return generate_corpus(f, params);
}

int run_gen(const std::string& family, const std::vector<int>& params,
            const std::string& out) {
  write_output(complex_to_json(gen_complex(family, params)), out);
  return 0;
}

int run_dp(const std::string& path, bool cells, const std::string& out,
           std::uint64_t seed) {
  write_output(dp_report_json(load_complex(path), cells, seed), out);
  return 0;
}

int run_quotient(const std::string& path, const std::string& out, std::uint64_t seed) {
  write_output(quotient_report_json(load_complex(path), seed), out);
  return 0;
}

int run_smith(const std::string& path, bool mod2, int max_k, const std::string& out,
              std::uint64_t seed) {
  write_output(smith_command_json(load_complex(path), mod2, max_k, seed), out);
  return 0;
}

int run_resolution(const std::string& path, int max_n, const std::string& out,
                   std::uint64_t seed) {
  write_output(resolution_command_json(load_complex(path), max_n, seed), out);
  return 0;
}

int run_vk(const std::string& path, int m, const std::string& params,
           const std::string& out, std::uint64_t seed) {
  write_output(vk_command_json(load_complex(path), m, parse_params(params), seed), out);
  return 0;
}

int run_certify(const std::string& path, int m, bool mod2, const std::string& out,
                std::uint64_t seed) {
  CertifyResult r = certify_command_json(load_complex(path), m, mod2, seed);
  write_output(r.report, out);
  return r.vanishes ? 1 : 0;
}

int run_join_verify(const std::string& path, int m, const std::string& out,
                    std::uint64_t seed) {
  JoinVerifyResult r = join_command_json(load_complex(path), m, seed);
  write_output(r.report, out);
  return r.hypothesis_holds ? 0 : 1;
}

// ---- selftest ----

struct Suite {
  std::string name;
  bool ok = true;
  std::string detail;
};

Suite suite_sphere_index() {
  Suite s{"sphere-index"};
  for (int n = 1; n <= 4; ++n) {
    auto Z = build_sphere(n);
    SmithReport r = smith_classes_and_index(Z);
    if (r.index != n + 1) {
      s.ok = false;
      s.detail = "S" + std::to_string(n) + " index " + std::to_string(r.index);
      return s;
    }
    for (int k = 0; k <= r.max_k; ++k)
      if (static_cast<bool>(r.vanish[k]) != (k > n)) {
        s.ok = false;
        s.detail = "S" + std::to_string(n) + " vanish pattern";
        return s;
      }
  }
  s.detail = "I(S^n)=n+1 for n=1..4";
  return s;
}

Suite suite_dp_invariants() {
  Suite s{"deleted-product-invariants"};
  struct Case {
    SimplicialComplex K;
    std::vector<int> f;
  };
  std::vector<Case> cases;
  cases.push_back({complete_graph(5), {20, 60, 30}});
  cases.push_back({complete_bipartite(3, 3), {30, 72, 36}});
  cases.push_back({complete_graph(4), {12, 24, 6}});
  for (const Case& c : cases) {
    Z2Complex<ProductCell> Z = build_deleted_product(c.K);
    Z.validate();
    if (Z.f_vector() != c.f) {
      s.ok = false;
      s.detail = c.K.name + " cell counts";
      return s;
    }
  }
  s.detail = "free action, dd=0, tau d = d tau, cell counts";
  return s;
}

Suite suite_graph_completeness() {
  Suite s{"graph-completeness"};
  auto phi2_nonzero = [](const SimplicialComplex& K) {
    Z2Complex<ProductCell> Z = build_deleted_product(K);
    return !smith_classes_and_index(Z).vanish[2];
  };
  if (!phi2_nonzero(complete_graph(5)) || !phi2_nonzero(complete_bipartite(3, 3)) ||
      phi2_nonzero(complete_graph(4))) {
    s.ok = false;
    s.detail = "Phi^2 pattern on K5, K3_3, K4";
    return s;
  }
  s.detail = "Phi^2(K5), Phi^2(K3_3) nonzero; Phi^2(K4) zero";
  return s;
}

Suite suite_hanani_tutte() {
  Suite s{"hanani-tutte"};
  SimplicialComplex K = complete_graph(5);
  Z2Complex<ProductCell> Z = build_deleted_product(K);
  CocycleResult cr = embedding_cocycle_with_retry(K, Z, 2);
  Int total = fd_edge_crossing_total(Z, cr.theta);
  if (pos_mod(total, 2) != 1) {
    s.ok = false;
    s.detail = "K5 crossing total " + total.str();
    return s;
  }
  s.detail = "K5 straight-line crossing total " + total.str() + " is odd";
  return s;
}

Suite suite_snf_random(std::uint64_t seed) {
  Suite s{"smith-normal-form"};
  Rng rng(seed);
  for (int trial = 0; trial < 100; ++trial) {
    int r = 1 + static_cast<int>(rng.below(12));
    int c = 1 + static_cast<int>(rng.below(12));
    DenseMat M(r, c);
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < c; ++j) M.at(i, j) = rng.range(-9, 9);
    SnfResult snf = smith_normal_form(M);
    DenseMat D = snf.U.mul(M).mul(snf.V);
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < c; ++j) {
        Int want = (i == j && i < static_cast<int>(snf.diag.size())) ? snf.diag[i] : Int(0);
        if (D.at(i, j) != want) {
          s.ok = false;
          s.detail = "UMV != D at trial " + std::to_string(trial);
          return s;
        }
      }
    if (!snf.U.mul(snf.Uinv).is_identity() || !snf.V.mul(snf.Vinv).is_identity()) {
      s.ok = false;
      s.detail = "transform inverses at trial " + std::to_string(trial);
      return s;
    }
    for (size_t i = 0; i + 1 < snf.diag.size(); ++i)
      if (snf.diag[i + 1] % snf.diag[i] != 0) {
        s.ok = false;
        s.detail = "divisibility at trial " + std::to_string(trial);
        return s;
      }
  }
  s.detail = "100 random matrices: UMV=D, unimodular transforms, divisibility";
  return s;
}

Suite suite_cone_prism(std::uint64_t seed) {
  Suite s{"cone-prism-laws"};
  JoinContext ctx = build_join_context(complete_graph(4));
  Rng rng(seed);
  int checked = 0;
  for (int trial = 0; trial < 400 && checked < 60; ++trial) {
    int d = static_cast<int>(rng.below(ctx.ZK.dim + 1));
    if (ctx.ZK.ncells(d) == 0) continue;
    const ProductCell& cell = ctx.ZK.cells[d][rng.below(ctx.ZK.ncells(d))];
    if (cell.a.size() < 2 || cell.b.size() < 2) continue;
    PChain x;
    pchain_add_term(x, cell, Int(1));
    PChain cone = cone_chain(ctx.v, x);
    PChain lhs = pchain_boundary(cone);
    PChain rhs =
        pchain_add(x, pchain_scale(Int(-1), cone_chain(ctx.v, pchain_boundary(x))));
    if (lhs != rhs) {
      s.ok = false;
      s.detail = "cone boundary law";
      return s;
    }
    PChain prism = prism_chain(ctx.v, ctx.w, x);
    PChain plhs = pchain_boundary(prism);
    PChain prhs = pchain_tau(cone_chain(ctx.w, pchain_tau(x)));
    prhs = pchain_add(prhs, pchain_scale(Int(-1), cone_chain(ctx.v, x)));
    prhs = pchain_add(prhs, prism_chain(ctx.v, ctx.w, pchain_boundary(x)));
    if (plhs != prhs) {
      s.ok = false;
      s.detail = "prism boundary law";
      return s;
    }
    ++checked;
  }
  if (checked < 60) {
    s.ok = false;
    s.detail = "not enough interior cells sampled";
    return s;
  }
  s.detail = std::to_string(checked) + " random cells: dv and dvw laws";
  return s;
}

int run_selftest(std::uint64_t seed, const std::string& out) {
  Json j;
  j["version"] = version;
  j["seed"] = seed;
  j["threads"] = thread_cap();
  std::vector<Suite> suites;
  suites.push_back(suite_sphere_index());
  suites.push_back(suite_dp_invariants());
  suites.push_back(suite_graph_completeness());
  suites.push_back(suite_hanani_tutte());
  suites.push_back(suite_snf_random(seed));
  suites.push_back(suite_cone_prism(seed));
  bool all = true;
  Json arr = Json::array();
  for (const Suite& s : suites) {
    all = all && s.ok;
    Json e;
    e["name"] = s.name;
    e["ok"] = s.ok;
    e["detail"] = s.detail;
    arr.push_back(std::move(e));
  }
  j["suites"] = std::move(arr);
  j["ok"] = all;
  write_output(j, out);
  return all ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact Smith classes, van Kampen obstructions, and join-theorem certificates"};
  app.require_subcommand(1);

  std::uint64_t seed = 12345;
  std::string out;

  std::string gen_family;
  std::vector<int> gen_params;
  auto* gen = app.add_subcommand("gen", "generate a corpus complex as JSON");
  gen->add_option("family", gen_family,
                  "complete_graph | complete_bipartite | skeleton | join_power | path | cycle")
      ->required();
  gen->add_option("params", gen_params, "integer parameters for the family");

  std::string dp_path;
  bool dp_cells = false;
  auto* dp = app.add_subcommand("dp", "deleted product of a complex");
  dp->add_option("complex", dp_path, "complex JSON file")->required();
  dp->add_flag("--cells", dp_cells, "include the full cell list");

  std::string quot_path;
  auto* quot = app.add_subcommand("quotient", "quotient of the deleted product");
  quot->add_option("complex", quot_path, "complex JSON file")->required();

  std::string smith_path;
  bool smith_mod2 = false;
  int smith_maxk = -1;
  auto* smith = app.add_subcommand("smith", "Smith special classes and index");
  smith->add_option("complex", smith_path, "complex JSON file")->required();
  smith->add_flag("--mod2", smith_mod2, "run the pipeline over Z2");
  smith->add_option("--max-k", smith_maxk, "largest class degree (default dim+2)");

  std::string res_path;
  int res_maxn = -1;
  auto* res = app.add_subcommand("resolution", "resolution of the unit cochain");
  res->add_option("complex", res_path, "complex JSON file")->required();
  res->add_option("--max-n", res_maxn, "length of the resolution (default dim)");

  std::string vk_path, vk_params;
  int vk_m = -1;
  auto* vk = app.add_subcommand("vk", "embedding obstruction report");
  vk->add_option("complex", vk_path, "complex JSON file")->required();
  vk->add_option("-m", vk_m, "target dimension (default 2*dim)");
  vk->add_option("--params", vk_params, "comma-separated moment-curve parameters");

  std::string cert_path;
  int cert_m = 0;
  bool cert_mod2 = false;
  auto* cert = app.add_subcommand("certify", "torsion certificate or mod-2 witness");
  cert->add_option("complex", cert_path, "complex JSON file")->required();
  cert->add_option("-m", cert_m, "target dimension")->required();
  cert->add_flag("--mod2", cert_mod2, "produce a mod-2 cycle witness");

  std::string join_path;
  int join_m = 0;
  auto* join = app.add_subcommand("join-verify", "verify the join theorem by certificate");
  join->add_option("complex", join_path, "complex JSON file")->required();
  join->add_option("-m", join_m, "source class degree (even)")->required();

  auto* self = app.add_subcommand("selftest", "run the built-in invariant suites");

  for (auto* sub : {gen, dp, quot, smith, res, vk, cert, join, self}) {
    sub->add_option("--seed", seed, "seed recorded in reports, drives property tests");
    sub->add_option("--out", out, "write the report to a file instead of stdout");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (gen->parsed()) return run_gen(gen_family, gen_params, out);
    if (dp->parsed()) return run_dp(dp_path, dp_cells, out, seed);
    if (quot->parsed()) return run_quotient(quot_path, out, seed);
    if (smith->parsed()) return run_smith(smith_path, smith_mod2, smith_maxk, out, seed);
    if (res->parsed()) return run_resolution(res_path, res_maxn, out, seed);
    if (vk->parsed()) return run_vk(vk_path, vk_m, vk_params, out, seed);
    if (cert->parsed()) return run_certify(cert_path, cert_m, cert_mod2, out, seed);
    if (join->parsed()) return run_join_verify(join_path, join_m, out, seed);
    if (self->parsed()) return run_selftest(seed, out);
  } catch (const kampen::input_error& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const kampen::invariant_error& e) {
    std::cerr << "invariant violation: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  }
  return 2;
}
