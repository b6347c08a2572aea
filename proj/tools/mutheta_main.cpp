// Command-line entry point: build/verify Dieudonne spaces, run the
// deformation checks, transform Fourier-Jacobi expansions, weight calculus.
// Exit codes: 0 all checks pass, 1 failed mathematical check, 2 malformed
// input or bad arguments.

#include <cstdlib>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "mutheta/deformation.hpp"
#include "mutheta/json_io.hpp"

using namespace mutheta;

namespace {

constexpr i64 kDefaultSeed = 42;

i64 effective_seed(i64 cli_seed, bool seed_set) {
  if (seed_set) return cli_seed;
  if (const char* env = std::getenv("MUTHETA_SEED")) return std::stoll(env);
  return kDefaultSeed;
}

json signature_json(const Signature& s) { return json{{"n", s.n}, {"m", s.m}}; }

json verify_json(const VerifyReport& rep) {
  json checks = json::array();
  for (const auto& c : rep.checks)
    checks.push_back(json{{"axiom", c.name}, {"pass", c.pass}, {"detail", c.detail}});
  return json{{"checks", checks}, {"all_pass", rep.all_pass()}};
}

std::string names_of(const DieudonneSpace& sp, const std::vector<int>& idx) {
  std::string out = "{";
  for (size_t i = 0; i < idx.size(); ++i) {
    if (i) out += ", ";
    out += sp.basis()[idx[i]].name;
  }
  return out + "}";
}

DieudonneSpace build_model(const std::string& model, int n, int m, i64 p) {
  if (model == "gsigma") return DieudonneSpace::g_sigma(p);
  if (model == "gsigmabar") return DieudonneSpace::g_sigma_bar(p);
  if (model == "hyperbolic") return DieudonneSpace::hyperbolic_mu_et(p);
  if (model == "ao21") return DieudonneSpace::ao21(p);
  if (model == "ao31") return DieudonneSpace::ao31(p);
  if (model == "muord") return DieudonneSpace::mu_ordinary(n, m, p);
  if (model == "ao") return DieudonneSpace::ao_space(n, m, p);
  throw std::invalid_argument("unknown model " + model);
}

json sqz_matrix_json(const Matrix<SqzElem>& m) {
  json rows = json::array();
  for (int i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(sqz_to_json(m(i, j)));
    rows.push_back(row);
  }
  return rows;
}

int run_space(const std::string& sub, const std::string& model, int n, int m, i64 p,
              const std::string& in_path, const std::string& out_path, bool derived,
              bool json_out) {
  if (sub == "build") {
    DieudonneSpace sp = build_model(model, n, m, p);
    json j = space_to_json(sp);
    if (out_path.empty())
      std::cout << canonical_dump(j) << "\n";
    else
      write_file(out_path, j);
    return 0;
  }
  DieudonneSpace sp = space_from_json(parse_file(in_path));
  VerifyReport rep = sp.verify();
  if (sub == "verify") {
    if (json_out) {
      std::cout << canonical_dump(verify_json(rep)) << "\n";
    } else {
      for (const auto& c : rep.checks)
        std::cout << (c.pass ? "pass" : "FAIL") << "  " << c.name
                  << (c.detail.empty() ? "" : "  (" + c.detail + ")") << "\n";
    }
    return rep.all_pass() ? 0 : 1;
  }
  // show
  json out{{"p", sp.p()}, {"dim", sp.dim()}};
  std::ostringstream text;
  text << "dim " << sp.dim() << " over F_{" << sp.p() << "^2}\n";
  if (derived) {
    Signature sig = sp.signature();
    out["signature"] = signature_json(sig);
    text << "signature (" << sig.n << "," << sig.m << ")\n";
    if (auto oi = sp.omega_indices()) {
      out["omega"] = names_of(sp, *oi);
      text << "omega = " << names_of(sp, *oi) << "\n";
    }
    if (auto pi = sp.p0_indices()) {
      out["p0"] = names_of(sp, *pi);
      text << "P0 = " << names_of(sp, *pi) << "\n";
    }
    HasseData h = sp.hasse();
    out["hasse"] = twisted_map_to_json(h.hasse);
    out["hasse_invariant"] = fq2_to_json(h.hasse_invariant);
    text << "hasse matrix " << h.hasse.mat.rows() << "x" << h.hasse.mat.cols()
         << " twist " << h.hasse.twist << ", det = " << h.hasse_invariant.str() << "\n";
    out["verify"] = verify_json(rep);
  }
  std::cout << (json_out ? canonical_dump(out) + "\n" : text.str());
  return rep.all_pass() ? 0 : 1;
}

int run_deform_check(int n, int m, i64 p, bool json_out) {
  DeformedHodge def = universal_ao_deformation(n, m, p);
  AdmissibilityReport adm = check_admissible(def);
  HasseFamily fam = hasse_family(def);
  KSMatrix ks = ks_matrix(def);
  PsiResult psi_du = psi_of_param(def, "u");

  bool det_is_u = false;
  if (n > m) {
    SqzElem u = SqzElem::parameter(def.ring, "u");
    det_is_u = (fam.local_equation == u);
  } else {
    SqzElem u = SqzElem::parameter(def.ring, "u");
    det_is_u = (fam.det_vq == u) && fam.local_equation.is_zero();
  }
  bool ok = adm.all() && ks.invertible() && psi_du.is_zero() && det_is_u;

  if (json_out) {
    json out{{"n", n},
             {"m", m},
             {"p", p},
             {"admissible", adm.all()},
             {"ks_rank", rank(ks.mat)},
             {"ks_invertible", ks.invertible()},
             {"psi_du_zero", psi_du.is_zero()},
             {"local_equation", sqz_to_json(fam.local_equation)},
             {"vq", sqz_matrix_json(fam.vq)},
             {"vp", sqz_matrix_json(fam.vp)},
             {"pass", ok}};
    std::cout << canonical_dump(out) << "\n";
  } else {
    std::cout << "deformation (" << n << "," << m << ") over F_{" << p << "^2}\n";
    std::cout << "parameters (" << def.ring->params.size() << "):";
    for (const auto& t : def.ring->params) std::cout << " " << t;
    std::cout << "\nadmissible: " << (adm.all() ? "yes" : "NO") << "\n";
    std::cout << "V_Q family:\n";
    for (int i = 0; i < fam.vq.rows(); ++i) {
      std::cout << "  [";
      for (int j = 0; j < fam.vq.cols(); ++j)
        std::cout << (j ? ", " : " ") << fam.vq(i, j).str();
      std::cout << " ]\n";
    }
    std::cout << "det of Hasse family = " << fam.local_equation.str() << "\n";
    if (fam.vq_square) std::cout << "det V_Q = " << fam.det_vq.str() << "\n";
    std::cout << "KS rank = " << rank(ks.mat) << " of " << ks.mat.rows()
              << (ks.invertible() ? " (invertible)" : " (SINGULAR)") << "\n";
    std::cout << "psi(du) = " << (psi_du.is_zero() ? "0" : "NONZERO") << "\n";
    std::cout << (ok ? "all checks pass\n" : "CHECKS FAILED\n");
  }
  return ok ? 0 : 1;
}

int run_deform_audit(int k, i64 p, int e, bool json_out) {
  PoleAudit a = pole_order_audit(k, e);
  if (json_out) {
    json out{{"weight", a.weight},
             {"ramification", a.ramification},
             {"min_order_first_summand", a.min_order_first_summand},
             {"pole_order_before_psi", a.pole_order_before_psi},
             {"psi_zero_order", a.psi_zero_order},
             {"min_order_second_summand", a.min_order_second_summand},
             {"holomorphic", a.holomorphic}};
    std::cout << canonical_dump(out) << "\n";
  } else {
    std::cout << "weight " << k << ", ramification e = " << e << " (p = " << p << ")\n"
              << "first summand min w-order:  " << a.min_order_first_summand << "\n"
              << "second summand before psi:  " << a.pole_order_before_psi << "\n"
              << "psi zero order:             " << a.psi_zero_order << "\n"
              << "second summand min w-order: " << a.min_order_second_summand << "\n"
              << (a.holomorphic ? "holomorphic\n" : "POLE REMAINS\n");
  }
  return a.holomorphic ? 0 : 1;
}

std::vector<i64> parse_int_list(const std::string& s) {
  std::vector<i64> out;
  std::istringstream is(s);
  std::string tok;
  while (std::getline(is, tok, ',')) out.push_back(std::stoll(tok));
  return out;
}

// kappa strings: "a1,..,am;b1,..,bm;c1,..,c(n-m)"
WeightTriple parse_weight_triple(const std::string& s) {
  std::vector<std::vector<i64>> parts;
  std::istringstream is(s);
  std::string tok;
  while (std::getline(is, tok, ';')) parts.push_back(parse_int_list(tok));
  if (parts.size() == 2) parts.push_back({});
  if (parts.size() != 3) throw std::invalid_argument("bad weight triple " + s);
  return WeightTriple{DominantWeight(parts[0]), DominantWeight(parts[1]),
                      DominantWeight(parts[2])};
}

int run_weights_dk(const std::string& kappa_s, const std::string& kp_s, i64 p,
                   bool json_out) {
  WeightTriple kappa = parse_weight_triple(kappa_s);
  WeightTriple kp = parse_weight_triple(kp_s);
  DkReport rep = dk_target(kappa, kp);
  if (json_out) {
    json out{{"sum_symmetric", rep.sum_symmetric},
             {"theta_iterations", rep.theta_iterations},
             {"target_a", rep.target.a.entries},
             {"target_b", rep.target.b.entries},
             {"target_c", rep.target.c.entries}};
    std::cout << canonical_dump(out) << "\n";
  } else {
    std::cout << "sum-symmetric: " << (rep.sum_symmetric ? "yes" : "no") << "\n"
              << "e = " << rep.theta_iterations << " theta applications\n"
              << "target a:";
    for (i64 x : rep.target.a.entries) std::cout << " " << x;
    std::cout << "\ntarget b:";
    for (i64 x : rep.target.b.entries) std::cout << " " << x;
    std::cout << "\n";
    if (kappa.a.entries.size() >= 1 && rep.sum_symmetric) {
      bool scalar = true;
      for (i64 x : kappa.a.entries) scalar = scalar && x == kappa.a.entries[0];
      for (i64 x : kp.a.entries) scalar = scalar && x == kp.a.entries[0];
      if (scalar && !kp.a.entries.empty())
        std::cout << "scalar shift: k -> "
                  << dk_scalar_shift(kappa.a.entries[0], kp.a.entries[0], p) << "\n";
    }
  }
  return rep.sum_symmetric ? 0 : 1;
}

int run_weights_dim(const std::string& lambda_s, int m, bool json_out) {
  std::vector<i64> entries = parse_int_list(lambda_s);
  if (static_cast<int>(entries.size()) != m)
    throw std::invalid_argument("lambda must have m entries");
  DominantWeight lambda(entries);
  RepExpr expr = rho_lambda_expr(lambda, RepExpr::gen_q());
  int dim = rep_dim(expr, m, m, 1);
  if (json_out)
    std::cout << canonical_dump(json{{"dim", dim}}) << "\n";
  else
    std::cout << "dim rho_lambda = " << dim << "\n";
  return 0;
}

int run_fj(const std::string& sub, const std::string& in_path, const std::string& in2_path,
           const std::string& out_path, i64 p, i64 s, int m, i64 k0, int i0, i64 trunc,
           i64 seed, bool json_out) {
  if (sub == "cycle") {
    CycleReport rep = cycle_report(k0, i0, p);
    if (json_out) {
      json out{{"p", p},      {"k0", k0},           {"i0", i0},
               {"weights", rep.weights}, {"closes", rep.closes}, {"congruent", rep.congruent}};
      std::cout << canonical_dump(out) << "\n";
    } else {
      std::cout << "filtrations:";
      for (i64 w : rep.weights) std::cout << " " << w;
      std::cout << "\ncloses to k0: " << (rep.closes ? "yes" : "NO")
                << "\ncongruences mod p^2-1: " << (rep.congruent ? "yes" : "NO") << "\n";
    }
    return (rep.closes && rep.congruent) ? 0 : 1;
  }
  if (sub == "random") {
    std::mt19937_64 rng(static_cast<uint64_t>(seed));
    FJExpansion f = random_expansion(p, s, m, trunc, rng);
    json j = fj_to_json(f);
    if (out_path.empty())
      std::cout << canonical_dump(j) << "\n";
    else
      write_file(out_path, j);
    return 0;
  }
  FJExpansion f = fj_from_json(parse_file(in_path));
  if (sub == "theta") {
    FJExpansion t = theta(f);
    json j = fj_to_json(t);
    if (out_path.empty())
      std::cout << canonical_dump(j) << "\n";
    else
      write_file(out_path, j);
    return 0;
  }
  if (sub == "kernel") {
    bool in_kernel = is_in_theta_kernel(f);
    if (json_out)
      std::cout << canonical_dump(json{{"in_theta_kernel", in_kernel}}) << "\n";
    else
      std::cout << (in_kernel ? "in kernel of theta\n" : "not in kernel of theta\n");
    return 0;
  }
  if (sub == "mult") {
    FJExpansion g = fj_from_json(parse_file(in2_path));
    json j = fj_to_json(multiply(f, g));
    if (out_path.empty())
      std::cout << canonical_dump(j) << "\n";
    else
      write_file(out_path, j);
    return 0;
  }
  throw std::invalid_argument("unknown fj subcommand");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact arithmetic for theta operators on unitary Shimura varieties mod p"};
  app.require_subcommand(1);

  i64 p = 5, s = 1, seed = kDefaultSeed, trunc = 100, k0 = 0;
  int n = 2, m = 1, i0 = 0, weight = 0, ramification = 0;
  bool json_out = false;
  std::string model = "ao21", in_path, in2_path, out_path, kappa_s, kp_s, lambda_s;
  bool derived = false;
  bool seed_set = false;

  app.add_flag("--json", json_out, "machine-readable JSON reports");

  auto* space = app.add_subcommand("space", "build, verify and inspect Dieudonne spaces");
  space->require_subcommand(1);
  auto* sb = space->add_subcommand("build", "construct a model space");
  sb->add_option("--model", model, "gsigma|gsigmabar|hyperbolic|ao21|ao31|muord|ao");
  sb->add_option("-p", p, "odd prime");
  sb->add_option("-n", n, "signature n");
  sb->add_option("-m", m, "signature m");
  sb->add_option("-o,--out", out_path, "output file");
  auto* sv = space->add_subcommand("verify", "run the axiom suite on a space file");
  sv->add_option("file", in_path, "space JSON")->required();
  auto* ss = space->add_subcommand("show", "print a space with derived data");
  ss->add_option("file", in_path, "space JSON")->required();
  ss->add_flag("--derived", derived, "print omega, P0, signature, Hasse data");

  auto* deform = app.add_subcommand("deform", "deformation-theoretic checks");
  deform->require_subcommand(1);
  auto* dc = deform->add_subcommand("check", "Hasse family, KS rank, psi(du)");
  dc->add_option("-n", n, "signature n")->required();
  dc->add_option("-m", m, "signature m")->required();
  dc->add_option("-p", p, "odd prime");
  std::string case_opt = "auto";
  dc->add_option("--case", case_opt, "auto (derived from the signature)");
  auto* da = deform->add_subcommand("audit", "pole-order bookkeeping");
  da->add_option("--weight", weight, "weight k")->required();
  da->add_option("-p", p, "odd prime");
  da->add_option("--ramification", ramification, "e, p^2-1 or p-1 (default p^2-1)");

  auto* weights = app.add_subcommand("weights", "dominant weight calculus");
  weights->require_subcommand(1);
  auto* dk = weights->add_subcommand("dk", "sum-symmetry gate and target weight");
  dk->add_option("--kappa", kappa_s, "a1,..;b1,..;c1,..")->required();
  dk->add_option("--kappa-prime", kp_s, "a'1,..;b'1,..;0,..")->required();
  dk->add_option("-p", p, "odd prime");
  auto* wd = weights->add_subcommand("dim", "dimension of rho_lambda");
  wd->add_option("--lambda", lambda_s, "l1,l2,..")->required();
  wd->add_option("-m", m, "size of GL_m")->required();

  auto* fj = app.add_subcommand("fj", "Fourier-Jacobi expansions");
  fj->require_subcommand(1);
  auto* ft = fj->add_subcommand("theta", "apply the theta operator");
  ft->add_option("file", in_path, "expansion JSON")->required();
  ft->add_option("-o,--out", out_path, "output file");
  auto* fk = fj->add_subcommand("kernel", "theta-kernel support test");
  fk->add_option("file", in_path, "expansion JSON")->required();
  auto* fc = fj->add_subcommand("cycle", "theta cycle filtration model");
  fc->add_option("--p", p, "odd prime")->required();
  fc->add_option("--k0", k0, "starting filtration")->required();
  fc->add_option("--i0", i0, "drop position")->required();
  auto* fm = fj->add_subcommand("mult", "product of two scalar expansions");
  fm->add_option("file", in_path, "first expansion")->required();
  fm->add_option("file2", in2_path, "second expansion")->required();
  fm->add_option("-o,--out", out_path, "output file");
  auto* fr = fj->add_subcommand("random", "seeded random expansion");
  fr->add_option("--seed", seed, "RNG seed")->each([&](const std::string&) { seed_set = true; });
  fr->add_option("--trunc", trunc, "support bound (trace)");
  fr->add_option("-p", p, "odd prime");
  fr->add_option("-s", s, "Witt length");
  fr->add_option("-m", m, "cusp rank");
  fr->add_option("-o,--out", out_path, "output file");

  CLI11_PARSE(app, argc, argv);

  try {
    if (space->parsed()) {
      std::string sub = sb->parsed() ? "build" : sv->parsed() ? "verify" : "show";
      return run_space(sub, model, n, m, p, in_path, out_path, derived, json_out);
    }
    if (deform->parsed()) {
      if (dc->parsed()) return run_deform_check(n, m, p, json_out);
      int e = ramification > 0 ? ramification : static_cast<int>(p * p - 1);
      return run_deform_audit(weight, p, e, json_out);
    }
    if (weights->parsed()) {
      if (dk->parsed()) return run_weights_dk(kappa_s, kp_s, p, json_out);
      return run_weights_dim(lambda_s, m, json_out);
    }
    if (fj->parsed()) {
      std::string sub = ft->parsed()   ? "theta"
                        : fk->parsed() ? "kernel"
                        : fc->parsed() ? "cycle"
                        : fm->parsed() ? "mult"
                                       : "random";
      return run_fj(sub, in_path, in2_path, out_path, p, s, m, k0, i0, trunc,
                    effective_seed(seed, seed_set), json_out);
    }
  } catch (const std::domain_error& e) {
    std::cerr << "check failed: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
