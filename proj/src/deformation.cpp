#include "mutheta/deformation.hpp"

#include <algorithm>
#include <stdexcept>

namespace mutheta {

namespace {

std::string sub1(const std::string& stem, int i) { return stem + std::to_string(i); }
std::string sub2(const std::string& stem, int i, int j) {
  return stem + std::to_string(i) + "_" + std::to_string(j);
}

// Coordinate-vector builder over the square-zero ring.
class GenBuilder {
 public:
  GenBuilder(const DieudonneSpace& sp, const SqzCtxPtr& ctx)
      : sp_(sp), ctx_(ctx), v_(sp.dim(), SqzElem(ctx)) {}

  GenBuilder& base(const std::string& name, i64 c = 1) {
    v_[sp_.basis_index(name)] += SqzElem::constant(ctx_, c);
    return *this;
  }
  // coefficient c * t_param on basis vector `name`
  GenBuilder& param(const std::string& pname, const std::string& name, i64 c = 1) {
    SqzElem t = SqzElem::parameter(ctx_, pname);
    v_[sp_.basis_index(name)] += SqzElem::constant(ctx_, c) * t;
    return *this;
  }
  std::vector<SqzElem> take() { return std::move(v_); }

 private:
  const DieudonneSpace& sp_;
  SqzCtxPtr ctx_;
  std::vector<SqzElem> v_;
};

}  // namespace

const std::vector<SqzElem>& DeformedHodge::gen(const std::string& name) const {
  for (size_t i = 0; i < p_gen_names.size(); ++i)
    if (p_gen_names[i] == name) return p_gens[i];
  for (size_t i = 0; i < q_gen_names.size(); ++i)
    if (q_gen_names[i] == name) return q_gens[i];
  throw std::invalid_argument("DeformedHodge: unknown generator " + name);
}

DeformedHodge universal_ao_deformation(int n, int m, i64 p) {
  DieudonneSpace sp = DieudonneSpace::ao_space(n, m, p);
  DeformedHodge def{sp, nullptr, DeformationCase::NEqualsM, n, m, {}, {}, {}, {}};

  std::vector<std::string> params;
  if (n == m + 1) {
    def.kase = DeformationCase::NEqualsMPlus1;
    params.push_back("u");
    for (int i = 1; i < m; ++i) params.push_back(sub1("u", i));
    params.push_back("v");
    for (int i = 1; i < m; ++i) params.push_back(sub1("v", i));
    for (int i = 1; i < m; ++i) params.push_back(sub1("w", i));
    for (int i = 1; i < m; ++i)
      for (int j = 1; j < m; ++j) params.push_back(sub2("w", i, j));
  } else if (n >= m + 2) {
    def.kase = DeformationCase::NAtLeastMPlus2;
    int s = n - m - 2;
    params.push_back("u");
    for (int i = 1; i < m; ++i) params.push_back(sub1("u", i));
    params.push_back("v");
    for (int i = 1; i < m; ++i) params.push_back(sub1("v", i));
    params.push_back("w");
    for (int i = 1; i < m; ++i) params.push_back(sub1("w", i));
    for (int i = 1; i < m; ++i) params.push_back(sub1("x", i));
    for (int i = 1; i < m; ++i)
      for (int l = 1; l < m; ++l) params.push_back(sub2("x", i, l));
    for (int k = 1; k <= s; ++k) params.push_back(sub1("y", k));
    for (int k = 1; k <= s; ++k)
      for (int l = 1; l < m; ++l) params.push_back(sub2("y", k, l));
  } else if (n == m) {
    def.kase = DeformationCase::NEqualsM;
    params.push_back("u");
    for (int j = 1; j < m; ++j) params.push_back(sub1("u", j));
    for (int i = 1; i < m; ++i) params.push_back(sub1("w", i));
    for (int i = 1; i < m; ++i)
      for (int j = 1; j < m; ++j) params.push_back(sub2("w", i, j));
  } else {
    throw std::invalid_argument("universal_ao_deformation: invalid signature");
  }
  if (static_cast<int>(params.size()) != n * m)
    throw std::logic_error("universal_ao_deformation: parameter count is not nm");
  SqzCtxPtr ctx = make_sqz_context(p, params);
  def.ring = ctx;

  auto P = [&](const std::string& name, std::vector<SqzElem> v) {
    def.p_gen_names.push_back(name);
    def.p_gens.push_back(std::move(v));
  };
  auto Q = [&](const std::string& name, std::vector<SqzElem> v) {
    def.q_gen_names.push_back(name);
    def.q_gens.push_back(std::move(v));
  };

  if (def.kase == DeformationCase::NEqualsMPlus1) {
    {
      GenBuilder b(sp, ctx);
      b.base("e1").param("u", "e2");
      for (int i = 1; i < m; ++i) b.param(sub1("u", i), sub1("e_et_", i));
      P("e1~", b.take());
    }
    {
      GenBuilder b(sp, ctx);
      b.base("e3").param("v", "e2");
      for (int i = 1; i < m; ++i) b.param(sub1("v", i), sub1("e_et_", i));
      P("e3~", b.take());
    }
    for (int i = 1; i < m; ++i) {
      GenBuilder b(sp, ctx);
      b.base(sub1("e_mu_", i)).param(sub1("w", i), "e2");
      for (int j = 1; j < m; ++j) b.param(sub2("w", i, j), sub1("e_et_", j));
      P(sub1("e_mu_", i) + "~", b.take());
    }
    {
      GenBuilder b(sp, ctx);
      b.base("f2").param("v", "f1", -1).param("u", "f3");
      for (int i = 1; i < m; ++i) b.param(sub1("w", i), sub1("f_et_", i));
      Q("f2~", b.take());
    }
    for (int i = 1; i < m; ++i) {
      GenBuilder b(sp, ctx);
      b.base(sub1("f_mu_", i)).param(sub1("v", i), "f1", -1).param(sub1("u", i), "f3");
      for (int j = 1; j < m; ++j) b.param(sub2("w", j, i), sub1("f_et_", j));
      Q(sub1("f_mu_", i) + "~", b.take());
    }
  } else if (def.kase == DeformationCase::NAtLeastMPlus2) {
    int s = n - m - 2;
    {
      GenBuilder b(sp, ctx);
      b.base("e1").param("u", "e2", -1);
      for (int i = 1; i < m; ++i) b.param(sub1("u", i), sub1("e_et_", i));
      P("e1~", b.take());
    }
    {
      GenBuilder b(sp, ctx);
      b.base("e3").param("v", "e2");
      for (int i = 1; i < m; ++i) b.param(sub1("v", i), sub1("e_et_", i));
      P("e3~", b.take());
    }
    {
      GenBuilder b(sp, ctx);
      b.base("e4").param("w", "e2");
      for (int i = 1; i < m; ++i) b.param(sub1("w", i), sub1("e_et_", i));
      P("e4~", b.take());
    }
    for (int i = 1; i < m; ++i) {
      GenBuilder b(sp, ctx);
      b.base(sub1("e_mu_", i)).param(sub1("x", i), "e2");
      for (int l = 1; l < m; ++l) b.param(sub2("x", i, l), sub1("e_et_", l));
      P(sub1("e_mu_", i) + "~", b.take());
    }
    for (int k = 1; k <= s; ++k) {
      GenBuilder b(sp, ctx);
      b.base(sub1("e_sh_", k)).param(sub1("y", k), "e2");
      for (int l = 1; l < m; ++l) b.param(sub2("y", k, l), sub1("e_et_", l));
      P(sub1("e_sh_", k) + "~", b.take());
    }
    {
      GenBuilder b(sp, ctx);
      b.base("f3").param("w", "f1").param("v", "f2").param("u", "f4");
      for (int l = 1; l < m; ++l) b.param(sub1("x", l), sub1("f_et_", l), -1);
      for (int k = 1; k <= s; ++k) b.param(sub1("y", k), sub1("f_sh_", k), -1);
      Q("f3~", b.take());
    }
    for (int i = 1; i < m; ++i) {
      GenBuilder b(sp, ctx);
      b.base(sub1("f_mu_", i))
          .param(sub1("w", i), "f1", -1)
          .param(sub1("v", i), "f2", -1)
          .param(sub1("u", i), "f4");
      for (int l = 1; l < m; ++l) b.param(sub2("x", l, i), sub1("f_et_", l));
      for (int k = 1; k <= s; ++k) b.param(sub2("y", k, i), sub1("f_sh_", k));
      Q(sub1("f_mu_", i) + "~", b.take());
    }
  } else {
    {
      GenBuilder b(sp, ctx);
      b.base("e_sh").param("u", "e_fl");
      for (int j = 1; j < m; ++j) b.param(sub1("u", j), sub1("e_et_", j));
      P("e_sh~", b.take());
    }
    for (int i = 1; i < m; ++i) {
      GenBuilder b(sp, ctx);
      b.base(sub1("e_mu_", i)).param(sub1("w", i), "e_fl");
      for (int j = 1; j < m; ++j) b.param(sub2("w", i, j), sub1("e_et_", j));
      P(sub1("e_mu_", i) + "~", b.take());
    }
    {
      GenBuilder b(sp, ctx);
      b.base("f_fl").param("u", "f_sh");
      for (int j = 1; j < m; ++j) b.param(sub1("w", j), sub1("f_et_", j));
      Q("f_fl~", b.take());
    }
    for (int i = 1; i < m; ++i) {
      GenBuilder b(sp, ctx);
      b.base(sub1("f_mu_", i)).param(sub1("u", i), "f_sh");
      for (int j = 1; j < m; ++j) b.param(sub2("w", j, i), sub1("f_et_", j));
      Q(sub1("f_mu_", i) + "~", b.take());
    }
  }
  return def;
}

// ------------------------------------------------------------ admissibility

namespace {

Matrix<Fq2> constant_columns(const DeformedHodge& def) {
  Fq2 w = Fq2::from_int(def.base.p(), 0);
  std::vector<std::vector<Fq2>> cols;
  for (const auto& g : def.p_gens) {
    std::vector<Fq2> c;
    for (const auto& e : g) c.push_back(e.constant_term());
    cols.push_back(std::move(c));
  }
  for (const auto& g : def.q_gens) {
    std::vector<Fq2> c;
    for (const auto& e : g) c.push_back(e.constant_term());
    cols.push_back(std::move(c));
  }
  return Matrix<Fq2>::from_columns(def.base.dim(), cols, w);
}

// Pairing of two ring-valued vectors, extended R-bilinearly.
SqzElem pair_over_ring(const DeformedHodge& def, const std::vector<SqzElem>& x,
                       const std::vector<SqzElem>& y) {
  SqzElem acc(def.ring);
  const Matrix<Fq2>& P = def.base.pairing();
  for (int i = 0; i < def.base.dim(); ++i) {
    if (x[i].is_zero()) continue;
    for (int j = 0; j < def.base.dim(); ++j) {
      if (P(i, j).is_zero() || y[j].is_zero()) continue;
      acc += x[i] * SqzElem::constant(def.ring, P(i, j)) * y[j];
    }
  }
  return acc;
}

bool pure_type(const DeformedHodge& def, const std::vector<SqzElem>& g, BasisType t) {
  for (int i = 0; i < def.base.dim(); ++i)
    if (!g[i].is_zero() && def.base.basis()[i].type != t) return false;
  return true;
}

}  // namespace

AdmissibilityReport check_admissible(const DeformedHodge& def) {
  AdmissibilityReport rep;
  Matrix<Fq2> consts = constant_columns(def);
  rep.reduction_spans_omega = same_column_span(consts, def.base.omega_basis());
  rep.direct_summand_rank_g = rank(consts) == def.base.genus();
  rep.type_stable = true;
  for (const auto& g : def.p_gens)
    rep.type_stable = rep.type_stable && pure_type(def, g, BasisType::Sigma);
  for (const auto& g : def.q_gens)
    rep.type_stable = rep.type_stable && pure_type(def, g, BasisType::SigmaBar);
  rep.isotropic = true;
  std::vector<const std::vector<SqzElem>*> all;
  for (const auto& g : def.p_gens) all.push_back(&g);
  for (const auto& g : def.q_gens) all.push_back(&g);
  for (size_t a = 0; a < all.size() && rep.isotropic; ++a)
    for (size_t b = a; b < all.size() && rep.isotropic; ++b)
      if (!pair_over_ring(def, *all[a], *all[b]).is_zero()) rep.isotropic = false;
  return rep;
}

// -------------------------------------------------------------- Gauss-Manin

bool GaussManinResult::is_zero() const {
  for (const auto& v : vectors)
    for (const auto& c : v)
      if (!c.is_zero()) return false;
  return true;
}

GaussManinResult gauss_manin(const DeformedHodge& def, const std::string& gen_name) {
  const std::vector<SqzElem>& g = def.gen(gen_name);
  GaussManinResult r;
  r.params = def.ring->params;
  int np = static_cast<int>(r.params.size());
  r.vectors.assign(np, std::vector<Fq2>(def.base.dim(), Fq2::from_int(def.base.p(), 0)));
  for (int i = 0; i < def.base.dim(); ++i) {
    const auto& lin = g[i].linear_part();
    for (int a = 0; a < np; ++a) r.vectors[a][i] = lin[a];
  }
  return r;
}

// ------------------------------------------------------------------------ KS

KSMatrix ks_matrix(const DeformedHodge& def) {
  KSMatrix ks;
  ks.col_labels = def.ring->params;
  int np = static_cast<int>(ks.col_labels.size());
  Fq2 w = Fq2::from_int(def.base.p(), 0);
  const Matrix<Fq2>& P = def.base.pairing();

  std::vector<std::vector<Fq2>> rows;
  for (size_t pi = 0; pi < def.p_gens.size(); ++pi) {
    GaussManinResult gm = gauss_manin(def, def.p_gen_names[pi]);
    for (size_t qi = 0; qi < def.q_gens.size(); ++qi) {
      // q-gen at the closed point
      std::vector<Fq2> q0;
      for (const auto& e : def.q_gens[qi]) q0.push_back(e.constant_term());
      std::vector<Fq2> row(np, w.zero_like());
      for (int a = 0; a < np; ++a) {
        Fq2 acc = w.zero_like();
        for (int i = 0; i < def.base.dim(); ++i) {
          if (gm.vectors[a][i].is_zero()) continue;
          for (int j = 0; j < def.base.dim(); ++j)
            acc += gm.vectors[a][i] * P(i, j) * q0[j];
        }
        row[a] = acc;
      }
      rows.push_back(std::move(row));
      ks.row_labels.emplace_back(def.p_gen_names[pi], def.q_gen_names[qi]);
    }
  }
  ks.mat = Matrix<Fq2>::zeros(static_cast<int>(rows.size()), np, w);
  for (size_t i = 0; i < rows.size(); ++i)
    for (int j = 0; j < np; ++j) ks.mat(static_cast<int>(i), j) = rows[i][j];
  return ks;
}

// ---------------------------------------------------------------- V family

namespace {

// Twisted deformed generator: entrywise frobenius kills the parameters.
std::vector<SqzElem> twist_gen(const std::vector<SqzElem>& g) {
  std::vector<SqzElem> r;
  r.reserve(g.size());
  for (const auto& e : g) r.push_back(e.frobenius());
  return r;
}

// Apply V (R-linearly in the horizontal frame) to a ring-valued vector.
std::vector<SqzElem> apply_V(const DeformedHodge& def, const std::vector<SqzElem>& v) {
  const Matrix<Fq2>& V = def.base.V().mat;
  std::vector<SqzElem> r(def.base.dim(), SqzElem(def.ring));
  for (int i = 0; i < def.base.dim(); ++i)
    for (int j = 0; j < def.base.dim(); ++j) {
      if (V(i, j).is_zero() || v[j].is_zero()) continue;
      r[i] += SqzElem::constant(def.ring, V(i, j)) * v[j];
    }
  return r;
}

// Express vector in the span of the given (twisted) generators.
std::vector<SqzElem> express_in(const DeformedHodge& def,
                                const std::vector<std::vector<SqzElem>>& gens,
                                const std::vector<SqzElem>& v) {
  SqzElem w(def.ring);
  Matrix<SqzElem> M = Matrix<SqzElem>::from_columns(def.base.dim(), gens, w);
  return solve(M, v);
}

}  // namespace

HasseFamily hasse_family(const DeformedHodge& def) {
  HasseFamily fam;
  SqzElem w(def.ring);
  int m = static_cast<int>(def.q_gens.size());
  int n = static_cast<int>(def.p_gens.size());

  std::vector<std::vector<SqzElem>> p_twisted, q_twisted;
  for (const auto& g : def.p_gens) p_twisted.push_back(twist_gen(g));
  for (const auto& g : def.q_gens) q_twisted.push_back(twist_gen(g));

  fam.vq = Matrix<SqzElem>::zeros(n, m, w);
  for (int j = 0; j < m; ++j)
    fam.vq.set_column(j, express_in(def, p_twisted, apply_V(def, def.q_gens[j])));
  fam.vp = Matrix<SqzElem>::zeros(m, n, w);
  for (int j = 0; j < n; ++j)
    fam.vp.set_column(j, express_in(def, q_twisted, apply_V(def, def.p_gens[j])));

  Matrix<SqzElem> vp_tw = fam.vp.map([](const SqzElem& x) { return x.frobenius(); });
  fam.hasse = vp_tw * fam.vq;
  fam.local_equation = fam.hasse.det_small();
  fam.vq_square = (n == m);
  fam.det_vq = fam.vq_square ? fam.vq.det_small() : SqzElem(def.ring);
  return fam;
}

// ----------------------------------------------------------------------- psi

PsiResult psi(const DeformedHodge& def, const OneForm& eta) {
  if (eta.ctx.get() != def.ring.get())
    throw std::invalid_argument("psi: 1-form over a different parameter ring");
  KSMatrix ks = ks_matrix(def);
  if (!ks.invertible()) throw std::domain_error("psi: singular Kodaira-Spencer matrix");

  std::vector<Fq2> rhs = eta.coeffs;
  std::vector<Fq2> xi = solve(ks.mat, rhs);  // coefficients over (p-gen, q-gen) pairs

  int n = static_cast<int>(def.p_gens.size());
  int m = static_cast<int>(def.q_gens.size());
  Fq2 w = Fq2::from_int(def.base.p(), 0);

  // closed-point V on each p-generator decides membership in P_0
  const Matrix<Fq2>& V = def.base.V().mat;
  std::vector<std::vector<Fq2>> v_of_p;
  std::vector<bool> in_p0;
  for (int i = 0; i < n; ++i) {
    std::vector<Fq2> p0v;
    for (const auto& e : def.p_gens[i]) p0v.push_back(e.constant_term());
    std::vector<Fq2> img = V.apply(p0v);
    bool zero = true;
    for (const auto& c : img) zero = zero && c.is_zero();
    v_of_p.push_back(std::move(img));
    in_p0.push_back(zero);
  }

  PsiResult res;
  res.col_labels = def.q_gen_names;
  if (def.kase != DeformationCase::NEqualsM) {
    // project the P-leg modulo P_0: keep rows of generators outside P_0
    for (int i = 0; i < n; ++i)
      if (!in_p0[i]) res.row_labels.push_back(def.p_gen_names[i] + " mod P0");
    res.coeffs = Matrix<Fq2>::zeros(static_cast<int>(res.row_labels.size()), m, w);
    int r = 0;
    for (int i = 0; i < n; ++i) {
      if (in_p0[i]) continue;
      for (int j = 0; j < m; ++j) res.coeffs(r, j) = xi[static_cast<size_t>(i) * m + j];
      ++r;
    }
  } else {
    // apply V_P at the closed point: result valued in Q^{(p)} x Q coordinates
    std::vector<std::vector<Fq2>> q_twisted_0;
    for (const auto& g : def.q_gens) {
      std::vector<Fq2> c;
      for (const auto& e : g) c.push_back(e.constant_term().frobenius());
      q_twisted_0.push_back(std::move(c));
    }
    Matrix<Fq2> Qtw = Matrix<Fq2>::from_columns(def.base.dim(), q_twisted_0, w);
    res.coeffs = Matrix<Fq2>::zeros(m, m, w);
    for (const auto& qn : def.q_gen_names) res.row_labels.push_back(qn + "^(p)");
    for (int i = 0; i < n; ++i) {
      std::vector<Fq2> img = v_of_p[i];
      bool zero = true;
      for (const auto& c : img) zero = zero && c.is_zero();
      if (zero) continue;
      std::vector<Fq2> coords = solve(Qtw, img);
      for (int a = 0; a < m; ++a)
        for (int j = 0; j < m; ++j)
          res.coeffs(a, j) += coords[a] * xi[static_cast<size_t>(i) * m + j];
    }
  }
  return res;
}

PsiResult psi_of_param(const DeformedHodge& def, const std::string& param) {
  OneForm eta{def.ring, std::vector<Fq2>(def.ring->params.size(),
                                         Fq2::from_int(def.base.p(), 0))};
  eta.coeffs[def.ring->index_of(param)] = Fq2::from_int(def.base.p(), 1);
  return psi(def, eta);
}

// ---------------------------------------------------------------- pole audit

PoleAudit pole_order_audit(int weight, int ramification) {
  if (weight < 0) throw std::invalid_argument("pole_order_audit: weight must be >= 0");
  if (ramification < 1) throw std::invalid_argument("pole_order_audit: bad ramification");
  PoleAudit a;
  a.weight = weight;
  a.ramification = ramification;
  int k = weight, e = ramification;
  // f/a^k = sum_{r >= -k} g_r(v) w^r with ord_w(a) = 1.
  // First summand of a^k d(f/a^k): a^k w^r dg_r, order k + r >= 0.
  a.min_order_first_summand = k + (-k);
  // Second summand: a^k r g_r w^r u^{-1} du with u = w^e; the r = 0 term has
  // a vanishing coefficient, so the minimum runs over r >= -k, r != 0.
  int r_min = (k == 0) ? 1 : -k;
  a.pole_order_before_psi = k + r_min - e;
  a.psi_zero_order = e;
  a.min_order_second_summand = a.pole_order_before_psi + a.psi_zero_order;
  a.holomorphic = a.min_order_first_summand >= 0 && a.min_order_second_summand >= 0;
  return a;
}

}  // namespace mutheta
