#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>

#include "mutheta/deformation.hpp"

using namespace mutheta;

namespace {

// grid of signatures used by the vanishing-theorem checks
const std::vector<std::pair<int, int>> kGrid = {{2, 1}, {3, 2}, {4, 3}, {5, 4},
                                                {3, 1}, {4, 1}, {5, 2}, {6, 3},
                                                {2, 2}, {3, 3}, {4, 4}};

SqzElem param(const DeformedHodge& def, const std::string& name) {
  return SqzElem::parameter(def.ring, name);
}

// expected Hasse-family shape: first row (u, u_1, .., u_{m-1}) over identity
Matrix<SqzElem> expected_u_matrix(const DeformedHodge& def) {
  int m = def.m;
  SqzElem z(def.ring);
  Matrix<SqzElem> e = Matrix<SqzElem>::zeros(m, m, z);
  e(0, 0) = param(def, "u");
  for (int j = 1; j < m; ++j) e(0, j) = param(def, "u" + std::to_string(j));
  for (int i = 1; i < m; ++i) e(i, i) = SqzElem::constant(def.ring, 1);
  return e;
}

}  // namespace

TEST_CASE("parameter counts are nm") {
  // (2,1): {u, v}
  DeformedHodge d21 = universal_ao_deformation(2, 1, 5);
  CHECK(d21.ring->params == std::vector<std::string>{"u", "v"});

  // (4,1): {u, v, w, y1}
  DeformedHodge d41 = universal_ao_deformation(4, 1, 5);
  CHECK(d41.ring->params == std::vector<std::string>{"u", "v", "w", "y1"});

  // (2,2): {u, u1, w1, w1_1}
  DeformedHodge d22 = universal_ao_deformation(2, 2, 5);
  CHECK(d22.ring->params.size() == 4);
  for (const char* name : {"u", "u1", "w1", "w1_1"})
    CHECK(std::count(d22.ring->params.begin(), d22.ring->params.end(), name) == 1);

  for (auto [n, m] : kGrid)
    CHECK(static_cast<int>(universal_ao_deformation(n, m, 3).ring->params.size()) ==
          n * m);
}

TEST_CASE("admissibility of the universal deformations") {
  for (i64 p : {3, 5}) {
    for (auto [n, m] : kGrid) {
      DeformedHodge def = universal_ao_deformation(n, m, p);
      AdmissibilityReport rep = check_admissible(def);
      CHECK(rep.reduction_spans_omega);
      CHECK(rep.direct_summand_rank_g);
      CHECK(rep.type_stable);
      CHECK(rep.isotropic);
      // generator counts: n of type Sigma, m of type SigmaBar
      CHECK(static_cast<int>(def.p_gens.size()) == n);
      CHECK(static_cast<int>(def.q_gens.size()) == m);
    }
  }
}

TEST_CASE("Gauss-Manin on the case I generators") {
  DeformedHodge def = universal_ao_deformation(2, 1, 5);
  const DieudonneSpace& sp = def.base;

  // nabla(e1~) = e2 (x) du
  GaussManinResult gm = gauss_manin(def, "e1~");
  int iu = def.ring->index_of("u"), iv = def.ring->index_of("v");
  std::vector<Fq2> e2(sp.dim(), Fq2::from_int(5, 0));
  e2[sp.basis_index("e2")] = Fq2::from_int(5, 1);
  CHECK(gm.vectors[iu] == e2);
  for (const auto& c : gm.vectors[iv]) CHECK(c.is_zero());

  // nabla(f2~) = -f1 (x) dv + f3 (x) du
  GaussManinResult gmf = gauss_manin(def, "f2~");
  std::vector<Fq2> minus_f1(sp.dim(), Fq2::from_int(5, 0));
  minus_f1[sp.basis_index("f1")] = Fq2::from_int(5, -1);
  std::vector<Fq2> f3(sp.dim(), Fq2::from_int(5, 0));
  f3[sp.basis_index("f3")] = Fq2::from_int(5, 1);
  CHECK(gmf.vectors[iv] == minus_f1);
  CHECK(gmf.vectors[iu] == f3);

  // a horizontal section has vanishing Gauss-Manin
  DeformedHodge horiz = def;
  std::vector<SqzElem> e1(sp.dim(), SqzElem(def.ring));
  e1[sp.basis_index("e1")] = SqzElem::constant(def.ring, 1);
  horiz.p_gen_names.push_back("horizontal");
  horiz.p_gens.push_back(e1);
  CHECK(gauss_manin(horiz, "horizontal").is_zero());

  CHECK_THROWS_AS(gauss_manin(def, "nope"), std::invalid_argument);
}

TEST_CASE("case I with m > 1: Gauss-Manin matches the deformation lists") {
  DeformedHodge def = universal_ao_deformation(3, 2, 5);
  const DieudonneSpace& sp = def.base;
  // nabla(e1~) = e2 (x) du + e_et_1 (x) du_1
  GaussManinResult gm = gauss_manin(def, "e1~");
  std::vector<Fq2> e2(sp.dim(), Fq2::from_int(5, 0));
  e2[sp.basis_index("e2")] = Fq2::from_int(5, 1);
  std::vector<Fq2> eet(sp.dim(), Fq2::from_int(5, 0));
  eet[sp.basis_index("e_et_1")] = Fq2::from_int(5, 1);
  CHECK(gm.vectors[def.ring->index_of("u")] == e2);
  CHECK(gm.vectors[def.ring->index_of("u1")] == eet);
}

TEST_CASE("Hasse family shapes: n = m + 1") {
  for (i64 p : {3, 5}) {
    for (int m = 1; m <= 4; ++m) {
      DeformedHodge def = universal_ao_deformation(m + 1, m, p);
      HasseFamily fam = hasse_family(def);
      CHECK(fam.hasse == expected_u_matrix(def));
      // det = u exactly in these coordinates
      CHECK(fam.local_equation == param(def, "u"));
    }
  }
}

TEST_CASE("Hasse family shapes: n >= m + 2") {
  for (i64 p : {3, 5}) {
    for (auto [n, m] :
         std::vector<std::pair<int, int>>{{3, 1}, {4, 1}, {4, 2}, {5, 2}, {6, 4}}) {
      DeformedHodge def = universal_ao_deformation(n, m, p);
      HasseFamily fam = hasse_family(def);
      CHECK(fam.hasse == expected_u_matrix(def));
      CHECK(fam.local_equation == param(def, "u"));
    }
  }
}

TEST_CASE("Hasse family shapes: n = m") {
  for (i64 p : {3, 5}) {
    for (int m = 1; m <= 4; ++m) {
      DeformedHodge def = universal_ao_deformation(m, m, p);
      HasseFamily fam = hasse_family(def);

      // V_Q = [[u, u_1 .. u_{m-1}], [0, I]]
      CHECK(fam.vq == expected_u_matrix(def));
      // V_P = [[u, w_1 .. w_{m-1}], [0, I]]
      Matrix<SqzElem> vp_expected = expected_u_matrix(def);
      for (int j = 1; j < m; ++j) vp_expected(0, j) = param(def, "w" + std::to_string(j));
      CHECK(fam.vp == vp_expected);

      // det V_Q = u, while det H = 0 in the square-zero ring (u^p = 0)
      CHECK(fam.vq_square);
      CHECK(fam.det_vq == param(def, "u"));
      CHECK(fam.local_equation.is_zero());

      // det(H) = det(V_P)^p det(V_Q) as ring elements
      SqzElem det_vp = fam.vp.det_small();
      SqzElem rhs = det_vp.pow(p) * fam.det_vq;
      CHECK(fam.hasse.det_small() == rhs);
    }
  }
}

TEST_CASE("Kodaira-Spencer matrix: case I rows") {
  DeformedHodge def = universal_ao_deformation(2, 1, 5);
  KSMatrix ks = ks_matrix(def);
  CHECK(ks.mat.rows() == 2);
  CHECK(ks.invertible());

  // row (e1~, f2~) hits only du; with <f2,e2> = 1 verbatim and the skew
  // completion <e2,f2> = -1 the entry is exactly -1
  int row = -1;
  for (size_t i = 0; i < ks.row_labels.size(); ++i)
    if (ks.row_labels[i] == std::make_pair(std::string("e1~"), std::string("f2~")))
      row = static_cast<int>(i);
  REQUIRE(row >= 0);
  int iu = def.ring->index_of("u"), iv = def.ring->index_of("v");
  CHECK(ks.mat(row, iu) == Fq2::from_int(5, -1));
  CHECK(ks.mat(row, iv).is_zero());
}

TEST_CASE("KS(P0 (x) Q) spans exactly the expected parameter directions") {
  // case I: P0 = span{e1~}; rows for (e1~, q~) span {du, du_i}
  DeformedHodge def = universal_ao_deformation(4, 3, 5);
  KSMatrix ks = ks_matrix(def);
  std::vector<std::string> p0_hits;
  for (size_t i = 0; i < ks.row_labels.size(); ++i) {
    if (ks.row_labels[i].first != "e1~") continue;
    for (size_t j = 0; j < ks.col_labels.size(); ++j)
      if (!ks.mat(static_cast<int>(i), static_cast<int>(j)).is_zero())
        p0_hits.push_back(ks.col_labels[j]);
  }
  std::sort(p0_hits.begin(), p0_hits.end());
  p0_hits.erase(std::unique(p0_hits.begin(), p0_hits.end()), p0_hits.end());
  CHECK(p0_hits == std::vector<std::string>{"u", "u1", "u2"});

  // case II: rows from {e1~, e3~, e_sh_j~} span {du, du_i, dv, dv_i, dy_j, dy_jl}
  DeformedHodge def2 = universal_ao_deformation(5, 2, 5);
  KSMatrix ks2 = ks_matrix(def2);
  std::vector<std::string> hits;
  for (size_t i = 0; i < ks2.row_labels.size(); ++i) {
    const std::string& pg = ks2.row_labels[i].first;
    if (pg != "e1~" && pg != "e3~" && pg != "e_sh_1~") continue;
    for (size_t j = 0; j < ks2.col_labels.size(); ++j)
      if (!ks2.mat(static_cast<int>(i), static_cast<int>(j)).is_zero())
        hits.push_back(ks2.col_labels[j]);
  }
  std::sort(hits.begin(), hits.end());
  hits.erase(std::unique(hits.begin(), hits.end()), hits.end());
  CHECK(hits == std::vector<std::string>{"u", "u1", "v", "v1", "y1", "y1_1"});
}

TEST_CASE("KS is invertible on the whole grid") {
  for (i64 p : {3, 5}) {
    for (auto [n, m] : kGrid) {
      DeformedHodge def = universal_ao_deformation(n, m, p);
      KSMatrix ks = ks_matrix(def);
      CHECK(ks.mat.rows() == n * m);
      CHECK(ks.mat.cols() == n * m);
      CHECK(rank(ks.mat) == n * m);
    }
  }
}

TEST_CASE("psi(du) vanishes along the almost-ordinary stratum") {
  for (i64 p : {3, 5}) {
    for (auto [n, m] : kGrid) {
      DeformedHodge def = universal_ao_deformation(n, m, p);
      CHECK(psi_of_param(def, "u").is_zero());
    }
  }
}

TEST_CASE("positive controls: psi is not identically zero") {
  for (i64 p : {3, 5}) {
    // case I: psi(dv) != 0 (KS^{-1}(dv) = -e3 (x) f2 and e3 is not in P0)
    for (int m = 1; m <= 4; ++m) {
      DeformedHodge def = universal_ao_deformation(m + 1, m, p);
      CHECK(!psi_of_param(def, "v").is_zero());
    }
    // case II: psi(dw) != 0 (e4 is not in P0; note e3 IS in P0 here)
    for (auto [n, m] : std::vector<std::pair<int, int>>{{3, 1}, {5, 2}, {6, 3}}) {
      DeformedHodge def = universal_ao_deformation(n, m, p);
      CHECK(!psi_of_param(def, "w").is_zero());
      CHECK(psi_of_param(def, "v").is_zero());
    }
    // n = m: psi(dw_1) != 0 (V_P does not kill e_mu_1)
    for (int m = 2; m <= 4; ++m) {
      DeformedHodge def = universal_ao_deformation(m, m, p);
      CHECK(!psi_of_param(def, "w1").is_zero());
      // but psi(du_j) = 0: those rows also pass through e_sh
      CHECK(psi_of_param(def, "u1").is_zero());
    }
  }
}

TEST_CASE("psi is additive in the 1-form") {
  DeformedHodge def = universal_ao_deformation(2, 1, 7);
  OneForm du{def.ring, {Fq2::from_int(7, 1), Fq2::from_int(7, 0)}};
  OneForm dv{def.ring, {Fq2::from_int(7, 0), Fq2::from_int(7, 1)}};
  OneForm sum = du + dv;
  PsiResult a = psi(def, du), b = psi(def, dv), c = psi(def, sum);
  CHECK(c.coeffs == a.coeffs + b.coeffs);
}

TEST_CASE("case I concrete psi values") {
  // for (2,1): KS^{-1}(dv) = -(e3~ (x) f2~), so the psi matrix has a single
  // entry -1 in the e3-row
  DeformedHodge def = universal_ao_deformation(2, 1, 5);
  PsiResult pv = psi_of_param(def, "v");
  REQUIRE(pv.coeffs.rows() == 1);  // P/P0 is spanned by e3~ mod P0
  REQUIRE(pv.coeffs.cols() == 1);
  CHECK(pv.row_labels == std::vector<std::string>{"e3~ mod P0"});
  CHECK(pv.coeffs(0, 0) == Fq2::from_int(5, -1));
}

TEST_CASE("pole order audit certifies holomorphy") {
  // k = 0: trivially holomorphic, overall minimum order 0
  PoleAudit a0 = pole_order_audit(0, 24);
  CHECK(a0.holomorphic);
  CHECK(a0.min_order_first_summand == 0);
  CHECK(a0.min_order_second_summand >= 0);

  // k = 3, p = 5, e = 24: second summand k + r - e + e = 0 at r = -k
  PoleAudit a3 = pole_order_audit(3, 24);
  CHECK(a3.min_order_second_summand == 0);
  CHECK(a3.pole_order_before_psi == -24);
  CHECK(a3.psi_zero_order == 24);
  CHECK(a3.holomorphic);

  // e = p - 1 behaves identically
  for (int k = 0; k <= 10; ++k)
    for (int e : {2, 4, 6, 8, 24, 48}) {
      PoleAudit a = pole_order_audit(k, e);
      CHECK(a.holomorphic);
      CHECK(a.min_order_first_summand == 0);
      CHECK(a.min_order_second_summand >= 0);
    }

  CHECK_THROWS_AS(pole_order_audit(-1, 24), std::invalid_argument);
}
