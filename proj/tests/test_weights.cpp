#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "mutheta/semilinear.hpp"
#include "mutheta/weights.hpp"

using namespace mutheta;

namespace {

Matrix<Fq2> random_invertible(i64 p, int n, std::mt19937_64& rng) {
  std::uniform_int_distribution<i64> d(0, p - 1);
  while (true) {
    Matrix<Fq2> m = Matrix<Fq2>::zeros(n, n, Fq2::from_int(p, 0));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) m(i, j) = Fq2(p, d(rng), d(rng));
    if (rank(m) == n) return m;
  }
}

GenAssignment<Fq2> assign_all(const Matrix<Fq2>& g) { return {g, g, g}; }

}  // namespace

TEST_CASE("dominant weights") {
  CHECK_NOTHROW(DominantWeight({3, 1, 0}));
  CHECK_NOTHROW(DominantWeight({2, 2, -1}));
  CHECK_THROWS_AS(DominantWeight({1, 2}), std::invalid_argument);
}

TEST_CASE("Sym and wedge dimensions") {
  // stars and bars: dim Sym^d(st_m) = C(m+d-1, d)
  CHECK(rep_dim(RepExpr::sym(3, RepExpr::gen_q()), 2, 2, 1) == 4);   // (m,d) = (2,3)
  CHECK(rep_dim(RepExpr::sym(2, RepExpr::gen_q()), 3, 3, 1) == 6);   // (m,d) = (3,2)
  CHECK(rep_dim(RepExpr::wedge(3, RepExpr::gen_q()), 3, 3, 1) == 1); // top wedge
  CHECK_THROWS_AS(rep_dim(RepExpr::wedge(4, RepExpr::gen_q()), 3, 3, 1),
                  std::invalid_argument);
}

TEST_CASE("top exterior power acts by the determinant") {
  std::mt19937_64 rng(5);
  for (i64 p : {3, 5}) {
    for (int t = 0; t < 10; ++t) {
      Matrix<Fq2> g = random_invertible(p, 3, rng);
      EvalResult<Fq2> r = evaluate(RepExpr::wedge(3, RepExpr::gen_q()), assign_all(g));
      CHECK(r.dim == 1);
      CHECK(r.action(0, 0) == g.det_small());
    }
  }
}

TEST_CASE("evaluate is functorial on every node type") {
  std::mt19937_64 rng(9);
  std::vector<RepExpr> exprs;
  exprs.push_back(RepExpr::sym(2, RepExpr::gen_q()));
  exprs.push_back(RepExpr::sym(3, RepExpr::gen_q()));
  exprs.push_back(RepExpr::wedge(2, RepExpr::gen_q()));
  exprs.push_back(RepExpr::tensor(RepExpr::gen_q(), RepExpr::gen_pmu()));
  exprs.push_back(RepExpr::dual(RepExpr::gen_q()));
  exprs.push_back(RepExpr::frob_twist(RepExpr::gen_q()));
  exprs.push_back(RepExpr::tensor(RepExpr::sym(2, RepExpr::gen_q()),
                                  RepExpr::dual(RepExpr::wedge(2, RepExpr::gen_pmu()))));

  for (i64 p : {3, 5}) {
    for (const RepExpr& e : exprs) {
      for (int t = 0; t < 50; ++t) {
        Matrix<Fq2> g = random_invertible(p, 3, rng);
        Matrix<Fq2> h = random_invertible(p, 3, rng);
        EvalResult<Fq2> rg = evaluate(e, assign_all(g));
        EvalResult<Fq2> rh = evaluate(e, assign_all(h));
        EvalResult<Fq2> rgh = evaluate(e, assign_all(g * h));
        CHECK(rgh.action == rg.action * rh.action);
      }
    }
  }
}

TEST_CASE("frobenius twist node raises action entries to the p-th power") {
  std::mt19937_64 rng(11);
  Matrix<Fq2> g = random_invertible(5, 2, rng);
  EvalResult<Fq2> r = evaluate(RepExpr::frob_twist(RepExpr::gen_q()), assign_all(g));
  CHECK(r.action == frobenius_entrywise(g, 1));
}

TEST_CASE("rho_lambda expressions") {
  // scalar weight: determinant power, dimension 1
  RepExpr det3 = rho_lambda_expr(DominantWeight::scalar(4, 3), RepExpr::gen_q());
  CHECK(rep_dim(det3, 3, 3, 1) == 1);

  // (1,0,...,0) is the standard representation
  RepExpr st = rho_lambda_expr(DominantWeight({1, 0, 0}), RepExpr::gen_q());
  CHECK(rep_dim(st, 3, 3, 1) == 3);
  std::mt19937_64 rng(13);
  Matrix<Fq2> g = random_invertible(5, 3, rng);
  CHECK(evaluate(st, assign_all(g)).action == g);

  // lambda = (2,1), m = 2: Sym^1(st) (x) Sym^1(wedge^2 st), dim 2
  RepExpr r21 = rho_lambda_expr(DominantWeight({2, 1}), RepExpr::gen_q());
  CHECK(rep_dim(r21, 2, 2, 1) == 2);
  Matrix<Fq2> g2 = random_invertible(5, 2, rng);
  EvalResult<Fq2> ev = evaluate(r21, assign_all(g2));
  CHECK(ev.dim == 2);
  // action = g * det(g)
  CHECK(ev.action == g2.det_small() * g2);

  // negative last entry: dual determinant powers
  RepExpr neg = rho_lambda_expr(DominantWeight({0, -2}), RepExpr::gen_q());
  CHECK(rep_dim(neg, 2, 2, 1) == 3);  // Sym^2(st) (x) dual(Sym^2(det))

  CHECK_THROWS_AS(rho_lambda_expr(DominantWeight(std::vector<i64>{}), RepExpr::gen_q()),
                  std::invalid_argument);
}

TEST_CASE("dim rho_lambda matches the closed-form binomial product") {
  for (int m : {2, 3}) {
    std::vector<DominantWeight> lams;
    if (m == 2) {
      lams.push_back(DominantWeight({3, 1}));
      lams.push_back(DominantWeight({2, 0}));
    } else {
      lams.push_back(DominantWeight({2, 1, 0}));
      lams.push_back(DominantWeight({3, 3, 1}));
    }
    for (const auto& lam : lams) {
      RepExpr e = rho_lambda_expr(lam, RepExpr::gen_q());
      i64 expected = 1;
      for (int i = 1; i <= m; ++i) {
        i64 d = (i < m) ? lam.entries[i - 1] - lam.entries[i] : lam.entries[m - 1];
        i64 rank_i = binomial(m, i);
        expected *= binomial(rank_i + d - 1, d);
      }
      CHECK(rep_dim(e, m, m, 1) == expected);
    }
  }
}

TEST_CASE("sum-symmetric weights") {
  // c' must vanish
  WeightTriple bad{DominantWeight({2, 1}), DominantWeight({2, 1}), DominantWeight({1})};
  CHECK(!is_sum_symmetric(bad));
  CHECK_THROWS_AS(dk_target(WeightTriple::scalar(0, 2, 1), bad), std::invalid_argument);

  // equal sums pass the gate
  WeightTriple good{DominantWeight({2, 1}), DominantWeight({2, 1}), DominantWeight({0})};
  CHECK(is_sum_symmetric(good));
  DkReport rep = dk_target(WeightTriple::scalar(3, 2, 1), good);
  CHECK(rep.sum_symmetric);
  CHECK(rep.theta_iterations == 3);
  CHECK(rep.target.a == DominantWeight({5, 4}));

  // unequal sums fail
  WeightTriple uneq{DominantWeight({3, 1}), DominantWeight({2, 1}), DominantWeight({0})};
  CHECK(!is_sum_symmetric(uneq));

  // non-dominant data cannot even be built
  CHECK_THROWS_AS(DominantWeight({1, 2}), std::invalid_argument);
}

TEST_CASE("scalar weight shift k -> k + (p+1)k'") {
  for (i64 p : {3, 5, 7}) {
    CHECK(dk_scalar_shift(0, 1, p) == p + 1);
    CHECK(dk_scalar_shift(12, 2, p) == 12 + 2 * (p + 1));
  }
  // e = m k' theta applications for the scalar case; m = 1 gives Theta^{k'}
  WeightTriple kp{DominantWeight({2}), DominantWeight({2}), DominantWeight{{}}};
  DkReport rep = dk_target(WeightTriple::scalar(5, 1, 0), kp);
  CHECK(rep.theta_iterations == 2);
}

TEST_CASE("theta weight tag records applications") {
  ThetaWeightTag t{WeightTriple::scalar(4, 2, 1), 0};
  ThetaWeightTag t1 = theta_weight_tag(t);
  CHECK(t1.theta_applications == 1);
  CHECK(theta_weight_tag(t1).theta_applications == 2);
  CHECK(t1.base == t.base);
}

TEST_CASE("iota and iota_dual") {
  std::mt19937_64 rng(17);
  i64 p = 5;

  // identity maps to identities
  Matrix<Fq2> id2 = Matrix<Fq2>::identity(2, Fq2::from_int(p, 0));
  Matrix<Fq2> id3 = Matrix<Fq2>::identity(3, Fq2::from_int(p, 0));
  IotaTriple t = iota(id2, id3);
  CHECK(t.q_factor == id2);
  CHECK(t.pmu_factor == id2);
  CHECK(t.p0_factor == id3);
  IotaTriple td = iota_dual(id2, 3);
  CHECK(td.q_factor == id2);
  CHECK(td.pmu_factor == id2);
  CHECK(td.p0_factor == id3);

  // over the prime subfield the bar does nothing
  std::uniform_int_distribution<i64> d(0, p - 1);
  Matrix<Fq2> gp = Matrix<Fq2>::zeros(2, 2, Fq2::from_int(p, 0));
  do {
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) gp(i, j) = Fq2::from_int(p, d(rng));
  } while (rank(gp) != 2);
  IotaTriple tp = iota(gp, id3);
  CHECK(tp.q_factor == gp);

  // iota_dual is a homomorphism: (AB)^{-T} = A^{-T} B^{-T}
  for (int trial = 0; trial < 20; ++trial) {
    Matrix<Fq2> a = random_invertible(p, 2, rng);
    Matrix<Fq2> b = random_invertible(p, 2, rng);
    IotaTriple tab = iota_dual(a * b, 1);
    IotaTriple ta = iota_dual(a, 1);
    IotaTriple tb = iota_dual(b, 1);
    CHECK(tab.q_factor == ta.q_factor * tb.q_factor);
    CHECK(tab.pmu_factor == ta.pmu_factor * tb.pmu_factor);
  }

  // singular input is rejected
  Matrix<Fq2> sing = Matrix<Fq2>::zeros(2, 2, Fq2::from_int(p, 0));
  CHECK_THROWS(iota_dual(sing, 1));
  CHECK_THROWS(iota(sing, id3));
}

TEST_CASE("constant action matrices commute with the coordinate derivation") {
  // evaluate over the square-zero ring; prime-ring entries are horizontal
  i64 p = 5;
  auto ctx = make_sqz_context(p, {"t1", "t2"});
  SqzElem z(ctx);
  std::mt19937_64 rng(23);
  std::uniform_int_distribution<i64> d(0, p - 1);

  Matrix<SqzElem> g = Matrix<SqzElem>::zeros(2, 2, z);
  do {
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) g(i, j) = SqzElem::constant(ctx, d(rng));
  } while (rank(constant_part(g)) != 2);

  GenAssignment<SqzElem> assign{g, g, g};
  RepExpr e = RepExpr::sym(2, RepExpr::gen_q());
  EvalResult<SqzElem> ev = evaluate(e, assign);

  // a ring-valued vector in the evaluated module
  std::vector<SqzElem> v;
  for (int i = 0; i < ev.dim; ++i) {
    SqzElem x = SqzElem::constant(ctx, d(rng));
    x += SqzElem::constant(ctx, d(rng)) * SqzElem::parameter(ctx, "t1");
    x += SqzElem::constant(ctx, d(rng)) * SqzElem::parameter(ctx, "t2");
    v.push_back(x);
  }
  std::vector<SqzElem> gv = ev.action.apply(v);

  // d(action * v) = action * d(v), comparing coefficient-wise
  for (int i = 0; i < ev.dim; ++i) {
    OneForm lhs = gv[i].d();
    // action * d(v) at row i
    OneForm rhs{ctx, std::vector<Fq2>(2, Fq2::from_int(p, 0))};
    for (int j = 0; j < ev.dim; ++j) {
      OneForm dvj = v[j].d();
      for (size_t a = 0; a < rhs.coeffs.size(); ++a)
        rhs.coeffs[a] += ev.action(i, j).constant_term() * dvj.coeffs[a];
    }
    CHECK(lhs == rhs);
  }
}
