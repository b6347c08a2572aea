#include "mutheta/weights.hpp"

#include <stdexcept>

namespace mutheta {

i64 binomial(i64 n, i64 k) {
  if (k < 0 || k > n) return 0;
  if (k > n - k) k = n - k;
  i64 r = 1;
  for (i64 i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

bool is_sum_symmetric(const WeightTriple& kp) {
  if (kp.c.sum() != 0) return false;
  for (i64 e : kp.c.entries)
    if (e != 0) return false;
  if (!kp.a.nonnegative() || !kp.b.nonnegative()) return false;
  return kp.a.sum() == kp.b.sum();
}

DkReport dk_target(const WeightTriple& kappa, const WeightTriple& kappa_prime) {
  for (i64 e : kappa_prime.c.entries)
    if (e != 0)
      throw std::invalid_argument("dk_target: kappa' must have zero third component");
  if (!kappa_prime.a.nonnegative() || !kappa_prime.b.nonnegative())
    throw std::invalid_argument("dk_target: kappa' must be nonnegative");
  DkReport rep;
  rep.sum_symmetric = is_sum_symmetric(kappa_prime);
  rep.theta_iterations = kappa_prime.a.sum();
  rep.target = kappa.plus(kappa_prime);
  return rep;
}

RepExpr rho_lambda_expr(const DominantWeight& lambda, RepExpr generator) {
  int m = lambda.size();
  if (m == 0) throw std::invalid_argument("rho_lambda_expr: empty weight");
  std::vector<RepExpr> factors;
  for (int i = 1; i <= m; ++i) {
    i64 d = (i < m) ? lambda.entries[i - 1] - lambda.entries[i] : lambda.entries[m - 1];
    RepExpr wedge_i = (i == 1) ? generator : RepExpr::wedge(i, generator);
    if (d >= 0) {
      if (d == 0) continue;
      factors.push_back(RepExpr::sym(static_cast<int>(d), wedge_i));
    } else {
      // negative determinant power: dual of the positive power
      factors.push_back(RepExpr::dual(RepExpr::sym(static_cast<int>(-d), wedge_i)));
    }
  }
  if (factors.empty()) return RepExpr::sym(0, generator);
  RepExpr acc = factors[0];
  for (size_t i = 1; i < factors.size(); ++i)
    acc = RepExpr::tensor(acc, factors[i]);
  return acc;
}

int rep_dim(const RepExpr& e, int rank_q, int rank_pmu, int rank_p0) {
  switch (e.kind) {
    case RepKind::GenQ:
      return rank_q;
    case RepKind::GenPmu:
      return rank_pmu;
    case RepKind::GenP0:
      return rank_p0;
    case RepKind::Sym: {
      int n = rep_dim(e.children[0], rank_q, rank_pmu, rank_p0);
      return static_cast<int>(binomial(n + e.degree - 1, e.degree));
    }
    case RepKind::Wedge: {
      int n = rep_dim(e.children[0], rank_q, rank_pmu, rank_p0);
      if (e.degree > n) throw std::invalid_argument("rep_dim: wedge degree exceeds rank");
      return static_cast<int>(binomial(n, e.degree));
    }
    case RepKind::Tensor:
      return rep_dim(e.children[0], rank_q, rank_pmu, rank_p0) *
             rep_dim(e.children[1], rank_q, rank_pmu, rank_p0);
    case RepKind::Dual:
    case RepKind::FrobTwist:
      return rep_dim(e.children[0], rank_q, rank_pmu, rank_p0);
  }
  throw std::logic_error("rep_dim: unreachable");
}

IotaTriple iota(const Matrix<Fq2>& gamma2, const Matrix<Fq2>& gamma1) {
  if (gamma2.rows() != gamma2.cols() || gamma1.rows() != gamma1.cols())
    throw std::invalid_argument("iota: non-square input");
  if (rank(gamma2) != gamma2.rows())
    throw std::invalid_argument("iota: singular gamma2");
  return IotaTriple{frobenius_entrywise(gamma2, 1), gamma2, gamma1};
}

IotaTriple iota_dual(const Matrix<Fq2>& gamma, int p0_rank) {
  if (gamma.rows() != gamma.cols()) throw std::invalid_argument("iota_dual: non-square");
  Matrix<Fq2> inv = inverse(gamma);  // throws on singular input
  Matrix<Fq2> inv_t = inv.transpose();
  IotaTriple t;
  t.q_factor = frobenius_entrywise(inv_t, 1);
  t.pmu_factor = inv_t;
  t.p0_factor = Matrix<Fq2>::identity(p0_rank, gamma(0, 0));
  return t;
}

}  // namespace mutheta
