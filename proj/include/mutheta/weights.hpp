#pragma once

// Dominant-weight calculus for GL_m x GL_m x GL_{n-m}, formal representation
// expressions over the three standard generators with Sym / wedge / tensor /
// dual / Frobenius-twist nodes, their evaluation on trivialized modules, the
// sum-symmetric weight gate for D_kappa^kappa', and the Galois embeddings
// iota and iota-dual.

#include <memory>
#include <string>
#include <vector>

#include "mutheta/matrix.hpp"

namespace mutheta {

struct DominantWeight {
  std::vector<i64> entries;  // weakly decreasing

  explicit DominantWeight(std::vector<i64> e = {}) : entries(std::move(e)) {
    for (size_t i = 1; i < entries.size(); ++i)
      if (entries[i - 1] < entries[i])
        throw std::invalid_argument("DominantWeight: not weakly decreasing");
  }
  int size() const { return static_cast<int>(entries.size()); }
  i64 sum() const {
    i64 s = 0;
    for (i64 e : entries) s += e;
    return s;
  }
  bool nonnegative() const {
    for (i64 e : entries)
      if (e < 0) return false;
    return true;
  }
  friend bool operator==(const DominantWeight& a, const DominantWeight& b) {
    return a.entries == b.entries;
  }
  static DominantWeight scalar(i64 k, int m) {
    return DominantWeight(std::vector<i64>(m, k));
  }
  static DominantWeight zero(int m) { return scalar(0, m); }
};

// kappa = (a, b, c) for the factors twisted by Q, P_mu, P_0 respectively.
struct WeightTriple {
  DominantWeight a, b, c;

  friend bool operator==(const WeightTriple& x, const WeightTriple& y) {
    return x.a == y.a && x.b == y.b && x.c == y.c;
  }
  WeightTriple plus(const WeightTriple& o) const {
    auto add = [](const DominantWeight& x, const DominantWeight& y) {
      if (x.size() != y.size())
        throw std::invalid_argument("WeightTriple: size mismatch");
      std::vector<i64> e;
      for (int i = 0; i < x.size(); ++i) e.push_back(x.entries[i] + y.entries[i]);
      return DominantWeight(e);
    };
    return WeightTriple{add(a, o.a), add(b, o.b), add(c, o.c)};
  }
  static WeightTriple scalar(i64 k, int m, int nm) {
    return WeightTriple{DominantWeight::scalar(k, m), DominantWeight::zero(m),
                        DominantWeight::zero(nm)};
  }
};

// kappa' = (a', b', 0) with nonnegative a', b' and equal entry sums.
bool is_sum_symmetric(const WeightTriple& kp);

struct DkReport {
  bool sum_symmetric = false;
  i64 theta_iterations = 0;  // e = sum a'_i
  WeightTriple target;
};

// Target weight kappa + kappa' and the Theta order e; throws if c' != 0 or a
// component is not dominant nonnegative.
DkReport dk_target(const WeightTriple& kappa, const WeightTriple& kappa_prime);

// Scalar shift in characteristic p: weight k goes to k + (p+1) k' after
// identifying det(P_mu) with L^p.
inline i64 dk_scalar_shift(i64 k, i64 k_prime, i64 p) { return k + (p + 1) * k_prime; }

// A formal tag recording Theta applications on top of a base weight; one
// Theta tensors by st_Pmu (x) st_Q, which is not itself a dominant weight.
struct ThetaWeightTag {
  WeightTriple base;
  int theta_applications = 0;
  friend bool operator==(const ThetaWeightTag& x, const ThetaWeightTag& y) {
    return x.base == y.base && x.theta_applications == y.theta_applications;
  }
};

inline ThetaWeightTag theta_weight_tag(const ThetaWeightTag& t) {
  ThetaWeightTag r = t;
  r.theta_applications += 1;
  return r;
}

// ------------------------------------------------------- rep expressions

enum class RepKind { GenQ, GenPmu, GenP0, Sym, Wedge, Tensor, Dual, FrobTwist };

struct RepExpr {
  RepKind kind;
  int degree = 0;                  // Sym / Wedge
  std::vector<RepExpr> children;

  static RepExpr gen_q() { return {RepKind::GenQ, 0, {}}; }
  static RepExpr gen_pmu() { return {RepKind::GenPmu, 0, {}}; }
  static RepExpr gen_p0() { return {RepKind::GenP0, 0, {}}; }
  static RepExpr sym(int d, RepExpr child) {
    if (d < 0) throw std::invalid_argument("RepExpr: Sym degree must be >= 0");
    return {RepKind::Sym, d, {std::move(child)}};
  }
  static RepExpr wedge(int r, RepExpr child) {
    if (r < 0) throw std::invalid_argument("RepExpr: wedge degree must be >= 0");
    return {RepKind::Wedge, r, {std::move(child)}};
  }
  static RepExpr tensor(RepExpr l, RepExpr r) {
    return {RepKind::Tensor, 0, {std::move(l), std::move(r)}};
  }
  static RepExpr dual(RepExpr child) { return {RepKind::Dual, 0, {std::move(child)}}; }
  static RepExpr frob_twist(RepExpr child) {
    return {RepKind::FrobTwist, 0, {std::move(child)}};
  }
};

// The composite Sym^{l1-l2}(st) (x) Sym^{l2-l3}(wedge^2 st) (x) ... over the
// chosen generator; a negative last entry is handled as the dual of the
// corresponding determinant power.
RepExpr rho_lambda_expr(const DominantWeight& lambda, RepExpr generator);

// Assignment of an action matrix per generator (module ranks read off the
// matrix shapes).
template <typename T>
struct GenAssignment {
  Matrix<T> gQ, gPmu, gP0;
};

template <typename T>
struct EvalResult {
  int dim = 0;
  Matrix<T> action;
};

i64 binomial(i64 n, i64 k);

// Dimension of the evaluated module given the three generator ranks.
int rep_dim(const RepExpr& e, int rank_q, int rank_pmu, int rank_p0);

// Evaluate the expression on the assignment: functorial in the group element
// (action of a product is the product of actions).
template <typename T>
EvalResult<T> evaluate(const RepExpr& e, const GenAssignment<T>& assign);

// ------------------------------------------------------ Galois embeddings

// iota(gamma2, gamma1) = (conj(gamma2), gamma2, gamma1)
struct IotaTriple {
  Matrix<Fq2> q_factor, pmu_factor, p0_factor;
};

IotaTriple iota(const Matrix<Fq2>& gamma2, const Matrix<Fq2>& gamma1);
// iota_dual(gamma) = (transpose(conj(gamma))^{-1}, transpose(gamma)^{-1}, 1)
IotaTriple iota_dual(const Matrix<Fq2>& gamma, int p0_rank);

// ----------------------------------------------------- template machinery

namespace repdetail {

// Exponent vectors of total degree d over n slots, graded reverse
// lexicographic, so that Sym^1 is the identity functor on the nose.
inline void enumerate_multi(int n, int d, std::vector<std::vector<int>>& out,
                            std::vector<int>& cur, int pos, int left) {
  if (pos == n - 1) {
    cur[pos] = left;
    out.push_back(cur);
    return;
  }
  for (int v = left; v >= 0; --v) {
    cur[pos] = v;
    enumerate_multi(n, d, out, cur, pos + 1, left - v);
  }
}

inline std::vector<std::vector<int>> multi_indices(int n, int d) {
  std::vector<std::vector<int>> out;
  if (n == 0) {
    if (d == 0) out.push_back({});
    return out;
  }
  std::vector<int> cur(n, 0);
  enumerate_multi(n, d, out, cur, 0, d);
  return out;
}

inline std::vector<std::vector<int>> subsets(int n, int r) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  std::function<void(int)> rec = [&](int start) {
    if (static_cast<int>(cur.size()) == r) {
      out.push_back(cur);
      return;
    }
    for (int i = start; i <= n - (r - static_cast<int>(cur.size())); ++i) {
      cur.push_back(i);
      rec(i + 1);
      cur.pop_back();
    }
  };
  rec(0);
  return out;
}

template <typename T>
Matrix<T> sym_power(const Matrix<T>& a, int d) {
  int n = a.rows();
  if (a.cols() != n) throw std::invalid_argument("sym_power: non-square action");
  auto basis = multi_indices(n, d);
  int dim = static_cast<int>(basis.size());
  T w = (n > 0) ? a(0, 0) : T();
  if (n == 0) throw std::invalid_argument("sym_power: empty module");
  Matrix<T> s = Matrix<T>::zeros(dim, dim, w);
  // map exponent vector -> basis position
  auto find = [&](const std::vector<int>& e) {
    for (int i = 0; i < dim; ++i)
      if (basis[i] == e) return i;
    throw std::logic_error("sym_power: index not found");
  };
  for (int col = 0; col < dim; ++col) {
    // expand prod_j (column j of a)^{alpha_j} as a degree-d polynomial
    std::vector<std::pair<std::vector<int>, T>> poly;
    poly.emplace_back(std::vector<int>(n, 0), w.one_like());
    for (int j = 0; j < n; ++j) {
      for (int rep = 0; rep < basis[col][j]; ++rep) {
        std::vector<std::pair<std::vector<int>, T>> next;
        for (const auto& [e, c] : poly) {
          for (int i = 0; i < n; ++i) {
            if (a(i, j).is_zero()) continue;
            std::vector<int> e2 = e;
            e2[i] += 1;
            T c2 = c * a(i, j);
            bool merged = false;
            for (auto& [ee, cc] : next)
              if (ee == e2) {
                cc += c2;
                merged = true;
                break;
              }
            if (!merged) next.emplace_back(std::move(e2), std::move(c2));
          }
        }
        poly = std::move(next);
      }
    }
    for (const auto& [e, c] : poly) s(find(e), col) = c;
  }
  return s;
}

template <typename T>
Matrix<T> wedge_power(const Matrix<T>& a, int r) {
  int n = a.rows();
  if (a.cols() != n) throw std::invalid_argument("wedge_power: non-square action");
  if (r > n) throw std::invalid_argument("wedge_power: degree exceeds rank");
  auto basis = subsets(n, r);
  int dim = static_cast<int>(basis.size());
  T w = a(0, 0);
  Matrix<T> m = Matrix<T>::zeros(dim, dim, w);
  for (int col = 0; col < dim; ++col)
    for (int row = 0; row < dim; ++row) {
      Matrix<T> sub = Matrix<T>::zeros(r, r, w);
      for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j) sub(i, j) = a(basis[row][i], basis[col][j]);
      m(row, col) = sub.det_small();
    }
  return m;
}

template <typename T>
Matrix<T> kronecker(const Matrix<T>& a, const Matrix<T>& b) {
  if (a.rows() == 0 || b.rows() == 0) throw std::invalid_argument("kronecker: empty");
  T w = a(0, 0);
  Matrix<T> m = Matrix<T>::zeros(a.rows() * b.rows(), a.cols() * b.cols(), w);
  for (int i1 = 0; i1 < a.rows(); ++i1)
    for (int j1 = 0; j1 < a.cols(); ++j1) {
      if (a(i1, j1).is_zero()) continue;
      for (int i2 = 0; i2 < b.rows(); ++i2)
        for (int j2 = 0; j2 < b.cols(); ++j2)
          m(i1 * b.rows() + i2, j1 * b.cols() + j2) = a(i1, j1) * b(i2, j2);
    }
  return m;
}

}  // namespace repdetail

template <typename T>
EvalResult<T> evaluate(const RepExpr& e, const GenAssignment<T>& assign) {
  switch (e.kind) {
    case RepKind::GenQ:
      return {assign.gQ.rows(), assign.gQ};
    case RepKind::GenPmu:
      return {assign.gPmu.rows(), assign.gPmu};
    case RepKind::GenP0:
      return {assign.gP0.rows(), assign.gP0};
    case RepKind::Sym: {
      EvalResult<T> c = evaluate(e.children[0], assign);
      Matrix<T> s = repdetail::sym_power(c.action, e.degree);
      return {s.rows(), s};
    }
    case RepKind::Wedge: {
      EvalResult<T> c = evaluate(e.children[0], assign);
      Matrix<T> m = repdetail::wedge_power(c.action, e.degree);
      return {m.rows(), m};
    }
    case RepKind::Tensor: {
      EvalResult<T> l = evaluate(e.children[0], assign);
      EvalResult<T> r = evaluate(e.children[1], assign);
      Matrix<T> m = repdetail::kronecker(l.action, r.action);
      return {l.dim * r.dim, m};
    }
    case RepKind::Dual: {
      EvalResult<T> c = evaluate(e.children[0], assign);
      return {c.dim, inverse(c.action).transpose()};
    }
    case RepKind::FrobTwist: {
      EvalResult<T> c = evaluate(e.children[0], assign);
      return {c.dim, frobenius_entrywise(c.action, 1)};
    }
  }
  throw std::logic_error("evaluate: unreachable");
}

}  // namespace mutheta
