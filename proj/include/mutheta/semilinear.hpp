#pragma once

// Frobenius-twisted maps between free modules.  A TwistedMap with twist r
// realizes a linear map M^{(p^r)} -> N (equivalently, a p^r-semilinear map),
// stored as its matrix in the chosen bases.  Composition raises the later
// matrix entrywise to the power p^{q} where q is the earlier map's twist,
// so that H = V_P^{(p)} o V_Q comes out as frob(V_P) * V_Q with twist 2.

#include "mutheta/matrix.hpp"

namespace mutheta {

template <typename T>
struct TwistedMap {
  Matrix<T> mat;
  int twist = 0;

  TwistedMap() = default;
  TwistedMap(Matrix<T> m, int tw) : mat(std::move(m)), twist(tw) {}

  int source_rank() const { return mat.cols(); }
  int target_rank() const { return mat.rows(); }

  std::vector<T> apply(const std::vector<T>& v) const { return mat.apply(v); }

  friend bool operator==(const TwistedMap& a, const TwistedMap& b) {
    return a.twist == b.twist && a.mat == b.mat;
  }
  friend bool operator!=(const TwistedMap& a, const TwistedMap& b) { return !(a == b); }
};

template <typename T>
TwistedMap<T> frobenius_twist(const TwistedMap<T>& a) {
  return TwistedMap<T>(frobenius_entrywise(a.mat, 1), a.twist + 1);
}

// a after b; twists add, with a's matrix twisted by b's degree first.
template <typename T>
TwistedMap<T> compose(const TwistedMap<T>& a, const TwistedMap<T>& b) {
  if (a.source_rank() != b.target_rank())
    throw std::invalid_argument("compose: rank mismatch");
  return TwistedMap<T>(frobenius_entrywise(a.mat, b.twist) * b.mat, a.twist + b.twist);
}

template <typename T>
int twisted_rank(const TwistedMap<T>& a) {
  return rank(a.mat);
}

// Over a square-zero (local) ring, rank means rank of the constant-term
// matrix over the residue field.
inline Matrix<Fq2> constant_part(const Matrix<SqzElem>& m) {
  if (m.empty()) return Matrix<Fq2>();
  Matrix<Fq2> r = Matrix<Fq2>::zeros(m.rows(), m.cols(), m(0, 0).constant_term());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) r(i, j) = m(i, j).constant_term();
  return r;
}

inline int twisted_rank(const TwistedMap<SqzElem>& a) {
  return rank(constant_part(a.mat));
}

}  // namespace mutheta
