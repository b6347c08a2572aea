#pragma once

// Fourier-Jacobi expansions at rank-m cusps: the hermitian index lattice and
// its positive cone, the theta operator on expansions, Hasse-invariant
// behavior, the kernel criterion, the Gamma-action, products, and the theta
// cycle model for signature (n,1).
//
// Indices are integer hermitian matrices over the imaginary quadratic order
// Z[sqrt(-d)], with d chosen smallest so that -d is a non-residue mod p and
// the order stays inert at p.  For m = 1 an index is a single integer.

#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "mutheta/weights.hpp"

namespace mutheta {

// Smallest d >= 1 with -d a quadratic non-residue mod p.
i64 order_discriminant_constant(i64 p);

struct QuadInt {
  i64 re = 0, im = 0;  // re + im * sqrt(-d), d carried by the enclosing index

  QuadInt conj() const { return {re, -im}; }
  bool is_zero() const { return re == 0 && im == 0; }
  friend QuadInt operator+(QuadInt a, QuadInt b) { return {a.re + b.re, a.im + b.im}; }
  friend QuadInt operator-(QuadInt a, QuadInt b) { return {a.re - b.re, a.im - b.im}; }
  friend bool operator==(QuadInt a, QuadInt b) { return a.re == b.re && a.im == b.im; }
  friend bool operator!=(QuadInt a, QuadInt b) { return !(a == b); }
  static QuadInt mul(QuadInt a, QuadInt b, i64 d) {
    return {a.re * b.re - d * a.im * b.im, a.re * b.im + a.im * b.re};
  }
};

class HermIndex {
 public:
  HermIndex() : m_(0), d_(1) {}
  // m = 1 index from a single integer
  static HermIndex integer(i64 n, i64 d = 1);
  // general: row-major entries, validated hermitian (diagonal real,
  // entry(j,i) = conj(entry(i,j)))
  HermIndex(int m, i64 d, std::vector<QuadInt> entries);
  static HermIndex zero(int m, i64 d);

  int m() const { return m_; }
  i64 d() const { return d_; }
  const QuadInt& at(int i, int j) const { return e_[static_cast<size_t>(i) * m_ + j]; }
  i64 trace() const;

  friend HermIndex operator+(const HermIndex& a, const HermIndex& b);
  friend bool operator==(const HermIndex& a, const HermIndex& b) {
    return a.m_ == b.m_ && a.d_ == b.d_ && a.e_ == b.e_;
  }
  friend bool operator!=(const HermIndex& a, const HermIndex& b) { return !(a == b); }
  friend bool operator<(const HermIndex& a, const HermIndex& b);

  bool is_zero() const;
  bool divisible_by(i64 k) const;  // all components divisible by k
  HermIndex scaled(i64 k) const;

  // exact positive-semidefiniteness: every principal minor >= 0 over Q
  bool in_positive_cone() const;

  // index transform under gamma: conj-transpose(gamma) * h * gamma
  HermIndex gamma_transform(const std::vector<QuadInt>& gamma) const;

  std::string key() const;  // canonical flat encoding for JSON keys
  static HermIndex from_key(const std::string& key, int m, i64 d);

 private:
  i64 principal_minor(const std::vector<int>& rows) const;
  int m_;
  i64 d_;
  std::vector<QuadInt> e_;  // row-major
};

// Image of sqrt(-d) in W_s(F_{p^2}); s = 1 gives the residue field value.
WittElem order_root_image(i64 p, i64 s);
WittElem reduce_quadint(const QuadInt& z, i64 p, i64 s);

struct FJExpansion {
  i64 p = 3;
  i64 s = 1;
  int m = 1;
  i64 trunc = 0;                       // support restricted to trace <= trunc
  int coeff_rank = 1;
  std::map<HermIndex, std::vector<WittElem>> terms;  // no zero vectors stored
  std::optional<ThetaWeightTag> weight;

  i64 order_d() const { return order_discriminant_constant(p); }
  WittElem ring_zero() const { return WittElem(p, s, 0, 0); }
  WittElem ring_one() const { return WittElem(p, s, 1, 0); }

  // insert with zero-dropping and cone/truncation validation
  void set_term(const HermIndex& h, std::vector<WittElem> coeff);
  std::vector<WittElem> term(const HermIndex& h) const;  // zero vector if absent
  bool is_zero() const { return terms.empty(); }

  friend bool operator==(const FJExpansion& f, const FJExpansion& g) {
    return f.p == g.p && f.s == g.s && f.m == g.m && f.coeff_rank == g.coeff_rank &&
           f.terms == g.terms;
  }
};

FJExpansion fj_zero(i64 p, i64 s, int m, i64 trunc, int coeff_rank = 1);

// Theta: coefficient at h becomes a(h) (x) h, stored as an explicit
// (coeff_rank x m^2) block; for m = 1 this is n * a_n.
FJExpansion theta(const FJExpansion& f);
FJExpansion theta_iterate(const FJExpansion& f, int e);
bool is_in_theta_kernel(const FJExpansion& f);  // support inside p * H^+

// The Hasse invariant has constant expansion 1 of scalar weight p^2 - 1.
FJExpansion hasse_expansion(i64 p, i64 s, int m, i64 trunc);
FJExpansion hasse_mult(const FJExpansion& f);

// Cauchy product of scalar expansions over the index monoid.
FJExpansion multiply(const FJExpansion& f, const FJExpansion& g);
FJExpansion add(const FJExpansion& f, const FJExpansion& g);
FJExpansion scale(const WittElem& c, const FJExpansion& f);

// Index transform h -> conj-transpose(gamma) h gamma; scalar coefficients
// unchanged, theta-image blocks transformed leg by leg.  The composition law
// is gamma_act(g1 g2, f) = gamma_act(g2, gamma_act(g1, f)).
FJExpansion gamma_act(const std::vector<QuadInt>& gamma, const FJExpansion& f);

bool gamma_invertible_mod_p(const std::vector<QuadInt>& gamma, int m, i64 p);
std::vector<QuadInt> gamma_multiply(const std::vector<QuadInt>& a,
                                    const std::vector<QuadInt>& b, int m, i64 d);

// ------------------------------------------------------------ theta cycles

// Modeled filtration sequence of Theta^i(f), i = 0..p-1: steps of +(p+1)
// except a single drop of p^2-p-2 at i0, wrapping back to k0.
struct CycleReport {
  i64 p = 0, k0 = 0;
  int i0 = 0;
  std::vector<i64> weights;  // p entries, indices 0..p-1
  bool closes = false;       // weights.back() == k0
  bool congruent = false;    // weights[i] == k0 + i(p+1) mod p^2-1
};

CycleReport cycle_report(i64 k0, int i0, i64 p);
// validity of an externally supplied sequence (negative controls)
bool cycle_sequence_valid(const std::vector<i64>& weights, i64 k0, i64 p);

// random scalar expansion, deterministic under seed
FJExpansion random_expansion(i64 p, i64 s, int m, i64 trunc, std::mt19937_64& rng,
                             int max_terms = 12);

}  // namespace mutheta
