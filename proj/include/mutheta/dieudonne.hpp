#pragma once

// Polarized O_E-Dieudonne spaces over F_{p^2}: the model spaces at ordinary
// and almost-ordinary points, direct sums, the derived Hodge filtration, the
// signature, P_0, and Hasse matrices/invariants.
//
// Conventions: basis vectors are typed Sigma or SigmaBar; F and V are stored
// as twist-1 maps in the fixed basis (F realizing D^{(p)} -> D, V realizing
// D -> D^{(p)} with its matrix read against the twisted basis); the pairing
// is stored as a full skew matrix, with listed orientations kept verbatim
// and unlisted transposes filled in by skew-symmetry.

#include <optional>
#include <string>
#include <vector>

#include "mutheta/semilinear.hpp"

namespace mutheta {

enum class BasisType { Sigma, SigmaBar };

inline const char* to_string(BasisType t) {
  return t == BasisType::Sigma ? "Sigma" : "SigmaBar";
}

struct BasisVec {
  std::string name;
  BasisType type;
};

struct Signature {
  int n = 0;  // dim omega(Sigma)
  int m = 0;  // dim omega(SigmaBar)
  friend bool operator==(const Signature& a, const Signature& b) {
    return a.n == b.n && a.m == b.m;
  }
};

struct AxiomCheck {
  std::string name;
  bool pass;
  std::string detail;
};

struct VerifyReport {
  std::vector<AxiomCheck> checks;
  bool all_pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
  std::vector<std::string> failures() const {
    std::vector<std::string> out;
    for (const auto& c : checks)
      if (!c.pass) out.push_back(c.name);
    return out;
  }
};

struct HasseData {
  std::vector<int> q_indices;          // basis positions of the omega(SigmaBar) generators
  std::vector<int> p_indices;          // basis positions of the omega(Sigma) generators
  Matrix<Fq2> vq;                      // V|_Q in the P^{(p)} generator basis
  Matrix<Fq2> vp;                      // V|_P in the Q^{(p)} generator basis
  TwistedMap<Fq2> hasse;               // H = V_P^{(p)} o V_Q, twist 2
  Fq2 hasse_invariant;                 // det H
  std::optional<Fq2> h_q, h_p;         // det V_Q, det V_P when square (n = m)
};

class DieudonneSpace {
 public:
  DieudonneSpace(i64 p, std::vector<BasisVec> basis, TwistedMap<Fq2> F,
                 TwistedMap<Fq2> V, Matrix<Fq2> pairing);

  // Model spaces, with the published F/V tables and pairings.
  static DieudonneSpace g_sigma(i64 p);
  static DieudonneSpace g_sigma_bar(i64 p);
  static DieudonneSpace hyperbolic_mu_et(i64 p);  // one mu/etale plane, signature (1,1)
  static DieudonneSpace ao21(i64 p);
  static DieudonneSpace ao31(i64 p);
  static DieudonneSpace mu_ordinary(int n, int m, i64 p);
  static DieudonneSpace ao_space(int n, int m, i64 p);
  static DieudonneSpace direct_sum(const DieudonneSpace& a, const DieudonneSpace& b);

  i64 p() const { return p_; }
  int dim() const { return static_cast<int>(basis_.size()); }
  int genus() const { return dim() / 2; }
  const std::vector<BasisVec>& basis() const { return basis_; }
  const TwistedMap<Fq2>& F() const { return F_; }
  const TwistedMap<Fq2>& V() const { return V_; }
  const Matrix<Fq2>& pairing() const { return pairing_; }
  int basis_index(const std::string& name) const;

  // Checks every structural axiom; failures are report entries, not errors.
  VerifyReport verify() const;

  // omega = (D^{(p)}[F])^{(p^{-1})}, computed from F, never stored.
  Matrix<Fq2> omega_basis() const;           // columns
  // When omega comes out on standard basis vectors (all model spaces), the
  // positions in declaration order; empty optional otherwise.
  std::optional<std::vector<int>> omega_indices() const;
  Signature signature() const;

  // P_0 = omega(Sigma) intersect ker V.
  Matrix<Fq2> p0_basis() const;
  std::optional<std::vector<int>> p0_indices() const;

  // Hasse matrix in the derived omega bases (declaration order).
  HasseData hasse() const;

  std::vector<std::string> basis_names() const;

 private:
  i64 p_;
  std::vector<BasisVec> basis_;
  TwistedMap<Fq2> F_, V_;
  Matrix<Fq2> pairing_;
};

// Table-driven construction helper used by the model constructors and tests.
class SpaceBuilder {
 public:
  SpaceBuilder(i64 p) : p_(p) {}
  SpaceBuilder& add(const std::string& name, BasisType t);
  // F(source^{(p)}) = coeff * target ; V(source) = coeff * target^{(p)}
  SpaceBuilder& set_F(const std::string& source, const std::string& target, i64 coeff = 1);
  SpaceBuilder& set_V(const std::string& source, const std::string& target, i64 coeff = 1);
  // pairing <first, second> = value, transpose filled by skew-symmetry
  SpaceBuilder& pair(const std::string& first, const std::string& second, i64 value = 1);
  DieudonneSpace build() const;

 private:
  struct Entry {
    std::string src, dst;
    i64 coeff;
  };
  int index_of(const std::string& name) const;
  i64 p_;
  std::vector<BasisVec> basis_;
  std::vector<Entry> f_entries_, v_entries_, pair_entries_;
};

}  // namespace mutheta
