#pragma once

// First-order deformations of the Hodge filtration over square-zero rings,
// Gauss-Manin in the horizontal frame, the Kodaira-Spencer matrix, the Hasse
// family and its local equation, the map psi, and the pole-order audit for
// the holomorphic extension argument.

#include <optional>
#include <string>
#include <vector>

#include "mutheta/dieudonne.hpp"

namespace mutheta {

enum class DeformationCase { NEqualsMPlus1, NAtLeastMPlus2, NEqualsM };

struct DeformedHodge {
  DieudonneSpace base;                     // closed point space
  SqzCtxPtr ring;                          // square-zero parameter ring
  DeformationCase kase;
  int n = 0, m = 0;
  std::vector<std::string> p_gen_names;    // Sigma-type generators, display order
  std::vector<std::string> q_gen_names;    // SigmaBar-type generators, display order
  std::vector<std::vector<SqzElem>> p_gens;  // coordinates in the horizontal basis
  std::vector<std::vector<SqzElem>> q_gens;

  int gen_count() const {
    return static_cast<int>(p_gens.size() + q_gens.size());
  }
  const std::vector<SqzElem>& gen(const std::string& name) const;
};

DeformedHodge universal_ao_deformation(int n, int m, i64 p);

struct AdmissibilityReport {
  bool reduction_spans_omega = false;
  bool direct_summand_rank_g = false;
  bool type_stable = false;
  bool isotropic = false;
  bool all() const {
    return reduction_spans_omega && direct_summand_rank_g && type_stable && isotropic;
  }
};

AdmissibilityReport check_admissible(const DeformedHodge& def);

// Gauss-Manin of a generator in the horizontal frame: the dt_alpha-coefficient
// vectors of its linear part, one horizontal vector per parameter.
struct GaussManinResult {
  std::vector<std::string> params;
  std::vector<std::vector<Fq2>> vectors;  // one entry per parameter
  bool is_zero() const;
};

GaussManinResult gauss_manin(const DeformedHodge& def, const std::string& gen_name);

// Kodaira-Spencer matrix: rows indexed by (p-gen, q-gen) pairs in row-major
// order, columns by the ring parameters; entry = <nabla(p-gen) coefficient,
// q-gen at the closed point>.
struct KSMatrix {
  std::vector<std::pair<std::string, std::string>> row_labels;
  std::vector<std::string> col_labels;
  Matrix<Fq2> mat;
  bool invertible() const { return mat.rows() == mat.cols() && rank(mat) == mat.rows(); }
};

KSMatrix ks_matrix(const DeformedHodge& def);

// The family of V|_Q (and V|_P) in the deformed generator bases, plus the
// Hasse matrix of the family and its determinant.
struct HasseFamily {
  Matrix<SqzElem> vq;          // bases (q-gens) -> (p-gens twisted)
  Matrix<SqzElem> vp;          // bases (p-gens) -> (q-gens twisted)
  Matrix<SqzElem> hasse;       // frob(vp) * vq when square; V_P may be non-square for n > m
  SqzElem local_equation;      // det of the Hasse family (n > m: equals u up to a unit)
  SqzElem det_vq;              // det V_Q when square (n = m); zero-size guard otherwise
  bool vq_square = false;
};

HasseFamily hasse_family(const DeformedHodge& def);

// psi(eta) for a 1-form eta at the closed point: solve KS(xi) = eta, then
// project the P-leg modulo P_0 (n > m) or apply V_P at x (n = m).  The result
// is the matrix of coefficients; rows are the surviving P-directions.
struct PsiResult {
  std::vector<std::string> row_labels;
  std::vector<std::string> col_labels;   // q-gen names
  Matrix<Fq2> coeffs;
  bool is_zero() const { return coeffs.is_zero(); }
};

PsiResult psi(const DeformedHodge& def, const OneForm& eta);
PsiResult psi_of_param(const DeformedHodge& def, const std::string& param);

// Symbolic w-adic order bookkeeping for the Igusa-cover pole cancellation:
// with ord_w(a) = 1 and the psi(du) factor vanishing to order >= e, every
// term of a^k d(f/a^k) has nonnegative w-order.
struct PoleAudit {
  int weight = 0;
  int ramification = 0;                // e = p^2 - 1 or p - 1
  int min_order_first_summand = 0;     // min over r >= -k of (k + r)
  int pole_order_before_psi = 0;       // min over r of (k + r - e), a simple pole in u
  int psi_zero_order = 0;              // >= e in w
  int min_order_second_summand = 0;    // min over r (the r = 0 term drops)
  bool holomorphic = false;
};

PoleAudit pole_order_audit(int weight, int ramification);

}  // namespace mutheta
