#pragma once

// Exact base rings: F_p, the inert quadratic extension F_{p^2} with its
// Frobenius, truncated Witt rings W_s(F_{p^2}) modeled as unramified
// quadratic extensions of Z/p^s, and square-zero parameter extensions
// k[t_1..t_N]/(t_i t_j) used for first-order deformations.

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace mutheta {

using i64 = long long;

inline i64 mod_reduce(i64 x, i64 m) {
  i64 r = x % m;
  return r < 0 ? r + m : r;
}

inline i64 mod_pow(i64 base, i64 exp, i64 m) {
  base = mod_reduce(base, m);
  i64 r = 1 % m;
  while (exp > 0) {
    if (exp & 1) r = r * base % m;
    base = base * base % m;
    exp >>= 1;
  }
  return r;
}

// Extended Euclid; m need not be prime (used for units of Z/p^s).
inline i64 mod_inverse(i64 a, i64 m) {
  a = mod_reduce(a, m);
  i64 old_r = a, r = m, old_t = 1, t = 0;
  while (r != 0) {
    i64 q = old_r / r;
    i64 tmp = old_r - q * r;
    old_r = r;
    r = tmp;
    tmp = old_t - q * t;
    old_t = t;
    t = tmp;
  }
  if (old_r != 1) throw std::domain_error("mod_inverse: not a unit");
  return mod_reduce(old_t, m);
}

inline bool is_prime(i64 n) {
  if (n < 2) return false;
  for (i64 d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

inline bool is_quadratic_residue(i64 a, i64 p) {
  a = mod_reduce(a, p);
  if (a == 0) return true;
  return mod_pow(a, (p - 1) / 2, p) == 1;
}

// Smallest c >= 2 with x^2 - c irreducible mod p, i.e. c a non-residue.
// Fixed deterministically so serialized data is reproducible.
inline i64 quadext_modulus_constant(i64 p) {
  if (p < 3 || p % 2 == 0 || !is_prime(p))
    throw std::invalid_argument("quadext: p must be an odd prime");
  for (i64 c = 2; c < p; ++c)
    if (!is_quadratic_residue(c, p)) return c;
  throw std::logic_error("quadext: no non-residue found");
}

// An element a + b x of F_{p^2} = F_p[x]/(x^2 - c).
class Fq2 {
 public:
  Fq2() : p_(0), c_(0), a_(0), b_(0) {}
  Fq2(i64 p, i64 a, i64 b)
      : p_(p), c_(quadext_modulus_constant(p)), a_(mod_reduce(a, p)), b_(mod_reduce(b, p)) {}
  static Fq2 from_int(i64 p, i64 a) { return Fq2(p, a, 0); }

  i64 p() const { return p_; }
  i64 modulus_constant() const { return c_; }
  i64 a() const { return a_; }
  i64 b() const { return b_; }

  bool is_zero() const { return a_ == 0 && b_ == 0; }
  bool is_unit() const { return !is_zero(); }
  bool in_prime_field() const { return b_ == 0; }

  Fq2 zero_like() const { return Fq2(p_, 0, 0); }
  Fq2 one_like() const { return Fq2(p_, 1, 0); }

  friend Fq2 operator+(const Fq2& x, const Fq2& y) {
    x.check(y);
    return Fq2(x.p_, x.a_ + y.a_, x.b_ + y.b_);
  }
  friend Fq2 operator-(const Fq2& x, const Fq2& y) {
    x.check(y);
    return Fq2(x.p_, x.a_ - y.a_, x.b_ - y.b_);
  }
  friend Fq2 operator*(const Fq2& x, const Fq2& y) {
    x.check(y);
    // (a + bx)(a' + b'x) = aa' + c bb' + (ab' + a'b) x
    return Fq2(x.p_, x.a_ * y.a_ + x.c_ % x.p_ * x.b_ % x.p_ * y.b_,
               x.a_ * y.b_ + y.a_ * x.b_);
  }
  Fq2 operator-() const { return Fq2(p_, -a_, -b_); }
  Fq2& operator+=(const Fq2& y) { return *this = *this + y; }
  Fq2& operator-=(const Fq2& y) { return *this = *this - y; }
  Fq2& operator*=(const Fq2& y) { return *this = *this * y; }

  friend bool operator==(const Fq2& x, const Fq2& y) {
    return x.p_ == y.p_ && x.a_ == y.a_ && x.b_ == y.b_;
  }
  friend bool operator!=(const Fq2& x, const Fq2& y) { return !(x == y); }

  // x^p = -x since c is a non-residue, so the p-power map is (a,b) -> (a,-b).
  Fq2 frobenius() const { return Fq2(p_, a_, -b_); }

  Fq2 inverse() const {
    if (is_zero()) throw std::domain_error("Fq2: inverse of zero");
    // (a + bx)^{-1} = (a - bx) / (a^2 - c b^2); the norm is nonzero for c a non-residue.
    i64 n = mod_reduce(a_ * a_ - c_ % p_ * b_ % p_ * b_, p_);
    i64 ninv = mod_inverse(n, p_);
    return Fq2(p_, a_ * ninv, -b_ * ninv);
  }

  Fq2 pow(i64 e) const {
    if (e < 0) return inverse().pow(-e);
    Fq2 r = one_like(), base = *this;
    while (e > 0) {
      if (e & 1) r = r * base;
      base = base * base;
      e >>= 1;
    }
    return r;
  }

  std::string str() const {
    if (b_ == 0) return std::to_string(a_);
    return std::to_string(a_) + "+" + std::to_string(b_) + "x";
  }

 private:
  void check(const Fq2& y) const {
    if (p_ != y.p_) throw std::invalid_argument("Fq2: mixed characteristics");
  }
  i64 p_, c_, a_, b_;
};

inline Fq2 frobenius(const Fq2& x) { return x.frobenius(); }
inline Fq2 frobenius_n(const Fq2& x, int n) {
  // order 2 automorphism
  return (n % 2 == 0) ? x : x.frobenius();
}

// An element a + b x of W_s(F_{p^2}) = (Z/p^s)[x]/(x^2 - c).  The ring has
// p^{2s} elements; an element is a unit iff its mod-p reduction is nonzero.
class WittElem {
 public:
  WittElem() : p_(0), s_(0), q_(0), c_(0), a_(0), b_(0) {}
  WittElem(i64 p, i64 s, i64 a, i64 b)
      : p_(p), s_(s), q_(ipow(p, s)), c_(quadext_modulus_constant(p)),
        a_(mod_reduce(a, q_)), b_(mod_reduce(b, q_)) {
    if (s < 1) throw std::invalid_argument("WittElem: length s must be >= 1");
  }

  i64 p() const { return p_; }
  i64 s() const { return s_; }
  i64 q() const { return q_; }
  i64 a() const { return a_; }
  i64 b() const { return b_; }

  bool is_zero() const { return a_ == 0 && b_ == 0; }
  bool is_unit() const { return a_ % p_ != 0 || b_ % p_ != 0; }

  WittElem zero_like() const { return WittElem(p_, s_, 0, 0); }
  WittElem one_like() const { return WittElem(p_, s_, 1, 0); }

  Fq2 reduce_mod_p() const { return Fq2(p_, a_ % p_, b_ % p_); }
  static WittElem lift(const Fq2& x, i64 s) { return WittElem(x.p(), s, x.a(), x.b()); }

  friend WittElem operator+(const WittElem& x, const WittElem& y) {
    x.check(y);
    return WittElem(x.p_, x.s_, x.a_ + y.a_, x.b_ + y.b_);
  }
  friend WittElem operator-(const WittElem& x, const WittElem& y) {
    x.check(y);
    return WittElem(x.p_, x.s_, x.a_ - y.a_, x.b_ - y.b_);
  }
  friend WittElem operator*(const WittElem& x, const WittElem& y) {
    x.check(y);
    i64 q = x.q_;
    i64 aa = x.a_ * y.a_ % q, bb = x.b_ * y.b_ % q;
    i64 cross = (x.a_ * y.b_ % q + x.b_ * y.a_ % q) % q;
    return WittElem(x.p_, x.s_, aa + x.c_ % q * bb % q, cross);
  }
  WittElem operator-() const { return WittElem(p_, s_, -a_, -b_); }
  WittElem& operator+=(const WittElem& y) { return *this = *this + y; }
  WittElem& operator-=(const WittElem& y) { return *this = *this - y; }
  WittElem& operator*=(const WittElem& y) { return *this = *this * y; }

  friend bool operator==(const WittElem& x, const WittElem& y) {
    return x.p_ == y.p_ && x.s_ == y.s_ && x.a_ == y.a_ && x.b_ == y.b_;
  }
  friend bool operator!=(const WittElem& x, const WittElem& y) { return !(x == y); }

  // Canonical Frobenius lift: x -> -x is the unique ring automorphism of the
  // unramified quadratic extension reducing to the p-power map mod p.
  WittElem frobenius() const { return WittElem(p_, s_, a_, -b_); }

  WittElem inverse() const {
    if (!is_unit()) throw std::domain_error("WittElem: inverse of a non-unit");
    i64 n = mod_reduce(a_ * a_ - c_ % q_ * b_ % q_ * b_ % q_, q_);
    i64 ninv = mod_inverse(n, q_);
    return WittElem(p_, s_, a_ * ninv, -b_ * ninv);
  }

 private:
  static i64 ipow(i64 p, i64 s) {
    i64 r = 1;
    for (i64 i = 0; i < s; ++i) r *= p;
    return r;
  }
  void check(const WittElem& y) const {
    if (p_ != y.p_ || s_ != y.s_) throw std::invalid_argument("WittElem: mixed rings");
  }
  i64 p_, s_, q_, c_, a_, b_;
};

inline WittElem frobenius(const WittElem& x) { return x.frobenius(); }

// Named-parameter context of a square-zero extension k[t_1..t_N]/(t_i t_j),
// k = F_{p^2}.  Shared by all elements of the same ring.
struct SqzContext {
  i64 p;
  std::vector<std::string> params;

  int index_of(const std::string& name) const {
    for (size_t i = 0; i < params.size(); ++i)
      if (params[i] == name) return static_cast<int>(i);
    throw std::invalid_argument("SqzContext: unknown parameter " + name);
  }
};

using SqzCtxPtr = std::shared_ptr<const SqzContext>;

inline SqzCtxPtr make_sqz_context(i64 p, std::vector<std::string> params) {
  return std::make_shared<const SqzContext>(SqzContext{p, std::move(params)});
}

// A formal 1-form sum c_alpha dt_alpha with coefficients in F_{p^2}.
struct OneForm {
  SqzCtxPtr ctx;
  std::vector<Fq2> coeffs;  // indexed like ctx->params

  bool is_zero() const {
    for (const auto& c : coeffs)
      if (!c.is_zero()) return false;
    return true;
  }
  friend OneForm operator+(const OneForm& x, const OneForm& y) {
    OneForm r = x;
    for (size_t i = 0; i < r.coeffs.size(); ++i) r.coeffs[i] += y.coeffs[i];
    return r;
  }
  friend bool operator==(const OneForm& x, const OneForm& y) {
    return x.coeffs == y.coeffs;
  }
};

// c0 + sum c_alpha t_alpha with the square-zero relation t_alpha t_beta = 0.
// Unit iff the constant term is nonzero; the ring is local.
class SqzElem {
 public:
  SqzElem() = default;
  explicit SqzElem(SqzCtxPtr ctx)
      : ctx_(std::move(ctx)), c0_(Fq2(ctx_->p, 0, 0)),
        lin_(ctx_->params.size(), Fq2(ctx_->p, 0, 0)) {}
  SqzElem(SqzCtxPtr ctx, Fq2 c0, std::vector<Fq2> lin)
      : ctx_(std::move(ctx)), c0_(c0), lin_(std::move(lin)) {
    if (lin_.size() != ctx_->params.size())
      throw std::invalid_argument("SqzElem: parameter count mismatch");
  }

  static SqzElem constant(const SqzCtxPtr& ctx, Fq2 c) {
    SqzElem r(ctx);
    r.c0_ = c;
    return r;
  }
  static SqzElem constant(const SqzCtxPtr& ctx, i64 c) {
    return constant(ctx, Fq2::from_int(ctx->p, c));
  }
  static SqzElem parameter(const SqzCtxPtr& ctx, const std::string& name) {
    SqzElem r(ctx);
    r.lin_[ctx->index_of(name)] = Fq2::from_int(ctx->p, 1);
    return r;
  }

  const SqzCtxPtr& ctx() const { return ctx_; }
  const Fq2& constant_term() const { return c0_; }
  const std::vector<Fq2>& linear_part() const { return lin_; }
  Fq2 linear_coeff(const std::string& name) const { return lin_[ctx_->index_of(name)]; }

  bool is_zero() const {
    if (!c0_.is_zero()) return false;
    for (const auto& c : lin_)
      if (!c.is_zero()) return false;
    return true;
  }
  bool is_unit() const { return !c0_.is_zero(); }

  SqzElem zero_like() const { return SqzElem(ctx_); }
  SqzElem one_like() const { return constant(ctx_, 1); }

  friend SqzElem operator+(const SqzElem& x, const SqzElem& y) {
    x.check(y);
    SqzElem r = x;
    r.c0_ += y.c0_;
    for (size_t i = 0; i < r.lin_.size(); ++i) r.lin_[i] += y.lin_[i];
    return r;
  }
  friend SqzElem operator-(const SqzElem& x, const SqzElem& y) {
    x.check(y);
    SqzElem r = x;
    r.c0_ -= y.c0_;
    for (size_t i = 0; i < r.lin_.size(); ++i) r.lin_[i] -= y.lin_[i];
    return r;
  }
  friend SqzElem operator*(const SqzElem& x, const SqzElem& y) {
    x.check(y);
    // (c + v)(c' + v') = cc' + c v' + c' v, the v v' term dying in m^2.
    SqzElem r(x.ctx_);
    r.c0_ = x.c0_ * y.c0_;
    for (size_t i = 0; i < r.lin_.size(); ++i)
      r.lin_[i] = x.c0_ * y.lin_[i] + y.c0_ * x.lin_[i];
    return r;
  }
  SqzElem operator-() const {
    SqzElem r = *this;
    r.c0_ = -r.c0_;
    for (auto& c : r.lin_) c = -c;
    return r;
  }
  SqzElem& operator+=(const SqzElem& y) { return *this = *this + y; }
  SqzElem& operator-=(const SqzElem& y) { return *this = *this - y; }
  SqzElem& operator*=(const SqzElem& y) { return *this = *this * y; }

  friend bool operator==(const SqzElem& x, const SqzElem& y) {
    return x.c0_ == y.c0_ && x.lin_ == y.lin_;
  }
  friend bool operator!=(const SqzElem& x, const SqzElem& y) { return !(x == y); }

  // (c + v)^p = c^p in characteristic p with v in a square-zero ideal.
  SqzElem frobenius() const { return constant(ctx_, c0_.frobenius()); }

  SqzElem inverse() const {
    if (!is_unit()) throw std::domain_error("SqzElem: inverse of a non-unit");
    // (c + v)^{-1} = c^{-1} - c^{-2} v
    Fq2 ci = c0_.inverse();
    SqzElem r(ctx_);
    r.c0_ = ci;
    Fq2 ci2 = ci * ci;
    for (size_t i = 0; i < lin_.size(); ++i) r.lin_[i] = -(ci2 * lin_[i]);
    return r;
  }

  SqzElem pow(i64 e) const {
    SqzElem r = one_like(), base = *this;
    while (e > 0) {
      if (e & 1) r = r * base;
      base = base * base;
      e >>= 1;
    }
    return r;
  }

  // The canonical derivation: constants to 0, t_alpha to dt_alpha.
  OneForm d() const { return OneForm{ctx_, lin_}; }

  std::string str() const {
    std::string out;
    if (!c0_.is_zero()) out = c0_.str();
    for (size_t i = 0; i < lin_.size(); ++i) {
      if (lin_[i].is_zero()) continue;
      if (!out.empty()) out += " + ";
      if (lin_[i] == lin_[i].one_like())
        out += ctx_->params[i];
      else
        out += "(" + lin_[i].str() + ")*" + ctx_->params[i];
    }
    return out.empty() ? "0" : out;
  }

 private:
  void check(const SqzElem& y) const {
    if (ctx_.get() != y.ctx_.get()) throw std::invalid_argument("SqzElem: mixed rings");
  }
  SqzCtxPtr ctx_;
  Fq2 c0_;
  std::vector<Fq2> lin_;
};

inline SqzElem frobenius(const SqzElem& x) { return x.frobenius(); }
inline OneForm d(const SqzElem& x) { return x.d(); }

}  // namespace mutheta
