#include "mutheta/fjexp.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace mutheta {

i64 order_discriminant_constant(i64 p) {
  for (i64 d = 1; d < p; ++d)
    if (!is_quadratic_residue(mod_reduce(-d, p), p)) return d;
  throw std::logic_error("order_discriminant_constant: none found");
}

// ------------------------------------------------------------- HermIndex

HermIndex HermIndex::integer(i64 n, i64 d) {
  return HermIndex(1, d, {QuadInt{n, 0}});
}

HermIndex::HermIndex(int m, i64 d, std::vector<QuadInt> entries)
    : m_(m), d_(d), e_(std::move(entries)) {
  if (static_cast<int>(e_.size()) != m * m)
    throw std::invalid_argument("HermIndex: entry count mismatch");
  for (int i = 0; i < m; ++i) {
    if (at(i, i).im != 0)
      throw std::invalid_argument("HermIndex: diagonal must be real");
    for (int j = 0; j < i; ++j)
      if (at(i, j) != at(j, i).conj())
        throw std::invalid_argument("HermIndex: not hermitian");
  }
}

HermIndex HermIndex::zero(int m, i64 d) {
  return HermIndex(m, d, std::vector<QuadInt>(static_cast<size_t>(m) * m));
}

i64 HermIndex::trace() const {
  i64 t = 0;
  for (int i = 0; i < m_; ++i) t += at(i, i).re;
  return t;
}

HermIndex operator+(const HermIndex& a, const HermIndex& b) {
  if (a.m_ != b.m_ || a.d_ != b.d_)
    throw std::invalid_argument("HermIndex: incompatible addition");
  std::vector<QuadInt> e(a.e_.size());
  for (size_t i = 0; i < e.size(); ++i) e[i] = a.e_[i] + b.e_[i];
  return HermIndex(a.m_, a.d_, std::move(e));
}

bool operator<(const HermIndex& a, const HermIndex& b) {
  if (a.m_ != b.m_) return a.m_ < b.m_;
  for (size_t i = 0; i < a.e_.size(); ++i) {
    if (a.e_[i].re != b.e_[i].re) return a.e_[i].re < b.e_[i].re;
    if (a.e_[i].im != b.e_[i].im) return a.e_[i].im < b.e_[i].im;
  }
  return false;
}

bool HermIndex::is_zero() const {
  for (const auto& z : e_)
    if (!z.is_zero()) return false;
  return true;
}

bool HermIndex::divisible_by(i64 k) const {
  for (const auto& z : e_)
    if (z.re % k != 0 || z.im % k != 0) return false;
  return true;
}

HermIndex HermIndex::scaled(i64 k) const {
  std::vector<QuadInt> e = e_;
  for (auto& z : e) {
    z.re *= k;
    z.im *= k;
  }
  return HermIndex(m_, d_, std::move(e));
}

i64 HermIndex::principal_minor(const std::vector<int>& rows) const {
  // determinant of the hermitian submatrix over Z[sqrt(-d)]; the result is
  // rational, hence a plain integer
  int r = static_cast<int>(rows.size());
  std::vector<QuadInt> sub(static_cast<size_t>(r) * r);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j) sub[static_cast<size_t>(i) * r + j] = at(rows[i], rows[j]);
  // cofactor expansion
  std::function<QuadInt(std::vector<QuadInt>&, int)> det = [&](std::vector<QuadInt>& m,
                                                               int n) -> QuadInt {
    if (n == 1) return m[0];
    QuadInt acc{0, 0};
    for (int j = 0; j < n; ++j) {
      if (m[static_cast<size_t>(j)].is_zero()) continue;
      std::vector<QuadInt> minor(static_cast<size_t>(n - 1) * (n - 1));
      for (int i = 1; i < n; ++i) {
        int cc = 0;
        for (int c = 0; c < n; ++c) {
          if (c == j) continue;
          minor[static_cast<size_t>(i - 1) * (n - 1) + cc++] =
              m[static_cast<size_t>(i) * n + c];
        }
      }
      QuadInt term = QuadInt::mul(m[static_cast<size_t>(j)], det(minor, n - 1), d_);
      if (j % 2 == 0)
        acc = acc + term;
      else
        acc = acc - term;
    }
    return acc;
  };
  QuadInt v = det(sub, r);
  if (v.im != 0) throw std::logic_error("HermIndex: non-real principal minor");
  return v.re;
}

bool HermIndex::in_positive_cone() const {
  if (m_ == 0) return true;
  // all principal minors >= 0 (leading minors alone do not decide
  // semidefiniteness)
  int total = 1 << m_;
  for (int mask = 1; mask < total; ++mask) {
    std::vector<int> rows;
    for (int i = 0; i < m_; ++i)
      if (mask & (1 << i)) rows.push_back(i);
    if (principal_minor(rows) < 0) return false;
  }
  return true;
}

HermIndex HermIndex::gamma_transform(const std::vector<QuadInt>& gamma) const {
  if (static_cast<int>(gamma.size()) != m_ * m_)
    throw std::invalid_argument("gamma_transform: size mismatch");
  auto g = [&](int i, int j) { return gamma[static_cast<size_t>(i) * m_ + j]; };
  // conj-transpose(gamma) * h * gamma
  std::vector<QuadInt> tmp(static_cast<size_t>(m_) * m_), out(static_cast<size_t>(m_) * m_);
  for (int i = 0; i < m_; ++i)
    for (int j = 0; j < m_; ++j) {
      QuadInt acc{0, 0};
      for (int k = 0; k < m_; ++k) acc = acc + QuadInt::mul(at(i, k), g(k, j), d_);
      tmp[static_cast<size_t>(i) * m_ + j] = acc;
    }
  for (int i = 0; i < m_; ++i)
    for (int j = 0; j < m_; ++j) {
      QuadInt acc{0, 0};
      for (int k = 0; k < m_; ++k)
        acc = acc + QuadInt::mul(g(k, i).conj(), tmp[static_cast<size_t>(k) * m_ + j], d_);
      out[static_cast<size_t>(i) * m_ + j] = acc;
    }
  return HermIndex(m_, d_, std::move(out));
}

std::string HermIndex::key() const {
  if (m_ == 1) return std::to_string(at(0, 0).re);
  // row-major upper triangle: diagonal as one integer, off-diagonals as re,im
  std::ostringstream os;
  bool first = true;
  for (int i = 0; i < m_; ++i)
    for (int j = i; j < m_; ++j) {
      if (!first) os << ",";
      first = false;
      if (i == j)
        os << at(i, j).re;
      else
        os << at(i, j).re << "," << at(i, j).im;
    }
  return os.str();
}

HermIndex HermIndex::from_key(const std::string& key, int m, i64 d) {
  std::vector<i64> nums;
  std::istringstream is(key);
  std::string tok;
  while (std::getline(is, tok, ',')) nums.push_back(std::stoll(tok));
  if (m == 1) {
    if (nums.size() != 1) throw std::invalid_argument("HermIndex: bad key");
    return integer(nums[0], d);
  }
  std::vector<QuadInt> e(static_cast<size_t>(m) * m);
  size_t at_pos = 0;
  auto next = [&]() {
    if (at_pos >= nums.size()) throw std::invalid_argument("HermIndex: bad key");
    return nums[at_pos++];
  };
  for (int i = 0; i < m; ++i)
    for (int j = i; j < m; ++j) {
      if (i == j) {
        e[static_cast<size_t>(i) * m + j] = QuadInt{next(), 0};
      } else {
        i64 re = next(), im = next();
        e[static_cast<size_t>(i) * m + j] = QuadInt{re, im};
        e[static_cast<size_t>(j) * m + i] = QuadInt{re, -im};
      }
    }
  if (at_pos != nums.size()) throw std::invalid_argument("HermIndex: bad key");
  return HermIndex(m, d, std::move(e));
}

// ------------------------------------------------------------- reduction

WittElem order_root_image(i64 p, i64 s) {
  i64 d = order_discriminant_constant(p);
  i64 c = quadext_modulus_constant(p);
  i64 q = 1;
  for (i64 i = 0; i < s; ++i) q *= p;
  // smallest b >= 1 with b^2 c = -d mod p^s; exists since -d/c is a residue
  for (i64 b = 1; b < q; ++b)
    if (mod_reduce(b * b % q * (c % q) % q + d, q) == 0) return WittElem(p, s, 0, b);
  throw std::logic_error("order_root_image: no root found");
}

WittElem reduce_quadint(const QuadInt& z, i64 p, i64 s) {
  WittElem root = order_root_image(p, s);
  WittElem re(p, s, z.re, 0), im(p, s, z.im, 0);
  return re + im * root;
}

// ------------------------------------------------------------ FJExpansion

void FJExpansion::set_term(const HermIndex& h, std::vector<WittElem> coeff) {
  if (h.m() != m) throw std::invalid_argument("FJExpansion: index size mismatch");
  if (static_cast<int>(coeff.size()) != coeff_rank)
    throw std::invalid_argument("FJExpansion: coefficient rank mismatch");
  if (!h.in_positive_cone())
    throw std::invalid_argument("FJExpansion: index outside the positive cone");
  if (h.trace() > trunc)
    throw std::invalid_argument("FJExpansion: index beyond truncation");
  bool zero = std::all_of(coeff.begin(), coeff.end(),
                          [](const WittElem& c) { return c.is_zero(); });
  if (zero)
    terms.erase(h);
  else
    terms[h] = std::move(coeff);
}

std::vector<WittElem> FJExpansion::term(const HermIndex& h) const {
  auto it = terms.find(h);
  if (it != terms.end()) return it->second;
  return std::vector<WittElem>(coeff_rank, ring_zero());
}

FJExpansion fj_zero(i64 p, i64 s, int m, i64 trunc, int coeff_rank) {
  FJExpansion f;
  f.p = p;
  f.s = s;
  f.m = m;
  f.trunc = trunc;
  f.coeff_rank = coeff_rank;
  return f;
}

FJExpansion theta(const FJExpansion& f) {
  FJExpansion out = fj_zero(f.p, f.s, f.m, f.trunc, f.coeff_rank * f.m * f.m);
  for (const auto& [h, a] : f.terms) {
    std::vector<WittElem> block(static_cast<size_t>(out.coeff_rank), out.ring_zero());
    for (int r = 0; r < f.coeff_rank; ++r)
      for (int j = 0; j < f.m; ++j)
        for (int k = 0; k < f.m; ++k)
          block[static_cast<size_t>(r) * f.m * f.m + j * f.m + k] =
              a[r] * reduce_quadint(h.at(j, k), f.p, f.s);
    out.set_term(h, std::move(block));
  }
  if (f.weight) out.weight = theta_weight_tag(*f.weight);
  return out;
}

FJExpansion theta_iterate(const FJExpansion& f, int e) {
  if (e < 0) throw std::invalid_argument("theta_iterate: negative exponent");
  FJExpansion out = f;
  for (int i = 0; i < e; ++i) out = theta(out);
  return out;
}

bool is_in_theta_kernel(const FJExpansion& f) {
  for (const auto& [h, a] : f.terms)
    if (!h.divisible_by(f.p)) return false;
  return true;
}

FJExpansion hasse_expansion(i64 p, i64 s, int m, i64 trunc) {
  FJExpansion f = fj_zero(p, s, m, trunc, 1);
  i64 d = order_discriminant_constant(p);
  f.set_term(HermIndex::zero(m, d), {f.ring_one()});
  f.weight = ThetaWeightTag{WeightTriple::scalar(p * p - 1, m, 0), 0};
  return f;
}

FJExpansion hasse_mult(const FJExpansion& f) {
  FJExpansion out = f;
  i64 shift = f.p * f.p - 1;
  if (out.weight) {
    for (auto& e : out.weight->base.a.entries) e += shift;
  } else {
    out.weight = ThetaWeightTag{WeightTriple::scalar(shift, f.m, 0), 0};
  }
  return out;
}

FJExpansion multiply(const FJExpansion& f, const FJExpansion& g) {
  if (f.coeff_rank != 1 || g.coeff_rank != 1)
    throw std::invalid_argument("multiply: scalar expansions only");
  if (f.p != g.p || f.s != g.s || f.m != g.m)
    throw std::invalid_argument("multiply: incompatible expansions");
  FJExpansion out = fj_zero(f.p, f.s, f.m, std::min(f.trunc, g.trunc), 1);
  for (const auto& [h1, a] : f.terms)
    for (const auto& [h2, b] : g.terms) {
      HermIndex h = h1 + h2;
      if (h.trace() > out.trunc) continue;
      std::vector<WittElem> c = out.term(h);
      c[0] += a[0] * b[0];
      out.set_term(h, std::move(c));
    }
  if (f.weight && g.weight && f.weight->theta_applications == 0 &&
      g.weight->theta_applications == 0)
    out.weight = ThetaWeightTag{f.weight->base.plus(g.weight->base), 0};
  return out;
}

FJExpansion add(const FJExpansion& f, const FJExpansion& g) {
  if (f.p != g.p || f.s != g.s || f.m != g.m || f.coeff_rank != g.coeff_rank)
    throw std::invalid_argument("add: incompatible expansions");
  FJExpansion out = fj_zero(f.p, f.s, f.m, std::min(f.trunc, g.trunc), f.coeff_rank);
  for (const auto& [h, a] : f.terms)
    if (h.trace() <= out.trunc) out.set_term(h, a);
  for (const auto& [h, b] : g.terms) {
    if (h.trace() > out.trunc) continue;
    std::vector<WittElem> c = out.term(h);
    for (int r = 0; r < out.coeff_rank; ++r) c[r] += b[r];
    out.set_term(h, std::move(c));
  }
  out.weight = f.weight;
  return out;
}

FJExpansion scale(const WittElem& c, const FJExpansion& f) {
  FJExpansion out = fj_zero(f.p, f.s, f.m, f.trunc, f.coeff_rank);
  for (const auto& [h, a] : f.terms) {
    std::vector<WittElem> b = a;
    for (auto& x : b) x = c * x;
    out.set_term(h, std::move(b));
  }
  out.weight = f.weight;
  return out;
}

// --------------------------------------------------------------- gamma act

bool gamma_invertible_mod_p(const std::vector<QuadInt>& gamma, int m, i64 p) {
  Fq2 w = Fq2::from_int(p, 0);
  Matrix<Fq2> g = Matrix<Fq2>::zeros(m, m, w);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      WittElem r = reduce_quadint(gamma[static_cast<size_t>(i) * m + j], p, 1);
      g(i, j) = r.reduce_mod_p();
    }
  return rank(g) == m;
}

std::vector<QuadInt> gamma_multiply(const std::vector<QuadInt>& a,
                                    const std::vector<QuadInt>& b, int m, i64 d) {
  std::vector<QuadInt> out(static_cast<size_t>(m) * m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      QuadInt acc{0, 0};
      for (int k = 0; k < m; ++k)
        acc = acc + QuadInt::mul(a[static_cast<size_t>(i) * m + k],
                                 b[static_cast<size_t>(k) * m + j], d);
      out[static_cast<size_t>(i) * m + j] = acc;
    }
  return out;
}

namespace {

// Transform every m^2 tensor leg of a theta-image block by
// B -> conj-transpose(G) * B * G with G the reduced gamma.
std::vector<WittElem> transform_block(const std::vector<WittElem>& block, int legs, int m,
                                      const Matrix<WittElem>& g,
                                      const Matrix<WittElem>& g_conj_t) {
  std::vector<WittElem> cur = block;
  int mm = m * m;
  int total = static_cast<int>(block.size());
  for (int leg = 0; leg < legs; ++leg) {
    // the leg-th m^2 factor from the right: shape (outer, m^2, inner)
    int inner = 1;
    for (int t = 0; t < leg; ++t) inner *= mm;
    int outer = total / (mm * inner);
    std::vector<WittElem> next(cur.size(), block.empty() ? WittElem() : block[0].zero_like());
    for (int o = 0; o < outer; ++o)
      for (int in = 0; in < inner; ++in) {
        // extract B, transform, write back
        Matrix<WittElem> B = Matrix<WittElem>::zeros(m, m, g(0, 0).zero_like());
        for (int j = 0; j < m; ++j)
          for (int k = 0; k < m; ++k)
            B(j, k) = cur[(static_cast<size_t>(o) * mm + j * m + k) * inner + in];
        Matrix<WittElem> Bt = g_conj_t * B * g;
        for (int j = 0; j < m; ++j)
          for (int k = 0; k < m; ++k)
            next[(static_cast<size_t>(o) * mm + j * m + k) * inner + in] = Bt(j, k);
      }
    cur = std::move(next);
  }
  return cur;
}

}  // namespace

FJExpansion gamma_act(const std::vector<QuadInt>& gamma, const FJExpansion& f) {
  if (static_cast<int>(gamma.size()) != f.m * f.m)
    throw std::invalid_argument("gamma_act: size mismatch");
  if (!gamma_invertible_mod_p(gamma, f.m, f.p))
    throw std::invalid_argument("gamma_act: gamma singular mod p");

  int legs = f.weight ? f.weight->theta_applications : 0;
  WittElem w(f.p, f.s, 0, 0);
  Matrix<WittElem> g = Matrix<WittElem>::zeros(f.m, f.m, w);
  Matrix<WittElem> gct = Matrix<WittElem>::zeros(f.m, f.m, w);
  for (int i = 0; i < f.m; ++i)
    for (int j = 0; j < f.m; ++j) {
      g(i, j) = reduce_quadint(gamma[static_cast<size_t>(i) * f.m + j], f.p, f.s);
      gct(i, j) = reduce_quadint(gamma[static_cast<size_t>(j) * f.m + i].conj(), f.p, f.s);
    }

  // congruence can raise traces; the window widens so the action stays exact
  i64 bound = f.trunc;
  std::vector<std::pair<HermIndex, const std::vector<WittElem>*>> moved;
  for (const auto& [h, a] : f.terms) {
    HermIndex h2 = h.gamma_transform(gamma);
    bound = std::max(bound, h2.trace());
    moved.emplace_back(std::move(h2), &a);
  }
  FJExpansion out = fj_zero(f.p, f.s, f.m, bound, f.coeff_rank);
  out.weight = f.weight;
  for (auto& [h2, a] : moved) {
    std::vector<WittElem> coeff =
        (legs > 0) ? transform_block(*a, legs, f.m, g, gct) : *a;
    std::vector<WittElem> acc = out.term(h2);
    for (int r = 0; r < out.coeff_rank; ++r) acc[r] += coeff[r];
    out.set_term(h2, std::move(acc));
  }
  return out;
}

// -------------------------------------------------------------- theta cycle

CycleReport cycle_report(i64 k0, int i0, i64 p) {
  if (i0 < 0 || i0 >= static_cast<int>(p) - 1)
    throw std::invalid_argument("cycle_report: drop position out of range");
  CycleReport rep;
  rep.p = p;
  rep.k0 = k0;
  rep.i0 = i0;
  rep.weights.push_back(k0);
  for (int i = 0; i + 1 < static_cast<int>(p); ++i) {
    i64 prev = rep.weights.back();
    i64 next = (i == i0) ? prev - (p * p - p - 2) : prev + (p + 1);
    rep.weights.push_back(next);
  }
  rep.closes = (rep.weights.back() == k0);
  rep.congruent = cycle_sequence_valid(rep.weights, k0, p);
  return rep;
}

bool cycle_sequence_valid(const std::vector<i64>& weights, i64 k0, i64 p) {
  i64 mod = p * p - 1;
  for (size_t i = 0; i < weights.size(); ++i)
    if (mod_reduce(weights[i] - k0 - static_cast<i64>(i) * (p + 1), mod) != 0)
      return false;
  return true;
}

// ------------------------------------------------------------------ random

FJExpansion random_expansion(i64 p, i64 s, int m, i64 trunc, std::mt19937_64& rng,
                             int max_terms) {
  FJExpansion f = fj_zero(p, s, m, trunc, 1);
  i64 d = order_discriminant_constant(p);
  i64 q = 1;
  for (i64 i = 0; i < s; ++i) q *= p;
  std::uniform_int_distribution<i64> coeff(0, q - 1);
  std::uniform_int_distribution<int> count(1, max_terms);
  int terms = count(rng);
  if (m == 1) {
    std::uniform_int_distribution<i64> idx(0, trunc);
    for (int t = 0; t < terms; ++t) {
      HermIndex h = HermIndex::integer(idx(rng), d);
      f.set_term(h, {WittElem(p, s, coeff(rng), coeff(rng))});
    }
  } else {
    std::uniform_int_distribution<i64> small(-2, 2);
    std::uniform_int_distribution<i64> diag(0, std::max<i64>(1, trunc / m));
    int placed = 0, attempts = 0;
    while (placed < terms && attempts < 200) {
      ++attempts;
      std::vector<QuadInt> e(static_cast<size_t>(m) * m);
      for (int i = 0; i < m; ++i) {
        e[static_cast<size_t>(i) * m + i] = QuadInt{diag(rng), 0};
        for (int j = i + 1; j < m; ++j) {
          QuadInt z{small(rng), small(rng)};
          e[static_cast<size_t>(i) * m + j] = z;
          e[static_cast<size_t>(j) * m + i] = z.conj();
        }
      }
      HermIndex h(m, d, std::move(e));
      if (!h.in_positive_cone() || h.trace() > trunc) continue;
      f.set_term(h, {WittElem(p, s, coeff(rng), coeff(rng))});
      ++placed;
    }
  }
  return f;
}

}  // namespace mutheta
