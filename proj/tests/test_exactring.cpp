#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "mutheta/exactring.hpp"

using namespace mutheta;

namespace {

Fq2 random_fq2(i64 p, std::mt19937_64& rng) {
  std::uniform_int_distribution<i64> d(0, p - 1);
  return Fq2(p, d(rng), d(rng));
}

WittElem random_witt(i64 p, i64 s, std::mt19937_64& rng) {
  i64 q = 1;
  for (i64 i = 0; i < s; ++i) q *= p;
  std::uniform_int_distribution<i64> d(0, q - 1);
  return WittElem(p, s, d(rng), d(rng));
}

}  // namespace

TEST_CASE("modulus constant is the smallest non-residue") {
  CHECK(quadext_modulus_constant(3) == 2);  // x^2 - 2 = x^2 + 1 mod 3
  CHECK(quadext_modulus_constant(5) == 2);
  CHECK(quadext_modulus_constant(7) == 3);
  CHECK(quadext_modulus_constant(11) == 2);
  CHECK_THROWS_AS(quadext_modulus_constant(4), std::invalid_argument);
  CHECK_THROWS_AS(quadext_modulus_constant(2), std::invalid_argument);
}

TEST_CASE("field axioms for F_{p^2}, randomized") {
  std::mt19937_64 rng(42);
  for (i64 p : {3, 5, 7, 11}) {
    for (int t = 0; t < 60; ++t) {
      Fq2 x = random_fq2(p, rng), y = random_fq2(p, rng), z = random_fq2(p, rng);
      CHECK((x + y) + z == x + (y + z));
      CHECK((x * y) * z == x * (y * z));
      CHECK(x * (y + z) == x * y + x * z);
      CHECK(x + y == y + x);
      CHECK(x * y == y * x);
      if (!x.is_zero()) CHECK(x * x.inverse() == x.one_like());
    }
    // count: every nonzero element is invertible
    for (i64 a = 0; a < p; ++a)
      for (i64 b = 0; b < p; ++b) {
        Fq2 x(p, a, b);
        if (x.is_zero()) continue;
        CHECK(x * x.inverse() == x.one_like());
      }
  }
}

TEST_CASE("frobenius on F_9: i maps to -i") {
  // p = 3, modulus x^2 + 1; i is the class of x
  Fq2 i(3, 0, 1);
  // independent oracle: direct exponentiation i^3
  Fq2 i_cubed = i * i * i;
  CHECK(i_cubed == -i);
  CHECK(i.frobenius() == i_cubed);
  CHECK(i.frobenius() == Fq2(3, 0, 2));  // frozen: -i = (0,2)
}

TEST_CASE("frobenius fixes the prime field and has order two") {
  std::mt19937_64 rng(7);
  for (i64 p : {3, 5, 7}) {
    for (i64 a = 0; a < p; ++a) {
      Fq2 x = Fq2::from_int(p, a);
      CHECK(x.frobenius() == x);
    }
    for (int t = 0; t < 50; ++t) {
      Fq2 x = random_fq2(p, rng);
      CHECK(x.frobenius().frobenius() == x);
    }
    // frobenius agrees with the p-power map and is a ring homomorphism
    for (int t = 0; t < 50; ++t) {
      Fq2 x = random_fq2(p, rng), y = random_fq2(p, rng);
      CHECK(x.frobenius() == x.pow(p));
      CHECK((x + y).frobenius() == x.frobenius() + y.frobenius());
      CHECK((x * y).frobenius() == x.frobenius() * y.frobenius());
    }
    // order exactly 2: some element is moved
    bool moved = false;
    for (i64 b = 1; b < p && !moved; ++b) moved = Fq2(p, 0, b).frobenius() != Fq2(p, 0, b);
    CHECK(moved);
  }
}

TEST_CASE("truncated Witt ring axioms and unit criterion") {
  std::mt19937_64 rng(11);
  for (i64 p : {3, 5, 7, 11}) {
    for (i64 s : {1, 2, 3}) {
      for (int t = 0; t < 40; ++t) {
        WittElem x = random_witt(p, s, rng), y = random_witt(p, s, rng),
                 z = random_witt(p, s, rng);
        CHECK((x + y) * z == x * z + y * z);
        CHECK((x * y) * z == x * (y * z));
        CHECK(x * y == y * x);
        // unit iff mod-p reduction nonzero
        CHECK(x.is_unit() == !x.reduce_mod_p().is_zero());
        if (x.is_unit()) CHECK(x * x.inverse() == x.one_like());
        // frobenius is a ring homomorphism reducing to the p-power map
        CHECK((x * y).frobenius() == x.frobenius() * y.frobenius());
        CHECK((x + y).frobenius() == x.frobenius() + y.frobenius());
        CHECK(x.frobenius().reduce_mod_p() == x.reduce_mod_p().pow(p));
      }
      // reduction mod p surjects onto F_{p^2}
      for (i64 a = 0; a < p; ++a)
        for (i64 b = 0; b < p; ++b)
          CHECK(WittElem(p, s, a, b).reduce_mod_p() == Fq2(p, a, b));
    }
    // p^{2s} elements: spot-check distinctness of representatives for s=2
    WittElem u(p, 2, 1, 0), v(p, 2, 1 + p, 0);
    CHECK(u != v);
    CHECK(u.reduce_mod_p() == v.reduce_mod_p());
  }
}

TEST_CASE("non-units of W_s are the multiples of p") {
  WittElem x(5, 2, 5, 10);
  CHECK(!x.is_unit());
  CHECK_THROWS_AS(x.inverse(), std::domain_error);
  CHECK(WittElem(5, 2, 5, 1).is_unit());
}

TEST_CASE("square-zero ring arithmetic and the derivation") {
  auto ctx = make_sqz_context(5, {"u", "u1"});
  SqzElem u = SqzElem::parameter(ctx, "u");
  SqzElem u1 = SqzElem::parameter(ctx, "u1");
  SqzElem five = SqzElem::constant(ctx, 5);
  SqzElem two = SqzElem::constant(ctx, 2);

  // parameters square to zero
  CHECK((u * u).is_zero());
  CHECK((u * u1).is_zero());

  // d(5) = 0
  CHECK(five.d().is_zero());
  // d(u + 2 u1) = du + 2 du1
  OneForm df = (u + two * u1).d();
  CHECK(df.coeffs[0] == Fq2::from_int(5, 1));
  CHECK(df.coeffs[1] == Fq2::from_int(5, 2));
  // d(u * u1) = 0 in the square-zero ideal
  CHECK((u * u1).d().is_zero());

  // Leibniz degenerates to d(xy) = x0 dy + y0 dx
  SqzElem x = SqzElem::constant(ctx, 3) + u;
  SqzElem y = SqzElem::constant(ctx, 4) + u1;
  OneForm lhs = (x * y).d();
  OneForm expected{ctx,
                   {Fq2::from_int(5, 4) * Fq2::from_int(5, 1),
                    Fq2::from_int(5, 3) * Fq2::from_int(5, 1)}};
  CHECK(lhs == expected);

  // unit criterion: constant term nonzero
  CHECK(!u.is_unit());
  CHECK((five + u).is_zero() == false);
  CHECK(x.is_unit());
  CHECK(x * x.inverse() == x.one_like());
  CHECK_THROWS_AS(u.inverse(), std::domain_error);

  // frobenius kills the maximal ideal
  CHECK(x.frobenius() == SqzElem::constant(ctx, Fq2::from_int(5, 3).pow(5)));
  CHECK(u.frobenius().is_zero());
  // p-th ring power agrees with frobenius
  CHECK(x.pow(5) == x.frobenius());
}

TEST_CASE("square-zero ring axioms, randomized") {
  std::mt19937_64 rng(13);
  for (i64 p : {3, 7, 11}) {
    auto ctx = make_sqz_context(p, {"t1", "t2", "t3"});
    std::uniform_int_distribution<i64> d(0, p - 1);
    auto rand_elem = [&]() {
      SqzElem e = SqzElem::constant(ctx, Fq2(p, d(rng), d(rng)));
      for (const auto& t : ctx->params) {
        SqzElem c = SqzElem::constant(ctx, Fq2(p, d(rng), d(rng)));
        e += c * SqzElem::parameter(ctx, t);
      }
      return e;
    };
    for (int t = 0; t < 40; ++t) {
      SqzElem x = rand_elem(), y = rand_elem(), z = rand_elem();
      CHECK((x + y) * z == x * z + y * z);
      CHECK((x * y) * z == x * (y * z));
      CHECK(x * y == y * x);
      CHECK(x.is_unit() == !x.constant_term().is_zero());
      if (x.is_unit()) CHECK(x * x.inverse() == x.one_like());
      // the derivation is additive
      OneForm sum_d = (x + y).d();
      OneForm dx = x.d(), dy = y.d();
      CHECK(sum_d == dx + dy);
    }
  }
}
