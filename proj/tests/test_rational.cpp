#include "doctest.h"

#include <stdexcept>

#include "parslab/rational.hpp"

using namespace parslab;

TEST_CASE("rational parsing accepts fractions and integers, reduced") {
  auto r = Rat::parse("3/8");
  REQUIRE(r.has_value());
  CHECK(r->num() == 3);
  CHECK(r->den() == 8);

  auto reduced = Rat::parse("6/8");
  REQUIRE(reduced.has_value());
  CHECK(reduced->num() == 3);
  CHECK(reduced->den() == 4);

  auto whole = Rat::parse("2");
  REQUIRE(whole.has_value());
  CHECK(whole->num() == 2);
  CHECK(whole->den() == 1);

  auto zero = Rat::parse("0/5");
  REQUIRE(zero.has_value());
  CHECK(zero->is_zero());
  CHECK(zero->den() == 1);
}

TEST_CASE("rational parsing rejects malformed input") {
  CHECK_FALSE(Rat::parse("").has_value());
  CHECK_FALSE(Rat::parse("-1/2").has_value());
  CHECK_FALSE(Rat::parse("1/-2").has_value());
  CHECK_FALSE(Rat::parse("1/0").has_value());
  CHECK_FALSE(Rat::parse("a").has_value());
  CHECK_FALSE(Rat::parse("1/2/3").has_value());
  CHECK_FALSE(Rat::parse("1 /2").has_value());
}

TEST_CASE("rational arithmetic is exact") {
  Rat third(BigInt(1), BigInt(3));
  Rat sixth(BigInt(1), BigInt(6));
  CHECK(third + sixth == Rat(BigInt(1), BigInt(2)));
  CHECK(Rat(1ul) - third == Rat(BigInt(2), BigInt(3)));
  CHECK(Rat(BigInt(2), BigInt(3)) * Rat(BigInt(3), BigInt(4)) ==
        Rat(BigInt(1), BigInt(2)));

  // subtraction below zero is a logic error, not a value
  CHECK_THROWS_AS(sixth - third, std::domain_error);
}

TEST_CASE("rational construction guards the representation") {
  CHECK_THROWS_AS(Rat(BigInt(1), BigInt(0)), std::invalid_argument);
  CHECK_THROWS_AS(Rat(BigInt(-1), BigInt(2)), std::invalid_argument);
  CHECK(Rat(BigInt(4), BigInt(6)) == Rat(BigInt(2), BigInt(3)));
}

TEST_CASE("dyadic helper produces 2^-k") {
  CHECK(Rat::dyadic(0).is_one());
  CHECK(Rat::dyadic(1) == Rat(BigInt(1), BigInt(2)));
  CHECK(Rat::dyadic(10) == Rat(BigInt(1), BigInt(1024)));
  // stays exact far beyond machine words
  CHECK(Rat::dyadic(80).den() == (BigInt(1) << 80));
}

TEST_CASE("rational display and approximation") {
  CHECK(Rat(BigInt(1), BigInt(2)).str() == "1/2");
  CHECK(Rat(2ul).str() == "2");
  CHECK(Rat().str() == "0");
  CHECK(Rat(BigInt(1), BigInt(2)).approx() == doctest::Approx(0.5));
}

TEST_CASE("rational ordering is total and consistent") {
  Rat a(BigInt(1), BigInt(3));
  Rat b(BigInt(2), BigInt(5));
  CHECK(a < b);
  CHECK(b > a);
  CHECK(a <= a);
  CHECK(a >= a);
  CHECK(a != b);
  // cross-denominator comparison stays exact
  CHECK(Rat(BigInt(1000000000001), BigInt(3000000000003)) == a);
}

TEST_CASE("probabilities live in the unit interval") {
  CHECK_THROWS_AS(Prob(Rat(BigInt(3), BigInt(2))), std::domain_error);
  CHECK(Prob::zero().is_zero());
  CHECK(Prob::one().is_one());
  CHECK(Prob::dyadic(3).rat() == Rat(BigInt(1), BigInt(8)));

  auto p = Prob::parse("3/4");
  REQUIRE(p.has_value());
  CHECK(p->complement() == Prob::dyadic(2));
  CHECK_FALSE(Prob::parse("5/4").has_value());
  CHECK_FALSE(Prob::parse("x").has_value());
}

TEST_CASE("probability products stay inside, sums may leave") {
  Prob half = Prob::dyadic(1);
  Prob quarter = Prob::dyadic(2);
  CHECK(half * quarter == Prob::dyadic(3));

  // the sum of two probabilities is a plain rational and may exceed 1
  Rat s = *Prob::parse("3/4") + *Prob::parse("3/4");
  CHECK(s == Rat(BigInt(3), BigInt(2)));
}
