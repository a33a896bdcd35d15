#include <doctest.h>

#include <random>

#include "wsum/rational.hpp"

#include "helpers.hpp"

using namespace wsum;
using wsum::testing::Rng;

TEST_CASE("rational arithmetic is exact and reduced") {
  LiftedRational half(1, 2), third(1, 3);
  CHECK((half + third).str() == "5/6");
  CHECK((half - third).str() == "1/6");
  CHECK((half * third).str() == "1/6");
  CHECK((half / third).str() == "3/2");
  CHECK((LiftedRational(0) + LiftedRational(0)).str() == "0");
  CHECK((LiftedRational(3, 4) / LiftedRational(3, 4)).str() == "1");
  CHECK(LiftedRational(2, 4).str() == "1/2");
  CHECK(LiftedRational(-2, 4).str() == "-1/2");
}

TEST_CASE("bottom absorbs arithmetic") {
  LiftedRational bot = LiftedRational::bottom();
  LiftedRational seven(7);
  CHECK((bot + seven).is_bottom());
  CHECK((seven + bot).is_bottom());
  CHECK((bot - seven).is_bottom());
  CHECK((bot * seven).is_bottom());
  CHECK((bot / LiftedRational(2)).is_bottom());
  // division by zero is bottom, not an error
  CHECK((LiftedRational(5) / LiftedRational(0)).is_bottom());
}

TEST_CASE("extended order puts bottom below everything") {
  LiftedRational bot = LiftedRational::bottom();
  CHECK(bot.leq(LiftedRational(-5)));
  CHECK_FALSE(LiftedRational(-5).leq(bot));
  CHECK(bot.leq(bot));
  CHECK(LiftedRational(1, 3).leq(LiftedRational(1, 2)));
  CHECK_FALSE(LiftedRational(1, 2).leq(LiftedRational(1, 3)));
}

TEST_CASE("bottom absorption property over random values") {
  Rng rng(7001);
  LiftedRational bot = LiftedRational::bottom();
  for (int i = 0; i < 200; ++i) {
    LiftedRational a(wsum::testing::random_rational(rng));
    CHECK((a + bot).is_bottom());
    CHECK((bot + a).is_bottom());
    CHECK((a - bot).is_bottom());
    CHECK((bot - a).is_bottom());
    CHECK((a * bot).is_bottom());
    CHECK((bot * a).is_bottom());
    CHECK((a / bot).is_bottom());
    CHECK((bot / a).is_bottom());
  }
}

TEST_CASE("leq is a total order with antisymmetry on random samples") {
  Rng rng(7002);
  std::vector<LiftedRational> samples{LiftedRational::bottom()};
  for (int i = 0; i < 40; ++i) samples.emplace_back(wsum::testing::random_rational(rng));
  for (const auto& a : samples) {
    CHECK(a.leq(a));
    for (const auto& b : samples) {
      CHECK((a.leq(b) || b.leq(a)));
      if (a.leq(b) && b.leq(a)) CHECK(a == b);
      for (const auto& c : samples) {
        if (a.leq(b) && b.leq(c)) CHECK(a.leq(c));
      }
    }
  }
}

TEST_CASE("reduced form survives operation chains") {
  Rng rng(7003);
  for (int i = 0; i < 100; ++i) {
    LiftedRational acc(wsum::testing::random_rational(rng));
    for (int k = 0; k < 8; ++k) {
      LiftedRational next(wsum::testing::random_rational(rng));
      switch (rng() % 4) {
        case 0: acc = acc + next; break;
        case 1: acc = acc - next; break;
        case 2: acc = acc * next; break;
        default: acc = acc / next; break;
      }
      if (acc.is_bottom()) break;
      mpq_class v = acc.value();
      mpz_class g;
      mpz_gcd(g.get_mpz_t(), v.get_num().get_mpz_t(), v.get_den().get_mpz_t());
      CHECK(g == 1);
      CHECK(v.get_den() > 0);
    }
  }
}

TEST_CASE("parsing and printing round-trip") {
  for (const char* text : {"bot", "0", "7", "-3", "1/2", "-5/8", "22/7"}) {
    CHECK(LiftedRational::parse(text).str() == text);
  }
  CHECK(LiftedRational::parse("4/8").str() == "1/2");
  CHECK_THROWS_AS(LiftedRational::parse("1/0"), Error);
  CHECK_THROWS_AS(LiftedRational::parse("abc"), Error);
}

TEST_CASE("bit size measures numerator plus denominator") {
  CHECK(LiftedRational::bottom().bit_size() == 0);
  CHECK(LiftedRational(1).bit_size() == 2);   // 1 and 1
  CHECK(LiftedRational(4).bit_size() == 4);   // 100 and 1
  CHECK(LiftedRational(1, 4).bit_size() == 4);
}
