#include "raloops/abelian.hpp"

#include "doctest.h"
#include "oracles.hpp"

#include <stdexcept>

using namespace raloops;

namespace {

AbelianGroup grp(std::vector<Int> finite, std::size_t infinite = 0) {
  std::vector<Order> f;
  for (const Int& n : finite) f.push_back(Order::finite(n));
  for (std::size_t i = 0; i < infinite; ++i) f.push_back(Order::infinity());
  return AbelianGroup(std::move(f));
}

ExponentVector ev(std::vector<Int> e) { return ExponentVector(std::move(e)); }

}  // namespace

TEST_CASE("orders compare with infinity last") {
  CHECK(Order::finite(2) < Order::finite(3));
  CHECK(Order::finite(1000000) < Order::infinity());
  CHECK_FALSE(Order::infinity() < Order::infinity());
  CHECK(Order::infinity() == Order::infinity());
  CHECK(Order::finite(8).value() == 8);
  CHECK(Order::finite(8).str() == "8");
  CHECK(Order::infinity().str() == "inf");
  CHECK_THROWS_AS(Order::infinity().value(), std::logic_error);
  CHECK_THROWS_AS(Order::finite(0), std::invalid_argument);
  CHECK_THROWS_AS(Order::finite(-3), std::invalid_argument);
}

TEST_CASE("group arithmetic in C4 x C2 x Z") {
  const AbelianGroup g = grp({4, 2}, 1);
  CHECK(g.rank() == 3);
  CHECK(g.free_rank() == 1);
  CHECK_FALSE(g.is_finite());
  CHECK(g.torsion_orders() == std::vector<Int>{2, 4});

  const ExponentVector a = ev({3, 1, -2});
  const ExponentVector b = ev({2, 1, 5});
  CHECK(g.mul(a, b) == ev({1, 0, 3}));
  CHECK(g.pow(a, 3) == ev({1, 1, -6}));
  CHECK(g.pow(a, -1) == g.inverse(a));
  CHECK(g.mul(a, g.inverse(a)) == g.identity());
  CHECK(g.reduce(ev({-1, 7, 4})) == ev({3, 1, 4}));
  CHECK(g.is_identity(g.reduce(ev({4, 2, 0}))));

  CHECK(g.element_order(ev({1, 1, 0})) == Order::finite(4));
  CHECK(g.element_order(ev({2, 1, 0})) == Order::finite(2));
  CHECK(g.element_order(ev({0, 0, 1})) == Order::infinity());
  CHECK(g.element_order(g.identity()) == Order::finite(1));
  CHECK(g.basis_vector(2) == ev({0, 0, 1}));
  CHECK_THROWS_AS(g.order().value(), std::logic_error);
}

TEST_CASE("finite order and enumeration") {
  const AbelianGroup g = grp({2, 3});
  CHECK(g.is_finite());
  CHECK(g.order() == Order::finite(6));
  const auto all = g.enumerate();
  REQUIRE(all.size() == 6);
  CHECK(all[0] == g.identity());
  // Odometer order: last factor fastest.
  CHECK(all[1] == ev({0, 1}));
  CHECK(all[2] == ev({0, 2}));
  CHECK(all[3] == ev({1, 0}));
  CHECK_THROWS_AS(grp({2}, 1).enumerate(), std::domain_error);
}

TEST_CASE("C6 multiplication matches the cyclic table oracle") {
  const AbelianGroup g = grp({6});
  const auto all = g.enumerate();
  const CayleyTable oracle = oracles::cyclic_table(6);
  for (int i = 0; i < 6; ++i) {
    for (int j = 0; j < 6; ++j) {
      const ExponentVector p = g.mul(all[static_cast<std::size_t>(i)],
                                     all[static_cast<std::size_t>(j)]);
      // enumerate() lists k at index k for a single cyclic factor.
      CHECK(p == all[static_cast<std::size_t>(oracle.at(i, j))]);
    }
  }
}

TEST_CASE("order-1 factors are legal but invisible in torsion") {
  const AbelianGroup g = grp({1, 4});
  CHECK(g.order() == Order::finite(4));
  CHECK(g.torsion_orders() == std::vector<Int>{4});
  CHECK(g.reduce(ev({5, 5})) == ev({0, 1}));
}

TEST_CASE("large exponents stay exact") {
  const AbelianGroup g = grp({}, 1);
  Int big = 1;
  for (int i = 0; i < 40; ++i) big *= 10;  // 10^40, far past 64-bit
  const ExponentVector v = ev({big});
  CHECK(g.pow(v, big)[0] == big * big);
  CHECK(g.element_order(v) == Order::infinity());
}

TEST_CASE("vector size mismatches are rejected") {
  const AbelianGroup g = grp({4, 2});
  CHECK_THROWS_AS(g.mul(ev({1}), ev({1, 0})), std::invalid_argument);
  CHECK_THROWS_AS(g.reduce(ev({1, 2, 3})), std::invalid_argument);
}
