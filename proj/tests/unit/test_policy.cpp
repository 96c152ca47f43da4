#include <random>
#include <sstream>

#include "coopmac/policy.hpp"
#include "doctest.h"
#include "fixtures.hpp"

using namespace coopmac;

TEST_CASE("case classification") {
  CHECK(classify_case({0.2, 0.15, 0.3, 0.3}) == ChannelCase::One);
  CHECK(classify_case({0.3, 0.1, 0.4, 0.05}) == ChannelCase::Two);
  CHECK(classify_case({0.3, 0.1, 0.2, 0.3}) == ChannelCase::Three);
  CHECK(classify_case({0.3, 0.3, 0.1, 0.1}) == ChannelCase::Four);
  // Equality falls on the non-relaying side.
  CHECK(classify_case({0.2, 0.2, 0.2, 0.2}) == ChannelCase::Four);
  CHECK(classify_case({0.2, 0.1, 0.3, 0.1}) == ChannelCase::Two);
  CHECK(classify_case({0.2, 0.1, 0.2, 0.3}) == ChannelCase::Three);
}

TEST_CASE("exactly one case per gains tuple") {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> pick(0, 3);
  const double grid[] = {0.0, 0.1, 0.2, 0.3};
  for (int t = 0; t < 2000; ++t) {
    const EffectiveGains s{grid[pick(rng)], grid[pick(rng)], grid[pick(rng)],
                           grid[pick(rng)]};
    const bool relay1 = s.s12 > s.s10;
    const bool relay2 = s.s21 > s.s20;
    const ChannelCase expected = relay1 ? (relay2 ? ChannelCase::One : ChannelCase::Two)
                                        : (relay2 ? ChannelCase::Three : ChannelCase::Four);
    CHECK(classify_case(s) == expected);
  }
}

TEST_CASE("active supports") {
  using C = Component;
  const auto one = active_support(ChannelCase::One);
  CHECK_FALSE(one.contains(C::P10));
  CHECK_FALSE(one.contains(C::P20));
  CHECK(one.contains(C::P12));
  CHECK(one.contains(C::P21));
  CHECK(one.contains(C::PU1));
  CHECK(one.contains(C::PU2));

  const auto two = active_support(ChannelCase::Two);
  CHECK_FALSE(two.contains(C::P10));
  CHECK_FALSE(two.contains(C::P21));
  CHECK(two.contains(C::P20));

  const auto three = active_support(ChannelCase::Three);
  CHECK_FALSE(three.contains(C::P12));
  CHECK_FALSE(three.contains(C::P20));
  CHECK(three.contains(C::P10));

  const auto four = active_support(ChannelCase::Four);
  CHECK_FALSE(four.contains(C::P12));
  CHECK_FALSE(four.contains(C::P21));
  CHECK(four.contains(C::P10));
  CHECK(four.contains(C::P20));

  for (ChannelCase c : {ChannelCase::One, ChannelCase::Two, ChannelCase::Three,
                        ChannelCase::Four}) {
    CHECK(active_support(c).count(0) == 2);
    CHECK(active_support(c).count(1) == 2);
  }
}

TEST_CASE("average powers and feasibility") {
  const Ensemble single({{0, 0.2, 0.2, 0.3, 0.3}}, {1.0}, {}, {});
  PowerPolicy p = zero_policy(single);
  auto avg = average_powers(single, p);
  CHECK(avg.user1 == 0.0);
  CHECK(avg.user2 == 0.0);
  p.vectors[0][Component::P12] = 0.4;
  p.vectors[0][Component::PU1] = 0.6;
  avg = average_powers(single, p);
  CHECK(avg.user1 == doctest::Approx(1.0));
  CHECK(avg.user2 == 0.0);
  CHECK(is_feasible(single, p));
  CHECK(is_reduced(single, p));

  p.vectors[0][Component::P10] = 1e-3;
  CHECK_FALSE(is_feasible(single, p));
  CHECK_FALSE(is_reduced(single, p));
  p.vectors[0][Component::P10] = 0.0;
  p.vectors[0][Component::PU1] = 0.6 + 5e-10;
  CHECK(is_feasible(single, p));
  p.vectors[0][Component::PU1] = -1e-3;
  CHECK_FALSE(is_feasible(single, p));

  const Ensemble two({{0, 1, 1, 1, 1}, {1, 1, 1, 1, 1}}, {0.5, 0.5}, {}, {2.0, 1.0});
  PowerPolicy q = zero_policy(two);
  q.vectors[0][Component::P12] = 1.0;
  q.vectors[1][Component::P12] = 3.0;
  CHECK(average_powers(two, q).user1 == doctest::Approx(2.0));
  CHECK_THROWS_AS(average_powers(single, q), InvalidInput);
}

TEST_CASE("policy csv round trip") {
  std::mt19937_64 rng(21);
  const auto e = fixtures::random_ensemble(rng, 7);
  const auto p = fixtures::random_reduced_policy(rng, e);
  std::ostringstream out;
  write_policy_csv(out, p);
  CHECK(out.str().rfind("index,p10,p12,pU1,p20,p21,pU2\n", 0) == 0);
  CHECK(out.str().find('\r') == std::string::npos);

  std::istringstream in(out.str());
  const auto back = read_policy_csv(in);
  REQUIRE(back.size() == p.size());
  for (std::size_t k = 0; k < p.size(); ++k) {
    for (Component c : kAllComponents) {
      CHECK(back.vectors[k][c] == doctest::Approx(p.vectors[k][c]).epsilon(1e-11));
    }
  }
  // A second round trip is exact.
  std::ostringstream again;
  write_policy_csv(again, back);
  std::istringstream in2(again.str());
  CHECK(read_policy_csv(in2) == back);
}

TEST_CASE("policy csv rejects malformed input") {
  const auto parse = [](const std::string& text) {
    std::istringstream in(text);
    return read_policy_csv(in);
  };
  CHECK_THROWS_AS(parse(""), InvalidInput);
  CHECK_THROWS_AS(parse("index,p10\n0,1\n"), InvalidInput);
  CHECK_THROWS_AS(parse("index,p10,p12,pU1,p20,p21,pU2\n0,1,2,3,4,5\n"), InvalidInput);
  CHECK_THROWS_AS(parse("index,p10,p12,pU1,p20,p21,pU2\n1,0,0,0,0,0,0\n"), InvalidInput);
  CHECK_THROWS_AS(parse("index,p10,p12,pU1,p20,p21,pU2\n0,0,x,0,0,0,0\n"), InvalidInput);
  CHECK_NOTHROW(parse("index,p10,p12,pU1,p20,p21,pU2\n0,0,0.5,0,0,0,0\n"));
}
