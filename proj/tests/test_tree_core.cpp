#include "doctest.h"

#include "census/enumerate.hpp"
#include "census/tree.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <cmath>
#include <random>

using namespace census;

namespace {

OrderedTree cherry() { return OrderedTree::parse("2,0,0"); }
OrderedTree path3() { return OrderedTree::parse("1,1,0"); }

}  // namespace

TEST_CASE("tree_core: parse and validation") {
  CHECK(cherry().size() == 3);
  CHECK(cherry().to_text() == "2,0,0");
  CHECK_THROWS_AS(OrderedTree::parse("2,0"), DomainError);    // sum != n-1
  CHECK_THROWS_AS(OrderedTree::parse("0,2,0"), DomainError);  // closes early
  CHECK_THROWS_AS(OrderedTree::parse("2,a,0"), ParseError);
  CHECK_THROWS_AS(OrderedTree::parse(""), ParseError);
}

TEST_CASE("tree_core: count_root_subtrees small cases") {
  CHECK(count_root_subtrees(OrderedTree::parse("0")) == 1);
  CHECK(count_root_subtrees(path3()) == 3);
  CHECK(count_root_subtrees(cherry()) == 4);
}

TEST_CASE("tree_core: count_subtrees small cases") {
  CHECK(count_subtrees(OrderedTree::parse("0")) == 1);
  CHECK(count_subtrees(cherry()) == 6);  // R values 4,1,1
  CHECK(count_subtrees(path3()) == 6);   // R values 3,2,1
}

TEST_CASE("tree_core: brute force oracle on tiny trees") {
  CountPair single = brute_force_counts(OrderedTree::parse("0"));
  CHECK(single.r == 1);
  CHECK(single.s == 1);
  CountPair ch = brute_force_counts(cherry());
  CHECK(ch.r == 4);
  CHECK(ch.s == 6);
}

TEST_CASE("tree_core: oracle equivalence over all small trees") {
  // every tree with <= 11 nodes over two degree alphabets
  for (const char* spec : {"binary-full", "catalan"}) {
    OffspringModel model = parse_model(spec);
    for (int n = 1; n <= 11; n += model.span) {
      for_each_tree(model, n, [&](const std::vector<uint32_t>& deg) {
        OrderedTree t;
        t.degrees = deg;
        CountPair bf = brute_force_counts(t);
        CHECK(bf.r == count_root_subtrees(t));
        CHECK(bf.s == count_subtrees(t));
      });
    }
  }
}

TEST_CASE("tree_core: R and S bounds") {
  OffspringModel model = parse_model("catalan");
  for (int n = 1; n <= 9; ++n) {
    for_each_tree(model, n, [&](const std::vector<uint32_t>& deg) {
      OrderedTree t;
      t.degrees = deg;
      BigInt r = count_root_subtrees(t);
      BigInt s = count_subtrees(t);
      BigInt nn = static_cast<long>(t.size());
      CHECK(r >= nn);
      CHECK(r <= BigInt(1) << (t.size() - 1));
      CHECK(s >= r);
      CHECK(s <= nn * r);
    });
  }
}

TEST_CASE("tree_core: special trees match the closed forms") {
  // R(Ta) = 2^{3l-2} + 2^{2l-1} + 2^{l-2}, R(Tb) = 2^{3l-2} + 2^{2l-2} + 2^{l-1}
  CHECK(count_root_subtrees(build_special_tree(SpecialTree::Ta, 2)) == 25);
  CHECK(count_root_subtrees(build_special_tree(SpecialTree::Tb, 2)) == 22);
  CHECK(count_root_subtrees(build_special_tree(SpecialTree::Ta, 3)) == 162);
  for (int ell = 2; ell <= 8; ++ell) {
    OrderedTree ta = build_special_tree(SpecialTree::Ta, ell);
    OrderedTree tb = build_special_tree(SpecialTree::Tb, ell);
    CHECK(ta.size() == static_cast<size_t>(3 * ell + 1));
    CHECK(tb.size() == static_cast<size_t>(3 * ell + 1));
    BigInt expect_a = (BigInt(1) << (3 * ell - 2)) + (BigInt(1) << (2 * ell - 1)) +
                      (BigInt(1) << (ell - 2));
    BigInt expect_b = (BigInt(1) << (3 * ell - 2)) + (BigInt(1) << (2 * ell - 2)) +
                      (BigInt(1) << (ell - 1));
    CHECK(count_root_subtrees(ta) == expect_a);
    CHECK(count_root_subtrees(tb) == expect_b);
  }
  CHECK_THROWS_AS(build_special_tree(SpecialTree::Ta, 1), DomainError);
}

TEST_CASE("tree_core: log_counts agrees with exact big-integer logs") {
  // deterministic pseudo-random trees over {0,1,2,3} degrees
  std::mt19937_64 gen(11);
  for (int trial = 0; trial < 40; ++trial) {
    // grow a random valid degree sequence of ~<= 2000 nodes
    std::vector<uint32_t> deg;
    long long open = 1;
    size_t target = 50 + (gen() % 1950);
    while (open > 0) {
      uint32_t d;
      if (deg.size() + static_cast<size_t>(open) >= target) {
        d = 0;  // wind down
      } else {
        d = static_cast<uint32_t>(gen() % 4);
      }
      deg.push_back(d);
      open += static_cast<long long>(d) - 1;
    }
    OrderedTree t = OrderedTree::from_degrees(deg);
    LogCounts lc = log_counts(t);
    BigInt r = count_root_subtrees(t);
    BigInt s = count_subtrees(t);
    double exact_lr = static_cast<double>(boost::multiprecision::log(
        boost::multiprecision::cpp_bin_float_100(r)));
    double exact_ls = static_cast<double>(boost::multiprecision::log(
        boost::multiprecision::cpp_bin_float_100(s)));
    CHECK(lc.log_r == doctest::Approx(exact_lr).epsilon(1e-9));
    CHECK(lc.log_s == doctest::Approx(exact_ls).epsilon(1e-9));
    // SR2 in log form
    CHECK(lc.log_s >= lc.log_r - 1e-9);
    CHECK(lc.log_s <= lc.log_r + std::log(static_cast<double>(t.size())) + 1e-9);
  }
}

TEST_CASE("tree_core: toll profile sums to log(R+1)") {
  OffspringModel model = parse_model("catalan");
  for (int n : {1, 5, 8}) {
    for_each_tree(model, n, [&](const std::vector<uint32_t>& deg) {
      OrderedTree t;
      t.degrees = deg;
      auto tolls = toll_profile(t);
      REQUIRE(tolls.size() == t.size());
      double sum = 0.0;
      for (size_t i = 0; i < tolls.size(); ++i) {
        CHECK(tolls[i] > 0.0);
        sum += tolls[i];
      }
      BigInt r1 = count_root_subtrees(t) + 1;
      double exact = static_cast<double>(boost::multiprecision::log(
          boost::multiprecision::cpp_bin_float_100(r1)));
      CHECK(sum == doctest::Approx(exact).epsilon(1e-9));
    });
  }
  // single node: f = log 2; entries bounded by 1/|T_v|
  auto single = toll_profile(OrderedTree::parse("0"));
  CHECK(single[0] == doctest::Approx(std::log(2.0)));
  auto ch = toll_profile(cherry());
  double sum = ch[0] + ch[1] + ch[2];
  CHECK(sum == doctest::Approx(std::log(5.0)).epsilon(1e-12));
}

TEST_CASE("tree_core: toll entries bounded by 1/|T_v|") {
  OrderedTree t = build_special_tree(SpecialTree::Tb, 4);
  auto tolls = toll_profile(t);
  // entry 0 is the whole tree: f <= 1/n
  CHECK(tolls[0] <= 1.0 / static_cast<double>(t.size()));
  for (double f : tolls) {
    CHECK(f > 0.0);
    CHECK(f <= std::log(2.0) + 1e-12);
  }
}

TEST_CASE("tree_core: big-integer cap is enforced") {
  std::vector<uint32_t> deg{2, 0, 0};
  OrderedTree t = OrderedTree::from_degrees(deg);
  CHECK_THROWS_AS(count_root_subtrees(t, /*cap=*/2), DomainError);
  CHECK_THROWS_AS(brute_force_counts(build_special_tree(SpecialTree::Ta, 9)),
                  DomainError);  // 28 nodes > 25
}
