#include <doctest.h>

#include "edenca/group.hpp"
#include "edenca/rng.hpp"

using namespace edenca;

namespace {

std::shared_ptr<const Group> F2() { return Group::make(GroupSpec::free_group(2)); }
std::shared_ptr<const Group> C222() { return Group::make(GroupSpec::free_product_cyclic({2, 2, 2})); }
std::shared_ptr<const Group> Z2() { return Group::make(GroupSpec::lattice(2)); }

} // namespace

TEST_CASE("free group multiplication and inverses") {
  auto g = F2();
  auto a = g->generator(0), b = g->generator(1);
  CHECK(g->multiply(a, g->inverse(a)) == g->identity());
  CHECK(g->format(g->multiply(g->parse("a.b"), g->parse("b^-1.a"))) == "a.a");
  CHECK(g->format(g->inverse(g->parse("a.b"))) == "b^-1.a^-1");
  CHECK(g->inverse(g->identity()) == g->identity());
  CHECK(g->multiply(g->parse("a.b"), g->parse("b^-1.a^-1")) == g->identity());
}

TEST_CASE("free product of C2 factors") {
  auto g = C222();
  auto x = g->generator(0);
  CHECK(g->multiply(x, x) == g->identity());
  CHECK(g->format(g->multiply(g->parse("x.y"), g->parse("y.x"))) == "e");
  CHECK(g->format(g->multiply(g->parse("x.y"), g->parse("z"))) == "x.y.z");
  CHECK(g->inverse(g->parse("x.y.z")) == g->parse("z.y.x"));
}

TEST_CASE("free product with higher cyclic orders") {
  auto g = Group::make(GroupSpec::free_product_cyclic({3, 2}));
  auto x = g->generator(0);
  CHECK(g->format(g->multiply(x, x)) == "x^2");
  CHECK(g->multiply(g->multiply(x, x), x) == g->identity());
  CHECK(g->inverse(x) == g->parse("x^2"));
  CHECK(g->parse("x^-1") == g->parse("x^2"));
}

TEST_CASE("lattice arithmetic") {
  auto g = Z2();
  auto v = g->parse("(2,-1)");
  CHECK(g->format(g->inverse(v)) == "(-2,1)");
  CHECK(g->multiply(v, g->inverse(v)) == g->identity());
  CHECK(g->format(g->multiply(v, v)) == "(4,-2)");
}

TEST_CASE("mismatched groups are rejected") {
  auto g = F2();
  auto h = Group::make(GroupSpec::free_group(3));
  CHECK_THROWS_AS(g->multiply(g->generator(0), h->generator(0)), UsageError);
}

TEST_CASE("ball sizes match closed forms") {
  auto g = F2();
  GenSet S = g->standard_gens();
  SUBCASE("radius zero") {
    auto B = ball(*g, S, 0);
    REQUIRE(B.size() == 1);
    CHECK(B[0] == g->identity());
  }
  SUBCASE("free rank 2: |B_k| = 2*3^k - 1") {
    std::size_t expect = 1;
    std::size_t pow3 = 1;
    for (int k = 0; k <= 8; ++k) {
      expect = 2 * pow3 - 1;
      CHECK(ball(*g, S, k).size() == expect);
      pow3 *= 3;
    }
  }
  SUBCASE("Z^2: |B_k| = 2k(k+1)+1") {
    auto z = Z2();
    GenSet Sz = z->standard_gens();
    for (int k = 0; k <= 6; ++k)
      CHECK(ball(*z, Sz, k).size() == static_cast<std::size_t>(2 * k * (k + 1) + 1));
    CHECK(ball(*z, Sz, 2).size() == 13);
  }
  SUBCASE("C2*C2*C2: |B_k| = 3*2^k - 2") {
    auto c = C222();
    GenSet Sc = c->standard_gens();
    for (int k = 1; k <= 8; ++k)
      CHECK(ball(*c, Sc, k).size() == static_cast<std::size_t>(3 * (1 << k) - 2));
  }
  CHECK(ball(*g, S, 2).size() == 17);
}

TEST_CASE("ball order is total, length-lex, and nested") {
  for (auto g : {F2(), C222()}) {
    GenSet S = g->standard_gens();
    auto b3 = ball(*g, S, 3);
    auto b4 = ball(*g, S, 4);
    CHECK(b3.size() < b4.size());
    for (size_t i = 0; i + 1 < b3.size(); ++i) CHECK(b3[i] < b3[i + 1]);
    // prefix property
    for (size_t i = 0; i < b3.size(); ++i) CHECK(b3[i] == b4[i]);
  }
}

TEST_CASE("associativity on sampled triples") {
  auto g = F2();
  auto B = ball(*g, g->standard_gens(), 3);
  Rng rng(7);
  for (int i = 0; i < 500; ++i) {
    const auto& a = B[rng.uniform(B.size())];
    const auto& b = B[rng.uniform(B.size())];
    const auto& c = B[rng.uniform(B.size())];
    CHECK(g->multiply(g->multiply(a, b), c) == g->multiply(a, g->multiply(b, c)));
  }
}

TEST_CASE("parse/format round-trip") {
  for (auto g : {F2(), C222(), Z2()}) {
    for (const auto& x : ball(*g, g->standard_gens(), 3)) CHECK(g->parse(g->format(x)) == x);
  }
}

TEST_CASE("gen sets: duplicates rejected, symmetry detected, order canonical") {
  auto g = F2();
  auto a = g->generator(0);
  CHECK_THROWS_AS(g->make_gen_set({a, a}), UsageError);
  GenSet S = g->standard_gens();
  CHECK(S.symmetric);
  CHECK(S.size() == 4);
  CHECK(g->format(S[0]) == "a");
  CHECK(g->format(S[1]) == "a^-1");
  CHECK(g->format(S[2]) == "b");
  CHECK(g->format(S[3]) == "b^-1");
  GenSet T = g->make_gen_set({a, g->generator(1)});
  CHECK_FALSE(T.symmetric);
  // identity is allowed in a neighbourhood set
  GenSet U = g->make_gen_set({g->identity(), a});
  CHECK(U.size() == 2);
  CHECK(U[0] == g->identity());
}

TEST_CASE("lattice overflow is caught") {
  auto z = Group::make(GroupSpec::lattice(1));
  auto big = z->generator_power(0, (std::int64_t{1} << 30) - 1);
  CHECK_THROWS_AS(z->multiply(big, big), UsageError);
}
