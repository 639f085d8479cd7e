#include <doctest.h>

#include "edenca/linear.hpp"
#include "edenca/oracle.hpp"
#include "edenca/rng.hpp"

using namespace edenca;

namespace {

std::shared_ptr<const Group> C222() { return Group::make(GroupSpec::free_product_cyclic({2, 2, 2})); }

Pattern random_pattern(const LinearRule& rule, const std::vector<GroupElement>& dom, Rng& rng) {
  Pattern p;
  p.states = rule.rule().states();
  for (const auto& x : dom) p.cells.emplace(x, static_cast<State>(rng.uniform(4)));
  return p;
}

} // namespace

TEST_CASE("convolution basics") {
  auto g = C222();
  auto x = algebra_term(g, g->generator(0));
  auto unit = algebra_unit(g);
  SUBCASE("delta_e is a unit") {
    auto v = parse_algebra(g, "x + y.z");
    CHECK(convolve(unit, v) == v);
    CHECK(convolve(v, unit) == v);
  }
  SUBCASE("involutions square to the unit") { CHECK(convolve(x, x) == unit); }
  SUBCASE("(y+z)^2 = yz + zy over GF(2)") {
    auto ypz = parse_algebra(g, "y + z");
    CHECK(format_algebra(convolve(ypz, ypz)) == "y.z + z.y");
  }
  SUBCASE("associativity and format round-trip on random elements") {
    Rng rng(71);
    auto B2 = ball(*g, g->standard_gens(), 2);
    auto random_elem = [&]() {
      AlgebraElement a = algebra_zero(g);
      for (const auto& e : B2)
        if (rng.uniform(3) == 0) a.support.insert(e);
      return a;
    };
    for (int i = 0; i < 100; ++i) {
      auto a = random_elem(), b = random_elem(), c = random_elem();
      CHECK(convolve(convolve(a, b), c) == convolve(a, convolve(b, c)));
      CHECK(parse_algebra(g, format_algebra(a)) == a);
    }
  }
}

TEST_CASE("muller preset") {
  auto rule = muller_rule();
  const Group& g = rule->group();
  CHECK(rule->S().size() == 3);
  CHECK(g.format(rule->S()[0]) == "x");
  CHECK(g.format(rule->S()[1]) == "y");
  CHECK(g.format(rule->S()[2]) == "z");
  CHECK(format_algebra(rule->alpha()) == "x + y");
  CHECK(format_algebra(rule->beta()) == "y + z");
  CHECK(rule->rule().states()->size() == 4);
}

TEST_CASE("a unit coefficient always produces syzygies") {
  // alpha = x is invertible (x^2 = e), so gamma = delta*beta*x solves
  // gamma*alpha = delta*beta for every delta; the smallest instance is
  // gamma = yx + zx, delta = e, found by the scan at radius 2.
  auto g = C222();
  auto rule = build_linear_rule(algebra_term(g, g->generator(0)),
                                parse_algebra(g, "y + z"));
  CHECK(kernel_scan(*rule, 0).empty());
  CHECK(kernel_scan(*rule, 1).empty());
  KernelScanReport rep = kernel_scan(*rule, 2);
  REQUIRE(rep.basis.size() == 1);
  CHECK(rep.basis[0].first == parse_algebra(g, "y.x + z.x"));
  CHECK(rep.basis[0].second == algebra_unit(g));
  CHECK(kernel_scan(*rule, 3).basis.size() == 4);
}

TEST_CASE("linear rule: zero maps to zero, image second coordinate vanishes") {
  auto rule = muller_rule();
  const Group& g = rule->group();
  auto B2 = ball(g, rule->S(), 2);
  Pattern zero;
  zero.states = rule->rule().states();
  for (const auto& e : B2) zero.cells.emplace(e, 0);
  Pattern out = evolve(rule->rule(), zero);
  CHECK(!out.cells.empty());
  for (const auto& [x, v] : out.cells) CHECK(v == 0);

  Rng rng(81);
  for (int t = 0; t < 50; ++t) {
    Pattern p = random_pattern(*rule, B2, rng);
    for (const auto& [x, v] : evolve(rule->rule(), p).cells) CHECK((v & 1) == 0);
  }
}

TEST_CASE("linear rule: delta_x in the first coordinate evolves to delta_e") {
  auto rule = muller_rule();
  const Group& g = rule->group();
  auto B1 = ball(g, rule->S(), 1);
  Pattern p;
  p.states = rule->rule().states();
  for (const auto& e : B1) p.cells.emplace(e, 0);
  p.cells[g.parse("x")] = LinearRule::encode(1, 0);
  Pattern out = evolve(rule->rule(), p);
  REQUIRE(out.cells.size() == 1); // interior of B1 is {e}
  CHECK(out.at(g.identity()) == LinearRule::encode(1, 0));
}

TEST_CASE("additivity of the evolution") {
  auto rule = muller_rule();
  const Group& g = rule->group();
  auto B2 = ball(g, rule->S(), 2);
  Rng rng(91);
  for (int t = 0; t < 100; ++t) {
    Pattern p1 = random_pattern(*rule, B2, rng);
    Pattern p2 = random_pattern(*rule, B2, rng);
    Pattern lhs = evolve(rule->rule(), pattern_xor(*rule, p1, p2));
    Pattern rhs = pattern_xor(*rule, evolve(rule->rule(), p1), evolve(rule->rule(), p2));
    CHECK(lhs == rhs);
  }
}

TEST_CASE("goe witness is a brute-force confirmed orphan; (1,0) is not certified") {
  auto rule = muller_rule();
  const Group& g = rule->group();
  Pattern w = goe_witness_linear(*rule);
  CHECK(w.at(g.identity()) == LinearRule::encode(0, 1));
  CHECK(is_goe_bruteforce(rule->rule(), w));
  Pattern other;
  other.states = rule->rule().states();
  other.cells[g.identity()] = LinearRule::encode(1, 0);
  CHECK_FALSE(is_goe_bruteforce(rule->rule(), other)); // (1,0) is reachable
}

TEST_CASE("patch matrix reproduces evolve on unit vectors") {
  auto rule = muller_rule();
  const Group& g = rule->group();
  auto in = ball(g, rule->S(), 2);
  auto out = ball(g, rule->S(), 1);
  PatchMatrix pm = build_patch_matrix(*rule, in, out);
  for (std::size_t c = 0; c < in.size(); ++c) {
    for (int coord = 0; coord < 2; ++coord) {
      Pattern unit;
      unit.states = rule->rule().states();
      for (const auto& x : in) unit.cells.emplace(x, 0);
      unit.cells[in[c]] = coord == 0 ? LinearRule::encode(1, 0) : LinearRule::encode(0, 1);
      Pattern ev = evolve(rule->rule(), unit);
      for (std::size_t r = 0; r < out.size(); ++r) {
        int got = static_cast<int>(ev.at(out[r]) >> 1);
        CHECK(pm.mat.get(2 * r, 2 * c + static_cast<std::size_t>(coord)) == (got == 1));
        CHECK_FALSE(pm.mat.get(2 * r + 1, 2 * c + static_cast<std::size_t>(coord)));
      }
    }
  }
}

TEST_CASE("kernel scan: muller is empty through radius 3") {
  auto rule = muller_rule();
  for (int k = 0; k <= 3; ++k) {
    KernelScanReport rep = kernel_scan(*rule, k);
    CHECK(rep.empty());
    CHECK(rep.rank == rep.matrix_cols); // full column rank
  }
}

TEST_CASE("kernel scan: common-multiple control on Z") {
  auto z = Group::make(GroupSpec::lattice(1));
  // alpha = beta = delta_e; widen S beyond the minimal {e} so the scan balls grow
  GenSet S = z->make_gen_set({z->inverse(z->generator(0)), z->identity(), z->generator(0)});
  auto rule = build_linear_rule(algebra_unit(z), algebra_unit(z), S);
  KernelScanReport rep0 = kernel_scan(*rule, 0);
  REQUIRE(rep0.basis.size() == 1);
  CHECK(rep0.basis[0].first == algebra_unit(z));
  CHECK(rep0.basis[0].second == algebra_unit(z));
  // nestedness: dimension grows with the ball, pairs (gamma, gamma)
  KernelScanReport rep1 = kernel_scan(*rule, 1);
  CHECK(rep1.basis.size() == 3);
  for (const auto& [gamma, delta] : rep1.basis) CHECK(gamma == delta);
  // an explicit S must still contain the inverses of the supports
  GenSet small = z->make_gen_set({z->identity(), z->generator(0)});
  CHECK_THROWS_AS(build_linear_rule(algebra_term(z, z->generator(0)), algebra_unit(z), small), UsageError);
}

TEST_CASE("kernel scan agrees with the exhaustive MEP search at radius 0") {
  SearchBudget budget;
  SUBCASE("muller: empty kernel and exhausted search") {
    auto rule = muller_rule();
    CHECK(kernel_scan(*rule, 0).empty());
    SearchOutcome oc = find_mep(rule->rule(), {rule->group().identity()}, budget);
    CHECK(oc.status == SearchStatus::Exhausted);
  }
  SUBCASE("control: nonempty kernel and a found pair") {
    auto z = Group::make(GroupSpec::lattice(1));
    auto rule = build_linear_rule(algebra_unit(z), algebra_unit(z));
    CHECK_FALSE(kernel_scan(*rule, 0).empty());
    SearchOutcome oc = find_mep(rule->rule(), {z->identity()}, budget);
    CHECK(oc.status == SearchStatus::Found);
  }
}

TEST_CASE("kernel scan budget") {
  auto rule = muller_rule();
  CHECK_THROWS_AS(kernel_scan(*rule, 3, 10), BudgetError);
}

TEST_CASE("bit matrix rref and nullspace on a known system") {
  // rows: x1 + x2 = 0, x2 + x3 = 0 -> kernel spanned by (1,1,1)
  BitMatrix m(2, 3);
  m.set(0, 0, true);
  m.set(0, 1, true);
  m.set(1, 1, true);
  m.set(1, 2, true);
  BitMatrix copy = m;
  CHECK(copy.rref().size() == 2);
  auto basis = m.nullspace();
  REQUIRE(basis.size() == 1);
  CHECK(basis[0] == std::vector<bool>{true, true, true});
}
