#include <doctest.h>

#include "edenca/moore.hpp"
#include "edenca/rng.hpp"

using namespace edenca;

namespace {

struct Fixture {
  std::shared_ptr<const Group> g;
  std::shared_ptr<const VectorField> field;
  std::shared_ptr<const FieldRule> rule;
  Fixture() {
    g = Group::make(GroupSpec::free_group(2));
    field = build_tree_field(g, g->standard_gens());
    rule = build_field_rule(field);
  }
};

Pattern random_pattern(const LocalRule& rule, const std::vector<GroupElement>& dom, Rng& rng) {
  Pattern p;
  p.states = rule.states();
  for (const auto& x : dom)
    p.cells.emplace(x, static_cast<State>(rng.uniform(static_cast<std::uint64_t>(rule.states()->size()))));
  return p;
}

bool roundtrip(const LocalRule& lr, const Pattern& phi, const Pattern& psi) {
  Pattern image = evolve(lr, psi);
  for (const auto& [x, v] : phi.cells) {
    auto it = image.cells.find(x);
    if (it == image.cells.end() || it->second != v) return false;
  }
  return true;
}

} // namespace

TEST_CASE("field rule shape and naming") {
  Fixture f;
  CHECK(f.rule->rule().states()->size() == 32); // 2 |S|^2
  CHECK(f.rule->rule().states()->name(f.rule->q0()) == "(a,0,a)");
  CHECK(f.rule->rule().states()->name(f.rule->encode(1, 1, 0)) == "(a^-1,1,a)");
  CHECK(f.rule->rule().states()->index_of("(b^-1,0,a)") == f.rule->encode(3, 0, 0));
}

TEST_CASE("field rule evaluation: worked trace") {
  Fixture f;
  // phi(a)=(a,0,a), phi(a^-1)=(a^-1,0,a), phi(b)=phi(b^-1)=(a^-1,0,a)
  std::vector<State> a = {f.rule->encode(0, 0, 0), f.rule->encode(1, 0, 0), f.rule->encode(1, 0, 0),
                          f.rule->encode(1, 0, 0)};
  CHECK(f.rule->rule().eval(a) == f.rule->encode(0, 0, 0)); // (a,0,a)

  SUBCASE("no matches gives q0") {
    std::vector<State> zero = {f.rule->encode(1, 0, 0), f.rule->encode(0, 0, 0), f.rule->encode(0, 0, 0),
                               f.rule->encode(0, 0, 0)};
    CHECK(f.rule->rule().eval(zero) == f.rule->q0());
  }
  SUBCASE("the second match's middle bit is unread") {
    std::vector<State> flipped = a;
    flipped[1] = f.rule->encode(1, 1, 0);
    CHECK(f.rule->rule().eval(flipped) == f.rule->rule().eval(a));
  }
}

TEST_CASE("beta independence on random assignments") {
  Fixture f;
  Rng rng(41);
  const int ns = 4;
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<State> a(4);
    for (auto& v : a) v = static_cast<State>(rng.uniform(32));
    // force at least two matches
    int i = static_cast<int>(rng.uniform(ns));
    int j = static_cast<int>(rng.uniform(ns));
    if (i == j) j = (j + 1) % ns;
    a[static_cast<size_t>(i)] = f.rule->encode(i, static_cast<int>(rng.uniform(2)), static_cast<int>(rng.uniform(ns)));
    a[static_cast<size_t>(j)] = f.rule->encode(j, static_cast<int>(rng.uniform(2)), static_cast<int>(rng.uniform(ns)));
    // locate the second match and flip its middle bit
    int first = -1, second = -1;
    for (int s = 0; s < ns; ++s)
      if (std::get<0>(f.rule->decode(a[static_cast<size_t>(s)])) == s) {
        if (first < 0)
          first = s;
        else if (second < 0)
          second = s;
      }
    REQUIRE(second >= 0);
    auto [ts, tb, tp] = f.rule->decode(a[static_cast<size_t>(second)]);
    std::vector<State> b = a;
    b[static_cast<size_t>(second)] = f.rule->encode(ts, tb ^ 1, tp);
    CHECK(f.rule->rule().eval(a) == f.rule->rule().eval(b));
  }
}

TEST_CASE("preimage: frozen single-cell case") {
  Fixture f;
  const Group& g = *f.g;
  Pattern phi;
  phi.states = f.rule->rule().states();
  phi.cells[g.identity()] = f.rule->encode(0, 0, 0); // (a,0,a)
  Pattern psi = f.rule->preimage(phi);
  REQUIRE(psi.cells.size() == 5); // {e} union S
  CHECK(psi.at(g.parse("a")) == f.rule->encode(0, 0, 0));      // (a,0,a)
  CHECK(psi.at(g.parse("a^-1")) == f.rule->encode(1, 0, 0));   // (a^-1,0,a)
  CHECK(psi.at(g.parse("b")) == f.rule->encode(1, 0, 0));      // boundary fill (a^-1,0,a)
  CHECK(psi.at(g.parse("b^-1")) == f.rule->encode(1, 0, 0));   // boundary fill (a^-1,0,a)
  CHECK(psi.at(g.identity()) == f.rule->encode(3, 0, 0));      // boundary fill (b^-1,0,a)
  Pattern image = evolve(f.rule->rule(), psi);
  CHECK(image.at(g.identity()) == f.rule->encode(0, 0, 0));
}

TEST_CASE("preimage: exhaustive single-cell round-trip") {
  Fixture f;
  const Group& g = *f.g;
  for (State q = 0; q < 32; ++q) {
    Pattern phi;
    phi.states = f.rule->rule().states();
    phi.cells[g.identity()] = q;
    Pattern psi = f.rule->preimage(phi);
    CHECK(roundtrip(f.rule->rule(), phi, psi));
  }
}

TEST_CASE("preimage: random round-trips, match-count, determinism") {
  Fixture f;
  const Group& g = *f.g;
  GenSet S = f.g->standard_gens();
  auto B2 = ball(g, S, 2);
  Rng rng(101);
  for (int trial = 0; trial < 10; ++trial) {
    Pattern phi = random_pattern(f.rule->rule(), B2, rng);
    Pattern psi = f.rule->preimage(phi);
    CHECK(roundtrip(f.rule->rule(), phi, psi));
    // exactly two matching neighbours at every site of Y
    for (const auto& [x, v] : phi.cells) {
      int matches = 0;
      for (int i = 0; i < S.size(); ++i) {
        State s = psi.at(g.multiply(x, S[i]));
        if (std::get<0>(f.rule->decode(s)) == i) ++matches;
      }
      CHECK(matches == 2);
    }
    Pattern again = f.rule->preimage(phi);
    CHECK(again == psi);
  }
  // empty target -> empty preimage
  Pattern empty;
  empty.states = f.rule->rule().states();
  CHECK(f.rule->preimage(empty).cells.empty());
}

TEST_CASE("mep witness: frozen case at the identity") {
  Fixture f;
  const Group& g = *f.g;
  Pattern phi;
  phi.states = f.rule->rule().states();
  phi.cells[g.identity()] = f.rule->encode(0, 0, 0);
  auto [psi, psi2, Yc] = f.rule->mep_witness(g.identity(), phi);
  REQUIRE(Yc.size() == 1);
  CHECK(g.format(Yc[0]) == "a^-1"); // the larger fiber element of e
  CHECK(psi2.at(Yc[0]) == f.rule->encode(1, 1, 0)); // (a^-1,1,a)
  int differing = 0;
  for (const auto& [x, v] : psi.cells)
    if (psi2.at(x) != v) ++differing;
  CHECK(differing == 1);
  CHECK(check_mep_certificate(f.rule->rule(), psi, psi2, Yc));
}

TEST_CASE("mep witness: control flip at the read carrier fails") {
  Fixture f;
  const Group& g = *f.g;
  Pattern phi;
  phi.states = f.rule->rule().states();
  phi.cells[g.identity()] = f.rule->encode(0, 0, 0);
  auto [psi, psi2, Yc] = f.rule->mep_witness_control(g.identity(), phi);
  REQUIRE(Yc.size() == 1);
  CHECK(g.format(Yc[0]) == "a");
  CHECK_FALSE(check_mep_certificate(f.rule->rule(), psi, psi2, Yc));
}

TEST_CASE("mep witness: random sites") {
  Fixture f;
  const Group& g = *f.g;
  GenSet S = f.g->standard_gens();
  auto B3 = ball(g, S, 3);
  Rng rng(201);
  for (int trial = 0; trial < 5; ++trial) {
    GroupElement y = B3[rng.uniform(B3.size())];
    Pattern phi = random_pattern(f.rule->rule(), {y}, rng);
    auto [psi, psi2, Yc] = f.rule->mep_witness(y, phi);
    CHECK(check_mep_certificate(f.rule->rule(), psi, psi2, Yc));
  }
}

TEST_CASE("slot rule, m=2 n=1: identical to the field rule") {
  Fixture f;
  auto corr = double_field(f.field, 1);
  auto srule = build_slot_rule(corr);
  CHECK(srule->rule().states()->size() == 32);
  Rng rng(301);
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<State> a(4);
    for (auto& v : a) v = static_cast<State>(rng.uniform(32));
    CHECK(srule->rule().eval(a) == f.rule->rule().eval(a));
  }
  // preimages coincide cell by cell (the codecs agree)
  const Group& g = *f.g;
  auto B1 = ball(g, f.g->standard_gens(), 1);
  for (int trial = 0; trial < 5; ++trial) {
    Pattern phi = random_pattern(f.rule->rule(), B1, rng);
    Pattern phi_slot = phi;
    phi_slot.states = srule->rule().states();
    Pattern p1 = f.rule->preimage(phi);
    Pattern p2 = srule->preimage(phi_slot);
    REQUIRE(p1.cells.size() == p2.cells.size());
    auto it1 = p1.cells.begin();
    auto it2 = p2.cells.begin();
    for (; it1 != p1.cells.end(); ++it1, ++it2) {
      CHECK(it1->first == it2->first);
      CHECK(it1->second == it2->second);
    }
  }
}

TEST_CASE("slot rule, m=4 n=2: shape, q0, no-match default") {
  Fixture f;
  auto srule = build_slot_rule(double_field(f.field, 2));
  CHECK(srule->m() == 4);
  CHECK(srule->n() == 2);
  CHECK(srule->rule().states()->size() == 16384); // (2*4^3)^2
  std::vector<State> zero(4, srule->encode_state({srule->encode_slot(1, 0, {0, 0}), srule->encode_slot(1, 0, {0, 0})}));
  // no slot matches its own direction at positions 0, 2, 3; position 1 has two
  CHECK(srule->rule().eval(zero) == srule->q0());
}

TEST_CASE("slot rule payload independence beyond position n+1") {
  Fixture f;
  auto srule = build_slot_rule(double_field(f.field, 2));
  const Group& g = *f.g;
  GenSet S = f.g->standard_gens();
  Rng rng(401);
  Pattern phi = random_pattern(srule->rule(), {g.identity()}, rng);
  Pattern psi = srule->preimage(phi);
  // neighbourhood assignment at e; matches are (a, slot0), (a, slot1),
  // (a^-1, slot0), (a^-1, slot1) in that order
  auto assignment = [&](const Pattern& p) {
    std::vector<State> a;
    for (int i = 0; i < S.size(); ++i) a.push_back(p.at(g.multiply(g.identity(), S[i])));
    return a;
  };
  std::vector<State> base = assignment(psi);
  State out = srule->rule().eval(base);
  CHECK(out == phi.at(g.identity()));

  auto mutate_slot = [&](const std::vector<State>& a, int s_pos, int k, bool flip_alpha, int new_t0) {
    auto slots = srule->decode_state(a[static_cast<size_t>(s_pos)]);
    int ss, aa;
    std::vector<int> tt;
    srule->decode_slot(slots[static_cast<size_t>(k)], ss, aa, tt);
    if (flip_alpha) aa ^= 1;
    if (new_t0 >= 0) tt[0] = new_t0;
    slots[static_cast<size_t>(k)] = srule->encode_slot(ss, aa, tt);
    std::vector<State> b = a;
    b[static_cast<size_t>(s_pos)] = srule->encode_state(slots);
    return b;
  };
  // match position 4 lives at neighbour a^-1 (S index 1), slot 1
  CHECK(srule->rule().eval(mutate_slot(base, 1, 1, true, -1)) == out);   // alpha_4 unread
  CHECK(srule->rule().eval(mutate_slot(base, 1, 1, false, 3)) == out);   // t_4 unread
  // match position 3 = (a^-1, slot 0): alpha unread, payload read
  CHECK(srule->rule().eval(mutate_slot(base, 1, 0, true, -1)) == out);
  // match position 1 = (a, slot 0): alpha is read
  auto slots_a = srule->decode_state(base[0]);
  int ss, aa;
  std::vector<int> tt;
  srule->decode_slot(slots_a[0], ss, aa, tt);
  CHECK(srule->rule().eval(mutate_slot(base, 0, 0, true, -1)) != out);
}

TEST_CASE("slot rule preimage: round-trips and determinism") {
  Fixture f;
  auto srule = build_slot_rule(double_field(f.field, 2));
  const Group& g = *f.g;
  auto B2 = ball(g, f.g->standard_gens(), 2);
  Rng rng(501);
  for (int trial = 0; trial < 5; ++trial) {
    Pattern phi = random_pattern(srule->rule(), B2, rng);
    Pattern psi = srule->preimage(phi);
    CHECK(roundtrip(srule->rule(), phi, psi));
    CHECK(srule->preimage(phi) == psi);
  }
  Pattern empty;
  empty.states = srule->rule().states();
  CHECK(srule->preimage(empty).cells.empty());
}

TEST_CASE("slot rule mep witness and control") {
  Fixture f;
  auto srule = build_slot_rule(double_field(f.field, 2));
  const Group& g = *f.g;
  Rng rng(601);
  SUBCASE("frozen flip cell at the identity") {
    Pattern phi = random_pattern(srule->rule(), {g.identity()}, rng);
    auto [psi, psi2, Yc] = srule->mep_witness(g.identity(), phi);
    REQUIRE(Yc.size() == 1);
    CHECK(g.format(Yc[0]) == "a^-1"); // pair position 4 = (a^-1, slot 1)
    int differing = 0;
    for (const auto& [x, v] : psi.cells)
      if (psi2.at(x) != v) ++differing;
    CHECK(differing == 1);
    CHECK(check_mep_certificate(srule->rule(), psi, psi2, Yc));
  }
  SUBCASE("control flip at pair position 1 fails") {
    Pattern phi = random_pattern(srule->rule(), {g.identity()}, rng);
    auto [psi, psi2, Yc] = srule->mep_witness_control(g.identity(), phi);
    CHECK_FALSE(check_mep_certificate(srule->rule(), psi, psi2, Yc));
  }
  SUBCASE("random sites") {
    auto B2 = ball(g, f.g->standard_gens(), 2);
    for (int trial = 0; trial < 5; ++trial) {
      GroupElement y = B2[rng.uniform(B2.size())];
      Pattern phi = random_pattern(srule->rule(), {y}, rng);
      auto [psi, psi2, Yc] = srule->mep_witness(y, phi);
      CHECK(check_mep_certificate(srule->rule(), psi, psi2, Yc));
    }
  }
}

TEST_CASE("slot rule on inconsistent table data names the vertex") {
  Fixture f;
  const Group& g = *f.g;
  GenSet S = f.g->standard_gens();
  // a lone arrow a -> e: column sum at e is 1 instead of m = 2
  auto corr = Correspondence::from_table(f.g, S, 2, 1, {{{g.parse("a"), g.identity()}, 1}});
  auto srule = build_slot_rule(corr);
  Pattern phi;
  phi.states = srule->rule().states();
  phi.cells[g.identity()] = 0;
  CHECK_THROWS_WITH_AS(srule->preimage(phi), doctest::Contains("column sum"), DataError);
}

TEST_CASE("slot rule rejects m <= n") {
  Fixture f;
  CHECK_THROWS_AS(build_slot_rule(Correspondence::from_table(f.g, f.g->standard_gens(), 1, 1, {})), UsageError);
}
