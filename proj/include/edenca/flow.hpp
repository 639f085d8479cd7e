#pragma once

#include <map>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "edenca/tree_field.hpp"

namespace edenca {

// Bipartite transportation instance on a ball: every source x in B_radius
// must send exactly n units along edges x -> y (y in xS, so y in B_{radius+1});
// sinks inside B_{radius-1} must receive exactly m, the remaining boundary
// sinks accept 0..m. Hard equalities become flow lower bounds.
struct MatchingInstance {
  int radius = 0, m = 0, n = 0;
  std::vector<GroupElement> sources;    // B_radius
  std::vector<GroupElement> sinks;      // B_{radius+1}
  std::size_t hard_sinks = 0;           // prefix count: sinks within B_{radius-1}
};

struct FeasibilityReport {
  int radius = 0, m = 0, n = 0;
  bool feasible = false;
  bool interior_exact = false;          // == (deficiency == 0)
  std::int64_t deficiency = 0;          // unmet hard demand units (minimal)
  std::size_t sources = 0, hard_sinks = 0;
  // witness multiplicities f(x, y) > 0, canonical order, present iff feasible
  std::vector<std::pair<std::pair<GroupElement, GroupElement>, int>> witness;
};

// Maximum-flow construction of an m:n compressing correspondence on a ball.
// Preconditions: m > n >= 1, or m = n = 1. The witness is integral and its
// row/column sums are meant to be re-verified by recount_witness, never
// trusted from the solver.
FeasibilityReport build_correspondence(const Group& g, const GenSet& S, int m, int n, int radius,
                                       std::uint64_t max_edges = 10'000'000);

struct RecountReport {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

// Direct recount of a witness against the instance contract: every source in
// B_radius sends exactly n, every sink in B_{radius-1} receives exactly m,
// boundary sinks receive at most m, and the support satisfies y in xS.
RecountReport recount_witness(const Group& g, const GenSet& S, int m, int n, int radius,
                              const std::vector<std::pair<std::pair<GroupElement, GroupElement>, int>>& witness);

struct ProfileEntry {
  int radius = 0;
  int best_m = 1, best_n = 1; // largest tested m/n with deficiency 0
};

// Per radius, the largest feasible ratio among reduced fractions m/n with
// n <= max_den and m/n <= max_value (radius 0 is boundary-dominated and
// reported as 1 without solving).
std::vector<ProfileEntry> expansion_profile(const Group& g, const GenSet& S, int max_radius,
                                            int max_den = 4, int max_value = 4,
                                            std::uint64_t max_edges = 10'000'000);

} // namespace edenca
