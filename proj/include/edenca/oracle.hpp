#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "edenca/ca.hpp"

namespace edenca {

struct SearchBudget {
  std::uint64_t max_assignments = 100'000'000;
  int max_width = 8;           // moore_sweep: largest |Y| probed
  double time_cap_seconds = 0; // 0 = unlimited
};

enum class SearchStatus { Found, Exhausted, Budget };

struct SearchOutcome {
  SearchStatus status = SearchStatus::Exhausted;
  std::optional<Pattern> witness;                        // GOE pattern
  std::optional<std::pair<Pattern, Pattern>> pair_witness; // MEP pair
  std::vector<GroupElement> domain;                      // Y searched
  std::uint64_t enumerated = 0;
};

// Enumerates patterns on Y in canonical odometer order and returns the first
// one outside the reachable image (computed once by evolving every assignment
// on Y S); witnesses are re-verified with the independent per-pattern search.
SearchOutcome find_goe(const LocalRule& rule, const std::vector<GroupElement>& Y, const SearchBudget& budget,
                       int workers = 1);

// Searches pairs on Y union Y S^-1 S differing only inside Y with equal
// evolution on Y S^-1. With a seed the first pattern is fixed to the seed's
// restriction and only the Y-cells of the partner vary. Witnesses are
// re-verified through check_mep_certificate.
SearchOutcome find_mep(const LocalRule& rule, const std::vector<GroupElement>& Y, const SearchBudget& budget,
                       const std::optional<Pattern>& seed = std::nullopt);

// All 16 two-state rules on Z with S = {0, 1}.
std::shared_ptr<const LocalRule> z_rule_from_bits(int bits);
// Majority rule on Z with S = {-1, 0, 1}.
std::shared_ptr<const LocalRule> z_majority_rule();

struct SweepRow {
  int rule_bits = 0;
  std::string mep_status;   // "found" / "exhausted" / "budget"
  int mep_width = 0;        // width of the find, or max width searched
  std::string goe_status;
  int goe_width = 0;
  bool consistent = true;   // no found/exhausted mismatch between the two
  std::optional<Pattern> goe_witness;
  std::optional<std::pair<Pattern, Pattern>> mep_witness;
};

struct SweepTable {
  int max_width = 0;
  std::vector<SweepRow> rows;
  bool all_consistent = true;
};

// Moore-Myhill baseline: for every rule bits 0..15 on Z with S = {0,1},
// search MEP and GOE at widths 1..max_width. On an amenable group each rule
// must have both or neither within reach; an inconsistency indicates an
// implementation bug, not a counterexample.
SweepTable moore_sweep(const SearchBudget& budget);

} // namespace edenca
