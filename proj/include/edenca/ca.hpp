#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "edenca/group.hpp"

namespace edenca {

using State = std::int64_t;

// Finite ordered state set. Small sets carry explicit names; large generated
// sets (rule state spaces too big to list) carry a namer/parser pair instead.
// Indices are dense 0..size-1 either way.
class StateSet {
public:
  static std::shared_ptr<const StateSet> explicit_set(std::vector<std::string> names);
  static std::shared_ptr<const StateSet> generated(State size, std::string kind,
                                                   std::function<std::string(State)> namer,
                                                   std::function<State(const std::string&)> parser);

  State size() const { return size_; }
  std::string name(State idx) const;
  State index_of(const std::string& name) const; // -1 if unknown
  const std::string& kind() const { return kind_; }

  // Same state space: identical object, or equal explicit names, or matching
  // generated kind+size.
  bool same_as(const StateSet& o) const;

private:
  State size_ = 0;
  std::string kind_;
  std::vector<std::string> names_;
  std::function<std::string(State)> namer_;
  std::function<State(const std::string&)> parser_;
};

// Local rule theta: Q^S -> Q. The evaluator is total and deterministic;
// small rules are table-backed, large ones stay function-backed.
class LocalRule {
public:
  LocalRule(std::shared_ptr<const Group> group, std::shared_ptr<const StateSet> states, GenSet nbhd,
            std::function<State(std::span<const State>)> eval,
            std::size_t table_threshold = 1'000'000);

  const Group& group() const { return *group_; }
  std::shared_ptr<const Group> group_ptr() const { return group_; }
  const std::shared_ptr<const StateSet>& states() const { return states_; }
  const GenSet& neighbourhood() const { return nbhd_; }
  bool table_backed() const { return !table_.empty(); }

  State eval(std::span<const State> assignment) const;

private:
  std::shared_ptr<const Group> group_;
  std::shared_ptr<const StateSet> states_;
  GenSet nbhd_;
  std::function<State(std::span<const State>)> eval_;
  std::vector<State> table_;
};

// Finite map Y -> Q in canonical domain order.
struct Pattern {
  std::shared_ptr<const StateSet> states;
  std::map<GroupElement, State> cells;

  bool contains(const GroupElement& x) const { return cells.count(x) > 0; }
  State at(const GroupElement& x) const;
  std::vector<GroupElement> domain() const;
  bool operator==(const Pattern& o) const;
};

// Total configuration G -> Q given by a deterministic generator function,
// memoized. Concurrent duplicate computation is harmless (values identical).
class LazyConfiguration {
public:
  LazyConfiguration(std::shared_ptr<const StateSet> states, std::function<State(const GroupElement&)> fn);
  const std::shared_ptr<const StateSet>& states() const { return states_; }
  State at(const GroupElement& x) const;

private:
  std::shared_ptr<const StateSet> states_;
  std::function<State(const GroupElement&)> fn_;
  mutable std::mutex mu_;
  mutable std::map<GroupElement, State> memo_;
};

// One evolution step on a patch. Output domain is exactly the S-interior
// { x : xS included in dom(psi) }; an empty interior gives an empty pattern.
Pattern evolve(const LocalRule& rule, const Pattern& psi);

// Evolution at a single site of a lazy configuration.
State evolve_at(const LocalRule& rule, const LazyConfiguration& cfg, const GroupElement& x);

// Left translate: (g.psi)(x) = psi(g x); the domain moves to g^-1 dom(psi).
Pattern translate(const LocalRule& rule, const GroupElement& g, const Pattern& psi);

// Finite MEP certificate. Requires dom(psi1) = dom(psi2) superset of
// Y union (Y S^-1) S with psi1 = psi2 outside Y. True iff the patterns differ
// somewhere in Y and their evolutions agree at every x in Y S^-1; this
// certifies a mutually erasable pair (differences can only influence sites
// whose neighbourhood meets Y).
bool check_mep_certificate(const LocalRule& rule, const Pattern& psi1, const Pattern& psi2,
                           const std::vector<GroupElement>& Y);

// True iff no assignment on dom(phi) S evolves onto phi. Enumerates at most
// `max_assignments` assignments (else BudgetError); `workers` partitions the
// odometer range, merged deterministically.
bool is_goe_bruteforce(const LocalRule& rule, const Pattern& phi,
                       std::uint64_t max_assignments = 100'000'000, int workers = 1);

// --- shared enumeration helpers (used by the oracle module as well) ---

// Sorted x S (resp. Y union Y S^-1 S) for a sorted domain.
std::vector<GroupElement> domain_product(const Group& g, const std::vector<GroupElement>& Y, const GenSet& S);
std::vector<GroupElement> mep_closure(const Group& g, const std::vector<GroupElement>& Y, const GenSet& S);

// Positions of x*S within the sorted vector `domain`; -1 where absent.
std::vector<int> neighbour_positions(const Group& g, const std::vector<GroupElement>& domain,
                                     const GroupElement& x, const GenSet& S);

} // namespace edenca
