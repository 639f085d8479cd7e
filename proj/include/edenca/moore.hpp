#pragma once

#include <memory>
#include <tuple>
#include <vector>

#include "edenca/ca.hpp"
#include "edenca/tree_field.hpp"

namespace edenca {

// Automaton synthesized from a 2:1 compressing vector field.
// Q = S x {0,1} x S; a neighbour entry "matches" when its first coordinate
// equals its own direction. With at least two matches the rule reads the
// minimal pair s < t with phi(s) = (s, alpha, p), phi(t) = (t, beta, q) and
// outputs (p, alpha, q); otherwise the default state q0 (the minimal state).
// The middle bit of the second match (beta) is never read -- that slack is
// what the one-point MEP witnesses exploit.
class FieldRule {
public:
  explicit FieldRule(std::shared_ptr<const VectorField> field);

  const VectorField& field() const { return *field_; }
  const LocalRule& rule() const { return *rule_; }
  const GenSet& S() const { return rule_->neighbourhood(); }

  State encode(int s_idx, int alpha, int p_idx) const;
  std::tuple<int, int, int> decode(State q) const;
  State q0() const { return 0; }

  // Constructive preimage: psi on Y union YS with evolve(psi)|Y = phi.
  Pattern preimage(const Pattern& phi) const;

  // One-point MEP witness around y in dom(phi): returns (psi, psi', {yt})
  // where psi' flips the unread middle bit at the larger fiber element yt.
  // Both patterns carry enough extra boundary fill for the certificate.
  std::tuple<Pattern, Pattern, std::vector<GroupElement>> mep_witness(const GroupElement& y,
                                                                      const Pattern& phi) const;

  // Negative control: flipping at ys (the read alpha carrier) instead.
  std::tuple<Pattern, Pattern, std::vector<GroupElement>> mep_witness_control(const GroupElement& y,
                                                                              const Pattern& phi) const;

private:
  Pattern synthesize(const Pattern& phi, const std::vector<GroupElement>& extra) const;

  std::shared_ptr<const VectorField> field_;
  std::shared_ptr<const LocalRule> rule_;
};

std::shared_ptr<const FieldRule> build_field_rule(std::shared_ptr<const VectorField> field);

// Generalized automaton synthesized from an m:n compressing correspondence
// (m > n). Q = (S x {0,1} x S^n)^n: each of the n coordinates is a "slot"
// carrying one arrow annotation. The rule collects slot entries whose first
// coordinate matches their own direction, takes the lexicographically minimal
// m of them, and redistributes their payloads; the alphas of matches beyond
// position n are never read.
class SlotRule {
public:
  explicit SlotRule(std::shared_ptr<const Correspondence> corr);

  const Correspondence& corr() const { return *corr_; }
  const LocalRule& rule() const { return *rule_; }
  const GenSet& S() const { return rule_->neighbourhood(); }
  int m() const { return corr_->m(); }
  int n() const { return corr_->n(); }

  // Slot payload (s, alpha, t_1..t_n) as a mixed-radix code; a state is the
  // big-endian combination of its n slot codes.
  State encode_slot(int s_idx, int alpha, const std::vector<int>& t) const;
  void decode_slot(State slot, int& s_idx, int& alpha, std::vector<int>& t) const;
  State encode_state(const std::vector<State>& slots) const;
  std::vector<State> decode_state(State q) const;
  State q0() const { return 0; }

  Pattern preimage(const Pattern& phi) const;
  std::tuple<Pattern, Pattern, std::vector<GroupElement>> mep_witness(const GroupElement& y,
                                                                      const Pattern& phi) const;
  std::tuple<Pattern, Pattern, std::vector<GroupElement>> mep_witness_control(const GroupElement& y,
                                                                              const Pattern& phi) const;

private:
  struct Alloc {
    // allocation pairs (s_idx, slot k, source cell) per processed site
    std::vector<std::tuple<int, int, GroupElement>> pairs;
  };
  Pattern synthesize(const Pattern& phi, const std::vector<GroupElement>& extra,
                     std::map<GroupElement, Alloc>* alloc_out) const;

  std::shared_ptr<const Correspondence> corr_;
  std::shared_ptr<const LocalRule> rule_;
  State slot_card_ = 0; // |S| * 2 * |S|^n
};

std::shared_ptr<const SlotRule> build_slot_rule(std::shared_ptr<const Correspondence> corr);

} // namespace edenca
