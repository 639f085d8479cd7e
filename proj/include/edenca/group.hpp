#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "edenca/errors.hpp"

namespace edenca {

enum class Family : std::uint8_t { Free, FreeProductCyclic, Lattice };

// Description of a supported group: free of rank r, free product of cyclic
// groups C_{o1} * ... * C_{ok}, or the integer lattice Z^d. Generator names
// carry a fixed total order; every tie-break downstream derives from it.
struct GroupSpec {
  Family family = Family::Free;
  std::vector<std::string> generators;
  std::vector<int> orders; // FreeProductCyclic only, one entry per factor, each >= 2

  static GroupSpec free_group(int rank);
  static GroupSpec free_product_cyclic(std::vector<int> orders);
  static GroupSpec lattice(int dimension);

  int rank() const { return static_cast<int>(generators.size()); }
  bool operator==(const GroupSpec&) const = default;

  // Structural digest, used to tag elements so that cross-group usage errors
  // are caught cheaply.
  std::uint64_t digest() const;
};

// Group element in normal form:
//   free:    freely reduced letter codes, code 2i = g_i, 2i+1 = g_i^-1
//   product: alternating syllables stored as (factor, exponent) pairs,
//            exponent in 1..order-1
//   lattice: integer coordinate vector
// `len` is the geodesic word length wrt the standard symmetric generators.
// Comparison is (gid, len, family lex) -- a fixed total order.
struct GroupElement {
  std::uint64_t gid = 0;
  std::int32_t len = 0;
  Family fam = Family::Free;
  std::vector<std::int32_t> w;

  bool is_identity() const { return len == 0; }
  bool operator==(const GroupElement& o) const { return gid == o.gid && w == o.w; }
  std::strong_ordering operator<=>(const GroupElement& o) const;
};

struct ElementHash {
  std::size_t operator()(const GroupElement& e) const;
};

// Ordered set of distinct elements used as a CA neighbourhood or generating
// set. Elements are kept in the canonical total order; `symmetric` records
// closure under inverses. The identity is allowed (Def. of a CA neighbourhood
// only requires a finite subset).
struct GenSet {
  std::vector<GroupElement> elems;
  bool symmetric = false;

  int size() const { return static_cast<int>(elems.size()); }
  const GroupElement& operator[](int i) const { return elems[static_cast<size_t>(i)]; }
  int index_of(const GroupElement& e) const; // -1 if absent
  bool contains(const GroupElement& e) const { return index_of(e) >= 0; }
  bool operator==(const GenSet&) const = default;
};

class Group {
public:
  static std::shared_ptr<const Group> make(GroupSpec spec);

  const GroupSpec& spec() const { return spec_; }
  std::uint64_t gid() const { return gid_; }

  GroupElement identity() const;
  GroupElement generator(int i) const;
  GroupElement generator_power(int i, std::int64_t exp) const;

  GroupElement multiply(const GroupElement& a, const GroupElement& b) const;
  GroupElement inverse(const GroupElement& a) const;

  std::string format(const GroupElement& e) const;
  GroupElement parse(const std::string& text) const;

  GenSet make_gen_set(std::vector<GroupElement> elems) const;
  // generators followed by their inverses, in declaration order, canonically
  // sorted: g1 < g1^-1 < g2 < g2^-1 < ...
  GenSet standard_gens() const;

  // --- Cayley tree structure (free groups; free products of C2 factors) ---
  // Vertices are normal-form words, the parent drops the last letter.
  bool cayley_tree() const;
  int tree_degree() const;                 // degree of the regular tree
  int letter_count() const;
  GroupElement letter_element(int code) const;
  int last_letter(const GroupElement& e) const; // -1 for the identity
  int cancel_code(int code) const;              // letter cancelling `code`
  GroupElement append_letter(const GroupElement& e, int code) const;
  GroupElement parent_word(const GroupElement& e) const;

private:
  explicit Group(GroupSpec spec);
  void check_mine(const GroupElement& e) const;

  GroupSpec spec_;
  std::uint64_t gid_ = 0;
};

// All products of at most `radius` elements of S, deduplicated and sorted in
// the canonical length-lex order; deterministic across runs.
std::vector<GroupElement> ball(const Group& g, const GenSet& S, int radius,
                               std::size_t max_elements = 20'000'000);

} // namespace edenca
