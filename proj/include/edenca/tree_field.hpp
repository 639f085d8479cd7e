#pragma once

#include <array>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "edenca/group.hpp"

namespace edenca {

// Bounded-propagation 2:1 compressing vector field on a group whose Cayley
// graph (wrt the standard symmetric generators) is a regular tree of degree
// >= 3: free groups of rank >= 2 and free products of >= 3 copies of C2.
//
// Every vertex is either P1 (maps to its parent) or D (maps to its own
// minimal child, which becomes "targeted"). A vertex targeted by its parent
// keeps one P1 child, an untargeted vertex keeps two; the root keeps two P1
// children and maps to its third child. This yields f(x)^-1 x in S and
// #f^-1(x) = 2 everywhere.
class VectorField {
public:
  enum class Status { Root, ToParent, ToChild };

  VectorField(std::shared_ptr<const Group> group, GenSet S);

  const Group& group() const { return *group_; }
  std::shared_ptr<const Group> group_ptr() const { return group_; }
  const GenSet& gens() const { return S_; }

  GroupElement apply(const GroupElement& x) const;             // f(x)
  std::array<GroupElement, 2> fiber(const GroupElement& x) const; // f^-1(x), sorted
  Status status(const GroupElement& x) const;
  bool targeted(const GroupElement& x) const;                  // t(x): f(parent(x)) == x

  // Stable identifier for reports.
  std::string digest() const;

private:
  struct Walk {
    Status status = Status::Root;
    bool targeted = false;
  };
  Walk walk(const GroupElement& x) const;
  int min_child_code(const GroupElement& x) const;
  int second_child_code(const GroupElement& x) const;

  std::shared_ptr<const Group> group_;
  GenSet S_;
};

std::shared_ptr<const VectorField> build_tree_field(std::shared_ptr<const Group> group, const GenSet& S);

struct FieldViolation {
  GroupElement element;
  std::string kind; // "displacement" or "fiber"
  std::string detail;
};

struct FieldReport {
  int radius = 0;
  std::size_t interior_size = 0;
  std::vector<FieldViolation> violations;
  bool ok() const { return violations.empty(); }
};

// Checks, for every x in B_{radius-1}: f(x)^-1 x in S and exactly two
// f-preimages of x inside B_radius (sound: all preimages of x lie in x S^-1).
FieldReport verify_field(const VectorField& field, int radius);

// DOT rendering of the field restricted to B_radius (arrows leaving the ball
// are dropped; P1/D/root colouring).
std::string field_to_dot(const VectorField& field, int radius);

// m:n compressing correspondence: f(x,y) with row sums n, column sums m > n,
// supported on y in xS. Backed either by c copies of a 2:1 field (global) or
// by an explicit finite table.
class Correspondence {
public:
  static std::shared_ptr<const Correspondence> from_field(std::shared_ptr<const VectorField> field, int c);
  static std::shared_ptr<const Correspondence> from_table(std::shared_ptr<const Group> group, GenSet S, int m,
                                                          int n,
                                                          std::vector<std::pair<std::pair<GroupElement, GroupElement>, int>> entries);

  const Group& group() const { return *group_; }
  std::shared_ptr<const Group> group_ptr() const { return group_; }
  const GenSet& gens() const { return S_; }
  int m() const { return m_; }
  int n() const { return n_; }
  bool field_backed() const { return field_ != nullptr; }
  const std::shared_ptr<const VectorField>& field() const { return field_; }

  int at(const GroupElement& x, const GroupElement& y) const; // f(x, y)
  // Arrows out of x (total multiplicity n) and into x (total multiplicity m).
  // Table-backed correspondences return whatever the table records; callers
  // validating exact sums use these and report DataError on mismatch.
  std::vector<std::pair<GroupElement, int>> arrows_out(const GroupElement& x) const;
  std::vector<std::pair<GroupElement, int>> arrows_in(const GroupElement& x) const;

  std::string digest() const;

private:
  std::shared_ptr<const Group> group_;
  GenSet S_;
  int m_ = 0, n_ = 0, c_ = 0;
  std::shared_ptr<const VectorField> field_;
  std::map<GroupElement, std::vector<std::pair<GroupElement, int>>> out_, in_;
};

// The field doubled c times: f(x,y) = c when y = field(x); m = 2c, n = c.
std::shared_ptr<const Correspondence> double_field(std::shared_ptr<const VectorField> field, int c);

} // namespace edenca
