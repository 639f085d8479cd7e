#pragma once

#include <memory>
#include <set>
#include <string>
#include <vector>

#include "edenca/ca.hpp"

namespace edenca {

// Finitely supported function G -> GF(2), stored as its support in normal
// form. Addition is symmetric difference, the product is convolution.
struct AlgebraElement {
  std::shared_ptr<const Group> group;
  std::set<GroupElement> support;

  bool zero() const { return support.empty(); }
  bool operator==(const AlgebraElement& o) const { return support == o.support; }
};

AlgebraElement algebra_zero(std::shared_ptr<const Group> g);
AlgebraElement algebra_unit(std::shared_ptr<const Group> g);                    // delta_e
AlgebraElement algebra_term(std::shared_ptr<const Group> g, const GroupElement& x);
AlgebraElement add(const AlgebraElement& u, const AlgebraElement& v);           // GF(2) sum
// (uv)(g) = sum_h u(h) v(h^-1 g) over GF(2).
AlgebraElement convolve(const AlgebraElement& u, const AlgebraElement& v);

// "x + y.z" style: '+'-separated element words. Formatting is canonical.
AlgebraElement parse_algebra(std::shared_ptr<const Group> g, const std::string& text);
std::string format_algebra(const AlgebraElement& a);

// Linear rule over Q = GF(2)^2 with evaluator
//   theta(phi) = ( sum_s alpha(s^-1) phi(s)_1 + beta(s^-1) phi(s)_2 , 0 ).
// S contains the inverses of the supports of alpha and beta, so the sum
// covers every nonzero term. On configurations written as a coordinate pair
// (gamma, delta) of algebra elements this computes gamma*alpha + delta*beta
// under right convolution; kernel elements are exactly the common-multiple
// relations between alpha and beta.
class LinearRule {
public:
  // S defaults to the inverses of the supports; a larger S (still containing
  // them) may be supplied, e.g. to widen kernel-scan balls.
  LinearRule(AlgebraElement alpha, AlgebraElement beta, std::optional<GenSet> S = std::nullopt);

  const AlgebraElement& alpha() const { return alpha_; }
  const AlgebraElement& beta() const { return beta_; }
  const LocalRule& rule() const { return *rule_; }
  const GenSet& S() const { return rule_->neighbourhood(); }
  const Group& group() const { return *alpha_.group; }

  // state index = 2*q1 + q2 for (q1, q2) in GF(2)^2
  static State encode(int q1, int q2) { return 2 * q1 + q2; }

private:
  AlgebraElement alpha_, beta_;
  std::shared_ptr<const LocalRule> rule_;
};

std::shared_ptr<const LinearRule> build_linear_rule(AlgebraElement alpha, AlgebraElement beta,
                                                    std::optional<GenSet> S = std::nullopt);

// Muller's automaton on G = <x,y,z | x^2, y^2, z^2>: a linear rule whose
// image lies in (K x 0)^G (so orphans exist) while alpha and beta admit no
// common multiple (so the kernel is trivial and there are no MEPs). The
// coefficients are alpha = x+y, beta = y+z: both non-units, with no nonzero
// syzygy gamma*alpha + delta*beta = 0 (top-length terms of gamma*(x+y) and
// delta*(y+z) would have to end in x and z simultaneously). Note a pair with
// an invertible coefficient cannot work here: if alpha is a unit then
// gamma = delta*beta*alpha^-1 is a syzygy for every delta.
std::shared_ptr<const LinearRule> muller_rule();

// {e -> (0,1)}: guaranteed orphan because the image has second coordinate 0.
Pattern goe_witness_linear(const LinearRule& rule);

// GF(2) matrix with packed rows.
class BitMatrix {
public:
  BitMatrix(std::size_t rows, std::size_t cols);
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool get(std::size_t r, std::size_t c) const;
  void set(std::size_t r, std::size_t c, bool v);
  void xor_rows(std::size_t dst, std::size_t src);

  // In-place reduced row echelon form; returns pivot columns.
  std::vector<std::size_t> rref();
  // Basis of the right nullspace (each vector of length cols()).
  std::vector<std::vector<bool>> nullspace() const;

private:
  std::size_t rows_, cols_, wpr_;
  std::vector<std::uint64_t> data_;
};

// Matrix of the evolution between pattern spaces: columns indexed by
// (element of in_domain, coordinate), rows by (element of out_domain,
// coordinate). Cells outside in_domain are treated as zero.
struct PatchMatrix {
  std::vector<GroupElement> in_elems, out_elems;
  BitMatrix mat;
};

PatchMatrix build_patch_matrix(const LinearRule& rule, const std::vector<GroupElement>& in_domain,
                               const std::vector<GroupElement>& out_domain);

struct KernelScanReport {
  int radius = 0;
  std::size_t matrix_rows = 0, matrix_cols = 0;
  std::size_t rank = 0;
  // Kernel basis as (gamma, delta) coordinate pairs; empty means: no MEP with
  // difference supported in B_radius.
  std::vector<std::pair<AlgebraElement, AlgebraElement>> basis;
  bool empty() const { return basis.empty(); }
};

// Assembles the matrix of the evolution restricted to configurations
// supported in B_radius (evaluated on B_radius S^-1 union B_radius, outside
// of which the image vanishes), row-reduces, and returns a kernel basis.
// Every basis element is re-verified against the convolution identity.
KernelScanReport kernel_scan(const LinearRule& rule, int radius, std::uint64_t max_matrix_entries = 100'000'000);

// Pointwise GF(2) sum of two patterns on the same domain.
Pattern pattern_xor(const LinearRule& rule, const Pattern& a, const Pattern& b);

} // namespace edenca
