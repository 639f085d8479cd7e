#include "edenca/linear.hpp"

#include <algorithm>
#include <sstream>

namespace edenca {

AlgebraElement algebra_zero(std::shared_ptr<const Group> g) { return AlgebraElement{std::move(g), {}}; }

AlgebraElement algebra_unit(std::shared_ptr<const Group> g) {
  AlgebraElement a{g, {}};
  a.support.insert(g->identity());
  return a;
}

AlgebraElement algebra_term(std::shared_ptr<const Group> g, const GroupElement& x) {
  AlgebraElement a{std::move(g), {}};
  a.support.insert(x);
  return a;
}

AlgebraElement add(const AlgebraElement& u, const AlgebraElement& v) {
  if (u.group->gid() != v.group->gid()) throw UsageError("algebra elements from different groups");
  AlgebraElement r{u.group, u.support};
  for (const auto& x : v.support) {
    auto [it, inserted] = r.support.insert(x);
    if (!inserted) r.support.erase(it);
  }
  return r;
}

AlgebraElement convolve(const AlgebraElement& u, const AlgebraElement& v) {
  if (u.group->gid() != v.group->gid()) throw UsageError("algebra elements from different groups");
  AlgebraElement r{u.group, {}};
  for (const auto& h : u.support)
    for (const auto& k : v.support) {
      GroupElement g = u.group->multiply(h, k);
      auto [it, inserted] = r.support.insert(g);
      if (!inserted) r.support.erase(it);
    }
  return r;
}

AlgebraElement parse_algebra(std::shared_ptr<const Group> g, const std::string& text) {
  AlgebraElement r{g, {}};
  std::string cur;
  auto flush = [&]() {
    std::string tok = cur;
    cur.clear();
    // trim
    while (!tok.empty() && (tok.front() == ' ' || tok.front() == '\t')) tok.erase(tok.begin());
    while (!tok.empty() && (tok.back() == ' ' || tok.back() == '\t')) tok.pop_back();
    if (tok.empty()) throw UsageError("empty term in algebra expression");
    if (tok == "0") return;
    r = add(r, algebra_term(g, g->parse(tok)));
  };
  int depth = 0;
  for (char c : text) {
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if (c == '+' && depth == 0)
      flush();
    else
      cur.push_back(c);
  }
  flush();
  return r;
}

std::string format_algebra(const AlgebraElement& a) {
  if (a.support.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& x : a.support) {
    if (!first) os << " + ";
    os << a.group->format(x);
    first = false;
  }
  return os.str();
}

LinearRule::LinearRule(AlgebraElement alpha, AlgebraElement beta, std::optional<GenSet> S_opt)
    : alpha_(std::move(alpha)), beta_(std::move(beta)) {
  if (alpha_.group->gid() != beta_.group->gid()) throw UsageError("alpha and beta from different groups");
  if (alpha_.zero() && beta_.zero()) throw UsageError("alpha and beta must not both be zero");
  auto g = alpha_.group;

  std::vector<GroupElement> sv;
  for (const auto& x : alpha_.support) sv.push_back(g->inverse(x));
  for (const auto& x : beta_.support) sv.push_back(g->inverse(x));
  std::sort(sv.begin(), sv.end());
  sv.erase(std::unique(sv.begin(), sv.end()), sv.end());
  GenSet S = S_opt ? std::move(*S_opt) : g->make_gen_set(std::move(sv));
  if (S_opt)
    for (const auto& x : sv)
      if (!S.contains(x)) throw UsageError("S must contain the inverses of the supports of alpha and beta");

  auto states = StateSet::explicit_set({"(0,0)", "(0,1)", "(1,0)", "(1,1)"});

  // Per-position GF(2) coefficients a_s = alpha(s^-1), b_s = beta(s^-1).
  std::vector<int> ca, cb;
  for (int i = 0; i < S.size(); ++i) {
    GroupElement si = g->inverse(S[i]);
    ca.push_back(alpha_.support.count(si) ? 1 : 0);
    cb.push_back(beta_.support.count(si) ? 1 : 0);
  }
  auto eval = [ca, cb](std::span<const State> phi) -> State {
    int out = 0;
    for (size_t i = 0; i < phi.size(); ++i) {
      int q1 = static_cast<int>(phi[i] >> 1), q2 = static_cast<int>(phi[i] & 1);
      out ^= (ca[i] & q1) ^ (cb[i] & q2);
    }
    return encode(out, 0);
  };
  rule_ = std::make_shared<LocalRule>(g, states, std::move(S), eval);
}

std::shared_ptr<const LinearRule> build_linear_rule(AlgebraElement alpha, AlgebraElement beta,
                                                    std::optional<GenSet> S) {
  return std::make_shared<LinearRule>(std::move(alpha), std::move(beta), std::move(S));
}

std::shared_ptr<const LinearRule> muller_rule() {
  auto g = Group::make(GroupSpec::free_product_cyclic({2, 2, 2}));
  AlgebraElement alpha = add(algebra_term(g, g->generator(0)), algebra_term(g, g->generator(1)));
  AlgebraElement beta = add(algebra_term(g, g->generator(1)), algebra_term(g, g->generator(2)));
  return build_linear_rule(std::move(alpha), std::move(beta));
}

Pattern goe_witness_linear(const LinearRule& rule) {
  Pattern p;
  p.states = rule.rule().states();
  p.cells[rule.group().identity()] = LinearRule::encode(0, 1);
  return p;
}

BitMatrix::BitMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), wpr_((cols + 63) / 64), data_(rows * wpr_, 0) {}

bool BitMatrix::get(std::size_t r, std::size_t c) const {
  return (data_[r * wpr_ + c / 64] >> (c % 64)) & 1;
}

void BitMatrix::set(std::size_t r, std::size_t c, bool v) {
  std::uint64_t& w = data_[r * wpr_ + c / 64];
  std::uint64_t bit = std::uint64_t{1} << (c % 64);
  if (v)
    w |= bit;
  else
    w &= ~bit;
}

void BitMatrix::xor_rows(std::size_t dst, std::size_t src) {
  for (std::size_t i = 0; i < wpr_; ++i) data_[dst * wpr_ + i] ^= data_[src * wpr_ + i];
}

std::vector<std::size_t> BitMatrix::rref() {
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t col = 0; col < cols_ && row < rows_; ++col) {
    std::size_t pr = row;
    while (pr < rows_ && !get(pr, col)) ++pr;
    if (pr == rows_) continue;
    if (pr != row)
      for (std::size_t i = 0; i < wpr_; ++i) std::swap(data_[pr * wpr_ + i], data_[row * wpr_ + i]);
    for (std::size_t r = 0; r < rows_; ++r)
      if (r != row && get(r, col)) xor_rows(r, row);
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

std::vector<std::vector<bool>> BitMatrix::nullspace() const {
  BitMatrix work = *this;
  std::vector<std::size_t> pivots = work.rref();
  std::vector<bool> is_pivot(cols_, false);
  for (std::size_t c : pivots) is_pivot[c] = true;

  std::vector<std::vector<bool>> basis;
  for (std::size_t free_col = 0; free_col < cols_; ++free_col) {
    if (is_pivot[free_col]) continue;
    std::vector<bool> v(cols_, false);
    v[free_col] = true;
    // pivot rows are in column order; row i owns pivots[i]
    for (std::size_t i = 0; i < pivots.size(); ++i)
      if (work.get(i, free_col)) v[pivots[i]] = true;
    basis.push_back(std::move(v));
  }
  return basis;
}

PatchMatrix build_patch_matrix(const LinearRule& rule, const std::vector<GroupElement>& in_domain,
                               const std::vector<GroupElement>& out_domain) {
  const Group& g = rule.group();
  PatchMatrix pm{in_domain, out_domain, BitMatrix(2 * out_domain.size(), 2 * in_domain.size())};
  // theta at x reads cell h = x s with coefficient alpha(s^-1) on the first
  // coordinate; s^-1 = h^-1 x, so entry (x, h) is alpha(h^-1 x) / beta(h^-1 x).
  for (std::size_t r = 0; r < out_domain.size(); ++r) {
    for (std::size_t c = 0; c < in_domain.size(); ++c) {
      GroupElement d = g.multiply(g.inverse(in_domain[c]), out_domain[r]);
      if (rule.alpha().support.count(d)) pm.mat.set(2 * r, 2 * c, true);
      if (rule.beta().support.count(d)) pm.mat.set(2 * r, 2 * c + 1, true);
    }
  }
  return pm;
}

KernelScanReport kernel_scan(const LinearRule& rule, int radius, std::uint64_t max_matrix_entries) {
  if (radius < 0) throw UsageError("kernel_scan radius must be >= 0");
  const Group& g = rule.group();
  auto gp = rule.alpha().group;

  std::vector<GroupElement> Bk = ball(g, rule.S(), radius);
  // Image support of a configuration supported in B_k lies in B_k S^-1
  // (union B_k for safety when e is not in S^-1 S).
  std::set<GroupElement> rows_set(Bk.begin(), Bk.end());
  for (const auto& x : Bk)
    for (const auto& s : rule.S().elems) rows_set.insert(g.multiply(x, g.inverse(s)));
  std::vector<GroupElement> rows(rows_set.begin(), rows_set.end());

  if (static_cast<std::uint64_t>(rows.size()) * (2 * Bk.size()) > max_matrix_entries)
    throw BudgetError("kernel_scan: matrix exceeds the configured size budget");

  // Only the first output coordinate is non-trivial; one row per site.
  BitMatrix M(rows.size(), 2 * Bk.size());
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < Bk.size(); ++c) {
      GroupElement d = g.multiply(g.inverse(Bk[c]), rows[r]);
      if (rule.alpha().support.count(d)) M.set(r, 2 * c, true);
      if (rule.beta().support.count(d)) M.set(r, 2 * c + 1, true);
    }

  KernelScanReport rep;
  rep.radius = radius;
  rep.matrix_rows = rows.size();
  rep.matrix_cols = 2 * Bk.size();
  {
    BitMatrix copy = M;
    rep.rank = copy.rref().size();
  }
  for (const auto& v : M.nullspace()) {
    AlgebraElement gamma = algebra_zero(gp), delta = algebra_zero(gp);
    for (std::size_t c = 0; c < Bk.size(); ++c) {
      if (v[2 * c]) gamma.support.insert(Bk[c]);
      if (v[2 * c + 1]) delta.support.insert(Bk[c]);
    }
    // Independent re-verification: gamma*alpha + delta*beta must vanish.
    AlgebraElement check = add(convolve(gamma, rule.alpha()), convolve(delta, rule.beta()));
    if (!check.zero()) throw DataError("kernel_scan: basis vector failed convolution re-verification");
    rep.basis.emplace_back(std::move(gamma), std::move(delta));
  }
  return rep;
}

Pattern pattern_xor(const LinearRule& rule, const Pattern& a, const Pattern& b) {
  if (!a.states->same_as(*rule.rule().states()) || !b.states->same_as(*rule.rule().states()))
    throw UsageError("pattern_xor: state sets do not match the rule");
  if (a.cells.size() != b.cells.size()) throw UsageError("pattern_xor: domains differ");
  Pattern r;
  r.states = a.states;
  auto ita = a.cells.begin();
  auto itb = b.cells.begin();
  for (; ita != a.cells.end(); ++ita, ++itb) {
    if (!(ita->first == itb->first)) throw UsageError("pattern_xor: domains differ");
    r.cells[ita->first] = ita->second ^ itb->second;
  }
  return r;
}

} // namespace edenca
