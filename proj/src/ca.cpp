#include "edenca/ca.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <set>
#include <unordered_map>
#include <unordered_set>

namespace edenca {

std::shared_ptr<const StateSet> StateSet::explicit_set(std::vector<std::string> names) {
  if (names.empty()) throw UsageError("state set must be nonempty");
  auto s = std::make_shared<StateSet>();
  s->size_ = static_cast<State>(names.size());
  s->kind_ = "explicit";
  s->names_ = std::move(names);
  for (size_t i = 0; i < s->names_.size(); ++i)
    for (size_t j = i + 1; j < s->names_.size(); ++j)
      if (s->names_[i] == s->names_[j]) throw UsageError("duplicate state name: " + s->names_[i]);
  return s;
}

std::shared_ptr<const StateSet> StateSet::generated(State size, std::string kind,
                                                    std::function<std::string(State)> namer,
                                                    std::function<State(const std::string&)> parser) {
  if (size <= 0) throw UsageError("state set must be nonempty");
  auto s = std::make_shared<StateSet>();
  s->size_ = size;
  s->kind_ = std::move(kind);
  s->namer_ = std::move(namer);
  s->parser_ = std::move(parser);
  return s;
}

std::string StateSet::name(State idx) const {
  if (idx < 0 || idx >= size_) throw UsageError("state index out of range");
  if (!names_.empty()) return names_[static_cast<size_t>(idx)];
  return namer_(idx);
}

State StateSet::index_of(const std::string& name) const {
  if (!names_.empty()) {
    for (size_t i = 0; i < names_.size(); ++i)
      if (names_[i] == name) return static_cast<State>(i);
    return -1;
  }
  return parser_(name);
}

bool StateSet::same_as(const StateSet& o) const {
  if (this == &o) return true;
  if (size_ != o.size_ || kind_ != o.kind_) return false;
  if (!names_.empty()) return names_ == o.names_;
  return true;
}

LocalRule::LocalRule(std::shared_ptr<const Group> group, std::shared_ptr<const StateSet> states, GenSet nbhd,
                     std::function<State(std::span<const State>)> eval, std::size_t table_threshold)
    : group_(std::move(group)), states_(std::move(states)), nbhd_(std::move(nbhd)), eval_(std::move(eval)) {
  if (nbhd_.size() == 0) throw UsageError("rule neighbourhood must be nonempty");
  // Tabulate small rules: |Q|^|S| entries, odometer with the first
  // neighbourhood position as the most significant digit.
  double entries = std::pow(static_cast<double>(states_->size()), nbhd_.size());
  if (entries <= static_cast<double>(table_threshold)) {
    std::uint64_t total = 1;
    for (int i = 0; i < nbhd_.size(); ++i) total *= static_cast<std::uint64_t>(states_->size());
    table_.resize(total);
    std::vector<State> a(static_cast<size_t>(nbhd_.size()), 0);
    for (std::uint64_t idx = 0;; ++idx) {
      table_[idx] = eval_(a);
      int p = nbhd_.size() - 1;
      while (p >= 0 && ++a[static_cast<size_t>(p)] == states_->size()) a[static_cast<size_t>(p--)] = 0;
      if (p < 0) break;
    }
  }
}

State LocalRule::eval(std::span<const State> assignment) const {
  if (static_cast<int>(assignment.size()) != nbhd_.size())
    throw UsageError("assignment size does not match neighbourhood");
  if (!table_.empty()) {
    std::uint64_t idx = 0;
    for (State v : assignment) idx = idx * static_cast<std::uint64_t>(states_->size()) + static_cast<std::uint64_t>(v);
    return table_[idx];
  }
  return eval_(assignment);
}

State Pattern::at(const GroupElement& x) const {
  auto it = cells.find(x);
  if (it == cells.end()) throw UsageError("pattern has no value at requested element");
  return it->second;
}

std::vector<GroupElement> Pattern::domain() const {
  std::vector<GroupElement> d;
  d.reserve(cells.size());
  for (const auto& [k, v] : cells) d.push_back(k);
  return d;
}

bool Pattern::operator==(const Pattern& o) const {
  if (!states || !o.states) return cells == o.cells && states == o.states;
  return states->same_as(*o.states) && cells == o.cells;
}

LazyConfiguration::LazyConfiguration(std::shared_ptr<const StateSet> states,
                                     std::function<State(const GroupElement&)> fn)
    : states_(std::move(states)), fn_(std::move(fn)) {}

State LazyConfiguration::at(const GroupElement& x) const {
  {
    std::lock_guard<std::mutex> lk(mu_);
    auto it = memo_.find(x);
    if (it != memo_.end()) return it->second;
  }
  State v = fn_(x);
  std::lock_guard<std::mutex> lk(mu_);
  memo_.emplace(x, v);
  return v;
}

namespace {

void check_pattern_rule(const LocalRule& rule, const Pattern& p, const char* what) {
  if (!p.states || !p.states->same_as(*rule.states()))
    throw UsageError(std::string(what) + ": pattern state set does not match the rule");
  for (const auto& [x, v] : p.cells) {
    if (x.gid != rule.group().gid()) throw UsageError(std::string(what) + ": pattern element from another group");
    if (v < 0 || v >= rule.states()->size()) throw UsageError(std::string(what) + ": state index out of range");
  }
}

} // namespace

Pattern evolve(const LocalRule& rule, const Pattern& psi) {
  check_pattern_rule(rule, psi, "evolve");
  const Group& g = rule.group();
  const GenSet& S = rule.neighbourhood();

  // Candidate interior sites: y s^-1 for y in dom, s in S.
  std::vector<GroupElement> inv;
  inv.reserve(static_cast<size_t>(S.size()));
  for (const auto& s : S.elems) inv.push_back(g.inverse(s));
  std::set<GroupElement> candidates;
  for (const auto& [y, v] : psi.cells)
    for (const auto& si : inv) candidates.insert(g.multiply(y, si));

  Pattern out;
  out.states = psi.states;
  std::vector<State> a(static_cast<size_t>(S.size()));
  for (const auto& x : candidates) {
    bool interior = true;
    for (int i = 0; i < S.size() && interior; ++i) {
      auto it = psi.cells.find(g.multiply(x, S[i]));
      if (it == psi.cells.end())
        interior = false;
      else
        a[static_cast<size_t>(i)] = it->second;
    }
    if (interior) out.cells.emplace(x, rule.eval(a));
  }
  return out;
}

State evolve_at(const LocalRule& rule, const LazyConfiguration& cfg, const GroupElement& x) {
  if (!cfg.states()->same_as(*rule.states()))
    throw UsageError("evolve_at: configuration state set does not match the rule");
  const Group& g = rule.group();
  const GenSet& S = rule.neighbourhood();
  std::vector<State> a(static_cast<size_t>(S.size()));
  for (int i = 0; i < S.size(); ++i) a[static_cast<size_t>(i)] = cfg.at(g.multiply(x, S[i]));
  return rule.eval(a);
}

Pattern translate(const LocalRule& rule, const GroupElement& g, const Pattern& psi) {
  const Group& G = rule.group();
  GroupElement gi = G.inverse(g);
  Pattern out;
  out.states = psi.states;
  for (const auto& [x, v] : psi.cells) out.cells.emplace(G.multiply(gi, x), v);
  return out;
}

std::vector<GroupElement> domain_product(const Group& g, const std::vector<GroupElement>& Y, const GenSet& S) {
  std::set<GroupElement> d;
  for (const auto& y : Y)
    for (const auto& s : S.elems) d.insert(g.multiply(y, s));
  return {d.begin(), d.end()};
}

std::vector<GroupElement> mep_closure(const Group& g, const std::vector<GroupElement>& Y, const GenSet& S) {
  std::set<GroupElement> d(Y.begin(), Y.end());
  for (const auto& y : Y)
    for (const auto& s : S.elems) {
      GroupElement ys = g.multiply(y, g.inverse(s));
      for (const auto& t : S.elems) d.insert(g.multiply(ys, t));
    }
  return {d.begin(), d.end()};
}

std::vector<int> neighbour_positions(const Group& g, const std::vector<GroupElement>& domain,
                                     const GroupElement& x, const GenSet& S) {
  std::vector<int> pos(static_cast<size_t>(S.size()), -1);
  for (int i = 0; i < S.size(); ++i) {
    GroupElement xs = g.multiply(x, S[i]);
    auto it = std::lower_bound(domain.begin(), domain.end(), xs);
    if (it != domain.end() && *it == xs) pos[static_cast<size_t>(i)] = static_cast<int>(it - domain.begin());
  }
  return pos;
}

bool check_mep_certificate(const LocalRule& rule, const Pattern& psi1, const Pattern& psi2,
                           const std::vector<GroupElement>& Y) {
  check_pattern_rule(rule, psi1, "check_mep_certificate");
  check_pattern_rule(rule, psi2, "check_mep_certificate");
  if (Y.empty()) throw UsageError("check_mep_certificate: Y must be nonempty");
  const Group& g = rule.group();
  const GenSet& S = rule.neighbourhood();

  if (psi1.cells.size() != psi2.cells.size())
    throw UsageError("check_mep_certificate: domains differ");
  for (auto it1 = psi1.cells.begin(), it2 = psi2.cells.begin(); it1 != psi1.cells.end(); ++it1, ++it2)
    if (!(it1->first == it2->first)) throw UsageError("check_mep_certificate: domains differ");

  std::set<GroupElement> Yset(Y.begin(), Y.end());
  for (const auto& d : mep_closure(g, Y, S))
    if (!psi1.contains(d)) throw UsageError("check_mep_certificate: domain must cover Y (Y S^-1) S");
  for (const auto& [x, v] : psi1.cells)
    if (!Yset.count(x) && psi2.at(x) != v)
      throw UsageError("check_mep_certificate: patterns differ outside Y");

  bool differ = false;
  for (const auto& y : Y)
    if (psi1.at(y) != psi2.at(y)) differ = true;
  if (!differ) return false;

  // Evolutions must agree at every x with xS meeting Y, i.e. x in Y S^-1.
  std::set<GroupElement> sites;
  for (const auto& y : Y)
    for (const auto& s : S.elems) sites.insert(g.multiply(y, g.inverse(s)));
  std::vector<State> a1(static_cast<size_t>(S.size())), a2(static_cast<size_t>(S.size()));
  for (const auto& x : sites) {
    for (int i = 0; i < S.size(); ++i) {
      GroupElement xs = g.multiply(x, S[i]);
      a1[static_cast<size_t>(i)] = psi1.at(xs);
      a2[static_cast<size_t>(i)] = psi2.at(xs);
    }
    if (rule.eval(a1) != rule.eval(a2)) return false;
  }
  return true;
}

namespace {

// Digits of `idx` over base |Q| in domain order, first cell most significant.
void odometer_assign(std::uint64_t idx, State q, std::vector<State>& out) {
  for (size_t p = out.size(); p-- > 0;) {
    out[p] = static_cast<State>(idx % static_cast<std::uint64_t>(q));
    idx /= static_cast<std::uint64_t>(q);
  }
}

} // namespace

bool is_goe_bruteforce(const LocalRule& rule, const Pattern& phi, std::uint64_t max_assignments, int workers) {
  check_pattern_rule(rule, phi, "is_goe_bruteforce");
  if (phi.cells.empty()) throw UsageError("is_goe_bruteforce: empty pattern");
  const Group& g = rule.group();
  const GenSet& S = rule.neighbourhood();
  const State q = rule.states()->size();

  std::vector<GroupElement> Y = phi.domain();
  std::vector<GroupElement> D = domain_product(g, Y, S);

  double total_d = std::pow(static_cast<double>(q), static_cast<double>(D.size()));
  if (total_d > static_cast<double>(max_assignments))
    throw BudgetError("is_goe_bruteforce: |Q|^|Y S| exceeds the assignment budget");
  std::uint64_t total = static_cast<std::uint64_t>(total_d);

  std::vector<std::vector<int>> nbr;
  std::vector<State> want;
  nbr.reserve(Y.size());
  for (const auto& x : Y) {
    nbr.push_back(neighbour_positions(g, D, x, S));
    want.push_back(phi.at(x));
  }

  auto scan = [&](std::uint64_t lo, std::uint64_t hi) -> bool {
    std::vector<State> a(D.size());
    std::vector<State> nb(static_cast<size_t>(S.size()));
    for (std::uint64_t idx = lo; idx < hi; ++idx) {
      odometer_assign(idx, q, a);
      bool hit = true;
      for (size_t yi = 0; yi < Y.size() && hit; ++yi) {
        for (int i = 0; i < S.size(); ++i) nb[static_cast<size_t>(i)] = a[static_cast<size_t>(nbr[yi][static_cast<size_t>(i)])];
        hit = rule.eval(nb) == want[yi];
      }
      if (hit) return true; // preimage found
    }
    return false;
  };

  if (workers <= 1) return !scan(0, total);
  std::vector<std::future<bool>> fs;
  std::uint64_t chunk = (total + static_cast<std::uint64_t>(workers) - 1) / static_cast<std::uint64_t>(workers);
  for (int w = 0; w < workers; ++w) {
    std::uint64_t lo = static_cast<std::uint64_t>(w) * chunk;
    std::uint64_t hi = std::min(total, lo + chunk);
    if (lo >= hi) break;
    fs.push_back(std::async(std::launch::async, scan, lo, hi));
  }
  bool found = false;
  for (auto& f : fs) found |= f.get();
  return !found;
}

} // namespace edenca
