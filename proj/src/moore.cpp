#include "edenca/moore.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <set>
#include <sstream>

namespace edenca {

namespace {

std::vector<std::string> split_top_level(const std::string& body) {
  std::vector<std::string> parts;
  int depth = 0;
  std::string cur;
  for (char c : body) {
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if (c == ',' && depth == 0) {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  parts.push_back(cur);
  return parts;
}

} // namespace

// ---------------------------------------------------------------- FieldRule

FieldRule::FieldRule(std::shared_ptr<const VectorField> field) : field_(std::move(field)) {
  auto group = field_->group_ptr();
  const GenSet S = field_->gens();
  const int ns = S.size();
  const State card = static_cast<State>(2) * ns * ns;

  auto namer = [group, S, ns](State q) {
    int p = static_cast<int>(q % ns);
    int sa = static_cast<int>(q / ns);
    std::ostringstream os;
    os << '(' << group->format(S[sa / 2]) << ',' << (sa % 2) << ',' << group->format(S[p]) << ')';
    return os.str();
  };
  auto parser = [group, S, ns](const std::string& name) -> State {
    if (name.size() < 2 || name.front() != '(' || name.back() != ')') return -1;
    auto parts = split_top_level(name.substr(1, name.size() - 2));
    if (parts.size() != 3) return -1;
    try {
      int s = S.index_of(group->parse(parts[0]));
      int p = S.index_of(group->parse(parts[2]));
      if (s < 0 || p < 0 || (parts[1] != "0" && parts[1] != "1")) return -1;
      return (static_cast<State>(s) * 2 + (parts[1] == "1")) * ns + p;
    } catch (const Error&) {
      return -1;
    }
  };
  auto states = StateSet::generated(card, "field-rule-" + std::to_string(ns), namer, parser);

  auto eval = [ns](std::span<const State> phi) -> State {
    int first = -1, second = -1;
    for (int i = 0; i < ns; ++i) {
      if (static_cast<int>(phi[static_cast<size_t>(i)] / (2 * ns)) == i) {
        if (first < 0)
          first = i;
        else if (second < 0) {
          second = i;
          break;
        }
      }
    }
    if (second < 0) return 0;
    State qs = phi[static_cast<size_t>(first)];
    State qt = phi[static_cast<size_t>(second)];
    State alpha = (qs / ns) % 2;
    State p = qs % ns;
    State q = qt % ns;
    return (p * 2 + alpha) * ns + q;
  };
  rule_ = std::make_shared<LocalRule>(group, states, S, eval);
}

std::shared_ptr<const FieldRule> build_field_rule(std::shared_ptr<const VectorField> field) {
  return std::make_shared<FieldRule>(std::move(field));
}

State FieldRule::encode(int s_idx, int alpha, int p_idx) const {
  const int ns = S().size();
  return (static_cast<State>(s_idx) * 2 + alpha) * ns + p_idx;
}

std::tuple<int, int, int> FieldRule::decode(State q) const {
  const int ns = S().size();
  return {static_cast<int>(q / (2 * ns)), static_cast<int>((q / ns) % 2), static_cast<int>(q % ns)};
}

Pattern FieldRule::synthesize(const Pattern& phi, const std::vector<GroupElement>& extra) const {
  if (!phi.states->same_as(*rule_->states())) throw UsageError("pattern states do not match the rule");
  const Group& g = field_->group();
  const GenSet& S = rule_->neighbourhood();

  std::set<GroupElement> domain(extra.begin(), extra.end());
  for (const auto& [x, v] : phi.cells) {
    domain.insert(x);
    for (const auto& s : S.elems) domain.insert(g.multiply(x, s));
  }

  Pattern psi;
  psi.states = rule_->states();
  for (const auto& [x, value] : phi.cells) {
    auto fib = field_->fiber(x);
    GroupElement xinv = g.inverse(x);
    int d0 = S.index_of(g.multiply(xinv, fib[0]));
    int d1 = S.index_of(g.multiply(xinv, fib[1]));
    if (d0 < 0 || d1 < 0) throw DataError("fiber displacement not in S at " + g.format(x));
    if (d1 < d0) {
      std::swap(d0, d1);
      std::swap(fib[0], fib[1]);
    }
    auto [p, alpha, q] = decode(value);
    psi.cells[fib[0]] = encode(d0, alpha, p);
    psi.cells[fib[1]] = encode(d1, 0, q);
  }
  // Remaining cells: the first coordinate must encode the true arrow
  // direction f(z)^-1 z (this excludes spurious matches); middle bit and
  // payload are free and fixed to 0 / s_min for reproducibility.
  for (const auto& z : domain) {
    if (psi.cells.count(z)) continue;
    GroupElement fz = field_->apply(z);
    int d = S.index_of(g.multiply(g.inverse(fz), z));
    if (d < 0) throw DataError("field displacement not in S at " + g.format(z));
    psi.cells[z] = encode(d, 0, 0);
  }
  return psi;
}

Pattern FieldRule::preimage(const Pattern& phi) const { return synthesize(phi, {}); }

std::tuple<Pattern, Pattern, std::vector<GroupElement>> FieldRule::mep_witness(const GroupElement& y,
                                                                               const Pattern& phi) const {
  if (!phi.contains(y)) throw UsageError("mep_witness: y must lie in the pattern domain");
  const Group& g = field_->group();
  const GenSet& S = rule_->neighbourhood();

  auto fib = field_->fiber(y);
  GroupElement yinv = g.inverse(y);
  int d0 = S.index_of(g.multiply(yinv, fib[0]));
  int d1 = S.index_of(g.multiply(yinv, fib[1]));
  if (d1 < d0) std::swap(fib[0], fib[1]);
  GroupElement yt = fib[1]; // the larger fiber element carries the unread bit

  std::vector<GroupElement> Yc{yt};
  Pattern psi = synthesize(phi, mep_closure(g, Yc, S));
  Pattern psi2 = psi;
  auto [t_idx, bit, q] = decode(psi.at(yt));
  psi2.cells[yt] = encode(t_idx, bit ^ 1, q);
  return {std::move(psi), std::move(psi2), std::move(Yc)};
}

std::tuple<Pattern, Pattern, std::vector<GroupElement>> FieldRule::mep_witness_control(
    const GroupElement& y, const Pattern& phi) const {
  if (!phi.contains(y)) throw UsageError("mep_witness_control: y must lie in the pattern domain");
  const Group& g = field_->group();
  const GenSet& S = rule_->neighbourhood();

  auto fib = field_->fiber(y);
  GroupElement yinv = g.inverse(y);
  int d0 = S.index_of(g.multiply(yinv, fib[0]));
  int d1 = S.index_of(g.multiply(yinv, fib[1]));
  if (d1 < d0) std::swap(fib[0], fib[1]);
  GroupElement ys = fib[0]; // this cell's middle bit is read by the rule

  std::vector<GroupElement> Yc{ys};
  Pattern psi = synthesize(phi, mep_closure(g, Yc, S));
  Pattern psi2 = psi;
  auto [s_idx, bit, p] = decode(psi.at(ys));
  psi2.cells[ys] = encode(s_idx, bit ^ 1, p);
  return {std::move(psi), std::move(psi2), std::move(Yc)};
}

// ----------------------------------------------------------------- SlotRule

SlotRule::SlotRule(std::shared_ptr<const Correspondence> corr) : corr_(std::move(corr)) {
  if (corr_->m() <= corr_->n() || corr_->n() < 1)
    throw UsageError("slot rule needs a correspondence with m > n >= 1");
  if (corr_->n() > 8) throw UsageError("slot rule supports n <= 8");
  auto group = corr_->group_ptr();
  const GenSet S = corr_->gens();
  const int ns = S.size();
  const int n = corr_->n();
  const int m = corr_->m();

  State pow_s = 1;
  for (int i = 0; i < n; ++i) {
    pow_s *= ns;
    if (pow_s > (State{1} << 40)) throw UsageError("slot rule state space too large");
  }
  slot_card_ = static_cast<State>(ns) * 2 * pow_s;
  double qsize = std::pow(static_cast<double>(slot_card_), n);
  if (qsize > 9e18) throw UsageError("slot rule state space too large");
  State card = 1;
  for (int i = 0; i < n; ++i) card *= slot_card_;

  const State slot_card = slot_card_;
  auto slot_name = [group, S, ns, n, pow_s](State slot) {
    std::ostringstream os;
    State t_part = slot % pow_s;
    State sa = slot / pow_s;
    os << '(' << group->format(S[static_cast<int>(sa / 2)]) << ',' << (sa % 2);
    std::vector<int> t(static_cast<size_t>(n));
    for (int i = n - 1; i >= 0; --i) {
      t[static_cast<size_t>(i)] = static_cast<int>(t_part % ns);
      t_part /= ns;
    }
    for (int i = 0; i < n; ++i) os << ',' << group->format(S[t[static_cast<size_t>(i)]]);
    os << ')';
    return os.str();
  };
  auto namer = [slot_name, slot_card, n](State q) {
    std::vector<State> slots(static_cast<size_t>(n));
    for (int i = n - 1; i >= 0; --i) {
      slots[static_cast<size_t>(i)] = q % slot_card;
      q /= slot_card;
    }
    std::ostringstream os;
    os << '(';
    for (int i = 0; i < n; ++i) {
      if (i) os << ',';
      os << slot_name(slots[static_cast<size_t>(i)]);
    }
    os << ')';
    return os.str();
  };
  auto parser = [group, S, ns, n, pow_s, slot_card](const std::string& name) -> State {
    if (name.size() < 2 || name.front() != '(' || name.back() != ')') return -1;
    auto slots = split_top_level(name.substr(1, name.size() - 2));
    if (static_cast<int>(slots.size()) != n) return -1;
    State q = 0;
    for (const auto& sl : slots) {
      if (sl.size() < 2 || sl.front() != '(' || sl.back() != ')') return -1;
      auto parts = split_top_level(sl.substr(1, sl.size() - 2));
      if (static_cast<int>(parts.size()) != n + 2) return -1;
      try {
        int s = S.index_of(group->parse(parts[0]));
        if (s < 0 || (parts[1] != "0" && parts[1] != "1")) return -1;
        State code = (static_cast<State>(s) * 2 + (parts[1] == "1")) * pow_s;
        State t_part = 0;
        for (int i = 0; i < n; ++i) {
          int t = S.index_of(group->parse(parts[static_cast<size_t>(i) + 2]));
          if (t < 0) return -1;
          t_part = t_part * ns + t;
        }
        q = q * slot_card + code + t_part;
      } catch (const Error&) {
        return -1;
      }
    }
    return q;
  };
  std::string kind = "slot-rule-" + std::to_string(ns) + "-" + std::to_string(m) + "-" + std::to_string(n);
  auto states = StateSet::generated(card, kind, namer, parser);

  auto eval = [ns, n, m, pow_s, slot_card](std::span<const State> phi) -> State {
    // Collect matching (s, k) pairs in ascending order together with their
    // payloads (alpha, t_1..t_n).
    struct Match {
      int alpha;
      std::array<int, 8> t;
    };
    std::vector<Match> matches;
    matches.reserve(static_cast<size_t>(m));
    for (int s = 0; s < ns && static_cast<int>(matches.size()) < m; ++s) {
      State q = phi[static_cast<size_t>(s)];
      std::array<State, 8> slots{};
      for (int k = n - 1; k >= 0; --k) {
        slots[static_cast<size_t>(k)] = q % slot_card;
        q /= slot_card;
      }
      for (int k = 0; k < n && static_cast<int>(matches.size()) < m; ++k) {
        State slot = slots[static_cast<size_t>(k)];
        if (static_cast<int>(slot / (2 * pow_s)) != s) continue;
        Match mt;
        mt.alpha = static_cast<int>((slot / pow_s) % 2);
        State t_part = slot % pow_s;
        for (int i = n - 1; i >= 0; --i) {
          mt.t[static_cast<size_t>(i)] = static_cast<int>(t_part % ns);
          t_part /= ns;
        }
        matches.push_back(mt);
      }
    }
    if (static_cast<int>(matches.size()) < m) return 0;
    State out = 0;
    for (int i = 0; i < n; ++i) {
      State code = (static_cast<State>(matches[0].t[static_cast<size_t>(i)]) * 2 +
                    matches[static_cast<size_t>(i)].alpha) *
                   pow_s;
      State t_part = 0;
      for (int j = 1; j <= n; ++j) t_part = t_part * ns + matches[static_cast<size_t>(j)].t[static_cast<size_t>(i)];
      out = out * slot_card + code + t_part;
    }
    return out;
  };
  rule_ = std::make_shared<LocalRule>(group, states, S, eval);
}

std::shared_ptr<const SlotRule> build_slot_rule(std::shared_ptr<const Correspondence> corr) {
  return std::make_shared<SlotRule>(std::move(corr));
}

State SlotRule::encode_slot(int s_idx, int alpha, const std::vector<int>& t) const {
  const int ns = S().size();
  State pow_s = 1;
  for (int i = 0; i < n(); ++i) pow_s *= ns;
  State code = (static_cast<State>(s_idx) * 2 + alpha) * pow_s;
  State t_part = 0;
  for (int v : t) t_part = t_part * ns + v;
  return code + t_part;
}

void SlotRule::decode_slot(State slot, int& s_idx, int& alpha, std::vector<int>& t) const {
  const int ns = S().size();
  State pow_s = 1;
  for (int i = 0; i < n(); ++i) pow_s *= ns;
  s_idx = static_cast<int>(slot / (2 * pow_s));
  alpha = static_cast<int>((slot / pow_s) % 2);
  State t_part = slot % pow_s;
  t.assign(static_cast<size_t>(n()), 0);
  for (int i = n() - 1; i >= 0; --i) {
    t[static_cast<size_t>(i)] = static_cast<int>(t_part % ns);
    t_part /= ns;
  }
}

State SlotRule::encode_state(const std::vector<State>& slots) const {
  State q = 0;
  for (State s : slots) q = q * slot_card_ + s;
  return q;
}

std::vector<State> SlotRule::decode_state(State q) const {
  std::vector<State> slots(static_cast<size_t>(n()));
  for (int i = n() - 1; i >= 0; --i) {
    slots[static_cast<size_t>(i)] = q % slot_card_;
    q /= slot_card_;
  }
  return slots;
}

Pattern SlotRule::synthesize(const Pattern& phi, const std::vector<GroupElement>& extra,
                             std::map<GroupElement, Alloc>* alloc_out) const {
  if (!phi.states->same_as(*rule_->states())) throw UsageError("pattern states do not match the rule");
  const Group& g = corr_->group();
  const GenSet& S = rule_->neighbourhood();
  const int nn = n(), mm = m();

  std::set<GroupElement> domain(extra.begin(), extra.end());
  for (const auto& [x, v] : phi.cells) {
    domain.insert(x);
    for (const auto& s : S.elems) domain.insert(g.multiply(x, s));
  }

  struct SlotPayload {
    int s = 0, alpha = 0;
    std::vector<int> t;
  };
  std::map<GroupElement, std::vector<std::optional<SlotPayload>>> work;
  auto slots_of = [&](const GroupElement& z) -> std::vector<std::optional<SlotPayload>>& {
    auto it = work.find(z);
    if (it == work.end()) it = work.emplace(z, std::vector<std::optional<SlotPayload>>(static_cast<size_t>(nn))).first;
    return it->second;
  };

  // Sites in ascending canonical order; for each, allocate the lowest free
  // slots of the m incoming arrow sources, sort the (direction, slot) pairs,
  // and distribute the payloads read off phi(x).
  for (const auto& [x, value] : phi.cells) {
    auto in = corr_->arrows_in(x);
    int total = 0;
    for (const auto& [z, mult] : in) total += mult;
    if (total != mm)
      throw DataError("correspondence column sum is " + std::to_string(total) + " (want " + std::to_string(mm) +
                      ") at " + g.format(x));
    std::vector<std::tuple<int, int, GroupElement>> pairs; // (s_idx, slot, source)
    GroupElement xinv = g.inverse(x);
    for (const auto& [z, mult] : in) {
      int s_idx = S.index_of(g.multiply(xinv, z));
      if (s_idx < 0) throw DataError("arrow direction not in S for source " + g.format(z));
      auto& slots = slots_of(z);
      int taken = 0;
      for (int k = 0; k < nn && taken < mult; ++k) {
        if (!slots[static_cast<size_t>(k)]) {
          slots[static_cast<size_t>(k)] = SlotPayload{}; // reserve
          pairs.emplace_back(s_idx, k, z);
          ++taken;
        }
      }
      if (taken < mult) throw DataError("correspondence row overcommitted at " + g.format(z));
    }
    std::sort(pairs.begin(), pairs.end(), [](const auto& a, const auto& b) {
      return std::tie(std::get<0>(a), std::get<1>(a)) < std::tie(std::get<0>(b), std::get<1>(b));
    });

    auto slots_val = decode_state(value);
    std::vector<int> first(static_cast<size_t>(nn)), alpha(static_cast<size_t>(nn));
    std::vector<std::vector<int>> trail(static_cast<size_t>(nn));
    for (int i = 0; i < nn; ++i) {
      int s, a;
      std::vector<int> t;
      decode_slot(slots_val[static_cast<size_t>(i)], s, a, t);
      first[static_cast<size_t>(i)] = s;
      alpha[static_cast<size_t>(i)] = a;
      trail[static_cast<size_t>(i)] = std::move(t);
    }
    for (int j = 0; j < mm; ++j) {
      auto [s_idx, k, z] = pairs[static_cast<size_t>(j)];
      SlotPayload pl;
      pl.s = s_idx;
      pl.alpha = j < nn ? alpha[static_cast<size_t>(j)] : 0;
      pl.t.assign(static_cast<size_t>(nn), 0);
      for (int i = 0; i < nn; ++i)
        pl.t[static_cast<size_t>(i)] =
            j == 0 ? first[static_cast<size_t>(i)] : (j <= nn ? trail[static_cast<size_t>(i)][static_cast<size_t>(j - 1)] : 0);
      slots_of(z)[static_cast<size_t>(k)] = std::move(pl);
    }
    if (alloc_out) (*alloc_out)[x] = Alloc{std::move(pairs)};
  }

  // Still-free slots carry the cell's true remaining arrow directions; the
  // first coordinate is correctness-critical, the payload is default.
  for (const auto& z : domain) {
    auto& slots = slots_of(z);
    std::vector<int> free_ks;
    for (int k = 0; k < nn; ++k)
      if (!slots[static_cast<size_t>(k)]) free_ks.push_back(k);
    if (free_ks.empty()) continue;

    auto out = corr_->arrows_out(z);
    int total = 0;
    for (const auto& [y, mult] : out) total += mult;
    if (total != nn)
      throw DataError("correspondence row sum is " + std::to_string(total) + " (want " + std::to_string(nn) +
                      ") at " + g.format(z));
    std::vector<int> dirs;
    for (const auto& [y, mult] : out) {
      if (phi.cells.count(y)) continue; // consumed by the allocation above
      int d = S.index_of(g.multiply(g.inverse(y), z));
      if (d < 0) throw DataError("arrow direction not in S at " + g.format(z));
      for (int i = 0; i < mult; ++i) dirs.push_back(d);
    }
    if (dirs.size() != free_ks.size())
      throw DataError("correspondence row/column bookkeeping mismatch at " + g.format(z));
    std::sort(dirs.begin(), dirs.end());
    for (size_t i = 0; i < free_ks.size(); ++i) {
      SlotPayload pl;
      pl.s = dirs[i];
      pl.alpha = 0;
      pl.t.assign(static_cast<size_t>(nn), 0);
      slots[static_cast<size_t>(free_ks[i])] = std::move(pl);
    }
  }

  Pattern psi;
  psi.states = rule_->states();
  for (const auto& z : domain) {
    auto& slots = slots_of(z);
    std::vector<State> codes;
    codes.reserve(static_cast<size_t>(nn));
    for (int k = 0; k < nn; ++k) {
      const auto& pl = slots[static_cast<size_t>(k)];
      codes.push_back(encode_slot(pl->s, pl->alpha, pl->t));
    }
    psi.cells[z] = encode_state(codes);
  }
  return psi;
}

Pattern SlotRule::preimage(const Pattern& phi) const { return synthesize(phi, {}, nullptr); }

std::tuple<Pattern, Pattern, std::vector<GroupElement>> SlotRule::mep_witness(const GroupElement& y,
                                                                              const Pattern& phi) const {
  if (!phi.contains(y)) throw UsageError("mep_witness: y must lie in the pattern domain");
  const Group& g = corr_->group();
  const GenSet& S = rule_->neighbourhood();

  std::map<GroupElement, Alloc> alloc;
  (void)synthesize(phi, {}, &alloc);
  const auto& pairs = alloc.at(y).pairs;
  const int k = std::get<1>(pairs.back()); // position m: its alpha is never read
  const GroupElement z = std::get<2>(pairs.back());

  std::vector<GroupElement> Yc{z};
  Pattern psi = synthesize(phi, mep_closure(g, Yc, S), nullptr);
  Pattern psi2 = psi;
  auto slots = decode_state(psi.at(z));
  int ss, aa;
  std::vector<int> tt;
  decode_slot(slots[static_cast<size_t>(k)], ss, aa, tt);
  slots[static_cast<size_t>(k)] = encode_slot(ss, aa ^ 1, tt);
  psi2.cells[z] = encode_state(slots);
  return {std::move(psi), std::move(psi2), std::move(Yc)};
}

std::tuple<Pattern, Pattern, std::vector<GroupElement>> SlotRule::mep_witness_control(
    const GroupElement& y, const Pattern& phi) const {
  if (!phi.contains(y)) throw UsageError("mep_witness_control: y must lie in the pattern domain");
  const Group& g = corr_->group();
  const GenSet& S = rule_->neighbourhood();

  std::map<GroupElement, Alloc> alloc;
  (void)synthesize(phi, {}, &alloc);
  const auto& pairs = alloc.at(y).pairs;
  const int k = std::get<1>(pairs.front()); // position 1: its alpha is read
  const GroupElement z = std::get<2>(pairs.front());

  std::vector<GroupElement> Yc{z};
  Pattern psi = synthesize(phi, mep_closure(g, Yc, S), nullptr);
  Pattern psi2 = psi;
  auto slots = decode_state(psi.at(z));
  int ss, aa;
  std::vector<int> tt;
  decode_slot(slots[static_cast<size_t>(k)], ss, aa, tt);
  slots[static_cast<size_t>(k)] = encode_slot(ss, aa ^ 1, tt);
  psi2.cells[z] = encode_state(slots);
  return {std::move(psi), std::move(psi2), std::move(Yc)};
}

} // namespace edenca
