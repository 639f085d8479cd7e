#include "edenca/oracle.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <future>
#include <set>

namespace edenca {

namespace {

class Deadline {
public:
  explicit Deadline(double seconds)
      : enabled_(seconds > 0),
        end_(std::chrono::steady_clock::now() + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                                                    std::chrono::duration<double>(seconds))) {}
  void check() const {
    if (enabled_ && std::chrono::steady_clock::now() > end_) throw BudgetError("time cap exceeded");
  }

private:
  bool enabled_;
  std::chrono::steady_clock::time_point end_;
};

void odometer_assign(std::uint64_t idx, State q, std::vector<State>& out) {
  for (size_t p = out.size(); p-- > 0;) {
    out[p] = static_cast<State>(idx % static_cast<std::uint64_t>(q));
    idx /= static_cast<std::uint64_t>(q);
  }
}

std::uint64_t checked_pow(State q, std::size_t e, std::uint64_t budget, const char* what) {
  double v = std::pow(static_cast<double>(q), static_cast<double>(e));
  if (v > static_cast<double>(budget)) throw BudgetError(std::string(what) + " exceeds the assignment budget");
  std::uint64_t r = 1;
  for (std::size_t i = 0; i < e; ++i) r *= static_cast<std::uint64_t>(q);
  return r;
}

Pattern make_pattern(const LocalRule& rule, const std::vector<GroupElement>& dom, const std::vector<State>& vals) {
  Pattern p;
  p.states = rule.states();
  for (size_t i = 0; i < dom.size(); ++i) p.cells.emplace(dom[i], vals[i]);
  return p;
}

} // namespace

SearchOutcome find_goe(const LocalRule& rule, const std::vector<GroupElement>& Y, const SearchBudget& budget,
                       int workers) {
  if (Y.empty()) throw UsageError("find_goe: empty domain");
  const Group& g = rule.group();
  const GenSet& S = rule.neighbourhood();
  const State q = rule.states()->size();
  Deadline deadline(budget.time_cap_seconds);

  std::vector<GroupElement> Ys(Y.begin(), Y.end());
  std::sort(Ys.begin(), Ys.end());
  std::vector<GroupElement> D = domain_product(g, Ys, S);

  std::uint64_t total = checked_pow(q, D.size(), budget.max_assignments, "find_goe: |Q|^|Y S|");
  (void)checked_pow(q, Ys.size(), budget.max_assignments, "find_goe: |Q|^|Y|");

  std::vector<std::vector<int>> nbr;
  nbr.reserve(Ys.size());
  for (const auto& x : Ys) nbr.push_back(neighbour_positions(g, D, x, S));

  // Single pass: evolve every assignment on Y S once, collect the image set.
  // Workers partition the odometer range; the union is order-independent.
  auto collect = [&](std::uint64_t lo, std::uint64_t hi) {
    std::set<std::vector<State>> part;
    std::vector<State> a(D.size()), nb(static_cast<size_t>(S.size())), out(Ys.size());
    for (std::uint64_t idx = lo; idx < hi; ++idx) {
      if ((idx & 0xffff) == 0) deadline.check();
      odometer_assign(idx, q, a);
      for (size_t yi = 0; yi < Ys.size(); ++yi) {
        for (int i = 0; i < S.size(); ++i)
          nb[static_cast<size_t>(i)] = a[static_cast<size_t>(nbr[yi][static_cast<size_t>(i)])];
        out[yi] = rule.eval(nb);
      }
      part.insert(out);
    }
    return part;
  };
  std::set<std::vector<State>> image;
  if (workers <= 1) {
    image = collect(0, total);
  } else {
    std::vector<std::future<std::set<std::vector<State>>>> parts;
    std::uint64_t chunk = (total + static_cast<std::uint64_t>(workers) - 1) / static_cast<std::uint64_t>(workers);
    for (int w = 0; w < workers; ++w) {
      std::uint64_t lo = static_cast<std::uint64_t>(w) * chunk;
      std::uint64_t hi = std::min(total, lo + chunk);
      if (lo >= hi) break;
      parts.push_back(std::async(std::launch::async, collect, lo, hi));
    }
    for (auto& f : parts) image.merge(f.get());
  }

  SearchOutcome oc;
  oc.domain = Ys;
  oc.enumerated = total;
  std::uint64_t cand_total = 1;
  for (size_t i = 0; i < Ys.size(); ++i) cand_total *= static_cast<std::uint64_t>(q);
  std::vector<State> cand(Ys.size());
  for (std::uint64_t idx = 0; idx < cand_total; ++idx) {
    odometer_assign(idx, q, cand);
    if (!image.count(cand)) {
      Pattern w = make_pattern(rule, Ys, cand);
      // independent re-verification through the per-pattern search
      if (!is_goe_bruteforce(rule, w, budget.max_assignments, workers))
        throw DataError("find_goe: witness failed re-verification");
      oc.status = SearchStatus::Found;
      oc.witness = std::move(w);
      return oc;
    }
  }
  oc.status = SearchStatus::Exhausted;
  return oc;
}

SearchOutcome find_mep(const LocalRule& rule, const std::vector<GroupElement>& Y, const SearchBudget& budget,
                       const std::optional<Pattern>& seed) {
  if (Y.empty()) throw UsageError("find_mep: empty domain");
  const Group& g = rule.group();
  const GenSet& S = rule.neighbourhood();
  const State q = rule.states()->size();
  Deadline deadline(budget.time_cap_seconds);

  std::vector<GroupElement> Ys(Y.begin(), Y.end());
  std::sort(Ys.begin(), Ys.end());
  std::vector<GroupElement> D = mep_closure(g, Ys, S);

  // check sites: x with xS meeting Y
  std::set<GroupElement> sites_set;
  for (const auto& y : Ys)
    for (const auto& s : S.elems) sites_set.insert(g.multiply(y, g.inverse(s)));
  std::vector<GroupElement> sites(sites_set.begin(), sites_set.end());

  std::vector<std::vector<int>> nbr;
  nbr.reserve(sites.size());
  for (const auto& x : sites) nbr.push_back(neighbour_positions(g, D, x, S));
  std::vector<int> ypos;
  for (const auto& y : Ys) {
    auto it = std::lower_bound(D.begin(), D.end(), y);
    ypos.push_back(static_cast<int>(it - D.begin()));
  }

  std::uint64_t base_total = 1;
  if (seed) {
    for (const auto& d : D)
      if (!seed->contains(d)) throw UsageError("find_mep: seed does not cover Y union Y S^-1 S");
  } else {
    base_total = checked_pow(q, D.size(), budget.max_assignments, "find_mep: |Q|^|Y u YS^-1S|");
  }
  std::uint64_t y_total = checked_pow(q, Ys.size(), budget.max_assignments, "find_mep: |Q|^|Y|");

  SearchOutcome oc;
  oc.domain = Ys;
  std::vector<State> a(D.size()), b, nb(static_cast<size_t>(S.size())), yvals(Ys.size());
  std::vector<State> ev1(sites.size());
  std::uint64_t steps = 0;
  for (std::uint64_t bi = 0; bi < base_total; ++bi) {
    if (seed) {
      for (size_t i = 0; i < D.size(); ++i) a[i] = seed->at(D[i]);
    } else {
      odometer_assign(bi, q, a);
    }
    for (size_t si = 0; si < sites.size(); ++si) {
      for (int i = 0; i < S.size(); ++i)
        nb[static_cast<size_t>(i)] = a[static_cast<size_t>(nbr[si][static_cast<size_t>(i)])];
      ev1[si] = rule.eval(nb);
    }
    std::uint64_t base_code = 0;
    for (size_t yi = 0; yi < Ys.size(); ++yi)
      base_code = base_code * static_cast<std::uint64_t>(q) + static_cast<std::uint64_t>(a[static_cast<size_t>(ypos[yi])]);

    b = a;
    for (std::uint64_t yidx = 0; yidx < y_total; ++yidx) {
      // unseeded: enumerate only partners above the base (pairs are symmetric)
      if (seed ? yidx == base_code : yidx <= base_code) continue;
      if (++steps > budget.max_assignments) throw BudgetError("find_mep: assignment budget exceeded");
      if ((steps & 0xffff) == 0) deadline.check();
      odometer_assign(yidx, q, yvals);
      for (size_t yi = 0; yi < Ys.size(); ++yi) b[static_cast<size_t>(ypos[yi])] = yvals[yi];
      bool equal = true;
      for (size_t si = 0; si < sites.size() && equal; ++si) {
        for (int i = 0; i < S.size(); ++i)
          nb[static_cast<size_t>(i)] = b[static_cast<size_t>(nbr[si][static_cast<size_t>(i)])];
        equal = rule.eval(nb) == ev1[si];
      }
      if (!equal) continue;

      Pattern p1 = make_pattern(rule, D, a);
      Pattern p2 = make_pattern(rule, D, b);
      if (!check_mep_certificate(rule, p1, p2, Ys))
        throw DataError("find_mep: candidate failed certificate re-verification");
      oc.status = SearchStatus::Found;
      oc.pair_witness = {std::move(p1), std::move(p2)};
      oc.enumerated = steps;
      return oc;
    }
  }
  oc.status = SearchStatus::Exhausted;
  oc.enumerated = steps;
  return oc;
}

std::shared_ptr<const LocalRule> z_rule_from_bits(int bits) {
  if (bits < 0 || bits > 15) throw UsageError("rule bits must be 0..15");
  auto g = Group::make(GroupSpec::lattice(1));
  GenSet S = g->make_gen_set({g->identity(), g->generator(0)}); // {0, 1}
  auto states = StateSet::explicit_set({"0", "1"});
  auto eval = [bits](std::span<const State> phi) -> State {
    int t = static_cast<int>(phi[0]) + 2 * static_cast<int>(phi[1]);
    return (bits >> t) & 1;
  };
  return std::make_shared<LocalRule>(g, states, std::move(S), eval);
}

std::shared_ptr<const LocalRule> z_majority_rule() {
  auto g = Group::make(GroupSpec::lattice(1));
  GenSet S = g->make_gen_set({g->inverse(g->generator(0)), g->identity(), g->generator(0)});
  auto states = StateSet::explicit_set({"0", "1"});
  auto eval = [](std::span<const State> phi) -> State {
    return (phi[0] + phi[1] + phi[2]) >= 2 ? 1 : 0;
  };
  return std::make_shared<LocalRule>(g, states, std::move(S), eval);
}

SweepTable moore_sweep(const SearchBudget& budget) {
  auto g = Group::make(GroupSpec::lattice(1));
  SweepTable table;
  table.max_width = budget.max_width;

  for (int bits = 0; bits < 16; ++bits) {
    auto rule = z_rule_from_bits(bits);
    SweepRow row;
    row.rule_bits = bits;

    auto widths = [&](int w) {
      std::vector<GroupElement> Y;
      for (int i = 0; i < w; ++i) Y.push_back(g->generator_power(0, i));
      return Y;
    };

    row.mep_status = "exhausted";
    row.mep_width = budget.max_width;
    for (int w = 1; w <= budget.max_width; ++w) {
      try {
        SearchOutcome oc = find_mep(*rule, widths(w), budget);
        if (oc.status == SearchStatus::Found) {
          row.mep_status = "found";
          row.mep_width = w;
          row.mep_witness = oc.pair_witness;
          break;
        }
      } catch (const BudgetError&) {
        row.mep_status = "budget";
        row.mep_width = w;
        break;
      }
    }

    row.goe_status = "exhausted";
    row.goe_width = budget.max_width;
    for (int w = 1; w <= budget.max_width; ++w) {
      try {
        SearchOutcome oc = find_goe(*rule, widths(w), budget);
        if (oc.status == SearchStatus::Found) {
          row.goe_status = "found";
          row.goe_width = w;
          row.goe_witness = oc.witness;
          break;
        }
      } catch (const BudgetError&) {
        row.goe_status = "budget";
        row.goe_width = w;
        break;
      }
    }

    row.consistent = !(row.mep_status == "found" && row.goe_status == "exhausted") &&
                     !(row.goe_status == "found" && row.mep_status == "exhausted");
    table.all_consistent = table.all_consistent && row.consistent;
    table.rows.push_back(row);
  }
  return table;
}

} // namespace edenca
