#include "edenca/group.hpp"

#include <algorithm>
#include <cassert>
#include <charconv>
#include <limits>
#include <sstream>
#include <unordered_set>

namespace edenca {

namespace {

constexpr std::int64_t kLatticeCap = std::int64_t{1} << 30;

std::uint64_t fnv1a(std::uint64_t h, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) {
    h ^= (v >> (8 * i)) & 0xff;
    h *= 0x100000001b3ull;
  }
  return h;
}

bool valid_name(const std::string& n) {
  if (n.empty() || n == "e") return false;
  if (!(std::isalpha(static_cast<unsigned char>(n[0])) || n[0] == '_')) return false;
  for (char c : n)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
  return true;
}

} // namespace

GroupSpec GroupSpec::free_group(int rank) {
  if (rank < 1) throw UsageError("free group rank must be >= 1");
  GroupSpec s;
  s.family = Family::Free;
  for (int i = 0; i < rank; ++i) s.generators.push_back(std::string(1, static_cast<char>('a' + i % 26)) + (i >= 26 ? std::to_string(i / 26) : ""));
  return s;
}

GroupSpec GroupSpec::free_product_cyclic(std::vector<int> orders) {
  if (orders.empty()) throw UsageError("free product needs at least one factor");
  for (int o : orders)
    if (o < 2) throw UsageError("cyclic factor order must be >= 2");
  GroupSpec s;
  s.family = Family::FreeProductCyclic;
  s.orders = std::move(orders);
  const char* names = "xyzuvw";
  for (size_t i = 0; i < s.orders.size(); ++i)
    s.generators.push_back(i < 6 ? std::string(1, names[i]) : "x" + std::to_string(i));
  return s;
}

GroupSpec GroupSpec::lattice(int dimension) {
  if (dimension < 1) throw UsageError("lattice dimension must be >= 1");
  GroupSpec s;
  s.family = Family::Lattice;
  for (int i = 0; i < dimension; ++i) s.generators.push_back("e" + std::to_string(i + 1));
  return s;
}

std::uint64_t GroupSpec::digest() const {
  std::uint64_t h = 0xcbf29ce484222325ull;
  h = fnv1a(h, static_cast<std::uint64_t>(family));
  h = fnv1a(h, generators.size());
  for (const auto& g : generators)
    for (char c : g) h = fnv1a(h, static_cast<std::uint64_t>(c));
  for (int o : orders) h = fnv1a(h, static_cast<std::uint64_t>(o));
  return h;
}

std::strong_ordering GroupElement::operator<=>(const GroupElement& o) const {
  if (auto c = gid <=> o.gid; c != 0) return c;
  if (auto c = len <=> o.len; c != 0) return c;
  if (fam == Family::Lattice) {
    // coordinate key (|v|, v<0): 0 < 1 < -1 < 2 < -2 < ...
    for (size_t i = 0; i < w.size() && i < o.w.size(); ++i) {
      std::int64_t a = w[i], b = o.w[i];
      if (auto c = (a < 0 ? -a : a) <=> (b < 0 ? -b : b); c != 0) return c;
      if (auto c = (a < 0) <=> (b < 0); c != 0) return c;
    }
    return w.size() <=> o.w.size();
  }
  return std::lexicographical_compare_three_way(w.begin(), w.end(), o.w.begin(), o.w.end());
}

std::size_t ElementHash::operator()(const GroupElement& e) const {
  std::uint64_t h = fnv1a(0xcbf29ce484222325ull, e.gid);
  for (std::int32_t v : e.w) h = fnv1a(h, static_cast<std::uint64_t>(static_cast<std::uint32_t>(v)));
  return static_cast<std::size_t>(h);
}

int GenSet::index_of(const GroupElement& e) const {
  auto it = std::lower_bound(elems.begin(), elems.end(), e);
  if (it != elems.end() && *it == e) return static_cast<int>(it - elems.begin());
  return -1;
}

Group::Group(GroupSpec spec) : spec_(std::move(spec)) {
  std::unordered_set<std::string> seen;
  for (const auto& n : spec_.generators) {
    if (!valid_name(n)) throw UsageError("invalid generator name: '" + n + "'");
    if (!seen.insert(n).second) throw UsageError("duplicate generator name: '" + n + "'");
  }
  if (spec_.family == Family::FreeProductCyclic && spec_.orders.size() != spec_.generators.size())
    throw UsageError("free product needs one order per generator");
  gid_ = spec_.digest();
}

std::shared_ptr<const Group> Group::make(GroupSpec spec) {
  return std::shared_ptr<const Group>(new Group(std::move(spec)));
}

void Group::check_mine(const GroupElement& e) const {
  if (e.gid != gid_) throw UsageError("element does not belong to this group");
}

GroupElement Group::identity() const {
  GroupElement e;
  e.gid = gid_;
  e.fam = spec_.family;
  if (spec_.family == Family::Lattice) e.w.assign(spec_.generators.size(), 0);
  return e;
}

GroupElement Group::generator(int i) const { return generator_power(i, 1); }

GroupElement Group::generator_power(int i, std::int64_t exp) const {
  if (i < 0 || i >= spec_.rank()) throw UsageError("generator index out of range");
  GroupElement e = identity();
  switch (spec_.family) {
    case Family::Free: {
      std::int32_t code = static_cast<std::int32_t>(2 * i + (exp < 0 ? 1 : 0));
      std::int64_t n = exp < 0 ? -exp : exp;
      if (n > (std::int64_t{1} << 20)) throw UsageError("generator power too large");
      e.w.assign(static_cast<size_t>(n), code);
      e.len = static_cast<std::int32_t>(n);
      break;
    }
    case Family::FreeProductCyclic: {
      int o = spec_.orders[static_cast<size_t>(i)];
      std::int64_t r = ((exp % o) + o) % o;
      if (r != 0) {
        e.w = {static_cast<std::int32_t>(i), static_cast<std::int32_t>(r)};
        e.len = static_cast<std::int32_t>(std::min<std::int64_t>(r, o - r));
      }
      break;
    }
    case Family::Lattice: {
      if (exp >= kLatticeCap || exp <= -kLatticeCap) throw UsageError("lattice coordinate overflow");
      e.w[static_cast<size_t>(i)] = static_cast<std::int32_t>(exp);
      e.len = static_cast<std::int32_t>(exp < 0 ? -exp : exp);
      break;
    }
  }
  return e;
}

GroupElement Group::multiply(const GroupElement& a, const GroupElement& b) const {
  check_mine(a);
  check_mine(b);
  GroupElement r = identity();
  switch (spec_.family) {
    case Family::Free: {
      r.w = a.w;
      for (std::int32_t code : b.w) {
        if (!r.w.empty() && r.w.back() == (code ^ 1))
          r.w.pop_back();
        else
          r.w.push_back(code);
      }
      r.len = static_cast<std::int32_t>(r.w.size());
      break;
    }
    case Family::FreeProductCyclic: {
      r.w = a.w;
      for (size_t j = 0; j < b.w.size(); j += 2) {
        std::int32_t f = b.w[j], e = b.w[j + 1];
        if (!r.w.empty() && r.w[r.w.size() - 2] == f) {
          int o = spec_.orders[static_cast<size_t>(f)];
          std::int32_t m = static_cast<std::int32_t>((r.w.back() + e) % o);
          r.w.pop_back();
          r.w.pop_back();
          if (m != 0) {
            r.w.push_back(f);
            r.w.push_back(m);
          }
        } else {
          r.w.push_back(f);
          r.w.push_back(e);
        }
      }
      std::int64_t len = 0;
      for (size_t j = 0; j < r.w.size(); j += 2) {
        int o = spec_.orders[static_cast<size_t>(r.w[j])];
        len += std::min<std::int64_t>(r.w[j + 1], o - r.w[j + 1]);
      }
      r.len = static_cast<std::int32_t>(len);
      break;
    }
    case Family::Lattice: {
      std::int64_t len = 0;
      for (size_t i = 0; i < r.w.size(); ++i) {
        std::int64_t v = static_cast<std::int64_t>(a.w[i]) + b.w[i];
        if (v >= kLatticeCap || v <= -kLatticeCap) throw UsageError("lattice coordinate overflow");
        r.w[i] = static_cast<std::int32_t>(v);
        len += v < 0 ? -v : v;
      }
      r.len = static_cast<std::int32_t>(len);
      break;
    }
  }
  return r;
}

GroupElement Group::inverse(const GroupElement& a) const {
  check_mine(a);
  GroupElement r = identity();
  switch (spec_.family) {
    case Family::Free: {
      r.w.reserve(a.w.size());
      for (auto it = a.w.rbegin(); it != a.w.rend(); ++it) r.w.push_back(*it ^ 1);
      r.len = a.len;
      break;
    }
    case Family::FreeProductCyclic: {
      r.w.reserve(a.w.size());
      for (size_t j = a.w.size(); j >= 2; j -= 2) {
        std::int32_t f = a.w[j - 2], e = a.w[j - 1];
        r.w.push_back(f);
        r.w.push_back(static_cast<std::int32_t>(spec_.orders[static_cast<size_t>(f)] - e));
      }
      r.len = a.len;
      break;
    }
    case Family::Lattice: {
      for (size_t i = 0; i < r.w.size(); ++i) r.w[i] = -a.w[i];
      r.len = a.len;
      break;
    }
  }
  return r;
}

std::string Group::format(const GroupElement& e) const {
  check_mine(e);
  if (spec_.family == Family::Lattice) {
    std::ostringstream os;
    os << '(';
    for (size_t i = 0; i < e.w.size(); ++i) {
      if (i) os << ',';
      os << e.w[i];
    }
    os << ')';
    return os.str();
  }
  if (e.is_identity()) return "e";
  std::ostringstream os;
  if (spec_.family == Family::Free) {
    for (size_t i = 0; i < e.w.size(); ++i) {
      if (i) os << '.';
      os << spec_.generators[static_cast<size_t>(e.w[i] / 2)];
      if (e.w[i] & 1) os << "^-1";
    }
  } else {
    for (size_t j = 0; j < e.w.size(); j += 2) {
      if (j) os << '.';
      os << spec_.generators[static_cast<size_t>(e.w[j])];
      if (e.w[j + 1] != 1) os << '^' << e.w[j + 1];
    }
  }
  return os.str();
}

GroupElement Group::parse(const std::string& text) const {
  std::string s = text;
  // trim
  auto issp = [](char c) { return c == ' ' || c == '\t'; };
  while (!s.empty() && issp(s.front())) s.erase(s.begin());
  while (!s.empty() && issp(s.back())) s.pop_back();
  if (s.empty()) throw UsageError("empty element string");

  if (spec_.family == Family::Lattice) {
    if (s == "e") return identity();
    if (s.front() != '(' || s.back() != ')') {
      // allow "k" shorthand for dimension 1 and generator words like "e1^2"
      if (spec_.rank() == 1) {
        std::int64_t v = 0;
        auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec == std::errc() && p == s.data() + s.size()) return generator_power(0, v);
      }
    } else {
      std::string body = s.substr(1, s.size() - 2);
      std::vector<std::int64_t> coords;
      size_t pos = 0;
      while (pos <= body.size()) {
        size_t comma = body.find(',', pos);
        std::string tok = body.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
        std::int64_t v = 0;
        auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
        if (ec != std::errc() || p != tok.data() + tok.size())
          throw UsageError("bad lattice coordinate in '" + text + "'");
        coords.push_back(v);
        if (comma == std::string::npos) break;
        pos = comma + 1;
      }
      if (static_cast<int>(coords.size()) != spec_.rank())
        throw UsageError("wrong lattice dimension in '" + text + "'");
      GroupElement r = identity();
      for (size_t i = 0; i < coords.size(); ++i)
        r = multiply(r, generator_power(static_cast<int>(i), coords[i]));
      return r;
    }
  }

  if (s == "e") return identity();
  GroupElement r = identity();
  size_t pos = 0;
  while (pos <= s.size()) {
    size_t dot = s.find('.', pos);
    std::string tok = s.substr(pos, dot == std::string::npos ? std::string::npos : dot - pos);
    if (tok.empty()) throw UsageError("empty syllable in '" + text + "'");
    std::string name = tok;
    std::int64_t exp = 1;
    if (size_t caret = tok.find('^'); caret != std::string::npos) {
      name = tok.substr(0, caret);
      std::string es = tok.substr(caret + 1);
      auto [p, ec] = std::from_chars(es.data(), es.data() + es.size(), exp);
      if (ec != std::errc() || p != es.data() + es.size() || exp == 0)
        throw UsageError("bad exponent in '" + text + "'");
    }
    int gi = -1;
    for (int i = 0; i < spec_.rank(); ++i)
      if (spec_.generators[static_cast<size_t>(i)] == name) gi = i;
    if (gi < 0) throw UsageError("unknown generator '" + name + "' in '" + text + "'");
    r = multiply(r, generator_power(gi, exp));
    if (dot == std::string::npos) break;
    pos = dot + 1;
  }
  return r;
}

GenSet Group::make_gen_set(std::vector<GroupElement> elems) const {
  for (const auto& e : elems) check_mine(e);
  std::sort(elems.begin(), elems.end());
  for (size_t i = 1; i < elems.size(); ++i)
    if (elems[i] == elems[i - 1]) throw UsageError("duplicate element in generating set");
  GenSet s;
  s.elems = std::move(elems);
  s.symmetric = true;
  for (const auto& e : s.elems)
    if (s.index_of(inverse(e)) < 0) s.symmetric = false;
  return s;
}

GenSet Group::standard_gens() const {
  std::vector<GroupElement> v;
  for (int i = 0; i < spec_.rank(); ++i) {
    v.push_back(generator(i));
    GroupElement inv = inverse(v.back());
    if (!(inv == v.back())) v.push_back(std::move(inv));
  }
  return make_gen_set(std::move(v));
}

bool Group::cayley_tree() const {
  if (spec_.family == Family::Free) return true;
  if (spec_.family == Family::FreeProductCyclic)
    return std::all_of(spec_.orders.begin(), spec_.orders.end(), [](int o) { return o == 2; });
  return false;
}

int Group::tree_degree() const { return letter_count(); }

int Group::letter_count() const {
  if (!cayley_tree()) throw UsageError("group's Cayley graph is not a tree");
  return spec_.family == Family::Free ? 2 * spec_.rank() : spec_.rank();
}

GroupElement Group::letter_element(int code) const {
  int n = letter_count();
  if (code < 0 || code >= n) throw UsageError("letter code out of range");
  if (spec_.family == Family::Free) return (code & 1) ? inverse(generator(code / 2)) : generator(code / 2);
  return generator(code);
}

int Group::last_letter(const GroupElement& e) const {
  check_mine(e);
  (void)letter_count();
  if (e.is_identity()) return -1;
  if (spec_.family == Family::Free) return e.w.back();
  return e.w[e.w.size() - 2];
}

int Group::cancel_code(int code) const {
  (void)letter_count();
  return spec_.family == Family::Free ? (code ^ 1) : code;
}

GroupElement Group::append_letter(const GroupElement& e, int code) const {
  check_mine(e);
  int last = last_letter(e);
  if (last >= 0 && cancel_code(last) == code) throw UsageError("append_letter would cancel");
  GroupElement r = e;
  if (spec_.family == Family::Free) {
    r.w.push_back(static_cast<std::int32_t>(code));
  } else {
    r.w.push_back(static_cast<std::int32_t>(code));
    r.w.push_back(1);
  }
  r.len = e.len + 1;
  return r;
}

GroupElement Group::parent_word(const GroupElement& e) const {
  check_mine(e);
  (void)letter_count();
  if (e.is_identity()) throw UsageError("identity has no parent");
  GroupElement r = e;
  r.w.pop_back();
  if (spec_.family == Family::FreeProductCyclic) r.w.pop_back();
  r.len = e.len - 1;
  return r;
}

std::vector<GroupElement> ball(const Group& g, const GenSet& S, int radius, std::size_t max_elements) {
  if (radius < 0) throw UsageError("ball radius must be >= 0");
  std::unordered_set<GroupElement, ElementHash> seen;
  std::vector<GroupElement> frontier{g.identity()};
  seen.insert(g.identity());
  for (int step = 0; step < radius && !frontier.empty(); ++step) {
    std::vector<GroupElement> next;
    for (const auto& v : frontier) {
      for (const auto& s : S.elems) {
        GroupElement u = g.multiply(v, s);
        if (seen.insert(u).second) {
          if (seen.size() > max_elements) throw BudgetError("ball enumeration exceeded element budget");
          next.push_back(std::move(u));
        }
      }
    }
    frontier = std::move(next);
  }
  std::vector<GroupElement> out(seen.begin(), seen.end());
  std::sort(out.begin(), out.end());
  return out;
}

} // namespace edenca
