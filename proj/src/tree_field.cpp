#include "edenca/tree_field.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace edenca {

namespace {

std::uint64_t mix(std::uint64_t h, std::uint64_t v) {
  h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  return h;
}

} // namespace

VectorField::VectorField(std::shared_ptr<const Group> group, GenSet S)
    : group_(std::move(group)), S_(std::move(S)) {
  if (!group_->cayley_tree() || group_->tree_degree() < 3)
    throw UsageError("not compressible with this construction: Cayley graph must be a tree of degree >= 3");
  if (!(S_ == group_->standard_gens()))
    throw UsageError("tree field requires the standard symmetric generating set");
}

std::shared_ptr<const VectorField> build_tree_field(std::shared_ptr<const Group> group, const GenSet& S) {
  return std::make_shared<VectorField>(group, S);
}

int VectorField::min_child_code(const GroupElement& x) const {
  if (x.is_identity()) return 0;
  int cancel = group_->cancel_code(group_->last_letter(x));
  return cancel == 0 ? 1 : 0;
}

int VectorField::second_child_code(const GroupElement& x) const {
  int first = min_child_code(x);
  if (x.is_identity()) return first + 1;
  int cancel = group_->cancel_code(group_->last_letter(x));
  int second = first + 1;
  if (second == cancel) ++second;
  return second;
}

// Walk the word from the root, propagating the "targeted by parent" bit:
// it determines how many minimal children are P1 (one if targeted, two if
// not), and the status determines where the next bit comes from.
VectorField::Walk VectorField::walk(const GroupElement& x) const {
  if (x.gid != group_->gid()) throw UsageError("element does not belong to the field's group");
  Walk cur; // root: untargeted, Status::Root
  if (x.is_identity()) return cur;

  const auto& w = x.w;
  const bool product = group_->spec().family == Family::FreeProductCyclic;
  const size_t step = product ? 2 : 1;
  int prev_code = -1;
  for (size_t i = 0; i < w.size(); i += step) {
    int code = static_cast<int>(product ? w[i] : w[i]);
    Walk next;
    if (prev_code < 0) { // parent is the root: children ranked by letter code
      int rank = code;
      next.status = rank < 2 ? Status::ToParent : Status::ToChild;
      next.targeted = rank == 2; // the root maps to its third child
    } else {
      int cancel = group_->cancel_code(prev_code);
      int rank = code - (code > cancel ? 1 : 0);
      int p1_children = cur.targeted ? 1 : 2;
      next.status = rank < p1_children ? Status::ToParent : Status::ToChild;
      next.targeted = cur.status == Status::ToChild && rank == 0;
    }
    cur = next;
    prev_code = code;
  }
  return cur;
}

VectorField::Status VectorField::status(const GroupElement& x) const { return walk(x).status; }

bool VectorField::targeted(const GroupElement& x) const { return walk(x).targeted; }

GroupElement VectorField::apply(const GroupElement& x) const {
  Walk wk = walk(x);
  if (wk.status == Status::Root) return group_->letter_element(2);
  if (wk.status == Status::ToParent) return group_->parent_word(x);
  return group_->append_letter(x, min_child_code(x));
}

std::array<GroupElement, 2> VectorField::fiber(const GroupElement& x) const {
  Walk wk = walk(x);
  std::array<GroupElement, 2> f = {group_->identity(), group_->identity()};
  if (wk.status == Status::Root) {
    f[0] = group_->letter_element(0);
    f[1] = group_->letter_element(1);
  } else if (wk.targeted) {
    f[0] = group_->parent_word(x);
    f[1] = group_->append_letter(x, min_child_code(x));
  } else {
    f[0] = group_->append_letter(x, min_child_code(x));
    f[1] = group_->append_letter(x, second_child_code(x));
  }
  if (f[1] < f[0]) std::swap(f[0], f[1]);
  return f;
}

std::string VectorField::digest() const {
  std::uint64_t h = group_->gid();
  for (const auto& s : S_.elems) h = mix(h, ElementHash{}(s));
  std::ostringstream os;
  os << "tree-field-" << std::hex << h;
  return os.str();
}

FieldReport verify_field(const VectorField& field, int radius) {
  if (radius < 1) throw UsageError("verify_field radius must be >= 1");
  const Group& g = field.group();
  FieldReport rep;
  rep.radius = radius;

  std::vector<GroupElement> Br = ball(g, field.gens(), radius);
  std::vector<GroupElement> interior = ball(g, field.gens(), radius - 1);
  rep.interior_size = interior.size();

  std::map<GroupElement, int> incoming;
  for (const auto& y : Br) incoming[field.apply(y)]++;

  for (const auto& x : interior) {
    GroupElement fx = field.apply(x);
    GroupElement disp = g.multiply(g.inverse(fx), x);
    if (!field.gens().contains(disp))
      rep.violations.push_back({x, "displacement", "f(x)^-1 x = " + g.format(disp) + " not in S"});
    auto it = incoming.find(x);
    int count = it == incoming.end() ? 0 : it->second;
    if (count != 2)
      rep.violations.push_back({x, "fiber", "|f^-1(x)| = " + std::to_string(count)});
  }
  return rep;
}

std::string field_to_dot(const VectorField& field, int radius) {
  const Group& g = field.group();
  std::vector<GroupElement> B = ball(g, field.gens(), radius);
  std::ostringstream os;
  os << "digraph field {\n";
  os << "  rankdir=TB;\n";
  for (const auto& x : B) {
    const char* color = "lightblue";
    const char* shape = "ellipse";
    switch (field.status(x)) {
      case VectorField::Status::Root: color = "gold"; shape = "doublecircle"; break;
      case VectorField::Status::ToParent: color = "lightblue"; break;
      case VectorField::Status::ToChild: color = "salmon"; break;
    }
    os << "  \"" << g.format(x) << "\" [style=filled,fillcolor=" << color << ",shape=" << shape << "];\n";
  }
  for (const auto& x : B) {
    GroupElement fx = field.apply(x);
    if (std::binary_search(B.begin(), B.end(), fx))
      os << "  \"" << g.format(x) << "\" -> \"" << g.format(fx) << "\";\n";
  }
  os << "}\n";
  return os.str();
}

std::shared_ptr<const Correspondence> Correspondence::from_field(std::shared_ptr<const VectorField> field, int c) {
  if (c < 1) throw UsageError("doubling factor must be >= 1");
  auto corr = std::make_shared<Correspondence>();
  corr->group_ = field->group_ptr();
  corr->S_ = field->gens();
  corr->field_ = std::move(field);
  corr->c_ = c;
  corr->m_ = 2 * c;
  corr->n_ = c;
  return corr;
}

std::shared_ptr<const Correspondence> Correspondence::from_table(
    std::shared_ptr<const Group> group, GenSet S, int m, int n,
    std::vector<std::pair<std::pair<GroupElement, GroupElement>, int>> entries) {
  if (n < 1 || m < 1) throw UsageError("correspondence needs m, n >= 1");
  auto corr = std::make_shared<Correspondence>();
  corr->group_ = std::move(group);
  corr->S_ = std::move(S);
  corr->m_ = m;
  corr->n_ = n;
  for (auto& [xy, mult] : entries) {
    if (mult <= 0) throw DataError("correspondence table entry with non-positive multiplicity");
    corr->out_[xy.first].emplace_back(xy.second, mult);
    corr->in_[xy.second].emplace_back(xy.first, mult);
  }
  for (auto& [k, v] : corr->out_) std::sort(v.begin(), v.end());
  for (auto& [k, v] : corr->in_) std::sort(v.begin(), v.end());
  return corr;
}

std::shared_ptr<const Correspondence> double_field(std::shared_ptr<const VectorField> field, int c) {
  return Correspondence::from_field(std::move(field), c);
}

int Correspondence::at(const GroupElement& x, const GroupElement& y) const {
  if (field_) return field_->apply(x) == y ? c_ : 0;
  auto it = out_.find(x);
  if (it == out_.end()) return 0;
  for (const auto& [t, mult] : it->second)
    if (t == y) return mult;
  return 0;
}

std::vector<std::pair<GroupElement, int>> Correspondence::arrows_out(const GroupElement& x) const {
  if (field_) return {{field_->apply(x), c_}};
  auto it = out_.find(x);
  return it == out_.end() ? std::vector<std::pair<GroupElement, int>>{} : it->second;
}

std::vector<std::pair<GroupElement, int>> Correspondence::arrows_in(const GroupElement& x) const {
  if (field_) {
    auto f = field_->fiber(x);
    return {{f[0], c_}, {f[1], c_}};
  }
  auto it = in_.find(x);
  return it == in_.end() ? std::vector<std::pair<GroupElement, int>>{} : it->second;
}

std::string Correspondence::digest() const {
  std::uint64_t h = group_->gid();
  h = mix(h, static_cast<std::uint64_t>(m_));
  h = mix(h, static_cast<std::uint64_t>(n_));
  if (field_) h = mix(h, 1);
  for (const auto& [x, v] : out_) {
    h = mix(h, ElementHash{}(x));
    for (const auto& [y, mult] : v) h = mix(mix(h, ElementHash{}(y)), static_cast<std::uint64_t>(mult));
  }
  std::ostringstream os;
  os << (field_ ? "doubled-field-" : "table-corr-") << std::hex << h;
  return os.str();
}

} // namespace edenca
