#include "pfreal/perm_group.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "pfreal/errors.hpp"

namespace pfreal {

Permutation::Permutation(std::size_t n) : images_(n) { std::iota(images_.begin(), images_.end(), 0); }

Permutation::Permutation(std::vector<int> images) : images_(std::move(images)) {
  std::vector<bool> hit(images_.size(), false);
  for (int v : images_) {
    if (v < 0 || static_cast<std::size_t>(v) >= images_.size() || hit[static_cast<std::size_t>(v)])
      throw InvalidInput("permutation images are not a bijection");
    hit[static_cast<std::size_t>(v)] = true;
  }
}

Permutation Permutation::transposition(std::size_t n, int a, int b) {
  Permutation p(n);
  std::swap(p.images_[static_cast<std::size_t>(a)], p.images_[static_cast<std::size_t>(b)]);
  return p;
}

Permutation Permutation::from_cycles(std::size_t n, const std::vector<std::vector<int>>& cycles) {
  std::vector<int> img(n);
  std::iota(img.begin(), img.end(), 0);
  for (const auto& c : cycles)
    for (std::size_t i = 0; i < c.size(); ++i) img[static_cast<std::size_t>(c[i])] = c[(i + 1) % c.size()];
  return Permutation(std::move(img));
}

bool Permutation::is_identity() const {
  for (std::size_t i = 0; i < images_.size(); ++i)
    if (images_[i] != static_cast<int>(i)) return false;
  return true;
}

Permutation operator*(const Permutation& a, const Permutation& b) {
  if (a.size() != b.size()) throw InvalidInput("permutations act on different point sets");
  Permutation r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r.images_[i] = b.images_[static_cast<std::size_t>(a.images_[i])];
  return r;
}

Permutation Permutation::inverse() const {
  Permutation r(size());
  for (std::size_t i = 0; i < size(); ++i) r.images_[static_cast<std::size_t>(images_[i])] = static_cast<int>(i);
  return r;
}

std::string Permutation::to_cycle_string() const {
  std::ostringstream out;
  std::vector<bool> seen(size(), false);
  for (std::size_t i = 0; i < size(); ++i) {
    if (seen[i] || images_[i] == static_cast<int>(i)) continue;
    out << "(";
    std::size_t j = i;
    bool first = true;
    while (!seen[j]) {
      seen[j] = true;
      out << (first ? "" : " ") << j + 1;
      first = false;
      j = static_cast<std::size_t>(images_[j]);
    }
    out << ")";
  }
  const std::string s = out.str();
  return s.empty() ? "()" : s;
}

StabilizerChain::StabilizerChain(std::size_t n) : n_(n), table_(n), strong_(n) {
  for (std::size_t k = 0; k < n; ++k) {
    table_[k].resize(n);
    table_[k][k] = Permutation(n);
  }
}

bool StabilizerChain::sifts(Permutation g, std::size_t level) const {
  for (std::size_t k = level; k < n_; ++k) {
    const auto j = static_cast<std::size_t>(g(static_cast<int>(k)));
    if (!table_[k][j]) return false;
    g = g * table_[k][j]->inverse();
  }
  return g.is_identity();
}

bool StabilizerChain::contains(const Permutation& g) const {
  if (g.size() != n_) throw InvalidInput("permutation degree mismatch");
  return sifts(g, 0);
}

void StabilizerChain::add(const Permutation& g, std::size_t level) {
  if (level >= n_ || sifts(g, level)) return;
  strong_[level].push_back(g);
  // Snapshot: entries created during the loop get combined with g inside extend.
  std::vector<Permutation> reps;
  for (const auto& t : table_[level])
    if (t) reps.push_back(*t);
  for (const auto& s : reps) extend(s * g, level);
}

void StabilizerChain::extend(const Permutation& tau, std::size_t level) {
  const auto j = static_cast<std::size_t>(tau(static_cast<int>(level)));
  if (!table_[level][j]) {
    table_[level][j] = tau;
    const std::vector<Permutation> gens = strong_[level];
    for (const auto& s : gens) extend(tau * s, level);
  } else {
    add(tau * table_[level][j]->inverse(), level + 1);
  }
}

bool StabilizerChain::insert(const Permutation& g) {
  if (g.size() != n_) throw InvalidInput("permutation degree mismatch");
  if (sifts(g, 0)) return false;
  generators_.push_back(g);
  add(g, 0);
  return true;
}

BigInt StabilizerChain::order() const {
  BigInt ord = 1;
  for (const auto& row : table_) {
    const auto count = std::count_if(row.begin(), row.end(), [](const auto& t) { return t.has_value(); });
    ord *= static_cast<unsigned>(count);
  }
  return ord;
}

BigInt group_order(const std::vector<Permutation>& generators) {
  if (generators.empty()) return 1;
  StabilizerChain chain(generators.front().size());
  for (const auto& g : generators) chain.insert(g);
  return chain.order();
}

std::vector<int> common_fixed_points(const std::vector<Permutation>& generators, std::size_t n) {
  std::vector<int> fixed;
  for (std::size_t i = 0; i < n; ++i) {
    const int p = static_cast<int>(i);
    if (std::all_of(generators.begin(), generators.end(), [p](const Permutation& g) { return g(p) == p; }))
      fixed.push_back(p);
  }
  return fixed;
}

namespace {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[static_cast<std::size_t>(x)] != x) {
      parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
      x = parent[static_cast<std::size_t>(x)];
    }
    return x;
  }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (b < a) std::swap(a, b);
    parent[static_cast<std::size_t>(b)] = a;
    return true;
  }
  std::vector<std::vector<int>> classes(std::size_t n) {
    std::vector<std::vector<int>> by_root(n);
    for (std::size_t i = 0; i < n; ++i) by_root[static_cast<std::size_t>(find(static_cast<int>(i)))].push_back(static_cast<int>(i));
    std::vector<std::vector<int>> out;
    for (auto& c : by_root)
      if (!c.empty()) out.push_back(std::move(c));
    return out;
  }
};

}  // namespace

std::vector<std::vector<int>> orbits(const std::vector<Permutation>& generators, std::size_t n) {
  UnionFind uf(n);
  for (const auto& g : generators)
    for (std::size_t i = 0; i < n; ++i) uf.unite(static_cast<int>(i), g(static_cast<int>(i)));
  return uf.classes(n);
}

std::vector<std::vector<int>> minimal_block_system(const std::vector<Permutation>& generators, std::size_t n,
                                                   int a, int b) {
  UnionFind uf(n);
  std::vector<std::pair<int, int>> queue;
  if (uf.unite(a, b)) queue.emplace_back(a, b);
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const auto [x, y] = queue[head];
    for (const auto& g : generators)
      if (uf.unite(g(x), g(y))) queue.emplace_back(g(x), g(y));
  }
  return uf.classes(n);
}

std::vector<std::vector<int>> finest_block_system(const std::vector<Permutation>& generators, std::size_t n) {
  std::vector<std::vector<int>> result;
  for (const auto& orbit : orbits(generators, n)) {
    if (orbit.size() < 3) continue;
    std::vector<std::vector<int>> best;
    std::size_t best_size = orbit.size();
    for (std::size_t k = 1; k < orbit.size(); ++k) {
      const auto classes = minimal_block_system(generators, n, orbit[0], orbit[k]);
      std::size_t size = 0;
      for (const auto& c : classes)
        if (std::find(c.begin(), c.end(), orbit[0]) != c.end()) size = c.size();
      if (size > 1 && size < best_size) {
        best_size = size;
        best.clear();
        for (const auto& c : classes)
          if (c.size() > 1) best.push_back(c);
      }
    }
    result.insert(result.end(), best.begin(), best.end());
  }
  std::sort(result.begin(), result.end());
  return result;
}

bool preserves_partition(const Permutation& g, const std::vector<std::vector<int>>& blocks) {
  std::vector<int> owner(g.size(), -1);
  for (std::size_t b = 0; b < blocks.size(); ++b)
    for (int p : blocks[b]) owner[static_cast<std::size_t>(p)] = static_cast<int>(b);
  for (const auto& block : blocks) {
    const int target = owner[static_cast<std::size_t>(g(block.front()))];
    if (target < 0 || blocks[static_cast<std::size_t>(target)].size() != block.size()) return false;
    for (int p : block)
      if (owner[static_cast<std::size_t>(g(p))] != target) return false;
  }
  return true;
}

}  // namespace pfreal
