#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace pfreal {

using BigInt = boost::multiprecision::cpp_int;

/// Permutation of {0..n-1}; image(i) is where i goes.
class Permutation {
 public:
  Permutation() = default;
  explicit Permutation(std::size_t n);  // identity
  explicit Permutation(std::vector<int> images);  // throws InvalidInput unless bijective

  static Permutation transposition(std::size_t n, int a, int b);
  // From 0-based cycles, e.g. {{0,1,2}} on n points.
  static Permutation from_cycles(std::size_t n, const std::vector<std::vector<int>>& cycles);

  std::size_t size() const { return images_.size(); }
  int operator()(int i) const { return images_[static_cast<std::size_t>(i)]; }
  const std::vector<int>& images() const { return images_; }
  bool is_identity() const;

  // (a * b)(i) = b(a(i)): apply a first.
  friend Permutation operator*(const Permutation& a, const Permutation& b);
  Permutation inverse() const;
  friend bool operator==(const Permutation&, const Permutation&) = default;

  std::string to_cycle_string() const;  // 1-based cycles, "()" for identity

 private:
  std::vector<int> images_;
};

/// Stabilizer chain over the base 0, 1, ..., n-1 (Sims table), grown by the
/// incremental Schreier-Sims procedure: every transversal entry times every
/// strong generator is sifted into the next level.
class StabilizerChain {
 public:
  explicit StabilizerChain(std::size_t n);

  std::size_t degree() const { return n_; }

  // Adds g to the generated group; returns true when the group grew.
  bool insert(const Permutation& g);
  bool contains(const Permutation& g) const;
  BigInt order() const;
  const std::vector<Permutation>& generators() const { return generators_; }

 private:
  bool sifts(Permutation g, std::size_t level) const;
  void add(const Permutation& g, std::size_t level);
  void extend(const Permutation& tau, std::size_t level);

  std::size_t n_;
  // table_[k][j]: element fixing 0..k-1 and sending k to j.
  std::vector<std::vector<std::optional<Permutation>>> table_;
  std::vector<std::vector<Permutation>> strong_;
  std::vector<Permutation> generators_;
};

BigInt group_order(const std::vector<Permutation>& generators);

// Points fixed by every generator, 0-based.
std::vector<int> common_fixed_points(const std::vector<Permutation>& generators, std::size_t n);

// Orbits of the generated group, each sorted, ordered by smallest element.
std::vector<std::vector<int>> orbits(const std::vector<Permutation>& generators, std::size_t n);

// Finest partition preserved by every generator in which a and b share a class.
std::vector<std::vector<int>> minimal_block_system(const std::vector<Permutation>& generators,
                                                   std::size_t n, int a, int b);

/// Smallest nontrivial blocks over all nontrivial orbits; empty when every
/// orbit acts primitively. Blocks are sorted and listed by smallest element.
std::vector<std::vector<int>> finest_block_system(const std::vector<Permutation>& generators, std::size_t n);

// True when every generator maps each block onto a block of the partition.
bool preserves_partition(const Permutation& g, const std::vector<std::vector<int>>& blocks);

}  // namespace pfreal
