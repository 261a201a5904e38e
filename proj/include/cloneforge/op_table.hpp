#pragma once

// Finitary operations on Z_n as explicit value tables, with composition,
// pointwise ring combinators and congruence-compatibility tests.
//
// Indexing convention (fixed everywhere, including serialization): the tuple
// (x_1, ..., x_a) maps to the flat index
//   x_1 * n^(a-1) + x_2 * n^(a-2) + ... + x_a,
// i.e. x_1 is the most significant digit.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "cloneforge/errors.hpp"
#include "cloneforge/zmod.hpp"

namespace cloneforge {

using Elem = std::uint8_t;
using Tuple = std::vector<Elem>;

// n^arity with a sanity cap; table operations are meant for desk scale.
std::size_t table_size(std::uint32_t n, std::uint32_t arity);

class OpTable {
 public:
  OpTable(Modulus mod, std::uint32_t arity, std::vector<Elem> values);

  const Modulus& modulus() const { return mod_; }
  std::uint32_t n() const { return mod_.n(); }
  std::uint32_t arity() const { return arity_; }
  std::size_t size() const { return values_.size(); }
  const std::vector<Elem>& values() const { return values_; }
  Elem operator[](std::size_t idx) const { return values_[idx]; }

  friend bool operator==(const OpTable& a, const OpTable& b) {
    return a.mod_.n() == b.mod_.n() && a.arity_ == b.arity_ &&
           a.values_ == b.values_;
  }

 private:
  Modulus mod_;
  std::uint32_t arity_;
  std::vector<Elem> values_;
};

std::size_t flat_index(std::uint32_t n, std::span<const Elem> tuple);

// Visits all tuples of {0..n-1}^arity in flat-index order. The callback gets
// (tuple, flat_index).
template <typename F>
void for_each_tuple(std::uint32_t n, std::uint32_t arity, F&& fn) {
  Tuple x(arity, 0);
  std::size_t total = table_size(n, arity);
  for (std::size_t idx = 0; idx < total; ++idx) {
    fn(std::span<const Elem>(x), idx);
    for (std::uint32_t pos = arity; pos-- > 0;) {
      if (++x[pos] < n) break;
      x[pos] = 0;
    }
  }
}

OpTable projection(const Modulus& mod, std::uint32_t arity, std::uint32_t i);
OpTable constant(const Modulus& mod, std::uint32_t arity, std::uint32_t c);
OpTable ring_add(const Modulus& mod);
OpTable ring_mul(const Modulus& mod);

Elem evaluate(const OpTable& f, std::span<const Elem> x);

// h(x) = f(g_1(x), ..., g_l(x)); all g_i share arity and modulus.
OpTable compose(const OpTable& f, const std::vector<OpTable>& gs);

OpTable pointwise_add(const OpTable& f, const OpTable& g);
OpTable pointwise_sub(const OpTable& f, const OpTable& g);
OpTable pointwise_mul(const OpTable& f, const OpTable& g);
OpTable scale(const OpTable& f, std::uint32_t c);

// g(x) = f(x + a) with componentwise addition mod n.
OpTable shift(const OpTable& f, std::span<const Elem> a);

// True iff congruent inputs map to congruent values for the congruence mod d.
// Implemented by comparing each input against its blockwise canonical
// representative (x_i mod d), which is equivalent to the full pairwise
// definition by transitivity.
bool preserves_congruence(const OpTable& f, const Congruence& theta);

// True iff preserves_congruence holds for every divisor of n.
bool is_compatible(const OpTable& f);

// On Z_{p^k}: true iff f maps M^arity into M, where M = multiples of p.
bool preserves_m_set(const OpTable& f);

// Canonical fixed-width encoding of a table: each entry in ceil(log2 n) bits,
// entry i at bit offset i*w (bit b lives in byte b/8, position b%8), zero
// padding to a whole byte. Injective per (modulus, arity); byte-lexicographic
// order on keys is the canonical member order everywhere.
struct PackedKey {
  std::vector<std::uint8_t> bytes;
  friend bool operator==(const PackedKey&, const PackedKey&) = default;
  friend auto operator<=>(const PackedKey& a, const PackedKey& b) {
    return a.bytes <=> b.bytes;
  }
};

struct PackedKeyHash {
  std::size_t operator()(const PackedKey& k) const;
};

std::uint32_t bits_per_entry(std::uint32_t n);
PackedKey pack_table(const OpTable& t);
PackedKey pack_values(std::span<const Elem> vals, std::uint32_t n);
OpTable unpack_table(const PackedKey& key, const Modulus& mod,
                     std::uint32_t arity);

}  // namespace cloneforge
