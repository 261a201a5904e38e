#include "cloneforge/op_table.hpp"

#include <algorithm>
#include <string>

namespace cloneforge {

std::size_t table_size(std::uint32_t n, std::uint32_t arity) {
  if (arity < 1) throw ArityMismatchError("arity must be >= 1");
  std::size_t total = 1;
  for (std::uint32_t i = 0; i < arity; ++i) {
    if (total > (std::size_t{1} << 26) / n)
      throw BudgetExceededError("table of n^arity entries is too large");
    total *= n;
  }
  return total;
}

OpTable::OpTable(Modulus mod, std::uint32_t arity, std::vector<Elem> values)
    : mod_(mod), arity_(arity), values_(std::move(values)) {
  if (mod_.n() > 255)
    throw ElementOutOfRangeError("table entries are bytes; n must be <= 255");
  std::size_t expect = table_size(mod_.n(), arity_);
  if (values_.size() != expect)
    throw ElementOutOfRangeError("value table has wrong length");
  for (Elem v : values_)
    if (v >= mod_.n())
      throw ElementOutOfRangeError("table entry out of range");
}

std::size_t flat_index(std::uint32_t n, std::span<const Elem> tuple) {
  std::size_t idx = 0;
  for (Elem x : tuple) idx = idx * n + x;
  return idx;
}

OpTable projection(const Modulus& mod, std::uint32_t arity, std::uint32_t i) {
  if (i < 1 || i > arity)
    throw IndexOutOfRangeError("projection index must be in 1..arity");
  std::vector<Elem> vals(table_size(mod.n(), arity));
  for_each_tuple(mod.n(), arity, [&](std::span<const Elem> x, std::size_t idx) {
    vals[idx] = x[i - 1];
  });
  return OpTable(mod, arity, std::move(vals));
}

OpTable constant(const Modulus& mod, std::uint32_t arity, std::uint32_t c) {
  if (c >= mod.n()) throw ElementOutOfRangeError("constant out of range");
  return OpTable(mod, arity,
                 std::vector<Elem>(table_size(mod.n(), arity),
                                   static_cast<Elem>(c)));
}

OpTable ring_add(const Modulus& mod) {
  std::uint32_t n = mod.n();
  std::vector<Elem> vals(static_cast<std::size_t>(n) * n);
  for (std::uint32_t x = 0; x < n; ++x)
    for (std::uint32_t y = 0; y < n; ++y)
      vals[static_cast<std::size_t>(x) * n + y] =
          static_cast<Elem>((x + y) % n);
  return OpTable(mod, 2, std::move(vals));
}

OpTable ring_mul(const Modulus& mod) {
  std::uint32_t n = mod.n();
  std::vector<Elem> vals(static_cast<std::size_t>(n) * n);
  for (std::uint32_t x = 0; x < n; ++x)
    for (std::uint32_t y = 0; y < n; ++y)
      vals[static_cast<std::size_t>(x) * n + y] =
          static_cast<Elem>(x * y % n);
  return OpTable(mod, 2, std::move(vals));
}

Elem evaluate(const OpTable& f, std::span<const Elem> x) {
  if (x.size() != f.arity()) throw ArityMismatchError("wrong tuple length");
  for (Elem v : x)
    if (v >= f.n()) throw ElementOutOfRangeError("tuple entry out of range");
  return f[flat_index(f.n(), x)];
}

OpTable compose(const OpTable& f, const std::vector<OpTable>& gs) {
  if (gs.size() != f.arity())
    throw ArityMismatchError("compose needs one inner operation per argument");
  if (gs.empty()) throw ArityMismatchError("arity must be >= 1");
  std::uint32_t m = gs.front().arity();
  for (const OpTable& g : gs) {
    if (!(g.modulus() == f.modulus()))
      throw ModulusMismatchError("compose across different moduli");
    if (g.arity() != m)
      throw ArityMismatchError("inner operations must share one arity");
  }
  std::uint32_t n = f.n();
  std::size_t total = table_size(n, m);
  std::vector<Elem> vals(total);
  for (std::size_t idx = 0; idx < total; ++idx) {
    std::size_t fi = 0;
    for (const OpTable& g : gs) fi = fi * n + g[idx];
    vals[idx] = f[fi];
  }
  return OpTable(f.modulus(), m, std::move(vals));
}

namespace {

OpTable pointwise(const OpTable& f, const OpTable& g, const char* what,
                  Elem (*op)(std::uint32_t, std::uint32_t, std::uint32_t)) {
  if (!(f.modulus() == g.modulus()))
    throw ModulusMismatchError(std::string(what) + " across different moduli");
  if (f.arity() != g.arity())
    throw ArityMismatchError(std::string(what) + " across different arities");
  std::vector<Elem> vals(f.size());
  std::uint32_t n = f.n();
  for (std::size_t i = 0; i < f.size(); ++i) vals[i] = op(f[i], g[i], n);
  return OpTable(f.modulus(), f.arity(), std::move(vals));
}

}  // namespace

OpTable pointwise_add(const OpTable& f, const OpTable& g) {
  return pointwise(f, g, "pointwise_add",
                   [](std::uint32_t a, std::uint32_t b, std::uint32_t n) {
                     return static_cast<Elem>((a + b) % n);
                   });
}

OpTable pointwise_sub(const OpTable& f, const OpTable& g) {
  return pointwise(f, g, "pointwise_sub",
                   [](std::uint32_t a, std::uint32_t b, std::uint32_t n) {
                     return static_cast<Elem>((a + n - b) % n);
                   });
}

OpTable pointwise_mul(const OpTable& f, const OpTable& g) {
  return pointwise(f, g, "pointwise_mul",
                   [](std::uint32_t a, std::uint32_t b, std::uint32_t n) {
                     return static_cast<Elem>(a * b % n);
                   });
}

OpTable scale(const OpTable& f, std::uint32_t c) {
  if (c >= f.n()) throw ElementOutOfRangeError("scale factor out of range");
  std::vector<Elem> vals(f.size());
  for (std::size_t i = 0; i < f.size(); ++i)
    vals[i] = static_cast<Elem>(f[i] * c % f.n());
  return OpTable(f.modulus(), f.arity(), std::move(vals));
}

OpTable shift(const OpTable& f, std::span<const Elem> a) {
  if (a.size() != f.arity()) throw ArityMismatchError("shift vector length");
  std::uint32_t n = f.n();
  std::vector<Elem> vals(f.size());
  Tuple y(f.arity());
  for_each_tuple(n, f.arity(), [&](std::span<const Elem> x, std::size_t idx) {
    for (std::size_t j = 0; j < y.size(); ++j)
      y[j] = static_cast<Elem>((x[j] + a[j]) % n);
    vals[idx] = f[flat_index(n, y)];
  });
  return OpTable(f.modulus(), f.arity(), std::move(vals));
}

bool preserves_congruence(const OpTable& f, const Congruence& theta) {
  if (!(theta.modulus == f.modulus()))
    throw ModulusMismatchError("congruence on a different modulus");
  std::uint32_t d = theta.divisor;
  if (d == 1 || d == f.n()) return true;
  std::uint32_t n = f.n();
  bool ok = true;
  Tuple rep(f.arity());
  for_each_tuple(n, f.arity(), [&](std::span<const Elem> x, std::size_t idx) {
    if (!ok) return;
    for (std::size_t j = 0; j < rep.size(); ++j)
      rep[j] = static_cast<Elem>(x[j] % d);
    if ((f[idx] % d) != (f[flat_index(n, rep)] % d)) ok = false;
  });
  return ok;
}

bool is_compatible(const OpTable& f) {
  for (std::uint32_t d : divisors(f.modulus())) {
    if (d == 1 || d == f.n()) continue;
    if (!preserves_congruence(f, Congruence(f.modulus(), d))) return false;
  }
  return true;
}

bool preserves_m_set(const OpTable& f) {
  std::uint32_t p = f.modulus().pp().p;
  std::uint32_t msize = f.n() / p;
  bool ok = true;
  Tuple x(f.arity());
  for_each_tuple(msize, f.arity(), [&](std::span<const Elem> l, std::size_t) {
    if (!ok) return;
    for (std::size_t j = 0; j < x.size(); ++j)
      x[j] = static_cast<Elem>(l[j] * p);
    if (f[flat_index(f.n(), x)] % p != 0) ok = false;
  });
  return ok;
}

std::size_t PackedKeyHash::operator()(const PackedKey& k) const {
  // FNV-1a
  std::uint64_t h = 1469598103934665603ull;
  for (std::uint8_t b : k.bytes) {
    h ^= b;
    h *= 1099511628211ull;
  }
  return static_cast<std::size_t>(h);
}

std::uint32_t bits_per_entry(std::uint32_t n) {
  std::uint32_t w = 1;
  while ((1u << w) < n) ++w;
  return w;
}

PackedKey pack_values(std::span<const Elem> vals, std::uint32_t n) {
  std::uint32_t w = bits_per_entry(n);
  PackedKey key;
  key.bytes.assign((vals.size() * w + 7) / 8, 0);
  std::size_t bit = 0;
  for (Elem v : vals) {
    for (std::uint32_t j = 0; j < w; ++j, ++bit)
      if (v >> j & 1) key.bytes[bit >> 3] |= std::uint8_t(1) << (bit & 7);
  }
  return key;
}

PackedKey pack_table(const OpTable& t) {
  return pack_values(t.values(), t.n());
}

OpTable unpack_table(const PackedKey& key, const Modulus& mod,
                     std::uint32_t arity) {
  std::uint32_t w = bits_per_entry(mod.n());
  std::size_t count = table_size(mod.n(), arity);
  if (key.bytes.size() != (count * w + 7) / 8)
    throw ParseError("packed key has wrong length for this modulus/arity");
  std::vector<Elem> vals(count, 0);
  std::size_t bit = 0;
  for (std::size_t i = 0; i < count; ++i) {
    Elem v = 0;
    for (std::uint32_t j = 0; j < w; ++j, ++bit)
      if (key.bytes[bit >> 3] >> (bit & 7) & 1) v |= Elem(1) << j;
    vals[i] = v;
  }
  return OpTable(mod, arity, std::move(vals));
}

}  // namespace cloneforge
