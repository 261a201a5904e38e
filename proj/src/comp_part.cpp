#include <algorithm>

#include "cloneforge/clone.hpp"

namespace cloneforge {

namespace {

// Digit scaffolding for one prime power p^k at arity m: a compatible table is
// exactly f(x) = sum_j p^(j-1) * d_j(x mod p^j) with free digit functions
// d_j : (Z_{p^j})^m -> {0..p-1}. Level-reduced index maps are precomputed so
// a table rebuild is a few adds per entry.
struct DigitScheme {
  std::uint32_t p = 0, k = 0, n = 0, m = 0;
  std::size_t len = 0;                       // n^m
  std::vector<std::size_t> level_offset;     // into the digit vector
  std::vector<std::vector<std::uint32_t>> level_index;  // per level, per entry
  std::size_t digit_count = 0;

  DigitScheme(const PrimePower& pp, std::uint32_t nn, std::uint32_t arity) {
    p = pp.p;
    k = pp.k;
    n = nn;
    m = arity;
    len = table_size(n, m);
    std::uint32_t pj = 1;
    for (std::uint32_t j = 1; j <= k; ++j) {
      pj *= p;
      level_offset.push_back(digit_count);
      std::vector<std::uint32_t> map(len);
      for_each_tuple(n, m, [&](std::span<const Elem> x, std::size_t idx) {
        std::uint32_t ri = 0;
        for (Elem v : x) ri = ri * pj + v % pj;
        map[idx] = ri;
      });
      level_index.push_back(std::move(map));
      digit_count += table_size(pj, m);
    }
  }

  void build(const std::vector<Elem>& digits, std::vector<Elem>& out) const {
    std::fill(out.begin(), out.end(), 0);
    std::uint32_t scalefac = 1;
    for (std::uint32_t j = 0; j < k; ++j) {
      const auto& map = level_index[j];
      const Elem* d = digits.data() + level_offset[j];
      for (std::size_t i = 0; i < len; ++i)
        out[i] = static_cast<Elem>(out[i] + scalefac * d[map[i]]);
      scalefac *= p;
    }
  }
};

}  // namespace

bool CompPart::contains(const OpTable& f) const {
  if (!(f.modulus() == modulus) || f.arity() != arity)
    throw ModulusMismatchError("membership query across modulus or arity");
  return std::binary_search(keys.begin(), keys.end(), pack_table(f));
}

std::uint64_t CompPart::members_hash() const {
  std::uint64_t h = kFnvOffset;
  for (const PackedKey& k : keys) h = fnv1a(h, k.bytes.data(), k.bytes.size());
  return h;
}

CompPart comp_part(const Modulus& mod, std::uint32_t m, std::uint64_t budget) {
  FactoredCount count = compatible_count(mod.n(), m);
  if (!count.fits_u64() || count.as_u64() > budget)
    throw BudgetExceededError("compatible part has " + count.str() +
                              " members, over the enumeration budget");
  std::uint64_t total = count.as_u64();
  auto pps = factorize(mod.n());
  std::vector<DigitScheme> schemes;
  for (const PrimePower& pp : pps) schemes.emplace_back(pp, mod.n(), m);
  // CRT idempotents per factor (1 at its own factor, 0 at the others)
  std::vector<std::uint32_t> idem;
  for (const PrimePower& pp : pps) {
    std::uint32_t q = 1;
    for (std::uint32_t j = 0; j < pp.k; ++j) q *= pp.p;
    std::uint32_t rest = mod.n() / q;
    if (rest == 1) {
      idem.push_back(1 % mod.n());
    } else {
      idem.push_back(static_cast<std::uint32_t>(
          static_cast<std::uint64_t>(crt_pair(q, rest).a)));
    }
  }

  CompPart out;
  out.modulus = mod;
  out.arity = m;
  out.keys.reserve(total);

  std::size_t len = table_size(mod.n(), m);
  std::vector<std::vector<Elem>> digit_store, factor_table;
  for (const DigitScheme& sc : schemes) {
    digit_store.emplace_back(sc.digit_count, 0);
    factor_table.emplace_back(len, 0);
  }
  std::vector<Elem> vals(len);
  for (std::size_t fi = 0; fi < schemes.size(); ++fi)
    schemes[fi].build(digit_store[fi], factor_table[fi]);

  for (std::uint64_t c = 0;; ++c) {
    // combine factor tables via idempotents
    std::fill(vals.begin(), vals.end(), 0);
    for (std::size_t fi = 0; fi < schemes.size(); ++fi) {
      std::uint32_t e = idem[fi];
      const auto& ft = factor_table[fi];
      for (std::size_t i = 0; i < len; ++i)
        vals[i] = static_cast<Elem>((vals[i] + e * ft[i]) % mod.n());
    }
    out.keys.push_back(pack_values(vals, mod.n()));
    if (c + 1 == total) break;
    // odometer over digits, last factor fastest
    for (std::size_t fi = schemes.size(); fi-- > 0;) {
      bool carried = true;
      auto& digits = digit_store[fi];
      for (std::size_t d = digits.size(); d-- > 0;) {
        if (++digits[d] < schemes[fi].p) {
          carried = false;
          break;
        }
        digits[d] = 0;
      }
      schemes[fi].build(digits, factor_table[fi]);
      if (!carried) break;
    }
  }
  std::sort(out.keys.begin(), out.keys.end());
  return out;
}

OpTable sample_compatible(const Modulus& mod, std::uint32_t m,
                          std::uint64_t& rng_state) {
  std::size_t len = table_size(mod.n(), m);
  std::vector<Elem> vals(len, 0);
  std::vector<Elem> part(len);
  for (const PrimePower& pp : factorize(mod.n())) {
    DigitScheme sc(pp, mod.n(), m);
    std::vector<Elem> digits(sc.digit_count);
    for (Elem& d : digits) d = static_cast<Elem>(rng_below(rng_state, pp.p));
    sc.build(digits, part);
    std::uint32_t q = 1;
    for (std::uint32_t j = 0; j < pp.k; ++j) q *= pp.p;
    std::uint32_t rest = mod.n() / q;
    std::uint32_t e = rest == 1 ? 1 % mod.n() : crt_pair(q, rest).a;
    for (std::size_t i = 0; i < len; ++i)
      vals[i] = static_cast<Elem>((vals[i] + e * part[i]) % mod.n());
  }
  return OpTable(mod, m, std::move(vals));
}

}  // namespace cloneforge
