#include "cloneforge/zmod.hpp"

#include <algorithm>
#include <numeric>

namespace cloneforge {

Modulus::Modulus(std::uint32_t n) : n_(n) {
  if (n < 2) throw ElementOutOfRangeError("modulus must be >= 2");
  auto fac = factorize(n);
  if (fac.size() == 1) pp_ = fac.front();
}

Modulus Modulus::prime_power(std::uint32_t p, std::uint32_t k) {
  if (!is_prime(p)) throw NotPrimePowerError("p is not prime");
  if (k < 1) throw NotPrimePowerError("exponent must be >= 1");
  std::uint64_t n = 1;
  for (std::uint32_t i = 0; i < k; ++i) {
    n *= p;
    if (n > 0xffffffffull) throw ElementOutOfRangeError("p^k overflows");
  }
  return Modulus(static_cast<std::uint32_t>(n));
}

const PrimePower& Modulus::pp() const {
  if (!pp_) throw NotPrimePowerError("modulus is not a prime power");
  return *pp_;
}

Congruence::Congruence(Modulus mod, std::uint32_t d)
    : modulus(mod), divisor(d) {
  if (d == 0 || mod.n() % d != 0)
    throw ElementOutOfRangeError("congruence divisor must divide n");
}

bool is_prime(std::uint32_t v) {
  if (v < 2) return false;
  for (std::uint32_t d = 2; static_cast<std::uint64_t>(d) * d <= v; ++d)
    if (v % d == 0) return false;
  return true;
}

std::vector<PrimePower> factorize(std::uint32_t v) {
  std::vector<PrimePower> out;
  for (std::uint32_t d = 2; static_cast<std::uint64_t>(d) * d <= v; ++d) {
    if (v % d == 0) {
      std::uint32_t k = 0;
      while (v % d == 0) {
        v /= d;
        ++k;
      }
      out.push_back({d, k});
    }
  }
  if (v > 1) out.push_back({v, 1});
  return out;
}

std::vector<std::uint32_t> divisors(std::uint32_t n) {
  std::vector<std::uint32_t> out;
  for (std::uint32_t d = 1; static_cast<std::uint64_t>(d) * d <= n; ++d) {
    if (n % d == 0) {
      out.push_back(d);
      if (d != n / d) out.push_back(n / d);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::uint32_t> divisors(const Modulus& mod) {
  return divisors(mod.n());
}

CrtPair crt_pair(std::uint32_t m, std::uint32_t n) {
  if (m == 0 || n == 0) throw ElementOutOfRangeError("moduli must be >= 1");
  if (std::gcd(m, n) != 1) throw NotCoprimeError("moduli are not coprime");
  std::uint64_t mn = static_cast<std::uint64_t>(m) * n;
  CrtPair out;
  out.m = m;
  out.n = n;
  // mn <= 2^32 territory is more than enough here; scan is simplest and the
  // result is unique.
  for (std::uint64_t x = 0; x < mn; ++x) {
    if (x % m == 1 % m && x % n == 0) out.a = static_cast<std::uint32_t>(x);
    if (x % m == 0 && x % n == 1 % n) out.b = static_cast<std::uint32_t>(x);
  }
  return out;
}

std::uint32_t units_product(const Modulus& mod) {
  const auto& pp = mod.pp();
  std::uint64_t acc = 1;
  for (std::uint32_t c = 0; c < mod.n(); ++c) {
    if (c % pp.p != 0) acc = acc * c % mod.n();
  }
  return static_cast<std::uint32_t>(acc);
}

std::uint32_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint32_t n) {
  std::uint64_t acc = 1 % n;
  base %= n;
  while (exp > 0) {
    if (exp & 1) acc = acc * base % n;
    base = base * base % n;
    exp >>= 1;
  }
  return static_cast<std::uint32_t>(acc);
}

std::uint32_t inv_mod(std::uint32_t a, std::uint32_t n) {
  // extended Euclid
  std::int64_t r0 = n, r1 = a % n, s0 = 0, s1 = 1;
  while (r1 != 0) {
    std::int64_t q = r0 / r1;
    std::int64_t r2 = r0 - q * r1;
    std::int64_t s2 = s0 - q * s1;
    r0 = r1;
    r1 = r2;
    s0 = s1;
    s1 = s2;
  }
  if (r0 != 1) throw ElementOutOfRangeError("not a unit, cannot invert");
  std::int64_t s = s0 % n;
  if (s < 0) s += n;
  return static_cast<std::uint32_t>(s);
}

}  // namespace cloneforge
