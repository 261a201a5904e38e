#pragma once

// Arithmetic over Z_n: moduli with optional prime-power decomposition,
// divisor/congruence bookkeeping and CRT coefficients.

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "cloneforge/errors.hpp"

namespace cloneforge {

struct PrimePower {
  std::uint32_t p = 0;
  std::uint32_t k = 0;
  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

// A ring modulus n >= 2. The prime-power decomposition is attached when n is
// one; several operations (units_product, M-restriction) require it.
class Modulus {
 public:
  explicit Modulus(std::uint32_t n);
  static Modulus prime_power(std::uint32_t p, std::uint32_t k);

  std::uint32_t n() const { return n_; }
  bool is_prime_power() const { return pp_.has_value(); }
  const PrimePower& pp() const;

  friend bool operator==(const Modulus& a, const Modulus& b) {
    return a.n_ == b.n_;
  }

 private:
  std::uint32_t n_;
  std::optional<PrimePower> pp_;
};

// A congruence of Z_n, identified with a divisor d of n (d blocks of size n/d).
struct Congruence {
  Congruence(Modulus mod, std::uint32_t d);
  Modulus modulus;
  std::uint32_t divisor;
};

// CRT idempotent pair for coprime (m, n): a = 1 mod m, 0 mod n and
// b = 0 mod m, 1 mod n, both canonical in Z_{mn}.
struct CrtPair {
  std::uint32_t m = 0;
  std::uint32_t n = 0;
  std::uint32_t a = 0;
  std::uint32_t b = 0;
};

bool is_prime(std::uint32_t v);

// Prime factorization by trial division, (p, exponent) pairs in increasing p.
std::vector<PrimePower> factorize(std::uint32_t v);

// All divisors of n in increasing order, including 1 and n.
std::vector<std::uint32_t> divisors(const Modulus& mod);
std::vector<std::uint32_t> divisors(std::uint32_t n);

CrtPair crt_pair(std::uint32_t m, std::uint32_t n);

// Product of all units of Z_{p^k} (all c with p not dividing c), reduced
// mod p^k. Requires a declared prime power. The result is itself a unit.
std::uint32_t units_product(const Modulus& mod);

std::uint32_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint32_t n);

// Inverse of a unit mod n.
std::uint32_t inv_mod(std::uint32_t a, std::uint32_t n);

}  // namespace cloneforge
