#pragma once

// Exact cardinalities kept in factored form (product of prime powers), since
// clone parts and compatible-operation counts routinely exceed 64 bits.

#include <cstdint>
#include <string>
#include <vector>

namespace cloneforge {

class FactoredCount {
 public:
  FactoredCount() = default;  // = 1

  void mul_prime_power(std::uint32_t p, std::uint64_t e);
  void mul_small(std::uint32_t v);  // factorizes v

  bool fits_u64() const;
  std::uint64_t as_u64() const;  // requires fits_u64
  // Decimal when it fits in 64 bits, otherwise "p^e" (or "p^e*q^f") form.
  std::string str() const;

  friend bool operator==(const FactoredCount&, const FactoredCount&);

 private:
  // sorted by prime
  std::vector<std::pair<std::uint32_t, std::uint64_t>> factors_;
};

}  // namespace cloneforge
