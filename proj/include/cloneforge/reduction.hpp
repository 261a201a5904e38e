#pragma once

// The prime-power reduction machinery on Z_{p^k}: the indicator polynomial of
// M^n (M = multiples of p), the decomposition identity, restriction of
// M-preserving operations to the small ring Z_{p^(k-1)}, the star lift in the
// other direction, the shifted-restriction clone membership test, and the
// coprime product split/combine.

#include <utility>

#include "cloneforge/clone.hpp"
#include "cloneforge/op_table.hpp"
#include "cloneforge/zmod.hpp"

namespace cloneforge {

struct ReductionContext {
  ReductionContext(std::uint32_t p, std::uint32_t k);

  std::uint32_t p;
  std::uint32_t k;
  Modulus big;    // Z_{p^k}
  Modulus small;  // Z_{p^(k-1)}

  std::uint32_t m_size() const { return big.n() / p; }  // |M| = p^(k-1)
};

// The polynomial indicator of M^arity: value 1 on tuples of multiples of p,
// 0 elsewhere. Built from the closed-form product
//   alpha^(-arity) * prod_i prod_{c not in M} (x_i - c)
// with alpha = units_product, then checked entrywise against the indicator
// definition (a mismatch throws; it would mean the closed form is wrong).
OpTable m_indicator(const ReductionContext& ctx, std::uint32_t arity);

// f(x) == sum over shift tuples c in L^arity of f(x) * G(x - c), entrywise.
// Holds for every f; exercising it validates the indicator.
bool verify_decomposition(const ReductionContext& ctx, const OpTable& f);

// For f preserving M: the small-ring operation h with h(l...) = f(l*p...)/p.
OpTable restrict_to_small(const ReductionContext& ctx, const OpTable& f);

// Total extension of the star map: p*h(x/p) on M^arity, 0 elsewhere.
OpTable star_lift(const ReductionContext& ctx, const OpTable& h);

// (compatibility of h on the small ring,
//  compatibility of h's star image on M w.r.t. the congruences mod p^2..p^(k-1)).
// The two are provably equal; returning both lets the harness assert it.
std::pair<bool, bool> star_compatibility_check(const ReductionContext& ctx,
                                               const OpTable& h);

// Membership of f in C(K): f compatible and, for every shift vector a, the
// restriction of f(x+a) - f(a) to M lies in Clone(K) on the small ring.
bool in_ck(const ReductionContext& ctx, const OpTable& f, const CloneSpec& k_spec,
           const ClosureOptions& opts = {});

// Compatible f on Z_{mn} (gcd(m,n)=1) acts componentwise under CRT; returns
// the component operations on Z_m and Z_n.
std::pair<OpTable, OpTable> split_coprime(const OpTable& f, std::uint32_t m,
                                          std::uint32_t n);

// Inverse direction: the unique operation on Z_{mn} with the given
// components, realized as a*g(x mod m) + b*h(x mod n).
OpTable combine_crt(const OpTable& g, const OpTable& h);

}  // namespace cloneforge
