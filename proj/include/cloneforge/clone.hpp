#pragma once

// Exact m-ary parts of generated clones by fixed-point closure, membership
// and inclusion certification, and direct enumeration of the compatible part.
//
// Two engine modes share one contract (the exact m-ary part):
//
//  * explicit mode (generator set without the ring addition): semi-naive
//    worklist over a hash set of packed tables, applying every generator to
//    tuples with at least one frontier element until nothing new appears.
//
//  * span mode (ring addition among the generators): the m-ary part is then
//    closed under pointwise addition, hence an additive subgroup of
//    (Z_n)^(n^m), kept as a canonical Howell basis. Growth applies
//    generators to basis tuples and to deterministic span samples; the
//    fixed point is certified exactly by one of two certificates:
//      - finite-difference obligations: for each generator g, every iterated
//        difference form of g over basis-row directions (per-argument order
//        below g's detected difference-nilpotency order) lies in the span.
//        By the Newton/Mahler expansion over the basis coefficients, this is
//        equivalent to g mapping span tuples into the span.
//      - compatible ceiling: when every generator and every basis row is
//        congruence-compatible and the span size equals the exact count of
//        compatible m-ary operations, the span *is* the full compatible
//        part, which is closed under every compatible operation; together
//        with soundness of all inserted elements this pins the closure.
//    Both certificates are exact; no probabilistic completion is claimed.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cloneforge/counts.hpp"
#include "cloneforge/howell.hpp"
#include "cloneforge/op_table.hpp"

namespace cloneforge {

struct CloneSpec {
  Modulus modulus;
  std::string name;
  std::vector<OpTable> generators;       // projections always implicit
  std::vector<std::string> gen_names;    // parallel to generators (may be empty)
  bool include_all_constants = false;

  void validate() const;
};

struct ClosureOptions {
  // Cap on explicitly materialized members (explicit mode, enumeration,
  // export). Span mode represents larger parts implicitly and stays exact.
  std::uint64_t member_budget = 4'000'000;
  // Cap on table-evaluation work units across the run.
  std::uint64_t work_budget = 64'000'000'000;
  int threads = 1;
};

class ClosurePart {
 public:
  std::uint32_t arity() const { return arity_; }
  const Modulus& modulus() const { return mod_; }
  bool complete() const { return complete_; }
  const std::string& certificate() const { return certificate_; }
  std::uint64_t rounds() const { return rounds_; }
  const FactoredCount& size() const { return size_; }
  bool spanned() const { return basis_.has_value(); }
  const HowellBasis& basis() const { return *basis_; }
  const std::vector<std::string>& generator_names() const { return gen_names_; }

  bool contains(const OpTable& f) const;

  // Sorted canonical member keys; throws BudgetExceededError when the part
  // is larger than the budget allows to materialize.
  std::vector<PackedKey> sorted_keys(std::uint64_t budget) const;

  // FNV-1a over the sorted key bytes; canonical fingerprint of the part.
  std::uint64_t members_hash(std::uint64_t budget) const;

 private:
  friend ClosurePart closure_part(const CloneSpec&, std::uint32_t,
                                  const ClosureOptions&);
  friend class ClosureDriver;

  Modulus mod_{2};
  std::uint32_t arity_ = 1;
  bool complete_ = false;
  std::string certificate_ = "none";
  std::uint64_t rounds_ = 0;
  FactoredCount size_;
  std::vector<std::string> gen_names_;
  std::optional<HowellBasis> basis_;       // span mode
  std::vector<PackedKey> explicit_keys_;   // explicit mode, sorted
};

ClosurePart closure_part(const CloneSpec& spec, std::uint32_t m,
                         const ClosureOptions& opts = {});

// True iff f lies in the arity(f)-part of the generated clone. Exits early
// on discovery; throws IncompleteError when budgets ran out undecided.
bool member(const CloneSpec& spec, const OpTable& f,
            const ClosureOptions& opts = {});

// Clone(small) included in Clone(big): every generator (and constants when
// flagged) of small is a member of big's clone.
bool includes(const CloneSpec& big, const CloneSpec& small,
              const ClosureOptions& opts = {});

// Exact count of compatible m-ary operations on Z_n:
// multiplicative over prime powers, p^(sum_{j=1..k} p^(j*m)) for n = p^k.
FactoredCount compatible_count(std::uint32_t n, std::uint32_t m);

// The exact set of compatible m-ary operations, materialized. Guarded by the
// count (throws BudgetExceededError with the count in the message).
struct CompPart {
  Modulus modulus{2};
  std::uint32_t arity = 1;
  std::vector<PackedKey> keys;  // sorted canonical
  bool contains(const OpTable& f) const;
  std::uint64_t members_hash() const;
};

CompPart comp_part(const Modulus& mod, std::uint32_t m,
                   std::uint64_t budget = 4'000'000);

// Uniform sample from the compatible m-ary operations (digit construction
// per prime power, CRT-combined).
OpTable sample_compatible(const Modulus& mod, std::uint32_t m,
                          std::uint64_t& rng_state);

// xorshift-style deterministic generator used for all seeded sampling.
std::uint64_t rng_next(std::uint64_t& state);
std::uint32_t rng_below(std::uint64_t& state, std::uint32_t bound);

std::uint64_t fnv1a(std::uint64_t h, const std::uint8_t* data,
                    std::size_t len);
inline constexpr std::uint64_t kFnvOffset = 1469598103934665603ull;

}  // namespace cloneforge
