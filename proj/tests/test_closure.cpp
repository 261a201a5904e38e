#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <set>

#include "cloneforge/catalog.hpp"
#include "cloneforge/clone.hpp"
#include "oracle.hpp"

using namespace cloneforge;

namespace {

CloneSpec spec_of(Modulus mod, std::vector<OpTable> gens, bool constants,
                  std::string name = "test") {
  CloneSpec s{mod, std::move(name), std::move(gens), {}, constants};
  return s;
}

std::set<std::vector<Elem>> engine_members(const ClosurePart& part,
                                           std::uint64_t budget = 1u << 22) {
  std::set<std::vector<Elem>> out;
  for (const PackedKey& k : part.sorted_keys(budget))
    out.insert(unpack_table(k, part.modulus(), part.arity()).values());
  return out;
}

OpTable table_2xy(std::uint32_t n) {
  Modulus mod(n);
  std::vector<Elem> vals(static_cast<std::size_t>(n) * n);
  for (std::uint32_t x = 0; x < n; ++x)
    for (std::uint32_t y = 0; y < n; ++y)
      vals[static_cast<std::size_t>(x) * n + y] =
          static_cast<Elem>(2 * x * y % n);
  return OpTable(mod, 2, std::move(vals));
}

}  // namespace

TEST_CASE("unary part of the Z_2 additive clone with constants") {
  Modulus z2(2);
  auto spec = spec_of(z2, {ring_add(z2)}, true);
  ClosurePart part = closure_part(spec, 1);
  CHECK(part.complete());
  REQUIRE(part.size().fits_u64());
  CHECK(part.size().as_u64() == 4);
  CHECK(engine_members(part) == oracle::naive_closure(spec, 1));
}

TEST_CASE("no generators: projections only; with constants: plus constants") {
  Modulus z4(4);
  auto bare = spec_of(z4, {}, false);
  ClosurePart p1 = closure_part(bare, 2);
  CHECK(p1.complete());
  CHECK(p1.size().as_u64() == 2);
  auto with_consts = spec_of(z4, {}, true);
  ClosurePart p2 = closure_part(with_consts, 2);
  CHECK(p2.complete());
  CHECK(p2.size().as_u64() == 6);
}

TEST_CASE("group-mode closures agree with the naive oracle") {
  Modulus z4(4);
  OpTable add = ring_add(z4), mul = ring_mul(z4);
  OpTable sq(z4, 1, {0, 1, 0, 1});
  std::vector<std::pair<std::string, CloneSpec>> cases;
  cases.push_back({"pol_grp@2", spec_of(z4, {add}, true)});
  cases.push_back({"E2@1", spec_of(z4, {add, table_2xy(4)}, true)});
  cases.push_back({"E2@2", spec_of(z4, {add, table_2xy(4)}, true)});
  cases.push_back({"N2@2", spec_of(z4, {add, table_2xy(4), sq}, true)});
  cases.push_back({"pol@1", spec_of(z4, {add, mul}, true)});
  cases.push_back({"F3@1", reduced_spec(2, "F3")});
  cases.push_back({"F1@1", reduced_spec(2, "F1")});
  cases.push_back({"F2@1", reduced_spec(2, "F2")});
  cases.push_back({"F1@2", reduced_spec(2, "F1")});
  cases.push_back({"E3@2", reduced_spec(2, "E3")});
  for (auto& [label, spec] : cases) {
    std::uint32_t m = label.back() == '1' ? 1 : 2;
    CAPTURE(label);
    ClosurePart part = closure_part(spec, m);
    CHECK(part.complete());
    auto expect = oracle::naive_closure(spec, m, 1u << 21);
    REQUIRE(part.size().fits_u64());
    CHECK(part.size().as_u64() == expect.size());
    CHECK(engine_members(part, 1u << 21) == expect);
  }
}

TEST_CASE("explicit-mode closures agree with the naive oracle") {
  // generator sets without addition drive the hash-set engine
  Modulus z4(4);
  OpTable mul = ring_mul(z4);
  OpTable sq(z4, 1, {0, 1, 0, 1});
  for (std::uint32_t m : {1u, 2u}) {
    auto spec = spec_of(z4, {mul, sq}, true);
    ClosurePart part = closure_part(spec, m);
    CHECK(part.complete());
    CHECK(part.certificate() == "fixed_point");
    CHECK(engine_members(part) == oracle::naive_closure(spec, m));
  }
  Modulus z3(3);
  auto spec3 = spec_of(z3, {ring_mul(z3)}, false);
  ClosurePart p3 = closure_part(spec3, 2);
  CHECK(p3.complete());
  CHECK(engine_members(p3) == oracle::naive_closure(spec3, 2));
}

TEST_CASE("random generator sets: engine equals oracle") {
  std::uint64_t st = 20260810;
  for (std::uint32_t n : {2u, 3u, 4u, 6u}) {
    Modulus mod(n);
    for (int rep = 0; rep < 12; ++rep) {
      std::vector<OpTable> gens;
      if (rep % 2) gens.push_back(ring_add(mod));
      std::uint32_t extra = 1 + rep % 2;
      for (std::uint32_t e = 0; e < extra; ++e) {
        // compatible tables keep the oracle sets small enough to finish
        std::uint32_t arity = 1 + rng_below(st, 2);
        gens.push_back(sample_compatible(mod, arity, st));
      }
      auto spec = spec_of(mod, gens, rng_below(st, 2) == 0);
      std::uint32_t m = 1 + rng_below(st, 2);
      if (n >= 4) m = 1;  // keep the oracle quadratic work affordable
      CAPTURE(n);
      CAPTURE(m);
      CAPTURE(rep);
      std::set<std::vector<Elem>> expect;
      try {
        expect = oracle::naive_closure(spec, m, 4096);
      } catch (const BudgetExceededError&) {
        continue;  // oracle can't afford this instance
      }
      ClosurePart part = closure_part(spec, m);
      REQUIRE(part.complete());
      REQUIRE(part.size().fits_u64());
      CHECK(part.size().as_u64() == expect.size());
      CHECK(engine_members(part, 1u << 21) == expect);
    }
  }
}

TEST_CASE("group mode with arbitrary (incompatible) generators") {
  // nothing in the span engine assumes compatibility; cross-check against
  // the oracle with unconstrained random generators
  std::uint64_t st = 555;
  Modulus z4(4);
  for (int rep = 0; rep < 20; ++rep) {
    std::vector<OpTable> gens{ring_add(z4)};
    for (int e = 0; e < 1 + rep % 2; ++e) {
      std::uint32_t arity = 1 + rng_below(st, 2);
      std::vector<Elem> vals(table_size(4, arity));
      for (Elem& v : vals) v = static_cast<Elem>(rng_below(st, 4));
      gens.push_back(OpTable(z4, arity, std::move(vals)));
    }
    auto spec = spec_of(z4, gens, rep % 3 != 0);
    ClosurePart part = closure_part(spec, 1);
    REQUIRE(part.complete());
    auto expect = oracle::naive_closure(spec, 1, 4096);
    CHECK(part.size().as_u64() == expect.size());
    CHECK(engine_members(part) == expect);
  }
}

TEST_CASE("group mode on the larger prime-power carriers") {
  std::uint64_t st = 808;
  SUBCASE("Z_8 affine and quadratic unary parts") {
    Modulus z8(8);
    auto affine = spec_of(z8, {ring_add(z8)}, true);
    ClosurePart part = closure_part(affine, 1);
    REQUIRE(part.complete());
    CHECK(engine_members(part) == oracle::naive_closure(affine, 1));
    std::vector<Elem> sq(8);
    for (std::uint32_t x = 0; x < 8; ++x) sq[x] = static_cast<Elem>(x * x % 8);
    auto quad = spec_of(z8, {ring_add(z8), OpTable(z8, 1, sq)}, true);
    ClosurePart qpart = closure_part(quad, 1);
    REQUIRE(qpart.complete());
    CHECK(engine_members(qpart) == oracle::naive_closure(quad, 1, 1u << 14));
  }
  SUBCASE("Z_9 catalog-style generators") {
    Modulus z9(9);
    std::vector<Elem> pxy(81);
    for (std::uint32_t x = 0; x < 9; ++x)
      for (std::uint32_t y = 0; y < 9; ++y)
        pxy[x * 9 + y] = static_cast<Elem>(3 * x * y % 9);
    auto e2 = spec_of(z9, {ring_add(z9), OpTable(z9, 2, pxy)}, true);
    ClosurePart part = closure_part(e2, 1);
    REQUIRE(part.complete());
    CHECK(engine_members(part) == oracle::naive_closure(e2, 1, 1u << 14));
    std::vector<Elem> cube(9);
    for (std::uint32_t x = 0; x < 9; ++x)
      cube[x] = static_cast<Elem>(x * x * x % 9);
    auto n2 = spec_of(z9, {ring_add(z9), OpTable(z9, 2, pxy),
                           OpTable(z9, 1, cube)}, true);
    ClosurePart npart = closure_part(n2, 1);
    REQUIRE(npart.complete());
    CHECK(engine_members(npart) == oracle::naive_closure(n2, 1, 1u << 14));
    CHECK(npart.size().as_u64() > part.size().as_u64());
  }
  SUBCASE("random compatible generators on Z_8 and Z_9 at arity 1") {
    for (std::uint32_t n : {8u, 9u}) {
      Modulus mod(n);
      for (int rep = 0; rep < 6; ++rep) {
        std::vector<OpTable> gens{ring_add(mod),
                                  sample_compatible(mod, 1 + rep % 2, st)};
        auto spec = spec_of(mod, gens, true);
        std::set<std::vector<Elem>> expect;
        try {
          expect = oracle::naive_closure(spec, 1, 8192);
        } catch (const BudgetExceededError&) {
          continue;
        }
        ClosurePart part = closure_part(spec, 1);
        REQUIRE(part.complete());
        CHECK(part.size().as_u64() == expect.size());
        CHECK(engine_members(part) == expect);
      }
    }
  }
}

TEST_CASE("random polynomial tables always land in the polynomial part") {
  Modulus z4(4);
  auto pol = spec_of(z4, {ring_add(z4), ring_mul(z4)}, true);
  ClosurePart part = closure_part(pol, 2);
  REQUIRE(part.complete());
  std::uint64_t st = 31337;
  for (int rep = 0; rep < 2000; ++rep) {
    // random coefficients on the sixteen monomials x^a y^b, a,b <= 3
    std::vector<Elem> vals(16);
    std::uint32_t coeff[4][4];
    for (auto& row : coeff)
      for (auto& c : row) c = rng_below(st, 4);
    for (std::uint32_t x = 0; x < 4; ++x)
      for (std::uint32_t y = 0; y < 4; ++y) {
        std::uint32_t acc = 0;
        std::uint32_t xa = 1;
        for (std::uint32_t a = 0; a < 4; ++a) {
          std::uint32_t yb = 1;
          for (std::uint32_t b = 0; b < 4; ++b) {
            acc = (acc + coeff[a][b] * xa % 4 * yb) % 4;
            yb = yb * y % 4;
          }
          xa = xa * x % 4;
        }
        vals[x * 4 + y] = static_cast<Elem>(acc);
      }
    CHECK(part.contains(OpTable(z4, 2, vals)));
  }
  // and the part stays inside the compatible part: rows suffice since the
  // compatible tables form a subgroup
  for (const auto& row : part.basis().rows())
    CHECK(is_compatible(OpTable(z4, 2, row.v)));
}

TEST_CASE("degenerate constant generator is tolerated") {
  // on Z_2 the catalog's 2xy generator collapses to the zero constant
  Modulus z2(2);
  auto spec = spec_of(z2, {ring_add(z2), table_2xy(2)}, true);
  ClosurePart part = closure_part(spec, 2);
  CHECK(part.complete());
  CHECK(engine_members(part) == oracle::naive_closure(spec, 2));
}

TEST_CASE("unary polynomial part matches direct polynomial enumeration") {
  Modulus z4(4);
  auto pol = spec_of(z4, {ring_add(z4), ring_mul(z4)}, true);
  ClosurePart part = closure_part(pol, 1);
  REQUIRE(part.complete());
  auto kempner = oracle::unary_polynomials(z4);
  CHECK(part.size().as_u64() == kempner.size());
  CHECK(engine_members(part) == kempner);
  // 256 coefficient vectors collapse to 64 distinct tables; on Z_4 every
  // compatible unary operation is already polynomial
  CHECK(part.size().as_u64() == 64);
  CHECK(part.size().as_u64() == compatible_count(4, 1).as_u64());
}

TEST_CASE("member examples") {
  Modulus z4(4);
  auto pol = spec_of(z4, {ring_add(z4), ring_mul(z4)}, true);
  CHECK(member(pol, ring_mul(z4)));
  CHECK(member(pol, table_2xy(4)));
  auto affine = spec_of(z4, {ring_add(z4)}, true);
  CHECK_FALSE(member(affine, table_2xy(4)));
  auto e2 = spec_of(z4, {ring_add(z4), table_2xy(4)}, true);
  CHECK_FALSE(member(e2, ring_mul(z4)));
  CHECK_THROWS_AS(member(e2, ring_mul(Modulus(8))), ModulusMismatchError);
}

TEST_CASE("member agrees with closure membership on random queries") {
  Modulus z4(4);
  auto e2 = spec_of(z4, {ring_add(z4), table_2xy(4)}, true);
  ClosurePart part = closure_part(e2, 1);
  REQUIRE(part.complete());
  std::uint64_t st = 4242;
  for (int rep = 0; rep < 100; ++rep) {
    std::vector<Elem> vals(4);
    for (Elem& v : vals) v = static_cast<Elem>(rng_below(st, 4));
    OpTable f(z4, 1, vals);
    CHECK(member(e2, f) == part.contains(f));
  }
}

TEST_CASE("includes examples") {
  Modulus z4(4);
  auto pol = spec_of(z4, {ring_add(z4), ring_mul(z4)}, true, "pol");
  auto e2 = spec_of(z4, {ring_add(z4), table_2xy(4)}, true, "E2");
  CHECK(includes(pol, e2));
  CHECK_FALSE(includes(e2, pol));
  CHECK(includes(pol, pol));
  CHECK(includes(e2, e2));
}

TEST_CASE("closure is monotone in generators") {
  Modulus z4(4);
  std::uint64_t st = 7;
  for (int rep = 0; rep < 6; ++rep) {
    OpTable extra = sample_compatible(z4, 2, st);
    auto base = spec_of(z4, {ring_add(z4)}, true);
    auto bigger = spec_of(z4, {ring_add(z4), extra}, true);
    ClosurePart small = closure_part(base, 1);
    ClosurePart big = closure_part(bigger, 1);
    REQUIRE(small.complete());
    REQUIRE(big.complete());
    for (const auto& v : engine_members(small))
      CHECK(big.contains(OpTable(z4, 1, v)));
  }
}

TEST_CASE("closure deterministic across generator order and threads") {
  Modulus z4(4);
  OpTable sq(z4, 1, {0, 1, 0, 1});
  std::vector<OpTable> gens{ring_add(z4), table_2xy(4), sq};
  auto a = spec_of(z4, gens, true);
  std::reverse(gens.begin(), gens.end());
  auto b = spec_of(z4, gens, true);
  ClosureOptions opt1;
  opt1.threads = 1;
  ClosureOptions opt2;
  opt2.threads = 2;
  ClosurePart pa = closure_part(a, 2, opt1);
  ClosurePart pb = closure_part(b, 2, opt2);
  REQUIRE(pa.complete());
  REQUIRE(pb.complete());
  CHECK(pa.basis() == pb.basis());
  CHECK(pa.sorted_keys(1u << 20) == pb.sorted_keys(1u << 20));
  CHECK(pa.rounds() == pb.rounds());
}

TEST_CASE("compatible_count formula") {
  CHECK(compatible_count(2, 1).as_u64() == 4);
  CHECK(compatible_count(4, 1).as_u64() == 64);
  CHECK(compatible_count(4, 2).as_u64() == 1048576);
  CHECK(compatible_count(9, 1).as_u64() == 531441);
  CHECK(compatible_count(12, 1).as_u64() == 64 * 27);
  CHECK_FALSE(compatible_count(8, 2).fits_u64());
  CHECK(compatible_count(8, 2).str() == "2^84");
}

TEST_CASE("comp_part enumeration: counts, membership, closure under ops") {
  SUBCASE("Z_2 unary: every operation") {
    CompPart part = comp_part(Modulus(2), 1);
    CHECK(part.keys.size() == 4);
  }
  SUBCASE("Z_4 unary") {
    CompPart part = comp_part(Modulus(4), 1);
    CHECK(part.keys.size() == 64);
    // cross-check against the definition
    std::size_t direct = 0;
    for (std::uint32_t bits = 0; bits < 256; ++bits) {
      std::vector<Elem> vals{static_cast<Elem>(bits & 3),
                             static_cast<Elem>(bits >> 2 & 3),
                             static_cast<Elem>(bits >> 4 & 3),
                             static_cast<Elem>(bits >> 6 & 3)};
      OpTable f(Modulus(4), 1, vals);
      bool compat = oracle::compatible_by_definition(f);
      direct += compat;
      CHECK(part.contains(f) == compat);
    }
    CHECK(direct == 64);
  }
  SUBCASE("Z_9 unary count matches the formula") {
    CompPart part = comp_part(Modulus(9), 1);
    CHECK(part.keys.size() == 531441);
  }
  SUBCASE("Z_12 unary via CRT") {
    CompPart part = comp_part(Modulus(12), 1);
    CHECK(part.keys.size() == 1728);
    for (const PackedKey& k : part.keys) {
      OpTable f = unpack_table(k, Modulus(12), 1);
      CHECK(is_compatible(f));
    }
  }
  SUBCASE("rejection over budget") {
    CHECK_THROWS_AS(comp_part(Modulus(8), 2), BudgetExceededError);
    CHECK_THROWS_WITH_AS(comp_part(Modulus(8), 2),
                         doctest::Contains("2^84"), BudgetExceededError);
  }
}

TEST_CASE("comp part closed under sampled compositions") {
  CompPart part = comp_part(Modulus(4), 1);
  std::uint64_t st = 99;
  for (int rep = 0; rep < 1000; ++rep) {
    OpTable f = unpack_table(
        part.keys[rng_below(st, static_cast<std::uint32_t>(part.keys.size()))],
        Modulus(4), 1);
    OpTable g = unpack_table(
        part.keys[rng_below(st, static_cast<std::uint32_t>(part.keys.size()))],
        Modulus(4), 1);
    CHECK(part.contains(compose(f, {g})));
  }
  CompPart part2 = comp_part(Modulus(4), 2, 2'000'000);
  auto pick2 = [&] {
    return unpack_table(
        part2.keys[rng_below(st, static_cast<std::uint32_t>(part2.keys.size()))],
        Modulus(4), 2);
  };
  for (int rep = 0; rep < 1000; ++rep) {
    OpTable f = pick2(), g = pick2(), h = pick2();
    CHECK(part2.contains(compose(f, {g, h})));
  }
}

TEST_CASE("sample_compatible produces compatible tables") {
  std::uint64_t st = 11;
  for (std::uint32_t n : {4u, 8u, 9u, 12u}) {
    Modulus mod(n);
    for (int rep = 0; rep < 25; ++rep) {
      OpTable f = sample_compatible(mod, 1 + rep % 2, st);
      CHECK(is_compatible(f));
    }
  }
}

TEST_CASE("every member of a compatible-generated closure is compatible") {
  Modulus z4(4);
  auto spec = reduced_spec(2, "N2");
  ClosurePart part = closure_part(spec, 2);
  REQUIRE(part.complete());
  for (const auto& v : engine_members(part))
    CHECK(is_compatible(OpTable(z4, 2, v)));
}

TEST_CASE("budget exhaustion is reported, not silently wrong") {
  Modulus z4(4);
  auto pol = spec_of(z4, {ring_add(z4), ring_mul(z4)}, true);
  ClosureOptions tiny;
  tiny.work_budget = 10;
  ClosurePart part = closure_part(pol, 2, tiny);
  CHECK_FALSE(part.complete());
  CHECK(part.certificate() == "budget_exhausted");
  CHECK_THROWS_AS(member(pol, table_2xy(4), tiny), IncompleteError);
}

TEST_CASE("span-mode membership of the big polynomial part on Z_8") {
  // |pol(Z_8)@2| = 2^32: far over any explicit budget, exact via the span
  Modulus z8(8);
  auto pol8 = spec_of(z8, {ring_add(z8), ring_mul(z8)}, true);
  ClosurePart part = closure_part(pol8, 2);
  REQUIRE(part.complete());
  CHECK(part.size().as_u64() == 4294967296ull);
  CHECK_THROWS_AS(part.sorted_keys(1u << 20), BudgetExceededError);
}
