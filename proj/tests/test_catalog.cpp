#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "cloneforge/catalog.hpp"
#include "oracle.hpp"

using namespace cloneforge;

TEST_CASE("reduced generators at p=2") {
  Modulus z4(4);
  auto e2 = build_reduced_generator(2, "E2");
  REQUIRE(e2.size() == 1);
  CHECK(evaluate(e2[0], std::vector<Elem>{1, 1}) == 2);
  CHECK(evaluate(e2[0], std::vector<Elem>{1, 3}) == 2);
  for (Elem y = 0; y < 4; ++y)
    CHECK(evaluate(e2[0], std::vector<Elem>{2, y}) == 0);

  auto f3 = build_reduced_generator(2, "F3");
  REQUIRE(f3.size() == 1);
  const OpTable& h = f3[0];
  CHECK(evaluate(h, std::vector<Elem>{2, 2}) == 2);
  for (Elem v = 0; v < 4; ++v) {
    CHECK(evaluate(h, std::vector<Elem>{0, v}) == 0);
    CHECK(evaluate(h, std::vector<Elem>{v, 0}) == 0);
    if (v % 2 == 1) {
      CHECK(evaluate(h, std::vector<Elem>{v, 2}) == 0);
      CHECK(evaluate(h, std::vector<Elem>{2, v}) == 0);
    }
  }

  auto n2 = build_reduced_generator(2, "N2");
  REQUIRE(n2.size() == 2);
  CHECK(n2[1] == OpTable(z4, 1, {0, 1, 0, 1}));

  CHECK(build_reduced_generator(2, "pol")[0] == ring_mul(z4));
  CHECK_THROWS_AS(build_reduced_generator(2, "Q7"), UnknownNameError);
  CHECK_THROWS_AS(build_reduced_generator(2, "E1"), UnknownNameError);
}

TEST_CASE("original generators at p=2") {
  auto xi2 = build_original_generator(2, "E2");
  REQUIRE(xi2.size() == 1);
  CHECK(evaluate(xi2[0], std::vector<Elem>{2, 2}) == 4);
  CHECK(evaluate(xi2[0], std::vector<Elem>{2, 6}) == 4);
  CHECK(evaluate(xi2[0], std::vector<Elem>{1, 2}) == 0);

  auto phi = build_original_generator(2, "F3");
  REQUIRE(phi.size() == 1);
  CHECK(evaluate(phi[0], std::vector<Elem>{4, 4}) == 4);
  CHECK(evaluate(phi[0], std::vector<Elem>{4, 2}) == 0);

  auto npair = build_original_generator(2, "N2");
  REQUIRE(npair.size() == 2);
  // pi(2) = 2 * 1^2 = 2, pi(4) = 2 * 2^2 = 8 = 0, pi(6) = 2 * 9 = 18 = 2
  CHECK(evaluate(npair[1], std::vector<Elem>{2}) == 2);
  CHECK(evaluate(npair[1], std::vector<Elem>{4}) == 0);
  CHECK(evaluate(npair[1], std::vector<Elem>{6}) == 2);
  CHECK(evaluate(npair[1], std::vector<Elem>{3}) == 0);
}

TEST_CASE("original tables are the star lifts of the reduced tables") {
  for (std::uint32_t p : {2u, 3u}) {
    ReductionContext ctx(p, 3);
    for (std::string name :
         {"E2", "E3", "E4", "N2", "N3", "F1", "F2", "F3", "pol", "comp"}) {
      CAPTURE(p);
      CAPTURE(name);
      auto reduced = build_reduced_generator(p, name);
      auto original = build_original_generator(p, name);
      REQUIRE(reduced.size() == original.size());
      for (std::size_t i = 0; i < reduced.size(); ++i) {
        CHECK(star_lift(ctx, reduced[i]) == original[i]);
        CHECK(is_compatible(original[i]));
        CHECK(is_compatible(reduced[i]));
      }
    }
  }
}

TEST_CASE("xi_2 is the restriction of multiplication, hence polynomial") {
  Modulus z8(8);
  auto xi2 = build_original_generator(2, "E2")[0];
  // xi_2 agrees with x*y on M^2 and vanishes elsewhere
  OpTable mul = ring_mul(z8);
  for_each_tuple(8, 2, [&](std::span<const Elem> x, std::size_t idx) {
    if (x[0] % 2 == 0 && x[1] % 2 == 0)
      CHECK(xi2[idx] == mul[idx]);
    else
      CHECK(xi2[idx] == 0);
  });
  CloneSpec pol8{z8, "pol", {ring_add(z8), ring_mul(z8)}, {}, true};
  CHECK(member(pol8, xi2));
}

TEST_CASE("catalog entry list and diagram covers") {
  auto entries = catalog_entries(2, 4);
  std::vector<std::string> names;
  for (const auto& e : entries) names.push_back(e.name);
  CHECK(names == std::vector<std::string>{"pol_grp", "E2", "E3", "E4", "N2",
                                          "N3", "N4", "F1", "F2", "F3", "pol",
                                          "comp", "O"});
  for (const auto& e : entries) {
    if (e.name == "N2") CHECK(e.covers == std::vector<std::string>{"E2"});
    if (e.name == "N3")
      CHECK(e.covers == std::vector<std::string>{"E3", "N2"});
    if (e.name == "F1") CHECK(e.covers == std::vector<std::string>{"N4"});
    if (e.name == "pol")
      CHECK(e.covers == std::vector<std::string>{"F1", "F2"});
    if (e.name == "comp")
      CHECK(e.covers == std::vector<std::string>{"pol", "F3"});
    if (e.name == "E4") CHECK(e.union_approx);
    if (e.name == "E3") CHECK_FALSE(e.union_approx);
  }
  CHECK_THROWS_AS(catalog_entries(2, 2), InfeasibleParametersError);
}

TEST_CASE("chain monotonicity by membership") {
  ClosureOptions opts;
  opts.threads = 2;
  for (std::uint32_t j = 2; j < 4; ++j) {
    auto lower_gen = build_reduced_generator(2, "E" + std::to_string(j))[0];
    auto bigger = reduced_spec(2, "E" + std::to_string(j + 1));
    CHECK(member(bigger, lower_gen, opts));
  }
}

TEST_CASE("reduced-side separations by completed closures") {
  ClosureOptions opts;
  opts.threads = 2;
  auto e2 = reduced_spec(2, "E2");
  auto pol = reduced_spec(2, "pol");
  OpTable sq(Modulus(4), 1, {0, 1, 0, 1});
  OpTable h = build_reduced_generator(2, "F3")[0];
  CHECK_FALSE(member(e2, sq, opts));                      // E2 != N2
  CHECK_FALSE(member(e2, ring_mul(Modulus(4)), opts));    // E2 != pol
  CHECK_FALSE(member(pol, h, opts));                      // pol != comp
  CHECK_FALSE(member(e2, build_reduced_generator(2, "E3")[0], opts));
}

TEST_CASE("lattice report at p=3 checks generators only") {
  LatticeOptions opts;
  LatticeReport rep = lattice_report(3, opts);
  CHECK_FALSE(rep.closures_run);
  CHECK(rep.generators_consistent);
  CHECK(rep.verdicts.empty());
}

TEST_CASE("lattice report at p=2 certifies the picture") {
  LatticeOptions opts;
  opts.closure.threads = 2;
  LatticeReport rep = lattice_report(2, opts);
  CHECK(rep.closures_run);
  CHECK(rep.generators_consistent);
  CHECK(rep.all_interval_edges_certified);
  CHECK(rep.findings.empty());
  for (const auto& ec : rep.edges) {
    CAPTURE(ec.lower);
    CAPTURE(ec.upper);
    CHECK(ec.inclusion_certified);
    CHECK(ec.strict_certified);
  }
  // every verdict resolves and matches the diagram reachability
  for (const auto& v : rep.verdicts) {
    CAPTURE(v.small);
    CAPTURE(v.big);
    CHECK(v.relation != "unknown");
    CHECK((v.relation == "included") == v.expected_included);
  }
  // spot values required of the catalog
  auto verdict = [&](const std::string& a, const std::string& b) {
    for (const auto& v : rep.verdicts)
      if (v.small == a && v.big == b) return v.relation;
    return std::string("missing");
  };
  CHECK(verdict("E2", "pol") == "included");
  CHECK(verdict("pol", "E2") == "not_included");
  CHECK(verdict("pol", "comp") == "included");
  CHECK(verdict("comp", "pol") == "not_included");
  CHECK(verdict("F1", "F2") == "not_included");
  CHECK(verdict("F2", "F1") == "not_included");
  CHECK(verdict("F3", "pol") == "not_included");
  CHECK(verdict("pol", "F3") == "not_included");
  // JSON and text renderings are produced
  CHECK(lattice_report_json(rep).find("verdicts") != std::string::npos);
  CHECK(lattice_report_text(rep).find("certified") != std::string::npos);
}
