#pragma once

// The named clones between pol_grp(Z_{p^2}, +) and O(Z_{p^2}) as executable
// data: reduced-side generators on Z_{p^2}, their lifted counterparts on
// Z_{p^3}, its Hasse diagram as cover data, and closure-based certification of the
// diagram at p = 2.
//
// Entry names: pol_grp, E<j>, N<j> (j >= 2), F1, F2, F3, pol, comp, O.
// The unions E and N are approximated by the configurable cap max_j and
// reported as such. For p = 2 the labels E_p/E_2 and N_p/N_2 coincide;
// everything is keyed by j-value. O is a generator-free reference endpoint
// (the full clone); inclusions into it hold by definition and only the
// separation against comp is certified computationally.

#include <optional>
#include <string>
#include <vector>

#include "cloneforge/clone.hpp"
#include "cloneforge/op_table.hpp"
#include "cloneforge/reduction.hpp"

namespace cloneforge {

struct CatalogEntry {
  std::string name;
  std::uint32_t j = 0;       // for E<j>/N<j>
  bool in_interval = false;  // inside [E2, comp]
  bool union_approx = false; // stands in for the union E or N at the cap
  std::vector<std::string> covers;  // names this clone covers in the diagram
};

// Additional generators beyond addition and constants (reduced side) or
// beyond addition, multiplication and constants (original side). O has none.
std::vector<OpTable> build_reduced_generator(std::uint32_t p,
                                             const std::string& name);
std::vector<OpTable> build_original_generator(std::uint32_t p,
                                              const std::string& name);
std::vector<std::string> generator_labels(const std::string& name,
                                          bool original);

CloneSpec reduced_spec(std::uint32_t p, const std::string& name);
CloneSpec original_spec(std::uint32_t p, const std::string& name);

std::vector<CatalogEntry> catalog_entries(std::uint32_t p, std::uint32_t max_j);

struct LatticeOptions {
  std::uint32_t max_j = 4;
  std::uint32_t arity_cap = 4;  // membership checks above this arity -> unknown
  // nonzero: permute generator lists before closure runs; the report must
  // come out byte-identical either way
  std::uint32_t shuffle_salt = 0;
  ClosureOptions closure;
};

struct PairVerdict {
  std::string small, big;   // tested inclusion: Clone(small) subset of Clone(big)
  std::string relation;     // included | not_included | unknown
  std::string method;       // generator_subset | generator_membership |
                            // transitivity | full_clone_top | arity_cap |
                            // budget
  std::string witness;      // generator label certifying non-inclusion
  bool expected_included = false;  // reachability in the cover diagram
};

struct EdgeCertification {
  std::string lower, upper;
  bool in_interval = false;
  bool inclusion_certified = false;
  bool strict_certified = false;
  std::string strictness_witness;
  std::string note;
};

struct LatticeReport {
  std::uint32_t p = 2;
  std::uint32_t max_j = 4;
  std::uint32_t arity_cap = 4;
  bool closures_run = false;  // full certification only at p = 2
  std::vector<CatalogEntry> entries;
  // generator consistency: original-side table equals the star lift of the
  // reduced table, and original generators are compatible
  std::vector<std::string> generator_checks;  // "name: ok" / failure text
  bool generators_consistent = true;
  std::vector<EdgeCertification> edges;
  std::vector<PairVerdict> verdicts;  // all ordered pairs, sorted
  std::vector<std::string> findings;  // verdicts contradicting the picture
  bool all_interval_edges_certified = false;
};

LatticeReport lattice_report(std::uint32_t p, const LatticeOptions& opts = {});

std::string lattice_report_json(const LatticeReport& r);
std::string lattice_report_text(const LatticeReport& r);

}  // namespace cloneforge
