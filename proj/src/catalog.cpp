#include "cloneforge/catalog.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "json.hpp"

namespace cloneforge {

namespace {

bool parse_indexed(const std::string& name, char prefix, std::uint32_t& j) {
  if (name.size() < 2 || name[0] != prefix) return false;
  for (std::size_t i = 1; i < name.size(); ++i)
    if (!isdigit(static_cast<unsigned char>(name[i]))) return false;
  j = static_cast<std::uint32_t>(std::stoul(name.substr(1)));
  return j >= 2;
}

// p * x_1 * ... * x_j mod p^2
OpTable e_generator(std::uint32_t p, std::uint32_t j) {
  Modulus mod = Modulus::prime_power(p, 2);
  std::vector<Elem> vals(table_size(mod.n(), j));
  for_each_tuple(mod.n(), j, [&](std::span<const Elem> x, std::size_t idx) {
    std::uint64_t acc = p;
    for (Elem xi : x) acc = acc * xi % mod.n();
    vals[idx] = static_cast<Elem>(acc);
  });
  return OpTable(mod, j, std::move(vals));
}

// x^p mod p^2
OpTable p_power(std::uint32_t p) {
  Modulus mod = Modulus::prime_power(p, 2);
  std::vector<Elem> vals(mod.n());
  for (std::uint32_t x = 0; x < mod.n(); ++x)
    vals[x] = static_cast<Elem>(pow_mod(x, p, mod.n()));
  return OpTable(mod, 1, std::move(vals));
}

OpTable h_operation(std::uint32_t p) {
  Modulus mod = Modulus::prime_power(p, 2);
  std::uint32_t n = mod.n();
  std::vector<Elem> vals(static_cast<std::size_t>(n) * n, 0);
  for (std::uint32_t k = 0; k < p; ++k)
    for (std::uint32_t l = 0; l < p; ++l)
      vals[static_cast<std::size_t>(k * p) * n + l * p] =
          static_cast<Elem>(k * l % p * p);
  return OpTable(mod, 2, std::move(vals));
}

}  // namespace

std::vector<OpTable> build_reduced_generator(std::uint32_t p,
                                             const std::string& name) {
  Modulus mod = Modulus::prime_power(p, 2);
  std::uint32_t n = mod.n();
  std::uint32_t j = 0;
  if (name == "pol_grp") return {};
  if (name == "O") return {};
  if (parse_indexed(name, 'E', j)) return {e_generator(p, j)};
  if (parse_indexed(name, 'N', j)) return {e_generator(p, j), p_power(p)};
  if (name == "F1") {
    OpTable q = p_power(p);
    std::vector<Elem> vals(static_cast<std::size_t>(n) * n);
    for (std::uint32_t x = 0; x < n; ++x)
      for (std::uint32_t y = 0; y < n; ++y)
        vals[static_cast<std::size_t>(x) * n + y] =
            static_cast<Elem>(q[x] * q[y] % n);
    return {OpTable(mod, 2, std::move(vals))};
  }
  if (name == "F2") {
    OpTable q = p_power(p);
    std::vector<Elem> vals(static_cast<std::size_t>(n) * n);
    for (std::uint32_t x = 0; x < n; ++x)
      for (std::uint32_t y = 0; y < n; ++y)
        vals[static_cast<std::size_t>(x) * n + y] =
            static_cast<Elem>(q[x] * ((q[y] + n - y) % n) % n);
    return {OpTable(mod, 2, std::move(vals))};
  }
  if (name == "F3") return {h_operation(p)};
  if (name == "pol") return {ring_mul(mod)};
  if (name == "comp") return {ring_mul(mod), h_operation(p)};
  throw UnknownNameError("unknown catalog entry: " + name);
}

std::vector<OpTable> build_original_generator(std::uint32_t p,
                                              const std::string& name) {
  Modulus mod = Modulus::prime_power(p, 3);
  std::uint32_t n = mod.n();
  std::uint32_t p2 = p * p;
  std::uint32_t j = 0;
  auto lifted_unary = [&](auto&& fn) {
    std::vector<Elem> vals(n, 0);
    for (std::uint32_t k = 0; k < p2; ++k) vals[k * p % n] = fn(k);
    return OpTable(mod, 1, std::vector<Elem>(vals));
  };
  auto lifted_binary = [&](auto&& fn) {
    std::vector<Elem> vals(static_cast<std::size_t>(n) * n, 0);
    for (std::uint32_t k = 0; k < p2; ++k)
      for (std::uint32_t l = 0; l < p2; ++l)
        vals[static_cast<std::size_t>(k * p % n) * n + l * p % n] = fn(k, l);
    return OpTable(mod, 2, std::move(vals));
  };
  if (name == "pol_grp") return {};
  if (name == "O") return {};
  if (parse_indexed(name, 'E', j) || parse_indexed(name, 'N', j)) {
    // xi_j: k_1...k_j p^2 on M^j, 0 elsewhere
    std::vector<Elem> vals(table_size(n, j), 0);
    for_each_tuple(p2, j, [&](std::span<const Elem> kk, std::size_t) {
      std::uint64_t acc = p2 % n;
      std::size_t idx = 0;
      for (Elem ki : kk) {
        acc = acc * ki % n;
        idx = idx * n + static_cast<std::size_t>(ki) * p % n;
      }
      vals[idx] = static_cast<Elem>(acc);
    });
    OpTable xi(mod, j, std::move(vals));
    if (name[0] == 'E') return {xi};
    // pi: p k^p at x = kp, 0 elsewhere
    OpTable pi = lifted_unary([&](std::uint32_t k) {
      return static_cast<Elem>(static_cast<std::uint64_t>(p) *
                               pow_mod(k, p, n) % n);
    });
    return {xi, pi};
  }
  if (name == "F1")
    return {lifted_binary([&](std::uint32_t k, std::uint32_t l) {
      return static_cast<Elem>(static_cast<std::uint64_t>(p) *
                               pow_mod(k, p, n) % n * pow_mod(l, p, n) % n);
    })};
  if (name == "F2")
    return {lifted_binary([&](std::uint32_t k, std::uint32_t l) {
      std::uint32_t lp = (pow_mod(l, p, n) + n - l % n) % n;
      return static_cast<Elem>(static_cast<std::uint64_t>(p) *
                               pow_mod(k, p, n) % n * lp % n);
    })};
  if (name == "F3") {
    // phi: k l p^2 at x = k p^2, y = l p^2 (k, l < p), 0 elsewhere
    std::vector<Elem> vals(static_cast<std::size_t>(n) * n, 0);
    for (std::uint32_t k = 0; k < p; ++k)
      for (std::uint32_t l = 0; l < p; ++l)
        vals[static_cast<std::size_t>(k * p2 % n) * n + l * p2 % n] =
            static_cast<Elem>(static_cast<std::uint64_t>(k) * l * p2 % n);
    return {OpTable(mod, 2, std::move(vals))};
  }
  if (name == "pol")
    return {lifted_binary([&](std::uint32_t k, std::uint32_t l) {
      return static_cast<Elem>(static_cast<std::uint64_t>(k) * l % n * p % n);
    })};
  if (name == "comp") {
    auto tau = build_original_generator(p, "pol");
    auto phi = build_original_generator(p, "F3");
    return {tau[0], phi[0]};
  }
  throw UnknownNameError("unknown catalog entry: " + name);
}

std::vector<std::string> generator_labels(const std::string& name,
                                          bool original) {
  std::uint32_t j = 0;
  if (name == "pol_grp" || name == "O") return {};
  if (parse_indexed(name, 'E', j))
    return {original ? "xi" + std::to_string(j)
                     : "p*x1..x" + std::to_string(j)};
  if (parse_indexed(name, 'N', j))
    return {original ? "xi" + std::to_string(j)
                     : "p*x1..x" + std::to_string(j),
            original ? "pi" : "x^p"};
  if (name == "F1") return {original ? "psi" : "x^p*y^p"};
  if (name == "F2") return {original ? "rho" : "x^p*(y^p-y)"};
  if (name == "F3") return {original ? "phi" : "h"};
  if (name == "pol") return {original ? "tau" : "x*y"};
  if (name == "comp")
    return original ? std::vector<std::string>{"tau", "phi"}
                    : std::vector<std::string>{"x*y", "h"};
  throw UnknownNameError("unknown catalog entry: " + name);
}

CloneSpec reduced_spec(std::uint32_t p, const std::string& name) {
  CloneSpec spec{Modulus::prime_power(p, 2), name, {}, {}, true};
  spec.generators.push_back(ring_add(spec.modulus));
  spec.gen_names.push_back("x+y");
  auto extra = build_reduced_generator(p, name);
  auto labels = generator_labels(name, false);
  for (std::size_t i = 0; i < extra.size(); ++i) {
    spec.generators.push_back(extra[i]);
    spec.gen_names.push_back(labels[i]);
  }
  return spec;
}

CloneSpec original_spec(std::uint32_t p, const std::string& name) {
  CloneSpec spec{Modulus::prime_power(p, 3), name, {}, {}, true};
  spec.generators.push_back(ring_add(spec.modulus));
  spec.gen_names.push_back("x+y");
  spec.generators.push_back(ring_mul(spec.modulus));
  spec.gen_names.push_back("x*y");
  auto extra = build_original_generator(p, name);
  auto labels = generator_labels(name, true);
  for (std::size_t i = 0; i < extra.size(); ++i) {
    spec.generators.push_back(extra[i]);
    spec.gen_names.push_back(labels[i]);
  }
  return spec;
}

std::vector<CatalogEntry> catalog_entries(std::uint32_t p,
                                          std::uint32_t max_j) {
  if (max_j < std::max(p, 2u) + 1)
    throw InfeasibleParametersError("max_j must reach past the first rung");
  std::vector<CatalogEntry> out;
  auto ename = [](std::uint32_t j) { return "E" + std::to_string(j); };
  auto nname = [](std::uint32_t j) { return "N" + std::to_string(j); };
  out.push_back({"pol_grp", 0, false, false, {}});
  for (std::uint32_t j = 2; j <= max_j; ++j) {
    CatalogEntry e{ename(j), j, true, j == max_j, {}};
    e.covers.push_back(j == 2 ? "pol_grp" : ename(j - 1));
    out.push_back(e);
  }
  for (std::uint32_t j = std::max(p, 2u); j <= max_j; ++j) {
    CatalogEntry e{nname(j), j, true, j == max_j, {}};
    e.covers.push_back(ename(j));  // the rung E_j -- N_j of the diagram
    if (j > std::max(p, 2u)) e.covers.push_back(nname(j - 1));
    out.push_back(e);
  }
  out.push_back({"F1", 0, true, false, {nname(max_j)}});
  out.push_back({"F2", 0, true, false, {nname(max_j)}});
  out.push_back({"F3", 0, true, false, {"F2"}});
  out.push_back({"pol", 0, true, false, {"F1", "F2"}});
  out.push_back({"comp", 0, true, false, {"pol", "F3"}});
  out.push_back({"O", 0, false, false, {"comp"}});
  return out;
}

namespace {

struct Certifier {
  std::uint32_t p;
  LatticeOptions opts;
  std::map<std::string, CloneSpec> specs;
  std::map<std::pair<std::string, std::uint32_t>, ClosurePart> parts;
  std::vector<std::string> incomplete_notes;

  const ClosurePart* part_of(const std::string& name, std::uint32_t arity) {
    auto key = std::make_pair(name, arity);
    auto it = parts.find(key);
    if (it == parts.end()) {
      ClosurePart part = closure_part(specs.at(name), arity, opts.closure);
      it = parts.emplace(key, std::move(part)).first;
      if (!it->second.complete())
        incomplete_notes.push_back(name + " at arity " +
                                   std::to_string(arity) + ": " +
                                   it->second.certificate());
    }
    return &it->second;
  }

  // "yes" / "no" / "unknown" for: Clone(small) subset of Clone(big).
  // `witness` receives the missing generator label on "no".
  std::string inclusion(const std::string& small, const std::string& big,
                        std::string& witness, std::string& method) {
    if (big == "O") {
      method = "full_clone_top";
      return "yes";
    }
    if (small == "O") {
      // the full clone contains incompatible operations; exhibit one missing
      Modulus mod = Modulus::prime_power(p, 2);
      std::vector<Elem> vals(mod.n());
      for (std::uint32_t x = 0; x < mod.n(); ++x)
        vals[x] = static_cast<Elem>(x / p);
      OpTable u(mod, 1, vals);
      const ClosurePart* part = part_of(big, 1);
      if (part->contains(u)) return "unknown";  // would contradict theory
      method = part->complete() ? "generator_membership" : "budget";
      witness = "floor(x/p)";
      return part->complete() ? "no" : "unknown";
    }
    const CloneSpec& s = specs.at(small);
    const CloneSpec& b = specs.at(big);
    bool all_subset = true;
    for (const OpTable& g : s.generators) {
      bool found = false;
      for (const OpTable& gb : b.generators) found |= gb == g;
      if (!found) all_subset = false;
    }
    if (all_subset) {
      method = "generator_subset";
      return "yes";
    }
    std::vector<std::size_t> order(s.generators.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
      return s.gen_names[x] < s.gen_names[y];
    });
    for (std::size_t i : order) {
      const OpTable& g = s.generators[i];
      bool listed = false;
      for (const OpTable& gb : b.generators) listed |= gb == g;
      if (listed) continue;
      if (g.arity() > opts.arity_cap) {
        method = "arity_cap";
        return "unknown";
      }
      const ClosurePart* part = part_of(big, g.arity());
      if (part->contains(g)) continue;
      if (!part->complete()) {
        method = "budget";
        return "unknown";
      }
      witness = s.gen_names.empty() ? "generator" : s.gen_names[i];
      method = "generator_membership";
      return "no";
    }
    method = "generator_membership";
    return "yes";
  }
};

}  // namespace

LatticeReport lattice_report(std::uint32_t p, const LatticeOptions& opts) {
  LatticeReport rep;
  rep.p = p;
  rep.max_j = opts.max_j;
  rep.arity_cap = opts.arity_cap;
  rep.entries = catalog_entries(p, opts.max_j);
  ReductionContext ctx(p, 2 + 1);

  // generator consistency between the two table columns
  for (const CatalogEntry& e : rep.entries) {
    if (e.name == "O") continue;
    auto reduced = build_reduced_generator(p, e.name);
    auto original = build_original_generator(p, e.name);
    auto labels = generator_labels(e.name, true);
    for (std::size_t i = 0; i < reduced.size(); ++i) {
      std::string check = e.name + "/" + labels[i];
      bool lift_ok = star_lift(ctx, reduced[i]) == original[i];
      bool compat_ok = is_compatible(original[i]) && is_compatible(reduced[i]);
      if (lift_ok && compat_ok) {
        rep.generator_checks.push_back(check + ": ok");
      } else {
        rep.generator_checks.push_back(
            check + ": " + (lift_ok ? "" : "star-lift mismatch ") +
            (compat_ok ? "" : "compatibility failure"));
        rep.generators_consistent = false;
      }
    }
  }

  rep.closures_run = p == 2;
  if (!rep.closures_run) return rep;

  Certifier cert{p, opts, {}, {}, {}};
  for (const CatalogEntry& e : rep.entries) {
    if (e.name == "O") continue;
    CloneSpec spec = reduced_spec(p, e.name);
    if (opts.shuffle_salt != 0) {
      std::uint64_t st = 0x5a5aull + opts.shuffle_salt;
      for (std::size_t i = spec.generators.size(); i > 1; --i) {
        std::size_t j = rng_below(st, static_cast<std::uint32_t>(i));
        std::swap(spec.generators[i - 1], spec.generators[j]);
        std::swap(spec.gen_names[i - 1], spec.gen_names[j]);
      }
    }
    cert.specs.emplace(e.name, std::move(spec));
  }

  // diagram reachability gives the expected inclusion relation
  std::map<std::string, std::vector<std::string>> above;  // lower -> uppers
  for (const CatalogEntry& e : rep.entries)
    for (const std::string& low : e.covers) above[low].push_back(e.name);
  auto reachable = [&](const std::string& from, const std::string& to) {
    std::vector<std::string> stack{from};
    std::vector<std::string> seen;
    while (!stack.empty()) {
      std::string cur = stack.back();
      stack.pop_back();
      if (cur == to) return true;
      if (std::find(seen.begin(), seen.end(), cur) != seen.end()) continue;
      seen.push_back(cur);
      for (const std::string& up : above[cur]) stack.push_back(up);
    }
    return false;
  };

  // certify the diagram edges first
  std::map<std::string, std::vector<std::string>> certified_above;
  for (const CatalogEntry& e : rep.entries) {
    for (const std::string& low : e.covers) {
      EdgeCertification ec;
      ec.lower = low;
      ec.upper = e.name;
      const CatalogEntry* lower_entry = nullptr;
      for (const CatalogEntry& le : rep.entries)
        if (le.name == low) lower_entry = &le;
      ec.in_interval = e.in_interval && lower_entry->in_interval;
      std::string witness, method;
      std::string inc = cert.inclusion(low, e.name, witness, method);
      ec.inclusion_certified = inc == "yes";
      if (ec.inclusion_certified) certified_above[low].push_back(e.name);
      if (inc == "no")
        ec.note = "diagram edge refuted: " + low + " not below " + e.name;
      std::string rev_witness, rev_method;
      std::string rev = cert.inclusion(e.name, low, rev_witness, rev_method);
      ec.strict_certified = rev == "no";
      ec.strictness_witness = rev == "no" ? rev_witness : "";
      if (rev == "yes") ec.note = "edge collapses: clones are equal";
      rep.edges.push_back(ec);
    }
  }
  auto certified_reachable = [&](const std::string& from,
                                 const std::string& to) {
    std::vector<std::string> stack{from}, seen;
    while (!stack.empty()) {
      std::string cur = stack.back();
      stack.pop_back();
      if (cur == to) return true;
      if (std::find(seen.begin(), seen.end(), cur) != seen.end()) continue;
      seen.push_back(cur);
      for (const std::string& up : certified_above[cur]) stack.push_back(up);
    }
    return false;
  };

  // all ordered pairs: certified edge chains first, direct checks otherwise
  for (const CatalogEntry& a : rep.entries) {
    for (const CatalogEntry& b : rep.entries) {
      if (a.name == b.name) continue;
      PairVerdict v;
      v.small = a.name;
      v.big = b.name;
      v.expected_included = reachable(a.name, b.name);
      if (certified_reachable(a.name, b.name)) {
        v.relation = "included";
        v.method = "transitivity";
      } else {
        std::string witness, method;
        std::string inc = cert.inclusion(a.name, b.name, witness, method);
        v.relation = inc == "yes" ? "included"
                                  : (inc == "no" ? "not_included" : "unknown");
        v.method = method;
        v.witness = witness;
      }
      if (v.relation == "included" && !v.expected_included)
        rep.findings.push_back("unexpected inclusion: " + a.name +
                               " below " + b.name);
      if (v.relation == "not_included" && v.expected_included)
        rep.findings.push_back("expected inclusion refuted: " + a.name +
                               " not below " + b.name + " (witness " +
                               v.witness + ")");
      rep.verdicts.push_back(v);
    }
  }
  std::sort(rep.verdicts.begin(), rep.verdicts.end(),
            [](const PairVerdict& x, const PairVerdict& y) {
              return std::tie(x.small, x.big) < std::tie(y.small, y.big);
            });

  rep.all_interval_edges_certified = true;
  for (const EdgeCertification& ec : rep.edges)
    if (ec.in_interval && !ec.inclusion_certified)
      rep.all_interval_edges_certified = false;
  for (const std::string& note : cert.incomplete_notes)
    rep.findings.push_back("incomplete closure: " + note);
  return rep;
}

std::string lattice_report_json(const LatticeReport& r) {
  nlohmann::json doc;
  doc["p"] = r.p;
  doc["max_j"] = r.max_j;
  doc["arity_cap"] = r.arity_cap;
  doc["closures_run"] = r.closures_run;
  doc["generators_consistent"] = r.generators_consistent;
  doc["generator_checks"] = r.generator_checks;
  nlohmann::json entries = nlohmann::json::array();
  for (const CatalogEntry& e : r.entries) {
    nlohmann::json je;
    je["name"] = e.name;
    je["in_interval"] = e.in_interval;
    je["union_approx"] = e.union_approx;
    je["covers"] = e.covers;
    entries.push_back(je);
  }
  doc["entries"] = entries;
  nlohmann::json edges = nlohmann::json::array();
  for (const EdgeCertification& ec : r.edges) {
    nlohmann::json je;
    je["lower"] = ec.lower;
    je["upper"] = ec.upper;
    je["in_interval"] = ec.in_interval;
    je["inclusion_certified"] = ec.inclusion_certified;
    je["strict_certified"] = ec.strict_certified;
    je["strictness_witness"] = ec.strictness_witness;
    je["note"] = ec.note;
    edges.push_back(je);
  }
  doc["edges"] = edges;
  nlohmann::json verdicts = nlohmann::json::array();
  for (const PairVerdict& v : r.verdicts) {
    nlohmann::json jv;
    jv["small"] = v.small;
    jv["big"] = v.big;
    jv["relation"] = v.relation;
    jv["method"] = v.method;
    jv["witness"] = v.witness;
    jv["expected_included"] = v.expected_included;
    verdicts.push_back(jv);
  }
  doc["verdicts"] = verdicts;
  doc["findings"] = r.findings;
  doc["all_interval_edges_certified"] = r.all_interval_edges_certified;
  return doc.dump(2);
}

std::string lattice_report_text(const LatticeReport& r) {
  std::ostringstream out;
  out << "catalog lattice, p=" << r.p << ", unions capped at j=" << r.max_j
      << "\n";
  out << "generator table consistency: "
      << (r.generators_consistent ? "ok" : "FAILED") << "\n";
  if (!r.closures_run) {
    out << "closure certification skipped (p != 2)\n";
    return out.str();
  }
  out << "certified Hasse edges (lower < upper):\n";
  for (const EdgeCertification& ec : r.edges) {
    out << "  " << ec.lower << " < " << ec.upper << "  inclusion "
        << (ec.inclusion_certified ? "certified" : "NOT certified")
        << ", strict "
        << (ec.strict_certified ? "certified (witness " +
                                      ec.strictness_witness + ")"
                                : "not certified");
    if (!ec.note.empty()) out << "  [" << ec.note << "]";
    out << "\n";
  }
  out << (r.all_interval_edges_certified
              ? "all diagram edges inside [E2, comp] certified\n"
              : "some interval edges NOT certified\n");
  for (const std::string& f : r.findings) out << "finding: " << f << "\n";
  return out.str();
}

}  // namespace cloneforge
