// Command-line front end: operation-table I/O, closure runs, membership
// queries, the lemma-verification harness and the catalog lattice report.
//
// Exit codes: 0 pass/in/compatible, 1 fail/not-in/incompatible,
// 2 usage or input error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "cloneforge/catalog.hpp"
#include "cloneforge/clone.hpp"
#include "cloneforge/op_io.hpp"
#include "cloneforge/reduction.hpp"

using namespace cloneforge;
using nlohmann::json;

namespace {

struct Common {
  std::uint64_t seed = 1;
  std::uint64_t budget = 4'000'000;
  int threads = 1;
  std::uint64_t samples = 100;
  std::uint32_t shuffle = 0;  // permutes generator lists; results must not move
  std::string format = "json";
  std::string output;
};

ClosureOptions closure_options(const Common& c) {
  ClosureOptions opts;
  opts.member_budget = c.budget;
  opts.threads = c.threads;
  return opts;
}

void add_common(CLI::App* cmd, Common& c, bool with_samples = false) {
  cmd->add_option("--seed", c.seed, "seed for all randomized checks");
  cmd->add_option("--budget", c.budget, "max explicitly materialized members");
  cmd->add_option("--threads", c.threads, "worker threads");
  cmd->add_option("--format", c.format, "json or text")
      ->check(CLI::IsMember({"json", "text"}));
  cmd->add_option("--output", c.output, "write the report here instead of stdout");
  cmd->add_option("--shuffle", c.shuffle,
                  "permute generator lists (output must be unchanged)");
  if (with_samples)
    cmd->add_option("--samples", c.samples, "randomized sample count");
}

void shuffle_spec(CloneSpec& spec, std::uint32_t salt) {
  if (salt == 0) return;
  std::uint64_t st = 0x5a5aull + salt;
  for (std::size_t i = spec.generators.size(); i > 1; --i) {
    std::size_t j = rng_below(st, static_cast<std::uint32_t>(i));
    std::swap(spec.generators[i - 1], spec.generators[j]);
    std::swap(spec.gen_names[i - 1], spec.gen_names[j]);
  }
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

OpTable parse_table_doc(const json& doc) {
  return op_table_from_json(doc.dump());
}

// A generator-set document: either a preset
//   {"preset": "pol", "p": 2, "side": "reduced"}
// or an explicit list
//   {"modulus": 4, "name": "...", "include_all_constants": true,
//    "generators": [{"name": "...", "modulus": .., "arity": .., "values": []}]}
CloneSpec load_gens_file(const std::string& path) {
  json doc;
  try {
    doc = json::parse(slurp(path));
  } catch (const json::exception& e) {
    throw ParseError(std::string("invalid generator file: ") + e.what());
  }
  if (doc.contains("preset")) {
    std::string preset = doc.at("preset").get<std::string>();
    std::uint32_t p = doc.value("p", 2u);
    std::string side = doc.value("side", std::string("reduced"));
    if (side == "original") return original_spec(p, preset);
    if (side != "reduced") throw ParseError("side must be reduced or original");
    return reduced_spec(p, preset);
  }
  if (!doc.contains("modulus") || !doc.contains("generators"))
    throw ParseError("generator file needs modulus and generators");
  CloneSpec spec{Modulus(doc.at("modulus").get<std::uint32_t>()),
                 doc.value("name", std::string("user")),
                 {},
                 {},
                 doc.value("include_all_constants", false)};
  std::size_t i = 0;
  for (const json& g : doc.at("generators")) {
    json tdoc = g.contains("table") ? g.at("table") : g;
    OpTable t = parse_table_doc(tdoc);
    spec.generators.push_back(t);
    spec.gen_names.push_back(g.value("name", "g" + std::to_string(i)));
    ++i;
  }
  spec.validate();
  return spec;
}

int emit(const json& doc, bool pass, const Common& c) {
  std::string text;
  if (c.format == "json") {
    text = doc.dump(2) + "\n";
  } else {
    std::ostringstream out;
    if (doc.contains("lemma")) out << "verify " << doc["lemma"].get<std::string>() << "\n";
    if (doc.contains("checks"))
      for (const json& chk : doc["checks"])
        out << (chk["pass"].get<bool>() ? "ok   " : "FAIL ")
            << chk["name"].get<std::string>() << "\n";
    out << (pass ? "pass" : "fail") << "\n";
    text = out.str();
  }
  if (c.output.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(c.output);
    if (!out) throw ParseError("cannot write " + c.output);
    out << text;
  }
  return pass ? 0 : 1;
}

json check(std::string name, bool pass, json extra = json::object()) {
  extra["name"] = std::move(name);
  extra["pass"] = pass;
  return extra;
}

bool all_pass(const json& checks) {
  for (const json& c : checks)
    if (!c["pass"].get<bool>()) return false;
  return true;
}

OpTable random_table(const Modulus& mod, std::uint32_t arity,
                     std::uint64_t& st) {
  std::vector<Elem> vals(table_size(mod.n(), arity));
  for (Elem& v : vals) v = static_cast<Elem>(rng_below(st, mod.n()));
  return OpTable(mod, arity, std::move(vals));
}

void require_pk(std::uint32_t p, std::uint32_t k, const char* lemma) {
  static const std::vector<std::pair<std::uint32_t, std::uint32_t>> allowed{
      {2, 2}, {2, 3}, {3, 2}, {3, 3}};
  for (auto [ap, ak] : allowed)
    if (p == ap && k == ak) return;
  throw InfeasibleParametersError(
      std::string("verify ") + lemma +
      " supports (p,k) in {(2,2),(2,3),(3,2),(3,3)} at desk scale");
}

// ---- verify subcommands ---------------------------------------------------

json verify_g(std::uint32_t p, std::uint32_t k) {
  require_pk(p, k, "G");
  ReductionContext ctx(p, k);
  json checks = json::array();
  for (std::uint32_t arity : {1u, 2u}) {
    bool exact = true;
    OpTable g = m_indicator(ctx, arity);
    for_each_tuple(ctx.big.n(), arity,
                   [&](std::span<const Elem> x, std::size_t idx) {
      bool in_m = true;
      for (Elem xi : x) in_m &= xi % p == 0;
      exact &= g[idx] == (in_m ? 1 : 0);
    });
    checks.push_back(
        check("indicator_exact_arity_" + std::to_string(arity), exact));
  }
  std::uint32_t alpha = units_product(ctx.big);
  std::uint32_t n = ctx.big.n();
  bool unit = std::gcd(alpha, n) == 1;
  checks.push_back(check("alpha_invertible", unit,
                         json{{"alpha", alpha}}));
  bool independent = true;
  for (std::uint32_t l = 0; l < n / p; ++l) {
    std::uint64_t acc = 1;
    for (std::uint32_t c = 0; c < n; ++c)
      if (c % p != 0) acc = acc * ((l * p + n - c) % n) % n;
    independent &= acc == alpha;
  }
  checks.push_back(check("alpha_independent_of_x", independent));
  std::uint32_t closed_form = p > 2 ? n - 1 : 1;
  json doc;
  doc["lemma"] = "G";
  doc["p"] = p;
  doc["k"] = k;
  doc["alpha_computed"] = alpha;
  doc["alpha_closed_form"] = closed_form;
  doc["alpha_matches_closed_form"] = alpha == closed_form;  // reported only
  doc["checks"] = checks;
  doc["pass"] = all_pass(checks);
  return doc;
}

json verify_decomp(std::uint32_t p, std::uint32_t k, std::uint64_t seed,
                   std::uint64_t samples) {
  require_pk(p, k, "decomp");
  ReductionContext ctx(p, k);
  std::uint64_t st = seed;
  json checks = json::array();
  for (std::uint32_t arity : {1u, 2u}) {
    bool ok = verify_decomposition(ctx, constant(ctx.big, arity, 0));
    for (std::uint64_t s = 0; s < samples && ok; ++s)
      ok = verify_decomposition(ctx, random_table(ctx.big, arity, st));
    checks.push_back(
        check("decomposition_arity_" + std::to_string(arity), ok,
              json{{"samples", samples}}));
  }
  json doc;
  doc["lemma"] = "decomp";
  doc["p"] = p;
  doc["k"] = k;
  doc["seed"] = seed;
  doc["checks"] = checks;
  doc["pass"] = all_pass(checks);
  return doc;
}

json verify_star(std::uint32_t p, std::uint32_t k, std::uint64_t seed,
                 std::uint64_t samples) {
  require_pk(p, k, "star");
  ReductionContext ctx(p, k);
  std::uint64_t st = seed;
  const std::uint32_t msize = ctx.m_size();

  bool compo_ok = true;
  for (std::uint64_t s = 0; s < samples && compo_ok; ++s) {
    std::uint32_t outer = 1 + rng_below(st, 2);
    std::uint32_t inner = 1 + rng_below(st, 2);
    OpTable f = random_table(ctx.small, outer, st);
    std::vector<OpTable> gs, lifted;
    for (std::uint32_t i = 0; i < outer; ++i) {
      gs.push_back(random_table(ctx.small, inner, st));
      lifted.push_back(star_lift(ctx, gs.back()));
    }
    OpTable lhs = star_lift(ctx, compose(f, gs));
    OpTable rhs = compose(star_lift(ctx, f), lifted);
    Tuple x(inner);
    for_each_tuple(msize, inner, [&](std::span<const Elem> l, std::size_t) {
      for (std::uint32_t j = 0; j < inner; ++j)
        x[j] = static_cast<Elem>(l[j] * p);
      std::size_t idx = flat_index(ctx.big.n(), x);
      compo_ok &= lhs[idx] == rhs[idx];
    });
  }
  bool compat_ok = true;
  for (std::uint64_t s = 0; s < samples && compat_ok; ++s) {
    OpTable h = random_table(ctx.small, 1 + rng_below(st, 2), st);
    auto [small_side, m_side] = star_compatibility_check(ctx, h);
    compat_ok &= small_side == m_side;
  }
  json checks = json::array();
  checks.push_back(check("composition_commutes_with_star", compo_ok,
                         json{{"samples", samples}}));
  checks.push_back(check("compatibility_equivalence", compat_ok,
                         json{{"samples", samples}}));
  json doc;
  doc["lemma"] = "star";
  doc["p"] = p;
  doc["k"] = k;
  doc["seed"] = seed;
  doc["checks"] = checks;
  doc["pass"] = all_pass(checks);
  return doc;
}

json verify_crt(std::uint32_t m, std::uint32_t n, std::uint64_t seed,
                std::uint64_t samples) {
  if (m < 2 || n < 2 || std::gcd(m, n) != 1 || m * n > 36)
    throw InfeasibleParametersError(
        "verify crt needs coprime m, n >= 2 with m*n <= 36");
  Modulus zmn(m * n), zm(m), zn(n);
  std::uint64_t st = seed;
  bool rt_ok = true, compw_ok = true;
  for (std::uint64_t s = 0; s < samples && rt_ok && compw_ok; ++s) {
    std::uint32_t arity = 1 + rng_below(st, 2);
    OpTable f = sample_compatible(zmn, arity, st);
    auto [g, h] = split_coprime(f, m, n);
    rt_ok &= combine_crt(g, h) == f;
    auto [g2, h2] = split_coprime(combine_crt(g, h), m, n);
    rt_ok &= g2 == g && h2 == h;
    for_each_tuple(m * n, arity, [&](std::span<const Elem> x, std::size_t idx) {
      Tuple xm(arity), xn(arity);
      for (std::uint32_t j = 0; j < arity; ++j) {
        xm[j] = static_cast<Elem>(x[j] % m);
        xn[j] = static_cast<Elem>(x[j] % n);
      }
      compw_ok &= f[idx] % m == evaluate(g, xm) % m;
      compw_ok &= f[idx] % n == evaluate(h, xn) % n;
    });
  }
  bool ring_ok =
      split_coprime(ring_add(zmn), m, n) ==
          std::pair<OpTable, OpTable>{ring_add(zm), ring_add(zn)} &&
      split_coprime(ring_mul(zmn), m, n) ==
          std::pair<OpTable, OpTable>{ring_mul(zm), ring_mul(zn)} &&
      combine_crt(ring_add(zm), ring_add(zn)) == ring_add(zmn);
  bool transfer_ok = true;
  for (std::uint64_t s = 0; s < samples && transfer_ok; ++s) {
    OpTable g = random_table(zm, 1, st);
    OpTable h = random_table(zn, 1, st);
    transfer_ok &= is_compatible(combine_crt(g, h)) ==
                   (is_compatible(g) && is_compatible(h));
  }
  json checks = json::array();
  checks.push_back(check("split_combine_round_trip", rt_ok,
                         json{{"samples", samples}}));
  checks.push_back(check("componentwise_action", compw_ok));
  checks.push_back(check("ring_operations_split", ring_ok));
  checks.push_back(check("compatibility_transfer", transfer_ok));
  json doc;
  doc["lemma"] = "crt";
  doc["m"] = m;
  doc["n"] = n;
  doc["seed"] = seed;
  doc["checks"] = checks;
  doc["pass"] = all_pass(checks);
  return doc;
}

json verify_ck(std::uint32_t p, std::uint32_t k, const Common& c) {
  if (p != 2 || k != 3)
    throw InfeasibleParametersError(
        "verify ck runs at (p,k)=(2,3): 64 binary shifts with memoized "
        "memberships; larger parameters are out of desk scale");
  ReductionContext ctx(p, k);
  ClosureOptions opts = closure_options(c);
  json checks = json::array();
  const std::vector<std::string> names{"E2", "N2", "F1", "F2",
                                       "F3", "pol", "comp"};
  for (const std::string& name : names) {
    CloneSpec kspec = reduced_spec(p, name);
    shuffle_spec(kspec, c.shuffle);
    bool ok = true;
    for (const OpTable& gen : build_reduced_generator(p, name))
      if (gen.arity() <= 2) ok &= in_ck(ctx, star_lift(ctx, gen), kspec, opts);
    checks.push_back(check("star_extensions_in_CK_" + name, ok));
  }
  {
    CloneSpec e2 = reduced_spec(p, "E2");
    shuffle_spec(e2, c.shuffle);
    checks.push_back(check("ring_multiplication_in_CK_E2",
                           in_ck(ctx, ring_mul(ctx.big), e2, opts)));
  }
  bool consts_ok = true;
  for (const std::string& name : names) {
    CloneSpec kspec = reduced_spec(p, name);
    shuffle_spec(kspec, c.shuffle);
    for (std::uint32_t v = 0; v < ctx.big.n(); ++v)
      consts_ok &= in_ck(ctx, constant(ctx.big, 1, v), kspec, opts);
  }
  checks.push_back(check("constants_in_every_CK", consts_ok));
  json doc;
  doc["lemma"] = "ck";
  doc["p"] = p;
  doc["k"] = k;
  doc["checks"] = checks;
  doc["pass"] = all_pass(checks);
  return doc;
}

json verify_zp2(std::uint32_t p, const Common& c) {
  if (p != 2)
    throw InfeasibleParametersError(
        "verify zp2 enumerates the full binary compatible part; only p=2 "
        "(2^20 members) is within desk scale");
  Modulus mod = Modulus::prime_power(p, 2);
  ClosureOptions opts = closure_options(c);
  json checks = json::array();

  CompPart comp = comp_part(mod, 2, std::max<std::uint64_t>(c.budget, 1u << 21));
  checks.push_back(check("compatible_binary_count", comp.keys.size() == 1048576,
                         json{{"count", comp.keys.size()}}));

  CloneSpec pol = reduced_spec(p, "pol");
  shuffle_spec(pol, c.shuffle);
  ClosurePart pol2 = closure_part(pol, 2, opts);
  bool pol_ok = pol2.complete() && pol2.size().fits_u64() &&
                pol2.size().as_u64() < comp.keys.size();
  checks.push_back(check("polynomial_binary_part_complete_and_smaller", pol_ok,
                         json{{"count", pol2.size().str()}}));

  std::uint64_t st = c.seed;
  std::uint64_t runs = c.samples == 100 ? 20 : c.samples;
  bool closures_ok = true;
  std::uint64_t comp_hash = comp.members_hash();
  json run_list = json::array();
  for (std::uint64_t r = 0; r < runs; ++r) {
    OpTable f = sample_compatible(mod, 2, st);
    if (pol2.contains(f)) {
      --r;  // outside the polynomial part only
      continue;
    }
    CloneSpec extended = pol;
    extended.generators.push_back(f);
    extended.gen_names.push_back("f");
    shuffle_spec(extended, c.shuffle);
    ClosurePart part = closure_part(extended, 2, opts);
    bool run_ok = part.complete() &&
                  part.size() == compatible_count(mod.n(), 2) &&
                  part.sorted_keys(1u << 21) == comp.keys;
    closures_ok &= run_ok;
    json jr;
    jr["added_generator_keyhash"] =
        fnv1a(kFnvOffset, pack_table(f).bytes.data(),
              pack_table(f).bytes.size());
    jr["closure_count"] = part.size().str();
    jr["equals_compatible_part"] = run_ok;
    run_list.push_back(jr);
  }
  checks.push_back(check("random_extensions_close_to_full_compatible_part",
                         closures_ok, json{{"runs", run_list}}));
  json doc;
  doc["lemma"] = "zp2";
  doc["p"] = p;
  doc["seed"] = c.seed;
  doc["samples"] = runs;
  doc["compatible_part_hash"] = comp_hash;
  doc["checks"] = checks;
  doc["pass"] = all_pass(checks);
  return doc;
}

json verify_catalog(std::uint32_t p, std::uint32_t max_j, const Common& c) {
  if (p != 2 && p != 3)
    throw InfeasibleParametersError(
        "verify catalog: closure certification at p=2; p=3 builds generators "
        "and runs pointwise checks only");
  LatticeOptions lopts;
  lopts.max_j = max_j;
  lopts.shuffle_salt = c.shuffle;
  lopts.closure = closure_options(c);
  LatticeReport rep = lattice_report(p, lopts);
  json checks = json::array();
  checks.push_back(check("generator_table_consistency",
                         rep.generators_consistent));
  if (rep.closures_run) {
    checks.push_back(check("all_interval_edges_certified",
                           rep.all_interval_edges_certified));
    auto separated = [&](const std::string& small, const std::string& big) {
      for (const PairVerdict& v : rep.verdicts)
        if (v.small == small && v.big == big)
          return v.relation == "not_included";
      return false;
    };
    checks.push_back(check("separation_E2_below_N2",
                           separated("N2", "E2")));
    checks.push_back(check("separation_E2_below_pol",
                           separated("pol", "E2")));
    checks.push_back(check("separation_pol_below_comp",
                           separated("comp", "pol")));
    checks.push_back(check("separation_E2_below_E3",
                           separated("E3", "E2")));
  }
  json doc;
  doc["lemma"] = "catalog";
  doc["report"] = json::parse(lattice_report_json(rep));
  doc["checks"] = checks;
  doc["pass"] = all_pass(checks);
  return doc;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"clone-theory toolkit for the rings Z_n"};
  app.require_subcommand(1);

  Common c;
  if (const char* env = std::getenv("CLONEFORGE_BUDGET"))
    c.budget = std::strtoull(env, nullptr, 10);

  std::string op_path, gens_path, gens_small_path, lemma;
  std::uint32_t p = 2, k = 2, mm = 4, nn = 3, arity = 1, max_j = 4;

  CLI::App* cc = app.add_subcommand("check-compat",
                                    "congruence compatibility of a table");
  cc->add_option("table", op_path, "operation table JSON")->required();
  add_common(cc, c);

  CLI::App* cl = app.add_subcommand("closure", "m-ary part of a clone");
  cl->add_option("generators", gens_path, "generator set JSON")->required();
  cl->add_option("--arity", arity, "arity of the part")->required();
  add_common(cl, c);

  CLI::App* me = app.add_subcommand("member", "clone membership of a table");
  me->add_option("generators", gens_path, "generator set JSON")->required();
  me->add_option("table", op_path, "operation table JSON")->required();
  add_common(me, c);

  CLI::App* in = app.add_subcommand("includes", "clone inclusion");
  in->add_option("big", gens_path, "candidate superclone JSON")->required();
  in->add_option("small", gens_small_path, "candidate subclone JSON")
      ->required();
  add_common(in, c);

  CLI::App* ve = app.add_subcommand("verify", "machine-check a result");
  ve->add_option("lemma", lemma, "G|decomp|star|crt|ck|zp2|catalog")
      ->required()
      ->check(CLI::IsMember({"G", "decomp", "star", "crt", "ck", "zp2",
                             "catalog"}));
  ve->add_option("--p", p, "prime");
  ve->add_option("--k", k, "exponent");
  ve->add_option("--m", mm, "first coprime modulus (crt)");
  ve->add_option("--n", nn, "second coprime modulus (crt)");
  ve->add_option("--max-j", max_j, "union cap for the catalog");
  add_common(ve, c, true);

  CLI::App* re = app.add_subcommand("report", "human-facing reports");
  CLI::App* rl = re->add_subcommand("lattice", "catalog lattice report");
  rl->add_option("--p", p, "prime");
  rl->add_option("--max-j", max_j, "union cap");
  add_common(rl, c);
  re->require_subcommand(1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*cc) {
      OpTable t = load_op_table(op_path);
      json divisor_list = json::array();
      bool compat = true;
      for (std::uint32_t d : divisors(t.modulus())) {
        if (d == 1 || d == t.n()) continue;
        bool ok = preserves_congruence(t, Congruence(t.modulus(), d));
        compat &= ok;
        divisor_list.push_back(json{{"divisor", d}, {"preserved", ok}});
      }
      json doc;
      doc["modulus"] = t.n();
      doc["arity"] = t.arity();
      doc["divisors"] = divisor_list;
      doc["compatible"] = compat;
      if (c.format == "text") {
        for (const json& dv : divisor_list)
          std::cout << "mod " << dv["divisor"] << ": "
                    << (dv["preserved"].get<bool>() ? "preserved" : "broken")
                    << "\n";
        std::cout << (compat ? "compatible" : "incompatible") << "\n";
        return compat ? 0 : 1;
      }
      return emit(doc, compat, c);
    }
    if (*cl) {
      CloneSpec spec = load_gens_file(gens_path);
      shuffle_spec(spec, c.shuffle);
      ClosurePart part = closure_part(spec, arity, closure_options(c));
      json doc;
      doc["modulus"] = spec.modulus.n();
      doc["arity"] = arity;
      doc["count"] = part.size().str();
      doc["complete"] = part.complete();
      doc["certificate"] = part.certificate();
      doc["rounds"] = part.rounds();
      if (!c.output.empty() && c.format == "json") {
        export_closure(part, c.output, c.budget);
        std::cout << doc.dump(2) << "\n";
        return part.complete() ? 0 : 1;
      }
      if (c.format == "text") {
        std::cout << "count=" << part.size().str()
                  << " complete=" << (part.complete() ? "true" : "false")
                  << " certificate=" << part.certificate() << "\n";
        return part.complete() ? 0 : 1;
      }
      return emit(doc, part.complete(), c);
    }
    if (*me) {
      CloneSpec spec = load_gens_file(gens_path);
      shuffle_spec(spec, c.shuffle);
      OpTable t = load_op_table(op_path);
      bool in_clone = member(spec, t, closure_options(c));
      std::cout << (in_clone ? "in" : "not-in") << "\n";
      return in_clone ? 0 : 1;
    }
    if (*in) {
      CloneSpec big = load_gens_file(gens_path);
      CloneSpec small = load_gens_file(gens_small_path);
      shuffle_spec(big, c.shuffle);
      bool inc = includes(big, small, closure_options(c));
      std::cout << (inc ? "included" : "not-included") << "\n";
      return inc ? 0 : 1;
    }
    if (*ve) {
      json doc;
      if (lemma == "G") doc = verify_g(p, k);
      else if (lemma == "decomp") doc = verify_decomp(p, k, c.seed, c.samples);
      else if (lemma == "star") doc = verify_star(p, k, c.seed, c.samples);
      else if (lemma == "crt") doc = verify_crt(mm, nn, c.seed, c.samples);
      else if (lemma == "ck") doc = verify_ck(p, k, c);
      else if (lemma == "zp2") doc = verify_zp2(p, c);
      else doc = verify_catalog(p, max_j, c);
      return emit(doc, doc["pass"].get<bool>(), c);
    }
    if (*rl) {
      LatticeOptions lopts;
      lopts.max_j = max_j;
      lopts.closure = closure_options(c);
      LatticeReport rep = lattice_report(p, lopts);
      std::string text = c.format == "json" ? lattice_report_json(rep) + "\n"
                                            : lattice_report_text(rep);
      if (c.output.empty()) {
        std::cout << text;
      } else {
        std::ofstream out(c.output);
        out << text;
      }
      return 0;
    }
  } catch (const InfeasibleParametersError& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
