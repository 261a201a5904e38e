#include "cloneforge/clone.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <thread>
#include <unordered_set>

namespace cloneforge {

std::uint64_t fnv1a(std::uint64_t h, const std::uint8_t* data,
                    std::size_t len) {
  for (std::size_t i = 0; i < len; ++i) {
    h ^= data[i];
    h *= 1099511628211ull;
  }
  return h;
}

std::uint64_t rng_next(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ull;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

std::uint32_t rng_below(std::uint64_t& state, std::uint32_t bound) {
  return static_cast<std::uint32_t>(
      (static_cast<unsigned __int128>(rng_next(state)) * bound) >> 64);
}

void CloneSpec::validate() const {
  for (const OpTable& g : generators) {
    if (!(g.modulus() == modulus))
      throw ModulusMismatchError("generator modulus differs from clone spec");
    if (g.arity() < 1) throw ArityMismatchError("generator arity must be >= 1");
  }
  if (!gen_names.empty() && gen_names.size() != generators.size())
    throw ParseError("generator name list length mismatch");
}

FactoredCount compatible_count(std::uint32_t n, std::uint32_t m) {
  FactoredCount out;
  for (const PrimePower& pp : factorize(n)) {
    std::uint64_t exp = 0;
    for (std::uint32_t j = 1; j <= pp.k; ++j) {
      // p^(j*m), saturating; a saturated count never equals a real span size
      long double bits = static_cast<long double>(j) * m *
                         std::log2(static_cast<long double>(pp.p));
      if (bits > 60) {
        exp = ~0ull >> 1;
        break;
      }
      std::uint64_t t = 1;
      for (std::uint32_t i = 0; i < j * m; ++i) t *= pp.p;
      exp += t;
    }
    out.mul_prime_power(pp.p, exp);
  }
  return out;
}

namespace {

using Vals = std::vector<Elem>;

// out[idx] = g(args[0][idx], ..., args[l-1][idx])
void apply_gen(const OpTable& g, const std::vector<const Vals*>& args,
               Vals& out) {
  const std::uint32_t n = g.n();
  const std::size_t len = out.size();
  const std::size_t l = args.size();
  if (l == 1) {
    const Vals& a = *args[0];
    for (std::size_t idx = 0; idx < len; ++idx) out[idx] = g[a[idx]];
    return;
  }
  if (l == 2) {
    const Vals& a = *args[0];
    const Vals& b = *args[1];
    for (std::size_t idx = 0; idx < len; ++idx)
      out[idx] = g[static_cast<std::size_t>(a[idx]) * n + b[idx]];
    return;
  }
  for (std::size_t idx = 0; idx < len; ++idx) {
    std::size_t fi = 0;
    for (std::size_t j = 0; j < l; ++j) fi = fi * n + (*args[j])[idx];
    out[idx] = g[fi];
  }
}

struct GenInfo {
  OpTable table;
  std::uint64_t table_hash = 0;
  bool is_add = false;
  bool compatible = false;
  // Per argument: least t with (T-1)^t g == 0 for the unit shift T in that
  // argument. Finite over Z_n; mixed-direction differences of total order t
  // in the argument vanish with it, since every T_w - 1 is a multiple of
  // T - 1 in the group ring.
  std::vector<std::uint32_t> vanish;
  // Per argument: least divisor q of n such that the value depends on that
  // argument mod q only.
  std::vector<std::uint32_t> detq;
};

bool all_zero(const Vals& v) {
  return std::all_of(v.begin(), v.end(), [](Elem e) { return e == 0; });
}

// (T - 1) acting on a value table in argument `arg` (0-based).
Vals arg_difference(const Vals& vals, std::uint32_t n, std::uint32_t arity,
                    std::uint32_t arg) {
  std::size_t stride = 1;
  for (std::uint32_t j = arity - 1; j > arg; --j) stride *= n;
  Vals out(vals.size());
  for (std::size_t idx = 0; idx < vals.size(); ++idx) {
    std::uint32_t digit = static_cast<std::uint32_t>(idx / stride % n);
    std::size_t up =
        digit + 1 < n ? idx + stride
                      : idx - static_cast<std::size_t>(n - 1) * stride;
    out[idx] = static_cast<Elem>((vals[up] + n - vals[idx]) % n);
  }
  return out;
}

GenInfo analyze_generator(const OpTable& g, const OpTable& add) {
  GenInfo info{g, 0, false, false, {}, {}};
  info.table_hash = fnv1a(kFnvOffset, g.values().data(), g.size());
  info.is_add = g == add;
  info.compatible = is_compatible(g);
  std::uint32_t n = g.n();
  for (std::uint32_t arg = 0; arg < g.arity(); ++arg) {
    Vals d = g.values();
    std::uint32_t t = 0;
    while (!all_zero(d)) {
      d = arg_difference(d, n, g.arity(), arg);
      ++t;
      if (t > 512) throw Error("difference order runaway");
    }
    info.vanish.push_back(std::max<std::uint32_t>(t, 1));
    std::size_t stride = 1;
    for (std::uint32_t j = g.arity() - 1; j > arg; --j) stride *= n;
    std::uint32_t q = n;
    for (std::uint32_t cand : divisors(n)) {
      if (cand == n) break;
      bool inv = true;
      for (std::size_t idx = 0; idx < g.size() && inv; ++idx) {
        std::uint32_t digit = static_cast<std::uint32_t>(idx / stride % n);
        std::size_t base = idx - static_cast<std::size_t>(digit) * stride;
        std::size_t other =
            base + static_cast<std::size_t>((digit + cand) % n) * stride;
        if (g[idx] != g[other]) inv = false;
      }
      if (inv) {
        q = cand;
        break;
      }
    }
    info.detq.push_back(q);
  }
  return info;
}

void run_chunks(
    std::size_t count, int threads,
    const std::function<void(std::size_t, std::size_t, std::size_t)>& fn) {
  std::size_t nchunks =
      threads > 1 && count >= 64 ? static_cast<std::size_t>(threads) : 1;
  if (nchunks == 1) {
    fn(0, 0, count);
    return;
  }
  std::vector<std::thread> pool;
  for (std::size_t c = 0; c < nchunks; ++c) {
    std::size_t b = count * c / nchunks;
    std::size_t e = count * (c + 1) / nchunks;
    pool.emplace_back([&fn, c, b, e] { fn(c, b, e); });
  }
  for (auto& t : pool) t.join();
}

// Direction multisets over a class list: sorted index sequences w/ repetition.
using MultiSet = std::vector<std::uint16_t>;

// Number of multisets of size <= max_size over nclasses items, saturating.
std::uint64_t multiset_count(std::size_t nclasses, std::uint32_t max_size,
                             std::uint64_t cap) {
  std::uint64_t total = 0;
  std::uint64_t layer = 1;  // C(nclasses + s - 1, s)
  for (std::uint32_t s = 0;; ++s) {
    total += layer;
    if (total > cap) return cap + 1;
    if (s == max_size) break;
    if (nclasses == 0) break;
    long double next = static_cast<long double>(layer) * (nclasses + s) /
                       (s + 1);
    if (next > static_cast<long double>(cap)) return cap + 1;
    layer = layer * (nclasses + s) / (s + 1);
  }
  return total;
}

void enum_multisets(std::size_t nclasses, std::uint32_t max_size,
                    std::vector<MultiSet>& out) {
  out.clear();
  out.push_back({});
  MultiSet cur;
  std::function<void(std::size_t)> rec = [&](std::size_t start) {
    if (cur.size() >= max_size) return;
    for (std::size_t i = start; i < nclasses; ++i) {
      cur.push_back(static_cast<std::uint16_t>(i));
      out.push_back(cur);
      rec(i);
      cur.pop_back();
    }
  };
  if (max_size > 0) rec(0);
}

std::uint32_t binomial(std::uint32_t m, std::uint32_t j) {
  static const auto table = [] {
    std::array<std::array<std::uint64_t, 17>, 17> t{};
    for (std::uint32_t a = 0; a < 17; ++a) {
      t[a][0] = 1;
      for (std::uint32_t b = 1; b <= a; ++b)
        t[a][b] = t[a - 1][b - 1] + (b <= a - 1 ? t[a - 1][b] : 0);
    }
    return t;
  }();
  return static_cast<std::uint32_t>(table[m][j]);
}

struct KeyHash {
  std::size_t operator()(const PackedKey& k) const {
    return PackedKeyHash{}(k);
  }
};

}  // namespace

class ClosureDriver {
 public:
  ClosureDriver(const CloneSpec& spec, std::uint32_t m,
                const ClosureOptions& opts)
      : spec_(spec), m_(m), opts_(opts), n_(spec.modulus.n()),
        len_(table_size(n_, m)) {
    spec_.validate();
    OpTable add = ring_add(spec_.modulus);
    for (const OpTable& g : spec_.generators)
      gens_.push_back(analyze_generator(g, add));
    has_add_ = std::any_of(gens_.begin(), gens_.end(),
                           [](const GenInfo& g) { return g.is_add; });
    all_gens_compatible_ = std::all_of(
        gens_.begin(), gens_.end(),
        [](const GenInfo& g) { return g.compatible; });
  }

  void set_target(const OpTable& f) { target_ = f.values(); }
  bool target_found() const { return target_found_; }

  ClosurePart run() {
    if (has_add_)
      run_span();
    else
      run_explicit();
    ClosurePart part;
    part.mod_ = spec_.modulus;
    part.arity_ = m_;
    part.complete_ = complete_;
    part.certificate_ = certificate_;
    part.rounds_ = rounds_;
    part.gen_names_ = spec_.gen_names;
    if (has_add_) {
      part.size_ = basis_->span_size();
      part.basis_ = std::move(basis_);
    } else {
      std::sort(explicit_keys_.begin(), explicit_keys_.end());
      FactoredCount sz;
      sz.mul_small(static_cast<std::uint32_t>(explicit_keys_.size()));
      part.size_ = sz;
      part.explicit_keys_ = std::move(explicit_keys_);
    }
    return part;
  }

 private:
  std::vector<Vals> seed_tables() const {
    std::vector<Vals> seeds;
    for (std::uint32_t i = 1; i <= m_; ++i)
      seeds.push_back(projection(spec_.modulus, m_, i).values());
    if (spec_.include_all_constants)
      for (std::uint32_t c = 0; c < n_; ++c)
        seeds.push_back(constant(spec_.modulus, m_, c).values());
    return seeds;
  }

  bool charge(std::uint64_t units) {
    work_ += units;
    return work_ <= opts_.work_budget;
  }

  // ---- span mode ----------------------------------------------------------

  void run_span() {
    basis_.emplace(n_, len_);
    for (const Vals& s : seed_tables()) basis_->insert(s);
    if (check_target_span()) return;
    bool over_budget = false;
    for (;;) {
      ++rounds_;
      bool grew = sample_pass();
      if (target_found_) return;
      if (ceiling_check()) {
        complete_ = true;
        certificate_ = "compatible_ceiling";
        break;
      }
      if (work_ > opts_.work_budget) {
        over_budget = true;
        break;
      }
      if (grew) continue;
      std::size_t escapes = obligation_pass(over_budget);
      if (target_found_) return;
      if (over_budget) break;
      if (escapes == 0) {
        complete_ = true;
        certificate_ = "difference_obligations";
        break;
      }
      if (ceiling_check()) {
        complete_ = true;
        certificate_ = "compatible_ceiling";
        break;
      }
    }
    if (over_budget) {
      complete_ = false;
      certificate_ = "budget_exhausted";
    }
  }

  bool check_target_span() {
    if (target_ && !target_found_ && basis_->contains(*target_))
      target_found_ = true;
    return target_found_;
  }

  // Applies each generator to deterministic span samples and to basis-row
  // tuples (content-fingerprinted so nothing is reprocessed), inserting
  // whatever escapes the span. Per-generator RNG streams keep the result
  // independent of generator order.
  bool sample_pass() {
    const std::size_t r = basis_->rank();
    if (r == 0) return false;
    std::vector<Vals> batch;
    Vals out(len_);
    for (const GenInfo& gen : gens_) {
      if (gen.is_add) continue;
      std::uint32_t l = gen.table.arity();
      std::vector<const Vals*> args(l);
      std::vector<Vals> hold(l, Vals(len_, 0));
      std::uint64_t st = 0x5eedull ^ rounds_ ^ basis_->content_hash() ^
                         gen.table_hash;
      for (std::size_t s = 0; s < 96; ++s) {
        for (std::uint32_t j = 0; j < l; ++j) {
          hold[j].assign(len_, 0);
          if (s > 0) {
            for (const auto& row : basis_->rows()) {
              std::uint32_t c = rng_below(st, n_ / row.d);
              if (c)
                for (std::size_t i = 0; i < len_; ++i)
                  hold[j][i] =
                      static_cast<Elem>((hold[j][i] + c * row.v[i]) % n_);
            }
          }
          args[j] = &hold[j];
        }
        apply_gen(gen.table, args, out);
        if (!charge(len_)) return false;
        if (!basis_->contains(out)) batch.push_back(out);
      }
      std::uint64_t tuples = 1;
      for (std::uint32_t j = 0; j < l && tuples <= 65536; ++j) tuples *= r;
      if (tuples <= 65536) {
        std::vector<std::size_t> ix(l, 0);
        for (std::uint64_t t = 0; t < tuples; ++t) {
          std::uint64_t fp = gen.table_hash;
          for (std::uint32_t j = 0; j < l; ++j) {
            const auto& row = basis_->rows()[ix[j]];
            fp = fnv1a(fp, row.v.data(), row.v.size());
            args[j] = &row.v;
          }
          if (seen_tuples_.insert(fp).second) {
            apply_gen(gen.table, args, out);
            if (!charge(len_)) return false;
            if (!basis_->contains(out)) batch.push_back(out);
          }
          for (std::uint32_t j = l; j-- > 0;) {
            if (++ix[j] < r) break;
            ix[j] = 0;
          }
        }
      }
    }
    bool grew = false;
    for (const Vals& v : batch) grew |= basis_->insert(v);
    if (grew) check_target_span();
    return grew;
  }

  // Exact sandwich certificate: all generators compatible, every basis row
  // compatible (the compatible part is itself closed under addition, so row
  // checks cover the whole span) and the span size equals the compatible
  // count. Then span == compatible part == the closure.
  bool ceiling_check() {
    if (!all_gens_compatible_) return false;
    if (!(basis_->span_size() == compatible_count(n_, m_))) return false;
    for (const auto& row : basis_->rows())
      if (!is_compatible(OpTable(spec_.modulus, m_, row.v))) return false;
    return true;
  }

  // Evaluates the finite-difference obligation forms of every generator over
  // the current basis and inserts escapes. Zero escapes certifies the fixed
  // point: by the Newton expansion over basis coefficients, every generator
  // application on span tuples is an integer combination of these forms.
  std::size_t obligation_pass(bool& over_budget) {
    std::vector<Vals> escapes;
    for (const GenInfo& gen : gens_) {
      if (gen.is_add) continue;
      std::uint32_t l = gen.table.arity();
      for (std::uint32_t a = 0; a < l; ++a) {
        if (gen.vanish[a] > 16) {
          over_budget = true;  // cannot certify this generator
          return 0;
        }
      }
      std::vector<std::vector<Vals>> classes(l);
      for (std::uint32_t a = 0; a < l; ++a) {
        std::uint32_t q = gen.detq[a];
        std::vector<Vals> cl;
        for (const auto& row : basis_->rows()) {
          Vals c(len_);
          bool nz = false;
          for (std::size_t i = 0; i < len_; ++i) {
            c[i] = static_cast<Elem>(row.v[i] % q);
            nz |= c[i] != 0;
          }
          if (nz) cl.push_back(std::move(c));
        }
        std::sort(cl.begin(), cl.end());
        cl.erase(std::unique(cl.begin(), cl.end()), cl.end());
        classes[a] = std::move(cl);
      }
      std::uint64_t total = 1;
      for (std::uint32_t a = 0; a < l; ++a) {
        std::uint64_t c = multiset_count(classes[a].size(), gen.vanish[a] - 1,
                                         2'000'000);
        if (c > 2'000'000 || total > 200'000'000 / std::max<std::uint64_t>(c, 1)) {
          over_budget = true;  // obligation space too large to certify
          return 0;
        }
        total *= c;
      }
      if (!charge(total)) {
        over_budget = true;
        return 0;
      }
      std::vector<std::vector<MultiSet>> slot_sets(l);
      for (std::uint32_t a = 0; a < l; ++a)
        enum_multisets(classes[a].size(), gen.vanish[a] - 1, slot_sets[a]);
      std::size_t outer = slot_sets[0].size();
      std::size_t nchunks = std::max(1, opts_.threads);
      std::vector<std::vector<Vals>> chunk_escapes(nchunks);
      std::vector<std::vector<std::uint64_t>> chunk_memo(nchunks);
      std::atomic<std::uint64_t> pass_work{0};
      run_chunks(outer, opts_.threads,
                 [&](std::size_t chunk, std::size_t b, std::size_t e) {
        std::unordered_set<PackedKey, KeyHash> seen_vals;
        Vals form(len_), tmp(len_);
        std::vector<Vals> slot_arg(l, Vals(len_, 0));
        std::vector<std::size_t> pick(l, 0);
        std::uint64_t local_work = 0;
        std::function<void(std::uint32_t)> rec = [&](std::uint32_t slot) {
          if (slot == l) {
            std::vector<const MultiSet*> sel(l);
            for (std::uint32_t a = 0; a < l; ++a)
              sel[a] = &slot_sets[a][pick[a]];
            std::uint64_t fp = gen.table_hash ^ 0x0b1153ull;
            for (std::uint32_t a = 0; a < l; ++a) {
              fp = fnv1a(fp, reinterpret_cast<const std::uint8_t*>("/"), 1);
              for (std::uint16_t ix : *sel[a])
                fp = fnv1a(fp, classes[a][ix].data(), len_);
            }
            if (form_memo_.count(fp)) return;  // verified in an earlier pass
            local_work += eval_form(gen, classes, sel, form, tmp, slot_arg);
            if (!all_zero(form)) {
              PackedKey k = pack_values(form, n_);
              if (seen_vals.insert(k).second && !basis_->contains(form)) {
                chunk_escapes[chunk].push_back(form);
                return;  // re-verified next pass once inserted
              }
            }
            chunk_memo[chunk].push_back(fp);
            return;
          }
          for (std::size_t i = 0; i < slot_sets[slot].size(); ++i) {
            pick[slot] = i;
            rec(slot + 1);
          }
        };
        for (std::size_t o = b; o < e; ++o) {
          pick[0] = o;
          rec(1);
        }
        pass_work += local_work;
      });
      if (!charge(pass_work.load())) {
        over_budget = true;
        return 0;
      }
      for (const auto& cm : chunk_memo)
        form_memo_.insert(cm.begin(), cm.end());
      for (const auto& ce : chunk_escapes)
        for (const Vals& v : ce) escapes.push_back(v);
    }
    std::size_t grew = 0;
    for (const Vals& v : escapes)
      if (basis_->insert(v)) ++grew;
    if (grew) check_target_span();
    return grew;
  }

  // Iterated difference of the pointwise-lifted generator with the selected
  // direction multisets per slot, at the all-zero base point:
  //   sum over sub-multiplicities j: (-1)^(|m|-|j|) * prod C(m_d, j_d)
  //       * g(sum_d j_d * dir_d per slot).
  std::uint64_t eval_form(const GenInfo& gen,
                          const std::vector<std::vector<Vals>>& classes,
                          const std::vector<const MultiSet*>& sel, Vals& form,
                          Vals& tmp, std::vector<Vals>& slot_arg) {
    std::uint32_t l = gen.table.arity();
    struct Dir {
      std::uint32_t slot;
      const Vals* dir;
      std::uint32_t mult;
    };
    std::vector<Dir> dirs;
    for (std::uint32_t a = 0; a < l; ++a) {
      const MultiSet& ms = *sel[a];
      std::size_t i = 0;
      while (i < ms.size()) {
        std::size_t j = i;
        while (j < ms.size() && ms[j] == ms[i]) ++j;
        dirs.push_back(
            {a, &classes[a][ms[i]], static_cast<std::uint32_t>(j - i)});
        i = j;
      }
    }
    std::fill(form.begin(), form.end(), 0);
    for (std::uint32_t a = 0; a < l; ++a)
      std::fill(slot_arg[a].begin(), slot_arg[a].end(), 0);
    std::vector<std::uint32_t> j(dirs.size(), 0);
    std::vector<const Vals*> args(l);
    for (std::uint32_t a = 0; a < l; ++a) args[a] = &slot_arg[a];
    std::uint64_t combos = 0;
    for (;;) {
      ++combos;
      std::uint64_t coeff = 1;
      std::uint32_t parity = 0;
      for (std::size_t d = 0; d < dirs.size(); ++d) {
        coeff = coeff * (binomial(dirs[d].mult, j[d]) % n_) % n_;
        parity += dirs[d].mult - j[d];
      }
      if (coeff % n_ != 0) {
        apply_gen(gen.table, args, tmp);
        std::uint32_t c = static_cast<std::uint32_t>(coeff % n_);
        if (parity & 1) c = (n_ - c) % n_;
        for (std::size_t i = 0; i < len_; ++i)
          form[i] = static_cast<Elem>((form[i] + c * tmp[i]) % n_);
      }
      // odometer with in-place slot argument updates
      std::size_t d = dirs.size();
      bool done = true;
      while (d-- > 0) {
        Vals& acc = slot_arg[dirs[d].slot];
        const Vals& dv = *dirs[d].dir;
        if (++j[d] <= dirs[d].mult) {
          for (std::size_t i = 0; i < len_; ++i)
            acc[i] = static_cast<Elem>((acc[i] + dv[i]) % n_);
          done = false;
          break;
        }
        j[d] = 0;
        std::uint32_t back = (n_ - dirs[d].mult % n_) % n_;
        if (back)
          for (std::size_t i = 0; i < len_; ++i)
            acc[i] = static_cast<Elem>((acc[i] + back * dv[i]) % n_);
      }
      if (done) break;
    }
    return combos * len_;
  }

  // ---- explicit mode --------------------------------------------------------

  void run_explicit() {
    std::vector<Vals> members;
    std::unordered_set<PackedKey, KeyHash> index;
    auto push = [&](const Vals& v) {
      PackedKey k = pack_values(v, n_);
      if (index.insert(k).second) {
        members.push_back(v);
        if (target_ && !target_found_ && v == *target_) target_found_ = true;
        return true;
      }
      return false;
    };
    for (const Vals& s : seed_tables()) push(s);
    std::size_t frontier = 0;
    bool over = false;
    while (!over && !target_found_) {
      ++rounds_;
      std::size_t end = members.size();
      if (frontier == end) {
        complete_ = true;
        certificate_ = "fixed_point";
        break;
      }
      Vals out(len_);
      for (const GenInfo& gen : gens_) {
        std::uint32_t l = gen.table.arity();
        std::vector<std::size_t> ix(l, 0);
        std::vector<const Vals*> args(l);
        std::uint64_t tuples = 1;
        bool too_many = false;
        for (std::uint32_t j = 0; j < l; ++j) {
          if (tuples > opts_.work_budget / std::max<std::size_t>(end, 1)) {
            too_many = true;
            break;
          }
          tuples *= end;
        }
        if (too_many) {
          over = true;
          break;
        }
        for (std::uint64_t t = 0; t < tuples && !over && !target_found_; ++t) {
          bool fresh = false;
          for (std::uint32_t j = 0; j < l; ++j) fresh |= ix[j] >= frontier;
          if (fresh) {
            for (std::uint32_t j = 0; j < l; ++j) args[j] = &members[ix[j]];
            apply_gen(gen.table, args, out);
            if (!charge(len_)) over = true;
            push(out);
            if (members.size() > opts_.member_budget) over = true;
          }
          for (std::uint32_t j = l; j-- > 0;) {
            if (++ix[j] < end) break;
            ix[j] = 0;
          }
        }
        if (over) break;
      }
      frontier = end;
    }
    if (over) certificate_ = "budget_exhausted";
    explicit_keys_.clear();
    explicit_keys_.reserve(members.size());
    for (const Vals& v : members) explicit_keys_.push_back(pack_values(v, n_));
  }

  CloneSpec spec_;
  std::uint32_t m_;
  ClosureOptions opts_;
  std::uint32_t n_;
  std::size_t len_;
  std::vector<GenInfo> gens_;
  bool has_add_ = false;
  bool all_gens_compatible_ = false;
  std::optional<HowellBasis> basis_;
  std::vector<PackedKey> explicit_keys_;
  std::unordered_set<std::uint64_t> seen_tuples_;
  std::unordered_set<std::uint64_t> form_memo_;
  std::optional<Vals> target_;
  bool target_found_ = false;
  bool complete_ = false;
  std::string certificate_ = "none";
  std::uint64_t rounds_ = 0;
  std::uint64_t work_ = 0;
};

ClosurePart closure_part(const CloneSpec& spec, std::uint32_t m,
                         const ClosureOptions& opts) {
  ClosureDriver d(spec, m, opts);
  return d.run();
}

bool ClosurePart::contains(const OpTable& f) const {
  if (!(f.modulus() == mod_) || f.arity() != arity_)
    throw ModulusMismatchError("membership query across modulus or arity");
  if (basis_) return basis_->contains(f.values());
  PackedKey k = pack_table(f);
  return std::binary_search(explicit_keys_.begin(), explicit_keys_.end(), k);
}

std::vector<PackedKey> ClosurePart::sorted_keys(std::uint64_t budget) const {
  if (!basis_) {
    if (explicit_keys_.size() > budget)
      throw BudgetExceededError("part larger than enumeration budget");
    return explicit_keys_;
  }
  if (!size_.fits_u64() || size_.as_u64() > budget)
    throw BudgetExceededError("part of size " + size_.str() +
                              " exceeds enumeration budget");
  std::vector<PackedKey> keys;
  keys.reserve(size_.as_u64());
  bool done = basis_->enumerate(budget, [&](const std::vector<Elem>& v) {
    keys.push_back(pack_values(v, mod_.n()));
  });
  if (!done) throw BudgetExceededError("enumeration budget exhausted");
  std::sort(keys.begin(), keys.end());
  return keys;
}

std::uint64_t ClosurePart::members_hash(std::uint64_t budget) const {
  std::uint64_t h = kFnvOffset;
  for (const PackedKey& k : sorted_keys(budget))
    h = fnv1a(h, k.bytes.data(), k.bytes.size());
  return h;
}

bool member(const CloneSpec& spec, const OpTable& f,
            const ClosureOptions& opts) {
  if (!(f.modulus() == spec.modulus))
    throw ModulusMismatchError("membership query across moduli");
  ClosureDriver d(spec, f.arity(), opts);
  d.set_target(f);
  ClosurePart part = d.run();
  if (d.target_found()) return true;
  if (!part.complete())
    throw IncompleteError("closure budget exhausted before membership decided");
  return false;
}

bool includes(const CloneSpec& big, const CloneSpec& small,
              const ClosureOptions& opts) {
  if (!(big.modulus == small.modulus))
    throw ModulusMismatchError("clone inclusion across moduli");
  if (small.include_all_constants && !big.include_all_constants) {
    for (std::uint32_t c = 0; c < small.modulus.n(); ++c)
      if (!member(big, constant(small.modulus, 1, c), opts)) return false;
  }
  for (const OpTable& g : small.generators)
    if (!member(big, g, opts)) return false;
  return true;
}

}  // namespace cloneforge
