#include "cloneforge/reduction.hpp"

#include <numeric>

namespace cloneforge {

ReductionContext::ReductionContext(std::uint32_t pp, std::uint32_t kk)
    : p(pp), k(kk), big(Modulus::prime_power(pp, kk)),
      small(Modulus::prime_power(pp, kk - 1)) {
  if (kk < 2) throw NotPrimePowerError("reduction needs exponent k >= 2");
}

OpTable m_indicator(const ReductionContext& ctx, std::uint32_t arity) {
  const std::uint32_t n = ctx.big.n();
  std::uint32_t alpha = units_product(ctx.big);
  std::uint32_t inv_alpha = inv_mod(alpha, n);
  std::uint32_t coef = 1;
  for (std::uint32_t i = 0; i < arity; ++i)
    coef = static_cast<std::uint32_t>(
        static_cast<std::uint64_t>(coef) * inv_alpha % n);
  // unary factor u(x) = prod over non-multiples c of (x - c)
  std::vector<std::uint32_t> unary(n);
  for (std::uint32_t x = 0; x < n; ++x) {
    std::uint64_t acc = 1;
    for (std::uint32_t c = 0; c < n; ++c)
      if (c % ctx.p != 0) acc = acc * ((x + n - c) % n) % n;
    unary[x] = static_cast<std::uint32_t>(acc);
  }
  std::vector<Elem> vals(table_size(n, arity));
  for_each_tuple(n, arity, [&](std::span<const Elem> x, std::size_t idx) {
    std::uint64_t acc = coef;
    bool in_m = true;
    for (Elem xi : x) {
      acc = acc * unary[xi] % n;
      in_m &= xi % ctx.p == 0;
    }
    if (acc != (in_m ? 1u : 0u))
      throw Error("indicator closed form disagrees with the set definition");
    vals[idx] = static_cast<Elem>(acc);
  });
  return OpTable(ctx.big, arity, std::move(vals));
}

bool verify_decomposition(const ReductionContext& ctx, const OpTable& f) {
  if (!(f.modulus() == ctx.big))
    throw ModulusMismatchError("decomposition check on the wrong ring");
  const std::uint32_t n = ctx.big.n();
  OpTable g = m_indicator(ctx, f.arity());
  bool ok = true;
  Tuple shifted(f.arity());
  for_each_tuple(n, f.arity(), [&](std::span<const Elem> x, std::size_t idx) {
    if (!ok) return;
    std::uint64_t sum = 0;
    Tuple c(f.arity(), 0);
    for (;;) {
      for (std::uint32_t j = 0; j < f.arity(); ++j)
        shifted[j] = static_cast<Elem>((x[j] + n - c[j]) % n);
      sum = (sum + static_cast<std::uint64_t>(f[idx]) *
                       g[flat_index(n, shifted)]) % n;
      std::uint32_t j = f.arity();
      bool done = true;
      while (j-- > 0) {
        if (++c[j] < ctx.p) {
          done = false;
          break;
        }
        c[j] = 0;
      }
      if (done) break;
    }
    if (sum != f[idx]) ok = false;
  });
  return ok;
}

OpTable restrict_to_small(const ReductionContext& ctx, const OpTable& f) {
  if (!(f.modulus() == ctx.big))
    throw ModulusMismatchError("restriction from the wrong ring");
  if (!preserves_m_set(f))
    throw DoesNotPreserveMError("operation does not preserve M");
  const std::uint32_t n = ctx.big.n();
  const std::uint32_t msize = ctx.m_size();
  std::vector<Elem> vals(table_size(msize, f.arity()));
  Tuple x(f.arity());
  for_each_tuple(msize, f.arity(), [&](std::span<const Elem> l, std::size_t idx) {
    for (std::uint32_t j = 0; j < f.arity(); ++j)
      x[j] = static_cast<Elem>(l[j] * ctx.p);
    vals[idx] = static_cast<Elem>(f[flat_index(n, x)] / ctx.p);
  });
  return OpTable(ctx.small, f.arity(), std::move(vals));
}

OpTable star_lift(const ReductionContext& ctx, const OpTable& h) {
  if (!(h.modulus() == ctx.small))
    throw ModulusMismatchError("star lift from the wrong ring");
  const std::uint32_t n = ctx.big.n();
  std::vector<Elem> vals(table_size(n, h.arity()), 0);
  Tuple l(h.arity());
  for_each_tuple(n, h.arity(), [&](std::span<const Elem> x, std::size_t idx) {
    for (Elem xi : x)
      if (xi % ctx.p != 0) return;
    for (std::uint32_t j = 0; j < h.arity(); ++j)
      l[j] = static_cast<Elem>(x[j] / ctx.p);
    vals[idx] = static_cast<Elem>(h[flat_index(ctx.small.n(), l)] * ctx.p);
  });
  return OpTable(ctx.big, h.arity(), std::move(vals));
}

std::pair<bool, bool> star_compatibility_check(const ReductionContext& ctx,
                                               const OpTable& h) {
  bool small_side = is_compatible(h);
  // M side, checked independently on the star image: congruences mod
  // p^2..p^(k-1) restricted to M (block representative criterion).
  OpTable f = star_lift(ctx, h);
  const std::uint32_t n = ctx.big.n();
  const std::uint32_t msize = ctx.m_size();
  bool m_side = true;
  std::uint32_t pj = ctx.p;
  for (std::uint32_t j = 2; j <= ctx.k - 1; ++j) {
    pj *= ctx.p;
    Tuple x(h.arity()), rep(h.arity());
    for_each_tuple(msize, h.arity(),
                   [&](std::span<const Elem> l, std::size_t) {
      if (!m_side) return;
      for (std::uint32_t t = 0; t < h.arity(); ++t) {
        x[t] = static_cast<Elem>(l[t] * ctx.p);
        rep[t] = static_cast<Elem>(x[t] % pj);  // stays a multiple of p
      }
      if (f[flat_index(n, x)] % pj != f[flat_index(n, rep)] % pj)
        m_side = false;
    });
  }
  return {small_side, m_side};
}

bool in_ck(const ReductionContext& ctx, const OpTable& f,
           const CloneSpec& k_spec, const ClosureOptions& opts) {
  if (!(f.modulus() == ctx.big))
    throw ModulusMismatchError("C(K) membership on the wrong ring");
  if (!(k_spec.modulus == ctx.small))
    throw ModulusMismatchError("K must live on the small ring");
  if (f.size() > (1u << 16))
    throw InfeasibleParametersError(
        "shift enumeration needs p^(k*arity) within desk scale");
  if (!is_compatible(f)) return false;
  ClosurePart part = closure_part(k_spec, f.arity(), opts);
  const std::uint32_t n = ctx.big.n();
  bool all_in = true;
  bool undecided = false;
  for_each_tuple(n, f.arity(), [&](std::span<const Elem> a, std::size_t) {
    if (!all_in || undecided) return;
    OpTable centered =
        pointwise_sub(shift(f, a), constant(ctx.big, f.arity(), evaluate(f, a)));
    OpTable small = restrict_to_small(ctx, centered);
    if (!part.contains(small)) {
      if (part.complete())
        all_in = false;
      else
        undecided = true;
    }
  });
  if (undecided)
    throw IncompleteError("K closure incomplete; C(K) membership undecided");
  return all_in;
}

std::pair<OpTable, OpTable> split_coprime(const OpTable& f, std::uint32_t m,
                                          std::uint32_t n) {
  if (m < 2 || n < 2)
    throw NotCoprimeError("component moduli must both be >= 2");
  if (std::gcd(m, n) != 1) throw NotCoprimeError("moduli are not coprime");
  if (f.n() != m * n)
    throw ModulusMismatchError("operation does not live on Z_{mn}");
  if (!is_compatible(f))
    throw NotCompatibleError("only compatible operations split componentwise");
  CrtPair cp = crt_pair(m, n);
  const std::uint32_t mn = f.n();
  Modulus zm(m), zn(n);
  std::vector<Elem> mv(table_size(m, f.arity()));
  Tuple lifted(f.arity());
  for_each_tuple(m, f.arity(), [&](std::span<const Elem> x, std::size_t idx) {
    for (std::uint32_t j = 0; j < f.arity(); ++j)
      lifted[j] = static_cast<Elem>(
          static_cast<std::uint64_t>(cp.a) * x[j] % mn);
    mv[idx] = static_cast<Elem>(f[flat_index(mn, lifted)] % m);
  });
  std::vector<Elem> nv(table_size(n, f.arity()));
  for_each_tuple(n, f.arity(), [&](std::span<const Elem> y, std::size_t idx) {
    for (std::uint32_t j = 0; j < f.arity(); ++j)
      lifted[j] = static_cast<Elem>(
          static_cast<std::uint64_t>(cp.b) * y[j] % mn);
    nv[idx] = static_cast<Elem>(f[flat_index(mn, lifted)] % n);
  });
  return {OpTable(zm, f.arity(), std::move(mv)),
          OpTable(zn, f.arity(), std::move(nv))};
}

OpTable combine_crt(const OpTable& g, const OpTable& h) {
  std::uint32_t m = g.n(), n = h.n();
  if (std::gcd(m, n) != 1) throw NotCoprimeError("moduli are not coprime");
  if (g.arity() != h.arity())
    throw ArityMismatchError("components must share an arity");
  CrtPair cp = crt_pair(m, n);
  std::uint32_t mn = m * n;
  Modulus zmn(mn);
  std::vector<Elem> vals(table_size(mn, g.arity()));
  Tuple xm(g.arity()), xn(g.arity());
  for_each_tuple(mn, g.arity(), [&](std::span<const Elem> x, std::size_t idx) {
    for (std::uint32_t j = 0; j < g.arity(); ++j) {
      xm[j] = static_cast<Elem>(x[j] % m);
      xn[j] = static_cast<Elem>(x[j] % n);
    }
    std::uint64_t v = static_cast<std::uint64_t>(cp.a) * g[flat_index(m, xm)] +
                      static_cast<std::uint64_t>(cp.b) * h[flat_index(n, xn)];
    vals[idx] = static_cast<Elem>(v % mn);
  });
  return OpTable(zmn, g.arity(), std::move(vals));
}

}  // namespace cloneforge
