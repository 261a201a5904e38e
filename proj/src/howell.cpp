#include "cloneforge/howell.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "cloneforge/zmod.hpp"

namespace cloneforge {

// --- FactoredCount --------------------------------------------------------

void FactoredCount::mul_prime_power(std::uint32_t p, std::uint64_t e) {
  if (e == 0) return;
  auto it = std::lower_bound(
      factors_.begin(), factors_.end(), p,
      [](const auto& f, std::uint32_t v) { return f.first < v; });
  if (it != factors_.end() && it->first == p)
    it->second += e;
  else
    factors_.insert(it, {p, e});
}

void FactoredCount::mul_small(std::uint32_t v) {
  for (const auto& pp : factorize(v)) mul_prime_power(pp.p, pp.k);
}

bool FactoredCount::fits_u64() const {
  long double log2v = 0;
  for (const auto& [p, e] : factors_)
    log2v += static_cast<long double>(e) * std::log2(static_cast<double>(p));
  return log2v < 63.5;
}

std::uint64_t FactoredCount::as_u64() const {
  std::uint64_t out = 1;
  for (const auto& [p, e] : factors_)
    for (std::uint64_t i = 0; i < e; ++i) out *= p;
  return out;
}

std::string FactoredCount::str() const {
  if (fits_u64()) return std::to_string(as_u64());
  std::string out;
  for (const auto& [p, e] : factors_) {
    if (!out.empty()) out += "*";
    out += std::to_string(p) + "^" + std::to_string(e);
  }
  return out;
}

bool operator==(const FactoredCount& a, const FactoredCount& b) {
  return a.factors_ == b.factors_;
}

// --- HowellBasis ----------------------------------------------------------

namespace {

// dst += c * src (mod n), elementwise
void add_scaled(std::vector<std::uint8_t>& dst,
                std::span<const std::uint8_t> src, std::uint32_t c,
                std::uint32_t n) {
  c %= n;
  if (c == 0) return;
  for (std::size_t i = 0; i < dst.size(); ++i)
    dst[i] = static_cast<std::uint8_t>((dst[i] + c * src[i]) % n);
}

std::size_t leading(const std::vector<std::uint8_t>& v) {
  for (std::size_t i = 0; i < v.size(); ++i)
    if (v[i] != 0) return i;
  return v.size();
}

// A unit u of Z_n with u*v == gcd(v, n) (mod n); n is tiny, scan.
std::uint32_t normalizing_unit(std::uint32_t v, std::uint32_t n) {
  std::uint32_t d = std::gcd(v, n);
  for (std::uint32_t u = 1; u < n; ++u)
    if (std::gcd(u, n) == 1 && u * v % n == d) return u;
  return 1;  // v == 0 mod n
}

}  // namespace

HowellBasis::HowellBasis(std::uint32_t n, std::size_t dim)
    : n_(n), dim_(dim) {}

void HowellBasis::reduce_in_place(std::vector<std::uint8_t>& v) const {
  for (const Row& r : rows_) {
    std::uint32_t c = v[r.pivot];
    if (c == 0) continue;
    std::uint32_t q = c / r.d;  // leaves c mod d at the pivot
    if (q) add_scaled(v, r.v, n_ - q % n_, n_);
  }
}

bool HowellBasis::contains(std::span<const std::uint8_t> v) const {
  std::vector<std::uint8_t> tmp(v.begin(), v.end());
  reduce_in_place(tmp);
  return leading(tmp) == tmp.size();
}

bool HowellBasis::insert(std::span<const std::uint8_t> v) {
  std::vector<std::uint8_t> tmp(v.begin(), v.end());
  reduce_in_place(tmp);
  if (leading(tmp) == tmp.size()) return false;
  std::vector<std::vector<std::uint8_t>> work;
  work.push_back(std::move(tmp));
  insert_worklist(work);
  canonicalize();
  return true;
}

void HowellBasis::insert_worklist(std::vector<std::vector<std::uint8_t>>& work) {
  while (!work.empty()) {
    std::vector<std::uint8_t> w = std::move(work.back());
    work.pop_back();
    for (;;) {
      reduce_in_place(w);
      std::size_t j = leading(w);
      if (j == dim_) break;
      auto it = std::lower_bound(
          rows_.begin(), rows_.end(), j,
          [](const Row& r, std::size_t col) { return r.pivot < col; });
      if (it == rows_.end() || it->pivot != j) {
        // fresh pivot column
        std::uint32_t u = normalizing_unit(w[j], n_);
        std::vector<std::uint8_t> row(dim_, 0);
        add_scaled(row, w, u, n_);
        std::uint32_t d = std::gcd(static_cast<std::uint32_t>(row[j]), n_);
        Row nr{std::move(row), j, d};
        if (d != 1) {
          // shadow: (n/d) * row starts after column j and may carry new span
          std::vector<std::uint8_t> shadow(dim_, 0);
          add_scaled(shadow, nr.v, n_ / d, n_);
          shadow[j] = 0;  // (n/d)*d == 0 mod n
          if (leading(shadow) != dim_) work.push_back(std::move(shadow));
        }
        rows_.insert(it, std::move(nr));
        break;
      }
      // pivot collision: after reduce, w[j] is a nonzero value below it->d,
      // so the column supports a smaller divisor; merge via Euclid.
      std::uint32_t c = w[j];
      std::uint32_t d0 = it->d;
      std::uint32_t g = std::gcd(c, d0);
      // x*c + y*d0 == g over the integers
      std::int64_t x0 = 1, x1 = 0, r0 = c, r1 = d0;
      while (r1 != 0) {
        std::int64_t q = r0 / r1;
        std::int64_t r2 = r0 - q * r1, x2 = x0 - q * x1;
        r0 = r1;
        r1 = r2;
        x0 = x1;
        x1 = x2;
      }
      std::int64_t y0 = (static_cast<std::int64_t>(g) -
                         x0 * static_cast<std::int64_t>(c)) /
                        static_cast<std::int64_t>(d0);
      auto to_residue = [&](std::int64_t t) {
        t %= static_cast<std::int64_t>(n_);
        if (t < 0) t += n_;
        return static_cast<std::uint32_t>(t);
      };
      std::vector<std::uint8_t> merged(dim_, 0);
      add_scaled(merged, w, to_residue(x0), n_);
      add_scaled(merged, it->v, to_residue(y0), n_);
      std::uint32_t u = normalizing_unit(merged[j], n_);
      std::vector<std::uint8_t> row(dim_, 0);
      add_scaled(row, merged, u, n_);
      std::uint32_t d = std::gcd(static_cast<std::uint32_t>(row[j]), n_);
      std::vector<std::uint8_t> old = it->v;
      it->v = std::move(row);
      it->d = d;
      if (d != 1) {
        std::vector<std::uint8_t> shadow(dim_, 0);
        add_scaled(shadow, it->v, n_ / d, n_);
        shadow[j] = 0;
        if (leading(shadow) != dim_) work.push_back(std::move(shadow));
      }
      work.push_back(std::move(old));  // re-reduce the displaced row
      // keep reducing w against the strengthened basis
    }
  }
}

void HowellBasis::canonicalize() {
  // Reduce every row against the pivot rows at later columns, ascending so
  // earlier adjustments settle before later pivots are normalized.
  for (std::size_t s = 0; s < rows_.size(); ++s) {
    for (std::size_t t = 0; t < rows_.size(); ++t) {
      if (t == s || rows_[t].pivot <= rows_[s].pivot) continue;
      std::uint32_t c = rows_[s].v[rows_[t].pivot];
      std::uint32_t q = c / rows_[t].d;
      if (q) add_scaled(rows_[s].v, rows_[t].v, n_ - q % n_, n_);
    }
  }
}

FactoredCount HowellBasis::span_size() const {
  FactoredCount out;
  for (const Row& r : rows_) out.mul_small(n_ / r.d);
  return out;
}

bool HowellBasis::enumerate(
    std::uint64_t budget,
    const std::function<void(const std::vector<std::uint8_t>&)>& fn) const {
  FactoredCount size = span_size();
  if (!size.fits_u64() || size.as_u64() > budget) return false;
  std::vector<std::uint32_t> limit(rows_.size()), coeff(rows_.size(), 0);
  for (std::size_t i = 0; i < rows_.size(); ++i) limit[i] = n_ / rows_[i].d;
  std::vector<std::uint8_t> cur(dim_, 0);
  std::uint64_t total = size.as_u64();
  for (std::uint64_t c = 0;; ++c) {
    fn(cur);
    if (c + 1 == total) break;
    // odometer with incremental updates
    std::size_t i = rows_.size();
    while (i-- > 0) {
      if (++coeff[i] < limit[i]) {
        add_scaled(cur, rows_[i].v, 1, n_);
        break;
      }
      // roll over: remove the limit-1 accumulated copies
      coeff[i] = 0;
      std::uint32_t back = (n_ - (limit[i] - 1) % n_) % n_;
      add_scaled(cur, rows_[i].v, back, n_);
    }
  }
  return true;
}

std::uint64_t HowellBasis::content_hash() const {
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&](std::uint64_t v) {
    h ^= v;
    h *= 1099511628211ull;
  };
  mix(n_);
  mix(dim_);
  for (const Row& r : rows_) {
    mix(r.pivot);
    mix(r.d);
    for (std::uint8_t b : r.v) mix(b);
  }
  return h;
}

bool HowellBasis::rows_same(const HowellBasis& b) const {
  if (rows_.size() != b.rows_.size()) return false;
  for (std::size_t i = 0; i < rows_.size(); ++i)
    if (rows_[i].pivot != b.rows_[i].pivot || rows_[i].d != b.rows_[i].d ||
        rows_[i].v != b.rows_[i].v)
      return false;
  return true;
}

}  // namespace cloneforge
