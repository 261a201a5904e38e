#pragma once

// Canonical bases for subgroups of (Z_n)^dim under entrywise addition,
// kept in reduced Howell form: one row per pivot column, pivot entries are
// unit-normalized divisors of n, every row is reduced modulo the pivot rows
// at later columns, and the span is closed under the (n/d)-shadow rows.
// The reduced form is unique per subgroup, so two bases are equal iff the
// spans are equal, independent of insertion order.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "cloneforge/counts.hpp"

namespace cloneforge {

class HowellBasis {
 public:
  struct Row {
    std::vector<std::uint8_t> v;
    std::size_t pivot = 0;
    std::uint32_t d = 1;  // pivot value, a divisor of n
  };

  HowellBasis(std::uint32_t n, std::size_t dim);

  std::uint32_t n() const { return n_; }
  std::size_t dim() const { return dim_; }
  const std::vector<Row>& rows() const { return rows_; }
  std::size_t rank() const { return rows_.size(); }

  // Adds the subgroup element generated by v; true iff the span grew.
  bool insert(std::span<const std::uint8_t> v);

  // Subtracts row multiples to clear pivot columns; the residue is zero
  // exactly when v lies in the span.
  void reduce_in_place(std::vector<std::uint8_t>& v) const;
  bool contains(std::span<const std::uint8_t> v) const;

  FactoredCount span_size() const;

  // Visits every span element once (order unspecified but deterministic).
  // Returns false when the budget was exhausted before finishing.
  bool enumerate(std::uint64_t budget,
                 const std::function<void(const std::vector<std::uint8_t>&)>&
                     fn) const;

  std::uint64_t content_hash() const;

  friend bool operator==(const HowellBasis& a, const HowellBasis& b) {
    return a.n_ == b.n_ && a.dim_ == b.dim_ && a.rows_same(b);
  }

 private:
  bool rows_same(const HowellBasis& b) const;
  void insert_worklist(std::vector<std::vector<std::uint8_t>>& work);
  void canonicalize();

  std::uint32_t n_;
  std::size_t dim_;
  std::vector<Row> rows_;  // sorted by pivot column
};

}  // namespace cloneforge
