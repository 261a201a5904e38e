#pragma once

// JSON interchange for operation tables:
//   {"modulus": n, "arity": a, "values": [...]}
// with the fixed most-significant-first indexing convention. Documents with
// the wrong value count or out-of-range entries are rejected.

#include <string>

#include "cloneforge/clone.hpp"
#include "cloneforge/op_table.hpp"

namespace cloneforge {

std::string op_table_to_json(const OpTable& t);
OpTable op_table_from_json(const std::string& text);
OpTable load_op_table(const std::string& path);
void save_op_table(const OpTable& t, const std::string& path);

// Closure part export: a JSON header at <base>.json plus the member blob at
// <base>.keys, the sorted packed keys back to back. Each key occupies
// ceil(n^arity * ceil(log2 n) / 8) bytes; bit i*w+j of a key (byte (i*w+j)/8,
// position (i*w+j)%8) holds bit j of table entry i in flat-index order.
void export_closure(const ClosurePart& part, const std::string& base_path,
                    std::uint64_t budget);

struct ClosureImport {
  Modulus modulus{2};
  std::uint32_t arity = 1;
  std::vector<std::string> generator_names;
  bool complete = false;
  std::vector<PackedKey> keys;  // sorted
};

// Validates the header against the blob (count, key width, sortedness).
ClosureImport import_closure(const std::string& header_path);

}  // namespace cloneforge
