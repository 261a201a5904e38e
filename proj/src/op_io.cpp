#include "cloneforge/op_io.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace cloneforge {

std::string op_table_to_json(const OpTable& t) {
  nlohmann::json doc;
  doc["modulus"] = t.n();
  doc["arity"] = t.arity();
  doc["values"] = t.values();
  return doc.dump();
}

OpTable op_table_from_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("modulus") || !doc.contains("arity") ||
      !doc.contains("values"))
    throw ParseError("operation table needs modulus, arity, values");
  std::uint32_t n, arity;
  std::vector<std::int64_t> raw;
  try {
    n = doc["modulus"].get<std::uint32_t>();
    arity = doc["arity"].get<std::uint32_t>();
    raw = doc["values"].get<std::vector<std::int64_t>>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed operation table: ") + e.what());
  }
  if (n < 2) throw ParseError("modulus must be >= 2");
  std::vector<Elem> vals;
  vals.reserve(raw.size());
  for (std::int64_t v : raw) {
    if (v < 0 || v >= static_cast<std::int64_t>(n))
      throw ParseError("table entry out of range");
    vals.push_back(static_cast<Elem>(v));
  }
  try {
    return OpTable(Modulus(n), arity, std::move(vals));
  } catch (const Error& e) {
    throw ParseError(std::string("rejected operation table: ") + e.what());
  }
}

OpTable load_op_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return op_table_from_json(buf.str());
}

void save_op_table(const OpTable& t, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write " + path);
  out << op_table_to_json(t) << "\n";
}

void export_closure(const ClosurePart& part, const std::string& base_path,
                    std::uint64_t budget) {
  std::vector<PackedKey> keys = part.sorted_keys(budget);
  std::uint32_t w = bits_per_entry(part.modulus().n());
  std::size_t key_bytes =
      (table_size(part.modulus().n(), part.arity()) * w + 7) / 8;
  std::string blob_path = base_path + ".keys";
  {
    std::ofstream blob(blob_path, std::ios::binary);
    if (!blob) throw ParseError("cannot write " + blob_path);
    for (const PackedKey& k : keys)
      blob.write(reinterpret_cast<const char*>(k.bytes.data()),
                 static_cast<std::streamsize>(k.bytes.size()));
  }
  nlohmann::json doc;
  doc["modulus"] = part.modulus().n();
  doc["arity"] = part.arity();
  doc["generators"] = part.generator_names();
  doc["count"] = keys.size();
  doc["complete"] = part.complete();
  doc["certificate"] = part.certificate();
  doc["bits_per_entry"] = w;
  doc["key_bytes"] = key_bytes;
  doc["blob"] = blob_path;
  std::ofstream out(base_path + ".json");
  if (!out) throw ParseError("cannot write " + base_path + ".json");
  out << doc.dump(2) << "\n";
}

ClosureImport import_closure(const std::string& header_path) {
  std::ifstream in(header_path);
  if (!in) throw ParseError("cannot open " + header_path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("invalid closure header: ") + e.what());
  }
  ClosureImport imp;
  std::uint64_t count;
  std::size_t key_bytes;
  std::string blob_path;
  try {
    imp.modulus = Modulus(doc.at("modulus").get<std::uint32_t>());
    imp.arity = doc.at("arity").get<std::uint32_t>();
    imp.generator_names =
        doc.at("generators").get<std::vector<std::string>>();
    imp.complete = doc.at("complete").get<bool>();
    count = doc.at("count").get<std::uint64_t>();
    key_bytes = doc.at("key_bytes").get<std::size_t>();
    blob_path = doc.at("blob").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed closure header: ") + e.what());
  }
  std::uint32_t w = bits_per_entry(imp.modulus.n());
  std::size_t expect_bytes =
      (table_size(imp.modulus.n(), imp.arity) * w + 7) / 8;
  if (doc.at("bits_per_entry").get<std::uint32_t>() != w ||
      key_bytes != expect_bytes)
    throw ParseError("closure header key layout mismatch");
  std::ifstream blob(blob_path, std::ios::binary);
  if (!blob) throw ParseError("cannot open " + blob_path);
  blob.seekg(0, std::ios::end);
  std::uint64_t blob_size = static_cast<std::uint64_t>(blob.tellg());
  blob.seekg(0);
  if (blob_size != count * key_bytes)
    throw ParseError("member blob length disagrees with the declared count");
  imp.keys.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    PackedKey k;
    k.bytes.resize(key_bytes);
    blob.read(reinterpret_cast<char*>(k.bytes.data()),
              static_cast<std::streamsize>(key_bytes));
    if (!imp.keys.empty() && !(imp.keys.back() < k))
      throw ParseError("member blob keys are not strictly sorted");
    imp.keys.push_back(std::move(k));
  }
  return imp;
}

}  // namespace cloneforge
