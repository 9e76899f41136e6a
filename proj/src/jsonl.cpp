#include "beda/jsonl.hpp"

#include <fstream>

#include "beda/errors.hpp"
#include "beda/util.hpp"

namespace beda {

void append_jsonl(std::ostream& out, const nlohmann::json& doc) { out << doc.dump() << '\n'; }

void write_jsonl(const std::string& path, const std::vector<nlohmann::json>& docs) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write " + path);
  for (const auto& d : docs) append_jsonl(out, d);
  if (!out) throw DataError("write to " + path + " failed");
}

std::vector<nlohmann::json> read_jsonl(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path);
  std::vector<nlohmann::json> out;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (trim(line).empty()) continue;
    try {
      out.push_back(nlohmann::json::parse(line));
    } catch (const nlohmann::json::parse_error& e) {
      throw LoadError(path + ": " + e.what(), number);
    }
  }
  return out;
}

}  // namespace beda
