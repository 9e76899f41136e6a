#pragma once

#include <string>
#include <vector>

#include "json.hpp"

namespace beda {

// One compact JSON document per line, '\n'-terminated.
void write_jsonl(const std::string& path, const std::vector<nlohmann::json>& docs);
void append_jsonl(std::ostream& out, const nlohmann::json& doc);

// Blank lines are skipped. A line that does not parse is a LoadError with
// its 1-based line number; a missing file is a DataError.
std::vector<nlohmann::json> read_jsonl(const std::string& path);

}  // namespace beda
