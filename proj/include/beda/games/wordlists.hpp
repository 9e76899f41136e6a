#pragma once

#include <string>
#include <utility>
#include <vector>

namespace beda::games {

// $BEDA_DATA_DIR when set, else the data/ directory of the source tree.
std::string default_data_dir();

// One entry per non-empty line, trimmed. Missing or empty file: DataError.
std::vector<std::string> load_word_list(const std::string& path);

struct WordLists {
  std::vector<std::string> containers;
  std::vector<std::string> valuables;
  std::vector<std::string> decoys;
  std::vector<std::string> names;
  // MF attribute schema with the candidate values of each attribute.
  std::vector<std::pair<std::string, std::vector<std::string>>> mf_attributes;

  static WordLists load(const std::string& data_dir = default_data_dir());
};

}  // namespace beda::games
