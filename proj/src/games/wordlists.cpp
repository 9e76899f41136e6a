#include "beda/games/wordlists.hpp"

#include <cstdlib>
#include <fstream>

#include "beda/errors.hpp"
#include "beda/util.hpp"

namespace beda::games {

std::string default_data_dir() {
  if (const char* env = std::getenv("BEDA_DATA_DIR"); env != nullptr && *env != '\0') return env;
  return BEDA_DATA_DIR;
}

std::vector<std::string> load_word_list(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open word list " + path);
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    std::string entry = trim(line);
    if (!entry.empty()) out.push_back(std::move(entry));
  }
  if (out.empty()) throw DataError("word list " + path + " is empty");
  return out;
}

WordLists WordLists::load(const std::string& data_dir) {
  const std::string dir = data_dir + "/wordlists/";
  WordLists w;
  w.containers = load_word_list(dir + "containers.txt");
  w.valuables = load_word_list(dir + "valuables.txt");
  w.decoys = load_word_list(dir + "decoys.txt");
  w.names = load_word_list(dir + "names.txt");
  for (const char* attr : {"School", "Major", "Company", "Hobby"}) {
    w.mf_attributes.emplace_back(attr, load_word_list(dir + "mf_" + to_lower(attr) + ".txt"));
  }
  return w;
}

}  // namespace beda::games
