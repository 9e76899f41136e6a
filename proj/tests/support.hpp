#pragma once

#include "httplib.h"

#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "beda/epistemic/dialogue_acts.hpp"
#include "beda/epistemic/partition_model.hpp"

namespace beda::test {

inline std::string fixture_path(const std::string& relative) {
  return std::string(BEDA_TEST_FIXTURES) + "/" + relative;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
}

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("beda-" + tag + "-" + std::to_string(::getpid()) + "-" +
             std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  std::string file(const std::string& name) const { return (path_ / name).string(); }

 private:
  std::filesystem::path path_;
};

inline std::vector<std::string> state_names(std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back("s" + std::to_string(i));
  return out;
}

// Random partition of `states` into nonempty cells.
inline std::vector<std::vector<std::string>> random_cells(const std::vector<std::string>& states,
                                                          std::mt19937_64& rng) {
  std::uniform_int_distribution<std::size_t> pick(0, states.size() - 1);
  std::vector<std::size_t> label(states.size());
  for (auto& l : label) l = pick(rng);
  std::vector<std::vector<std::string>> cells(states.size());
  for (std::size_t i = 0; i < states.size(); ++i) cells[label[i]].push_back(states[i]);
  std::vector<std::vector<std::string>> out;
  for (auto& c : cells) {
    if (!c.empty()) out.push_back(std::move(c));
  }
  std::shuffle(out.begin(), out.end(), rng);
  return out;
}

// Dyadic prior (multiples of 1/1024) so every probability sum is exact.
inline std::vector<double> random_dyadic_prior(std::size_t n, std::mt19937_64& rng) {
  constexpr int kUnits = 1024;
  std::vector<int> units(n, 0);
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  std::bernoulli_distribution sparse(0.3);
  const bool point_mass = sparse(rng);
  if (point_mass) {
    units[pick(rng)] = kUnits;
  } else {
    for (int u = 0; u < kUnits; ++u) ++units[pick(rng)];
  }
  std::vector<double> prior;
  for (int u : units) prior.push_back(static_cast<double>(u) / kUnits);
  return prior;
}

inline epistemic::TwoAgentModel random_two_agent_model(std::size_t n, std::mt19937_64& rng) {
  auto states = state_names(n);
  auto cells_a = random_cells(states, rng);
  auto cells_b = random_cells(states, rng);
  return epistemic::TwoAgentModel(states, cells_a, cells_b, random_dyadic_prior(n, rng));
}

// httplib server on an ephemeral loopback port, serving until destroyed.
class LocalServer {
 public:
  explicit LocalServer(std::function<void(httplib::Server&)> setup) {
    setup(server_);
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~LocalServer() {
    server_.stop();
    if (thread_.joinable()) thread_.join();
  }
  int port() const { return port_; }
  std::string url(const std::string& path) const {
    return "http://127.0.0.1:" + std::to_string(port_) + path;
  }

 private:
  httplib::Server server_;
  int port_ = 0;
  std::thread thread_;
};

// A loopback port with nothing listening on it.
inline int closed_port() {
  LocalServer probe([](httplib::Server&) {});
  return probe.port();
}

}  // namespace beda::test
