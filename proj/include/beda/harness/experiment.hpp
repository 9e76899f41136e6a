#pragma once

#include <functional>
#include <string>
#include <vector>

#include "beda/belief/training_data.hpp"
#include "beda/games/scenario.hpp"
#include "beda/games/wordlists.hpp"
#include "beda/harness/config.hpp"
#include "beda/harness/metrics.hpp"
#include "beda/harness/records.hpp"

namespace beda::harness {

// Builds the generator for one role of one scenario; the default builds the
// scripted policies or the remote backend from the config.
using GeneratorFactory =
    std::function<generation::GeneratorPtr(const games::Scenario&, const std::string& role)>;

struct RunResources {
  games::WordLists words;
  std::vector<games::Scenario> dataset;  // empty: scenarios generated from the seed
  GeneratorFactory generators;           // empty: built from the config

  static RunResources from_config(const ExperimentConfig& config);
};

std::uint64_t episode_seed(std::uint64_t global_seed, std::size_t repetition, std::size_t index);

games::Scenario scenario_for(const ExperimentConfig& config, const RunResources& resources,
                             std::size_t index);

// Backend failures become an infrastructure-failed record.
EpisodeRecord run_episode(const ExperimentConfig& config, const RunResources& resources,
                          std::size_t repetition, std::size_t index, const games::Scenario& scenario);

struct ExperimentResult {
  std::vector<EpisodeRecord> records;
  MetricsReport report;
  int exit_code = 0;
};

std::string report_path(const std::string& records_path);

// n_episodes × repetitions episodes. With an output path, records are
// appended in (repetition, index) order as they complete and the report is
// written to report_path(output).
ExperimentResult run_experiment(const ExperimentConfig& config, const RunResources& resources);
ExperimentResult run_experiment(const ExperimentConfig& config);

// Re-runs a record from its scenario and seed. The config must have the
// record's fingerprint.
EpisodeRecord replay(const ExperimentConfig& config, const RunResources& resources,
                     const EpisodeRecord& record);

std::vector<belief::LabeledExample> training_data_from_records(const std::vector<EpisodeRecord>& records,
                                                               const belief::ClipPolicy& clip,
                                                               std::size_t negative_ratio, std::uint64_t seed);

}  // namespace beda::harness
