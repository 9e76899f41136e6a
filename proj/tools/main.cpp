#include <charconv>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "beda/errors.hpp"
#include "beda/games/scenario.hpp"
#include "beda/harness/experiment.hpp"
#include "beda/util.hpp"

namespace {

using namespace beda;

int gen_dataset(const std::string& game_name, std::size_t n, std::uint64_t seed, const std::string& out,
                const std::string& distribution) {
  const GameId game = game_from_string(game_name);
  const auto words = games::WordLists::load();
  std::vector<games::Scenario> scenarios;
  if (game == GameId::kCkbg) {
    games::ConditionCountDistribution counts;
    if (distribution == "train") {
      counts = games::ConditionCountDistribution::train_default();
    } else if (distribution.rfind("fixed:", 0) == 0) {
      std::size_t k = 0;
      const auto digits = distribution.substr(6);
      const auto [end, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), k);
      if (ec != std::errc() || end != digits.data() + digits.size() || digits.empty()) {
        throw ConfigError("bad distribution: " + distribution);
      }
      counts = games::ConditionCountDistribution::fixed(k);
    } else {
      throw ConfigError("unknown distribution: " + distribution);
    }
    auto data = games::ckbg_generate_dataset(n, counts, seed, words);
    for (auto& s : data.settings) scenarios.emplace_back(std::move(s));
    std::cout << games::to_json(data.summary).dump(2) << "\n";
  } else {
    if (n == 0) throw ConfigError("--n must be at least 1");
    for (std::size_t i = 0; i < n; ++i) scenarios.push_back(games::generate_scenario(game, derive_seed(seed, i), words));
    std::cout << "{\"scenarios\": " << n << "}\n";
  }
  games::save_dataset(out, scenarios);
  return 0;
}

int run(const std::string& config_path) {
  const auto config = harness::ExperimentConfig::load(config_path);
  const auto result = harness::run_experiment(config);
  std::cout << harness::to_json(result.report).dump(2) << "\n";
  if (result.exit_code == 4) std::cerr << "no valid episodes after exclusion; metrics undefined\n";
  if (result.exit_code == 3) std::cerr << "every episode failed on the backend\n";
  return result.exit_code;
}

int eval(const std::string& records_path) {
  const auto records = harness::load_records(records_path);
  if (records.empty()) {
    std::cerr << "no records in " << records_path << "\n";
    return 4;
  }
  const auto report = harness::compute_metrics(records);
  std::cout << harness::to_json(report).dump(2) << "\n";
  return harness::exit_code_for(report);
}

int emit(const std::string& records_path, std::size_t clip_max, std::size_t neg_ratio, const std::string& out,
         std::uint64_t seed) {
  belief::ClipPolicy clip;
  clip.drop_choices.clear();
  for (std::size_t k = 0; k <= clip_max; ++k) clip.drop_choices.push_back(k);
  const auto examples =
      harness::training_data_from_records(harness::load_records(records_path), clip, neg_ratio, seed);
  belief::write_labeled_examples(out, examples);
  std::cout << examples.size() << " examples written to " << out << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Belief-conditioned dialogue experiments"};
  app.require_subcommand(1);

  std::string game, out, distribution = "fixed:3";
  std::size_t n = 1;
  std::uint64_t seed = 0;
  auto* gen = app.add_subcommand("gen-dataset", "Generate a scenario dataset");
  gen->add_option("game", game, "ckbg, mf or casino")->required();
  gen->add_option("--n", n, "Number of scenarios")->required();
  gen->add_option("--seed", seed, "Random seed");
  gen->add_option("--out", out, "Output JSONL path")->required();
  gen->add_option("--distribution", distribution, "CKBG condition counts: fixed:<k> or train");

  std::string config_path;
  auto* run_cmd = app.add_subcommand("run", "Run an experiment");
  run_cmd->add_option("--config", config_path, "Experiment config (JSON)")->required();

  std::string records;
  auto* eval_cmd = app.add_subcommand("eval", "Recompute metrics from records");
  eval_cmd->add_option("--records", records, "Records JSONL")->required();

  std::size_t clip_max = 3, neg_ratio = 1;
  std::uint64_t emit_seed = 0;
  auto* emit_cmd = app.add_subcommand("emit-training-data", "Write labeled belief examples");
  emit_cmd->add_option("--records", records, "Records JSONL")->required();
  emit_cmd->add_option("--clip-max", clip_max, "Drop up to this many final turns");
  emit_cmd->add_option("--neg-ratio", neg_ratio, "Corrupted triples per positive");
  emit_cmd->add_option("--out", out, "Output JSONL path")->required();
  emit_cmd->add_option("--seed", emit_seed, "Random seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*gen) return gen_dataset(game, n, seed, out, distribution);
    if (*run_cmd) return run(config_path);
    if (*eval_cmd) return eval(records);
    if (*emit_cmd) return emit(records, clip_max, neg_ratio, out, emit_seed);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const TransportError& e) {
    std::cerr << "backend error: " << e.what() << "\n";
    return 3;
  } catch (const ProtocolError& e) {
    std::cerr << "backend error: " << e.what() << "\n";
    return 3;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
