#include <doctest.h>

#include <cstdlib>
#include <sys/wait.h>

#include "beda/harness/records.hpp"
#include "support.hpp"

using namespace beda;

namespace {

int cli(const std::string& args) {
  const std::string cmd = std::string(BEDA_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::size_t line_count(const std::string& path) {
  const auto text = test::read_file(path);
  return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n'));
}

}  // namespace

TEST_CASE("argument errors exit with 2") {
  CHECK(cli("") == 2);
  CHECK(cli("frobnicate") == 2);
  CHECK(cli("run") == 2);
  CHECK(cli("gen-dataset ckbg --out /dev/null") == 2);
  CHECK(cli("--help") == 0);
}

TEST_CASE("bad configs exit with 2") {
  test::TempDir dir("cli_cfg");
  CHECK(cli("run --config " + dir.file("nope.json")) == 2);
  test::write_file(dir.file("bad.json"), R"({"game": "ckbg", "method": "beda", "estimator": "none"})");
  CHECK(cli("run --config " + dir.file("bad.json")) == 2);
  test::write_file(dir.file("unknown.json"), R"({"game": "ckbg", "shoes": 1})");
  CHECK(cli("run --config " + dir.file("unknown.json")) == 2);
  CHECK(cli("gen-dataset ckbg --n 3 --distribution fixed:x --out " + dir.file("d.jsonl")) == 2);
}

TEST_CASE("dataset, run, eval, emit") {
  test::TempDir dir("cli_flow");
  CHECK(cli("gen-dataset ckbg --n 4 --seed 2 --out " + dir.file("ckbg.jsonl")) == 0);
  CHECK(line_count(dir.file("ckbg.jsonl")) == 4);
  CHECK(cli("gen-dataset mf --n 3 --out " + dir.file("mf.jsonl")) == 0);
  CHECK(line_count(dir.file("mf.jsonl")) == 3);

  test::write_file(dir.file("cfg.json"), R"({"game": "mf", "method": "beda", "estimator": "oracle", "n_episodes": 3,
    "repetitions": 1, "seed": 4, "dataset": ")" + dir.file("mf.jsonl") + R"(", "output": ")" +
                                             dir.file("rec.jsonl") + "\"}");
  CHECK(cli("run --config " + dir.file("cfg.json")) == 0);
  CHECK(harness::load_records(dir.file("rec.jsonl")).size() == 3);
  CHECK(cli("eval --records " + dir.file("rec.jsonl")) == 0);
  CHECK(cli("emit-training-data --records " + dir.file("rec.jsonl") + " --out " + dir.file("train.jsonl")) == 0);
  CHECK(line_count(dir.file("train.jsonl")) > 0);
}

TEST_CASE("eval of nothing exits with 4") {
  test::TempDir dir("cli_empty");
  test::write_file(dir.file("empty.jsonl"), "");
  CHECK(cli("eval --records " + dir.file("empty.jsonl")) == 4);
  test::write_file(dir.file("junk.jsonl"), "{\"a\":\n");
  CHECK(cli("eval --records " + dir.file("junk.jsonl")) == 2);
}
