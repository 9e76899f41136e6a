#pragma once

#include <string>
#include <vector>

namespace beda::belief {

inline const std::string kSystemSpeaker = "SYSTEM";

struct Turn {
  std::string speaker;
  std::string text;

  bool operator==(const Turn&) const = default;
};

// The C every conditional is taken over: task, background and the turns so far.
struct DialogueContext {
  std::string task;
  std::string background;
  std::vector<Turn> turns;

  // "Speaker: utterance" lines, preceded by a "Background: ..." line when
  // a background is set. Line breaks inside an utterance become spaces.
  // This is the text sent to estimators and written into training data.
  std::string render() const;

  // Inverse of render() for single-line utterances.
  static DialogueContext parse(const std::string& rendered);

  DialogueContext clipped(std::size_t drop_final_turns) const;

  bool operator==(const DialogueContext&) const = default;
};

}  // namespace beda::belief
