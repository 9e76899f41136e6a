#pragma once

#include <string_view>

// Fixed wording for the prompting baselines. Bump the version string
// whenever any text below changes; it is written into episode records.
namespace beda::generation::baseline_templates {

inline constexpr std::string_view kVersion = "baselines-v1";

inline constexpr std::string_view kCotInstruction =
    "Let's think step by step, then give your reply.";
inline constexpr std::string_view kReplyDelimiter = "Reply:";
inline constexpr std::string_view kCotFormatInstruction =
    "Write your reasoning first. Then write \"Reply:\" followed by the exact "
    "utterance you want to say.";

inline constexpr std::string_view kDraftHeader = "Your draft reply:";
inline constexpr std::string_view kCritiqueHeader = "Critique of the draft:";
inline constexpr std::string_view kCritiqueInstruction =
    "Review the draft reply above. Point out factual mistakes, ways it "
    "could fail the task, and what should change. Do not write a new reply.";
inline constexpr std::string_view kRevisionInstruction =
    "Rewrite the draft reply taking the critique into account. Provide the "
    "revised utterance directly.";

inline constexpr std::string_view kBeliefListHeader =
    "Belief estimates (probability the event is true for you; probability "
    "your opponent knows it):";

}  // namespace beda::generation::baseline_templates
