#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

namespace beda {

using Rng = std::mt19937_64;

// SplitMix64 finalizer; used to derive independent seeds from tuples.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t a, std::uint64_t b) {
  return mix64(mix64(a) ^ (b + 0x632be59bd9b4e019ULL));
}

constexpr std::uint64_t derive_seed(std::uint64_t a, std::uint64_t b,
                                    std::uint64_t c) {
  return derive_seed(derive_seed(a, b), c);
}

// 64-bit FNV-1a; stable across platforms and runs.
std::uint64_t fnv1a64(std::string_view bytes);
std::string hex64(std::uint64_t value);

// Number of whitespace-separated tokens.
std::size_t whitespace_token_count(std::string_view text);

std::string to_lower(std::string_view text);
std::string trim(std::string_view text);
std::vector<std::string> split_lines(std::string_view text);
std::string join(const std::vector<std::string>& parts, std::string_view sep);

// "a" or "an" for a noun phrase, judged by its first letter.
std::string indefinite_article(std::string_view noun_phrase);

// Uniform integer in [0, n). Uses rejection sampling on the raw engine
// output so draws do not depend on the standard library's distributions.
std::uint64_t uniform_index(Rng& rng, std::uint64_t n);
double uniform_unit(Rng& rng);

}  // namespace beda
