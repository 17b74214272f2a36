#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hd0l/driver.hpp"

namespace hd0l {

/// Smallest (|u|, |v|), compared lexicographically, with |u| <= max_pre,
/// 1 <= |v| <= max_per and prefix a prefix of u·v^ω.
std::optional<UltimatelyPeriodicWord> brute_force_up_check(const Word& prefix,
                                                           std::size_t max_pre,
                                                           std::size_t max_per);

struct CorpusEntry {
  std::string name;
  HD0LSystem system;
  std::optional<UltimatelyPeriodicWord> expected; // empty: expected answer is no
};

const std::vector<CorpusEntry>& corpus();

struct CorpusResult {
  std::string name;
  DecisionOutcome outcome;
  bool pass = false;
  double seconds = 0;
};

/// Decides every entry concurrently; results keep the corpus order.
std::vector<CorpusResult> run_corpus(const DecisionConfig& config = {});

} // namespace hd0l
