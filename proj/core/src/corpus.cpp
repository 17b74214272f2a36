#include "hd0l/corpus.hpp"

#include <chrono>
#include <future>

namespace hd0l {

std::optional<UltimatelyPeriodicWord> brute_force_up_check(const Word& prefix,
                                                           std::size_t max_pre,
                                                           std::size_t max_per) {
  if (max_per == 0)
    throw PreconditionError("brute_force_up_check: period bound must be positive");
  if (prefix.size() < max_pre + 3 * max_per)
    throw PreconditionError("brute_force_up_check: prefix shorter than maxPre + 3 maxPer");
  const auto& x = prefix.letters();
  for (std::size_t pre = 0; pre <= max_pre; ++pre)
    for (std::size_t per = 1; per <= max_per; ++per) {
      bool ok = true;
      for (std::size_t i = pre + per; ok && i < x.size(); ++i)
        ok = x[i] == x[i - per];
      if (ok)
        return UltimatelyPeriodicWord{prefix.prefix(pre), prefix.substr(pre, per)};
    }
  return std::nullopt;
}

namespace {

HD0LSystem make(const Morphism& sigma, const Morphism& phi, std::string_view w) {
  return {sigma.domain(), phi.codomain(), sigma, phi, Word::from_chars(w)};
}

HD0LSystem make(const Morphism& sigma, std::string_view w) {
  return make(sigma, Morphism::identity(sigma.domain()), w);
}

UltimatelyPeriodicWord up(std::string_view u, std::string_view v) {
  return {Word::from_chars(u), Word::from_chars(v)};
}

std::vector<CorpusEntry> build() {
  using M = Morphism;
  const auto two = M::from_chars(
      {{'s', "sab"}, {'a', "ac"}, {'c', "ac"}, {'b', "bd"}, {'d', "bd"}});
  return {
      {"fibonacci", make(M::from_chars({{'a', "ab"}, {'b', "a"}}), "a"), std::nullopt},
      {"thue-morse", make(M::from_chars({{'a', "ab"}, {'b', "ba"}}), "a"), std::nullopt},
      {"thue-morse-variant",
       make(M::from_chars({{'a', "cb"}, {'b', "ba"}, {'c', "ab"}}),
            M::from_chars({{'a', "0"}, {'b', "1"}, {'c', "0"}}, "01"), "a"),
       std::nullopt},
      {"unreachable-letter", make(M::from_chars({{'a', "ab"}, {'b', "a"}, {'c', "c"}}), "a"),
       std::nullopt},
      {"abb", make(M::from_chars({{'a', "ab"}, {'b', "bb"}}), "a"), up("a", "b")},
      {"abab", make(M::from_chars({{'a', "ab"}, {'b', "ab"}}), "a"), up("", "ab")},
      {"right-flank", make(M::from_chars({{'b', "bc"}, {'c', "c"}}), "b"), up("b", "c")},
      {"aca", make(M::from_chars({{'a', "aca"}, {'c', "c"}}), "a"), up("", "ac")},
      {"erasing", make(M::from_chars({{'a', "aeb"}, {'b', "eb"}, {'e', ""}}), "a"),
       up("a", "eb")},
      {"two-components-match",
       make(two,
            M::from_chars({{'s', "1"}, {'a', "0"}, {'c', "1"}, {'b', "0"}, {'d', "1"}}, "01"),
            "s"),
       up("100", "01")},
      {"two-components-mismatch",
       make(two,
            M::from_chars({{'s', "1"}, {'a', "0"}, {'c', "1"}, {'b', "0"}, {'d', "0"}}, "01"),
            "s"),
       std::nullopt},
  };
}

} // namespace

const std::vector<CorpusEntry>& corpus() {
  static const std::vector<CorpusEntry> entries = build();
  return entries;
}

std::vector<CorpusResult> run_corpus(const DecisionConfig& config) {
  std::vector<std::future<CorpusResult>> jobs;
  for (const auto& entry : corpus())
    jobs.push_back(std::async(std::launch::async, [&entry, config] {
      CorpusResult r;
      r.name = entry.name;
      const auto start = std::chrono::steady_clock::now();
      r.outcome = decide_hd0l(entry.system, config);
      r.seconds =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      if (r.outcome.inconclusive)
        r.pass = false;
      else if (entry.expected)
        r.pass = r.outcome.periodic && up_equal(*r.outcome.witness, *entry.expected);
      else
        r.pass = !r.outcome.periodic;
      return r;
    }));
  std::vector<CorpusResult> out;
  for (auto& j : jobs)
    out.push_back(j.get());
  return out;
}

} // namespace hd0l
