#pragma once

// Brute-force reference implementations used only by tests.

#include <algorithm>
#include <random>
#include <set>
#include <string>
#include <string_view>

#include "hd0l/word.hpp"

namespace oracle {

using hd0l::Letter;
using hd0l::Morphism;
using hd0l::Word;

inline Word iterate(const Morphism& m, Word x, std::size_t k) {
  for (std::size_t i = 0; i < k; ++i)
    x = hd0l::apply(m, x);
  return x;
}

inline Word iterate_to_length(const Morphism& m, Letter a, std::size_t n) {
  Word x{a};
  for (int guard = 0; x.size() < n && guard < 200; ++guard)
    x = hd0l::apply(m, x);
  return x.prefix(n);
}

inline Word up_prefix(const Word& u, const Word& v, std::size_t n) {
  std::vector<hd0l::Letter> out(u.begin(), u.end());
  while (out.size() < n)
    out.insert(out.end(), v.begin(), v.end());
  out.resize(n);
  return Word(out);
}

inline Word random_word(std::mt19937& rng, std::string_view alphabet, std::size_t max_len,
                        std::size_t min_len = 0) {
  std::uniform_int_distribution<std::size_t> len(min_len, max_len);
  std::uniform_int_distribution<std::size_t> ch(0, alphabet.size() - 1);
  std::string s;
  for (std::size_t i = len(rng); i > 0; --i)
    s.push_back(alphabet[ch(rng)]);
  return Word::from_chars(s);
}

inline Morphism random_endomorphism(std::mt19937& rng, std::string_view alphabet,
                                    std::size_t max_len, bool allow_empty) {
  std::vector<Word> images;
  for (std::size_t i = 0; i < alphabet.size(); ++i)
    images.push_back(random_word(rng, alphabet, max_len, allow_empty ? 0 : 1));
  auto a = hd0l::Alphabet::from_chars(alphabet);
  return Morphism(a, a, images);
}

inline std::set<Letter> letter_set(const Word& w) { return {w.begin(), w.end()}; }

// Lengths |sigma^n(b)| up to n, saturating at cap.
inline std::vector<std::size_t> length_trace(const Morphism& m, Letter b, std::size_t n,
                                             std::size_t cap = 100000) {
  std::vector<std::size_t> out;
  Word x{b};
  for (std::size_t i = 0; i <= n; ++i) {
    out.push_back(x.size());
    if (x.size() > cap)
      break;
    x = hd0l::apply(m, x);
  }
  return out;
}

// Ultimately periodic test on a long prefix: smallest (start, period) with
// x[j] = x[j+p] for all j >= start inside the window, period <= max_p and at
// least `reps` repetitions observed.
inline bool looks_periodic(const Word& x, std::size_t max_p, std::size_t reps,
                           std::size_t* start_out = nullptr, std::size_t* period_out = nullptr) {
  for (std::size_t p = 1; p <= max_p; ++p) {
    if (x.size() < p * reps)
      break;
    std::size_t c = x.size() - p;
    while (c > 0 && x[c - 1] == x[c - 1 + p])
      --c;
    if (x.size() - c >= p * reps) {
      if (start_out)
        *start_out = c;
      if (period_out)
        *period_out = p;
      return true;
    }
  }
  return false;
}

} // namespace oracle
