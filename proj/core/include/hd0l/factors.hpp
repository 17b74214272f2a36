#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <vector>

#include "hd0l/normalization.hpp"
#include "hd0l/word.hpp"

namespace hd0l {

/// Length-n factors of sigma^omega(a), with the recurrent ones and an index
/// i such that every factor starting at position >= i is recurrent.
struct FactorSet {
  std::size_t n = 0;
  std::set<Word> factors;
  std::set<Word> recurrent;
  std::size_t index = 0;
};

/// All length-n factors of sigma^omega(a), by closure from the length-n
/// prefix. sigma must be non-erasing and prolongable on a.
std::set<Word> factors_of_length(const Morphism& sigma, Letter a, std::size_t n);

/// Endomorphism on overlapping n-blocks. Block letters are named "[w]".
struct BlockSubstitution {
  Morphism sigma_n;
  Letter seed;
  std::vector<Word> blocks; // blocks[i] spells sigma_n.domain()[i]
};

BlockSubstitution block_substitution(const Morphism& sigma, Letter a, std::size_t n);

struct RecurrentLetters {
  std::vector<Letter> letters;
  std::size_t index = 0;
};

/// Letters of sigma(u) where sigma(a) = a·u; index = |a·u|. Requires (P2).
RecurrentLetters recurrent_letters(const Morphism& sigma, Letter a);

/// Recurrent length-n factors. Works for any non-erasing sigma prolongable on
/// a by following the letter sets of sigma_n^k(u) until they cycle; the index
/// is |sigma^K(a)| for the first K after which only recurrent blocks appear.
FactorSet recurrent_factors(const Morphism& sigma, Letter a, std::size_t n);

/// L(u^omega) == L(v^omega): primitive roots have equal length and are
/// conjugate.
bool lang_eq_periodic(const Word& u, const Word& v);

/// Decides whether kappa(tau^omega(seed)) = u·v'^omega for some u and some
/// conjugate v' of v; returns the canonical form when it does.
std::optional<UltimatelyPeriodicWord> finalcheck(const SubstitutiveRepresentation& rep,
                                                 const Word& v);

} // namespace hd0l
