#pragma once

#include <cstdint>
#include <optional>
#include <set>

#include "hd0l/matrix.hpp"
#include "hd0l/word.hpp"

namespace hd0l {

enum class Property { P1, P2, P3, P4, Coding };

const char* to_string(Property p);

/// x = kappa(tau^omega(seed)) with tau a substitution prolongable on seed.
struct SubstitutiveRepresentation {
  Morphism tau;
  Morphism kappa;
  Letter seed;
  std::set<Property> certified;

  Word prefix(std::size_t n) const { return expand_morphic(tau, kappa, seed, n); }
};

/// Checks each property directly on (tau, kappa, seed).
std::set<Property> certify(const Morphism& tau, const Morphism& kappa, Letter seed);

struct DeletionMorphism {
  Alphabet kept;
  Morphism psi; // deleted letters -> ε, kept letters -> themselves
};

struct PowerNormalization {
  std::uint64_t exponent = 1;
  Morphism power;
};

PowerNormalization normalize_p1_p2(const Morphism& sigma,
                                   ExponentPolicy policy = ExponentPolicy::AlphabetMultiple);

/// Restriction to letters(sigma(a)) ∪ {a}; requires (P2).
Morphism restrict_to_reachable(const Morphism& sigma, Letter a);

struct ErasingElimination {
  Morphism sigma; // non-erasing, on the kept letters
  DeletionMorphism deletion;
  bool prolongable = false; // false when the new fixed point is finite
};

ErasingElimination eliminate_erasing(const Morphism& sigma, Letter a);

/// sigma^k and phi∘sigma^m satisfying
///   |phi'(sigma'(a))| > |phi'(a)| > 0,  |phi'(sigma'(b))| >= |phi'(b)|.
struct GrowthAdjustment {
  Morphism sigma;
  Morphism phi;
  std::size_t k = 1;
  std::size_t m = 0;
};

GrowthAdjustment achieve_growth_inequalities(const Morphism& sigma, const Morphism& phi,
                                             Letter a);

/// Letters (b,i), first block of each image absorbing the surplus.
SubstitutiveRepresentation to_coding(const Morphism& sigma, const Morphism& phi, Letter a);

/// Coding for a growing sigma and non-erasing phi whose result is again
/// growing: positions of sigma^k(b) are grouped by the sigma-letter they come
/// from, so every block covers at least one growing letter.
SubstitutiveRepresentation grouped_coding(const Morphism& sigma, const Morphism& phi,
                                          Letter a);

struct Normalization {
  std::optional<SubstitutiveRepresentation> rep;
  Word finite_image; // phi(sigma^omega(a)) when it is finite

  bool bounded() const { return !rep.has_value(); }
};

/// Full reduction of (sigma, phi, a) with sigma(a) starting with a.
Normalization normalize(const Morphism& sigma, const Morphism& phi, Letter a);

/// Display name of derived letter (b,i).
Letter pair_letter(Letter b, std::size_t i);

} // namespace hd0l
