#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <vector>

#include "hd0l/periodicity.hpp"

namespace hd0l {

/// Behaviour of |psi(tau^n(c))| as n grows.
enum class LengthClass { ToZero, Bounded, ToInfinity };

const char* to_string(LengthClass c);

/// Classes of every letter; tau must satisfy (P1) with power 1 and (P2).
std::map<Letter, LengthClass> length_classes(const Morphism& tau, const Morphism& psi);

LengthClass phi_length_class(const Morphism& tau, const Morphism& psi, Letter c);

/// Smallest j0, then smallest n0, with first(sigma^j0(a)) = first(sigma^(j0+n0)(a)).
struct FirstLetterOrbit {
  std::size_t j0 = 0;
  std::size_t n0 = 1;
  std::vector<Letter> letters;   // first letters of sigma^(j0+i)(a), i < n0
  std::vector<Letter> unbounded; // those whose psi-image lengths tend to infinity
};

FirstLetterOrbit first_letter_orbit(const Morphism& sigma, Letter a);
FirstLetterOrbit first_letter_orbit(const Morphism& sigma, const Morphism& psi, Letter a);

/// F_n(c) = psi(tau^n(c)) for c in a tau-closed set S of letters with
/// bounded images; F_n = F_(n+cycle) for n >= preperiod.
struct BoundedTable {
  std::vector<Letter> letters;
  std::size_t preperiod = 0;
  std::size_t cycle = 1;
  std::vector<std::map<Letter, Word>> tables; // F_0 .. F_(preperiod+cycle-1)

  const Word& at(std::size_t n, Letter c) const;
  Word image(std::size_t n, const Word& x) const; // F_n applied letterwise
};

BoundedTable bounded_prefix_cycle(const Morphism& tau, const Morphism& psi,
                                  const std::vector<Letter>& letters);

/// Limit of psi(tau^(k0+r+tM)(w)) as t grows.
struct ClassLimit {
  std::size_t couple = 0;  // i in phi∘sigma^i
  std::size_t modulus = 1; // M
  std::size_t offset = 0;  // k0
  std::size_t residue = 0; // r
  Word prefix_word;        // P
  std::optional<Word> periodic_tail; // limit P·W^omega
  std::optional<SubstitutiveRepresentation> tail; // limit P·psi'(rho'^omega(d))
  std::optional<DecisionOutcome> tail_verdict;
  std::optional<UltimatelyPeriodicWord> limit; // canonical form when periodic

  Word prefix(std::size_t n) const;
};

struct HD0LAnalysis {
  std::uint64_t exponent = 1; // e: tau = sigma^e
  std::vector<ClassLimit> classes;
  std::vector<std::string> trace;
};

/// Every accumulation point of phi(sigma^n(w w w ...)): for each couple i
/// and residue r, the limit along n = i + e·(k0 + r + t·M). Requires, in
/// every couple, a letter of w with unbounded image lengths.
HD0LAnalysis class_limits(const HD0LSystem& system, const DecisionConfig& config = {});

bool up_equal(const UltimatelyPeriodicWord& x, const UltimatelyPeriodicWord& y);

DecisionOutcome decide_hd0l(const HD0LSystem& system, const DecisionConfig& config = {});

} // namespace hd0l
