#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "hd0l/factors.hpp"
#include "hd0l/normalization.hpp"

namespace hd0l {

struct DecisionConfig {
  /// Overrides the primitive oracle's complexity bound N when set.
  std::optional<std::size_t> primitive_bound;
  /// Ceiling applied to the default N.
  std::size_t primitive_bound_cap = 2048;
  /// Maximum number of triples in the case-2 conversion.
  std::size_t triple_cap = 20000;
};

/// Restriction of a substitution to one principal primitive component,
/// raised to a power prolongable on `seed`.
struct SubSubstitution {
  std::vector<Letter> letters;
  Morphism sigma; // (sigma|A_i)^k
  Letter seed;
  std::size_t own_power = 1; // k_i
};

struct SubSubstitutions {
  std::size_t k = 1; // lcm of the k_i
  std::vector<SubSubstitution> components;
};

SubSubstitutions make_sub_substitutions(const Morphism& sigma);

/// Factor complexity p(n) of kappa(tau^omega(a)), exact, for a primitive
/// (or at least growing, non-erasing) tau prolongable on a.
std::size_t factor_complexity(const Morphism& tau, Letter a, const Morphism& kappa,
                              std::size_t n);

struct PrimitiveVerdict {
  bool periodic = false;
  Word period;           // primitive word period when periodic
  bool certified = false; // periodic: finalcheck passed; aperiodic: never
  std::size_t bound = 0;  // N used
  std::size_t witness_n = 0; // period length when periodic, otherwise N
};

std::size_t default_primitive_bound(const Morphism& tau, const DecisionConfig& config);

PrimitiveVerdict primitive_periodicity(const Morphism& tau, Letter a, const Morphism& kappa,
                                       const DecisionConfig& config = {});

enum class Diagnostic {
  AperiodicSubComponent,
  PeriodLanguageMismatch,
  FinalcheckFailed,
  BoundedImage,
  DivergentLimit,
  ClassLimitsDiffer,
};

const char* to_string(Diagnostic d);

struct DecisionOutcome {
  bool periodic = false;
  bool inconclusive = false; // a resource bound was hit
  std::optional<UltimatelyPeriodicWord> witness;
  bool certified = true;
  std::optional<Diagnostic> diagnostic;
  std::vector<std::string> trace;

  static DecisionOutcome yes(UltimatelyPeriodicWord w, std::vector<std::string> trace);
  static DecisionOutcome no(Diagnostic d, bool certified, std::vector<std::string> trace);
  static DecisionOutcome undetermined(std::vector<std::string> trace);
};

DecisionOutcome decide_growing(const SubstitutiveRepresentation& rep,
                               const DecisionConfig& config = {});

enum class Side { Left, Right };

/// sigma^power(b) = v·b·u (Right) or u·b·v (Left), u non-empty over the
/// non-growing letters.
struct Case3Witness {
  Letter b;
  Side side = Side::Right;
  Word u;
  std::size_t power = 1;
};

struct PeriodCandidate {
  Word u_prime;
  std::size_t i = 0;
  std::size_t j = 0;
};

/// u' = s^i(u)·…·s^(j-1)(u) for the first i < j with s^i(u) = s^j(u),
/// where s = sigma^power.
PeriodCandidate case3_period_candidate(const Morphism& sigma, const Word& u,
                                       std::size_t power = 1);

/// Growing substitution on triples <l,g,w> with chi(<l,g,w>) = l·g·w.
struct TripleConversion {
  Morphism tau; // already raised so that it is prolongable on seed
  Morphism chi;
  Letter seed;
  std::size_t q = 1;
};

TripleConversion convert_case2_to_growing(const Morphism& sigma, Letter a,
                                          const DecisionConfig& config = {});

struct PansiotCase {
  std::optional<Case3Witness> case3;
  std::optional<TripleConversion> case2;
};

PansiotCase pansiot_classify(const Morphism& sigma, Letter a,
                             const DecisionConfig& config = {});

DecisionOutcome decide_substitutive(const SubstitutiveRepresentation& rep,
                                    const DecisionConfig& config = {});

} // namespace hd0l
