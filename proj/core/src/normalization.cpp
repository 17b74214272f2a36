#include "hd0l/normalization.hpp"

#include <algorithm>
#include <string>

namespace hd0l {

namespace {

// Rows |phi(sigma^j(b))|, computed on demand.
class LengthTable {
public:
  LengthTable(const Morphism& sigma, const Morphism& phi) : sigma_(sigma) {
    const auto& alpha = sigma.domain();
    rows_.emplace_back(alpha.size());
    for (std::size_t b = 0; b < alpha.size(); ++b)
      rows_[0][b] = phi.image(alpha[b]).size();
  }

  const std::vector<BigInt>& operator[](std::size_t j) {
    const auto& alpha = sigma_.domain();
    while (rows_.size() <= j) {
      std::vector<BigInt> next(alpha.size());
      for (std::size_t b = 0; b < alpha.size(); ++b)
        for (Letter c : sigma_.image_at(b))
          next[b] += rows_.back()[alpha.index_of(c)];
      rows_.push_back(std::move(next));
    }
    return rows_[j];
  }

private:
  const Morphism& sigma_;
  std::vector<std::vector<BigInt>> rows_;
};

std::vector<bool> reachable_from(const Morphism& sigma, Letter a) {
  const auto& alpha = sigma.domain();
  std::vector<bool> seen(alpha.size(), false);
  std::vector<std::size_t> todo{alpha.index_of(a)};
  seen[todo[0]] = true;
  while (!todo.empty()) {
    auto b = todo.back();
    todo.pop_back();
    for (Letter c : sigma.image_at(b)) {
      auto i = alpha.index_of(c);
      if (!seen[i]) {
        seen[i] = true;
        todo.push_back(i);
      }
    }
  }
  return seen;
}

// Restriction to an alphabet closed under sigma plus the matching phi.
std::pair<Morphism, Morphism> restrict_pair(const Morphism& sigma, const Morphism& phi,
                                            Letter a) {
  auto s = restrict_to_reachable(sigma, a);
  return {s, phi.restrict_domain(s.domain())};
}

Normalization bounded(Word w) {
  Normalization n;
  n.finite_image = std::move(w);
  return n;
}

SubstitutiveRepresentation renormalize(SubstitutiveRepresentation rep) {
  auto p = normalize_p1_p2(rep.tau, ExponentPolicy::Minimal);
  rep.tau = restrict_to_reachable(p.power, rep.seed);
  rep.kappa = rep.kappa.restrict_domain(rep.tau.domain());
  rep.certified = certify(rep.tau, rep.kappa, rep.seed);
  return rep;
}

} // namespace

const char* to_string(Property p) {
  switch (p) {
  case Property::P1:
    return "P1";
  case Property::P2:
    return "P2";
  case Property::P3:
    return "P3";
  case Property::P4:
    return "P4";
  case Property::Coding:
    return "CODING";
  }
  return "?";
}

Letter pair_letter(Letter b, std::size_t i) {
  return Letter::intern("(" + b.name() + "," + std::to_string(i) + ")");
}

std::set<Property> certify(const Morphism& tau, const Morphism& kappa, Letter seed) {
  std::set<Property> out;
  if (has_block_form(tau))
    out.insert(Property::P1);
  if (has_stable_letter_sets(tau))
    out.insert(Property::P2);
  auto seen = reachable_from(tau, seed);
  if (std::all_of(seen.begin(), seen.end(), [](bool b) { return b; }) &&
      is_prolongable(tau, seed))
    out.insert(Property::P3);
  if (!tau.is_erasing())
    out.insert(Property::P4);
  if (kappa.is_coding())
    out.insert(Property::Coding);
  return out;
}

PowerNormalization normalize_p1_p2(const Morphism& sigma, ExponentPolicy policy) {
  PowerNormalization out;
  out.exponent = stable_exponent(sigma, policy);
  out.power = power(sigma, out.exponent);
  HD0L_ASSERT(has_block_form(out.power), "power fails (P1)");
  HD0L_ASSERT(has_stable_letter_sets(out.power), "power fails (P2)");
  return out;
}

Morphism restrict_to_reachable(const Morphism& sigma, Letter a) {
  std::vector<Letter> kept = letters_of(sigma.image(a));
  if (std::find(kept.begin(), kept.end(), a) == kept.end())
    kept.push_back(a);
  std::vector<Letter> ordered;
  for (Letter l : sigma.domain())
    if (std::find(kept.begin(), kept.end(), l) != kept.end())
      ordered.push_back(l);
  Alphabet sub(ordered);
  for (Letter l : sub)
    HD0L_ASSERT(sub.contains_all(sigma.image(l)),
                "letters of sigma(a) are not closed under sigma");
  return sigma.restrict_to(sub);
}

ErasingElimination eliminate_erasing(const Morphism& sigma, Letter a) {
  if (sigma.image(a).empty())
    throw PreconditionError("eliminate_erasing: seed letter is erasing");
  std::vector<Letter> kept, deleted;
  for (std::size_t i = 0; i < sigma.domain().size(); ++i)
    (sigma.image_at(i).empty() ? deleted : kept).push_back(sigma.domain()[i]);

  ErasingElimination out;
  out.deletion.kept = Alphabet(kept);
  std::vector<Word> psi_images;
  for (Letter l : sigma.domain())
    psi_images.push_back(sigma.image(l).empty() ? Word{} : Word{l});
  out.deletion.psi = Morphism(sigma.domain(), out.deletion.kept, std::move(psi_images));

  std::vector<Word> images;
  for (Letter l : kept)
    images.push_back(apply(out.deletion.psi, sigma.image(l)));
  out.sigma = Morphism(out.deletion.kept, out.deletion.kept, std::move(images));
  out.prolongable = is_prolongable(out.sigma, a);
  return out;
}

GrowthAdjustment achieve_growth_inequalities(const Morphism& sigma, const Morphism& phi,
                                             Letter a) {
  const std::size_t n = sigma.domain().size();
  const std::size_t max_m = n + 2;
  const std::size_t max_k = 4 * (phi.max_image_length() + 1) * (sigma.max_image_length() + 1) + n;
  LengthTable len(sigma, phi);
  const std::size_t ia = sigma.domain().index_of(a);

  for (std::size_t m = 0; m <= max_m; ++m) {
    if (len[m][ia] == 0)
      continue;
    for (std::size_t k = 1; k <= max_k; ++k) {
      const auto after = len[m + k];
      bool ok = after[ia] > len[m][ia];
      for (std::size_t b = 0; ok && b < n; ++b)
        ok = after[b] >= len[m][b];
      if (ok)
        return {power(sigma, k), compose(phi, power(sigma, m)), k, m};
    }
  }
  throw InternalError("achieve_growth_inequalities: no (m, k) within the search bound");
}

SubstitutiveRepresentation to_coding(const Morphism& sigma, const Morphism& phi, Letter a) {
  const auto& alpha = sigma.domain();
  if (sigma.image(a).empty() || sigma.image(a).front() != a)
    throw PreconditionError("to_coding: sigma(a) does not start with a");
  for (std::size_t b = 0; b < alpha.size(); ++b) {
    auto before = phi.image_at(b).size();
    auto after = apply(phi, sigma.image_at(b)).size();
    bool ok = alpha[b] == a ? (after > before && before > 0) : after >= before;
    if (!ok)
      throw PreconditionError("to_coding: growth inequalities fail at letter " +
                              alpha[b].name());
  }

  BigInt total = 0;
  LengthTable coded(sigma, phi);
  for (const auto& v : coded[1])
    total += v;
  if (total > kMaxComposedLetters)
    throw ResourceLimitError("to_coding: coded images exceed " +
                             std::to_string(kMaxComposedLetters) + " letters");

  std::vector<Letter> d_letters, kappa_letters;
  for (std::size_t b = 0; b < alpha.size(); ++b)
    for (std::size_t i = 0; i < phi.image_at(b).size(); ++i) {
      d_letters.push_back(pair_letter(alpha[b], i));
      kappa_letters.push_back(phi.image_at(b)[i]);
    }
  Alphabet d(d_letters);

  std::vector<Word> tau_images, kappa_images;
  for (std::size_t b = 0; b < alpha.size(); ++b) {
    const std::size_t parts = phi.image_at(b).size();
    if (parts == 0)
      continue;
    std::vector<Letter> positions;
    for (Letter c : sigma.image_at(b))
      for (std::size_t j = 0; j < phi.image(c).size(); ++j)
        positions.push_back(pair_letter(c, j));
    const std::size_t first = positions.size() - parts + 1;
    tau_images.emplace_back(std::vector<Letter>(positions.begin(), positions.begin() + first));
    for (std::size_t i = 1; i < parts; ++i)
      tau_images.push_back(Word{positions[first + i - 1]});
  }
  for (Letter k : kappa_letters)
    kappa_images.push_back(Word{k});

  SubstitutiveRepresentation rep;
  rep.tau = Morphism(d, d, std::move(tau_images));
  rep.kappa = Morphism(d, phi.codomain(), std::move(kappa_images));
  rep.seed = pair_letter(a, 0);
  rep.certified = certify(rep.tau, rep.kappa, rep.seed);
  return rep;
}

SubstitutiveRepresentation grouped_coding(const Morphism& sigma, const Morphism& phi,
                                          Letter a) {
  const auto& alpha = sigma.domain();
  if (sigma.image(a).empty() || sigma.image(a).front() != a)
    throw PreconditionError("grouped_coding: sigma(a) does not start with a");
  for (std::size_t b = 0; b < alpha.size(); ++b)
    if (phi.image_at(b).empty())
      throw PreconditionError("grouped_coding: phi is erasing");

  // smallest k with |sigma^k(b)| >= |phi(b)| and |sigma^k(a)| > |phi(a)|
  const auto ident = Morphism::identity(alpha);
  const std::size_t cap = 64 * (phi.max_image_length() + alpha.size());
  LengthTable len(sigma, ident);
  const std::size_t ia = alpha.index_of(a);
  std::size_t k = 0;
  for (std::size_t j = 1; j <= cap && k == 0; ++j) {
    bool ok = len[j][ia] > phi.image_at(ia).size();
    for (std::size_t b = 0; ok && b < alpha.size(); ++b)
      ok = len[j][b] >= phi.image_at(b).size();
    if (ok)
      k = j;
  }
  if (k == 0)
    throw PreconditionError("grouped_coding: sigma does not grow enough");
  BigInt total = 0;
  LengthTable coded(sigma, phi);
  for (const auto& v : coded[k])
    total += v;
  if (total > kMaxComposedLetters)
    throw ResourceLimitError("grouped_coding: coded images exceed " +
                             std::to_string(kMaxComposedLetters) + " letters");
  const Morphism sk = power(sigma, k);

  std::vector<Letter> d_letters;
  std::vector<Word> tau_images, kappa_images;
  for (std::size_t b = 0; b < alpha.size(); ++b) {
    const auto& img = sk.image_at(b);
    const std::size_t parts = phi.image_at(b).size();
    const std::size_t first = img.size() - parts + 1;
    auto block = [&](std::size_t from, std::size_t to) {
      std::vector<Letter> out;
      for (std::size_t t = from; t < to; ++t)
        for (std::size_t j = 0; j < phi.image(img[t]).size(); ++j)
          out.push_back(pair_letter(img[t], j));
      return Word(std::move(out));
    };
    for (std::size_t i = 0; i < parts; ++i) {
      d_letters.push_back(pair_letter(alpha[b], i));
      kappa_images.push_back(Word{phi.image_at(b)[i]});
      tau_images.push_back(i == 0 ? block(0, first) : block(first + i - 1, first + i));
    }
  }
  Alphabet d(d_letters);
  SubstitutiveRepresentation rep;
  rep.tau = Morphism(d, d, std::move(tau_images));
  rep.kappa = Morphism(d, phi.codomain(), std::move(kappa_images));
  rep.seed = pair_letter(a, 0);
  rep.certified = certify(rep.tau, rep.kappa, rep.seed);
  return rep;
}

Normalization normalize(const Morphism& sigma, const Morphism& phi, Letter a) {
  if (!sigma.is_endomorphism())
    throw DomainError("normalize: sigma is not an endomorphism");
  if (sigma.image(a).empty() || sigma.image(a).front() != a)
    throw PreconditionError("normalize: sigma(" + a.name() + ") does not start with it");

  auto s = normalize_p1_p2(sigma, ExponentPolicy::Minimal).power;
  if (!is_prolongable(s, a)) {
    // fixed point is a·u·s(u)·s²(u)·… with u mortal
    Word y{a};
    for (Word u = s.image(a).substr(1); !u.empty(); u = apply(s, u))
      y = y + u;
    return bounded(apply(phi, y));
  }
  auto [s1, phi1] = restrict_pair(s, phi, a);

  Morphism s2 = s1, phi2 = phi1;
  if (s1.is_erasing()) {
    auto el = eliminate_erasing(s1, a);
    HD0L_ASSERT(el.prolongable, "erasing elimination lost prolongability");
    // x = phi(y) = phi(s1(z)) with z the fixed point of the non-erasing part
    phi2 = compose(phi1, s1).restrict_domain(el.sigma.domain());
    s2 = normalize_p1_p2(el.sigma, ExponentPolicy::Minimal).power;
    std::tie(s2, phi2) = restrict_pair(s2, phi2, a);
  }

  // Under (P2) the letters occurring infinitely often are those of s2(u).
  const Word u = s2.image(a).substr(1);
  bool infinite = false;
  for (Letter b : letters_of(u))
    for (Letter l : letters_of(s2.image(b)))
      infinite = infinite || !phi2.image(l).empty();
  if (!infinite)
    return bounded(apply(phi2, Word{a} + u));

  Normalization out;
  if (phi2.is_coding()) {
    out.rep = renormalize({s2, phi2, a, {}});
    return out;
  }
  if (classify_letters(s2).all_growing()) {
    LengthTable len(s2, phi2);
    for (std::size_t m = 0; m <= s2.domain().size() + 1; ++m) {
      if (std::all_of(len[m].begin(), len[m].end(), [](const BigInt& v) { return v > 0; })) {
        out.rep = renormalize(grouped_coding(s2, compose(phi2, power(s2, m)), a));
        return out;
      }
    }
  }
  auto g = achieve_growth_inequalities(s2, phi2, a);
  out.rep = renormalize(to_coding(g.sigma, g.phi, a));
  return out;
}

} // namespace hd0l
