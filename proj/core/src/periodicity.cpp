#include "hd0l/periodicity.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <tuple>

namespace hd0l {

namespace {

// Generalized suffix automaton over several texts; the states whose length
// interval (len(link), len] contains n correspond to the distinct factors of
// length n.
class SuffixAutomaton {
public:
  explicit SuffixAutomaton(std::size_t reserve) {
    states_.reserve(2 * reserve + 2);
    states_.push_back({});
  }

  void add_text(const std::vector<std::uint32_t>& text) {
    int last = 0;
    for (auto c : text)
      last = extend(last, c);
  }

  // p[m] for 0 <= m <= n_max
  std::vector<std::size_t> profile(std::size_t n_max) const {
    std::vector<std::int64_t> diff(n_max + 2, 0);
    for (std::size_t v = 1; v < states_.size(); ++v) {
      const std::size_t lo = states_[states_[v].link].len + 1;
      const std::size_t hi = std::min<std::size_t>(states_[v].len, n_max);
      if (lo > hi)
        continue;
      ++diff[lo];
      --diff[hi + 1];
    }
    std::vector<std::size_t> p(n_max + 1, 0);
    p[0] = 1;
    std::int64_t run = 0;
    for (std::size_t m = 1; m <= n_max; ++m)
      p[m] = static_cast<std::size_t>(run += diff[m]);
    return p;
  }

private:
  struct State {
    std::size_t len = 0;
    int link = -1;
    std::vector<std::pair<std::uint32_t, int>> next;
  };

  int go(int v, std::uint32_t c) const {
    for (const auto& [l, t] : states_[v].next)
      if (l == c)
        return t;
    return -1;
  }

  void set(int v, std::uint32_t c, int t) {
    for (auto& e : states_[v].next)
      if (e.first == c) {
        e.second = t;
        return;
      }
    states_[v].next.emplace_back(c, t);
  }

  int clone_of(int p, int q, std::uint32_t c) {
    int cl = static_cast<int>(states_.size());
    State copy = states_[q];
    copy.len = states_[p].len + 1;
    states_.push_back(std::move(copy));
    for (; p != -1 && go(p, c) == q; p = states_[p].link)
      set(p, c, cl);
    states_[q].link = cl;
    return cl;
  }

  int extend(int last, std::uint32_t c) {
    int q = go(last, c);
    if (q != -1) {
      if (states_[q].len == states_[last].len + 1)
        return q;
      return clone_of(last, q, c);
    }
    int cur = static_cast<int>(states_.size());
    states_.push_back({states_[last].len + 1, -1, {}});
    int p = last;
    for (; p != -1 && go(p, c) == -1; p = states_[p].link)
      set(p, c, cur);
    if (p == -1) {
      states_[cur].link = 0;
    } else {
      q = go(p, c);
      states_[cur].link = states_[q].len == states_[p].len + 1 ? q : clone_of(p, q, c);
    }
    return cur;
  }

  std::vector<State> states_;
};

constexpr std::size_t kMaxTextLength = std::size_t{1} << 26;

// p(0..n_max) of kappa(tau^omega(a)): every factor of length <= n_max lies in
// tau^j(cd) for a factor cd once min |tau^j(b)| >= n_max - 1.
std::vector<std::size_t> complexity_profile(const Morphism& tau, Letter a,
                                            const Morphism& kappa, std::size_t n_max) {
  if (tau.is_erasing())
    throw PreconditionError("factor_complexity: substitution is erasing");
  if (n_max == 0)
    return {1};
  const auto pairs = factors_of_length(tau, a, 2);
  const auto& alpha = tau.domain();
  const std::size_t need = n_max - 1;

  auto saturating = [](std::size_t x, std::size_t y) {
    return x > kMaxTextLength || y > kMaxTextLength - x ? kMaxTextLength + 1 : x + y;
  };
  std::vector<std::size_t> len(alpha.size(), 1);
  std::size_t j = 0;
  for (;; ++j) {
    if (*std::min_element(len.begin(), len.end()) >= need)
      break;
    if (j > need * alpha.size() + 64)
      throw PreconditionError("factor_complexity: substitution is not growing");
    std::vector<std::size_t> next(alpha.size(), 0);
    for (std::size_t b = 0; b < alpha.size(); ++b)
      for (Letter c : tau.image_at(b))
        next[b] = saturating(next[b], len[alpha.index_of(c)]);
    len = std::move(next);
  }
  std::size_t total = 0;
  for (auto l : len)
    total = saturating(total, l);
  for (const auto& cd : pairs)
    total = saturating(total, saturating(len[alpha.index_of(cd[0])], need));
  if (total > kMaxTextLength)
    throw ResourceLimitError("factor_complexity: expansion exceeds the length budget");

  std::vector<std::vector<std::uint32_t>> images;
  for (Letter b : alpha) {
    Word w{b};
    for (std::size_t r = 0; r < j; ++r)
      w = apply(tau, w);
    std::vector<std::uint32_t> t;
    for (Letter l : apply(kappa, w))
      t.push_back(l.id());
    images.push_back(std::move(t));
  }
  SuffixAutomaton sam(total);
  for (const auto& cd : pairs) {
    auto text = images[alpha.index_of(cd[0])];
    const auto& tail = images[alpha.index_of(cd[1])];
    text.insert(text.end(), tail.begin(), tail.begin() + need);
    sam.add_text(text);
  }
  return sam.profile(n_max);
}

std::size_t minimal_period(const Word& x) {
  std::vector<std::size_t> fail(x.size() + 1, 0);
  for (std::size_t i = 1, k = 0; i < x.size(); ++i) {
    while (k > 0 && x[i] != x[k])
      k = fail[k];
    if (x[i] == x[k])
      ++k;
    fail[i + 1] = k;
  }
  return x.size() - fail[x.size()];
}

std::vector<std::string> with(std::vector<std::string> trace, std::string line) {
  trace.push_back(std::move(line));
  return trace;
}

struct Triple {
  Word l;
  Letter g;
  Word w;
  auto operator<=>(const Triple&) const = default;
};

Letter triple_letter(const Triple& t) {
  return Letter::intern("<" + to_string(t.l) + "|" + t.g.name() + "|" + to_string(t.w) + ">");
}

// z = nu h1 u1 h2 u2 ... hr ur -> <nu,h1,u1><ε,h2,u2>...<ε,hr,ur>
std::vector<Triple> split_at_growing(const Word& z, const LetterClassification& cls) {
  std::vector<Triple> out;
  std::vector<Letter> lead, run;
  for (Letter c : z) {
    if (cls.growing(c)) {
      if (!out.empty())
        out.back().w = Word(std::exchange(run, {}));
      out.push_back({out.empty() ? Word(lead) : Word{}, c, Word{}});
    } else {
      (out.empty() ? lead : run).push_back(c);
    }
  }
  HD0L_ASSERT(!out.empty(), "image of a growing block has no growing letter");
  out.back().w = Word(run);
  return out;
}

void confirm_prefix(const SubstitutiveRepresentation& rep, const UltimatelyPeriodicWord& up) {
  const std::size_t n = up.preperiod.size() + 20 * up.period.size();
  HD0L_ASSERT(rep.prefix(n) == up.prefix(n), "periodic verdict disagrees with the expansion");
}

} // namespace

const char* to_string(Diagnostic d) {
  switch (d) {
  case Diagnostic::AperiodicSubComponent:
    return "AperiodicSubComponent";
  case Diagnostic::PeriodLanguageMismatch:
    return "PeriodLanguageMismatch";
  case Diagnostic::FinalcheckFailed:
    return "FinalcheckFailed";
  case Diagnostic::BoundedImage:
    return "BoundedImage";
  case Diagnostic::DivergentLimit:
    return "DivergentLimit";
  case Diagnostic::ClassLimitsDiffer:
    return "ClassLimitsDiffer";
  }
  return "?";
}

DecisionOutcome DecisionOutcome::yes(UltimatelyPeriodicWord w, std::vector<std::string> trace) {
  DecisionOutcome out;
  out.periodic = true;
  out.witness = std::move(w);
  out.certified = true;
  out.trace = std::move(trace);
  return out;
}

DecisionOutcome DecisionOutcome::no(Diagnostic d, bool certified,
                                    std::vector<std::string> trace) {
  DecisionOutcome out;
  out.periodic = false;
  out.diagnostic = d;
  out.certified = certified;
  out.trace = std::move(trace);
  return out;
}

DecisionOutcome DecisionOutcome::undetermined(std::vector<std::string> trace) {
  DecisionOutcome out;
  out.inconclusive = true;
  out.certified = false;
  out.trace = std::move(trace);
  return out;
}

SubSubstitutions make_sub_substitutions(const Morphism& sigma) {
  const auto d = component_decomposition(sigma);
  if (d.power != 1)
    throw PreconditionError("make_sub_substitutions: (P1) does not hold");
  SubSubstitutions out;
  for (const auto& comp : d.components) {
    if (!comp.principal)
      continue;
    HD0L_ASSERT(comp.kind != ComponentClass::Null, "principal component of null class");
    if (comp.kind != ComponentClass::Primitive)
      continue;
    Alphabet alpha(comp.letters);
    SubSubstitution sub;
    sub.letters = comp.letters;
    sub.sigma = sigma.restrict_to(alpha);
    // first-letter map: some power of it fixes a letter
    std::map<Letter, std::size_t> seen;
    std::vector<Letter> path;
    Letter cur = comp.letters.front();
    while (!seen.count(cur)) {
      seen.emplace(cur, path.size());
      path.push_back(cur);
      cur = sub.sigma.image(cur).front();
    }
    sub.seed = cur;
    sub.own_power = path.size() - seen[cur];
    out.k = std::lcm(out.k, sub.own_power);
    HD0L_ASSERT(is_primitive(support_of(sub.sigma)), "principal component is not primitive");
    out.components.push_back(std::move(sub));
  }
  for (auto& sub : out.components) {
    sub.sigma = power(sub.sigma, out.k);
    HD0L_ASSERT(sub.sigma.image(sub.seed).front() == sub.seed,
                "sub-substitution power is not prolongable");
  }
  return out;
}

std::size_t factor_complexity(const Morphism& tau, Letter a, const Morphism& kappa,
                              std::size_t n) {
  return complexity_profile(tau, a, kappa, n)[n];
}

std::size_t default_primitive_bound(const Morphism& tau, const DecisionConfig& config) {
  if (config.primitive_bound)
    return std::max<std::size_t>(1, *config.primitive_bound);
  const std::size_t cap = std::max<std::size_t>(1, config.primitive_bound_cap);
  const std::size_t base = 1 + tau.max_image_length();
  std::size_t n = tau.domain().size();
  for (std::size_t e = 0; e < tau.domain().size() + 2 && n < cap; ++e)
    n = n > cap / base ? cap : n * base;
  return std::min(n, cap);
}

PrimitiveVerdict primitive_periodicity(const Morphism& tau, Letter a, const Morphism& kappa,
                                       const DecisionConfig& config) {
  if (!kappa.is_coding())
    throw PreconditionError("primitive_periodicity: kappa is not a coding");
  PrimitiveVerdict out;
  out.bound = default_primitive_bound(tau, config);
  // A uniformly recurrent word with a period <= N is purely periodic, and
  // then the smallest period of its length-2N prefix is a period of the word.
  out.witness_n = out.bound;
  const Word x = expand_morphic(tau, kappa, a, 8 * out.bound);
  const std::size_t p = minimal_period(x.prefix(2 * out.bound));
  if (p > out.bound)
    return out;
  // cheap rejection of accidental short periods before the exact check
  for (std::size_t i = p; i < x.size(); ++i)
    if (x[i] != x[i - p])
      return out;
  auto up = finalcheck({tau, kappa, a, {}}, x.prefix(p));
  if (!up)
    return out;
  HD0L_ASSERT(up->preperiod.empty(), "uniformly recurrent periodic word has a preperiod");
  out.periodic = true;
  out.period = up->period;
  out.certified = true;
  out.witness_n = up->period.size();
  return out;
}

DecisionOutcome decide_growing(const SubstitutiveRepresentation& rep,
                               const DecisionConfig& config) {
  if (!rep.kappa.is_coding())
    throw PreconditionError("decide_growing: kappa is not a coding");
  if (!classify_letters(rep.tau).all_growing())
    throw PreconditionError("decide_growing: substitution has non-growing letters");
  std::vector<std::string> trace;
  auto subs = make_sub_substitutions(rep.tau);
  HD0L_ASSERT(!subs.components.empty(), "growing substitution without sub-substitution");
  trace.push_back("sub-substitutions: " + std::to_string(subs.components.size()) +
                  " principal component(s), power " + std::to_string(subs.k));

  std::vector<Word> periods;
  for (const auto& sub : subs.components) {
    auto kappa_i = rep.kappa.restrict_domain(Alphabet(sub.letters));
    auto verdict = primitive_periodicity(sub.sigma, sub.seed, kappa_i, config);
    if (!verdict.periodic) {
      trace.push_back("component seeded at " + sub.seed.name() + ": no period up to N = " +
                      std::to_string(verdict.bound) + " (bound-limited)");
      return DecisionOutcome::no(Diagnostic::AperiodicSubComponent, false, std::move(trace));
    }
    trace.push_back("component seeded at " + sub.seed.name() + ": word period " +
                    to_string(verdict.period));
    periods.push_back(verdict.period);
  }
  for (std::size_t i = 1; i < periods.size(); ++i)
    if (!lang_eq_periodic(periods[0], periods[i])) {
      trace.push_back("period languages differ: " + to_string(periods[0]) + " vs " +
                      to_string(periods[i]));
      return DecisionOutcome::no(Diagnostic::PeriodLanguageMismatch, true, std::move(trace));
    }
  auto up = finalcheck(rep, periods[0]);
  if (!up) {
    trace.push_back("finalcheck rejects period " + to_string(periods[0]));
    return DecisionOutcome::no(Diagnostic::FinalcheckFailed, true, std::move(trace));
  }
  trace.push_back("finalcheck: " + to_string(*up));
  return DecisionOutcome::yes(*up, std::move(trace));
}

PeriodCandidate case3_period_candidate(const Morphism& sigma, const Word& u,
                                       std::size_t power) {
  if (u.empty())
    throw PreconditionError("case3_period_candidate: empty word");
  constexpr std::size_t kMaxLength = 1u << 20;
  std::map<Word, std::size_t> seen;
  std::vector<Word> orbit;
  Word cur = u;
  while (!seen.count(cur)) {
    if (cur.size() > kMaxLength || orbit.size() > kMaxLength)
      throw PreconditionError("case3_period_candidate: orbit is unbounded");
    seen.emplace(cur, orbit.size());
    orbit.push_back(cur);
    for (std::size_t r = 0; r < power; ++r)
      cur = apply(sigma, cur);
  }
  PeriodCandidate out;
  out.i = seen[cur];
  out.j = orbit.size();
  for (std::size_t k = out.i; k < out.j; ++k)
    out.u_prime = out.u_prime + orbit[k];
  return out;
}

TripleConversion convert_case2_to_growing(const Morphism& sigma, Letter a,
                                          const DecisionConfig& config) {
  const auto cls = classify_letters(sigma);
  if (!cls.growing(a))
    throw PreconditionError("convert_case2_to_growing: seed letter is not growing");

  std::map<Triple, std::size_t> index;
  std::vector<Triple> triples;
  std::vector<std::vector<std::size_t>> images;
  auto add = [&](const Triple& t) {
    auto [it, inserted] = index.emplace(t, triples.size());
    if (inserted) {
      if (triples.size() >= config.triple_cap)
        throw ResourceLimitError("case-2 triple closure exceeds the configured cap");
      triples.push_back(t);
    }
    return it->second;
  };
  add({Word{}, a, Word{}});
  for (std::size_t done = 0; done < triples.size(); ++done) {
    const Triple t = triples[done];
    const Word z = apply(sigma, t.l) + sigma.image(t.g) + apply(sigma, t.w);
    std::vector<std::size_t> img;
    for (const auto& part : split_at_growing(z, cls))
      img.push_back(add(part));
    images.push_back(std::move(img));
  }

  // the first triple of the image cycles; its cycle gives the seed
  std::map<std::size_t, std::size_t> pos;
  std::size_t cur = 0;
  while (!pos.count(cur)) {
    pos.emplace(cur, pos.size());
    cur = images[cur].front();
  }
  TripleConversion out;
  out.q = pos.size() - pos[cur];

  std::vector<bool> keep(triples.size(), false);
  std::vector<std::size_t> todo{cur};
  keep[cur] = true;
  while (!todo.empty()) {
    auto t = todo.back();
    todo.pop_back();
    for (auto s : images[t])
      if (!keep[s]) {
        keep[s] = true;
        todo.push_back(s);
      }
  }
  std::vector<Letter> names;
  std::vector<Word> tau_images, chi_images;
  for (std::size_t t = 0; t < triples.size(); ++t) {
    if (!keep[t])
      continue;
    names.push_back(triple_letter(triples[t]));
    std::vector<Letter> img;
    for (auto s : images[t])
      img.push_back(triple_letter(triples[s]));
    tau_images.emplace_back(std::move(img));
    chi_images.push_back(triples[t].l + Word{triples[t].g} + triples[t].w);
  }
  Alphabet alpha(names);
  Morphism tau(alpha, alpha, std::move(tau_images));
  out.chi = Morphism(alpha, sigma.domain(), std::move(chi_images));
  for (Letter t : alpha)
    HD0L_ASSERT(apply(out.chi, tau.image(t)) == apply(sigma, out.chi.image(t)),
                "triple substitution does not commute with chi");
  out.seed = triple_letter(triples[cur]);
  out.tau = power(tau, out.q);
  HD0L_ASSERT(is_prolongable(out.tau, out.seed), "triple substitution is not prolongable");
  return out;
}

PansiotCase pansiot_classify(const Morphism& sigma, Letter a, const DecisionConfig& config) {
  const auto cls = classify_letters(sigma);
  if (cls.all_growing())
    throw PreconditionError("pansiot_classify: every letter is growing");
  const auto growing = cls.growing_letters();

  struct Ends {
    Letter first, last;
    Word lead, trail;
  };
  std::map<Letter, Ends> ends;
  for (Letter g : growing) {
    const Word& img = sigma.image(g);
    std::size_t f = img.size(), l = 0;
    for (std::size_t i = 0; i < img.size(); ++i)
      if (cls.growing(img[i])) {
        f = std::min(f, i);
        l = i;
      }
    HD0L_ASSERT(f < img.size(), "growing letter without growing image letter");
    ends[g] = {img[f], img[l], img.prefix(f), img.substr(l + 1)};
  }

  PansiotCase out;
  for (Letter b : growing) {
    // sigma^k(b) = P·L_k·T_k with T_{k+1} = trail(L_k)·sigma(T_k)
    Letter cur = b;
    Word trail, lead;
    for (std::size_t k = 1; k <= growing.size(); ++k) {
      trail = ends[cur].trail + apply(sigma, trail);
      cur = ends[cur].last;
      if (cur == b) {
        if (!trail.empty()) {
          out.case3 = Case3Witness{b, Side::Right, trail, k};
          return out;
        }
        break;
      }
    }
    cur = b;
    for (std::size_t k = 1; k <= growing.size(); ++k) {
      lead = apply(sigma, lead) + ends[cur].lead;
      cur = ends[cur].first;
      if (cur == b) {
        if (!lead.empty()) {
          out.case3 = Case3Witness{b, Side::Left, lead, k};
          return out;
        }
        break;
      }
    }
  }
  out.case2 = convert_case2_to_growing(sigma, a, config);
  return out;
}

DecisionOutcome decide_substitutive(const SubstitutiveRepresentation& rep,
                                    const DecisionConfig& config) {
  if (!rep.kappa.is_coding())
    throw PreconditionError("decide_substitutive: kappa is not a coding");
  DecisionOutcome out;
  if (classify_letters(rep.tau).all_growing()) {
    out = decide_growing(rep, config);
    out.trace.insert(out.trace.begin(), "growing substitution");
  } else {
    auto pc = pansiot_classify(rep.tau, rep.seed, config);
    if (pc.case3) {
      const auto& w = *pc.case3;
      auto cand = case3_period_candidate(rep.tau, w.u, w.power);
      const Word v0 = primitive_root(apply(rep.kappa, cand.u_prime));
      std::vector<std::string> trace{
          "non-growing substitution, unbounded non-growing blocks at " + w.b.name() +
              " (power " + std::to_string(w.power) + ")",
          "candidate period " + to_string(v0)};
      auto up = finalcheck(rep, v0);
      if (up)
        out = DecisionOutcome::yes(*up, with(std::move(trace), "finalcheck: " + to_string(*up)));
      else
        out = DecisionOutcome::no(Diagnostic::FinalcheckFailed, true,
                                  with(std::move(trace), "finalcheck rejects " + to_string(v0)));
    } else {
      const auto& conv = *pc.case2;
      auto norm = normalize(conv.tau, compose(rep.kappa, conv.chi), conv.seed);
      HD0L_ASSERT(!norm.bounded(), "triple conversion produced a finite word");
      HD0L_ASSERT(classify_letters(norm.rep->tau).all_growing(),
                  "triple conversion is not growing");
      out = decide_growing(*norm.rep, config);
      out.trace.insert(out.trace.begin(),
                       "non-growing substitution, bounded non-growing blocks: " +
                           std::to_string(conv.tau.domain().size()) + " triples");
    }
  }
  if (out.periodic)
    confirm_prefix(rep, *out.witness);
  return out;
}

} // namespace hd0l
