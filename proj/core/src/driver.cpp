#include "hd0l/driver.hpp"

#include <algorithm>
#include <numeric>

namespace hd0l {

namespace {

constexpr std::size_t kTableCap = std::size_t{1} << 16;
constexpr std::size_t kTableWordCap = std::size_t{1} << 20;

std::vector<std::vector<bool>> reachability(const Morphism& tau) {
  const auto& alpha = tau.domain();
  const std::size_t n = alpha.size();
  std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
  for (std::size_t x = 0; x < n; ++x) {
    std::vector<std::size_t> todo{x};
    reach[x][x] = true;
    while (!todo.empty()) {
      auto y = todo.back();
      todo.pop_back();
      for (Letter l : tau.image_at(y)) {
        auto z = alpha.index_of(l);
        if (!reach[x][z]) {
          reach[x][z] = true;
          todo.push_back(z);
        }
      }
    }
  }
  return reach;
}

// First letter of tau(x) whose image lengths tend to infinity, and the
// bounded letters before it.
struct ChainStep {
  Word lead;
  Letter next;
};

ChainStep chain_step(const Morphism& tau, const std::map<Letter, LengthClass>& cls, Letter x) {
  const Word& img = tau.image(x);
  for (std::size_t i = 0; i < img.size(); ++i)
    if (cls.at(img[i]) == LengthClass::ToInfinity)
      return {img.prefix(i), img[i]};
  throw InternalError("letter with unbounded images has no such letter in its image");
}

struct Couple {
  Morphism psi;
  std::map<Letter, LengthClass> cls;
  Word lead; // bounded letters of w before g
  Letter g;
  BoundedTable table;
  std::vector<ChainStep> chain; // chain[j] describes tau(g_j)
  std::size_t j0 = 0, n0 = 1;

  const ChainStep& step(std::size_t j) const {
    return chain[j < j0 + n0 ? j : j0 + (j - j0) % n0];
  }
  Letter letter(std::size_t j) const { return j == 0 ? g : step(j - 1).next; }
};

std::optional<Couple> make_couple(const Morphism& tau, const Morphism& psi, const Word& w) {
  Couple c;
  c.psi = psi;
  c.cls = length_classes(tau, psi);
  auto it = std::find_if(w.begin(), w.end(),
                         [&](Letter l) { return c.cls.at(l) == LengthClass::ToInfinity; });
  if (it == w.end())
    return std::nullopt;
  c.lead = w.prefix(static_cast<std::size_t>(it - w.begin()));
  c.g = *it;
  std::vector<Letter> bounded;
  for (auto [l, k] : c.cls)
    if (k != LengthClass::ToInfinity)
      bounded.push_back(l);
  c.table = bounded_prefix_cycle(tau, psi, bounded);

  std::map<Letter, std::size_t> seen;
  Letter cur = c.g;
  while (!seen.count(cur)) {
    seen.emplace(cur, c.chain.size());
    c.chain.push_back(chain_step(tau, c.cls, cur));
    cur = c.chain.back().next;
  }
  c.j0 = seen[cur];
  c.n0 = c.chain.size() - c.j0;
  return c;
}

// tau on A plus one marked copy of each chain letter g_(from+j), j < n0;
// a marked letter keeps only the part of its image from the next chain
// letter on, so its fixed point is the limit with the vanishing flanks cut.
Morphism marked_chain(const Couple& c, const Morphism& tau, std::size_t from) {
  const auto& alpha = tau.domain();
  std::vector<Letter> letters(alpha.begin(), alpha.end());
  std::vector<Word> images = tau.images();
  std::vector<Letter> marks;
  for (std::size_t j = 0; j < c.n0; ++j) {
    std::string name = "[" + c.letter(from + j).name() + "]";
    while (alpha.contains(Letter::intern(name)))
      name = "[" + name + "]";
    marks.push_back(Letter::intern(name));
  }
  for (std::size_t j = 0; j < c.n0; ++j) {
    const Word& img = tau.image(c.letter(from + j));
    const Word rest = img.substr(c.step(from + j).lead.size() + 1);
    images.push_back(Word{marks[(j + 1) % c.n0]} + rest);
    letters.push_back(marks[j]);
  }
  Alphabet marked(std::move(letters));
  return power(Morphism(marked, marked, std::move(images)), c.n0);
}

// psi(tau^base(lead of tau^m(g_j))) where tau^m(g_j) = (lead) g_(j+m) ...
Word lead_image(const Couple& c, std::size_t base, std::size_t j, std::size_t m) {
  Word out;
  for (std::size_t s = 0; s < m; ++s)
    out = out + c.table.image(base + m - 1 - s, c.step(j + s).lead);
  return out;
}

} // namespace

const char* to_string(LengthClass c) {
  switch (c) {
  case LengthClass::ToZero:
    return "ToZero";
  case LengthClass::Bounded:
    return "Bounded";
  case LengthClass::ToInfinity:
    return "ToInfinity";
  }
  return "?";
}

std::map<Letter, LengthClass> length_classes(const Morphism& tau, const Morphism& psi) {
  if (!tau.is_endomorphism())
    throw DomainError("length_classes: tau is not an endomorphism");
  if (!(psi.domain() == tau.domain()))
    throw DomainError("length_classes: psi has a different domain");
  const auto d = component_decomposition(tau);
  if (d.power != 1 || !has_stable_letter_sets(tau))
    throw PreconditionError("length_classes: (P1) and (P2) must hold");

  const auto& alpha = tau.domain();
  const std::size_t n = alpha.size();
  const auto reach = reachability(tau);
  std::vector<std::size_t> comp(n);
  std::vector<ComponentClass> kind(n);
  for (std::size_t i = 0; i < d.components.size(); ++i)
    for (Letter l : d.components[i].letters) {
      comp[alpha.index_of(l)] = i;
      kind[alpha.index_of(l)] = d.components[i].kind;
    }

  // visible[x]: some letter reachable from x has a non-empty psi image
  std::vector<bool> visible(n, false), relay(n, false);
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n && !visible[x]; ++y)
      visible[x] = reach[x][y] && !psi.image_at(y).empty();
  // relay[x]: another cyclic component downstream of x is visible
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n && !relay[x]; ++y)
      relay[x] = reach[x][y] && comp[y] != comp[x] && kind[y] != ComponentClass::Null &&
                 visible[y];

  std::map<Letter, LengthClass> out;
  for (std::size_t c = 0; c < n; ++c) {
    bool zero = true;
    for (Letter l : tau.image_at(c))
      zero = zero && psi.image(l).empty();
    bool infinite = false;
    for (std::size_t x = 0; x < n && !infinite; ++x) {
      if (!reach[c][x] || !visible[x])
        continue;
      infinite = kind[x] == ComponentClass::Primitive ||
                 (kind[x] == ComponentClass::Unit && relay[x]);
    }
    out[alpha[c]] = zero ? LengthClass::ToZero
                         : infinite ? LengthClass::ToInfinity : LengthClass::Bounded;
  }
  return out;
}

LengthClass phi_length_class(const Morphism& tau, const Morphism& psi, Letter c) {
  return length_classes(tau, psi).at(c);
}

FirstLetterOrbit first_letter_orbit(const Morphism& sigma, Letter a) {
  if (!sigma.is_endomorphism())
    throw DomainError("first_letter_orbit: not an endomorphism");
  std::map<Letter, std::size_t> seen;
  std::vector<Letter> path;
  Letter cur = a;
  while (!seen.count(cur)) {
    seen.emplace(cur, path.size());
    path.push_back(cur);
    if (sigma.image(cur).empty())
      throw PreconditionError("first_letter_orbit: first letter " + cur.name() + " is erased");
    cur = sigma.image(cur).front();
  }
  FirstLetterOrbit out;
  out.j0 = seen[cur];
  out.n0 = path.size() - out.j0;
  out.letters.assign(path.begin() + static_cast<std::ptrdiff_t>(out.j0), path.end());
  return out;
}

FirstLetterOrbit first_letter_orbit(const Morphism& sigma, const Morphism& psi, Letter a) {
  auto out = first_letter_orbit(sigma, a);
  const auto cls = length_classes(sigma, psi);
  for (Letter l : out.letters)
    if (cls.at(l) == LengthClass::ToInfinity)
      out.unbounded.push_back(l);
  return out;
}

const Word& BoundedTable::at(std::size_t n, Letter c) const {
  const std::size_t idx = n < preperiod + cycle ? n : preperiod + (n - preperiod) % cycle;
  return tables[idx].at(c);
}

Word BoundedTable::image(std::size_t n, const Word& x) const {
  Word out;
  for (Letter l : x)
    out = out + at(n, l);
  return out;
}

BoundedTable bounded_prefix_cycle(const Morphism& tau, const Morphism& psi,
                                  const std::vector<Letter>& letters) {
  std::set<Letter> closed(letters.begin(), letters.end());
  for (Letter c : letters)
    for (Letter l : tau.image(c))
      HD0L_ASSERT(closed.count(l), "bounded letters are not closed under the substitution");
  BoundedTable out;
  out.letters = letters;
  std::map<Letter, Word> cur;
  for (Letter c : letters)
    cur[c] = psi.image(c);
  std::map<std::map<Letter, Word>, std::size_t> seen;
  while (!seen.count(cur)) {
    if (out.tables.size() >= kTableCap)
      throw ResourceLimitError("bounded image table does not cycle within the cap");
    seen.emplace(cur, out.tables.size());
    out.tables.push_back(cur);
    std::map<Letter, Word> next;
    for (Letter c : letters) {
      Word w;
      for (Letter l : tau.image(c))
        w = w + cur.at(l);
      if (w.size() > kTableWordCap)
        throw ResourceLimitError("bounded image exceeds the length cap");
      next[c] = std::move(w);
    }
    cur = std::move(next);
  }
  out.preperiod = seen[cur];
  out.cycle = out.tables.size() - out.preperiod;
  return out;
}

Word ClassLimit::prefix(std::size_t n) const {
  if (n <= prefix_word.size())
    return prefix_word.prefix(n);
  const std::size_t rest = n - prefix_word.size();
  if (periodic_tail)
    return prefix_word + power_word(*periodic_tail, rest / periodic_tail->size() + 1).prefix(rest);
  HD0L_ASSERT(tail.has_value(), "class limit without tail");
  return prefix_word + tail->prefix(rest);
}

HD0LAnalysis class_limits(const HD0LSystem& system, const DecisionConfig& config) {
  system.validate();
  HD0LAnalysis out;
  const auto pn = normalize_p1_p2(system.sigma, ExponentPolicy::Minimal);
  out.exponent = pn.exponent;
  const Morphism& tau = pn.power;
  out.trace.push_back("tau = sigma^" + std::to_string(pn.exponent));

  Morphism sigma_i = Morphism::identity(system.A);
  for (std::size_t i = 0; i < pn.exponent; ++i, sigma_i = compose(system.sigma, sigma_i)) {
    auto couple = make_couple(tau, compose(system.phi, sigma_i), system.w);
    if (!couple)
      throw PreconditionError("class_limits: image lengths of w stay bounded");
    const Couple& c = *couple;
    const std::size_t m = std::lcm(c.n0, c.table.cycle);
    const std::size_t k0 = c.table.preperiod;
    std::size_t t0 = 0;
    while (t0 * m < c.j0)
      ++t0;
    out.trace.push_back("couple " + std::to_string(i) + ": seed letter " + c.g.name() +
                        ", chain (" + std::to_string(c.j0) + ", " + std::to_string(c.n0) +
                        "), bounded table (" + std::to_string(c.table.preperiod) + ", " +
                        std::to_string(c.table.cycle) + "), " + std::to_string(m) +
                        " class(es)");

    std::optional<Morphism> rho;
    for (std::size_t r = 0; r < m; ++r) {
      ClassLimit cl;
      cl.couple = i;
      cl.modulus = m;
      cl.offset = k0;
      cl.residue = r;
      const std::size_t base = k0 + r;
      cl.prefix_word = c.table.image(base, c.lead);
      for (std::size_t t = 0; t < t0; ++t)
        cl.prefix_word = cl.prefix_word + lead_image(c, base, t * m, m);
      const Word flank = lead_image(c, base, t0 * m, m);
      if (!flank.empty()) {
        cl.periodic_tail = flank;
        cl.limit = canonicalize_up(cl.prefix_word, flank);
        out.trace.push_back("  class " + std::to_string(r) + ": bounded flank repeats, limit " +
                            to_string(*cl.limit));
      } else {
        if (!rho)
          rho = marked_chain(c, tau, t0 * m);
        Morphism psi_base = compose(c.psi, power(tau, base));
        std::vector<Word> psi_images = psi_base.images();
        for (std::size_t j = 0; j < c.n0; ++j)
          psi_images.push_back(psi_base.image(c.letter(t0 * m + j)));
        Morphism psi_marked(rho->domain(), psi_base.codomain(), std::move(psi_images));
        auto norm = normalize(*rho, psi_marked, rho->domain()[tau.domain().size()]);
        HD0L_ASSERT(!norm.bounded(), "tail with unbounded lengths normalized to a finite word");
        cl.tail = *norm.rep;
        cl.tail_verdict = decide_substitutive(*cl.tail, config);
        if (cl.tail_verdict->periodic)
          cl.limit = canonicalize_up(cl.prefix_word + cl.tail_verdict->witness->preperiod,
                                     cl.tail_verdict->witness->period);
        out.trace.push_back("  class " + std::to_string(r) + ": substitutive tail on " +
                            std::to_string(cl.tail->tau.domain().size()) + " letters, " +
                            (cl.limit ? "limit " + to_string(*cl.limit) : "not periodic"));
      }
      out.classes.push_back(std::move(cl));
    }
  }
  return out;
}

bool up_equal(const UltimatelyPeriodicWord& x, const UltimatelyPeriodicWord& y) {
  return canonicalize_up(x.preperiod, x.period) == canonicalize_up(y.preperiod, y.period);
}

DecisionOutcome decide_hd0l(const HD0LSystem& system, const DecisionConfig& config) {
  system.validate();
  std::vector<std::string> trace;
  try {
    const auto pn = normalize_p1_p2(system.sigma, ExponentPolicy::Minimal);
    Morphism sigma_i = Morphism::identity(system.A);
    for (std::size_t i = 0; i < pn.exponent; ++i, sigma_i = compose(system.sigma, sigma_i)) {
      const auto cls = length_classes(pn.power, compose(system.phi, sigma_i));
      if (std::none_of(system.w.begin(), system.w.end(),
                       [&](Letter l) { return cls.at(l) == LengthClass::ToInfinity; })) {
        trace.push_back("image lengths stay bounded along n = " + std::to_string(i) +
                        " mod " + std::to_string(pn.exponent));
        return DecisionOutcome::no(Diagnostic::BoundedImage, true, std::move(trace));
      }
    }
    auto analysis = class_limits(system, config);
    trace = analysis.trace;
    for (const auto& cl : analysis.classes)
      if (!cl.limit) {
        const auto& v = *cl.tail_verdict;
        trace.insert(trace.end(), v.trace.begin(), v.trace.end());
        if (v.inconclusive)
          return DecisionOutcome::undetermined(std::move(trace));
        return DecisionOutcome::no(v.diagnostic.value_or(Diagnostic::FinalcheckFailed),
                                   v.certified, std::move(trace));
      }
    const auto& first = *analysis.classes.front().limit;
    for (const auto& cl : analysis.classes)
      if (!up_equal(*cl.limit, first)) {
        trace.push_back("class limits " + to_string(first) + " and " + to_string(*cl.limit) +
                        " differ");
        return DecisionOutcome::no(Diagnostic::ClassLimitsDiffer, true, std::move(trace));
      }
    return DecisionOutcome::yes(first, std::move(trace));
  } catch (const ResourceLimitError& e) {
    trace.push_back(std::string("resource bound: ") + e.what());
    return DecisionOutcome::undetermined(std::move(trace));
  }
}

} // namespace hd0l
