#include "hd0l/factors.hpp"

#include <algorithm>
#include <map>
#include <unordered_map>

namespace hd0l {

namespace {

// Integer-indexed block substitution; block names are only materialized on
// request since blocks can be long.
struct BlockCore {
  std::vector<Word> blocks;
  std::vector<std::vector<std::size_t>> images;
  std::size_t seed = 0;
};

void require_non_erasing(const Morphism& sigma, Letter a, const char* who) {
  if (!sigma.is_endomorphism())
    throw DomainError(std::string(who) + ": not an endomorphism");
  if (sigma.is_erasing())
    throw PreconditionError(std::string(who) + ": substitution is erasing");
  if (!is_prolongable(sigma, a))
    throw PreconditionError(std::string(who) + ": not prolongable on " + a.name());
}

BlockCore build_blocks(const Morphism& sigma, Letter a, std::size_t n) {
  if (n == 0)
    throw DomainError("factor length must be positive");
  constexpr std::uint64_t kBase = 0x9E3779B97F4A7C15ull;
  std::uint64_t top = 1; // kBase^(n-1)
  for (std::size_t i = 1; i < n; ++i)
    top *= kBase;

  BlockCore core;
  std::unordered_multimap<std::uint64_t, std::size_t> index;
  // id of the block img[from, from+n) with hash h, added when new
  auto add = [&](const std::vector<Letter>& img, std::size_t from, std::uint64_t h) {
    auto [lo, hi] = index.equal_range(h);
    for (auto it = lo; it != hi; ++it) {
      const auto& b = core.blocks[it->second].letters();
      if (std::equal(b.begin(), b.end(), img.begin() + static_cast<std::ptrdiff_t>(from)))
        return it->second;
    }
    const std::size_t id = core.blocks.size();
    core.blocks.emplace_back(std::vector<Letter>(
        img.begin() + static_cast<std::ptrdiff_t>(from),
        img.begin() + static_cast<std::ptrdiff_t>(from + n)));
    index.emplace(h, id);
    return id;
  };
  auto hash_of = [&](const std::vector<Letter>& img, std::size_t from) {
    std::uint64_t h = 0;
    for (std::size_t i = from; i < from + n; ++i)
      h = h * kBase + img[i].id() + 1;
    return h;
  };

  const Word start = expand_fixed_point(sigma, a, n);
  core.seed = add(start.letters(), 0, hash_of(start.letters(), 0));
  for (std::size_t done = 0; done < core.blocks.size(); ++done) {
    const Word img = apply(sigma, core.blocks[done]);
    const auto& v = img.letters();
    const std::size_t lead = sigma.image(core.blocks[done].front()).size();
    std::vector<std::size_t> out;
    out.reserve(lead);
    std::uint64_t h = hash_of(v, 0);
    for (std::size_t j = 0; j + n <= v.size(); ++j) {
      if (j > 0)
        h = (h - (v[j - 1].id() + 1) * top) * kBase + v[j + n - 1].id() + 1;
      auto id = add(v, j, h);
      if (j < lead)
        out.push_back(id);
    }
    core.images.push_back(std::move(out));
  }
  return core;
}

struct Recurrence {
  std::vector<bool> recurrent;
  std::size_t index = 0;
};

// R_0 = letters(u), R_{k+1} = letters(sigma(R_k)); the sequence is
// eventually periodic and the recurrent letters are the union over the cycle.
Recurrence recurrence_of(const std::vector<std::vector<std::size_t>>& images,
                         std::size_t seed) {
  const std::size_t m = images.size();
  using Set = std::vector<bool>;
  std::vector<Set> history;
  std::map<Set, std::size_t> seen;
  Set cur(m, false);
  for (std::size_t j = 1; j < images[seed].size(); ++j)
    cur[images[seed][j]] = true;
  std::size_t cycle_start = 0;
  while (true) {
    auto it = seen.find(cur);
    if (it != seen.end()) {
      cycle_start = it->second;
      break;
    }
    seen.emplace(cur, history.size());
    history.push_back(cur);
    Set next(m, false);
    for (std::size_t b = 0; b < m; ++b)
      if (cur[b])
        for (auto c : images[b])
          next[c] = true;
    cur = std::move(next);
  }

  Recurrence out;
  out.recurrent.assign(m, false);
  for (std::size_t k = cycle_start; k < history.size(); ++k)
    for (std::size_t b = 0; b < m; ++b)
      if (history[k][b])
        out.recurrent[b] = true;

  std::size_t big_k = history.size();
  while (big_k > 0) {
    const auto& s = history[big_k - 1];
    bool inside = true;
    for (std::size_t b = 0; b < m && inside; ++b)
      inside = !s[b] || out.recurrent[b];
    if (!inside)
      break;
    --big_k;
  }

  // |sigma^K(seed)| through per-letter lengths
  std::vector<std::size_t> len(m, 1);
  std::size_t total = 1;
  std::vector<std::size_t> u(images[seed].begin() + 1, images[seed].end());
  for (std::size_t k = 0; k < big_k; ++k) {
    for (auto b : u)
      total += len[b];
    std::vector<std::size_t> next(m, 0);
    for (std::size_t b = 0; b < m; ++b)
      for (auto c : images[b]) {
        next[b] += len[c];
        if (next[b] > (std::size_t{1} << 40))
          throw ResourceLimitError("recurrence index exceeds the length bound");
      }
    len = std::move(next);
  }
  out.index = total;
  return out;
}

// Backtracking with arc consistency over per-factor decompositions.
struct Candidate {
  std::size_t s; // |s_B|
  std::size_t p; // |p_B|
};

class PairSolver {
public:
  PairSolver(std::vector<std::vector<Candidate>> domains,
             std::vector<std::pair<std::size_t, std::size_t>> edges, std::size_t period)
      : domains_(std::move(domains)), edges_(std::move(edges)), period_(period) {}

  bool solve() { return search(domains_); }

private:
  bool compatible(const Candidate& left, const Candidate& right) const {
    auto joint = left.p + right.s;
    return joint == 0 || joint == period_;
  }

  bool propagate(std::vector<std::vector<Candidate>>& d) const {
    for (bool changed = true; changed;) {
      changed = false;
      for (auto [x, y] : edges_) {
        auto keep_left = [&](const Candidate& c) {
          return std::any_of(d[y].begin(), d[y].end(),
                             [&](const Candidate& o) { return compatible(c, o); });
        };
        auto keep_right = [&](const Candidate& c) {
          return std::any_of(d[x].begin(), d[x].end(),
                             [&](const Candidate& o) { return compatible(o, c); });
        };
        auto before = d[x].size() + d[y].size();
        std::erase_if(d[x], [&](const Candidate& c) { return !keep_left(c); });
        std::erase_if(d[y], [&](const Candidate& c) { return !keep_right(c); });
        if (d[x].empty() || d[y].empty())
          return false;
        if (x == y)
          std::erase_if(d[x], [&](const Candidate& c) { return !compatible(c, c); });
        if (d[x].empty())
          return false;
        changed = changed || d[x].size() + d[y].size() != before;
      }
    }
    return true;
  }

  bool search(std::vector<std::vector<Candidate>> d) const {
    if (!propagate(d))
      return false;
    std::size_t pick = d.size();
    for (std::size_t i = 0; i < d.size(); ++i)
      if (d[i].size() > 1 && (pick == d.size() || d[i].size() < d[pick].size()))
        pick = i;
    if (pick == d.size())
      return true;
    for (const auto& c : d[pick]) {
      auto next = d;
      next[pick] = {c};
      if (search(std::move(next)))
        return true;
    }
    return false;
  }

  std::vector<std::vector<Candidate>> domains_;
  std::vector<std::pair<std::size_t, std::size_t>> edges_;
  std::size_t period_;
};

std::vector<Candidate> decompositions(const Word& image, const Word& v) {
  const std::size_t m = v.size();
  std::vector<Candidate> out;
  for (std::size_t s = 0; s <= m; ++s)
    for (std::size_t r = 0; r <= 2; ++r) {
      if (s + r * m > 2 * m)
        continue;
      const std::size_t p = 2 * m - s - r * m;
      if (p > m)
        continue;
      Word built = v.substr(m - s) + power_word(v, r) + v.prefix(p);
      if (built == image)
        out.push_back({s, p});
    }
  return out;
}

} // namespace

std::set<Word> factors_of_length(const Morphism& sigma, Letter a, std::size_t n) {
  require_non_erasing(sigma, a, "factors_of_length");
  auto core = build_blocks(sigma, a, n);
  return {core.blocks.begin(), core.blocks.end()};
}

BlockSubstitution block_substitution(const Morphism& sigma, Letter a, std::size_t n) {
  require_non_erasing(sigma, a, "block_substitution");
  auto core = build_blocks(sigma, a, n);
  std::vector<Letter> names;
  for (const auto& b : core.blocks)
    names.push_back(Letter::intern("[" + to_string(b) + "]"));
  Alphabet alpha(names);
  std::vector<Word> images;
  for (const auto& img : core.images) {
    std::vector<Letter> w;
    for (auto id : img)
      w.push_back(names[id]);
    images.emplace_back(std::move(w));
  }
  return {Morphism(alpha, alpha, std::move(images)), names[core.seed], std::move(core.blocks)};
}

RecurrentLetters recurrent_letters(const Morphism& sigma, Letter a) {
  if (!has_stable_letter_sets(sigma))
    throw PreconditionError("recurrent_letters: (P2) does not hold");
  if (sigma.image(a).empty() || sigma.image(a).front() != a)
    throw PreconditionError("recurrent_letters: sigma(a) does not start with a");
  const Word u = sigma.image(a).substr(1);
  return {letters_of(apply(sigma, u)), 1 + u.size()};
}

FactorSet recurrent_factors(const Morphism& sigma, Letter a, std::size_t n) {
  require_non_erasing(sigma, a, "recurrent_factors");
  auto core = build_blocks(sigma, a, n);
  auto rec = recurrence_of(core.images, core.seed);
  FactorSet out;
  out.n = n;
  out.index = rec.index;
  for (std::size_t b = 0; b < core.blocks.size(); ++b) {
    out.factors.insert(core.blocks[b]);
    if (rec.recurrent[b])
      out.recurrent.insert(core.blocks[b]);
  }
  return out;
}

bool lang_eq_periodic(const Word& u, const Word& v) {
  if (u.empty() || v.empty())
    throw PreconditionError("lang_eq_periodic: empty word");
  const Word ru = primitive_root(u), rv = primitive_root(v);
  if (ru.size() != rv.size())
    return false;
  const Word doubled = ru + ru;
  return std::search(doubled.begin(), doubled.end(), rv.begin(), rv.end()) != doubled.end();
}

std::optional<UltimatelyPeriodicWord> finalcheck(const SubstitutiveRepresentation& rep,
                                                 const Word& v) {
  if (v.empty())
    throw PreconditionError("finalcheck: empty period");
  if (!rep.kappa.is_coding())
    throw PreconditionError("finalcheck: kappa is not a coding");
  const std::size_t m = v.size();
  const auto f2 = recurrent_factors(rep.tau, rep.seed, 2 * m);
  const auto f4 = recurrent_factors(rep.tau, rep.seed, 4 * m);

  std::vector<Word> vars(f2.recurrent.begin(), f2.recurrent.end());
  std::map<Word, std::size_t> var_of;
  std::vector<std::vector<Candidate>> domains;
  for (std::size_t i = 0; i < vars.size(); ++i) {
    var_of.emplace(vars[i], i);
    domains.push_back(decompositions(apply(rep.kappa, vars[i]), v));
    if (domains.back().empty())
      return std::nullopt;
  }
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  for (const auto& w : f4.recurrent) {
    auto left = var_of.find(w.prefix(2 * m));
    auto right = var_of.find(w.substr(2 * m));
    HD0L_ASSERT(left != var_of.end() && right != var_of.end(),
                "half of a recurrent factor is not recurrent");
    edges.emplace_back(left->second, right->second);
  }
  if (!PairSolver(std::move(domains), std::move(edges), m).solve())
    return std::nullopt;

  // Every length-4|v| factor from f4.index on is recurrent, so the tail from
  // there tiles into consistent blocks and has period |v|.
  const std::size_t horizon = f4.index + 5 * m;
  const Word x = rep.prefix(horizon);
  std::size_t c = horizon - m;
  while (c > 0 && x[c - 1] == x[c - 1 + m])
    --c;
  HD0L_ASSERT(c <= f4.index, "periodic tail does not start by the recurrence index");
  return canonicalize_up(x.prefix(c), x.substr(c, m));
}

} // namespace hd0l
