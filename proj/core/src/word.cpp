#include "hd0l/word.hpp"

#include <algorithm>
#include <deque>
#include <mutex>
#include <shared_mutex>
#include <sstream>
#include <unordered_map>

namespace hd0l {

namespace {

class SymbolTable {
public:
  SymbolTable() { names_.emplace_back("?"); }

  std::uint32_t intern(std::string_view name) {
    {
      std::shared_lock lock(mutex_);
      if (auto it = ids_.find(std::string(name)); it != ids_.end())
        return it->second;
    }
    std::unique_lock lock(mutex_);
    auto [it, inserted] = ids_.try_emplace(
        std::string(name), static_cast<std::uint32_t>(names_.size()));
    if (inserted)
      names_.emplace_back(name);
    return it->second;
  }

  const std::string& name(std::uint32_t id) const {
    std::shared_lock lock(mutex_);
    return names_.at(id);
  }

private:
  mutable std::shared_mutex mutex_;
  std::deque<std::string> names_; // stable references
  std::unordered_map<std::string, std::uint32_t> ids_;
};

SymbolTable& symbols() {
  static SymbolTable table;
  return table;
}

// Letters whose every iterate eventually becomes empty.
std::vector<bool> mortal_letters(const Morphism& sigma) {
  const auto& dom = sigma.domain();
  std::vector<bool> mortal(dom.size(), false);
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < dom.size(); ++i) {
      if (mortal[i])
        continue;
      bool all = std::all_of(
          sigma.image_at(i).begin(), sigma.image_at(i).end(),
          [&](Letter c) { return mortal[dom.index_of(c)]; });
      if (all) {
        mortal[i] = true;
        changed = true;
      }
    }
  }
  return mortal;
}

} // namespace

Letter Letter::intern(std::string_view name) {
  return Letter(symbols().intern(name));
}

const std::string& Letter::name() const { return symbols().name(id_); }

Word Word::from_chars(std::string_view chars) {
  std::vector<Letter> out;
  out.reserve(chars.size());
  for (char c : chars)
    out.push_back(Letter::intern(std::string_view(&c, 1)));
  return Word(std::move(out));
}

Word Word::substr(std::size_t pos, std::size_t len) const {
  if (pos >= letters_.size())
    return {};
  len = std::min(len, letters_.size() - pos);
  return Word(std::vector<Letter>(letters_.begin() + static_cast<std::ptrdiff_t>(pos),
                                  letters_.begin() + static_cast<std::ptrdiff_t>(pos + len)));
}

bool Word::starts_with(const Word& p) const {
  return p.size() <= size() && std::equal(p.begin(), p.end(), begin());
}

bool Word::ends_with(const Word& s) const {
  return s.size() <= size() &&
         std::equal(s.begin(), s.end(), end() - static_cast<std::ptrdiff_t>(s.size()));
}

Word operator+(const Word& x, const Word& y) {
  std::vector<Letter> out;
  out.reserve(x.size() + y.size());
  out.insert(out.end(), x.begin(), x.end());
  out.insert(out.end(), y.begin(), y.end());
  return Word(std::move(out));
}

std::string to_string(const Word& w) {
  bool compact = std::all_of(w.begin(), w.end(),
                             [](Letter l) { return l.name().size() == 1; });
  std::string out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (!compact && i > 0)
      out += ' ';
    out += w[i].name();
  }
  return out;
}

Word power_word(const Word& w, std::size_t k) {
  std::vector<Letter> out;
  out.reserve(w.size() * k);
  for (std::size_t i = 0; i < k; ++i)
    out.insert(out.end(), w.begin(), w.end());
  return Word(std::move(out));
}

std::vector<Letter> letters_of(const Word& w) {
  std::vector<Letter> out(w.begin(), w.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// ---------------------------------------------------------------- Alphabet

Alphabet::Alphabet() : impl_(std::make_shared<Impl>()) {}

Alphabet::Alphabet(std::vector<Letter> letters) {
  auto impl = std::make_shared<Impl>();
  impl->letters = std::move(letters);
  if (!impl->letters.empty()) {
    auto [lo, hi] = std::minmax_element(impl->letters.begin(), impl->letters.end());
    impl->min_id = lo->id();
    impl->dense.assign(hi->id() - lo->id() + 1, -1);
    for (std::size_t i = 0; i < impl->letters.size(); ++i) {
      auto& slot = impl->dense[impl->letters[i].id() - impl->min_id];
      if (slot != -1)
        throw DomainError("duplicate letter '" + impl->letters[i].name() +
                          "' in alphabet");
      slot = static_cast<std::int32_t>(i);
    }
  }
  impl_ = std::move(impl);
}

Alphabet Alphabet::from_chars(std::string_view chars) {
  return Alphabet(Word::from_chars(chars).letters());
}

std::optional<std::size_t> Alphabet::find(Letter l) const {
  if (l.id() < impl_->min_id || l.id() - impl_->min_id >= impl_->dense.size())
    return std::nullopt;
  auto idx = impl_->dense[l.id() - impl_->min_id];
  if (idx < 0)
    return std::nullopt;
  return static_cast<std::size_t>(idx);
}

std::size_t Alphabet::index_of(Letter l) const {
  if (auto i = find(l))
    return *i;
  throw DomainError("letter '" + l.name() + "' is not in the alphabet");
}

bool Alphabet::contains_all(const Word& w) const {
  return std::all_of(w.begin(), w.end(), [&](Letter l) { return contains(l); });
}

bool Alphabet::includes(const Alphabet& other) const {
  return std::all_of(other.begin(), other.end(),
                     [&](Letter l) { return contains(l); });
}

// ---------------------------------------------------------------- Morphism

Morphism::Morphism(Alphabet domain, Alphabet codomain, std::vector<Word> images)
    : domain_(std::move(domain)), codomain_(std::move(codomain)),
      images_(std::move(images)) {
  if (images_.size() != domain_.size())
    throw DomainError("morphism needs exactly one image per domain letter");
  for (std::size_t i = 0; i < images_.size(); ++i) {
    for (Letter l : images_[i]) {
      if (!codomain_.contains(l))
        throw DomainError("image of '" + domain_[i].name() +
                          "' uses letter '" + l.name() +
                          "' outside the codomain");
    }
  }
}

Morphism Morphism::from_chars(
    std::initializer_list<std::pair<char, std::string_view>> rules) {
  std::string dom;
  for (auto& [c, img] : rules)
    dom += c;
  return from_chars(rules, dom);
}

Morphism Morphism::from_chars(
    std::initializer_list<std::pair<char, std::string_view>> rules,
    std::string_view codomain) {
  std::string dom;
  std::vector<Word> images;
  for (auto& [c, img] : rules) {
    dom += c;
    images.push_back(Word::from_chars(img));
  }
  return Morphism(Alphabet::from_chars(dom), Alphabet::from_chars(codomain),
                  std::move(images));
}

Morphism Morphism::identity(const Alphabet& a) {
  std::vector<Word> images;
  images.reserve(a.size());
  for (Letter l : a)
    images.push_back(Word{l});
  return Morphism(a, a, std::move(images));
}

bool Morphism::is_coding() const {
  return std::all_of(images_.begin(), images_.end(),
                     [](const Word& w) { return w.size() == 1; });
}

bool Morphism::is_erasing() const {
  return std::any_of(images_.begin(), images_.end(),
                     [](const Word& w) { return w.empty(); });
}

std::size_t Morphism::max_image_length() const {
  std::size_t m = 0;
  for (auto& w : images_)
    m = std::max(m, w.size());
  return m;
}

Morphism Morphism::restrict_to(const Alphabet& sub) const {
  std::vector<Word> images;
  images.reserve(sub.size());
  for (Letter l : sub)
    images.push_back(image(l));
  return Morphism(sub, is_endomorphism() ? sub : codomain_, std::move(images));
}

Morphism Morphism::restrict_domain(const Alphabet& sub) const {
  std::vector<Word> images;
  images.reserve(sub.size());
  for (Letter l : sub)
    images.push_back(image(l));
  return Morphism(sub, codomain_, std::move(images));
}

std::string to_string(const Morphism& m) {
  std::ostringstream os;
  os << '{';
  for (std::size_t i = 0; i < m.domain().size(); ++i) {
    if (i)
      os << ", ";
    os << m.domain()[i].name() << "->" << (m.image_at(i).empty() ? "ε" : to_string(m.image_at(i)));
  }
  os << '}';
  return os.str();
}

Word apply(const Morphism& m, const Word& x) {
  return apply_prefix(m, x, SIZE_MAX);
}

Word apply_prefix(const Morphism& m, const Word& x, std::size_t limit) {
  std::vector<Letter> out;
  for (Letter l : x) {
    const Word& img = m.image_at(m.domain().index_of(l));
    std::size_t take = std::min(img.size(), limit - out.size());
    out.insert(out.end(), img.begin(), img.begin() + static_cast<std::ptrdiff_t>(take));
    if (out.size() >= limit)
      break;
  }
  return Word(std::move(out));
}

Morphism compose(const Morphism& outer, const Morphism& inner) {
  if (!outer.domain().includes(inner.codomain()))
    throw DomainError("compose: inner codomain is not inside outer domain");
  std::size_t total = 0;
  for (const Word& w : inner.images())
    for (Letter l : w) {
      total += outer.image(l).size();
      if (total > kMaxComposedLetters)
        throw ResourceLimitError("compose: images exceed " +
                                 std::to_string(kMaxComposedLetters) + " letters");
    }
  std::vector<Word> images;
  images.reserve(inner.domain().size());
  for (const Word& w : inner.images())
    images.push_back(apply(outer, w));
  return Morphism(inner.domain(), outer.codomain(), std::move(images));
}

Morphism power(const Morphism& sigma, std::size_t k) {
  if (!sigma.is_endomorphism())
    throw DomainError("power: morphism is not an endomorphism");
  Morphism result = Morphism::identity(sigma.domain());
  Morphism base = sigma;
  while (k > 0) {
    if (k & 1)
      result = compose(result, base);
    k >>= 1;
    if (k > 0)
      base = compose(base, base);
  }
  return result;
}

bool is_prolongable(const Morphism& sigma, Letter a) {
  if (!sigma.is_endomorphism() || !sigma.domain().contains(a))
    return false;
  const Word& img = sigma.image(a);
  if (img.size() < 2 || img.front() != a)
    return false;
  auto mortal = mortal_letters(sigma);
  return std::any_of(img.begin() + 1, img.end(), [&](Letter c) {
    return !mortal[sigma.domain().index_of(c)];
  });
}

Word expand_fixed_point(const Morphism& sigma, Letter a, std::size_t n) {
  if (!is_prolongable(sigma, a))
    throw PreconditionError("expand_fixed_point: morphism is not prolongable on '" +
                            a.name() + "'");
  Word w{a};
  while (w.size() < n)
    w = apply_prefix(sigma, w, n);
  return w.prefix(n);
}

Word expand_morphic(const Morphism& sigma, const Morphism& phi, Letter a,
                    std::size_t n) {
  constexpr std::size_t kBudget = std::size_t{1} << 26;
  std::size_t m = std::max<std::size_t>(n, 16);
  while (true) {
    Word y = expand_fixed_point(sigma, a, m);
    Word x = apply_prefix(phi, y, n);
    if (x.size() >= n)
      return x;
    if (m >= kBudget)
      throw ResourceLimitError("expand_morphic: image too short after expanding " +
                               std::to_string(m) + " letters");
    m *= 2;
  }
}

// ---------------------------------------------------------------- UP words

Word UltimatelyPeriodicWord::prefix(std::size_t n) const {
  std::vector<Letter> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n && i < preperiod.size(); ++i)
    out.push_back(preperiod[i]);
  for (std::size_t i = 0; out.size() < n; ++i)
    out.push_back(period[i % period.size()]);
  return Word(std::move(out));
}

std::string to_string(const UltimatelyPeriodicWord& x) {
  return "(" + to_string(x.preperiod) + ")(" + to_string(x.period) + ")^ω";
}

Word primitive_root(const Word& v) {
  if (v.empty())
    throw PreconditionError("primitive_root: empty word");
  const std::size_t n = v.size();
  std::vector<std::size_t> border(n, 0);
  for (std::size_t j = 1, k = 0; j < n; ++j) {
    while (k > 0 && v[j] != v[k])
      k = border[k - 1];
    if (v[j] == v[k])
      ++k;
    border[j] = k;
  }
  std::size_t q = n - border[n - 1];
  return n % q == 0 ? v.prefix(q) : v;
}

UltimatelyPeriodicWord canonicalize_up(const Word& u, const Word& v) {
  if (v.empty())
    throw PreconditionError("canonicalize_up: period must be non-empty");
  std::vector<Letter> pre = u.letters();
  std::vector<Letter> per = primitive_root(v).letters();
  while (!pre.empty() && pre.back() == per.back()) {
    std::rotate(per.rbegin(), per.rbegin() + 1, per.rend());
    pre.pop_back();
  }
  return {Word(std::move(pre)), Word(std::move(per))};
}

// ---------------------------------------------------------------- system

void HD0LSystem::validate() const {
  std::vector<std::string> problems;
  if (!(sigma.domain() == A) || !(sigma.codomain() == A))
    problems.emplace_back("sigma must be an endomorphism of A*");
  if (!(phi.domain() == A))
    problems.emplace_back("phi must be defined on A");
  if (!(phi.codomain() == B))
    problems.emplace_back("phi must map into B*");
  if (w.empty())
    problems.emplace_back("w must be non-empty");
  if (!A.contains_all(w))
    problems.emplace_back("w must be a word over A");
  if (!problems.empty()) {
    std::string msg;
    for (auto& p : problems)
      msg += (msg.empty() ? "" : "; ") + p;
    throw ValidationError(msg);
  }
}

} // namespace hd0l
