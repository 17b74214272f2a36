#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hd0l/errors.hpp"

namespace hd0l {

/// Interned symbol. Equality is identity of the interned display string.
class Letter {
public:
  constexpr Letter() = default;

  static Letter intern(std::string_view name);

  std::uint32_t id() const { return id_; }
  const std::string& name() const;

  friend constexpr bool operator==(Letter, Letter) = default;
  friend constexpr auto operator<=>(Letter, Letter) = default;

private:
  constexpr explicit Letter(std::uint32_t id) : id_(id) {}
  std::uint32_t id_ = 0;
};

/// Finite word over interned letters. Immutable once built.
class Word {
public:
  using const_iterator = std::vector<Letter>::const_iterator;

  Word() = default;
  explicit Word(std::vector<Letter> letters) : letters_(std::move(letters)) {}
  Word(std::initializer_list<Letter> letters) : letters_(letters) {}

  /// One letter per character: "aba" -> a, b, a.
  static Word from_chars(std::string_view chars);

  std::size_t size() const { return letters_.size(); }
  bool empty() const { return letters_.empty(); }
  Letter operator[](std::size_t i) const { return letters_[i]; }
  Letter front() const { return letters_.front(); }
  Letter back() const { return letters_.back(); }
  const_iterator begin() const { return letters_.begin(); }
  const_iterator end() const { return letters_.end(); }
  std::span<const Letter> view() const { return letters_; }
  const std::vector<Letter>& letters() const { return letters_; }

  Word substr(std::size_t pos, std::size_t len = SIZE_MAX) const;
  Word prefix(std::size_t len) const { return substr(0, len); }
  bool starts_with(const Word& p) const;
  bool ends_with(const Word& s) const;

  friend Word operator+(const Word& x, const Word& y);
  friend bool operator==(const Word&, const Word&) = default;
  friend auto operator<=>(const Word& x, const Word& y) {
    return x.letters_ <=> y.letters_;
  }

private:
  std::vector<Letter> letters_;
};

/// Letters are concatenated when every name is one character, otherwise
/// joined with single spaces.
std::string to_string(const Word& w);

Word power_word(const Word& w, std::size_t k);

/// Sorted, de-duplicated letters occurring in w.
std::vector<Letter> letters_of(const Word& w);

/// Ordered finite set of letters with O(1) index lookup.
class Alphabet {
public:
  Alphabet();
  explicit Alphabet(std::vector<Letter> letters);
  static Alphabet from_chars(std::string_view chars);

  std::size_t size() const { return impl_->letters.size(); }
  bool empty() const { return size() == 0; }
  Letter operator[](std::size_t i) const { return impl_->letters[i]; }
  const std::vector<Letter>& letters() const { return impl_->letters; }
  auto begin() const { return impl_->letters.begin(); }
  auto end() const { return impl_->letters.end(); }

  std::optional<std::size_t> find(Letter l) const;
  bool contains(Letter l) const { return find(l).has_value(); }
  /// Throws DomainError when l is absent.
  std::size_t index_of(Letter l) const;
  bool contains_all(const Word& w) const;
  bool includes(const Alphabet& other) const;

  friend bool operator==(const Alphabet& x, const Alphabet& y) {
    return x.letters() == y.letters();
  }

private:
  struct Impl {
    std::vector<Letter> letters;
    std::uint32_t min_id = 0;
    std::vector<std::int32_t> dense; // id - min_id -> index or -1
  };
  std::shared_ptr<const Impl> impl_;
};

/// Total mapping from a domain alphabet to words over a codomain alphabet.
class Morphism {
public:
  Morphism() = default;
  /// images[i] is the image of domain[i]; validated against codomain.
  Morphism(Alphabet domain, Alphabet codomain, std::vector<Word> images);

  /// Convenience for tests: {{'a', "ab"}, {'b', "a"}} with one-char letters.
  static Morphism from_chars(
      std::initializer_list<std::pair<char, std::string_view>> rules);
  static Morphism from_chars(
      std::initializer_list<std::pair<char, std::string_view>> rules,
      std::string_view codomain);
  static Morphism identity(const Alphabet& a);

  const Alphabet& domain() const { return domain_; }
  const Alphabet& codomain() const { return codomain_; }
  const std::vector<Word>& images() const { return images_; }
  const Word& image(Letter l) const { return images_[domain_.index_of(l)]; }
  const Word& image_at(std::size_t i) const { return images_[i]; }

  bool is_endomorphism() const { return domain_ == codomain_; }
  bool is_coding() const;
  bool is_erasing() const;
  std::size_t max_image_length() const;

  /// Restriction to a sub-alphabet closed under the morphism.
  Morphism restrict_to(const Alphabet& sub) const;
  /// Same images on a smaller domain; codomain unchanged.
  Morphism restrict_domain(const Alphabet& sub) const;

  friend bool operator==(const Morphism&, const Morphism&) = default;

private:
  Alphabet domain_;
  Alphabet codomain_;
  std::vector<Word> images_;
};

std::string to_string(const Morphism& m);

Word apply(const Morphism& m, const Word& x);
/// apply() truncated to the first `limit` letters of the result.
Word apply_prefix(const Morphism& m, const Word& x, std::size_t limit);
/// Throws ResourceLimitError past kMaxComposedLetters letters in total.
Morphism compose(const Morphism& outer, const Morphism& inner);
inline constexpr std::size_t kMaxComposedLetters = std::size_t{1} << 24;
/// k-fold composition; power(sigma, 0) is the identity on the domain.
Morphism power(const Morphism& sigma, std::size_t k);

/// True iff sigma(a) = a·u with u non-empty and |sigma^n(a)| unbounded.
bool is_prolongable(const Morphism& sigma, Letter a);

/// Prefix of length exactly n of sigma^omega(a).
Word expand_fixed_point(const Morphism& sigma, Letter a, std::size_t n);

/// Prefix of length n of phi(sigma^omega(a)); throws ResourceLimitError when
/// the image stays shorter than n within the expansion budget.
Word expand_morphic(const Morphism& sigma, const Morphism& phi, Letter a,
                    std::size_t n);

/// u·v^omega with v primitive and |u| minimal.
struct UltimatelyPeriodicWord {
  Word preperiod;
  Word period;

  /// First n letters of preperiod·period^omega.
  Word prefix(std::size_t n) const;

  friend bool operator==(const UltimatelyPeriodicWord&,
                         const UltimatelyPeriodicWord&) = default;
};

std::string to_string(const UltimatelyPeriodicWord& x);

UltimatelyPeriodicWord canonicalize_up(const Word& u, const Word& v);

/// Shortest r with v = r^k (failure-function based).
Word primitive_root(const Word& v);

/// Input of the HD0L ultimate periodicity question.
struct HD0LSystem {
  Alphabet A;
  Alphabet B;
  Morphism sigma;
  Morphism phi;
  Word w;

  /// Throws ValidationError listing every violated invariant.
  void validate() const;
};

} // namespace hd0l

template <> struct std::hash<hd0l::Letter> {
  std::size_t operator()(hd0l::Letter l) const noexcept { return l.id(); }
};

template <> struct std::hash<hd0l::Word> {
  std::size_t operator()(const hd0l::Word& w) const noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (auto l : w) {
      h ^= l.id() + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return static_cast<std::size_t>(h);
  }
};
