#include <doctest.h>

#include <random>

#include "hd0l/word.hpp"
#include "oracles.hpp"

using namespace hd0l;

namespace {

const Morphism fib = Morphism::from_chars({{'a', "ab"}, {'b', "a"}});

Word W(std::string_view s) { return Word::from_chars(s); }

} // namespace

TEST_CASE("apply concatenates images") {
  CHECK(apply(fib, W("ab")) == W("aba"));
  CHECK(apply(fib, W("")) == W(""));
  CHECK(apply(fib, W("ba")) == W("aab"));
  CHECK_THROWS_AS(apply(fib, W("c")), DomainError);
}

TEST_CASE("compose and power") {
  CHECK(compose(fib, fib).image(Letter::intern("a")) == W("aba"));
  CHECK(compose(Morphism::identity(fib.domain()), fib) == fib);
  auto phi = Morphism::from_chars({{'a', "01"}, {'b', "0"}}, "01");
  CHECK(compose(phi, fib).image(Letter::intern("a")) == W("010"));
  CHECK_THROWS_AS(compose(fib, phi), DomainError);

  CHECK(power(fib, 2).image(Letter::intern("a")) == W("aba"));
  CHECK(power(fib, 3).image(Letter::intern("a")) == oracle::iterate(fib, W("a"), 3));
  CHECK(power(fib, 3).image(Letter::intern("a")) == W("abaab"));
  CHECK(power(fib, 1) == fib);
  CHECK(power(fib, 0) == Morphism::identity(fib.domain()));
}

TEST_CASE("expand_fixed_point") {
  auto a = Letter::intern("a");
  CHECK(expand_fixed_point(fib, a, 8) == oracle::iterate_to_length(fib, a, 8));
  CHECK(expand_fixed_point(fib, a, 8) == W("abaababa"));
  auto s = Morphism::from_chars({{'a', "ab"}, {'b', "b"}});
  CHECK(expand_fixed_point(s, a, 5) == W("abbbb"));
  CHECK(expand_fixed_point(fib, a, 1) == W("a"));
  CHECK_THROWS_AS(expand_fixed_point(fib, Letter::intern("b"), 3), PreconditionError);
  auto mortal_tail = Morphism::from_chars({{'a', "ab"}, {'b', ""}});
  CHECK_FALSE(is_prolongable(mortal_tail, a));

  for (std::size_t n = 0; n < 40; ++n)
    CHECK(expand_fixed_point(fib, a, n + 1).starts_with(expand_fixed_point(fib, a, n)));
}

TEST_CASE("canonicalize_up") {
  CHECK(canonicalize_up(W("ab"), W("bb")) == UltimatelyPeriodicWord{W("a"), W("b")});
  CHECK(canonicalize_up(W(""), W("abab")) == UltimatelyPeriodicWord{W(""), W("ab")});
  // ba(ab)^ω = baabab... already has a minimal preperiod
  auto c = canonicalize_up(W("ba"), W("ab"));
  CHECK(c.prefix(8) == oracle::up_prefix(W("ba"), W("ab"), 8));
  CHECK(c == UltimatelyPeriodicWord{W("ba"), W("ab")});
  CHECK(canonicalize_up(W("cab"), W("ab")) == UltimatelyPeriodicWord{W("c"), W("ab")});
  CHECK_THROWS_AS(canonicalize_up(W("a"), W("")), PreconditionError);
}

TEST_CASE("canonical forms decide sequence equality") {
  std::mt19937 rng(7);
  auto rand_word = [&](std::size_t max_len, std::size_t min_len) {
    std::uniform_int_distribution<std::size_t> len(min_len, max_len);
    std::uniform_int_distribution<int> ch(0, 1);
    std::string s;
    for (std::size_t i = len(rng); i > 0; --i)
      s.push_back(ch(rng) ? 'a' : 'b');
    return W(s);
  };
  for (int trial = 0; trial < 400; ++trial) {
    auto u1 = rand_word(4, 0), v1 = rand_word(4, 1);
    auto u2 = rand_word(4, 0), v2 = rand_word(4, 1);
    auto c1 = canonicalize_up(u1, v1);
    CHECK(c1 == canonicalize_up(u1 + v1, v1));
    CHECK(c1.prefix(30) == oracle::up_prefix(u1, v1, 30));
    CHECK(primitive_root(c1.period) == c1.period);
    auto c2 = canonicalize_up(u2, v2);
    std::size_t horizon = 40;
    bool same = oracle::up_prefix(u1, v1, horizon) == oracle::up_prefix(u2, v2, horizon);
    CHECK((c1 == c2) == same);
  }
}

TEST_CASE("apply is a monoid morphism") {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    auto m = oracle::random_endomorphism(rng, "abc", 3, true);
    auto x = oracle::random_word(rng, "abc", 6);
    auto y = oracle::random_word(rng, "abc", 6);
    CHECK(apply(m, x + y) == apply(m, x) + apply(m, y));
    auto g = oracle::random_endomorphism(rng, "abc", 3, true);
    CHECK(apply(compose(m, g), x) == apply(m, apply(g, x)));
  }
}

TEST_CASE("HD0L system validation") {
  HD0LSystem ok{Alphabet::from_chars("ab"), Alphabet::from_chars("01"), fib,
                Morphism::from_chars({{'a', "0"}, {'b', "1"}}, "01"), W("a")};
  CHECK_NOTHROW(ok.validate());
  auto bad = ok;
  bad.w = W("");
  CHECK_THROWS_AS(bad.validate(), ValidationError);
}

TEST_CASE("multi-character letters print with separators") {
  Word w{Letter::intern("ab"), Letter::intern("c")};
  CHECK(to_string(w) == "ab c");
  CHECK(to_string(W("abc")) == "abc");
}
