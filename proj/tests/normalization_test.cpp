#include <doctest.h>

#include <random>

#include "hd0l/normalization.hpp"
#include "oracles.hpp"

using namespace hd0l;

namespace {

Letter L(char c) { return Letter::intern(std::string(1, c)); }
Word W(std::string_view s) { return Word::from_chars(s); }

const Morphism fib = Morphism::from_chars({{'a', "ab"}, {'b', "a"}});

bool letter_sets_stable(const Morphism& s) {
  for (auto b : s.domain()) {
    auto x1 = apply(s, Word{b});
    auto x2 = apply(s, x1);
    if (oracle::letter_set(x1) != oracle::letter_set(x2))
      return false;
  }
  return true;
}

} // namespace

TEST_CASE("normalize_p1_p2") {
  auto r1 = normalize_p1_p2(Morphism::from_chars({{'a', "ab"}, {'b', "c"}, {'c', "b"}}));
  CHECK(r1.exponent == 6);
  CHECK(letter_sets_stable(r1.power));
  auto r2 = normalize_p1_p2(fib);
  CHECK(r2.exponent == 2);
  CHECK_FALSE(letter_sets_stable(fib));
  CHECK(letter_sets_stable(r2.power));
  CHECK(normalize_p1_p2(Morphism::from_chars({{'a', "a"}})).exponent == 1);
}

TEST_CASE("restrict_to_reachable") {
  auto s = restrict_to_reachable(Morphism::from_chars({{'a', "ab"}, {'b', "a"}, {'c', "c"}}), L('a'));
  CHECK(s.domain() == Alphabet::from_chars("ab"));
  CHECK(restrict_to_reachable(power(fib, 2), L('a')) == power(fib, 2));
  auto t = Morphism::from_chars({{'a', "ab"}, {'b', "b"}, {'c', "ac"}});
  auto seen = oracle::letter_set(oracle::iterate_to_length(t, L('a'), 20));
  CHECK(restrict_to_reachable(t, L('a')).domain() ==
        Alphabet(std::vector<Letter>(seen.begin(), seen.end())));
}

TEST_CASE("eliminate_erasing") {
  SUBCASE("deletes e") {
    auto s = Morphism::from_chars({{'a', "aeb"}, {'b', "eb"}, {'e', ""}});
    auto r = eliminate_erasing(s, L('a'));
    CHECK(r.prolongable);
    CHECK(r.sigma == Morphism::from_chars({{'a', "ab"}, {'b', "b"}}));
    auto y = expand_fixed_point(s, L('a'), 120);
    auto z = expand_fixed_point(r.sigma, L('a'), 50);
    CHECK(apply(r.deletion.psi, y).prefix(50) == z);
    CHECK(z == oracle::up_prefix(W("a"), W("b"), 50));
    for (auto l : s.domain())
      CHECK(apply(r.deletion.psi, s.image(l)) == apply(r.sigma, apply(r.deletion.psi, Word{l})));
  }
  SUBCASE("non-erasing input is unchanged") {
    auto r = eliminate_erasing(fib, L('a'));
    CHECK(r.sigma == fib);
  }
  SUBCASE("finite fixed point is flagged") {
    auto r = eliminate_erasing(Morphism::from_chars({{'a', "ae"}, {'e', ""}}), L('a'));
    CHECK(r.sigma == Morphism::from_chars({{'a', "a"}}));
    CHECK_FALSE(r.prolongable);
  }
  CHECK_THROWS_AS(eliminate_erasing(Morphism::from_chars({{'a', ""}}), L('a')), PreconditionError);
}

TEST_CASE("achieve_growth_inequalities") {
  auto check = [](const GrowthAdjustment& g, Letter a) {
    for (auto b : g.sigma.domain()) {
      auto before = g.phi.image(b).size();
      auto after = apply(g.phi, g.sigma.image(b)).size();
      if (b == a) {
        CHECK(after > before);
        CHECK(before > 0);
      } else {
        CHECK(after >= before);
      }
    }
  };
  auto code = Morphism::from_chars({{'a', "0"}, {'b', "1"}}, "01");
  auto g1 = achieve_growth_inequalities(power(fib, 2), code, L('a'));
  CHECK(g1.k == 1);
  CHECK(g1.m == 0);
  check(g1, L('a'));

  auto g2 = achieve_growth_inequalities(fib, Morphism::from_chars({{'a', ""}, {'b', "0"}}, "0"), L('a'));
  check(g2, L('a'));
  CHECK(g2.m >= 1);

  auto g3 = achieve_growth_inequalities(Morphism::from_chars({{'a', "ab"}, {'b', "b"}}), code, L('a'));
  CHECK(g3.k == 1);
  CHECK(g3.m == 0);
}

TEST_CASE("to_coding") {
  SUBCASE("fibonacci with a two-letter image") {
    auto phi = Morphism::from_chars({{'a', "01"}, {'b', "0"}}, "01");
    auto rep = to_coding(fib, phi, L('a'));
    auto a0 = pair_letter(L('a'), 0), a1 = pair_letter(L('a'), 1), b0 = pair_letter(L('b'), 0);
    CHECK(rep.tau.domain() == Alphabet({a0, a1, b0}));
    CHECK(rep.tau.image(a0) == Word{a0, a1});
    CHECK(rep.tau.image(a1) == Word{b0});
    CHECK(rep.tau.image(b0) == Word{a0, a1});
    CHECK(rep.prefix(8) == expand_morphic(fib, phi, L('a'), 8));
    CHECK(to_string(rep.prefix(8)) == "01001010");
    CHECK(rep.certified.count(Property::Coding));
  }
  SUBCASE("coding input keeps its shape") {
    auto phi = Morphism::from_chars({{'a', "0"}, {'b', "1"}}, "01");
    auto rep = to_coding(fib, phi, L('a'));
    CHECK(rep.tau.domain().size() == 2);
    CHECK(rep.prefix(50) == expand_morphic(fib, phi, L('a'), 50));
  }
  SUBCASE("doubled letter") {
    auto s = Morphism::from_chars({{'a', "ab"}, {'b', "b"}});
    auto phi = Morphism::from_chars({{'a', "00"}, {'b', "1"}}, "01");
    auto rep = to_coding(s, phi, L('a'));
    CHECK(rep.prefix(50) == oracle::up_prefix(W("00"), W("1"), 50));
    for (auto b : s.domain()) {
      Word joined;
      for (std::size_t i = 0; i < phi.image(b).size(); ++i)
        joined = joined + apply(rep.kappa, rep.tau.image(pair_letter(b, i)));
      CHECK(joined == apply(phi, s.image(b)));
    }
  }
  CHECK_THROWS_AS(to_coding(fib, Morphism::from_chars({{'a', ""}, {'b', "0"}}, "0"), L('a')),
                  PreconditionError);
}

TEST_CASE("normalize reproduces the morphic word") {
  struct Case {
    Morphism sigma;
    Morphism phi;
    char seed;
  };
  std::vector<Case> cases = {
      {fib, Morphism::from_chars({{'a', "01"}, {'b', "0"}}, "01"), 'a'},
      {fib, Morphism::from_chars({{'a', ""}, {'b', "0"}}, "0"), 'a'},
      {Morphism::from_chars({{'a', "aeb"}, {'b', "eb"}, {'e', ""}}),
       Morphism::from_chars({{'a', "a"}, {'b', "b"}, {'e', "e"}}, "abe"), 'a'},
      {Morphism::from_chars({{'a', "ab"}, {'b', "c"}, {'c', "b"}}),
       Morphism::from_chars({{'a', "x"}, {'b', "y"}, {'c', "zz"}}, "xyz"), 'a'},
      {Morphism::from_chars({{'a', "aca"}, {'c', "c"}}),
       Morphism::from_chars({{'a', "a"}, {'c', "c"}}, "ac"), 'a'},
      {Morphism::from_chars({{'a', "abc"}, {'b', "bc"}, {'c', ""}}),
       Morphism::from_chars({{'a', "0"}, {'b', ""}, {'c', "11"}}, "01"), 'a'},
  };
  for (const auto& c : cases) {
    CAPTURE(to_string(c.sigma));
    auto n = normalize(c.sigma, c.phi, L(c.seed));
    REQUIRE_FALSE(n.bounded());
    CHECK(n.rep->prefix(2000) == expand_morphic(c.sigma, c.phi, L(c.seed), 2000));
    CHECK(n.rep->certified == std::set<Property>{Property::P1, Property::P2, Property::P3,
                                                 Property::P4, Property::Coding});
  }
}

TEST_CASE("normalize on random systems") {
  std::mt19937 rng(41);
  int checked = 0;
  for (int t = 0; t < 400; ++t) {
    auto sigma = oracle::random_endomorphism(rng, "abc", 3, true);
    if (sigma.image(L('a')).empty() || sigma.image(L('a')).front() != L('a'))
      continue;
    auto phi_images = std::vector<Word>{oracle::random_word(rng, "01", 2),
                                        oracle::random_word(rng, "01", 2),
                                        oracle::random_word(rng, "01", 2)};
    Morphism phi(sigma.domain(), Alphabet::from_chars("01"), phi_images);
    CAPTURE(to_string(sigma));
    CAPTURE(to_string(phi));
    auto n = normalize(sigma, phi, L('a'));
    // reference: iterate sigma from a; the image of the limit
    Word y{L('a')};
    for (int i = 0; i < 14 && y.size() < 5000; ++i)
      y = apply(sigma, y);
    auto x = apply(phi, y);
    if (n.bounded()) {
      CHECK(x.prefix(n.finite_image.size() + 1) == n.finite_image);
    } else {
      auto got = n.rep->prefix(std::min<std::size_t>(x.size(), 300));
      CHECK(x.starts_with(got));
      CHECK(n.rep->certified.size() == 5);
    }
    ++checked;
  }
  CHECK(checked > 50);
}
