#include "sierpinski/word.hpp"

#include "oracle.hpp"

#include <gtest/gtest.h>

#include <set>

namespace sierpinski {
namespace {

using testing::all_words;
using testing::identification_class;

Address A(const char* s) { return Address(s); }
WordSpec W(const char* s) { return WordSpec::parse(s); }

TEST(CanonicalizeTest, Examples)
{
    EXPECT_EQ(canonicalize(A("ul")), A("lu"));
    EXPECT_EQ(canonicalize(A("lll")), A("lll"));
    EXPECT_EQ(canonicalize(A("ull")), A("lul"));
    EXPECT_EQ(canonicalize(A("u")), A("u"));
}

TEST(CanonicalizeTest, EmptyAddressIsRejected)
{
    EXPECT_THROW(Address(std::vector<Letter>{}), Error);
    EXPECT_THROW(A(""), Error);
}

TEST(CanonicalizeTest, InvalidCharacterNamesToken)
{
    try {
        A("ulx");
        FAIL();
    } catch (const Error& e) {
        EXPECT_NE(std::string(e.what()).find("'x'"), std::string::npos);
    }
}

// Identification classes from coordinates: size <= 2, and canonicalize picks
// the least member of each.
TEST(CanonicalizeTest, MatchesCoordinateClassesExhaustively)
{
    for (std::size_t n = 1; n <= 7; ++n) {
        for (const Address& x : all_words(n)) {
            const auto cls = identification_class(x);
            ASSERT_LE(cls.size(), 2u) << x.str();
            const Address least = *std::min_element(cls.begin(), cls.end());
            ASSERT_EQ(canonicalize(x), least) << x.str();
            ASSERT_EQ(identified_partner(x).has_value(), cls.size() == 2) << x.str();
        }
    }
}

TEST(CanonicalizeTest, Idempotent)
{
    for (std::size_t n = 1; n <= 8; ++n)
        for (const Address& x : all_words(n)) {
            const Address c = canonicalize(x);
            ASSERT_EQ(canonicalize(c), c);
            ASSERT_TRUE(c.is_canonical());
        }
}

TEST(CornerAddressTest, Examples)
{
    EXPECT_EQ(corner_address(Letter::u, 3), A("uuu"));
    EXPECT_EQ(corner_address(Letter::l, 1), A("l"));
    EXPECT_EQ(corner_address(Letter::r, 4), A("rrrr"));
    EXPECT_THROW(corner_address(Letter::u, 0), Error);
}

TEST(PermutationTest, GroupClosure)
{
    const auto all = Permutation::all();
    std::set<std::string> names;
    for (const auto& p : all) names.insert(p.str());
    EXPECT_EQ(names.size(), 6u);
    for (const auto& a : all) {
        EXPECT_TRUE((a * a.inverse()).is_identity());
        for (const auto& b : all) EXPECT_NE(std::find(all.begin(), all.end(), a * b), all.end());
    }
    EXPECT_EQ(Permutation::transposition(Letter::l, Letter::r).str(), "(l r)");
    EXPECT_EQ(Permutation::transposition(Letter::u, Letter::l).str(), "(l u)");
}

TEST(ApplyPermutationTest, Examples)
{
    const auto lr = Permutation::transposition(Letter::l, Letter::r);
    EXPECT_EQ(apply_permutation(lr, A("ul")), A("ru"));
    EXPECT_EQ(apply_permutation(Permutation::identity(), A("rul")), A("rul"));
    const auto ul = Permutation::transposition(Letter::u, Letter::l);
    EXPECT_TRUE(same_word(apply_permutation(ul, W("(l)")), W("(u)")));
}

TEST(ApplyPermutationTest, RespectsIdentificationClassesExhaustively)
{
    for (std::size_t n = 1; n <= 8; ++n)
        for (const Address& x : all_words(n))
            for (const auto& sigma : Permutation::all())
                ASSERT_EQ(apply_permutation(sigma, x), apply_permutation(sigma, canonicalize(x))) << x.str();
}

TEST(WordSpecTest, ParseAndPrint)
{
    EXPECT_EQ(W("ul(ur)").str(), "ul(ur)");
    EXPECT_EQ(W("(l)").prefix().size(), 0u);
    EXPECT_THROW(W("ul"), Error);
    EXPECT_THROW(W("()"), Error);
    EXPECT_THROW(W("u(l"), Error);
    EXPECT_THROW(W("u(l)(r)"), Error);
    EXPECT_THROW(W("a(l)"), Error);
}

TEST(WordSpecTest, LetterAt)
{
    EXPECT_EQ(letter_at(W("ul(ur)"), 1), Letter::u);
    EXPECT_EQ(letter_at(W("ul(ur)"), 3), Letter::u);
    EXPECT_EQ(letter_at(W("ul(ur)"), 4), Letter::r);
    EXPECT_EQ(letter_at(W("(l)"), 1'000'000), Letter::l);
    EXPECT_THROW(letter_at(W("(l)"), 0), Error);
}

TEST(WordSpecTest, SameWord)
{
    EXPECT_TRUE(same_word(W("l(l)"), W("(l)")));
    EXPECT_TRUE(same_word(W("(lrlr)"), W("(lr)")));
    EXPECT_TRUE(same_word(W("r(lr)"), W("(rl)")));
    EXPECT_TRUE(same_word(W("ul(ul)"), W("(ul)")));
    EXPECT_FALSE(same_word(W("(lr)"), W("(rl)")));
    EXPECT_FALSE(same_word(W("u(l)"), W("(l)")));
}

TEST(PadTest, Examples)
{
    EXPECT_EQ(pad(A("rru"), W("(l)"), 5), A("rrull"));
    EXPECT_EQ(pad(A("rul"), W("(ur)"), 3), A("rul"));
    EXPECT_EQ(pad(A("u"), W("(ul)"), 3), A("luu"));
    EXPECT_THROW(pad(A("rru"), W("(l)"), 2), Error);
}

TEST(CofinalityTest, Examples)
{
    const auto ul = Permutation::transposition(Letter::u, Letter::l);
    const auto lr = Permutation::transposition(Letter::l, Letter::r);

    auto a = cofinal_up_to_permutation(W("(l)"), W("(u)"));
    EXPECT_NE(std::find(a.begin(), a.end(), ul), a.end());

    EXPECT_TRUE(cofinal_up_to_permutation(W("(l)"), W("(ul)")).empty());

    auto c = cofinal_up_to_permutation(W("(lr)"), W("(rl)"));
    ASSERT_EQ(c.size(), 1u);
    EXPECT_EQ(c[0], lr);
}

TEST(CofinalityTest, ContainsIdentityForEqualWords)
{
    for (const char* s : {"(l)", "ul(ur)", "rru(l)", "(lru)", "u(rl)"}) {
        auto ws = cofinal_up_to_permutation(W(s), W(s));
        EXPECT_NE(std::find(ws.begin(), ws.end(), Permutation::identity()), ws.end()) << s;
    }
}

// Brute force: compare far enough out that both words are periodic with a
// common period.
TEST(CofinalityTest, AgreesWithLongHorizonComparison)
{
    const std::vector<const char*> words{"(l)", "(u)", "(ul)", "(lu)", "u(lr)", "(lru)", "(lur)", "rr(l)",
                                         "(lrlu)", "ul(ru)", "(rl)", "l(r)"};
    for (const char* vs : words)
        for (const char* ws : words) {
            const WordSpec v = W(vs), w = W(ws);
            for (const auto& sigma : Permutation::all()) {
                const WordSpec sv = apply_permutation(sigma, v);
                bool agree = true;
                for (std::size_t i = 200; i <= 400; ++i) agree = agree && sv.at(i) == w.at(i);
                EXPECT_EQ(cofinal(sv, w), agree) << vs << " " << ws << " " << sigma.str();
            }
        }
}

TEST(OrbitTest, Examples)
{
    const auto o = orbit(W("(l)"));
    ASSERT_EQ(o.size(), 3u);
    std::set<std::string> names;
    for (const auto& w : o) names.insert(w.str());
    EXPECT_EQ(names, (std::set<std::string>{"(l)", "(r)", "(u)"}));
    EXPECT_EQ(orbit(W("(ul)")).size(), 6u);
    EXPECT_EQ(orbit(W("l(l)")), orbit(W("(l)")));
}

TEST(OrbitTest, SizeThreeIffConstant)
{
    std::vector<std::vector<Letter>> pieces;
    for (std::size_t n = 0; n <= 3; ++n)
        for (const Address& x : n == 0 ? std::vector<Address>{} : all_words(n))
            pieces.emplace_back(x.letters().begin(), x.letters().end());
    std::vector<std::vector<Letter>> prefixes{{}};
    prefixes.insert(prefixes.end(), pieces.begin(), pieces.end());
    std::vector<std::vector<Letter>> cycles = pieces;
    for (const Address& x : all_words(4)) cycles.emplace_back(x.letters().begin(), x.letters().end());
    for (const auto& p : prefixes)
        for (const auto& c : cycles) {
            const WordSpec w(p, c);
            ASSERT_EQ(orbit(w).size(), w.is_constant() ? 3u : 6u) << w.str();
        }
}

TEST(VertexOfTest, Examples)
{
    EXPECT_EQ(vertex_of(W("rru(l)"), W("(l)")), A("rru"));
    EXPECT_EQ(vertex_of(W("(l)"), W("(l)")), A("l"));
    EXPECT_EQ(vertex_of(W("(u)"), W("(l)")), std::nullopt);
    EXPECT_EQ(vertex_of(W("lr(ul)"), W("(lu)")), std::nullopt);
}

// pad then vertex_of round-trips at every level >= h.
TEST(VertexOfTest, PadRoundTrip)
{
    const std::vector<const char*> words{"(l)", "(ul)", "ru(lr)", "(lru)"};
    for (const char* ws : words) {
        const WordSpec w = W(ws);
        for (std::size_t h = 1; h <= 5; ++h)
            for (const Address& x : all_words(h)) {
                std::vector<Letter> prefix(x.letters().begin(), x.letters().end());
                std::vector<Letter> tail_prefix = prefix;
                // infinite word x_1..x_h w_{h+1} w_{h+2} ...
                const std::size_t lead = std::max(h, w.prefix().size());
                for (std::size_t i = h + 1; i <= lead; ++i) tail_prefix.push_back(w.at(i));
                std::vector<Letter> cycle;
                for (std::size_t i = lead + 1; i <= lead + w.cycle().size(); ++i) cycle.push_back(w.at(i));
                const WordSpec xw(tail_prefix, cycle);
                const auto v = vertex_of(xw, w);
                ASSERT_TRUE(v.has_value());
                for (std::size_t n = h; n <= h + 3; ++n) ASSERT_EQ(pad(*v, w, n), pad(x, w, n)) << x.str() << " " << ws;
            }
    }
}

TEST(ShortestFormTest, InvertsPadding)
{
    const WordSpec w = W("(l)");
    EXPECT_EQ(shortest_form(A("lu"), w), A("u"));
    EXPECT_EQ(shortest_form(A("lr"), w), A("r"));
    EXPECT_EQ(shortest_form(A("llll"), w), A("l"));
    EXPECT_EQ(shortest_form(A("rrull"), w), A("rru"));
    for (const char* ws : {"(l)", "(ul)", "r(u)"}) {
        const WordSpec v = W(ws);
        for (std::size_t n = 1; n <= 5; ++n)
            for (const Address& x : all_words(n)) {
                const Address s = shortest_form(x, v);
                ASSERT_EQ(pad(s, v, n), canonicalize(x));
                // brute force: nothing at a lower level pads to x
                for (std::size_t h = 1; h < s.level(); ++h)
                    for (const Address& y : all_words(h)) ASSERT_NE(pad(y, v, n), canonicalize(x)) << x.str();
            }
    }
}

} // namespace
} // namespace sierpinski
