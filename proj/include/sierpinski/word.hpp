#pragma once

#include "sierpinski/error.hpp"

#include <algorithm>
#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace sierpinski {

// The three corner symbols. Enumerator order is the canonical total order
// l < r < u used to pick representatives of identified addresses.
enum class Letter : std::uint8_t { l = 0, r = 1, u = 2 };

inline constexpr std::array<Letter, 3> kLetters{Letter::l, Letter::r, Letter::u};

constexpr std::size_t index_of(Letter t) { return static_cast<std::size_t>(t); }

constexpr char to_char(Letter t)
{
    switch (t) {
    case Letter::l: return 'l';
    case Letter::r: return 'r';
    case Letter::u: return 'u';
    }
    return '?';
}

inline Letter letter_from_char(char c)
{
    switch (c) {
    case 'l': return Letter::l;
    case 'r': return Letter::r;
    case 'u': return Letter::u;
    default: break;
    }
    throw Error(std::string("unknown letter '") + c + "' (expected one of u, l, r)");
}

// The letter different from both arguments; requires a != b.
constexpr Letter third_letter(Letter a, Letter b)
{
    return static_cast<Letter>(3 - index_of(a) - index_of(b));
}

inline std::vector<Letter> parse_letters(std::string_view text)
{
    std::vector<Letter> out;
    out.reserve(text.size());
    for (char c : text) {
        try {
            out.push_back(letter_from_char(c));
        } catch (const Error&) {
            throw Error("invalid character '" + std::string(1, c) + "' in \"" + std::string(text) +
                        "\" (expected one of u, l, r)");
        }
    }
    return out;
}

inline std::string letters_to_string(std::span<const Letter> letters)
{
    std::string s;
    s.reserve(letters.size());
    for (Letter t : letters) s.push_back(to_char(t));
    return s;
}

/// A vertex of the level-n graph, written x_1 ... x_n with x_1 the finest
/// scale and x_n the top-level copy. Any word is a valid address; distinct
/// words may name the same vertex (see canonicalize).
class Address {
public:
    explicit Address(std::vector<Letter> letters) : letters_(std::move(letters))
    {
        if (letters_.empty()) throw Error("zero-level address");
    }

    explicit Address(std::string_view text) : Address(parse_letters(text)) {}

    std::size_t level() const { return letters_.size(); }
    std::span<const Letter> letters() const { return letters_; }
    Letter operator[](std::size_t i) const { return letters_[i]; }
    Letter back() const { return letters_.back(); }

    std::string str() const { return letters_to_string(letters_); }

    // The address of the same vertex one level down, i.e. inside copy x_n.
    Address prefix(std::size_t length) const
    {
        return Address(std::vector<Letter>(letters_.begin(), letters_.begin() + static_cast<std::ptrdiff_t>(length)));
    }

    Address appended(Letter t) const
    {
        std::vector<Letter> out = letters_;
        out.push_back(t);
        return Address(std::move(out));
    }

    bool is_constant() const
    {
        return std::all_of(letters_.begin(), letters_.end(), [&](Letter t) { return t == letters_.front(); });
    }

    bool is_canonical() const;

    friend bool operator==(const Address&, const Address&) = default;
    friend auto operator<=>(const Address&, const Address&) = default;

private:
    std::vector<Letter> letters_;
};

// The other word naming the same vertex, if any. Writing x = t^k s v with
// t^k the maximal constant prefix, the partner is s^k t v; constant words have
// none. The empty-v case is the gluing of corners between sibling copies.
inline std::optional<Address> identified_partner(const Address& x)
{
    auto letters = x.letters();
    const Letter t = letters[0];
    std::size_t k = 1;
    while (k < letters.size() && letters[k] == t) ++k;
    if (k == letters.size()) return std::nullopt;
    const Letter s = letters[k];
    std::vector<Letter> out(letters.begin(), letters.end());
    std::fill(out.begin(), out.begin() + static_cast<std::ptrdiff_t>(k), s);
    out[k] = t;
    return Address(std::move(out));
}

inline Address canonicalize(const Address& raw)
{
    auto partner = identified_partner(raw);
    if (partner && *partner < raw) return *std::move(partner);
    return raw;
}

inline bool Address::is_canonical() const
{
    auto partner = identified_partner(*this);
    return !partner || !(*partner < *this);
}

inline Address corner_address(Letter t, std::size_t level)
{
    if (level == 0) throw Error("zero-level address");
    return Address(std::vector<Letter>(level, t));
}

/// A bijection of {u, l, r}.
class Permutation {
public:
    constexpr Permutation() : image_{Letter::l, Letter::r, Letter::u} {}
    constexpr Permutation(Letter image_of_l, Letter image_of_r, Letter image_of_u)
        : image_{image_of_l, image_of_r, image_of_u}
    {
        if (image_of_l == image_of_r || image_of_l == image_of_u || image_of_r == image_of_u)
            throw Error("permutation images must be distinct");
    }

    static constexpr Permutation identity() { return Permutation(); }

    static Permutation transposition(Letter a, Letter b)
    {
        if (a == b) throw Error("transposition needs two distinct letters");
        std::array<Letter, 3> image = kLetters;
        std::swap(image[index_of(a)], image[index_of(b)]);
        return Permutation(image[0], image[1], image[2]);
    }

    // All six elements, identity first, then the transpositions, then the
    // two 3-cycles.
    static std::array<Permutation, 6> all()
    {
        using enum Letter;
        return {Permutation(l, r, u), Permutation(r, l, u), Permutation(u, r, l),
                Permutation(l, u, r), Permutation(r, u, l), Permutation(u, l, r)};
    }

    constexpr Letter operator()(Letter t) const { return image_[index_of(t)]; }

    // (a * b)(t) = a(b(t))
    friend Permutation operator*(const Permutation& a, const Permutation& b)
    {
        return Permutation(a(b(Letter::l)), a(b(Letter::r)), a(b(Letter::u)));
    }

    Permutation inverse() const
    {
        std::array<Letter, 3> inv{};
        for (Letter t : kLetters) inv[index_of(image_[index_of(t)])] = t;
        return Permutation(inv[0], inv[1], inv[2]);
    }

    bool is_identity() const { return *this == identity(); }

    // Cycle notation over the letters, e.g. "id", "(l u)", "(l r u)".
    std::string str() const
    {
        if (is_identity()) return "id";
        std::string out;
        std::array<bool, 3> seen{};
        for (Letter start : kLetters) {
            if (seen[index_of(start)] || image_[index_of(start)] == start) continue;
            out += '(';
            Letter t = start;
            do {
                if (out.back() != '(') out += ' ';
                out += to_char(t);
                seen[index_of(t)] = true;
                t = image_[index_of(t)];
            } while (t != start);
            out += ')';
        }
        return out;
    }

    friend bool operator==(const Permutation&, const Permutation&) = default;

private:
    std::array<Letter, 3> image_;
};

/// An eventually periodic infinite word prefix·(cycle)^ω. Text form
/// `[ulr]*(` `[ulr]+` `)`, e.g. "(l)" or "ul(ur)".
class WordSpec {
public:
    WordSpec(std::vector<Letter> prefix, std::vector<Letter> cycle)
        : prefix_(std::move(prefix)), cycle_(std::move(cycle))
    {
        if (cycle_.empty()) throw Error("word cycle must be nonempty");
    }

    static WordSpec parse(std::string_view text)
    {
        const auto open = text.find('(');
        if (open == std::string_view::npos || text.empty() || text.back() != ')' ||
            text.find('(', open + 1) != std::string_view::npos)
            throw Error("malformed word \"" + std::string(text) + "\" (expected PREFIX(CYCLE), e.g. ul(ur))");
        const auto cycle_text = text.substr(open + 1, text.size() - open - 2);
        if (cycle_text.empty()) throw Error("word \"" + std::string(text) + "\" has an empty cycle");
        return WordSpec(parse_letters(text.substr(0, open)), parse_letters(cycle_text));
    }

    static WordSpec constant(Letter t) { return WordSpec({}, {t}); }

    std::span<const Letter> prefix() const { return prefix_; }
    std::span<const Letter> cycle() const { return cycle_; }

    // w_i for i >= 1.
    Letter at(std::size_t i) const
    {
        if (i == 0) throw Error("word positions start at 1");
        if (i <= prefix_.size()) return prefix_[i - 1];
        return cycle_[(i - prefix_.size() - 1) % cycle_.size()];
    }

    std::vector<Letter> take(std::size_t n) const
    {
        std::vector<Letter> out;
        out.reserve(n);
        for (std::size_t i = 1; i <= n; ++i) out.push_back(at(i));
        return out;
    }

    // Shortest prefix and primitive cycle denoting the same infinite word.
    WordSpec normalized() const
    {
        std::vector<Letter> cycle = cycle_;
        const std::size_t len = cycle.size();
        for (std::size_t d = 1; d < len; ++d) {
            if (len % d != 0) continue;
            bool periodic = true;
            for (std::size_t i = d; i < len && periodic; ++i) periodic = cycle[i] == cycle[i - d];
            if (periodic) {
                cycle.resize(d);
                break;
            }
        }
        std::vector<Letter> prefix = prefix_;
        while (!prefix.empty() && prefix.back() == cycle.back()) {
            prefix.pop_back();
            std::rotate(cycle.rbegin(), cycle.rbegin() + 1, cycle.rend());
        }
        return WordSpec(std::move(prefix), std::move(cycle));
    }

    // Constant as an infinite word, e.g. "(l)" or "l(ll)"; "u(l)" is not.
    bool is_constant() const
    {
        const WordSpec n = normalized();
        return n.prefix_.empty() && n.cycle_.size() == 1;
    }

    bool is_eventually_constant() const { return normalized().cycle_.size() == 1; }

    std::string str() const { return letters_to_string(prefix_) + "(" + letters_to_string(cycle_) + ")"; }

    friend bool operator==(const WordSpec&, const WordSpec&) = default;
    friend auto operator<=>(const WordSpec&, const WordSpec&) = default;

private:
    std::vector<Letter> prefix_;
    std::vector<Letter> cycle_;
};

inline Letter letter_at(const WordSpec& w, std::size_t i) { return w.at(i); }

inline bool same_word(const WordSpec& a, const WordSpec& b) { return a.normalized() == b.normalized(); }

inline Address apply_permutation(const Permutation& sigma, const Address& x)
{
    std::vector<Letter> out;
    out.reserve(x.level());
    for (Letter t : x.letters()) out.push_back(sigma(t));
    return canonicalize(Address(std::move(out)));
}

inline WordSpec apply_permutation(const Permutation& sigma, const WordSpec& w)
{
    auto map = [&](std::span<const Letter> in) {
        std::vector<Letter> out;
        out.reserve(in.size());
        for (Letter t : in) out.push_back(sigma(t));
        return out;
    };
    return WordSpec(map(w.prefix()), map(w.cycle()));
}

// The vertex x of the level-h graph seen inside the level-n graph: the
// level-h graph sits in copy w_{h+1} of level h+1, and so on upward.
inline Address pad(const Address& x, const WordSpec& w, std::size_t level)
{
    if (level < x.level())
        throw Error("cannot truncate " + x.str() + " to level " + std::to_string(level));
    std::vector<Letter> out(x.letters().begin(), x.letters().end());
    for (std::size_t i = x.level() + 1; i <= level; ++i) out.push_back(w.at(i));
    return canonicalize(Address(std::move(out)));
}

namespace detail {

// Window (start, start + period] after which two eventually periodic words
// either agree forever or disagree somewhere inside it.
inline std::pair<std::size_t, std::size_t> agreement_window(const WordSpec& a, const WordSpec& b)
{
    const std::size_t start = std::max(a.prefix().size(), b.prefix().size());
    const std::size_t period = std::lcm(a.cycle().size(), b.cycle().size());
    return {start, period};
}

} // namespace detail

// First index in the decisive window at which the two words differ; nullopt
// when they are cofinal.
inline std::optional<std::size_t> first_tail_disagreement(const WordSpec& a, const WordSpec& b)
{
    const auto [start, period] = detail::agreement_window(a, b);
    for (std::size_t i = start + 1; i <= start + period; ++i)
        if (a.at(i) != b.at(i)) return i;
    return std::nullopt;
}

inline bool cofinal(const WordSpec& a, const WordSpec& b) { return !first_tail_disagreement(a, b); }

// Every σ for which σ(v) is cofinal with w (empty when none exists).
inline std::vector<Permutation> cofinal_up_to_permutation(const WordSpec& v, const WordSpec& w)
{
    std::vector<Permutation> witnesses;
    for (const Permutation& sigma : Permutation::all())
        if (cofinal(apply_permutation(sigma, v), w)) witnesses.push_back(sigma);
    return witnesses;
}

// {σ(w)} deduplicated as infinite words, in normalized form, sorted.
inline std::vector<WordSpec> orbit(const WordSpec& w)
{
    std::vector<WordSpec> out;
    for (const Permutation& sigma : Permutation::all()) out.push_back(apply_permutation(sigma, w).normalized());
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

// The finite address of the infinite word x as a vertex of Γ_w: its prefix up
// to the last position where x and w differ (level 1 if they never do).
// nullopt when x is not cofinal with w.
inline std::optional<Address> vertex_of(const WordSpec& x, const WordSpec& w)
{
    const auto [start, period] = detail::agreement_window(x, w);
    std::size_t last_difference = 0;
    for (std::size_t i = 1; i <= start + period; ++i) {
        if (x.at(i) == w.at(i)) continue;
        if (i > start) return std::nullopt;
        last_difference = i;
    }
    return canonicalize(Address(x.take(std::max<std::size_t>(last_difference, 1))));
}

// Lowest-level address y with pad(y, w, x.level()) == canonicalize(x).
inline Address shortest_form(const Address& x, const WordSpec& w)
{
    Address current = canonicalize(x);
    while (current.level() > 1) {
        const std::size_t h = current.level();
        std::optional<Address> lower;
        for (const Address& form : {current, identified_partner(current).value_or(current)}) {
            if (form.back() != w.at(h)) continue;
            Address candidate = canonicalize(form.prefix(h - 1));
            if (pad(candidate, w, h) == current) {
                lower = std::move(candidate);
                break;
            }
        }
        if (!lower) break;
        current = *std::move(lower);
    }
    return current;
}

} // namespace sierpinski

template <>
struct std::hash<sierpinski::Address> {
    std::size_t operator()(const sierpinski::Address& x) const noexcept
    {
        std::size_t h = x.level();
        for (sierpinski::Letter t : x.letters()) h ^= sierpinski::index_of(t) + 0x9e3779b9u + (h << 6) + (h >> 2);
        return h;
    }
};
