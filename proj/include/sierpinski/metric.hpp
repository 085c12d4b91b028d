#pragma once

#include "sierpinski/error.hpp"
#include "sierpinski/gasket.hpp"
#include "sierpinski/word.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <set>
#include <string>
#include <vector>

namespace sierpinski {

// Distances stay below 2^62 up to this level.
inline constexpr std::size_t kMaxMetricLevel = 62;

inline std::int64_t pow2(std::size_t e) { return std::int64_t{1} << e; }

// Distance between two distinct corners of the level-n graph.
inline std::int64_t corner_span(std::size_t level) { return pow2(level - 1); }

/// Distances from a vertex to the three extremal corners U_n, L_n, R_n of
/// its level.
struct CornerTriple {
    std::array<std::int64_t, 3> by_letter{}; // indexed by Letter

    std::int64_t at(Letter t) const { return by_letter[index_of(t)]; }
    std::int64_t up() const { return at(Letter::u); }
    std::int64_t left() const { return at(Letter::l); }
    std::int64_t right() const { return at(Letter::r); }

    std::array<std::int64_t, 3> sorted() const
    {
        auto s = by_letter;
        std::sort(s.begin(), s.end());
        return s;
    }

    friend bool operator==(const CornerTriple&, const CornerTriple&) = default;
};

namespace detail {

inline void check_metric_level(std::size_t level)
{
    if (level > kMaxMetricLevel)
        throw Error("level " + std::to_string(level) + " exceeds the 64-bit distance range (max " +
                    std::to_string(kMaxMetricLevel) + ")");
}

// Corner distances of the prefix x_1..x_len of a raw address.
inline CornerTriple prefix_corner_distances(std::span<const Letter> x, std::size_t len)
{
    CornerTriple out;
    for (Letter t : kLetters) {
        std::int64_t d = x[0] != t ? 1 : 0;
        for (std::size_t i = 1; i < len; ++i)
            if (x[i] != t) d += pow2(i - 1);
        out.by_letter[index_of(t)] = d;
    }
    return out;
}

} // namespace detail

// Climbing from level i-1 to i inside copy x_i keeps the distance to corner
// x_i and adds 2^{i-2} to the other two.
inline CornerTriple corner_distances(const Address& x)
{
    detail::check_metric_level(x.level());
    return detail::prefix_corner_distances(x.letters(), x.level());
}

// Exact graph distance between two vertices of the same level. Vertices in the
// same top copy reduce to that copy; otherwise a geodesic between copies s and
// t either crosses their shared corner or transits the third copy z between
// its two shared corners.
inline std::int64_t distance(const Address& x, const Address& y)
{
    if (x.level() != y.level())
        throw Error("levels differ: " + x.str() + " has level " + std::to_string(x.level()) + ", " + y.str() +
                    " has level " + std::to_string(y.level()));
    detail::check_metric_level(x.level());

    std::size_t m = x.level();
    while (m > 0 && x[m - 1] == y[m - 1]) --m;
    if (m == 0) return 0;
    if (m == 1) return 1;

    const Letter s = x[m - 1];
    const Letter t = y[m - 1];
    const Letter z = third_letter(s, t);
    const CornerTriple a = detail::prefix_corner_distances(x.letters(), m - 1);
    const CornerTriple b = detail::prefix_corner_distances(y.letters(), m - 1);
    return std::min(a.at(t) + b.at(s), a.at(z) + corner_span(m - 1) + b.at(z));
}

// Canonical neighbours of x in the level-n graph: the other two corners of
// each elementary triangle x belongs to (one for a corner, two otherwise).
inline std::vector<Address> neighbors(const Address& x)
{
    std::vector<Address> out;
    auto add_triangle = [&](const Address& form) {
        std::vector<Letter> letters(form.letters().begin(), form.letters().end());
        for (Letter t : kLetters) {
            if (t == form[0]) continue;
            letters[0] = t;
            out.push_back(canonicalize(Address(letters)));
        }
    };
    add_triangle(x);
    if (auto partner = identified_partner(x)) add_triangle(*partner);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

namespace detail {

template <class Expand>
std::vector<Address> breadth_first_ball(const Address& center, std::int64_t radius, Expand&& expand)
{
    if (radius < 0) throw Error("ball radius must be nonnegative");
    std::set<Address> seen{center};
    std::vector<Address> frontier{center};
    for (std::int64_t r = 0; r < radius && !frontier.empty(); ++r) {
        std::vector<Address> next;
        for (const Address& v : frontier)
            for (Address& nb : expand(v))
                if (seen.insert(nb).second) next.push_back(std::move(nb));
        frontier = std::move(next);
    }
    return {seen.begin(), seen.end()};
}

} // namespace detail

// All level-n vertices within `radius` of pad(center, w, n), sorted.
inline std::vector<Address> ball(const Address& center, std::int64_t radius, const WordSpec& w, std::size_t level)
{
    const Address c = pad(center, w, level);
    return detail::breadth_first_ball(c, radius, [&](const Address& v) {
        std::vector<Address> kept;
        for (Address& nb : neighbors(v))
            if (distance(c, nb) <= radius) kept.push_back(std::move(nb));
        return kept;
    });
}

// Same ball, expanded over the adjacency of an explicit graph.
inline std::vector<Address> ball(const Address& center, std::int64_t radius, const FiniteGasket& g)
{
    const Address c = pad(center, g.word(), g.level());
    return detail::breadth_first_ball(c, radius, [&](const Address& v) {
        std::vector<Address> out;
        for (std::uint32_t j : g.neighbors(g.index_of(v))) out.push_back(g.vertices()[j]);
        return out;
    });
}

// Geodesic from o = l^h to t^h along the outer side of the level-h graph.
inline std::vector<Address> ray_vertices(Letter t, std::size_t level)
{
    if (t == Letter::l) throw Error("ray toward l is degenerate: o is the l corner");
    if (level == 0) throw Error("zero-level address");
    std::vector<Address> ray{Address({Letter::l}), Address({t})};
    for (std::size_t h = 2; h <= level; ++h) {
        std::vector<Address> next;
        next.reserve(2 * ray.size() - 1);
        for (const Address& x : ray) next.push_back(canonicalize(x.appended(Letter::l)));
        for (std::size_t i = 1; i < ray.size(); ++i) next.push_back(canonicalize(ray[i].appended(t)));
        ray = std::move(next);
    }
    return ray;
}

struct RayProjection {
    Address vertex;
    std::int64_t distance_from_origin; // position along the ray
};

// Nearest ray vertex to y; among equally near ones, the one closest to o.
inline RayProjection project_to_ray(const Address& y, Letter t, std::size_t level)
{
    const std::vector<Address> ray = ray_vertices(t, level);
    std::size_t best = 0;
    std::int64_t best_distance = distance(y, ray[0]);
    for (std::size_t i = 1; i < ray.size(); ++i) {
        const std::int64_t d = distance(y, ray[i]);
        if (d < best_distance) {
            best = i;
            best_distance = d;
        }
    }
    return {ray[best], static_cast<std::int64_t>(best)};
}

inline bool multiset_triple_equal(const Address& x, const Address& y)
{
    if (x.level() != y.level())
        throw Error("levels differ: " + x.str() + " vs " + y.str());
    return corner_distances(x).sorted() == corner_distances(y).sorted();
}

} // namespace sierpinski
