#pragma once

// Γ_v ≅ Γ_w for eventually periodic words: decided by cofinality up to a
// letter permutation, cross-checked on finite levels.

#include "sierpinski/error.hpp"
#include "sierpinski/gasket.hpp"
#include "sierpinski/metric.hpp"
#include "sierpinski/word.hpp"

#include <optional>
#include <string>
#include <vector>

namespace sierpinski {

/// Where σ(v) and w first part ways inside the decisive window.
struct Disagreement {
    Permutation sigma;
    std::size_t index = 0;
    Letter permuted_letter = Letter::l; // σ(v)_index
    Letter target_letter = Letter::l;   // w_index
};

/// 1 when the limit graph has a vertex of degree 2 (the corner t^∞ of an
/// eventually constant word), else 0.
struct DegreeTwoCensus {
    int count = 0;
    std::optional<Address> vertex;
    std::optional<Letter> tail;
};

inline DegreeTwoCensus degree_two_census(const WordSpec& w)
{
    DegreeTwoCensus census;
    for (Letter t : kLetters) {
        const auto v = vertex_of(WordSpec::constant(t), w);
        if (!v || degree_in_limit(*v, w) != 2) continue;
        ++census.count;
        census.vertex = *v;
        census.tail = t;
    }
    return census;
}

struct IsoVerdict {
    bool isomorphic = false;
    std::vector<Permutation> witnesses;
    std::vector<Disagreement> exhaustion; // one per σ when not isomorphic
    std::optional<std::pair<DegreeTwoCensus, DegreeTwoCensus>> census_mismatch;
};

inline IsoVerdict decide_iso(const WordSpec& v, const WordSpec& w)
{
    IsoVerdict verdict;
    verdict.witnesses = cofinal_up_to_permutation(v, w);
    verdict.isomorphic = !verdict.witnesses.empty();
    if (verdict.isomorphic) return verdict;
    for (const Permutation& sigma : Permutation::all()) {
        const WordSpec sv = apply_permutation(sigma, v);
        const std::size_t i = *first_tail_disagreement(sv, w);
        verdict.exhaustion.push_back({sigma, i, sv.at(i), w.at(i)});
    }
    auto cv = degree_two_census(v), cw = degree_two_census(w);
    if (cv.count != cw.count) verdict.census_mismatch.emplace(std::move(cv), std::move(cw));
    return verdict;
}

namespace detail {

inline bool prefix_triples_match(const Address& x, const Address& y)
{
    for (std::size_t k = x.level(); k >= 1; --k)
        if (!multiset_triple_equal(x.prefix(k), y.prefix(k))) return false;
    return true;
}

} // namespace detail

struct FiniteLevelWitness {
    Address x; // marked vertex of Γ_v^n
    Address y; // first vertex of Γ_w^n (in address order) matching it
};

// Search Γ_w^n for a vertex whose corner-distance multiset agrees with that of
// the marked vertex of Γ_v^n at every level k <= n (prefix by prefix).
inline std::optional<FiniteLevelWitness> finite_level_witness(const WordSpec& v, const WordSpec& w, std::size_t n,
                                                              BuildOptions options = {})
{
    const FiniteGasket g = build(w, n, options);
    const Address x = canonicalize(Address(v.take(n)));
    for (const Address& y : g.vertices())
        if (detail::prefix_triples_match(x, y)) return FiniteLevelWitness{x, y};
    return std::nullopt;
}

inline bool finite_level_check(const WordSpec& v, const WordSpec& w, std::size_t n, BuildOptions options = {})
{
    return finite_level_witness(v, w, n, options).has_value();
}

} // namespace sierpinski
