#pragma once

#include "sierpinski/error.hpp"
#include "sierpinski/word.hpp"

#include "json.hpp"

#include <algorithm>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace sierpinski {

struct BuildOptions {
    // Largest level materialized explicitly; level 12 has 265 722 vertices.
    std::size_t max_level = 12;
};

/// The explicit finite graph Γ_w^n. Vertices are canonical addresses kept in
/// lexicographic order (l < r < u); adjacency is stored in CSR form over
/// vertex indices.
class FiniteGasket {
public:
    std::size_t level() const { return level_; }
    const WordSpec& word() const { return word_; }
    const Address& marked() const { return vertices_[marked_]; }
    std::size_t marked_index() const { return marked_; }

    const std::vector<Address>& vertices() const { return vertices_; }
    std::size_t vertex_count() const { return vertices_.size(); }
    std::size_t edge_count() const { return targets_.size() / 2; }

    std::span<const std::uint32_t> neighbors(std::size_t index) const
    {
        return {targets_.data() + offsets_[index], targets_.data() + offsets_[index + 1]};
    }

    std::optional<std::size_t> find(const Address& x) const
    {
        if (x.level() != level_) return std::nullopt;
        const Address key = canonicalize(x);
        auto it = std::lower_bound(vertices_.begin(), vertices_.end(), key);
        if (it == vertices_.end() || *it != key) return std::nullopt;
        return static_cast<std::size_t>(it - vertices_.begin());
    }

    std::size_t index_of(const Address& x) const
    {
        auto index = find(x);
        if (!index)
            throw Error("address " + x.str() + " is not a vertex of the level-" + std::to_string(level_) + " graph");
        return *index;
    }

    // Edges as (i, j) with i < j, sorted.
    std::vector<std::pair<std::uint32_t, std::uint32_t>> edges() const
    {
        std::vector<std::pair<std::uint32_t, std::uint32_t>> out;
        out.reserve(edge_count());
        for (std::uint32_t i = 0; i < vertices_.size(); ++i)
            for (std::uint32_t j : neighbors(i))
                if (i < j) out.emplace_back(i, j);
        return out;
    }

    // Breadth-first distances from one source to every vertex, by index.
    std::vector<std::int64_t> distances_from(std::size_t source) const
    {
        std::vector<std::int64_t> dist(vertices_.size(), -1);
        std::vector<std::uint32_t> queue;
        queue.reserve(vertices_.size());
        dist[source] = 0;
        queue.push_back(static_cast<std::uint32_t>(source));
        for (std::size_t head = 0; head < queue.size(); ++head) {
            const std::uint32_t v = queue[head];
            for (std::uint32_t nb : neighbors(v)) {
                if (dist[nb] >= 0) continue;
                dist[nb] = dist[v] + 1;
                queue.push_back(nb);
            }
        }
        return dist;
    }

    std::vector<std::int64_t> distances_from(const Address& source) const { return distances_from(index_of(source)); }

private:
    friend FiniteGasket build(const WordSpec& w, std::size_t level, BuildOptions options);

    FiniteGasket(WordSpec word, std::size_t level) : word_(std::move(word)), level_(level) {}

    WordSpec word_;
    std::size_t level_;
    std::vector<Address> vertices_;
    std::vector<std::size_t> offsets_;
    std::vector<std::uint32_t> targets_;
    std::size_t marked_ = 0;
};

// Level 1 is the triangle on {u, l, r}. Level k+1 takes every level-k edge
// (x, y) into each copy t as (x·t, y·t); canonicalization merges the three
// pairs of shared corners.
inline FiniteGasket build(const WordSpec& w, std::size_t level, BuildOptions options = {})
{
    if (level == 0) throw Error("zero-level address");
    if (level > options.max_level)
        throw Error("oracle scale exceeded: level " + std::to_string(level) + " > cap " +
                    std::to_string(options.max_level) + " (use the closed-form metric)");

    std::vector<std::pair<Address, Address>> edges{
        {Address("l"), Address("r")}, {Address("l"), Address("u")}, {Address("r"), Address("u")}};
    for (std::size_t k = 1; k < level; ++k) {
        std::vector<std::pair<Address, Address>> next;
        next.reserve(edges.size() * 3);
        for (Letter t : kLetters)
            for (const auto& [x, y] : edges)
                next.emplace_back(canonicalize(x.appended(t)), canonicalize(y.appended(t)));
        edges = std::move(next);
    }

    FiniteGasket g(w, level);
    g.vertices_.reserve(edges.size());
    for (const auto& [x, y] : edges) {
        g.vertices_.push_back(x);
        g.vertices_.push_back(y);
    }
    std::sort(g.vertices_.begin(), g.vertices_.end());
    g.vertices_.erase(std::unique(g.vertices_.begin(), g.vertices_.end()), g.vertices_.end());

    std::vector<std::pair<std::uint32_t, std::uint32_t>> arcs;
    arcs.reserve(edges.size() * 2);
    for (const auto& [x, y] : edges) {
        const auto i = static_cast<std::uint32_t>(g.index_of(x));
        const auto j = static_cast<std::uint32_t>(g.index_of(y));
        arcs.emplace_back(i, j);
        arcs.emplace_back(j, i);
    }
    std::sort(arcs.begin(), arcs.end());
    arcs.erase(std::unique(arcs.begin(), arcs.end()), arcs.end());

    g.offsets_.assign(g.vertices_.size() + 1, 0);
    for (const auto& arc : arcs) ++g.offsets_[arc.first + 1];
    for (std::size_t i = 1; i < g.offsets_.size(); ++i) g.offsets_[i] += g.offsets_[i - 1];
    g.targets_.reserve(arcs.size());
    for (const auto& arc : arcs) g.targets_.push_back(arc.second);

    g.marked_ = g.index_of(Address(w.take(level)));
    return g;
}

inline std::int64_t bfs_distance(const FiniteGasket& g, const Address& x, const Address& y)
{
    const std::size_t target = g.index_of(y);
    return g.distances_from(g.index_of(x))[target];
}

inline std::size_t degree(const FiniteGasket& g, const Address& x) { return g.neighbors(g.index_of(x)).size(); }

// Degree of the level-h vertex x in the infinite graph Γ_w: 2 iff x stays an
// extremal corner forever, i.e. x = t^h and w_i = t for all i > h.
inline int degree_in_limit(const Address& x, const WordSpec& w)
{
    const Address c = canonicalize(x);
    if (!c.is_constant()) return 4;
    const Letter t = c[0];
    const std::size_t horizon = std::max(c.level(), w.prefix().size()) + w.cycle().size();
    for (std::size_t i = c.level() + 1; i <= horizon; ++i)
        if (w.at(i) != t) return 4;
    return 2;
}

inline std::string export_dot(const FiniteGasket& g)
{
    std::ostringstream out;
    out << "graph gasket {\n";
    out << "  label=\"level " << g.level() << ", word " << g.word().str() << "\";\n";
    for (std::size_t i = 0; i < g.vertex_count(); ++i) {
        out << "  \"" << g.vertices()[i].str() << '"';
        if (i == g.marked_index()) out << " [peripheries=2]";
        out << ";\n";
    }
    for (const auto& [i, j] : g.edges())
        out << "  \"" << g.vertices()[i].str() << "\" -- \"" << g.vertices()[j].str() << "\";\n";
    out << "}\n";
    return out.str();
}

inline std::string export_json(const FiniteGasket& g)
{
    nlohmann::ordered_json doc;
    doc["level"] = g.level();
    doc["word"] = g.word().str();
    doc["marked"] = g.marked().str();
    auto& vertices = doc["vertices"] = nlohmann::ordered_json::array();
    for (const Address& x : g.vertices()) vertices.push_back(x.str());
    auto& edges = doc["edges"] = nlohmann::ordered_json::array();
    for (const auto& [i, j] : g.edges()) edges.push_back({g.vertices()[i].str(), g.vertices()[j].str()});
    return doc.dump(2) + "\n";
}

} // namespace sierpinski
