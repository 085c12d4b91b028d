#pragma once

// Horofunctions of the standard graph Γ_(l) with basepoint o = l^∞.

#include "sierpinski/error.hpp"
#include "sierpinski/metric.hpp"
#include "sierpinski/word.hpp"

#include "json.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <cstdlib>
#include <istream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <utility>
#include <variant>
#include <vector>

namespace sierpinski {

inline const WordSpec& standard_word()
{
    static const WordSpec w = WordSpec::constant(Letter::l);
    return w;
}

enum class Family {
    CornerU,     // u^n
    CornerR,     // r^n
    Symmetric,   // c_n = r^n u
    Alternating, // u^n for even n, r^n for odd n
    Perturbed,   // r u^{n-1} r, a neighbour of c_n
};

inline std::string family_name(Family f)
{
    switch (f) {
    case Family::CornerU: return "U";
    case Family::CornerR: return "R";
    case Family::Symmetric: return "c";
    case Family::Alternating: return "alt";
    case Family::Perturbed: return "c1";
    }
    return "?";
}

inline Family parse_family(std::string_view name)
{
    if (name == "U" || name == "u") return Family::CornerU;
    if (name == "R" || name == "r") return Family::CornerR;
    if (name == "c") return Family::Symmetric;
    if (name == "alt") return Family::Alternating;
    if (name == "c1") return Family::Perturbed;
    throw Error("unknown family \"" + std::string(name) + "\" (expected U, R, c, c1 or alt)");
}

/// An escaping sequence x_1, x_2, ... of vertices, either one of the builtin
/// families or an explicit finite list with strictly increasing levels.
class SequenceSpec {
public:
    static SequenceSpec family(Family f) { return SequenceSpec(f); }

    static SequenceSpec explicit_list(std::vector<Address> points)
    {
        for (std::size_t i = 1; i < points.size(); ++i)
            if (points[i].level() <= points[i - 1].level())
                throw Error("sequence must escape: level of x_" + std::to_string(i + 1) + " (" + points[i].str() +
                            ") is not above level of x_" + std::to_string(i) + " (" + points[i - 1].str() + ")");
        return SequenceSpec(std::move(points));
    }

    // One address per line; blank lines and '#' comments ignored.
    static SequenceSpec parse(std::istream& in)
    {
        std::vector<Address> points;
        std::string line;
        while (std::getline(in, line)) {
            if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
            const auto first = line.find_first_not_of(" \t\r");
            if (first == std::string::npos) continue;
            const auto last = line.find_last_not_of(" \t\r");
            points.emplace_back(std::string_view(line).substr(first, last - first + 1));
        }
        if (points.empty()) throw Error("sequence file has no addresses");
        return explicit_list(std::move(points));
    }

    // x_n for n >= 1; nullopt past the end of an explicit list.
    std::optional<Address> at(std::size_t n) const
    {
        if (n == 0) throw Error("sequence indices start at 1");
        if (const auto* points = std::get_if<std::vector<Address>>(&source_)) {
            if (n > points->size()) return std::nullopt;
            return (*points)[n - 1];
        }
        switch (std::get<Family>(source_)) {
        case Family::CornerU: return corner_address(Letter::u, n);
        case Family::CornerR: return corner_address(Letter::r, n);
        case Family::Symmetric: return canonicalize(corner_address(Letter::r, n).appended(Letter::u));
        case Family::Alternating: return corner_address(n % 2 == 0 ? Letter::u : Letter::r, n);
        case Family::Perturbed: {
            std::vector<Letter> x(n + 1, Letter::u);
            x.front() = x.back() = Letter::r;
            return canonicalize(Address(std::move(x)));
        }
        }
        return std::nullopt;
    }

    std::string label() const
    {
        if (const auto* f = std::get_if<Family>(&source_)) return "family " + family_name(*f);
        return "explicit list of " + std::to_string(std::get<std::vector<Address>>(source_).size());
    }

private:
    explicit SequenceSpec(Family f) : source_(f) {}
    explicit SequenceSpec(std::vector<Address> points) : source_(std::move(points)) {}

    std::variant<Family, std::vector<Address>> source_;
};

// f_x(y) = d(x, o) - d(x, y), evaluated at the common level of x and y with o
// the marked vertex w_1..w_n.
inline std::int64_t f_at(const Address& x, const Address& y, const WordSpec& w = standard_word())
{
    const std::size_t n = std::max(x.level(), y.level());
    const Address xp = pad(x, w, n);
    const Address yp = pad(y, w, n);
    const Address o = pad(Address({w.at(1)}), w, n);
    return distance(xp, o) - distance(xp, yp);
}

// Busemann function of the ray toward U (t = u) or R (t = r):
// 2^{h-1} - d(y, T_h) at the level h of y.
inline std::int64_t busemann(Letter t, const Address& y)
{
    if (t == Letter::l) throw Error("busemann: l is the basepoint direction, not a boundary ray");
    return corner_span(y.level()) - corner_distances(y).at(t);
}

// Limit along c_n = r^n u: max of the two Busemann functions.
inline std::int64_t f_symmetric(const Address& y)
{
    const CornerTriple c = corner_distances(y);
    return corner_span(y.level()) - std::min(c.up(), c.right());
}

enum class Canonical { BusemannU, BusemannR, Symmetric };

inline constexpr std::array<Canonical, 3> kCanonicals{Canonical::BusemannU, Canonical::BusemannR, Canonical::Symmetric};

inline std::int64_t canonical_value(Canonical c, const Address& y)
{
    switch (c) {
    case Canonical::BusemannU: return busemann(Letter::u, y);
    case Canonical::BusemannR: return busemann(Letter::r, y);
    case Canonical::Symmetric: return f_symmetric(y);
    }
    return 0;
}

/// Probe region B_o(radius), taken at the least level m whose graph contains
/// it (2^{m-1} >= radius), ordered by distance to o, then closeness to U.
struct ProbeBall {
    std::int64_t radius = 0;
    std::size_t level = 1;
    std::vector<Address> vertices;
    std::vector<std::int64_t> distance_to_origin;
};

inline std::size_t probe_level(std::int64_t radius)
{
    std::size_t m = 1;
    while (corner_span(m) < radius) ++m;
    return m;
}

inline ProbeBall probe_ball(std::int64_t radius)
{
    if (radius < 1) throw Error("probe radius must be at least 1");
    ProbeBall b;
    b.radius = radius;
    b.level = probe_level(radius);
    const Address o = corner_address(Letter::l, b.level);
    struct Keyed {
        std::int64_t d;
        std::int64_t to_up;
        Address x;
    };
    std::vector<Keyed> keyed;
    for (Address& x : ball(o, radius, standard_word(), b.level)) {
        const std::int64_t d = distance(o, x);
        const std::int64_t up = corner_distances(x).up();
        keyed.push_back({d, up, std::move(x)});
    }
    std::sort(keyed.begin(), keyed.end(),
              [](const Keyed& p, const Keyed& q) { return std::tie(p.d, p.to_up, p.x) < std::tie(q.d, q.to_up, q.x); });
    for (Keyed& k : keyed) {
        b.vertices.push_back(std::move(k.x));
        b.distance_to_origin.push_back(k.d);
    }
    return b;
}

/// Values of f_{x_n} on the probe ball, in probe order.
struct HoroTable {
    std::size_t index = 0;       // n
    std::size_t point_level = 0; // level of x_n
    bool escaped = false;        // x_n lies beyond the probe level
    std::vector<std::int64_t> values;
};

struct EvaluationOptions {
    std::int64_t radius = 1;
    std::size_t max_level = 16;
    std::size_t stability_window = 3;
};

struct TableReport {
    ProbeBall ball;
    std::vector<HoroTable> tables;
    std::optional<std::size_t> stabilized_at; // index into tables of the fixed table
    bool exhausted = false;                   // explicit list ended first

    bool stabilized() const { return stabilized_at.has_value(); }
    const HoroTable& limit() const { return tables.at(*stabilized_at); }

    std::vector<std::int64_t> history(std::size_t probe, bool escaped_only = false) const
    {
        std::vector<std::int64_t> out;
        for (const HoroTable& t : tables)
            if (!escaped_only || t.escaped) out.push_back(t.values[probe]);
        return out;
    }
};

inline HoroTable horo_table(const ProbeBall& ball, std::size_t index, const Address& x)
{
    HoroTable t;
    t.index = index;
    t.point_level = x.level();
    t.escaped = x.level() > ball.level;
    t.values.reserve(ball.vertices.size());
    for (const Address& y : ball.vertices) t.values.push_back(f_at(x, y));
    return t;
}

// Tables of f_{x_n} for n = 1, 2, ... while level(x_n) <= max_level. Stops
// once `stability_window` consecutive escaped tables coincide.
inline TableReport evaluate_table(const SequenceSpec& seq, const EvaluationOptions& options)
{
    if (options.radius < 1) throw Error("radius must be at least 1");
    if (options.stability_window < 2) throw Error("stability window must be at least 2");
    if (options.max_level < options.stability_window) throw Error("max level must be at least the stability window");

    TableReport report;
    report.ball = probe_ball(options.radius);
    std::size_t run = 0;
    for (std::size_t n = 1;; ++n) {
        const auto x = seq.at(n);
        if (!x) {
            report.exhausted = true;
            break;
        }
        if (x->level() > options.max_level) break;
        report.tables.push_back(horo_table(report.ball, n, *x));
        const HoroTable& cur = report.tables.back();
        if (!cur.escaped) continue;
        const bool same = run > 0 && report.tables[report.tables.size() - 2].values == cur.values;
        run = same ? run + 1 : 1;
        if (run >= options.stability_window) {
            report.stabilized_at = report.tables.size() - 1;
            break;
        }
    }
    return report;
}

/// A probe vertex whose f-values keep switching between two values.
struct Oscillation {
    std::size_t probe = 0;
    Address vertex;
    std::int64_t distance_to_origin = 0;
    std::pair<std::int64_t, std::int64_t> values; // ascending
    std::vector<std::int64_t> history;            // over escaped tables
};

namespace detail {

// Number of alternations between a and b once other values are dropped and
// repeats collapsed; a b a b counts 3.
inline std::size_t alternations(const std::vector<std::int64_t>& history, std::int64_t a, std::int64_t b)
{
    std::size_t switches = 0;
    std::optional<std::int64_t> last;
    for (std::int64_t v : history) {
        if (v != a && v != b) continue;
        if (last && *last != v) ++switches;
        last = v;
    }
    return switches;
}

} // namespace detail

// First probe (in probe order) attaining two values that each recur after the
// other at least twice among the escaped tables.
inline std::optional<Oscillation> find_oscillation(const TableReport& report)
{
    for (std::size_t p = 0; p < report.ball.vertices.size(); ++p) {
        const auto history = report.history(p, true);
        const std::set<std::int64_t> distinct(history.begin(), history.end());
        for (auto a = distinct.begin(); a != distinct.end(); ++a)
            for (auto b = std::next(a); b != distinct.end(); ++b)
                if (detail::alternations(history, *a, *b) >= 3)
                    return Oscillation{p, report.ball.vertices[p], report.ball.distance_to_origin[p], {*a, *b}, history};
    }
    return std::nullopt;
}

enum class Verdict { BusemannU, BusemannR, SymmetricClass, Divergent, Unresolved };

inline std::string verdict_name(Verdict v)
{
    switch (v) {
    case Verdict::BusemannU: return "BUSEMANN_U";
    case Verdict::BusemannR: return "BUSEMANN_R";
    case Verdict::SymmetricClass: return "SYMMETRIC";
    case Verdict::Divergent: return "DIVERGENT";
    case Verdict::Unresolved: return "UNRESOLVED";
    }
    return "?";
}

inline Verdict verdict_of(Canonical c)
{
    switch (c) {
    case Canonical::BusemannU: return Verdict::BusemannU;
    case Canonical::BusemannR: return Verdict::BusemannR;
    case Canonical::Symmetric: return Verdict::SymmetricClass;
    }
    return Verdict::Unresolved;
}

struct ClassifyOptions {
    std::vector<std::int64_t> radii{2, 4, 8, 16, 32, 64, 128};
    std::size_t max_level = 16;
    std::size_t stability_window = 3;
};

// sup over the probe ball of |table - canonical function|, per canonical.
struct RadiusEvidence {
    std::int64_t radius = 0;
    std::size_t stabilized_index = 0;
    std::array<std::int64_t, 3> sup_difference{};
};

struct Classification {
    Verdict verdict = Verdict::Unresolved;
    bool exact = false;
    std::int64_t bound = 0; // final sup difference to the chosen canonical function
    std::vector<RadiusEvidence> evidence;
    std::optional<Oscillation> oscillation;
    std::optional<TableReport> last_report;
    ClassifyOptions parameters;
    std::string reason; // filled for Unresolved
};

inline std::int64_t sup_difference(const ProbeBall& ball, const std::vector<std::int64_t>& values, Canonical c)
{
    std::int64_t sup = 0;
    for (std::size_t i = 0; i < ball.vertices.size(); ++i)
        sup = std::max(sup, std::abs(values[i] - canonical_value(c, ball.vertices[i])));
    return sup;
}

// Divergence (two values recurring in alternation) is exact. A stabilized
// limit is matched to the canonical function it equals, or failing that to the
// unique one whose sup difference does not grow over the last two radii; the
// latter is a finite-radius proxy for bounded difference.
inline Classification classify(const SequenceSpec& seq, const ClassifyOptions& options = {})
{
    if (options.radii.empty()) throw Error("radius schedule is empty");
    if (!std::is_sorted(options.radii.begin(), options.radii.end()))
        throw Error("radius schedule must be nondecreasing");

    Classification out;
    out.parameters = options;
    for (std::int64_t radius : options.radii) {
        TableReport report = evaluate_table(seq, {radius, options.max_level, options.stability_window});
        if (auto osc = find_oscillation(report)) {
            out.verdict = Verdict::Divergent;
            out.oscillation = std::move(osc);
            out.last_report = std::move(report);
            return out;
        }
        if (!report.stabilized()) {
            out.verdict = Verdict::Unresolved;
            out.reason = report.exhausted ? "sequence exhausted before stabilization at radius " + std::to_string(radius)
                                          : "no stabilization up to max level at radius " + std::to_string(radius);
            out.last_report = std::move(report);
            return out;
        }
        RadiusEvidence ev;
        ev.radius = radius;
        ev.stabilized_index = report.limit().index;
        for (std::size_t k = 0; k < kCanonicals.size(); ++k)
            ev.sup_difference[k] = sup_difference(report.ball, report.limit().values, kCanonicals[k]);
        out.evidence.push_back(ev);
        out.last_report = std::move(report);
    }

    auto final_bound = [&](std::size_t k) { return out.evidence.back().sup_difference[k]; };
    for (std::size_t k = 0; k < kCanonicals.size(); ++k) {
        const bool equal_everywhere = std::all_of(out.evidence.begin(), out.evidence.end(),
                                                  [&](const RadiusEvidence& e) { return e.sup_difference[k] == 0; });
        if (equal_everywhere) {
            out.verdict = verdict_of(kCanonicals[k]);
            out.exact = true;
            return out;
        }
    }
    if (out.evidence.size() < 2) {
        out.reason = "bounded-difference test needs at least two radii";
        return out;
    }
    std::vector<std::size_t> bounded;
    for (std::size_t k = 0; k < kCanonicals.size(); ++k) {
        const auto& prev = out.evidence[out.evidence.size() - 2];
        if (final_bound(k) <= prev.sup_difference[k]) bounded.push_back(k);
    }
    if (bounded.size() != 1) {
        out.reason = bounded.empty() ? "difference to every canonical function grows with the radius"
                                     : "more than one canonical function stays at bounded difference";
        return out;
    }
    out.verdict = verdict_of(kCanonicals[bounded.front()]);
    out.bound = final_bound(bounded.front());
    return out;
}

// Table rows with vertices written in their lowest-level form.
inline std::string to_csv(const ProbeBall& ball, const HoroTable& table)
{
    std::ostringstream out;
    out << "address,distance_to_o,value\n";
    for (std::size_t i = 0; i < ball.vertices.size(); ++i)
        out << shortest_form(ball.vertices[i], standard_word()).str() << ',' << ball.distance_to_origin[i] << ','
            << table.values[i] << '\n';
    return out.str();
}

inline std::string to_json(const TableReport& report)
{
    nlohmann::ordered_json doc;
    doc["radius"] = report.ball.radius;
    doc["probe_level"] = report.ball.level;
    doc["stabilized"] = report.stabilized();
    if (report.stabilized()) doc["stabilized_at"] = report.limit().index;
    doc["exhausted"] = report.exhausted;
    const HoroTable* shown = report.stabilized() ? &report.limit() : (report.tables.empty() ? nullptr : &report.tables.back());
    auto& rows = doc["table"] = nlohmann::ordered_json::array();
    auto& history = doc["history"] = nlohmann::ordered_json::object();
    for (std::size_t i = 0; i < report.ball.vertices.size(); ++i) {
        const std::string name = shortest_form(report.ball.vertices[i], standard_word()).str();
        if (shown)
            rows.push_back({{"address", name},
                            {"distance_to_o", report.ball.distance_to_origin[i]},
                            {"value", shown->values[i]}});
        history[name] = report.history(i);
    }
    return doc.dump(2) + "\n";
}

} // namespace sierpinski
