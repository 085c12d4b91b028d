#pragma once

// Command-line front end. run() takes the arguments after the program name
// and writes to the given streams so tests can drive it in-process.

#include "sierpinski/gasket.hpp"
#include "sierpinski/horofunction.hpp"
#include "sierpinski/isomorphism.hpp"
#include "sierpinski/metric.hpp"
#include "sierpinski/selftest.hpp"
#include "sierpinski/word.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace sierpinski::cli {

namespace detail {

inline std::string join(const std::vector<std::string>& parts, const char* sep)
{
    std::string out;
    for (const auto& p : parts) out += (out.empty() ? "" : sep) + p;
    return out;
}

inline void write_output(const std::string& text, const std::string& path, std::ostream& out)
{
    if (path.empty()) {
        out << text;
        return;
    }
    std::ofstream file(path, std::ios::binary);
    if (!file) throw Error("cannot open output file " + path);
    file << text;
    if (!file) throw Error("cannot write output file " + path);
}

inline SequenceSpec load_sequence(const std::string& family, const std::string& seq_path)
{
    if (family.empty() == seq_path.empty()) throw CLI::ValidationError("exactly one of --family and --seq is required");
    if (!family.empty()) return SequenceSpec::family(parse_family(family));
    std::ifstream in(seq_path);
    if (!in) throw Error("cannot open sequence file " + seq_path);
    return SequenceSpec::parse(in);
}

// Radii 2, 4, 8, ... up to `radius`; a radius below 2 is used on its own.
inline std::vector<std::int64_t> radius_schedule(std::int64_t radius)
{
    if (radius < 2) return {radius};
    std::vector<std::int64_t> radii;
    for (std::int64_t r = 2; r <= radius; r *= 2) radii.push_back(r);
    return radii;
}

inline std::string values_of(const std::vector<std::int64_t>& xs)
{
    std::vector<std::string> parts;
    for (auto x : xs) parts.push_back(std::to_string(x));
    return join(parts, ",");
}

inline std::string name_of(const Address& y) { return shortest_form(y, standard_word()).str(); }

inline void print_classification(const Classification& cls, const SequenceSpec& seq, std::ostream& out)
{
    switch (cls.verdict) {
    case Verdict::Divergent: {
        const auto& osc = *cls.oscillation;
        out << "DIVERGENT witness=" << name_of(osc.vertex) << " values={" << osc.values.first << ","
            << osc.values.second << "}\n";
        out << "history " << name_of(osc.vertex) << ": " << values_of(osc.history) << "\n";
        break;
    }
    case Verdict::Unresolved: out << "UNRESOLVED " << cls.reason << "\n"; break;
    default:
        out << verdict_name(cls.verdict);
        if (cls.exact)
            out << " exact\n";
        else
            out << " bound=" << cls.bound << " (bounded-difference proxy: bound not increasing over the last two radii)\n";
    }
    for (const auto& e : cls.evidence)
        out << "radius=" << e.radius << " n=" << e.stabilized_index << " diff_U=" << e.sup_difference[0]
            << " diff_R=" << e.sup_difference[1] << " diff_c=" << e.sup_difference[2] << "\n";
    out << "sequence: " << seq.label() << "; radii=" << values_of(cls.parameters.radii)
        << " max_level=" << cls.parameters.max_level << " stable=" << cls.parameters.stability_window << "\n";
}

} // namespace detail

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Sierpinski-type triangle graphs: construction, distances, horofunctions, isomorphism", "sierpinski"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "Show help for all subcommands");

    // build
    std::size_t build_level = 0;
    std::string build_word = "(l)", build_format = "dot", build_out;
    auto* build_cmd = app.add_subcommand("build", "Build the level-N graph and export it");
    build_cmd->add_option("--level", build_level, "Level N")->required()->check(CLI::Range(1, 12));
    build_cmd->add_option("--word", build_word, "Word prefix(cycle)")->capture_default_str();
    build_cmd->add_option("--format", build_format, "dot or json")->check(CLI::IsMember({"dot", "json"}))->capture_default_str();
    build_cmd->add_option("--out", build_out, "Output path (default stdout)");

    // dist
    std::size_t dist_level = 0;
    std::string dist_x, dist_y, dist_word = "(l)", dist_method = "closed";
    auto* dist_cmd = app.add_subcommand("dist", "Distance between two vertices at level N");
    dist_cmd->add_option("--level", dist_level, "Level N")->required()->check(CLI::Range(std::size_t{1}, kMaxMetricLevel));
    dist_cmd->add_option("X", dist_x, "Address")->required();
    dist_cmd->add_option("Y", dist_y, "Address")->required();
    dist_cmd->add_option("--word", dist_word, "Word used to pad shorter addresses")->capture_default_str();
    dist_cmd->add_option("--method", dist_method, "closed, bfs or both")
        ->check(CLI::IsMember({"closed", "bfs", "both"}))
        ->capture_default_str();

    // corners
    std::string corners_x;
    auto* corners_cmd = app.add_subcommand("corners", "Distances from X to the three corners of its level");
    corners_cmd->add_option("X", corners_x, "Address")->required();

    // horo eval / classify
    auto* horo_cmd = app.add_subcommand("horo", "Horofunctions of the standard graph");
    horo_cmd->require_subcommand(1);
    struct HoroFlags {
        std::string family, seq, format = "csv";
        std::int64_t radius = 0;
        std::size_t max_level = 16, stable = 3;
    };
    HoroFlags eval_flags, classify_flags;
    classify_flags.radius = 128;
    auto add_horo_flags = [](CLI::App* cmd, HoroFlags& f, bool radius_required) {
        cmd->add_option("--family", f.family, "U, R, c, c1 or alt");
        cmd->add_option("--seq", f.seq, "File with one address per line");
        auto* r = cmd->add_option("--radius", f.radius, "Probe radius around o")->check(CLI::Range(1, 1 << 20));
        if (radius_required)
            r->required();
        else
            r->capture_default_str();
        cmd->add_option("--max-level", f.max_level, "Largest level of x_n")->check(CLI::Range(std::size_t{2}, kMaxMetricLevel))->capture_default_str();
        cmd->add_option("--stable", f.stable, "Identical consecutive tables needed")->check(CLI::Range(2, 64))->capture_default_str();
    };
    auto* eval_cmd = horo_cmd->add_subcommand("eval", "Tables of f_n on a ball around o");
    add_horo_flags(eval_cmd, eval_flags, true);
    eval_cmd->add_option("--format", eval_flags.format, "csv or json")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
    auto* classify_cmd = horo_cmd->add_subcommand("classify", "Classify the limit of f_n");
    add_horo_flags(classify_cmd, classify_flags, false);

    // iso / orbit / census
    std::string iso_v, iso_w, orbit_w, census_w;
    auto* iso_cmd = app.add_subcommand("iso", "Decide whether two graphs are isomorphic");
    iso_cmd->add_option("V", iso_v, "Word")->required();
    iso_cmd->add_option("W", iso_w, "Word")->required();
    auto* orbit_cmd = app.add_subcommand("orbit", "Words obtained by permuting letters");
    orbit_cmd->add_option("W", orbit_w, "Word")->required();
    auto* census_cmd = app.add_subcommand("census", "Number of degree-2 vertices in the limit graph");
    census_cmd->add_option("W", census_w, "Word")->required();

    // bench
    std::size_t bench_level = 0, bench_pairs = 0;
    std::uint64_t bench_seed = 1;
    auto* bench_cmd = app.add_subcommand("bench", "Closed-form distance against BFS");
    bench_cmd->add_option("--level", bench_level, "Level N")->required()->check(CLI::Range(std::size_t{1}, kMaxMetricLevel));
    bench_cmd->add_option("--pairs", bench_pairs, "Number of random pairs")->required()->check(CLI::Range(std::size_t{1}, std::size_t{10000000}));
    bench_cmd->add_option("--seed", bench_seed, "Sampling seed")->capture_default_str();

    // selftest
    SelftestOptions selftest_options;
    auto* selftest_cmd = app.add_subcommand("selftest", "Run the acceptance suite");
    selftest_cmd->add_option("--max-level", selftest_options.max_level, "Largest level built for BFS checks")
        ->check(CLI::Range(5, 12))
        ->capture_default_str();

    try {
        app.parse(std::vector<std::string>(args.rbegin(), args.rend()));
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*build_cmd) {
            const FiniteGasket g = build(WordSpec::parse(build_word), build_level);
            detail::write_output(build_format == "dot" ? export_dot(g) : export_json(g), build_out, out);
        } else if (*dist_cmd) {
            const WordSpec w = WordSpec::parse(dist_word);
            const Address x = pad(Address(dist_x), w, dist_level), y = pad(Address(dist_y), w, dist_level);
            std::optional<std::int64_t> closed, bfs;
            if (dist_method != "bfs") closed = distance(x, y);
            if (dist_method != "closed") bfs = bfs_distance(build(w, dist_level), x, y);
            std::vector<std::string> parts;
            if (closed) parts.push_back("closed=" + std::to_string(*closed));
            if (bfs) parts.push_back("bfs=" + std::to_string(*bfs));
            if (closed && bfs) parts.push_back(*closed == *bfs ? "MATCH" : "MISMATCH");
            out << detail::join(parts, " ") << "\n";
            if (closed && bfs && *closed != *bfs) return 1;
        } else if (*corners_cmd) {
            const CornerTriple c = corner_distances(Address(corners_x));
            out << "U=" << c.up() << " L=" << c.left() << " R=" << c.right() << "\n";
        } else if (*eval_cmd) {
            const SequenceSpec seq = detail::load_sequence(eval_flags.family, eval_flags.seq);
            const TableReport report =
                evaluate_table(seq, {eval_flags.radius, eval_flags.max_level, eval_flags.stable});
            if (eval_flags.format == "json") {
                out << to_json(report);
            } else {
                if (report.tables.empty()) throw Error("no x_n at or below max level " + std::to_string(eval_flags.max_level));
                const HoroTable& shown = report.stabilized() ? report.limit() : report.tables.back();
                if (!report.stabilized())
                    err << "not stabilized" << (report.exhausted ? " (sequence exhausted)" : "")
                        << "; showing the table for n=" << shown.index << "\n";
                out << to_csv(report.ball, shown);
            }
        } else if (*classify_cmd) {
            const SequenceSpec seq = detail::load_sequence(classify_flags.family, classify_flags.seq);
            const ClassifyOptions opts{detail::radius_schedule(classify_flags.radius), classify_flags.max_level,
                                       classify_flags.stable};
            detail::print_classification(classify(seq, opts), seq, out);
        } else if (*iso_cmd) {
            const WordSpec v = WordSpec::parse(iso_v), w = WordSpec::parse(iso_w);
            const IsoVerdict verdict = decide_iso(v, w);
            if (verdict.isomorphic) {
                std::vector<std::string> names;
                for (const auto& s : verdict.witnesses) names.push_back(s.str());
                out << "ISOMORPHIC witnesses=" << detail::join(names, ",") << "\n";
            } else {
                out << "NOT ISOMORPHIC\n";
                for (const auto& d : verdict.exhaustion)
                    out << "  " << d.sigma.str() << ": index " << d.index << " has " << to_char(d.permuted_letter)
                        << " vs " << to_char(d.target_letter) << "\n";
                if (verdict.census_mismatch)
                    out << "  census " << v.str() << "=" << verdict.census_mismatch->first.count << " " << w.str() << "="
                        << verdict.census_mismatch->second.count << "\n";
            }
        } else if (*orbit_cmd) {
            for (const WordSpec& w : orbit(WordSpec::parse(orbit_w))) out << w.str() << "\n";
        } else if (*census_cmd) {
            const auto c = degree_two_census(WordSpec::parse(census_w));
            out << "census=" << c.count;
            if (c.vertex) out << " vertex=" << c.vertex->str() << " tail=" << to_char(*c.tail);
            out << "\n";
        } else if (*bench_cmd) {
            const BenchResult b = run_bench(bench_level, bench_pairs, bench_seed);
            out << std::fixed << std::setprecision(6);
            out << "level=" << b.level << " pairs=" << b.pairs << " seed=" << bench_seed << "\n";
            out << "closed: " << b.closed_seconds << " s\n";
            if (b.bfs_seconds) {
                out << "bfs: " << *b.bfs_seconds << " s\n";
                out << std::setprecision(1) << "speedup: " << *b.speedup() << "x\n";
                out << "mismatches=" << b.mismatches << "\n";
            } else {
                out << "bfs: skipped (level above oracle cap 12)\n";
            }
            out << "checksum=" << b.checksum << "\n";
            if (b.mismatches) return 1;
        } else if (*selftest_cmd) {
            int failed = 0, refuted = 0;
            run_acceptance(selftest_options, [&](const CriterionResult& r) {
                out << format_result(r) << std::endl;
                if (r.refuted)
                    ++refuted;
                else if (!r.passed)
                    ++failed;
            });
            out << (11 - failed - refuted) << "/11 passed";
            if (refuted) out << ", " << refuted << " refuted claim";
            if (failed) out << ", " << failed << " failed";
            out << "\n";
            return failed ? 1 : 0;
        }
    } catch (const CLI::ValidationError& e) {
        err << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

} // namespace sierpinski::cli
