// meslab: exact construction and verification of prime-dimension MUBs, the
// dual affine plane, maximally entangled line states, and the Mean King /
// King-tracking retrodiction protocols.

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "meslab/meslab.hpp"
#include "meslab/serialize.hpp"

namespace {

using meslab::io::json;

constexpr int exit_ok = 0;
constexpr int exit_verification_failed = 1;
constexpr int exit_usage = 2;

struct OutputSpec {
    std::string path;    // explicit --out, empty = unset
    std::string format;  // json | csv | text
};

meslab::BasisLabel parse_basis(const std::string& s, meslab::Dimension d) {
    if (s == "CB" || s == "cb" || s == "o" || s == "ö")
        return meslab::BasisLabel::cb(d);
    std::size_t pos = 0;
    long long v = std::stoll(s, &pos);
    if (pos != s.size() || v < 0 || v >= d.value())
        throw std::invalid_argument("basis must be CB or an integer in [0, d)");
    return meslab::BasisLabel::standard(meslab::ModInt(v, d));
}

meslab::Line parse_line(const std::string& s, meslab::Dimension d) {
    auto comma = s.find(',');
    if (comma == std::string::npos)
        throw std::invalid_argument("line must be given as M_DD,M0");
    std::size_t p1 = 0, p2 = 0;
    long long mdd = std::stoll(s.substr(0, comma), &p1);
    long long m0 = std::stoll(s.substr(comma + 1), &p2);
    if (p1 != comma || p2 != s.size() - comma - 1)
        throw std::invalid_argument("line must be given as M_DD,M0");
    return meslab::Line{meslab::ModInt(mdd, d), meslab::ModInt(m0, d)};
}

/// Report skeleton carried by every subcommand for provenance.
json base_report(const std::string& command, meslab::Dimension d, std::uint64_t seed) {
    return json{{"tool_version", meslab::version},
                {"command", command},
                {"d", d.value()},
                {"seed", seed}};
}

std::string extension(const std::string& format) {
    if (format == "json") return "json";
    if (format == "csv") return "csv";
    return "txt";
}

/// Resolves the output target: --out wins, then $MESLAB_OUT/<name>, then stdout.
int emit(const OutputSpec& out, const std::string& default_name, const std::string& payload) {
    std::string path = out.path;
    if (path.empty()) {
        if (const char* dir = std::getenv("MESLAB_OUT")) {
            std::filesystem::create_directories(dir);
            path = (std::filesystem::path(dir) / default_name).string();
        }
    }
    if (path.empty()) {
        std::cout << payload;
        return exit_ok;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) {
        std::cerr << "meslab: cannot write " << path << "\n";
        return exit_usage;
    }
    f << payload;
    return exit_ok;
}

int emit_report(const OutputSpec& out, const std::string& command, meslab::Dimension d,
                const json& doc, const std::string& csv, const std::string& text) {
    std::string payload;
    if (out.format == "json")
        payload = doc.dump(2) + "\n";
    else if (out.format == "csv")
        payload = csv;
    else
        payload = text;
    const std::string name = "meslab_" + command + "_d" + std::to_string(d.value()) + "." +
                             extension(out.format);
    return emit(out, name, payload);
}

// ---------------------------------------------------------------------------
// Subcommands.
// ---------------------------------------------------------------------------

int run_mub_cmd(meslab::Dimension d, const OutputSpec& out) {
    json doc = base_report("mub", d, 0);
    doc.update(meslab::io::mub_table_json(d));
    std::ostringstream text;
    text << "MUB exponent table, d=" << d.value() << "\n" << meslab::io::mub_table_csv(d);
    return emit_report(out, "mub", d, doc, meslab::io::mub_table_csv(d), text.str());
}

int run_geometry_cmd(meslab::Dimension d, const OutputSpec& out, bool dot) {
    if (dot) {
        const std::string name = "meslab_geometry_d" + std::to_string(d.value()) + ".dot";
        return emit(out, name, meslab::io::geometry_dot(d));
    }
    json doc = base_report("geometry", d, 0);
    doc.update(meslab::io::geometry_table_json(d));
    std::ostringstream text;
    text << "DAPG incidence table, d=" << d.value() << " (" << d.value() * d.value()
         << " lines, " << d.value() * (d.value() + 1) << " points)\n"
         << meslab::io::geometry_table_csv(d);
    return emit_report(out, "geometry", d, doc, meslab::io::geometry_table_csv(d), text.str());
}

int run_mes_cmd(meslab::Dimension d, const OutputSpec& out) {
    json doc = base_report("mes", d, 0);
    doc.update(meslab::io::mes_tables_json(d));
    std::ostringstream text;
    text << "Line states and point-line overlap probabilities, d=" << d.value() << "\n"
         << meslab::io::mes_overlap_csv(d);
    return emit_report(out, "mes", d, doc, meslab::io::mes_overlap_csv(d), text.str());
}

int run_verify_cmd(meslab::Dimension d, const OutputSpec& out, const std::string& suite) {
    std::vector<meslab::CheckReport> reports;
    const bool all = suite == "all";
    if (all || suite == "mub") {
        reports.push_back(meslab::verify_unbiased(d));
        reports.push_back(meslab::verify_eigen(d));
        reports.push_back(meslab::verify_conjugation(d));
        reports.push_back(meslab::verify_completeness(d));
    }
    if (all || suite == "geometry") reports.push_back(meslab::verify_dapg(d));
    if (all || suite == "mes") reports.push_back(meslab::verify_mes(d));
    if (all || suite == "balance") reports.push_back(meslab::verify_balance(d));
    if (all || suite == "protocols") reports.push_back(meslab::verify_protocols(d));

    bool passed = true;
    json suites = json::array();
    std::ostringstream text;
    for (const auto& r : reports) {
        passed = passed && r.passed();
        suites.push_back(meslab::io::to_json(r));
        text << (r.passed() ? "PASS" : "FAIL") << " " << r.name() << " (" << r.checks()
             << " checks)\n";
        for (const auto& v : r.violations()) text << "  " << v << "\n";
    }
    json doc = base_report("verify", d, 0);
    doc["suite"] = suite;
    doc["passed"] = passed;
    doc["suites"] = std::move(suites);

    int rc = emit_report(out, "verify", d, doc, meslab::io::check_reports_csv(reports), text.str());
    if (rc != exit_ok) return rc;
    return passed ? exit_ok : exit_verification_failed;
}

int run_king_cmd(meslab::Dimension d, const OutputSpec& out, std::uint64_t trials,
                 std::uint64_t seed, const std::optional<std::string>& basis, int threads,
                 bool branches) {
    meslab::BasisPolicy policy = basis ? meslab::BasisPolicy::fixed_basis(parse_basis(*basis, d))
                                       : meslab::BasisPolicy::uniform();
    meslab::ProtocolContext ctx(d);
    meslab::SimReport sim = meslab::run_mkp(ctx, trials, seed, policy, threads);
    json doc = base_report("king", d, seed);
    doc.update(meslab::io::to_json(sim));
    if (branches) doc["branches"] = meslab::io::to_json(meslab::enumerate_mkp(ctx), true)["branches"];
    std::ostringstream text;
    text << "MKP d=" << d.value() << " trials=" << trials << " seed=" << seed << " policy="
         << policy.to_string() << "\n"
         << "correct=" << sim.correct << " undetermined=" << sim.undetermined
         << " error=" << sim.errors << "\n"
         << "exact: correct=" << sim.exact.correct.to_string() << "\n";
    return emit_report(out, "king", d, doc, meslab::io::sim_report_csv(sim), text.str());
}

int run_track_cmd(meslab::Dimension d, const OutputSpec& out, const std::string& line_arg,
                  std::uint64_t trials, std::uint64_t seed,
                  const std::optional<std::string>& basis, int threads, bool branches) {
    meslab::Line prepared = parse_line(line_arg, d);
    meslab::BasisPolicy policy = basis ? meslab::BasisPolicy::fixed_basis(parse_basis(*basis, d))
                                       : meslab::BasisPolicy::uniform();
    meslab::ProtocolContext ctx(d);
    meslab::SimReport sim = meslab::run_track(ctx, prepared, trials, seed, policy, threads);
    json doc = base_report("track", d, seed);
    doc.update(meslab::io::to_json(sim));
    if (branches)
        doc["branches"] = meslab::io::to_json(meslab::enumerate_track(ctx, prepared), true)["branches"];
    std::ostringstream text;
    text << "TRACK d=" << d.value() << " line=" << prepared.to_string() << " trials=" << trials
         << " seed=" << seed << " policy=" << policy.to_string() << "\n"
         << "correct=" << sim.correct << " undetermined=" << sim.undetermined
         << " error=" << sim.errors << "\n"
         << "exact: correct=" << sim.exact.correct.to_string()
         << " undetermined=" << sim.exact.undetermined.to_string() << "\n";
    return emit_report(out, "track", d, doc, meslab::io::sim_report_csv(sim), text.str());
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact MUB / finite-geometry / maximally-entangled-basis toolkit with Mean King "
                 "and King-tracking simulators"};
    app.set_version_flag("--version", meslab::version);
    app.require_subcommand(1);

    std::int64_t d_arg = 0;
    OutputSpec out;
    std::uint64_t trials = 1000;
    std::uint64_t seed = 0;
    std::optional<std::string> basis;
    std::string basis_policy = "uniform";
    std::string line_arg;
    std::string suite = "all";
    int threads = 1;
    bool dot = false;
    bool branches = false;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--d", d_arg, "dimension (odd prime)")->required();
        cmd->add_option("--format", out.format, "output format")
            ->default_val("json")
            ->check(CLI::IsMember({"json", "csv", "text"}));
        cmd->add_option("--out", out.path, "output path (default: $MESLAB_OUT dir or stdout)");
    };

    CLI::App* mub_cmd = app.add_subcommand("mub", "emit the MUB exponent table");
    add_common(mub_cmd);

    CLI::App* geometry_cmd = app.add_subcommand("geometry", "emit the DAPG incidence table");
    add_common(geometry_cmd);
    geometry_cmd->add_flag("--dot", dot, "emit a DOT graph instead of the table");

    CLI::App* mes_cmd = app.add_subcommand("mes", "emit line states and the overlap matrix");
    add_common(mes_cmd);

    CLI::App* verify_cmd = app.add_subcommand("verify", "run exact verification suites");
    add_common(verify_cmd);
    verify_cmd->add_option("--suite", suite, "which suite to run")
        ->default_val("all")
        ->check(CLI::IsMember({"mub", "geometry", "mes", "balance", "protocols", "all"}));

    CLI::App* king_cmd = app.add_subcommand("king", "simulate Mean King rounds");
    add_common(king_cmd);
    king_cmd->add_option("--trials", trials, "number of rounds")->default_val(1000);
    king_cmd->add_option("--seed", seed, "RNG seed")->default_val(0);
    auto* king_basis = king_cmd->add_option("--basis", basis, "fix the King's alignment (CB or 0..d-1)");
    king_cmd->add_option("--basis-policy", basis_policy, "King alignment policy")
        ->check(CLI::IsMember({"uniform"}))
        ->excludes(king_basis);
    king_cmd->add_option("--threads", threads, "worker threads")->default_val(1);
    king_cmd->add_flag("--branches", branches, "include the exhaustive branch table");

    CLI::App* track_cmd = app.add_subcommand("track", "simulate King-tracking rounds");
    add_common(track_cmd);
    track_cmd->add_option("--line", line_arg, "prepared line M_DD,M0")->required();
    track_cmd->add_option("--trials", trials, "number of rounds")->default_val(1000);
    track_cmd->add_option("--seed", seed, "RNG seed")->default_val(0);
    track_cmd->add_option("--basis", basis, "fix the King's alignment (CB or 0..d-1)");
    track_cmd->add_option("--threads", threads, "worker threads")->default_val(1);
    track_cmd->add_flag("--branches", branches, "include the exhaustive branch table");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help / --version
        app.exit(e);
        return exit_usage;
    }

    try {
        meslab::Dimension d(d_arg);
        if (mub_cmd->parsed()) return run_mub_cmd(d, out);
        if (geometry_cmd->parsed()) return run_geometry_cmd(d, out, dot);
        if (mes_cmd->parsed()) return run_mes_cmd(d, out);
        if (verify_cmd->parsed()) return run_verify_cmd(d, out, suite);
        if (king_cmd->parsed()) return run_king_cmd(d, out, trials, seed, basis, threads, branches);
        if (track_cmd->parsed())
            return run_track_cmd(d, out, line_arg, trials, seed, basis, threads, branches);
    } catch (const std::invalid_argument& e) {
        std::cerr << "meslab: " << e.what() << "\n";
        return exit_usage;
    } catch (const std::exception& e) {
        std::cerr << "meslab: " << e.what() << "\n";
        return exit_verification_failed;
    }
    return exit_usage;
}
