// Command-line front end: validation, extension, vertex enumeration,
// universal-prefix construction and checking, random metrics, matrix
// distributions and the tightness/compactness criteria. Every run writes
// a manifest that reproduces it byte for byte.

#include <cstdint>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mcone/distance_matrix.hpp"
#include "mcone/io.hpp"
#include "mcone/matrix_distribution.hpp"
#include "mcone/polytope.hpp"
#include "mcone/random_metrics.hpp"
#include "mcone/universal.hpp"

using nlohmann::json;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitError = 2;

struct GlobalOptions {
    std::uint64_t seed = 0;
    std::string output;
    std::string manifest;
    double tolerance = mcone::DistanceMatrix::kDefaultTolerance;
    bool quiet = false;
};

void emit(const GlobalOptions& g, const json& j) {
    if (!g.quiet) std::cout << j.dump(2) << std::endl;
}

std::string manifest_path(const GlobalOptions& g, const std::string& command) {
    if (!g.manifest.empty()) return g.manifest;
    if (!g.output.empty()) return g.output + ".manifest.json";
    return command + ".manifest.json";
}

void write_run_manifest(const GlobalOptions& g, const std::string& command,
                        const std::vector<std::string>& argv, json config,
                        std::vector<std::string> artifacts) {
    mcone::io::Manifest m;
    m.command = command;
    m.argv = argv;
    m.config = std::move(config);
    m.seed = g.seed;
    m.artifact_paths = std::move(artifacts);
    mcone::io::write_manifest(manifest_path(g, command), m);
}

mcone::DistanceMatrix load_matrix(const std::string& path, double tolerance) {
    if (path.size() > 4 && path.substr(path.size() - 4) == ".csv")
        return mcone::io::read_matrix_csv(path, tolerance);
    return mcone::io::read_matrix_json(path, tolerance);
}

json violations_to_json(const std::vector<mcone::Violation>& violations) {
    json arr = json::array();
    for (const auto& v : violations) {
        arr.push_back({{"kind", static_cast<int>(v.kind)},
                       {"i", v.i},
                       {"j", v.j},
                       {"k", v.k},
                       {"slack", v.slack},
                       {"message", mcone::to_string(v)}});
    }
    return arr;
}

std::vector<double> parse_row(const std::string& text) {
    std::vector<double> row;
    std::string cell;
    std::stringstream ss(text);
    while (std::getline(ss, cell, ',')) {
        try {
            row.push_back(std::stod(cell));
        } catch (const std::exception&) {
            throw mcone::ValueError("cannot parse row entry '" + cell + "'");
        }
    }
    return row;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"distance-matrix cone toolkit"};
    app.require_subcommand(1);

    GlobalOptions g;
    app.add_option("--seed", g.seed, "random seed")->capture_default_str();
    app.add_option("--output", g.output, "output artifact path");
    app.add_option("--manifest", g.manifest, "manifest path (default: derived from output)");
    app.add_option("--tolerance", g.tolerance, "absolute comparison tolerance")
        ->capture_default_str();
    app.add_flag("--quiet", g.quiet, "suppress report output");

    std::vector<std::string> raw_argv(argv, argv + argc);

    // --- validate ---------------------------------------------------------
    auto* validate_cmd = app.add_subcommand("validate", "check a candidate distance matrix");
    std::string validate_input;
    validate_cmd->add_option("--input", validate_input, "matrix JSON or CSV")->required();

    // --- extend -----------------------------------------------------------
    auto* extend_cmd = app.add_subcommand("extend", "border a matrix with an admissible row");
    std::string extend_input, extend_row;
    extend_cmd->add_option("--input", extend_input, "matrix JSON or CSV")->required();
    extend_cmd->add_option("--row", extend_row, "comma-separated border row")->required();

    // --- vertices ---------------------------------------------------------
    auto* vertices_cmd =
        app.add_subcommand("vertices", "enumerate the extreme points of the admissible set");
    std::string vertices_input;
    vertices_cmd->add_option("--input", vertices_input, "matrix JSON or CSV")->required();

    // --- build-universal ----------------------------------------------------
    auto* build_cmd = app.add_subcommand("build-universal", "grow a universal prefix");
    int build_steps = 100;
    double build_diameter = 0.0;
    build_cmd->add_option("--steps", build_steps, "number of extensions")->required();
    build_cmd->add_option("--diameter", build_diameter, "cap all distances (diameter variant)");

    // --- check-universal ----------------------------------------------------
    auto* check_cmd = app.add_subcommand("check-universal", "finite universality test");
    std::string check_input;
    int check_n = 2, check_targets = 50;
    double check_eps = 0.25;
    check_cmd->add_option("--input", check_input, "matrix JSON")->required();
    check_cmd->add_option("--n", check_n, "corner order to probe")->capture_default_str();
    check_cmd->add_option("--epsilon", check_eps, "defect threshold")->capture_default_str();
    check_cmd->add_option("--targets", check_targets, "number of sampled targets")
        ->capture_default_str();

    // --- sample-metric ------------------------------------------------------
    auto* sample_cmd = app.add_subcommand("sample-metric", "draw a random distance matrix");
    int sample_order = 5;
    std::string sample_law = "exp:1.0";
    bool sample_allow_approx = false;
    sample_cmd->add_option("--order", sample_order, "matrix order")->required();
    sample_cmd->add_option("--law", sample_law, "diagonal law, e.g. exp:1.0 or halfnormal:1.0")
        ->capture_default_str();
    sample_cmd->add_flag("--allow-approximate", sample_allow_approx,
                         "use hit-and-run rows beyond the exact order limit");

    // --- matdist ------------------------------------------------------------
    auto* matdist_cmd =
        app.add_subcommand("matdist", "sample k x k marginals of a matrix distribution");
    std::string matdist_triple, matdist_hist;
    int matdist_k = 3, matdist_count = 1000, matdist_bins = 20;
    matdist_cmd->add_option("--triple", matdist_triple, "triple JSON")->required();
    matdist_cmd->add_option("--k", matdist_k, "marginal order")->capture_default_str();
    matdist_cmd->add_option("--count", matdist_count, "number of samples")->capture_default_str();
    matdist_cmd->add_option("--histogram", matdist_hist, "also write an entry histogram CSV");
    matdist_cmd->add_option("--bins", matdist_bins, "histogram bins")->capture_default_str();

    // --- equiv-test -----------------------------------------------------------
    auto* equiv_cmd = app.add_subcommand("equiv-test", "two-sample matrix-distribution test");
    std::string equiv_a, equiv_b;
    int equiv_k = 3, equiv_count = 2000, equiv_perms = 500;
    double equiv_alpha = 0.05;
    equiv_cmd->add_option("--a", equiv_a, "first triple JSON")->required();
    equiv_cmd->add_option("--b", equiv_b, "second triple JSON")->required();
    equiv_cmd->add_option("--k", equiv_k, "marginal order")->capture_default_str();
    equiv_cmd->add_option("--count", equiv_count, "samples per triple")->capture_default_str();
    equiv_cmd->add_option("--perms", equiv_perms, "permutations")->capture_default_str();
    equiv_cmd->add_option("--alpha", equiv_alpha, "significance level")->capture_default_str();

    // --- compact-check ---------------------------------------------------------
    auto* compact_cmd =
        app.add_subcommand("compact-check", "tightness/compactness criterion estimate");
    std::string compact_triple, compact_mode = "compact";
    int compact_anchors = 10, compact_n = 10000, compact_replicas = 200;
    double compact_eps = 0.5;
    compact_cmd->add_option("--triple", compact_triple, "triple JSON")->required();
    compact_cmd->add_option("--epsilon", compact_eps, "criterion epsilon")->capture_default_str();
    compact_cmd->add_option("--anchors", compact_anchors, "number of anchor draws N")
        ->capture_default_str();
    compact_cmd->add_option("--n", compact_n, "long-sample length")->capture_default_str();
    compact_cmd->add_option("--replicas", compact_replicas, "Monte-Carlo replicas")
        ->capture_default_str();
    compact_cmd->add_option("--mode", compact_mode, "compact or tight")->capture_default_str();

    // --- ball-measure -----------------------------------------------------------
    auto* ball_cmd = app.add_subcommand("ball-measure", "ergodic-average ball measure estimate");
    std::string ball_triple;
    int ball_n = 10000, ball_anchor = 0;
    double ball_radius = 0.5;
    ball_cmd->add_option("--triple", ball_triple, "triple JSON")->required();
    ball_cmd->add_option("--n", ball_n, "long-sample length")->capture_default_str();
    ball_cmd->add_option("--anchor", ball_anchor, "anchor position in the sample")
        ->capture_default_str();
    ball_cmd->add_option("--radius", ball_radius, "ball radius")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitError;
    }

    try {
        if (validate_cmd->parsed()) {
            mcone::ValidationReport report;
            bool structural = false;
            try {
                mcone::DistanceMatrix m = load_matrix(validate_input, g.tolerance);
                (void)m;
            } catch (const mcone::ConstraintError& e) {
                report.violations = e.violations();
            } catch (const mcone::ValueError& e) {
                // unreadable input counts as a data error, not a verdict
                std::cerr << "error: " << e.what() << std::endl;
                return kExitError;
            } catch (const mcone::StructuralError& e) {
                std::cerr << "error: " << e.what() << std::endl;
                structural = true;
            }
            if (structural) return kExitError;
            json out{{"valid", report.ok()}, {"violations", violations_to_json(report.violations)}};
            emit(g, out);
            write_run_manifest(g, "validate", raw_argv, {{"input", validate_input}}, {});
            return report.ok() ? kExitPass : kExitFail;
        }

        if (extend_cmd->parsed()) {
            mcone::DistanceMatrix m = load_matrix(extend_input, g.tolerance);
            std::vector<double> row = parse_row(extend_row);
            mcone::ValidationReport report = mcone::check_admissible(m, row);
            json out{{"admissible", report.ok()},
                     {"violations", violations_to_json(report.violations)}};
            if (report.ok()) {
                mcone::DistanceMatrix extended = m.extended(row);
                out["order"] = extended.order();
                if (!g.output.empty()) mcone::io::write_matrix_json(g.output, extended);
            }
            emit(g, out);
            write_run_manifest(g, "extend", raw_argv,
                               {{"input", extend_input}, {"row", extend_row}},
                               g.output.empty() ? std::vector<std::string>{}
                                                : std::vector<std::string>{g.output});
            return report.ok() ? kExitPass : kExitFail;
        }

        if (vertices_cmd->parsed()) {
            mcone::DistanceMatrix m = load_matrix(vertices_input, g.tolerance);
            mcone::AdmissiblePolytope poly = mcone::enumerate_vertices(m);
            json verts = json::array();
            for (int i = 0; i < poly.vertices.rows(); ++i) {
                std::vector<double> v(poly.vertices.cols());
                for (int c = 0; c < poly.vertices.cols(); ++c) v[c] = poly.vertices(i, c);
                verts.push_back(v);
            }
            json out{{"count", poly.vertices.rows()},
                     {"hull_dimension", poly.hull_dimension},
                     {"set_dimension", poly.set_dimension},
                     {"vertices", verts}};
            if (!g.output.empty()) mcone::io::atomic_write_text(g.output, verts.dump(2) + "\n");
            emit(g, out);
            write_run_manifest(g, "vertices", raw_argv, {{"input", vertices_input}},
                               g.output.empty() ? std::vector<std::string>{}
                                                : std::vector<std::string>{g.output});
            return kExitPass;
        }

        if (build_cmd->parsed()) {
            std::optional<double> diameter;
            if (build_cmd->count("--diameter") > 0) diameter = build_diameter;
            mcone::DistanceMatrix m =
                mcone::build_universal(build_steps, g.seed, {}, diameter);
            if (g.output.empty())
                throw mcone::StructuralError("build-universal requires --output");
            mcone::io::write_matrix_json(g.output, m);
            json config{{"steps", build_steps}, {"schedule", "diagonal"}};
            if (diameter) config["diameter"] = *diameter;
            emit(g, json{{"order", m.order()}, {"output", g.output}});
            write_run_manifest(g, "build-universal", raw_argv, config, {g.output});
            return kExitPass;
        }

        if (check_cmd->parsed()) {
            mcone::DistanceMatrix m = mcone::io::read_matrix_json(check_input, g.tolerance);
            mcone::UniversalityReport report =
                mcone::universality_test(m, check_n, check_eps, check_targets, g.seed);
            json out{{"order_tested", report.order_tested},
                     {"epsilon", report.epsilon},
                     {"targets_tested", report.targets_tested},
                     {"worst_defect", report.worst_defect},
                     {"passed", report.passed}};
            emit(g, out);
            if (!g.output.empty())
                mcone::io::atomic_write_text(g.output, out.dump(2) + "\n");
            write_run_manifest(g, "check-universal", raw_argv,
                               {{"input", check_input},
                                {"n", check_n},
                                {"epsilon", check_eps},
                                {"targets", check_targets}},
                               g.output.empty() ? std::vector<std::string>{}
                                                : std::vector<std::string>{g.output});
            return report.passed ? kExitPass : kExitFail;
        }

        if (sample_cmd->parsed()) {
            mcone::RandomMetricConfig config;
            config.order = sample_order;
            config.diagonal_law = mcone::DiagonalLaw::parse(sample_law);
            config.seed = g.seed;
            config.allow_approximate = sample_allow_approx;
            mcone::RandomMetricSampler sampler(config);
            while (sampler.current().order() < config.order) sampler.step();
            if (g.output.empty())
                throw mcone::StructuralError("sample-metric requires --output");
            mcone::io::write_matrix_json(g.output, sampler.current());
            emit(g, json{{"order", sampler.current().order()},
                         {"sampler", sampler.approximate_used() ? "approximate" : "exact"}});
            write_run_manifest(g, "sample-metric", raw_argv,
                               {{"order", sample_order},
                                {"law", sample_law},
                                {"sampler", sampler.approximate_used() ? "approximate" : "exact"}},
                               {g.output});
            return kExitPass;
        }

        if (matdist_cmd->parsed()) {
            mcone::MetricTriple t = mcone::io::read_triple_json(matdist_triple, g.tolerance);
            mcone::EmpiricalMatrixDistribution E =
                mcone::sample_matrix_distribution(t, matdist_k, matdist_count, g.seed);
            if (g.output.empty()) throw mcone::StructuralError("matdist requires --output");
            mcone::io::write_samples_jsonl(g.output, E);
            std::vector<std::string> artifacts{g.output};
            if (!matdist_hist.empty()) {
                std::vector<double> entries;
                for (const auto& s : E.samples)
                    for (double v : s.upper()) entries.push_back(v);
                mcone::io::write_histogram_csv(matdist_hist, entries, matdist_bins);
                artifacts.push_back(matdist_hist);
            }
            emit(g, json{{"count", matdist_count}, {"k", matdist_k}});
            write_run_manifest(g, "matdist", raw_argv,
                               {{"triple", matdist_triple},
                                {"k", matdist_k},
                                {"count", matdist_count},
                                {"histogram", matdist_hist},
                                {"bins", matdist_bins}},
                               std::move(artifacts));
            return kExitPass;
        }

        if (equiv_cmd->parsed()) {
            mcone::MetricTriple a = mcone::io::read_triple_json(equiv_a, g.tolerance);
            mcone::MetricTriple b = mcone::io::read_triple_json(equiv_b, g.tolerance);
            mcone::EquivalenceVerdict verdict = mcone::equivalence_test(
                a, b, equiv_k, equiv_count, equiv_perms, equiv_alpha, g.seed);
            json out{{"statistic", verdict.statistic}, {"threshold", verdict.threshold},
                     {"p_value", verdict.p_value},    {"equivalent", verdict.equivalent},
                     {"k", verdict.k},                {"count", verdict.count},
                     {"permutations", verdict.permutations}, {"alpha", verdict.alpha}};
            emit(g, out);
            if (!g.output.empty()) mcone::io::atomic_write_text(g.output, out.dump(2) + "\n");
            write_run_manifest(g, "equiv-test", raw_argv,
                               {{"a", equiv_a},
                                {"b", equiv_b},
                                {"k", equiv_k},
                                {"count", equiv_count},
                                {"perms", equiv_perms},
                                {"alpha", equiv_alpha}},
                               g.output.empty() ? std::vector<std::string>{}
                                                : std::vector<std::string>{g.output});
            return verdict.equivalent ? kExitPass : kExitFail;
        }

        if (compact_cmd->parsed()) {
            mcone::MetricTriple t = mcone::io::read_triple_json(compact_triple, g.tolerance);
            mcone::CriterionCheck check =
                compact_mode == "tight"
                    ? mcone::tightness_check(t, compact_n, compact_anchors, compact_eps,
                                             compact_replicas, g.seed)
                    : mcone::compactness_check(t, compact_n, compact_anchors, compact_eps,
                                               compact_replicas, g.seed);
            json out{{"mode", compact_mode},       {"epsilon", check.epsilon},
                     {"anchors", check.N},         {"n", check.n},
                     {"replicas", check.replicas}, {"probability", check.probability},
                     {"pass", check.pass}};
            emit(g, out);
            if (!g.output.empty()) mcone::io::atomic_write_text(g.output, out.dump(2) + "\n");
            write_run_manifest(g, "compact-check", raw_argv,
                               {{"triple", compact_triple},
                                {"epsilon", compact_eps},
                                {"anchors", compact_anchors},
                                {"n", compact_n},
                                {"replicas", compact_replicas},
                                {"mode", compact_mode}},
                               g.output.empty() ? std::vector<std::string>{}
                                                : std::vector<std::string>{g.output});
            return check.pass ? kExitPass : kExitFail;
        }

        if (ball_cmd->parsed()) {
            mcone::MetricTriple t = mcone::io::read_triple_json(ball_triple, g.tolerance);
            mcone::LongSample s = mcone::draw_long_sample(t, ball_n, g.seed);
            const double estimate = mcone::ball_measure_estimate(s, ball_anchor, ball_radius);
            json out{{"estimate", estimate},
                     {"n", ball_n},
                     {"anchor", ball_anchor},
                     {"radius", ball_radius}};
            emit(g, out);
            if (!g.output.empty()) mcone::io::atomic_write_text(g.output, out.dump(2) + "\n");
            write_run_manifest(g, "ball-measure", raw_argv,
                               {{"triple", ball_triple},
                                {"n", ball_n},
                                {"anchor", ball_anchor},
                                {"radius", ball_radius}},
                               g.output.empty() ? std::vector<std::string>{}
                                                : std::vector<std::string>{g.output});
            return kExitPass;
        }
    } catch (const mcone::Error& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return kExitError;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << std::endl;
        return kExitError;
    }

    std::cerr << "error: no subcommand executed" << std::endl;
    return kExitError;
}
