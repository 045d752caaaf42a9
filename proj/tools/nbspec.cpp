// Command-line driver. Exit codes: 0 success, 1 a quantitative check failed,
// 2 usage or input error, 3 internal error.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "nbspec/errors.hpp"
#include "nbspec/graphgen.hpp"
#include "nbspec/io.hpp"
#include "nbspec/measures.hpp"
#include "nbspec/operators.hpp"
#include "nbspec/rsbm.hpp"
#include "nbspec/spectral.hpp"
#include "nbspec/trials.hpp"
#include "nbspec/verify.hpp"

namespace {

using namespace nbspec;

constexpr int kOk = 0;
constexpr int kCheckFailed = 1;
constexpr int kUsage = 2;
constexpr int kInternal = 3;

struct UsageError : Error {
    using Error::Error;
};

LiftedSpectrum lift(const AnyGraph& g, LiftOptions options) {
    return std::visit(
        [&](const auto& x) -> LiftedSpectrum {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, RsbmGraph>) {
                return full_lifted_spectrum(x.graph, options);
            } else {
                return full_lifted_spectrum(x, options);
            }
        },
        g);
}

// A spectrum file is recognized by its "pairs" field; anything else is read
// as a graph and lifted.
LiftedSpectrum spectrum_input(const std::string& path) {
    const Json j = read_json(path);
    if (j.is_object() && j.contains("pairs")) return spectrum_from_json(j);
    return lift(graph_from_json(j), LiftOptions{false});
}

void emit(const std::string& path, const std::string& text) {
    if (!path.empty()) write_text(path, text);
}

// ---- gen

struct GenArgs {
    std::string model;
    std::optional<int> n, d, k, d1, d2;
    std::uint64_t seed = 0;
    std::string out = "-";
};

int run_gen(const GenArgs& a) {
    const auto need = [&](const std::optional<int>& v, const char* flag) {
        if (!v) throw UsageError(std::string("--model ") + a.model + " needs " + flag);
        return *v;
    };
    const Seed seed{a.seed};
    AnyGraph g;
    if (a.model == "regular") {
        g = sample_regular_graph(need(a.n, "--n"), need(a.d, "--d"), seed);
    } else if (a.model == "hypergraph") {
        g = sample_regular_hypergraph(need(a.n, "--n"), need(a.d, "--d"), need(a.k, "--k"), seed);
    } else {
        g = sample_rsbm(need(a.n, "--n"), need(a.d1, "--d1"), need(a.d2, "--d2"), seed);
    }
    write_graph(a.out, g);
    std::cerr << "gen: " << model_of(g) << " written to " << a.out << "\n";
    return kOk;
}

// ---- spectrum

int run_spectrum(const std::string& in, const std::string& out, bool values_only) {
    const AnyGraph g = read_graph(in);
    const auto s = lift(g, LiftOptions{!values_only});
    write_spectrum(out, g, s);
    std::cerr << "spectrum: " << s.pairs.size() << " pairs, " << 2 * s.pairs.size()
              << " reduced eigenvalues\n";
    return kOk;
}

// ---- project

int run_project(const std::string& in, const std::string& rescale_name, bool exclude,
                std::optional<int> bins, const std::string& out, const std::string& samples_out) {
    const auto rescale = parse_rescale(rescale_name);
    if (!rescale) throw UsageError("unknown --rescale " + rescale_name);
    const auto m = project_real_parts(spectrum_input(in), *rescale, exclude);
    write_histogram(out, histogram(m, bins));
    if (!samples_out.empty()) {
        std::string text;
        char line[40];
        for (double x : m.samples) {
            std::snprintf(line, sizeof line, "%.17g\n", x);
            text += line;
        }
        write_text(samples_out, text);
    }
    std::cerr << "project: " << m.size() << " samples, " << m.excluded_trivial << " excluded\n";
    return kOk;
}

// ---- ks

struct KsArgs {
    std::string in;
    std::string law;
    std::optional<double> alpha;
    std::optional<std::string> rescale;
    bool exclude = false;
    std::optional<double> threshold;
    std::string out;
};

int run_ks(const KsArgs& a) {
    const auto s = spectrum_input(a.in);
    DensityModel model;
    std::string default_rescale;
    double default_threshold = 0.0;
    if (a.law == "km") {
        model = KestenMcKay{s.params.d};
        default_rescale = "none";
        default_threshold = 0.06;
    } else if (a.law == "sc") {
        model = Semicircle{};
        default_rescale = "graph";
        default_threshold = 0.06;
    } else if (a.law == "hyperfixed") {
        model = HyperFixed{s.params.d, s.params.k};
        default_rescale = "hypergraph";
        default_threshold = 0.08;
    } else {
        model = HyperAlpha{a.alpha.value_or(static_cast<double>(s.params.d) / s.params.k)};
        default_rescale = "hypergraph";
        default_threshold = 0.10;
    }
    validate(model);
    const std::string rescale_name = a.rescale.value_or(default_rescale);
    const auto rescale = parse_rescale(rescale_name);
    if (!rescale) throw UsageError("unknown --rescale " + rescale_name);
    const double threshold = a.threshold.value_or(default_threshold);
    if (!(threshold > 0.0)) throw UsageError("--threshold must be positive");

    const auto m = project_real_parts(s, *rescale, a.exclude);
    const double ks = ks_distance(m, model);
    if (const auto warning = hypothesis_warning(model)) std::cerr << "ks: warning: " << *warning << "\n";
    Json report = ks_report(model, m, ks, threshold);
    report["rescale"] = rescale_name;
    emit(a.out, dump(report));
    std::printf("%.17g\n", ks);
    std::cerr << "ks: " << model_name(model) << " distance " << ks << " (threshold " << threshold << ")\n";
    return ks <= threshold ? kOk : kCheckFailed;
}

// ---- deloc

int run_deloc(const std::string& in, const std::string& out) {
    const AnyGraph g = read_graph(in);
    const DelocReport r = std::visit(
        [](const auto& x) {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, RsbmGraph>) {
                return delocalization_audit(x.graph, full_lifted_spectrum(x.graph));
            } else {
                return delocalization_audit(x, full_lifted_spectrum(x));
            }
        },
        g);
    emit(out, dump(deloc_report(g, r)));
    std::cerr << "deloc: " << r.records.size() << " lifted vectors, bound violations "
              << r.bound_violations << ", " << (r.ok() ? "ok" : "FAILED") << "\n";
    return r.ok() ? kOk : kCheckFailed;
}

// ---- verify

int run_verify(const std::string& in, int trials, std::uint64_t seed, const std::vector<std::string>& zs,
               const std::string& out) {
    const AnyGraph g = read_graph(in);
    std::vector<Complex> points;
    for (const auto& text : zs) {
        const auto z = parse_complex(text);
        if (!z) throw UsageError("cannot parse complex value '" + text + "' (expected a+bi)");
        points.push_back(*z);
    }
    const auto check = [&](Complex z) {
        return std::visit(
            [&](const auto& x) {
                using T = std::decay_t<decltype(x)>;
                if constexpr (std::is_same_v<T, RegularHypergraph>) {
                    return ihara_bass_check_hyper(x, z);
                } else if constexpr (std::is_same_v<T, RsbmGraph>) {
                    return ihara_bass_check(x.graph, z);
                } else {
                    return ihara_bass_check(x, z);
                }
            },
            g);
    };
    VerifyReport report;
    if (points.empty()) {
        report = std::visit(
            [&](const auto& x) {
                using T = std::decay_t<decltype(x)>;
                if constexpr (std::is_same_v<T, RsbmGraph>) {
                    return ihara_bass_trials(x.graph, trials, Seed{seed});
                } else {
                    return ihara_bass_trials(x, trials, Seed{seed});
                }
            },
            g);
    } else {
        for (const Complex z : points) report.records.push_back(check(z));
    }
    emit(out, dump(verify_report(g, report)));
    std::size_t passed = 0;
    for (const auto& r : report.records) passed += r.pass;
    std::cerr << "verify: " << passed << "/" << report.records.size() << " points pass\n";
    return report.ok() ? kOk : kCheckFailed;
}

// ---- rsbm-recover

struct RecoverArgs {
    std::optional<int> n, d1, d2;
    std::optional<std::uint64_t> seed;
    std::optional<int> trials;
    bool insider = false;
    std::optional<double> insider_threshold;
    int workers = 0;
    std::string out;
    std::string config;
};

int run_recover(RecoverArgs a) {
    if (!a.config.empty()) {
        const ExperimentConfig c = read_config(a.config);
        if (c.model != "rsbm") throw UsageError("config model must be rsbm");
        if (!a.n) a.n = c.n;
        if (!a.d1) a.d1 = c.d1;
        if (!a.d2) a.d2 = c.d2;
        if (!a.seed) a.seed = c.seed;
        if (!a.trials) a.trials = c.trials;
        if (a.out.empty() && c.outputs.contains("report")) a.out = c.outputs.at("report");
        if (!a.insider_threshold && c.tolerances.contains("insider")) {
            a.insider_threshold = c.tolerances.at("insider");
        }
    }
    if (!a.n || !a.d1 || !a.d2) throw UsageError("rsbm-recover needs --n, --d1 and --d2");
    const int trials = a.trials.value_or(1);
    if (trials < 1) throw UsageError("--trials must be at least 1");
    const double threshold = a.insider_threshold.value_or(0.15);
    const int n = *a.n, d1 = *a.d1, d2 = *a.d2;
    const InsiderPair insider = rsbm_mu2(d1, d2);
    if (!insider.detectable) throw PreconditionError("(d1-d2)^2 <= 4(d1+d2-1): not detectable");

    const auto results = run_trials(trials, Seed{a.seed.value_or(0)},
                                    a.workers > 0 ? a.workers : default_workers(),
                                    [&](int, Seed seed) {
                                        RecoveryTrial t;
                                        t.seed = seed.master;
                                        t.insider = insider;
                                        const RsbmGraph g = sample_rsbm(n, d1, d2, seed);
                                        deterministic_sigma_eigenpair(g);
                                        try {
                                            t.recovery = recover_communities(g);
                                            if (a.insider) {
                                                t.insider_max_deviation = insider_gap_report(g).max_deviation;
                                            }
                                        } catch (const AmbiguityError& e) {
                                            t.error = e.what();
                                        } catch (const MultiplicityError& e) {
                                            t.error = e.what();
                                        }
                                        return t;
                                    });

    int exact = 0;
    bool ok = true;
    Json list = Json::array();
    for (const auto& t : results) {
        exact += t.error.empty() && t.recovery.exact;
        if (!t.error.empty() || !t.recovery.exact) ok = false;
        if (t.insider_max_deviation && *t.insider_max_deviation > threshold) ok = false;
        list.push_back(recovery_report(n, d1, d2, t));
    }
    Json report;
    report["n"] = n;
    report["d1"] = d1;
    report["d2"] = d2;
    report["master_seed"] = a.seed.value_or(0);
    report["trials"] = trials;
    report["exact"] = exact;
    report["insider_threshold"] = threshold;
    report["results"] = std::move(list);
    emit(a.out, dump(report));
    std::printf("exact: %d/%d\n", exact, trials);
    return ok ? kOk : kCheckFailed;
}

// ---- matrix

int run_matrix(const std::string& in, const std::string& which, const std::string& out) {
    const AnyGraph g = read_graph(in);
    Json header = model_params(g);
    header["matrix"] = which;
    const SparseMatrix m = std::visit(
        [&](const auto& x) -> SparseMatrix {
            using T = std::decay_t<decltype(x)>;
            const auto& base = [&]() -> const auto& {
                if constexpr (std::is_same_v<T, RsbmGraph>) {
                    return x.graph;
                } else {
                    return x;
                }
            }();
            if (which == "adjacency") return adjacency_sparse(base);
            if (which == "nb") return nonbacktracking_matrix(base);
            return reduced_nb_matrix(base).matrix;
        },
        g);
    write_text(out, matrix_dump(m, header));
    return kOk;
}

bool is_input_error(const Error& e) {
    return dynamic_cast<const UsageError*>(&e) || dynamic_cast<const ParseError*>(&e) ||
           dynamic_cast<const InvariantError*>(&e) || dynamic_cast<const ParityError*>(&e) ||
           dynamic_cast<const InfeasibleError*>(&e) || dynamic_cast<const DivisibilityError*>(&e) ||
           dynamic_cast<const DomainError*>(&e) || dynamic_cast<const PreconditionError*>(&e) ||
           dynamic_cast<const NearSingularError*>(&e) || dynamic_cast<const DegenerateError*>(&e);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Non-backtracking spectra of random regular graphs, hypergraphs and block models"};
    app.require_subcommand(1);

    GenArgs gen;
    auto* gen_cmd = app.add_subcommand("gen", "Sample a regular graph, hypergraph or RSBM");
    gen_cmd->add_option("--model", gen.model, "regular | hypergraph | rsbm")
        ->required()
        ->check(CLI::IsMember({"regular", "hypergraph", "rsbm"}));
    gen_cmd->add_option("--n", gen.n, "vertex count");
    gen_cmd->add_option("--d", gen.d, "degree");
    gen_cmd->add_option("--k", gen.k, "hyperedge size");
    gen_cmd->add_option("--d1", gen.d1, "within-community degree");
    gen_cmd->add_option("--d2", gen.d2, "cross-community degree");
    gen_cmd->add_option("--seed", gen.seed, "master seed")->capture_default_str();
    gen_cmd->add_option("--out", gen.out, "output graph file, - for stdout")->capture_default_str();

    std::string spectrum_in, spectrum_out = "-";
    bool values_only = false;
    auto* spectrum_cmd = app.add_subcommand("spectrum", "Lift the adjacency spectrum to the reduced matrix");
    spectrum_cmd->add_option("--in", spectrum_in, "graph file")->required();
    spectrum_cmd->add_option("--out", spectrum_out, "spectrum file, - for stdout")->capture_default_str();
    spectrum_cmd->add_flag("--values-only", values_only, "skip eigenvectors, residuals and ratios");

    std::string project_in, project_rescale = "none", project_out = "-", samples_out;
    bool project_exclude = false;
    std::optional<int> bins;
    auto* project_cmd = app.add_subcommand("project", "Histogram of the real parts of the lifted eigenvalues");
    project_cmd->add_option("--in", project_in, "graph or spectrum file")->required();
    project_cmd->add_option("--rescale", project_rescale, "none | graph | hypergraph | hypergraph-centered")
        ->capture_default_str();
    project_cmd->add_flag("--exclude-trivial", project_exclude, "drop the pair lifted from the top eigenvalue");
    project_cmd->add_option("--bins", bins, "bin count (default: Freedman-Diaconis)")->check(CLI::PositiveNumber);
    project_cmd->add_option("--out", project_out, "histogram CSV, - for stdout")->capture_default_str();
    project_cmd->add_option("--samples-out", samples_out, "also write the projected samples, one per line");

    KsArgs ks;
    auto* ks_cmd = app.add_subcommand("ks", "Kolmogorov-Smirnov distance to a limit law; exit 1 above threshold");
    ks_cmd->add_option("--in", ks.in, "graph or spectrum file")->required();
    ks_cmd->add_option("--law", ks.law, "km | sc | hyperfixed | hyperalpha")
        ->required()
        ->check(CLI::IsMember({"km", "sc", "hyperfixed", "hyperalpha"}));
    ks_cmd->add_option("--alpha", ks.alpha, "alpha for hyperalpha (default d/k)");
    ks_cmd->add_option("--rescale", ks.rescale, "override the law's default rescaling");
    ks_cmd->add_flag("--exclude-trivial", ks.exclude, "drop the pair lifted from the top eigenvalue");
    ks_cmd->add_option("--threshold", ks.threshold,
                       "pass threshold (defaults: km 0.06, sc 0.06, hyperfixed 0.08, hyperalpha 0.10)");
    ks_cmd->add_option("--out", ks.out, "KS report JSON");

    std::string deloc_in, deloc_out;
    auto* deloc_cmd = app.add_subcommand("deloc", "Eigenvector lift audit; exit 1 on any violation");
    deloc_cmd->add_option("--in", deloc_in, "graph file")->required();
    deloc_cmd->add_option("--out", deloc_out, "report JSON");

    std::string verify_in, verify_out;
    int verify_trials = 8;
    std::uint64_t verify_seed = 0;
    std::vector<std::string> verify_z;
    auto* verify_cmd = app.add_subcommand("verify", "Ihara-Bass determinant identity in log space");
    verify_cmd->add_option("--in", verify_in, "graph file")->required();
    verify_cmd->add_option("--trials", verify_trials, "random points in the annulus")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    verify_cmd->add_option("--seed", verify_seed, "seed for the random points")->capture_default_str();
    verify_cmd->add_option("--z", verify_z, "explicit point(s) written as a+bi, e.g. 0.3+0.4i or -2i");
    verify_cmd->add_option("--out", verify_out, "report JSON");

    RecoverArgs rec;
    auto* rec_cmd = app.add_subcommand("rsbm-recover", "Community recovery from the insider eigenvector");
    rec_cmd->add_option("--n", rec.n, "vertex count");
    rec_cmd->add_option("--d1", rec.d1, "within-community degree");
    rec_cmd->add_option("--d2", rec.d2, "cross-community degree");
    rec_cmd->add_option("--seed", rec.seed, "master seed; trial i uses a seed derived from it");
    rec_cmd->add_option("--trials", rec.trials, "number of trials (default 1)");
    rec_cmd->add_flag("--insider", rec.insider, "also report the circle deviation of the bulk (even d1)");
    rec_cmd->add_option("--insider-threshold", rec.insider_threshold, "max circle deviation (default 0.15)");
    rec_cmd->add_option("--workers", rec.workers, "worker threads (default: hardware concurrency)");
    rec_cmd->add_option("--out", rec.out, "report JSON");
    rec_cmd->add_option("--config", rec.config, "experiment config JSON; flags override it");

    std::string matrix_in, matrix_which = "nb", matrix_out = "-";
    auto* matrix_cmd = app.add_subcommand("matrix", "Dump an operator as sorted 'row col value' triplets");
    matrix_cmd->add_option("--in", matrix_in, "graph file")->required();
    matrix_cmd->add_option("--which", matrix_which, "adjacency | nb | reduced")
        ->check(CLI::IsMember({"adjacency", "nb", "reduced"}))
        ->capture_default_str();
    matrix_cmd->add_option("--out", matrix_out, "output file, - for stdout")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kOk : kUsage;
    }

    try {
        if (*gen_cmd) return run_gen(gen);
        if (*spectrum_cmd) return run_spectrum(spectrum_in, spectrum_out, values_only);
        if (*project_cmd) return run_project(project_in, project_rescale, project_exclude, bins, project_out, samples_out);
        if (*ks_cmd) return run_ks(ks);
        if (*deloc_cmd) return run_deloc(deloc_in, deloc_out);
        if (*verify_cmd) return run_verify(verify_in, verify_trials, verify_seed, verify_z, verify_out);
        if (*rec_cmd) return run_recover(rec);
        if (*matrix_cmd) return run_matrix(matrix_in, matrix_which, matrix_out);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return is_input_error(e) ? kUsage : kInternal;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kInternal;
    }
    return kInternal;
}
