// Acceptance gate. Prints one PASS/FAIL line per criterion (1-8) followed by
// indented detail lines; exits 0 only when every selected criterion passes.
//
//   nbspec_acceptance [--criteria 1,2,...] [--cli PATH] [--work DIR]

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>
#include <unistd.h>

#include "exact_poly.hpp"
#include "nbspec/errors.hpp"
#include "nbspec/graphgen.hpp"
#include "nbspec/io.hpp"
#include "nbspec/measures.hpp"
#include "nbspec/rsbm.hpp"
#include "nbspec/spectral.hpp"
#include "nbspec/trials.hpp"
#include "nbspec/verify.hpp"

namespace {

using namespace nbspec;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

// ---- pinned tolerances and limits

constexpr int kInstancesPerSetting = 50;
constexpr double kResidualTol = 1e-9;
constexpr double kIdentityRelTol = 1e-8;
constexpr double kVietaRelTol = 1e-10;
constexpr double kTopRatioTol = 1e-12;
constexpr double kCriterion1Seconds = 120.0;

constexpr int kOracleMaxSize = 24;  // n*d
constexpr double kOracleMatchTol = 1e-8;
constexpr int kIharaPoints = 8;
constexpr double kCriterion2Seconds = 10.0;

constexpr int kSeeds = 5;
constexpr double kKmThreshold = 0.06;
constexpr double kCriterion3Seconds = 60.0;
constexpr double kScThreshold = 0.06;
constexpr double kHyperFixedThreshold = 0.08;
constexpr double kHyperAlphaThreshold = 0.10;
constexpr double kAlphaLimit = 1e4;
constexpr double kAlphaLimitTol = 1e-3;

constexpr double kInsiderMatchTol = 1e-9;
constexpr int kRecoveryTrials = 10;
constexpr int kInsiderSeeds = 3;
constexpr double kInsiderDeviation = 0.15;
constexpr double kCriterion7Seconds = 120.0;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, x);
    return buf;
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t m = v.size() / 2;
    return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

std::string join(const std::vector<double>& v, const char* f = "%.4f") {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + fmt(f, v[i]);
    return s;
}

struct Result {
    int id = 0;
    std::string title;
    bool pass = false;
    std::string summary;
    std::vector<std::string> details;
};

void print(const Result& r) {
    std::printf("criterion %d %s %s: %s\n", r.id, r.pass ? "PASS" : "FAIL", r.title.c_str(), r.summary.c_str());
    for (const auto& d : r.details) std::printf("    %s\n", d.c_str());
    std::fflush(stdout);
}

// ---- criteria 1 and 6 share the instance sweep

struct SweepTotals {
    int instances = 0;
    std::size_t vectors_u = 0;
    std::size_t vectors_w = 0;
    std::size_t vieta = 0;
    std::size_t circle = 0;
    std::size_t residual = 0;
    std::size_t norm = 0;
    std::size_t literal_norm_checked = 0;
    std::size_t literal_norm = 0;
    std::size_t pairing = 0;
    std::size_t pairing_checked = 0;
    std::size_t monotone = 0;
    std::size_t bound = 0;
    std::size_t bound_missing = 0;
    std::size_t top_checked = 0;
    std::size_t top = 0;
    double max_u_residual = 0.0;
    double max_w_residual = 0.0;
    double max_top_error = 0.0;
    double max_bound_ratio = 0.0;  // ratio_w / bound
    double seconds = 0.0;  // wall clock
    int workers = 1;
    std::vector<std::pair<std::string, double>> timing;
};

template <typename Model>
void sweep_one(const Model& g, const LiftParams& p, SweepTotals& t) {
    const auto spectrum = full_lifted_spectrum(g);
    const DelocReport rep = delocalization_audit(g, spectrum);
    ++t.instances;
    t.vieta += rep.vieta_violations;
    t.circle += rep.circle_violations;
    t.residual += rep.residual_violations;
    t.norm += rep.norm_violations;
    t.pairing += rep.pairing_violations;
    t.pairing_checked += rep.pairing_checked;
    t.monotone += rep.u_violations;
    t.bound += rep.bound_violations;
    t.max_u_residual = std::max(t.max_u_residual, rep.max_u_residual);
    t.max_w_residual = std::max(t.max_w_residual, rep.max_w_residual);
    if (rep.top_ratio_w) {
        ++t.top_checked;
        const double err = std::abs(*rep.top_ratio_w - rep.top_ratio_expected);
        t.max_top_error = std::max(t.max_top_error, err);
        if (err > kTopRatioTol) ++t.top;
    }
    if (!rep.top_ok) ++t.top;
    for (const auto& r : rep.records) {
        ++t.vectors_u;
        // a conjugate pair: ||w||^2 must equal (k-1)(d+l)(d(k-1)-l) itself
        if (r.ratio_w) {
            ++t.vectors_w;
            if (r.mu.imag() != 0.0) {
                ++t.literal_norm_checked;
                const double expected = (p.k - 1.0) * (p.d + r.lambda) * (p.top_lambda() - r.lambda);
                if (std::abs(r.norm_squared - expected) > kIdentityRelTol * std::abs(expected)) ++t.literal_norm;
            }
            if (!r.bound) {
                ++t.bound_missing;
            } else {
                t.max_bound_ratio = std::max(t.max_bound_ratio, *r.ratio_w / *r.bound);
            }
        }
    }
}

void merge(SweepTotals& into, const SweepTotals& x) {
    into.instances += x.instances;
    into.vectors_u += x.vectors_u;
    into.vectors_w += x.vectors_w;
    into.vieta += x.vieta;
    into.circle += x.circle;
    into.residual += x.residual;
    into.norm += x.norm;
    into.literal_norm_checked += x.literal_norm_checked;
    into.literal_norm += x.literal_norm;
    into.pairing += x.pairing;
    into.pairing_checked += x.pairing_checked;
    into.monotone += x.monotone;
    into.bound += x.bound;
    into.bound_missing += x.bound_missing;
    into.top_checked += x.top_checked;
    into.top += x.top;
    into.max_u_residual = std::max(into.max_u_residual, x.max_u_residual);
    into.max_w_residual = std::max(into.max_w_residual, x.max_w_residual);
    into.max_top_error = std::max(into.max_top_error, x.max_top_error);
    into.max_bound_ratio = std::max(into.max_bound_ratio, x.max_bound_ratio);
}

// (n, d, k) with k = 2 for graphs.
struct Setting {
    int n, d, k;
    std::string name() const {
        return "(" + std::to_string(n) + "," + std::to_string(d) + (k == 2 ? "" : "," + std::to_string(k)) + ")";
    }
};

SweepTotals run_sweep(int workers) {
    std::vector<Setting> settings;
    for (int n : {50, 200, 1000}) {
        for (int d : {3, 4, 5}) settings.push_back({n, d, 2});
    }
    for (const auto& s : std::vector<Setting>{{60, 2, 3}, {90, 3, 3}, {120, 4, 3}}) settings.push_back(s);

    const int jobs = static_cast<int>(settings.size()) * kInstancesPerSetting;
    const auto t0 = Clock::now();
    const auto parts = run_trials(jobs, Seed{0}, workers, [&](int job, Seed) {
        const Setting& st = settings[static_cast<std::size_t>(job / kInstancesPerSetting)];
        const auto i = static_cast<std::uint64_t>(job % kInstancesPerSetting);
        const auto start = Clock::now();
        SweepTotals part;
        if (st.k == 2) {
            const Seed master{static_cast<std::uint64_t>(100 * st.n + st.d)};
            sweep_one(sample_regular_graph(st.n, st.d, master.derive(i)), LiftParams{st.d, 2}, part);
        } else {
            const Seed master{static_cast<std::uint64_t>(10000 * st.n + 100 * st.d + st.k)};
            sweep_one(sample_regular_hypergraph(st.n, st.d, st.k, master.derive(i)), LiftParams{st.d, st.k}, part);
        }
        part.seconds = seconds_since(start);
        return part;
    });
    SweepTotals t;
    for (std::size_t s = 0; s < settings.size(); ++s) {
        double secs = 0.0;
        for (int i = 0; i < kInstancesPerSetting; ++i) {
            const auto& part = parts[s * kInstancesPerSetting + static_cast<std::size_t>(i)];
            merge(t, part);
            secs += part.seconds;
        }
        t.timing.emplace_back(settings[s].name(), secs);
    }
    t.workers = workers;
    t.seconds = seconds_since(t0);
    return t;
}

Result criterion1(const SweepTotals& t) {
    Result r{1, "exact identities", false, {}, {}};
    const std::size_t violations =
        t.vieta + t.circle + t.residual + t.norm + t.literal_norm + t.pairing + t.monotone + t.bound;
    r.pass = violations == 0 && t.seconds <= kCriterion1Seconds;
    r.summary = std::to_string(t.instances) + " instances, " + std::to_string(violations) + " violations, " +
                fmt("%.1f", t.seconds) + " s (limit " + fmt("%.0f", kCriterion1Seconds) + " s)";
    r.details = {
        "vieta " + std::to_string(t.vieta) + ", circle " + std::to_string(t.circle) + ", residual > 1e-9 " +
            std::to_string(t.residual) + " (max u " + fmt("%.2e", t.max_u_residual) + ", max w " +
            fmt("%.2e", t.max_w_residual) + ")",
        "norm identity on conjugate pairs " + std::to_string(t.literal_norm) + "/" +
            std::to_string(t.literal_norm_checked) + ", general norm " + std::to_string(t.norm) +
            ", bilinear pairing " + std::to_string(t.pairing) + "/" + std::to_string(t.pairing_checked),
        "u ratio monotonicity " + std::to_string(t.monotone) + "/" + std::to_string(t.vectors_u) +
            ", w bound dominance " + std::to_string(t.bound) + "/" + std::to_string(t.vectors_w - t.bound_missing) +
            " (max ratio/bound " + fmt("%.3f", t.max_bound_ratio) + ")",
    };
    std::string timing = std::to_string(t.workers) + " worker(s); seconds per 50 instances:";
    for (const auto& [name, secs] : t.timing) timing += " " + name + " " + fmt("%.1f", secs);
    r.details.push_back(timing);
    return r;
}

Result criterion6(const SweepTotals& t) {
    Result r{6, "delocalization", false, {}, {}};
    const std::size_t violations = t.monotone + t.bound + t.top;
    r.pass = violations == 0 && t.top_checked > 0;
    r.summary = std::to_string(violations) + " violations over " + std::to_string(t.instances) + " instances";
    r.details = {
        "u ratio <= v ratio: " + std::to_string(t.vectors_u - t.monotone) + "/" + std::to_string(t.vectors_u),
        "w ratio <= deterministic bound: " + std::to_string(t.vectors_w - t.bound_missing - t.bound) + "/" +
            std::to_string(t.vectors_w - t.bound_missing) + " (" + std::to_string(t.bound_missing) +
            " lifts at lambda = -d or d(k-1) have no finite bound)",
        "top lift ratio = 1/sqrt(nd): " + std::to_string(t.top_checked - t.top) + "/" + std::to_string(t.top_checked) +
            ", max error " + fmt("%.2e", t.max_top_error) + " (tolerance 1e-12)",
    };
    return r;
}

// ---- criterion 2

Result criterion2() {
    Result r{2, "brute-force oracle", false, {}, {}};
    const auto t0 = Clock::now();
    std::vector<std::pair<std::string, AnyGraph>> corpus;
    for (const char* name : {"c3", "c4", "c6", "k4", "k5", "k33", "prism", "octahedron", "cube", "k4_3", "fano",
                             "two_triangles"}) {
        corpus.emplace_back(name, read_graph(fs::path(NBSPEC_FIXTURE_DIR) / (std::string(name) + ".json")));
    }
    for (std::uint64_t s = 0; s < 5; ++s) {
        corpus.emplace_back("sample(6,3)#" + std::to_string(s), sample_regular_graph(6, 3, Seed{s}));
        corpus.emplace_back("sample(8,3)#" + std::to_string(s), sample_regular_graph(8, 3, Seed{s}));
        corpus.emplace_back("sample(6,4)#" + std::to_string(s), sample_regular_graph(6, 4, Seed{s}));
        corpus.emplace_back("sample(6,2,3)#" + std::to_string(s), sample_regular_hypergraph(6, 2, 3, Seed{s}));
        corpus.emplace_back("sample(8,3,4)#" + std::to_string(s), sample_regular_hypergraph(8, 3, 4, Seed{s}));
    }

    int checked = 0, match_fail = 0, ihara_fail = 0;
    double worst_match = 0.0, worst_logabs = 0.0, worst_phase = 0.0;
    std::string failures;
    for (const auto& [name, any] : corpus) {
        std::vector<std::complex<double>> expected, found;
        VerifyReport ver;
        bool in_scope = true;
        std::visit(
            [&](const auto& g) {
                using T = std::decay_t<decltype(g)>;
                if constexpr (std::is_same_v<T, RegularGraph>) {
                    in_scope = g.n * g.d <= kOracleMaxSize;
                    if (!in_scope) return;
                    expected = oracle::roots(oracle::charpoly(oracle::graph_reduced(g.n, g.d, g.edges)));
                    found = full_lifted_spectrum(g, LiftOptions{false}).eigenvalues();
                    ver = ihara_bass_trials(g, kIharaPoints, Seed{static_cast<std::uint64_t>(checked)});
                } else if constexpr (std::is_same_v<T, RegularHypergraph>) {
                    in_scope = g.n * g.d <= kOracleMaxSize;
                    if (!in_scope) return;
                    expected = oracle::roots(oracle::charpoly(oracle::hyper_reduced({g.n, g.d, g.k, g.hyperedges})));
                    found = full_lifted_spectrum(g, LiftOptions{false}).eigenvalues();
                    ver = ihara_bass_trials(g, kIharaPoints, Seed{static_cast<std::uint64_t>(checked)});
                } else {
                    in_scope = false;
                }
            },
            any);
        if (!in_scope) continue;
        ++checked;
        const double dist = oracle::multiset_distance(expected, found);
        worst_match = std::max(worst_match, dist);
        if (!(dist <= kOracleMatchTol)) {
            ++match_fail;
            failures += " " + name;
        }
        bool ok = ver.records.size() == static_cast<std::size_t>(kIharaPoints);
        for (const auto& rec : ver.records) {
            worst_logabs = std::max(worst_logabs, rec.logabs_diff);
            worst_phase = std::max(worst_phase, rec.phase_diff);
            ok = ok && rec.logabs_diff <= kIharaTolerance * (1 + std::abs(rec.lhs_logabs)) &&
                 rec.phase_diff <= kIharaTolerance && rec.pass;
        }
        if (!ok) {
            ++ihara_fail;
            failures += " ihara:" + name;
        }
    }
    const double secs = seconds_since(t0);
    r.pass = match_fail == 0 && ihara_fail == 0 && checked > 0 && secs <= kCriterion2Seconds;
    r.summary = std::to_string(checked) + " instances with nd <= 24, " + std::to_string(match_fail) +
                " spectrum mismatches, " + std::to_string(ihara_fail) + " Ihara-Bass failures, " + fmt("%.2f", secs) +
                " s (limit 10 s)";
    r.details = {"max root distance " + fmt("%.2e", worst_match) + " (tolerance 1e-8); max log|det| diff " +
                 fmt("%.2e", worst_logabs) + ", max phase diff " + fmt("%.2e", worst_phase) + " at " +
                 std::to_string(kIharaPoints) + " points each"};
    if (!failures.empty()) r.details.push_back("failed:" + failures);
    return r;
}

// ---- criteria 3, 4, 5

template <typename Sample>
std::vector<double> ks_over_seeds(std::uint64_t base, Sample&& sample, Rescale rescale, bool exclude,
                                  const DensityModel& model) {
    std::vector<double> out;
    for (int s = 0; s < kSeeds; ++s) {
        const auto spectrum = sample(Seed{base + static_cast<std::uint64_t>(s)});
        out.push_back(ks_distance(project_real_parts(spectrum, rescale, exclude), model));
    }
    return out;
}

Result criterion3() {
    Result r{3, "Kesten-McKay projection", false, {}, {}};
    const auto t0 = Clock::now();
    const auto ks = ks_over_seeds(
        300, [](Seed s) { return full_lifted_spectrum(sample_regular_graph(2000, 5, s), LiftOptions{false}); },
        Rescale::None, true, KestenMcKay{5});
    const double secs = seconds_since(t0);
    const double med = median(ks);
    r.pass = med <= kKmThreshold && secs <= kCriterion3Seconds;
    r.summary = "median KS " + fmt("%.4f", med) + " (threshold 0.06), " + fmt("%.1f", secs) + " s (limit 60 s)";
    r.details = {"n=2000 d=5 trivial pair excluded, per seed: " + join(ks)};
    return r;
}

Result criterion4() {
    Result r{4, "semicircle projection", false, {}, {}};
    const auto ks = ks_over_seeds(
        400, [](Seed s) { return full_lifted_spectrum(sample_regular_graph(2000, 40, s), LiftOptions{false}); },
        Rescale::Graph, false, Semicircle{});
    const double med = median(ks);
    r.pass = med <= kScThreshold;
    r.summary = "median KS " + fmt("%.4f", med) + " (threshold 0.06)";
    r.details = {"n=2000 d=40 rescale 2x/sqrt(d-1), per seed: " + join(ks)};
    return r;
}

Result criterion5() {
    Result r{5, "hypergraph projection", false, {}, {}};
    const auto fixed = [](Seed s) {
        return full_lifted_spectrum(sample_regular_hypergraph(900, 3, 3, s), LiftOptions{false});
    };
    const auto alpha = [](Seed s) {
        return full_lifted_spectrum(sample_regular_hypergraph(1024, 8, 8, s), LiftOptions{false});
    };
    std::vector<LiftedSpectrum> fixed_spec, alpha_spec;
    for (int s = 0; s < kSeeds; ++s) {
        fixed_spec.push_back(fixed(Seed{500 + static_cast<std::uint64_t>(s)}));
        alpha_spec.push_back(alpha(Seed{550 + static_cast<std::uint64_t>(s)}));
    }
    const auto ks_all = [](const std::vector<LiftedSpectrum>& specs, Rescale rescale, const DensityModel& m) {
        std::vector<double> out;
        for (const auto& s : specs) out.push_back(ks_distance(project_real_parts(s, rescale, false), m));
        return out;
    };
    const auto ks_fixed = ks_all(fixed_spec, Rescale::Hypergraph, HyperFixed{3, 3});
    const auto ks_alpha = ks_all(alpha_spec, Rescale::Hypergraph, HyperAlpha{1.0});
    const auto limit = alpha_limit_check(kAlphaLimit, kAlphaLimitTol);
    const bool a = median(ks_fixed) <= kHyperFixedThreshold;
    const bool b = median(ks_alpha) <= kHyperAlphaThreshold;
    r.pass = a && b && limit.pass;
    r.summary = std::string("fixed (d,k) ") + (a ? "pass" : "fail") + ", alpha spot check " + (b ? "pass" : "fail") +
                ", alpha limit " + (limit.pass ? "pass" : "fail");
    r.details = {
        "(900,3,3) rescale (2x-(k-2))/sqrt((d-1)(k-1)): median KS " + fmt("%.4f", median(ks_fixed)) +
            " (threshold 0.08), per seed " + join(ks_fixed),
        "(1024,8,8) alpha=1, same rescale: median KS " + fmt("%.4f", median(ks_alpha)) + " (threshold 0.10), per seed " +
            join(ks_alpha),
        "alpha=1e4 pointwise density deviation from semicircle " + fmt("%.3e", limit.max_pdf_deviation) +
            " (tolerance 1e-3); cdf deviation " + fmt("%.3e", limit.max_cdf_deviation),
    };
    // informational: the same spectra under 2x/sqrt((d-1)(k-1)), which maps bulk
    // lifts onto the spectrum of (A - (k-2)) / sqrt((d-1)(k-1))
    const auto c_fixed = ks_all(fixed_spec, Rescale::HypergraphCentered, HyperFixed{3, 3});
    const auto c_alpha = ks_all(alpha_spec, Rescale::HypergraphCentered, HyperAlpha{1.0});
    r.details.push_back("info: rescale 2x/sqrt((d-1)(k-1)) gives median KS " + fmt("%.4f", median(c_fixed)) +
                        " for (900,3,3) and " + fmt("%.4f", median(c_alpha)) + " for (1024,8,8)");
    for (double a2 : {1e5, 1e6}) {
        const auto l = alpha_limit_check(a2, kAlphaLimitTol);
        r.details.push_back("info: alpha=" + fmt("%.0e", a2) + " pointwise deviation " + fmt("%.3e", l.max_pdf_deviation));
    }
    return r;
}

// ---- criterion 7

Result criterion7() {
    Result r{7, "RSBM insider and recovery", false, {}, {}};
    const auto t0 = Clock::now();
    const auto insider = rsbm_mu2(12, 4);
    int structure_fail = 0, lift_fail = 0, exact = 0, instances = 0;
    double worst_special = 0.0;
    std::string errors;

    const auto nearest = [](const std::vector<Complex>& values, Complex target) {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& v : values) best = std::min(best, std::abs(v - target));
        return best;
    };
    for (int s = 0; s < kRecoveryTrials; ++s) {
        const auto g = sample_rsbm(400, 12, 4, Seed{static_cast<std::uint64_t>(s)});
        ++instances;
        try {
            deterministic_sigma_eigenpair(g);
        } catch (const StructureError&) {
            ++structure_fail;
        }
        const auto values = full_lifted_spectrum(g.graph, LiftOptions{false}).eigenvalues();
        const double dist = std::max(nearest(values, insider.mu2), nearest(values, insider.mu2_prime));
        worst_special = std::max(worst_special, dist);
        if (dist > kInsiderMatchTol) ++lift_fail;
        try {
            exact += recover_communities(g).exact;
        } catch (const Error& e) {
            errors += std::string(" seed ") + std::to_string(s) + ": " + e.what() + ";";
        }
    }

    std::vector<double> deviations;
    int simple = 0;
    for (int s = 0; s < kInsiderSeeds; ++s) {
        const auto g = sample_rsbm(2000, 12, 4, Seed{static_cast<std::uint64_t>(100 + s)});
        ++instances;
        try {
            deterministic_sigma_eigenpair(g);
        } catch (const StructureError&) {
            ++structure_fail;
        }
        try {
            const auto rep = insider_gap_report(g);
            ++simple;
            deviations.push_back(rep.max_deviation);
            for (std::size_t i = 2; i < rep.special.size(); ++i) {
                worst_special = std::max(worst_special, rep.special[i].distance);
                if (rep.special[i].distance > kInsiderMatchTol) ++lift_fail;
            }
        } catch (const MultiplicityError& e) {
            errors += std::string(" insider seed ") + std::to_string(100 + s) + ": " + e.what() + ";";
        }
    }
    const double secs = seconds_since(t0);
    const double worst_dev = deviations.empty() ? INFINITY : *std::max_element(deviations.begin(), deviations.end());
    const bool a = structure_fail == 0 && lift_fail == 0;
    const bool b = exact == kRecoveryTrials;
    const bool c = simple == kInsiderSeeds && worst_dev <= kInsiderDeviation;
    r.pass = a && b && c && secs <= kCriterion7Seconds;
    r.summary = std::string("(a) ") + (a ? "pass" : "fail") + ", (b) exact " + std::to_string(exact) + "/" +
                std::to_string(kRecoveryTrials) + ", (c) " + (c ? "pass" : "fail") + ", " + fmt("%.1f", secs) +
                " s (limit 120 s)";
    r.details = {
        "A sigma = (d1-d2) sigma failures " + std::to_string(structure_fail) + "/" + std::to_string(instances) +
            "; mu2, mu2' = " + fmt("%.0f", insider.mu2.real()) + ", " + fmt("%.0f", insider.mu2_prime.real()) +
            " located within " + fmt("%.2e", worst_special) + " (tolerance 1e-9)",
        "n=2000: special eigenvalues simple on " + std::to_string(simple) + "/" + std::to_string(kInsiderSeeds) +
            " seeds, max circle deviation per seed " + join(deviations) + " (threshold 0.15)",
    };
    if (!errors.empty()) r.details.push_back("errors:" + errors);
    return r;
}

// ---- criterion 8

struct CliRun {
    std::map<std::string, std::string> files;
    std::vector<int> codes;
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

CliRun run_pipeline(const std::string& cli, const fs::path& dir, int workers) {
    fs::remove_all(dir);
    fs::create_directories(dir);
    const std::vector<std::string> commands = {
        "gen --model regular --n 2000 --d 5 --seed 7 --out g.json",
        "spectrum --in g.json --out s.json --values-only",
        "project --in s.json --rescale none --exclude-trivial --out hist.csv --samples-out samples.txt",
        "ks --in s.json --law km --exclude-trivial --out ks_km.json",
        "gen --model regular --n 200 --d 3 --seed 3 --out g200.json",
        "spectrum --in g200.json --out s200.json",
        "deloc --in g200.json --out deloc.json",
        "verify --in g200.json --trials 8 --seed 5 --out verify.json",
        "matrix --in g200.json --which nb --out nb.txt",
        "gen --model hypergraph --n 900 --d 3 --k 3 --seed 2 --out h.json",
        "ks --in h.json --law hyperfixed --rescale hypergraph-centered --out ks_h.json",
        "gen --model rsbm --n 400 --d1 12 --d2 4 --seed 1 --out r.json",
        "rsbm-recover --n 400 --d1 12 --d2 4 --seed 1 --trials 4 --insider --workers " + std::to_string(workers) +
            " --out recover.json",
    };
    CliRun run;
    for (std::size_t i = 0; i < commands.size(); ++i) {
        const std::string out = "stdout_" + std::to_string(i) + ".txt";
        const std::string line = "cd '" + dir.string() + "' && '" + cli + "' " + commands[i] + " > " + out + " 2>/dev/null";
        const int status = std::system(line.c_str());
        run.codes.push_back(WIFEXITED(status) ? WEXITSTATUS(status) : -1);
    }
    for (const auto& entry : fs::directory_iterator(dir)) {
        run.files[entry.path().filename().string()] = slurp(entry.path());
    }
    return run;
}

Result criterion8(const std::string& cli, const fs::path& work) {
    Result r{8, "reproducibility", false, {}, {}};
    if (cli.empty() || !fs::exists(cli)) {
        r.summary = "CLI binary not found";
        return r;
    }
    const auto a = run_pipeline(cli, work / "run1", 1);
    const auto b = run_pipeline(cli, work / "run2", 1);
    const auto c = run_pipeline(cli, work / "run3", 3);
    int differing = 0;
    std::string names;
    for (const auto* other : {&b, &c}) {
        std::set<std::string> keys;
        for (const auto& [k, v] : a.files) keys.insert(k);
        for (const auto& [k, v] : other->files) keys.insert(k);
        for (const auto& k : keys) {
            const auto x = a.files.find(k), y = other->files.find(k);
            if (x == a.files.end() || y == other->files.end() || x->second != y->second) {
                ++differing;
                names += " " + k;
            }
        }
    }
    bool crashed = false;
    for (const int code : a.codes) crashed = crashed || code < 0 || code > 1;
    std::size_t bytes = 0;
    for (const auto& [k, v] : a.files) bytes += v.size();
    r.pass = differing == 0 && a.codes == b.codes && a.codes == c.codes && !crashed;
    r.summary = std::to_string(a.files.size()) + " output files (" + std::to_string(bytes) + " bytes) from " +
                std::to_string(a.codes.size()) + " commands, " + std::to_string(differing) +
                " differences across 3 runs";
    std::string codes;
    for (const int code : a.codes) codes += std::to_string(code);
    r.details = {"exit codes " + codes + "; third run uses 3 worker threads for rsbm-recover"};
    if (!names.empty()) r.details.push_back("differing:" + names);
    fs::remove_all(work);
    return r;
}

}  // namespace

int main(int argc, char** argv) {
    std::set<int> selected = {1, 2, 3, 4, 5, 6, 7, 8};
    std::string cli;
#ifdef NBSPEC_CLI_PATH
    cli = NBSPEC_CLI_PATH;
#endif
    fs::path work = fs::temp_directory_path() / ("nbspec_acceptance_" + std::to_string(::getpid()));
    for (int i = 1; i + 1 < argc; i += 2) {
        const std::string flag = argv[i];
        if (flag == "--criteria") {
            selected.clear();
            std::stringstream ss(argv[i + 1]);
            for (std::string item; std::getline(ss, item, ',');) selected.insert(std::stoi(item));
        } else if (flag == "--cli") {
            cli = argv[i + 1];
        } else if (flag == "--work") {
            work = argv[i + 1];
        } else {
            std::fprintf(stderr, "unknown flag %s\n", flag.c_str());
            return 2;
        }
    }

    std::vector<Result> results;
    const auto run = [&](int id, const std::function<Result()>& fn) {
        if (!selected.count(id)) return;
        try {
            results.push_back(fn());
        } catch (const std::exception& e) {
            results.push_back({id, "error", false, e.what(), {}});
        }
        print(results.back());
    };

    std::optional<SweepTotals> sweep;
    const auto get_sweep = [&]() -> const SweepTotals& {
        if (!sweep) sweep = run_sweep(default_workers());
        return *sweep;
    };
    run(1, [&] { return criterion1(get_sweep()); });
    run(2, criterion2);
    run(3, criterion3);
    run(4, criterion4);
    run(5, criterion5);
    run(6, [&] { return criterion6(get_sweep()); });
    run(7, criterion7);
    run(8, [&] { return criterion8(cli, work); });

    const auto passed = std::count_if(results.begin(), results.end(), [](const Result& r) { return r.pass; });
    std::printf("acceptance: %zd/%zu criteria pass\n", static_cast<std::ptrdiff_t>(passed), results.size());
    return passed == static_cast<std::ptrdiff_t>(results.size()) ? 0 : 1;
}
