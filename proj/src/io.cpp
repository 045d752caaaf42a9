#include "nbspec/io.hpp"

#include <cctype>
#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "nbspec/errors.hpp"

namespace nbspec {
namespace {

const Json& member(const Json& j, const char* key) {
    if (!j.is_object()) throw ParseError("expected a JSON object");
    const auto it = j.find(key);
    if (it == j.end()) throw ParseError(std::string("missing field '") + key + "'");
    return *it;
}

int int_field(const Json& j, const char* key) {
    const Json& v = member(j, key);
    if (!v.is_number_integer()) throw ParseError(std::string("field '") + key + "': expected an integer");
    return v.get<int>();
}

double number_field(const Json& j, const char* key) {
    const Json& v = member(j, key);
    if (v.is_null()) return std::numeric_limits<double>::quiet_NaN();
    if (!v.is_number()) throw ParseError(std::string("field '") + key + "': expected a number");
    return v.get<double>();
}

std::vector<int> int_list(const Json& v, const std::string& what) {
    if (!v.is_array()) throw ParseError(what + ": expected an array");
    std::vector<int> out;
    out.reserve(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!v[i].is_number_integer()) {
            throw ParseError(what + "[" + std::to_string(i) + "]: expected an integer");
        }
        out.push_back(v[i].get<int>());
    }
    return out;
}

std::vector<Edge> edge_list(const Json& j) {
    const Json& list = member(j, "edges");
    if (!list.is_array()) throw ParseError("field 'edges': expected an array");
    std::vector<Edge> edges;
    edges.reserve(list.size());
    for (std::size_t i = 0; i < list.size(); ++i) {
        const auto pair = int_list(list[i], "edges[" + std::to_string(i) + "]");
        if (pair.size() != 2) throw ParseError("edges[" + std::to_string(i) + "]: expected two vertices");
        edges.emplace_back(pair[0], pair[1]);
    }
    return edges;
}

Json edges_json(const std::vector<Edge>& edges) {
    Json out = Json::array();
    for (const auto& [u, v] : edges) out.push_back({u, v});
    return out;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Json parse_json(std::string_view text, const std::string& where) {
    try {
        return Json::parse(text.begin(), text.end());
    } catch (const Json::parse_error& e) {
        throw ParseError(where + ": " + e.what());
    }
}

Json complex_json(Complex z) { return Json::array({z.real(), z.imag()}); }

// JSON has no NaN; missing measurements become null.
Json maybe(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

std::optional<double> parse_real(std::string_view text) {
    if (text.empty()) return std::nullopt;
    std::string owned(text);
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(owned.c_str(), &end);
    if (errno != 0 || end != owned.c_str() + owned.size() || !std::isfinite(v)) return std::nullopt;
    return v;
}

}  // namespace

std::optional<Complex> parse_complex(std::string_view text) {
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
    if (text.empty()) return std::nullopt;
    if (text.back() != 'i') {
        const auto re = parse_real(text);
        if (!re) return std::nullopt;
        return Complex(*re, 0.0);
    }
    text.remove_suffix(1);
    // Split before the last sign that is neither leading nor part of an exponent.
    std::size_t split = 0;
    for (std::size_t i = text.size(); i-- > 1;) {
        if ((text[i] == '+' || text[i] == '-') && text[i - 1] != 'e' && text[i - 1] != 'E') {
            split = i;
            break;
        }
    }
    const std::string_view re_part = text.substr(0, split);
    std::string im_part(text.substr(split));
    if (im_part.empty() || im_part == "+" || im_part == "-") im_part += "1";
    const auto im = parse_real(im_part);
    if (!im) return std::nullopt;
    if (split == 0) return Complex(0.0, *im);
    const auto re = parse_real(re_part);
    if (!re) return std::nullopt;
    return Complex(*re, *im);
}

std::string format_complex(Complex z) {
    char buf[80];
    std::snprintf(buf, sizeof buf, "%.17g%+.17gi", z.real(), z.imag());
    return buf;
}

std::string model_of(const AnyGraph& g) {
    static constexpr const char* names[] = {"regular", "hypergraph", "rsbm"};
    return names[g.index()];
}

Json model_params(const AnyGraph& g) {
    Json j;
    j["model"] = model_of(g);
    std::visit(
        [&](const auto& x) {
            using T = std::decay_t<decltype(x)>;
            j["n"] = x.n;
            if constexpr (std::is_same_v<T, RegularGraph>) {
                j["d"] = x.d;
            } else if constexpr (std::is_same_v<T, RegularHypergraph>) {
                j["d"] = x.d;
                j["k"] = x.k;
            } else {
                j["d"] = x.d1 + x.d2;
                j["d1"] = x.d1;
                j["d2"] = x.d2;
            }
        },
        g);
    return j;
}

Json graph_to_json(const AnyGraph& g) {
    Json j;
    j["format"] = kFormatVersion;
    j.update(model_params(g));
    if (const auto* r = std::get_if<RegularGraph>(&g)) {
        j["edges"] = edges_json(r->edges);
    } else if (const auto* h = std::get_if<RegularHypergraph>(&g)) {
        j["hyperedges"] = h->hyperedges;
    } else {
        const auto& s = std::get<RsbmGraph>(g);
        j["sigma"] = s.sigma;
        j["edges"] = edges_json(s.graph.edges);
    }
    return j;
}

AnyGraph graph_from_json(const Json& j) {
    const int format = int_field(j, "format");
    if (format != kFormatVersion) throw ParseError("unsupported format " + std::to_string(format));
    const Json& model_value = member(j, "model");
    if (!model_value.is_string()) throw ParseError("field 'model': expected a string");
    const auto model = model_value.get<std::string>();
    const int n = int_field(j, "n");
    if (model == "regular") {
        return make_regular_graph(n, int_field(j, "d"), edge_list(j));
    }
    if (model == "hypergraph") {
        const Json& list = member(j, "hyperedges");
        if (!list.is_array()) throw ParseError("field 'hyperedges': expected an array");
        std::vector<std::vector<int>> edges;
        edges.reserve(list.size());
        for (std::size_t i = 0; i < list.size(); ++i) {
            edges.push_back(int_list(list[i], "hyperedges[" + std::to_string(i) + "]"));
        }
        return make_regular_hypergraph(n, int_field(j, "d"), int_field(j, "k"), std::move(edges));
    }
    if (model == "rsbm") {
        RsbmGraph g;
        g.n = n;
        g.d1 = int_field(j, "d1");
        g.d2 = int_field(j, "d2");
        g.sigma = int_list(member(j, "sigma"), "sigma");
        if (j.contains("d") && int_field(j, "d") != g.d1 + g.d2) {
            throw InvariantError("d must equal d1 + d2");
        }
        g.graph = make_regular_graph(n, g.d1 + g.d2, edge_list(j));
        audit(g);
        return g;
    }
    throw ParseError("field 'model': unknown model '" + model + "'");
}

AnyGraph parse_graph(std::string_view text) { return graph_from_json(parse_json(text, "graph")); }

Json read_json(const std::filesystem::path& path) { return parse_json(read_file(path), path.string()); }

AnyGraph read_graph(const std::filesystem::path& path) {
    return graph_from_json(parse_json(read_file(path), path.string()));
}

std::string dump(const Json& j) { return j.dump() + "\n"; }

void write_text(const std::filesystem::path& path, const std::string& text) {
    if (path == "-") {
        std::cout << text << std::flush;
        return;
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + path.string());
    out << text;
    if (!out) throw Error("write failed for " + path.string());
}

void write_graph(const std::filesystem::path& path, const AnyGraph& g) {
    write_text(path, dump(graph_to_json(g)));
}

Json spectrum_to_json(const AnyGraph& g, const LiftedSpectrum& s) {
    Json j;
    j["format"] = kFormatVersion;
    j.update(model_params(g));
    j["has_vectors"] = s.has_vectors;
    Json pairs = Json::array();
    for (const auto& p : s.pairs) {
        Json e;
        e["lambda"] = p.lambda;
        e["mu_re"] = p.mu.real();
        e["mu_im"] = p.mu.imag();
        e["muP_re"] = p.mu_prime.real();
        e["muP_im"] = p.mu_prime.imag();
        e["double_root"] = p.double_root;
        if (s.has_vectors) {
            const auto& v = s.eigs[p.source].v;
            e["residuals"] = {{"v", maybe(s.eigs[p.source].residual)},
                              {"u", maybe(p.u_residual)},
                              {"u_prime", maybe(p.u_prime_residual)}};
            e["ratios"] = {{"v", inf_over_two(v)},
                           {"u", inf_over_two(lift_eigenvector_reduced(v, p.mu, s.params.d))},
                           {"u_prime", inf_over_two(lift_eigenvector_reduced(v, p.mu_prime, s.params.d))}};
        }
        pairs.push_back(std::move(e));
    }
    j["pairs"] = std::move(pairs);
    return j;
}

void write_spectrum(const std::filesystem::path& path, const AnyGraph& g, const LiftedSpectrum& s) {
    write_text(path, dump(spectrum_to_json(g, s)));
}

LiftedSpectrum spectrum_from_json(const Json& j) {
    LiftedSpectrum s;
    s.n = int_field(j, "n");
    s.params.d = int_field(j, "d");
    s.params.k = j.contains("k") ? int_field(j, "k") : 2;
    s.has_vectors = false;
    const Json& pairs = member(j, "pairs");
    if (!pairs.is_array()) throw ParseError("field 'pairs': expected an array");
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        const Json& e = pairs[i];
        try {
            LiftedPair p;
            p.lambda = number_field(e, "lambda");
            p.mu = {number_field(e, "mu_re"), number_field(e, "mu_im")};
            p.mu_prime = {number_field(e, "muP_re"), number_field(e, "muP_im")};
            p.double_root = e.value("double_root", false);
            p.source = i;
            p.u_residual = p.u_prime_residual = std::numeric_limits<double>::quiet_NaN();
            s.eigs.push_back({p.lambda, {}, 0.0});
            s.pairs.push_back(p);
        } catch (const ParseError& err) {
            throw ParseError("pairs[" + std::to_string(i) + "]: " + err.what());
        }
    }
    return s;
}

LiftedSpectrum read_spectrum(const std::filesystem::path& path) {
    return spectrum_from_json(parse_json(read_file(path), path.string()));
}

std::string histogram_csv(const std::vector<HistogramBin>& bins) {
    std::string out = "bin_left,bin_right,count,density\n";
    char line[128];
    for (const auto& b : bins) {
        std::snprintf(line, sizeof line, "%.17g,%.17g,%zu,%.17g\n", b.left, b.right, b.count, b.density);
        out += line;
    }
    return out;
}

void write_histogram(const std::filesystem::path& path, const std::vector<HistogramBin>& bins) {
    write_text(path, histogram_csv(bins));
}

Json ks_report(const DensityModel& model, const EmpiricalMeasure& m, double ks, double threshold) {
    Json params = Json::object();
    std::visit(
        [&](const auto& x) {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, KestenMcKay>) params["d"] = x.d;
            if constexpr (std::is_same_v<T, HyperFixed>) {
                params["d"] = x.d;
                params["k"] = x.k;
            }
            if constexpr (std::is_same_v<T, HyperAlpha>) params["alpha"] = x.alpha;
        },
        model);
    Json j;
    j["model"] = model_name(model);
    j["n_samples"] = m.size();
    j["ks"] = ks;
    j["params"] = std::move(params);
    j["excluded_trivial"] = m.excluded_trivial;
    j["threshold"] = threshold;
    j["pass"] = ks <= threshold;
    if (const auto warning = hypothesis_warning(model)) j["warning"] = *warning;
    return j;
}

Json deloc_report(const AnyGraph& g, const DelocReport& r) {
    Json j = model_params(g);
    j["ok"] = r.ok();
    j["violations"] = {{"vieta", r.vieta_violations},       {"circle", r.circle_violations},
                       {"u_ratio", r.u_violations},         {"norm", r.norm_violations},
                       {"bound", r.bound_violations},       {"residual", r.residual_violations},
                       {"pairing", r.pairing_violations}};
    j["max_u_residual"] = r.max_u_residual;
    j["max_w_residual"] = r.max_w_residual;
    j["pairing_checked"] = r.pairing_checked;
    j["max_pairing_error"] = r.max_pairing_error;
    j["top_ratio_w"] = r.top_ratio_w ? Json(*r.top_ratio_w) : Json(nullptr);
    j["top_ratio_expected"] = r.top_ratio_expected;
    j["top_ok"] = r.top_ok;
    Json records = Json::array();
    for (const auto& rec : r.records) {
        Json e;
        e["pair"] = rec.pair;
        e["prime"] = rec.prime;
        e["lambda"] = rec.lambda;
        e["mu"] = complex_json(rec.mu);
        e["ratio_v"] = rec.ratio_v;
        e["ratio_u"] = rec.ratio_u;
        e["ratio_w"] = rec.ratio_w ? Json(*rec.ratio_w) : Json(nullptr);
        e["bound"] = rec.bound ? Json(*rec.bound) : Json(nullptr);
        e["bound_ok"] = rec.bound_ok;
        e["ok"] = rec.ok();
        records.push_back(std::move(e));
    }
    j["records"] = std::move(records);
    return j;
}

Json verify_report(const AnyGraph& g, const VerifyReport& r) {
    Json j = model_params(g);
    j["ok"] = r.ok();
    Json records = Json::array();
    for (const auto& rec : r.records) {
        Json e;
        e["z"] = complex_json(rec.z);
        e["lhs_logabs"] = rec.lhs_logabs;
        e["rhs_logabs"] = rec.rhs_logabs;
        e["logabs_diff"] = rec.logabs_diff;
        e["phase_diff"] = rec.phase_diff;
        e["pencil_logabs_diff"] = rec.pencil_logabs_diff;
        e["pencil_phase_diff"] = rec.pencil_phase_diff;
        e["pass"] = rec.pass;
        records.push_back(std::move(e));
    }
    j["records"] = std::move(records);
    return j;
}

Json recovery_report(int n, int d1, int d2, const RecoveryTrial& t) {
    Json j;
    j["n"] = n;
    j["d1"] = d1;
    j["d2"] = d2;
    j["seed"] = t.seed;
    j["mu2"] = complex_json(t.insider.mu2);
    j["mu2_prime"] = complex_json(t.insider.mu2_prime);
    j["agreement"] = t.recovery.agreement;
    j["exact"] = t.recovery.exact;
    j["insider_max_deviation"] = t.insider_max_deviation ? Json(*t.insider_max_deviation) : Json(nullptr);
    j["zero_entries"] = t.recovery.zero_entries;
    j["lift_consistent"] = t.recovery.lift_consistent;
    if (!t.error.empty()) j["error"] = t.error;
    return j;
}

void write_report(const std::filesystem::path& path, const Json& report) { write_text(path, dump(report)); }

std::string matrix_dump(const SparseMatrix& m, const Json& header) {
    Json h = header;
    h["rows"] = m.rows();
    h["cols"] = m.cols();
    h["nnz"] = m.nnz();
    std::string out = h.dump() + "\n";
    char line[96];
    for (const auto& t : m.triplets()) {
        std::snprintf(line, sizeof line, "%zu %zu %.17g\n", t.row, t.col, t.value);
        out += line;
    }
    return out;
}

ExperimentConfig config_from_json(const Json& j) {
    ExperimentConfig c;
    if (!j.is_object()) throw ParseError("config: expected a JSON object");
    if (j.contains("model")) {
        if (!j["model"].is_string()) throw ParseError("field 'model': expected a string");
        c.model = j["model"].get<std::string>();
    }
    const auto opt_int = [&](const char* key, int& slot) {
        if (j.contains(key)) slot = int_field(j, key);
    };
    opt_int("n", c.n);
    opt_int("d", c.d);
    opt_int("k", c.k);
    opt_int("d1", c.d1);
    opt_int("d2", c.d2);
    opt_int("trials", c.trials);
    if (j.contains("seed")) {
        if (!j["seed"].is_number_unsigned()) throw ParseError("field 'seed': expected an unsigned integer");
        c.seed = j["seed"].get<std::uint64_t>();
    }
    if (j.contains("outputs")) {
        const Json& o = j["outputs"];
        if (!o.is_object()) throw ParseError("field 'outputs': expected an object");
        for (const auto& [key, value] : o.items()) {
            if (!value.is_string()) throw ParseError("outputs." + key + ": expected a string");
            c.outputs[key] = value.get<std::string>();
        }
    }
    if (j.contains("tolerances")) {
        const Json& t = j["tolerances"];
        if (!t.is_object()) throw ParseError("field 'tolerances': expected an object");
        for (const auto& [key, value] : t.items()) {
            if (!value.is_number()) throw ParseError("tolerances." + key + ": expected a number");
            c.tolerances[key] = value.get<double>();
        }
    }
    if (c.trials < 1) throw InvariantError("trials must be at least 1");
    for (const auto& [key, value] : c.tolerances) {
        if (!(value > 0.0)) throw InvariantError("tolerance '" + key + "' must be positive");
    }
    return c;
}

ExperimentConfig read_config(const std::filesystem::path& path) {
    return config_from_json(parse_json(read_file(path), path.string()));
}

Json config_to_json(const ExperimentConfig& c) {
    Json j;
    j["model"] = c.model;
    j["n"] = c.n;
    j["d"] = c.d;
    j["k"] = c.k;
    j["d1"] = c.d1;
    j["d2"] = c.d2;
    j["trials"] = c.trials;
    j["seed"] = c.seed;
    j["outputs"] = Json(c.outputs);
    j["tolerances"] = Json(c.tolerances);
    return j;
}

}  // namespace nbspec
