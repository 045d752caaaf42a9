#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

#include "nbspec/graphgen.hpp"
#include "nbspec/measures.hpp"
#include "nbspec/operators.hpp"
#include "nbspec/rsbm.hpp"
#include "nbspec/spectral.hpp"
#include "nbspec/verify.hpp"

namespace nbspec {

using Json = nlohmann::ordered_json;
using AnyGraph = std::variant<RegularGraph, RegularHypergraph, RsbmGraph>;

inline constexpr int kFormatVersion = 1;

// Graph files are a single JSON object:
//   {"format": 1, "model": "regular" | "hypergraph" | "rsbm", "n", "d",
//    "k" (hypergraph), "d1", "d2", "sigma" (rsbm), "edges" | "hyperedges"}
Json graph_to_json(const AnyGraph& g);
// ParseError on malformed or mistyped fields, InvariantError when the object
// fails its audit.
AnyGraph graph_from_json(const Json& j);
AnyGraph parse_graph(std::string_view text);

// ParseError with the line and column of the first syntax error.
Json read_json(const std::filesystem::path& path);
AnyGraph read_graph(const std::filesystem::path& path);
void write_graph(const std::filesystem::path& path, const AnyGraph& g);

// "a+bi", "a-bi", "a", "bi", "i", "-i"; signs optional, exponents allowed.
std::optional<Complex> parse_complex(std::string_view text);
std::string format_complex(Complex z);

std::string model_of(const AnyGraph& g);
// Parameters shared by every report: model, n, d (and k, d1, d2).
Json model_params(const AnyGraph& g);

// Text written to `path` verbatim, or to stdout for "-".
void write_text(const std::filesystem::path& path, const std::string& text);
std::string dump(const Json& j);

Json spectrum_to_json(const AnyGraph& g, const LiftedSpectrum& s);
void write_spectrum(const std::filesystem::path& path, const AnyGraph& g, const LiftedSpectrum& s);
// Reads back the pairs (lambda, mu, mu') of a spectrum file; vectors are
// not stored.
LiftedSpectrum read_spectrum(const std::filesystem::path& path);
LiftedSpectrum spectrum_from_json(const Json& j);

std::string histogram_csv(const std::vector<HistogramBin>& bins);
void write_histogram(const std::filesystem::path& path, const std::vector<HistogramBin>& bins);

Json ks_report(const DensityModel& model, const EmpiricalMeasure& m, double ks, double threshold);
Json deloc_report(const AnyGraph& g, const DelocReport& r);
Json verify_report(const AnyGraph& g, const VerifyReport& r);

struct RecoveryTrial {
    std::uint64_t seed = 0;
    InsiderPair insider;
    RecoveryResult recovery;
    std::optional<double> insider_max_deviation;
    std::string error;  // set when the trial could not be evaluated
};

Json recovery_report(int n, int d1, int d2, const RecoveryTrial& t);
void write_report(const std::filesystem::path& path, const Json& report);

// "row col value" lines in row-major order after a one-line JSON header.
std::string matrix_dump(const SparseMatrix& m, const Json& header);

struct ExperimentConfig {
    std::string model = "rsbm";
    int n = 0;
    int d = 0;
    int k = 2;
    int d1 = 0;
    int d2 = 0;
    int trials = 1;
    std::uint64_t seed = 0;
    std::map<std::string, std::string> outputs;
    std::map<std::string, double> tolerances;
};

// ParseError on malformed input, InvariantError if trials < 1 or a
// tolerance is not positive.
ExperimentConfig config_from_json(const Json& j);
ExperimentConfig read_config(const std::filesystem::path& path);
Json config_to_json(const ExperimentConfig& c);

}  // namespace nbspec
