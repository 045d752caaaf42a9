#pragma once

#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "nbspec/spectral.hpp"

namespace nbspec {

// Samples sorted ascending, each with weight 1/size.
struct EmpiricalMeasure {
    std::vector<double> samples;
    int excluded_trivial = 0;

    std::size_t size() const { return samples.size(); }
};

enum class Rescale {
    None,                // Re(mu)
    Graph,               // 2x / sqrt(d-1)
    Hypergraph,          // (2x - (k-2)) / sqrt((d-1)(k-1))
    HypergraphCentered,  // 2x / sqrt((d-1)(k-1)); the spectrum of (A - (k-2)) / sqrt(q)
};

std::optional<Rescale> parse_rescale(const std::string& name);
std::string to_string(Rescale r);

// Real parts of both lifted roots of every pair, rescaled. With
// `exclude_trivial` the pair lifted from the first eigenvalue equal to
// d(k-1) (within 1e-9) is dropped.
EmpiricalMeasure project_real_parts(const LiftedSpectrum& spectrum, Rescale rescale,
                                    bool exclude_trivial);
EmpiricalMeasure project_real_parts(const std::vector<LiftedPair>& pairs, const LiftParams& params,
                                    Rescale rescale, bool exclude_trivial);

struct KestenMcKay {
    int d = 3;
};
struct Semicircle {};
struct HyperFixed {
    int d = 2;
    int k = 2;
};
struct HyperAlpha {
    double alpha = 1.0;
};

using DensityModel = std::variant<KestenMcKay, Semicircle, HyperFixed, HyperAlpha>;

std::string model_name(const DensityModel& model);
// Throws DomainError for parameters where the closed form is meaningless.
void validate(const DensityModel& model);
// Set when the parameters are valid but outside the regime the law is known
// to describe (HyperAlpha with alpha < 1), or when the density misses an atom
// (HyperFixed with d < k).
std::optional<std::string> hypothesis_warning(const DensityModel& model);

std::pair<double, double> support(const DensityModel& model);
double density_pdf(const DensityModel& model, double x);

inline constexpr double kCdfTolerance = 1e-8;
// Throws IntegrationError if adaptive Simpson cannot reach kCdfTolerance.
double density_cdf(const DensityModel& model, double x);

// sup |F_emp - F_model| over the sample points, evaluated from both sides of
// each jump.
double ks_distance(const EmpiricalMeasure& m, const DensityModel& model);

struct ConsistencyReport {
    std::string name;
    std::size_t grid_points = 0;
    double max_deviation = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

// HyperFixed(d, 2) against KestenMcKay(d) pushed through x -> 2x/sqrt(d-1),
// on 401 points of [-2, 2].
ConsistencyReport consistency_check_k2(int d);

struct AlphaLimitReport {
    double alpha = 0.0;
    std::size_t grid_points = 0;
    double max_pdf_deviation = 0.0;  // pointwise, against the semicircle
    double max_cdf_deviation = 0.0;
    double tolerance = 0.0;
    bool pass = false;  // max_pdf_deviation <= tolerance
};

AlphaLimitReport alpha_limit_check(double alpha = 1e4, double tolerance = 1e-3);

struct HistogramBin {
    double left = 0.0;
    double right = 0.0;
    std::size_t count = 0;
    double density = 0.0;  // count / (total * width)
};

// Freedman-Diaconis width unless `bins` is given.
std::vector<HistogramBin> histogram(const EmpiricalMeasure& m, std::optional<int> bins = std::nullopt);

}  // namespace nbspec
