#include "nbspec/measures.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

#include "nbspec/errors.hpp"

namespace nbspec {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kMaxDepth = 50;
constexpr int kMinDepth = 4;

// u / ((1-s)^2 + 4 s u), continuous at u = 0 when s = 1.
double ratio(double u, double s) {
    const double gap = (1.0 - s) * (1.0 - s);
    if (u == 0.0) return gap == 0.0 ? 1.0 / (4.0 * s) : 0.0;
    return u / (gap + 4.0 * s * u);
}

struct Simpson {
    const std::function<double(double)>& f;

    double recurse(double a, double b, double eps, double whole, double fa, double fm, double fb,
                   int depth) const {
        const double m = 0.5 * (a + b);
        const double lm = 0.5 * (a + m);
        const double rm = 0.5 * (m + b);
        const double flm = f(lm);
        const double frm = f(rm);
        const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        const double delta = left + right - whole;
        if (depth >= kMinDepth && std::abs(delta) <= 15.0 * eps) return left + right + delta / 15.0;
        if (depth >= kMaxDepth) throw IntegrationError("adaptive Simpson exceeded its depth limit");
        return recurse(a, m, eps / 2.0, left, fa, flm, fm, depth + 1) +
               recurse(m, b, eps / 2.0, right, fm, frm, fb, depth + 1);
    }

    double operator()(double a, double b, double eps) const {
        if (b <= a) return 0.0;
        const double fa = f(a);
        const double fb = f(b);
        const double fm = f(0.5 * (a + b));
        const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
        return recurse(a, b, eps, whole, fa, fm, fb, 0);
    }
};

double km_radius(int d) { return std::sqrt(d - 1.0); }

// Density in the angle variable x = mid - half * cos(theta), theta in [0, pi].
// Every integrand here is smooth, including the d = k and alpha = 1 cases
// whose x-density has an inverse square root at -2.
std::function<double(double)> angle_density(const DensityModel& model) {
    struct Visitor {
        std::function<double(double)> operator()(const KestenMcKay& m) const {
            const double d = m.d;
            return [d](double t) {
                const double s = std::sin(t);
                const double c = std::cos(t);
                return 2.0 * d * (d - 1.0) * s * s / (kPi * (d * d - 4.0 * (d - 1.0) * c * c));
            };
        }
        std::function<double(double)> operator()(const Semicircle&) const {
            return [](double t) {
                const double s = std::sin(t);
                return 2.0 / kPi * s * s;
            };
        }
        std::function<double(double)> operator()(const HyperFixed& m) const {
            const double q = (m.k - 1.0) * (m.d - 1.0);
            const double scale = 1.0 + (m.k - 1.0) / q;
            const double t_factor = 1.0 / std::sqrt(q);
            const double s_factor = std::sqrt((m.k - 1.0) / (m.d - 1.0));
            return [=](double t) {
                const double sh = std::sin(0.5 * t);
                const double ch = std::cos(0.5 * t);
                return 8.0 * scale / kPi * ratio(ch * ch, t_factor) * ratio(sh * sh, s_factor);
            };
        }
        std::function<double(double)> operator()(const HyperAlpha& m) const {
            const double alpha = m.alpha;
            const double s_factor = std::sqrt(alpha);
            return [=](double t) {
                const double sh = std::sin(0.5 * t);
                const double ch = std::cos(0.5 * t);
                return 8.0 * alpha / kPi * ch * ch * ratio(sh * sh, s_factor);
            };
        }
    };
    return std::visit(Visitor{}, model);
}

}  // namespace

std::optional<Rescale> parse_rescale(const std::string& name) {
    if (name == "none") return Rescale::None;
    if (name == "graph") return Rescale::Graph;
    if (name == "hypergraph") return Rescale::Hypergraph;
    if (name == "hypergraph-centered") return Rescale::HypergraphCentered;
    return std::nullopt;
}

std::string to_string(Rescale r) {
    switch (r) {
        case Rescale::None: return "none";
        case Rescale::Graph: return "graph";
        case Rescale::Hypergraph: return "hypergraph";
        case Rescale::HypergraphCentered: return "hypergraph-centered";
    }
    return "none";
}

EmpiricalMeasure project_real_parts(const std::vector<LiftedPair>& pairs, const LiftParams& params,
                                    Rescale rescale, bool exclude_trivial) {
    const double q = params.product();
    const auto map = [&](double x) {
        switch (rescale) {
            case Rescale::None: return x;
            case Rescale::Graph: return 2.0 * x / std::sqrt(params.d - 1.0);
            case Rescale::Hypergraph: return (2.0 * x - (params.k - 2.0)) / std::sqrt(q);
            case Rescale::HypergraphCentered: return 2.0 * x / std::sqrt(q);
        }
        return x;
    };
    EmpiricalMeasure m;
    m.samples.reserve(2 * pairs.size());
    bool skipped = !exclude_trivial;
    for (const auto& p : pairs) {
        if (!skipped && std::abs(p.lambda - params.top_lambda()) <= 1e-9) {
            skipped = true;
            m.excluded_trivial = 2;
            continue;
        }
        m.samples.push_back(map(p.mu.real()));
        m.samples.push_back(map(p.mu_prime.real()));
    }
    std::sort(m.samples.begin(), m.samples.end());
    return m;
}

EmpiricalMeasure project_real_parts(const LiftedSpectrum& spectrum, Rescale rescale,
                                    bool exclude_trivial) {
    return project_real_parts(spectrum.pairs, spectrum.params, rescale, exclude_trivial);
}

std::string model_name(const DensityModel& model) {
    static constexpr const char* names[] = {"km", "sc", "hyperfixed", "hyperalpha"};
    return names[model.index()];
}

void validate(const DensityModel& model) {
    if (const auto* km = std::get_if<KestenMcKay>(&model); km && km->d < 3) {
        throw DomainError("Kesten-McKay law needs d >= 3");
    }
    if (const auto* hf = std::get_if<HyperFixed>(&model); hf && (hf->d < 2 || hf->k < 2)) {
        throw DomainError("hypergraph law needs d >= 2 and k >= 2");
    }
    if (const auto* ha = std::get_if<HyperAlpha>(&model); ha && !(ha->alpha > 0.0 && std::isfinite(ha->alpha))) {
        throw DomainError("alpha must be positive and finite");
    }
}

std::optional<std::string> hypothesis_warning(const DensityModel& model) {
    if (const auto* ha = std::get_if<HyperAlpha>(&model); ha && ha->alpha < 1.0) {
        return "alpha < 1 lies outside the regime where this law is established";
    }
    if (const auto* hf = std::get_if<HyperFixed>(&model); hf && hf->d < hf->k) {
        return "d < k: the law has an atom the density omits, so its total mass is below 1";
    }
    return std::nullopt;
}

std::pair<double, double> support(const DensityModel& model) {
    if (const auto* km = std::get_if<KestenMcKay>(&model)) {
        const double r = km_radius(km->d);
        return {-r, r};
    }
    return {-2.0, 2.0};
}

double density_pdf(const DensityModel& model, double x) {
    validate(model);
    const auto [lo, hi] = support(model);
    if (!(x > lo && x < hi)) return 0.0;
    struct Visitor {
        double x;
        double operator()(const KestenMcKay& m) const {
            const double d = m.d;
            return 2.0 * d * std::sqrt((d - 1.0) - x * x) / (kPi * (d * d - 4.0 * x * x));
        }
        double operator()(const Semicircle&) const { return std::sqrt(4.0 - x * x) / (2.0 * kPi); }
        double operator()(const HyperFixed& m) const {
            const double q = (m.k - 1.0) * (m.d - 1.0);
            const double rq = std::sqrt(q);
            const double num = 1.0 + (m.k - 1.0) / q;
            const double den = (1.0 + 1.0 / q - x / rq) *
                               (1.0 + (m.k - 1.0) * (m.k - 1.0) / q + (m.k - 1.0) * x / rq) * kPi;
            return num / den * std::sqrt(1.0 - x * x / 4.0);
        }
        double operator()(const HyperAlpha& m) const {
            const double a = m.alpha;
            return a / ((1.0 + a + std::sqrt(a) * x) * kPi) * std::sqrt(1.0 - x * x / 4.0);
        }
    };
    return std::visit(Visitor{x}, model);
}

double density_cdf(const DensityModel& model, double x) {
    validate(model);
    const auto [lo, hi] = support(model);
    if (x <= lo) return 0.0;
    const double mid = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);
    const double theta = x >= hi ? kPi : std::acos(std::clamp((mid - x) / half, -1.0, 1.0));
    const auto f = angle_density(model);
    return Simpson{f}(0.0, theta, kCdfTolerance);
}

double ks_distance(const EmpiricalMeasure& m, const DensityModel& model) {
    if (m.samples.empty()) throw PreconditionError("empty empirical measure");
    const auto n = static_cast<double>(m.samples.size());
    double worst = 0.0;
    std::size_t i = 0;
    while (i < m.samples.size()) {
        std::size_t j = i;
        while (j < m.samples.size() && m.samples[j] == m.samples[i]) ++j;
        const double f = density_cdf(model, m.samples[i]);
        worst = std::max({worst, std::abs(static_cast<double>(i) / n - f),
                          std::abs(static_cast<double>(j) / n - f)});
        i = j;
    }
    return std::min(worst, 1.0);
}

ConsistencyReport consistency_check_k2(int d) {
    ConsistencyReport r;
    r.name = "k2-d" + std::to_string(d);
    r.grid_points = 401;
    r.tolerance = 1e-10;
    const DensityModel hyper = HyperFixed{d, 2};
    const DensityModel km = KestenMcKay{d};
    const double half_radius = km_radius(d) / 2.0;
    for (std::size_t i = 0; i < r.grid_points; ++i) {
        const double y = -2.0 + 4.0 * static_cast<double>(i) / static_cast<double>(r.grid_points - 1);
        const double transported = density_pdf(km, y * half_radius) * half_radius;
        r.max_deviation = std::max(r.max_deviation, std::abs(density_pdf(hyper, y) - transported));
    }
    r.pass = r.max_deviation <= r.tolerance;
    return r;
}

AlphaLimitReport alpha_limit_check(double alpha, double tolerance) {
    AlphaLimitReport r;
    r.alpha = alpha;
    r.grid_points = 401;
    r.tolerance = tolerance;
    const DensityModel model = HyperAlpha{alpha};
    const DensityModel sc = Semicircle{};
    for (std::size_t i = 0; i < r.grid_points; ++i) {
        const double x = -2.0 + 4.0 * static_cast<double>(i) / static_cast<double>(r.grid_points - 1);
        r.max_pdf_deviation = std::max(r.max_pdf_deviation, std::abs(density_pdf(model, x) - density_pdf(sc, x)));
        r.max_cdf_deviation = std::max(r.max_cdf_deviation, std::abs(density_cdf(model, x) - density_cdf(sc, x)));
    }
    r.pass = r.max_pdf_deviation <= r.tolerance;
    return r;
}

namespace {

double quantile(const std::vector<double>& sorted, double p) {
    const double h = (static_cast<double>(sorted.size()) - 1.0) * p;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    if (lo + 1 >= sorted.size()) return sorted.back();
    return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[lo + 1] - sorted[lo]);
}

}  // namespace

std::vector<HistogramBin> histogram(const EmpiricalMeasure& m, std::optional<int> bins) {
    if (m.samples.empty()) throw PreconditionError("empty empirical measure");
    if (bins && *bins < 1) throw PreconditionError("bin count must be at least 1");
    const auto& x = m.samples;
    double lo = x.front();
    double hi = x.back();
    if (lo == hi) {
        lo -= 0.5;
        hi += 0.5;
    }
    int count = 1;
    if (bins) {
        count = *bins;
    } else {
        const double iqr = quantile(x, 0.75) - quantile(x, 0.25);
        const double width = 2.0 * iqr / std::cbrt(static_cast<double>(x.size()));
        if (width > 0.0) count = std::max(1, static_cast<int>(std::ceil((hi - lo) / width)));
    }
    const double width = (hi - lo) / count;
    std::vector<HistogramBin> out(static_cast<std::size_t>(count));
    for (int b = 0; b < count; ++b) {
        out[static_cast<std::size_t>(b)].left = lo + b * width;
        out[static_cast<std::size_t>(b)].right = b + 1 == count ? hi : lo + (b + 1) * width;
    }
    for (double v : x) {
        auto b = static_cast<int>(std::floor((v - lo) / width));
        b = std::clamp(b, 0, count - 1);
        ++out[static_cast<std::size_t>(b)].count;
    }
    const auto total = static_cast<double>(x.size());
    for (auto& bin : out) bin.density = static_cast<double>(bin.count) / (total * width);
    return out;
}

}  // namespace nbspec
