#include "nbspec/verify.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <Eigen/LU>

#include "nbspec/errors.hpp"
#include "nbspec/spectral.hpp"

namespace nbspec {
namespace {

using Complex = std::complex<double>;

constexpr double kMinPivot = 1e-300;

// Scalar factor (z - root)^exponent.
struct Factor {
    Complex root;
    long long exponent;
};

LogDet shifted_logdet(const Eigen::MatrixXd& m, Complex z) {
    Eigen::MatrixXcd shifted = m.cast<Complex>();
    shifted.diagonal().array() -= z;
    return logdet(shifted);
}

// log|det| and phase of z^2 I - z(A - (k-2)I) + (k-1)(d-1) I.
LogDet pencil_logdet(const Eigen::MatrixXd& a, int d, int k, Complex z) {
    Eigen::MatrixXcd p = -z * a.cast<Complex>();
    p.diagonal().array() += z * z + z * (k - 2.0) + (k - 1.0) * (d - 1.0);
    return logdet(p);
}

template <typename Model>
IharaBassRecord check(const Model& g, int d, int k, long long edges, Complex z) {
    const Eigen::MatrixXd a = adjacency_matrix(g);
    const ReducedNB reduced = reduced_nb_matrix(g);
    const std::vector<Factor> factors = k == 2
        ? std::vector<Factor>{{1.0, edges - g.n}, {-1.0, edges - g.n}}
        : std::vector<Factor>{{1.0, (k - 1) * edges - g.n}, {-(k - 1.0), edges - g.n}};

    for (const auto& f : factors) {
        if (std::abs(z - f.root) < kSingularGuard) {
            throw NearSingularError("z is within 1e-6 of a trivial factor root");
        }
    }
    const LiftParams params{d, k};
    for (double lambda : symmetric_eigenvalues(a)) {
        const auto r = lift_eigenvalue(lambda, params);
        if (std::abs(z - r.mu) < kSingularGuard || std::abs(z - r.mu_prime) < kSingularGuard) {
            throw NearSingularError("z is within 1e-6 of an eigenvalue of the reduced matrix");
        }
    }

    const LogDet lhs = shifted_logdet(nonbacktracking_matrix(g).dense(), z);
    const LogDet reduced_det = shifted_logdet(reduced.dense(), z);
    double scalar_abs = 0.0;
    double scalar_phase = 0.0;
    for (const auto& f : factors) {
        const Complex t = z - f.root;
        scalar_abs += static_cast<double>(f.exponent) * std::log(std::abs(t));
        scalar_phase += static_cast<double>(f.exponent) * std::arg(t);
    }
    // The factor identity holds for det(zI - B) / det(zI - B~); B has nd rows,
    // so det(B - zI) picks up (-1)^{nd}. Odd only for hypergraphs.
    if ((static_cast<long long>(g.n) * d) % 2 != 0) scalar_phase += std::numbers::pi;
    const LogDet pencil = pencil_logdet(a, d, k, z);

    IharaBassRecord rec;
    rec.z = z;
    rec.lhs_logabs = lhs.log_abs;
    rec.rhs_logabs = scalar_abs + reduced_det.log_abs;
    rec.logabs_diff = std::abs(rec.lhs_logabs - rec.rhs_logabs);
    rec.phase_diff = std::abs(wrap_phase(lhs.phase - scalar_phase - reduced_det.phase));
    rec.pencil_logabs_diff = std::abs(pencil.log_abs - reduced_det.log_abs);
    rec.pencil_phase_diff = std::abs(wrap_phase(pencil.phase - reduced_det.phase));
    const double scale = 1.0 + std::abs(rec.lhs_logabs);
    rec.pass = rec.logabs_diff <= kIharaTolerance * scale && rec.phase_diff <= kIharaTolerance &&
               rec.pencil_logabs_diff <= kIharaTolerance * (1.0 + std::abs(pencil.log_abs)) &&
               rec.pencil_phase_diff <= kIharaTolerance;
    return rec;
}

template <typename Fn>
VerifyReport run_trials(int trials, Seed seed, double outer, Fn&& one) {
    if (trials < 1) throw PreconditionError("trials must be at least 1");
    VerifyReport report;
    Rng rng(seed);
    constexpr double inner = 0.1;
    int guard_hits = 0;
    while (static_cast<int>(report.records.size()) < trials) {
        // Uniform on the annulus by area.
        const double u = rng.uniform();
        const double r = std::sqrt(inner * inner + u * (outer * outer - inner * inner));
        const double theta = 2.0 * std::numbers::pi * rng.uniform();
        const Complex z = std::polar(r, theta);
        try {
            report.records.push_back(one(z));
        } catch (const NearSingularError&) {
            if (++guard_hits > 1000 * trials) throw;
        }
    }
    return report;
}

}  // namespace

double wrap_phase(double angle) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    double a = std::fmod(angle, two_pi);
    if (a <= -std::numbers::pi) a += two_pi;
    if (a > std::numbers::pi) a -= two_pi;
    return a;
}

LogDet logdet(const Eigen::MatrixXcd& m) {
    if (m.rows() != m.cols()) throw PreconditionError("logdet needs a square matrix");
    LogDet out;
    if (m.rows() == 0) return out;
    const Eigen::PartialPivLU<Eigen::MatrixXcd> lu(m);
    const Eigen::MatrixXcd& f = lu.matrixLU();
    double phase = 0.0;
    for (Eigen::Index i = 0; i < f.rows(); ++i) {
        const Complex pivot = f(i, i);
        const double mag = std::abs(pivot);
        if (mag < kMinPivot) throw SingularError("pivot magnitude below 1e-300");
        out.log_abs += std::log(mag);
        phase += std::arg(pivot);
    }
    if (lu.permutationP().determinant() < 0) phase += std::numbers::pi;
    out.phase = wrap_phase(phase);
    return out;
}

double eigen_residual(const SparseMatrix& m, Complex mu, const Eigen::VectorXcd& w) {
    const double norm = w.norm();
    if (norm == 0.0) throw ZeroVectorError("residual of a zero vector");
    return m.shifted_residual_norm(w, mu) / norm;
}

double eigen_residual(const Eigen::MatrixXcd& m, Complex mu, const Eigen::VectorXcd& w) {
    const double norm = w.norm();
    if (norm == 0.0) throw ZeroVectorError("residual of a zero vector");
    return (m * w - mu * w).norm() / norm;
}

IharaBassRecord ihara_bass_check(const RegularGraph& g, Complex z) {
    return check(g, g.d, 2, static_cast<long long>(g.edges.size()), z);
}

IharaBassRecord ihara_bass_check_hyper(const RegularHypergraph& h, Complex z) {
    return check(h, h.d, h.k, static_cast<long long>(h.hyperedges.size()), z);
}

bool VerifyReport::ok() const {
    return !records.empty() &&
           std::all_of(records.begin(), records.end(), [](const auto& r) { return r.pass; });
}

VerifyReport ihara_bass_trials(const RegularGraph& g, int trials, Seed seed) {
    const double outer = 2.0 * std::sqrt(std::max(g.d - 1.0, 0.0));
    return run_trials(trials, seed, std::max(outer, 0.2), [&](Complex z) { return ihara_bass_check(g, z); });
}

VerifyReport ihara_bass_trials(const RegularHypergraph& h, int trials, Seed seed) {
    const double outer = 2.0 * std::sqrt(std::max((h.d - 1.0) * (h.k - 1.0), 0.0));
    return run_trials(trials, seed, std::max(outer, 0.2),
                      [&](Complex z) { return ihara_bass_check_hyper(h, z); });
}

}  // namespace nbspec
