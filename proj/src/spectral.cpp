#include "nbspec/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include <Eigen/SparseCore>
#define LAPACK_COMPLEX_CPP
#include <lapacke.h>

#include "nbspec/errors.hpp"
#include "nbspec/verify.hpp"

namespace nbspec {
namespace {

constexpr double kCertificateTolerance = 1e-9;
constexpr double kDoubleRootTolerance = 1e-10;
constexpr double kTrivialTolerance = 1e-9;
constexpr double kZeroVector = 1e-12;

void require_symmetric(const SymmetricMatrix& a) {
    if (a.rows() != a.cols()) throw PreconditionError("matrix is not square");
    if (a.rows() > 0 && (a - a.transpose()).cwiseAbs().maxCoeff() != 0.0) {
        throw PreconditionError("matrix is not symmetric");
    }
}

// Eigenvalues only, ascending. `work` is destroyed.
Eigen::VectorXd run_dsyevd(Eigen::MatrixXd& work) {
    const auto n = static_cast<lapack_int>(work.rows());
    Eigen::VectorXd w(n);
    if (n == 0) return w;
    const lapack_int info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'N', 'U', n, work.data(), n, w.data());
    if (info != 0) throw ConvergenceError("dsyevd failed with info=" + std::to_string(info));
    return w;
}

// All eigenpairs by relatively robust representations, ascending.
Eigen::VectorXd run_dsyevr(Eigen::MatrixXd work, Eigen::MatrixXd& vectors) {
    const auto n = static_cast<lapack_int>(work.rows());
    Eigen::VectorXd w(n);
    vectors.resize(n, n);
    if (n == 0) return w;
    std::vector<lapack_int> support(2 * static_cast<std::size_t>(n));
    lapack_int found = 0;
    const lapack_int info = LAPACKE_dsyevr(LAPACK_COL_MAJOR, 'V', 'A', 'U', n, work.data(), n, 0.0, 0.0, 0,
                                           0, 0.0, &found, w.data(), vectors.data(), n, support.data());
    if (info != 0 || found != n) {
        throw ConvergenceError("dsyevr failed with info=" + std::to_string(info));
    }
    return w;
}

std::vector<Eigen::Index> descending_order(const Eigen::VectorXd& ascending) {
    // Reverse LAPACK order first so equal eigenvalues keep their reversed
    // original positions after the stable sort.
    std::vector<Eigen::Index> order(static_cast<std::size_t>(ascending.size()));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index i, Eigen::Index j) {
        return ascending(i) > ascending(j);
    });
    return order;
}

bool near(Complex a, double b) { return std::abs(a - b) < kTrivialTolerance * std::max(1.0, std::abs(b)); }

}  // namespace

std::vector<SpectralPair> symmetric_eigs(const SymmetricMatrix& a) {
    require_symmetric(a);
    Eigen::MatrixXd vectors;
    const Eigen::VectorXd values = run_dsyevr(a, vectors);
    const Eigen::Index n = a.rows();

    const double scale = std::max(1.0, n > 0 ? values.cwiseAbs().maxCoeff() : 0.0);
    // Adjacency matrices are sparse, so the residual product is cheap this way.
    const Eigen::SparseMatrix<double> sparse = a.sparseView();
    const Eigen::MatrixXd residuals = sparse * vectors - vectors * values.asDiagonal();
    // Unit length is certified here; pairwise orthogonality is what dsyevr
    // delivers and the test suite checks it, since V^T V costs n^3.
    for (Eigen::Index j = 0; j < n; ++j) {
        const double err = std::abs(vectors.col(j).squaredNorm() - 1.0);
        if (!(err <= kCertificateTolerance)) {
            throw ConvergenceError("eigenvector not unit length: |v^T v - 1| = " + std::to_string(err));
        }
    }

    std::vector<SpectralPair> out;
    out.reserve(static_cast<std::size_t>(n));
    for (const Eigen::Index j : descending_order(values)) {
        const double r = residuals.col(j).norm();
        if (!(r <= kCertificateTolerance * scale)) {
            throw ConvergenceError("eigenpair residual " + std::to_string(r) + " exceeds certificate");
        }
        out.push_back({values(j), vectors.col(j), r});
    }
    return out;
}

std::vector<double> symmetric_eigenvalues(const SymmetricMatrix& a) {
    require_symmetric(a);
    Eigen::MatrixXd work = a;
    const Eigen::VectorXd values = run_dsyevd(work);
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(values.size()));
    for (const Eigen::Index j : descending_order(values)) out.push_back(values(j));
    return out;
}

double LiftParams::radius() const { return std::sqrt(product()); }

RootPair lift_eigenvalue(double lambda, const LiftParams& p) {
    // x^2 - b x + c = 0
    const double b = lambda - (p.k - 2);
    const double c = p.product();
    RootPair r;
    r.discriminant = b * b - 4.0 * c;
    if (std::abs(r.discriminant) < kDoubleRootTolerance) {
        r.mu = r.mu_prime = Complex(b / 2.0, 0.0);
        r.double_root = true;
    } else if (r.discriminant > 0.0) {
        // The root of larger magnitude is computed directly, the other one by
        // Vieta, avoiding cancellation.
        const double s = std::sqrt(r.discriminant);
        if (b >= 0.0) {
            const double big = (b + s) / 2.0;
            r.mu = big;
            r.mu_prime = c / big;
        } else {
            const double big = (b - s) / 2.0;
            r.mu_prime = big;
            r.mu = c / big;
        }
    } else {
        const double im = std::sqrt(-r.discriminant) / 2.0;
        r.mu = Complex(b / 2.0, im);
        r.mu_prime = Complex(b / 2.0, -im);
    }
    return r;
}

RootPair lift_eigenvalue(double lambda, int d) { return lift_eigenvalue(lambda, LiftParams{d, 2}); }

RootPair lift_eigenvalue_hyper(double lambda, int d, int k) {
    return lift_eigenvalue(lambda, LiftParams{d, k});
}

Eigen::VectorXcd lift_eigenvector_reduced(const Eigen::VectorXd& v, Complex mu, int d) {
    if (d == 1) throw DegenerateError("reduced eigenvector lift divides by d - 1 = 0");
    const Eigen::Index n = v.size();
    Eigen::VectorXcd u(2 * n);
    u.head(n) = v.cast<Complex>();
    u.tail(n) = (mu / static_cast<double>(d - 1)) * v.cast<Complex>();
    const double norm = u.norm();
    if (norm < kZeroVector) throw ZeroVectorError("reduced lift of a zero vector");
    return u / norm;
}

Eigen::VectorXcd lift_eigenvector_nb(const Eigen::VectorXd& v, Complex mu,
                                     const OrientedEdgeIndex& index) {
    if (near(mu, 1.0) || near(mu, -1.0)) {
        throw TrivialEigenvalueError("edge lift is undefined for mu = +-1");
    }
    Eigen::VectorXcd w(static_cast<Eigen::Index>(index.size()));
    for (std::size_t r = 0; r < index.size(); ++r) {
        const auto [x, y] = index[r];
        w(static_cast<Eigen::Index>(r)) = mu * v(y) - v(x);
    }
    if (w.norm() < kZeroVector) throw ZeroVectorError("edge lift vanished");
    return w;
}

Eigen::VectorXcd lift_eigenvector_nb_hyper(const Eigen::VectorXd& v, Complex mu,
                                           const RegularHypergraph& h,
                                           const OrientedEdgeIndex& index) {
    if (near(mu, 1.0) || near(mu, -(h.k - 1.0))) {
        throw TrivialEigenvalueError("incidence lift is undefined for mu in {1, -(k-1)}");
    }
    std::vector<double> edge_sum(h.hyperedges.size(), 0.0);
    for (std::size_t e = 0; e < h.hyperedges.size(); ++e) {
        for (int y : h.hyperedges[e]) edge_sum[e] += v(y);
    }
    Eigen::VectorXcd w(static_cast<Eigen::Index>(index.size()));
    for (std::size_t r = 0; r < index.size(); ++r) {
        const auto [x, e] = index[r];
        const double others = edge_sum[static_cast<std::size_t>(e)] - v(x);
        w(static_cast<Eigen::Index>(r)) = mu * others - (h.k - 1.0) * v(x);
    }
    if (w.norm() < kZeroVector) throw ZeroVectorError("incidence lift vanished");
    return w;
}

double deterministic_deloc_bound(double lambda, Complex mu, int d, std::optional<int> k,
                                 double v_inf) {
    const int kk = k.value_or(2);
    const double left = d + lambda;                          // vanishes at lambda = -d
    const double right = static_cast<double>(d) * (kk - 1) - lambda;  // at lambda = d(k-1)
    if (left <= kTrivialTolerance * d || right <= kTrivialTolerance * d) {
        throw DegenerateError("deterministic bound diverges at lambda = " + std::to_string(lambda));
    }
    return v_inf * std::sqrt(kk - 1.0) * (std::abs(mu) + 1.0) / std::sqrt(left * right);
}

double lifted_norm_squared(double lambda, Complex mu, const LiftParams& p) {
    const double km1 = p.k - 1.0;
    // sum over incidences of (sum_{y in e, y != x} v(y))^2 and of that sum times v(x).
    const double squares = (p.k - 2.0) * lambda + km1 * p.d;
    const double cross = lambda;
    return std::norm(mu) * squares + km1 * km1 * p.d - 2.0 * km1 * mu.real() * cross;
}

double lifted_pairing(double lambda, const LiftParams& p) {
    return (p.k - 1.0) * (p.d + lambda) * (p.top_lambda() - lambda);
}

std::vector<Complex> LiftedSpectrum::eigenvalues() const {
    std::vector<Complex> out;
    out.reserve(2 * pairs.size());
    for (const auto& p : pairs) {
        out.push_back(p.mu);
        out.push_back(p.mu_prime);
    }
    return out;
}

namespace {

LiftedSpectrum lift_all(const SymmetricMatrix& a, const ReducedNB* reduced, LiftParams params,
                        LiftOptions options) {
    LiftedSpectrum s;
    s.params = params;
    s.n = static_cast<int>(a.rows());
    s.has_vectors = options.eigenvectors;
    if (options.eigenvectors) {
        s.eigs = symmetric_eigs(a);
    } else {
        for (double l : symmetric_eigenvalues(a)) s.eigs.push_back({l, {}, 0.0});
    }
    s.pairs.reserve(s.eigs.size());
    for (std::size_t i = 0; i < s.eigs.size(); ++i) {
        const auto roots = lift_eigenvalue(s.eigs[i].lambda, params);
        LiftedPair p{s.eigs[i].lambda, roots.mu, roots.mu_prime, roots.double_root, i,
                     std::numeric_limits<double>::quiet_NaN(),
                     std::numeric_limits<double>::quiet_NaN()};
        if (options.eigenvectors) {
            const auto u = lift_eigenvector_reduced(s.eigs[i].v, p.mu, params.d);
            const auto u_prime = lift_eigenvector_reduced(s.eigs[i].v, p.mu_prime, params.d);
            p.u_residual = eigen_residual(reduced->matrix, p.mu, u);
            p.u_prime_residual = eigen_residual(reduced->matrix, p.mu_prime, u_prime);
        }
        s.pairs.push_back(p);
    }
    return s;
}

}  // namespace

LiftedSpectrum full_lifted_spectrum(const RegularGraph& g, LiftOptions options) {
    if (g.d < 2) throw DegenerateError("lifting needs d >= 2");
    const auto reduced = options.eigenvectors ? reduced_nb_matrix(g) : ReducedNB{};
    return lift_all(adjacency_matrix(g), &reduced, LiftParams{g.d, 2}, options);
}

LiftedSpectrum full_lifted_spectrum(const RegularHypergraph& h, LiftOptions options) {
    if (h.d < 2) throw DegenerateError("lifting needs d >= 2");
    const auto reduced = options.eigenvectors ? reduced_nb_matrix(h) : ReducedNB{};
    return lift_all(adjacency_matrix(h), &reduced, LiftParams{h.d, h.k}, options);
}

double inf_over_two(const Eigen::VectorXcd& x) {
    return std::sqrt(x.cwiseAbs2().maxCoeff() / x.squaredNorm());
}

double inf_over_two(const Eigen::VectorXd& x) { return x.cwiseAbs().maxCoeff() / x.norm(); }

namespace {

constexpr double kIdentityTolerance = 1e-8;
constexpr double kVietaTolerance = 1e-10;

// Makes w for either model; nullopt when mu is trivial or w vanishes.
template <typename Lift>
std::optional<Eigen::VectorXcd> try_lift(Lift&& lift) {
    try {
        return lift();
    } catch (const TrivialEigenvalueError&) {
        return std::nullopt;
    } catch (const ZeroVectorError&) {
        return std::nullopt;
    }
}

template <typename LiftW>
DelocReport audit_impl(const LiftedSpectrum& spectrum, const SparseMatrix& nb, LiftW&& lift_w) {
    if (!spectrum.has_vectors) throw PreconditionError("audit needs eigenvectors");
    const LiftParams& p = spectrum.params;
    DelocReport report;
    report.params = p;
    report.n = spectrum.n;
    report.top_ratio_expected = 1.0 / std::sqrt(static_cast<double>(spectrum.n) * p.d);

    const double c = p.product();
    const double top = p.top_lambda();
    const auto top_count = std::count_if(spectrum.pairs.begin(), spectrum.pairs.end(), [&](const auto& q) {
        return std::abs(q.lambda - top) < kTrivialTolerance * top;
    });

    for (std::size_t i = 0; i < spectrum.pairs.size(); ++i) {
        const LiftedPair& pair = spectrum.pairs[i];
        const Eigen::VectorXd& v = spectrum.eigs[pair.source].v;
        const double lambda = pair.lambda;
        const double b = lambda - (p.k - 2);

        const Complex sum = pair.mu + pair.mu_prime;
        const Complex prod = pair.mu * pair.mu_prime;
        if (std::abs(sum - b) > kVietaTolerance * std::max(1.0, std::abs(b)) ||
            std::abs(prod - c) > kVietaTolerance * c) {
            ++report.vieta_violations;
        }
        if (b * b <= 4.0 * c) {
            const double r = std::sqrt(c);
            if (std::abs(std::abs(pair.mu) - r) > kVietaTolerance * r ||
                std::abs(std::abs(pair.mu_prime) - r) > kVietaTolerance * r) {
                ++report.circle_violations;
            }
        }

        const bool is_top = top_count == 1 && std::abs(lambda - top) < kTrivialTolerance * top;
        const double v_inf = v.cwiseAbs().maxCoeff();
        std::optional<Eigen::VectorXcd> ws[2];
        for (int which = 0; which < 2; ++which) {
            const Complex mu = which == 0 ? pair.mu : pair.mu_prime;
            DelocRecord rec;
            rec.pair = i;
            rec.prime = which == 1;
            rec.lambda = lambda;
            rec.mu = mu;
            rec.ratio_v = inf_over_two(v);
            const auto u = lift_eigenvector_reduced(v, mu, p.d);
            rec.ratio_u = inf_over_two(u);
            rec.u_residual = which == 0 ? pair.u_residual : pair.u_prime_residual;
            rec.u_ok = rec.ratio_u <= rec.ratio_v * (1.0 + 1e-12);
            report.max_u_residual = std::max(report.max_u_residual, rec.u_residual);
            if (rec.u_residual > kCertificateTolerance) ++report.residual_violations;

            ws[which] = try_lift([&] { return lift_w(v, mu); });
            if (ws[which]) {
                const Eigen::VectorXcd& w = *ws[which];
                rec.norm_squared = w.squaredNorm();
                rec.ratio_w = std::sqrt(w.cwiseAbs2().maxCoeff() / rec.norm_squared);
                rec.w_residual = nb.shifted_residual_norm(w, mu) / std::sqrt(rec.norm_squared);
                rec.expected_norm_squared = lifted_norm_squared(lambda, mu, p);
                rec.norm_ok = std::abs(rec.norm_squared - rec.expected_norm_squared) <=
                              kIdentityTolerance * std::abs(rec.expected_norm_squared) +
                                  1e-13 * (std::norm(mu) + 1.0) * p.d * p.k * p.k;
                report.max_w_residual = std::max(report.max_w_residual, rec.w_residual);
                if (rec.w_residual > kCertificateTolerance) ++report.residual_violations;
                try {
                    rec.bound = deterministic_deloc_bound(lambda, mu, p.d, p.k, v_inf);
                    rec.bound_ok = *rec.ratio_w <= *rec.bound * (1.0 + 1e-12);
                } catch (const DegenerateError&) {
                    rec.bound.reset();
                }
                if (is_top && which == 0) {
                    report.top_ratio_w = rec.ratio_w;
                    report.top_ok = std::abs(*rec.ratio_w - report.top_ratio_expected) <= 1e-12;
                }
            }
            if (!rec.u_ok) ++report.u_violations;
            if (!rec.norm_ok) ++report.norm_violations;
            if (!rec.bound_ok) ++report.bound_violations;
            report.records.push_back(rec);
        }
        if (ws[0] && ws[1]) {
            const Complex pairing = (ws[0]->array() * ws[1]->array()).sum();
            const double expected = lifted_pairing(lambda, p);
            const double err = std::abs(pairing - expected);
            ++report.pairing_checked;
            report.max_pairing_error = std::max(report.max_pairing_error,
                                                err / std::max(std::abs(expected), 1e-300));
            if (err > kIdentityTolerance * std::abs(expected) + 1e-13 * p.d * p.d * p.k * p.k) {
                ++report.pairing_violations;
            }
        }
    }
    // For d = 2 graphs the top lift is mu = 1, which has no edge eigenvector.
    if (top_count == 1 && !report.top_ratio_w && c != 1.0) report.top_ok = false;
    return report;
}

}  // namespace

DelocReport delocalization_audit(const RegularGraph& g, const LiftedSpectrum& spectrum) {
    const auto index = oriented_index(g);
    return audit_impl(spectrum, nonbacktracking_matrix(g),
                      [&](const Eigen::VectorXd& v, Complex mu) { return lift_eigenvector_nb(v, mu, index); });
}

DelocReport delocalization_audit(const RegularHypergraph& h, const LiftedSpectrum& spectrum) {
    const auto index = oriented_index(h);
    return audit_impl(spectrum, nonbacktracking_matrix(h),
                      [&](const Eigen::VectorXd& v, Complex mu) {
                          return lift_eigenvector_nb_hyper(v, mu, h, index);
                      });
}

}  // namespace nbspec
