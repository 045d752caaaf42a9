#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "nbspec/graphgen.hpp"
#include "nbspec/operators.hpp"

namespace nbspec {

using Complex = std::complex<double>;

// Real eigenpair of a symmetric matrix. `v` is unit length; it is empty when
// only eigenvalues were requested.
struct SpectralPair {
    double lambda = 0.0;
    Eigen::VectorXd v;
    double residual = 0.0;  // ||A v - lambda v||_2
};

// Full eigendecomposition, sorted by lambda descending (stable on ties).
// Certifies residuals (scaled by max(1, ||A||)) and unit length to 1e-9;
// throws ConvergenceError otherwise. Columns are orthonormal to 1e-9.
std::vector<SpectralPair> symmetric_eigs(const SymmetricMatrix& a);

// Eigenvalues only, descending.
std::vector<double> symmetric_eigenvalues(const SymmetricMatrix& a);

// Model constants for the quadratic mu^2 - (lambda - k + 2) mu + (d-1)(k-1).
// Graphs are the k = 2 case.
struct LiftParams {
    int d = 0;
    int k = 2;

    double product() const { return static_cast<double>(d - 1) * (k - 1); }
    double radius() const;
    // Top adjacency eigenvalue d(k-1) and its lifted pair ((d-1)(k-1), 1).
    double top_lambda() const { return static_cast<double>(d) * (k - 1); }
    bool is_graph() const { return k == 2; }
};

struct RootPair {
    Complex mu;
    Complex mu_prime;
    double discriminant = 0.0;
    // |discriminant| < 1e-10: the root is returned twice. Diagnostic only;
    // diagonalizability of the reduced matrix is not asserted there.
    bool double_root = false;
};

// Roots of x^2 - lambda x + (d-1). `mu` is the root with larger real part,
// or with nonnegative imaginary part when real parts tie.
RootPair lift_eigenvalue(double lambda, int d);
RootPair lift_eigenvalue_hyper(double lambda, int d, int k);
RootPair lift_eigenvalue(double lambda, const LiftParams& p);

// Unit eigenvector [v; mu/(d-1) v] of the reduced matrix (graphs and
// hypergraphs share the shape).
Eigen::VectorXcd lift_eigenvector_reduced(const Eigen::VectorXd& v, Complex mu, int d);

// w(x,y) = mu v(y) - v(x) over the oriented edges of a graph. Unnormalized.
Eigen::VectorXcd lift_eigenvector_nb(const Eigen::VectorXd& v, Complex mu,
                                     const OrientedEdgeIndex& index);

// w(x,e) = mu * sum_{y in e, y != x} v(y) - (k-1) v(x). Unnormalized.
Eigen::VectorXcd lift_eigenvector_nb_hyper(const Eigen::VectorXd& v, Complex mu,
                                           const RegularHypergraph& h,
                                           const OrientedEdgeIndex& index);

// Upper bound on ||w||_inf / ||w||_2 for the lifted B-eigenvector. Pass
// k = nullopt (or 2) for graphs.
double deterministic_deloc_bound(double lambda, Complex mu, int d, std::optional<int> k,
                                 double v_inf);

// ||w||_2^2 predicted from (lambda, mu) for a unit v. For conjugate pairs this
// equals (k-1)(d+lambda)(d(k-1)-lambda), i.e. d^2 - lambda^2 for graphs.
double lifted_norm_squared(double lambda, Complex mu, const LiftParams& p);
// The bilinear pairing sum w * w' (no conjugation); equals
// (k-1)(d+lambda)(d(k-1)-lambda) for every lambda.
double lifted_pairing(double lambda, const LiftParams& p);

struct LiftedPair {
    double lambda = 0.0;
    Complex mu;
    Complex mu_prime;
    bool double_root = false;
    std::size_t source = 0;  // index into LiftedSpectrum::eigs
    // ||B~ u - mu u||_2 for the unit lifts; NaN when vectors were skipped.
    double u_residual = 0.0;
    double u_prime_residual = 0.0;
};

struct LiftedSpectrum {
    LiftParams params;
    int n = 0;
    std::vector<SpectralPair> eigs;
    std::vector<LiftedPair> pairs;
    bool has_vectors = false;

    // All 2n eigenvalues of the reduced matrix, (mu, mu') per pair.
    std::vector<Complex> eigenvalues() const;
};

struct LiftOptions {
    bool eigenvectors = true;
};

LiftedSpectrum full_lifted_spectrum(const RegularGraph& g, LiftOptions options = {});
LiftedSpectrum full_lifted_spectrum(const RegularHypergraph& h, LiftOptions options = {});

double inf_over_two(const Eigen::VectorXcd& x);
double inf_over_two(const Eigen::VectorXd& x);

// One lifted eigenvector (root `mu` of the pair `pair`) under audit.
struct DelocRecord {
    std::size_t pair = 0;
    bool prime = false;
    double lambda = 0.0;
    Complex mu;
    double ratio_v = 0.0;
    double ratio_u = 0.0;
    double u_residual = 0.0;
    bool u_ok = true;  // ratio_u <= ratio_v

    // Present when w is defined (mu nontrivial, w nonzero).
    std::optional<double> ratio_w;
    double w_residual = 0.0;
    double norm_squared = 0.0;           // measured ||w||^2
    double expected_norm_squared = 0.0;  // lifted_norm_squared
    bool norm_ok = true;

    // Present when the deterministic bound is finite.
    std::optional<double> bound;
    bool bound_ok = true;

    bool ok() const { return u_ok && norm_ok && bound_ok; }
};

struct DelocReport {
    LiftParams params;
    int n = 0;
    std::vector<DelocRecord> records;
    // Per-pair checks of the bilinear norm identity sum w w' = (k-1)(d+l)(d(k-1)-l).
    std::size_t pairing_checked = 0;
    std::size_t pairing_violations = 0;
    double max_pairing_error = 0.0;
    // The top-eigenvalue lift w_1 has ratio exactly 1/sqrt(nd).
    std::optional<double> top_ratio_w;
    double top_ratio_expected = 0.0;
    bool top_ok = true;

    // Vieta identities per pair, and |mu| = sqrt((d-1)(k-1)) on the bulk.
    std::size_t vieta_violations = 0;
    std::size_t circle_violations = 0;

    std::size_t u_violations = 0;
    std::size_t norm_violations = 0;
    std::size_t bound_violations = 0;
    std::size_t residual_violations = 0;
    double max_u_residual = 0.0;
    double max_w_residual = 0.0;

    bool ok() const {
        return top_ok && vieta_violations == 0 && circle_violations == 0 && u_violations == 0 &&
               norm_violations == 0 && bound_violations == 0 && residual_violations == 0 &&
               pairing_violations == 0;
    }
};

// Builds every u, u', w, w' from `spectrum` (which must carry eigenvectors)
// and checks residuals, norm identities, ratio monotonicity and the
// deterministic bound.
DelocReport delocalization_audit(const RegularGraph& g, const LiftedSpectrum& spectrum);
DelocReport delocalization_audit(const RegularHypergraph& h, const LiftedSpectrum& spectrum);

}  // namespace nbspec
