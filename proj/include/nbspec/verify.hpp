#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "nbspec/graphgen.hpp"
#include "nbspec/operators.hpp"
#include "nbspec/seed.hpp"

namespace nbspec {

// log|det M| and arg det M in (-pi, pi].
struct LogDet {
    double log_abs = 0.0;
    double phase = 0.0;
};

// Wraps an angle into (-pi, pi].
double wrap_phase(double angle);

// Partial-pivoting LU; throws SingularError if a pivot magnitude drops below
// 1e-300.
LogDet logdet(const Eigen::MatrixXcd& m);

// ||M w - mu w||_2 / ||w||_2. Throws ZeroVectorError for w = 0.
double eigen_residual(const SparseMatrix& m, std::complex<double> mu, const Eigen::VectorXcd& w);
double eigen_residual(const Eigen::MatrixXcd& m, std::complex<double> mu,
                      const Eigen::VectorXcd& w);

// One evaluation of det(B - zI) = f(z)^{...} det(B~ - zI) in log space,
// together with the quadratic-pencil form det(z^2 I - z(A - (k-2)I) + (k-1)(D - I)).
struct IharaBassRecord {
    std::complex<double> z;
    double lhs_logabs = 0.0;   // log|det(B - zI)|
    double rhs_logabs = 0.0;   // scalar factors + log|det(B~ - zI)|
    double logabs_diff = 0.0;  // |lhs - rhs|
    double phase_diff = 0.0;   // |wrap(lhs - rhs)|
    double pencil_logabs_diff = 0.0;
    double pencil_phase_diff = 0.0;
    bool pass = false;
};

inline constexpr double kIharaTolerance = 1e-8;
// z closer than this to a reduced eigenvalue or a trivial factor root is
// refused with NearSingularError.
inline constexpr double kSingularGuard = 1e-6;

IharaBassRecord ihara_bass_check(const RegularGraph& g, std::complex<double> z);
IharaBassRecord ihara_bass_check_hyper(const RegularHypergraph& h, std::complex<double> z);

struct VerifyReport {
    std::vector<IharaBassRecord> records;
    bool ok() const;
};

// `trials` pseudo-random z in the annulus 0.1 <= |z| <= 2 sqrt((d-1)(k-1)),
// redrawn whenever the near-singular guard fires.
VerifyReport ihara_bass_trials(const RegularGraph& g, int trials, Seed seed);
VerifyReport ihara_bass_trials(const RegularHypergraph& h, int trials, Seed seed);

}  // namespace nbspec
