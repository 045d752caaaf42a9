#pragma once

#include <cstddef>
#include <vector>

#include "nbspec/graphgen.hpp"
#include "nbspec/spectral.hpp"

namespace nbspec {

// Roots of mu^2 - (d1-d2) mu + (d1+d2-1), branch as in lift_eigenvalue.
struct InsiderPair {
    Complex mu2;
    Complex mu2_prime;
    bool detectable = false;  // (d1-d2)^2 > 4(d1+d2-1)
};

InsiderPair rsbm_mu2(int d1, int d2);

struct SigmaEigenpair {
    int lambda = 0;  // d1 - d2
    // ||B~ u - mu u|| for u = [sigma; mu/(d1+d2-1) sigma] at both roots.
    double residual_mu2 = 0.0;
    double residual_mu2_prime = 0.0;
};

// Checks A sigma = (d1-d2) sigma in integer arithmetic; StructureError if not.
SigmaEigenpair deterministic_sigma_eigenpair(const RsbmGraph& g);

struct RecoveryResult {
    std::vector<int> sigma_hat;
    double agreement = 0.0;  // max over the global sign
    bool exact = false;
    double eigenvalue = 0.0;      // selected eigenvalue of A
    double nearest_other = 0.0;   // distance to the closest other eigenvalue
    std::size_t zero_entries = 0;  // eigenvector entries mapped to +1
    // Sign pattern of the x-block of the lifted reduced eigenvector at mu2
    // equals sigma_hat.
    bool lift_consistent = false;
};

// Sign of the A-eigenvector nearest d1-d2. PreconditionError for
// non-detectable parameters, AmbiguityError when that eigenvalue is not
// isolated by 1e-6.
RecoveryResult recover_communities(const RsbmGraph& g);

inline constexpr double kSpecialMatchTolerance = 1e-8;
inline constexpr double kIsolationRadius = 1e-6;

struct SpecialEigenvalue {
    Complex expected;
    Complex found;
    double distance = 0.0;
};

struct InsiderGapReport {
    int n = 0;
    int d1 = 0;
    int d2 = 0;
    InsiderPair insider;
    double radius = 0.0;  // sqrt(d1+d2-1)
    // d1+d2-1, 1, mu2, mu2' in that order.
    std::vector<SpecialEigenvalue> special;
    std::size_t rest = 0;
    double max_deviation = 0.0;  // max over the rest of ||mu| - radius|
};

// PreconditionError unless detectable with d1 even; MultiplicityError if a
// special eigenvalue is missing or not simple.
InsiderGapReport insider_gap_report(const RsbmGraph& g);

}  // namespace nbspec
