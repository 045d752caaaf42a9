#include "nbspec/rsbm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "nbspec/errors.hpp"
#include "nbspec/operators.hpp"
#include "nbspec/verify.hpp"

namespace nbspec {
namespace {

constexpr double kZeroEntry = 1e-12;

LiftParams rsbm_params(const RsbmGraph& g) { return LiftParams{g.d1 + g.d2, 2}; }

}  // namespace

InsiderPair rsbm_mu2(int d1, int d2) {
    if (d1 < 1 || d2 < 1) throw PreconditionError("rsbm_mu2 needs d1, d2 >= 1");
    const auto roots = lift_eigenvalue(d1 - d2, LiftParams{d1 + d2, 2});
    const long long gap = static_cast<long long>(d1 - d2) * (d1 - d2);
    return {roots.mu, roots.mu_prime, gap > 4LL * (d1 + d2 - 1)};
}

SigmaEigenpair deterministic_sigma_eigenpair(const RsbmGraph& g) {
    const auto un = static_cast<std::size_t>(g.n);
    if (g.sigma.size() != un) throw StructureError("sigma has the wrong length");
    std::vector<long long> product(un, 0);
    for (const auto& [u, v] : g.graph.edges) {
        product[static_cast<std::size_t>(u)] += g.sigma[static_cast<std::size_t>(v)];
        product[static_cast<std::size_t>(v)] += g.sigma[static_cast<std::size_t>(u)];
    }
    const int lambda = g.d1 - g.d2;
    for (std::size_t i = 0; i < un; ++i) {
        if (product[i] != static_cast<long long>(lambda) * g.sigma[i]) {
            throw StructureError("A sigma != (d1-d2) sigma at vertex " + std::to_string(i));
        }
    }

    SigmaEigenpair out;
    out.lambda = lambda;
    const auto insider = rsbm_mu2(g.d1, g.d2);
    const ReducedNB reduced = reduced_nb_matrix(g.graph);
    const Eigen::VectorXd sigma = Eigen::Map<const Eigen::VectorXi>(g.sigma.data(), g.n).cast<double>();
    const double scale = g.d1 + g.d2 - 1.0;
    const auto lift = [&](Complex mu) {
        Eigen::VectorXcd u(2 * g.n);
        u.head(g.n) = sigma.cast<Complex>();
        u.tail(g.n) = (mu / scale) * sigma.cast<Complex>();
        return eigen_residual(reduced.matrix, mu, u);
    };
    out.residual_mu2 = lift(insider.mu2);
    out.residual_mu2_prime = lift(insider.mu2_prime);
    return out;
}

RecoveryResult recover_communities(const RsbmGraph& g) {
    const auto insider = rsbm_mu2(g.d1, g.d2);
    if (!insider.detectable) {
        throw PreconditionError("(d1-d2)^2 <= 4(d1+d2-1): the community eigenvalue is not detectable");
    }
    const auto eigs = symmetric_eigs(adjacency_matrix(g.graph));
    const double top = g.d1 + g.d2;
    const double target = g.d1 - g.d2;

    std::size_t best = eigs.size();
    for (std::size_t i = 0; i < eigs.size(); ++i) {
        if (std::abs(eigs[i].lambda - top) <= kIsolationRadius) continue;
        if (best == eigs.size() ||
            std::abs(eigs[i].lambda - target) < std::abs(eigs[best].lambda - target)) {
            best = i;
        }
    }
    if (best == eigs.size()) throw AmbiguityError("no eigenvalue besides d1+d2");

    RecoveryResult r;
    r.eigenvalue = eigs[best].lambda;
    r.nearest_other = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < eigs.size(); ++i) {
        if (i != best) r.nearest_other = std::min(r.nearest_other, std::abs(eigs[i].lambda - r.eigenvalue));
    }
    if (r.nearest_other < kIsolationRadius) {
        throw AmbiguityError("eigenvalue " + std::to_string(r.eigenvalue) + " is not simple");
    }

    const Eigen::VectorXd& v = eigs[best].v;
    r.sigma_hat.resize(static_cast<std::size_t>(g.n));
    for (int i = 0; i < g.n; ++i) {
        if (std::abs(v(i)) < kZeroEntry) ++r.zero_entries;
        r.sigma_hat[static_cast<std::size_t>(i)] = v(i) < 0.0 && std::abs(v(i)) >= kZeroEntry ? -1 : 1;
    }

    const Eigen::VectorXcd u = lift_eigenvector_reduced(v, insider.mu2, g.d1 + g.d2);
    r.lift_consistent = true;
    for (int i = 0; i < g.n; ++i) {
        const double x = u(i).real();
        const int sign = x < 0.0 && std::abs(v(i)) >= kZeroEntry ? -1 : 1;
        if (sign != r.sigma_hat[static_cast<std::size_t>(i)]) r.lift_consistent = false;
    }

    std::size_t matches = 0;
    for (std::size_t i = 0; i < r.sigma_hat.size(); ++i) matches += r.sigma_hat[i] == g.sigma[i];
    const double frac = static_cast<double>(matches) / g.n;
    r.agreement = std::max(frac, 1.0 - frac);
    r.exact = matches == r.sigma_hat.size() || matches == 0;
    return r;
}

InsiderGapReport insider_gap_report(const RsbmGraph& g) {
    InsiderGapReport rep;
    rep.n = g.n;
    rep.d1 = g.d1;
    rep.d2 = g.d2;
    rep.insider = rsbm_mu2(g.d1, g.d2);
    if (!rep.insider.detectable) throw PreconditionError("insider report needs detectable parameters");
    if (g.d1 % 2 != 0) throw PreconditionError("insider report needs even d1");
    const LiftParams params = rsbm_params(g);
    rep.radius = params.radius();

    const auto spectrum = full_lifted_spectrum(g.graph, LiftOptions{false});
    const auto values = spectrum.eigenvalues();
    const Complex expected[] = {params.product(), 1.0, rep.insider.mu2, rep.insider.mu2_prime};

    std::vector<bool> taken(values.size(), false);
    for (const Complex e : expected) {
        std::size_t hits = 0;
        std::size_t at = values.size();
        for (std::size_t i = 0; i < values.size(); ++i) {
            if (std::abs(values[i] - e) < kIsolationRadius) {
                ++hits;
                at = i;
            }
        }
        if (hits != 1) {
            throw MultiplicityError("special eigenvalue " + std::to_string(e.real()) + " found " +
                                    std::to_string(hits) + " times within 1e-6");
        }
        const double dist = std::abs(values[at] - e);
        if (dist > kSpecialMatchTolerance) {
            throw MultiplicityError("special eigenvalue " + std::to_string(e.real()) + " off by " +
                                    std::to_string(dist));
        }
        taken[at] = true;
        rep.special.push_back({e, values[at], dist});
    }
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (taken[i]) continue;
        ++rep.rest;
        rep.max_deviation = std::max(rep.max_deviation, std::abs(std::abs(values[i]) - rep.radius));
    }
    return rep;
}

}  // namespace nbspec
