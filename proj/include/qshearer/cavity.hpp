#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qshearer/hypergraph.hpp"

namespace qshearer {

// Per-directed-link occupation messages of the hard-core gas. q[link] is
// the site-to-hyperedge message q_{a->i}, l[link] the hyperedge-to-site
// message l_{i->a}; links are indexed by LinkIndex. At lambda = 0 the
// all-zero state is the exact fixed point. At negative fugacity messages
// may leave [0,1] (the chain critical point has q = -1).
struct CavityState {
    double lambda = 0.0;
    std::vector<double> q;
    std::vector<double> l;
};

CavityState zero_state(const LinkIndex& idx, double lambda);

// Raised when a message update hits a vanishing denominator; names the
// offending link. bp_solve converts it into a breakdown result.
struct SingularUpdate : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// One synchronous update of all messages from the old state;
// new = (1-damping)*update + damping*old.
CavityState bp_sweep(const LinkIndex& idx, const CavityState& state, double damping);

struct BetheFreeEnergy {
    double total = 0.0;    // F = log Z estimate
    double density = 0.0;  // f = F / n_sites
    std::vector<double> site_terms;  // F_a
    std::vector<double> edge_terms;  // F_i
    std::vector<double> link_terms;  // F_ai
};

// A nonpositive logarithm argument is reported as breakdown, never as a
// silent NaN.
struct FreeEnergyResult {
    bool ok = false;
    BetheFreeEnergy fe;
    std::string breakdown;
};

FreeEnergyResult free_energy(const LinkIndex& idx, const CavityState& state);

// Mean hyperedge occupation per site from the fixed-point marginals.
double occupation_density(const LinkIndex& idx, const CavityState& state);

struct BpSchedule {
    double tol = 1e-12;             // max message residual at a fixed point
    int max_iterations = 200000;    // per fugacity step
    double damping_negative = 0.5;  // undamped iteration oscillates near lambda_c
    double damping_positive = 0.0;
    double initial_step = 0.05;     // |lambda| continuation step
    double min_step = 1e-7;         // breakdown resolution in lambda
};

struct BpOutcome {
    enum class Status { converged, breakdown };
    Status status = Status::converged;
    CavityState state;          // fixed point at lambda_reached
    double lambda_reached = 0;  // target when converged, last good lambda otherwise
    double step_resolution = 0;
    std::string breakdown_kind;  // non_convergence | singular_update | nonpositive_log_argument
    std::string detail;
    long total_iterations = 0;
    double residual = 0;

    bool converged() const { return status == Status::converged; }
};

// Continuation in lambda from 0 (trivial fixed point) to lambda_target,
// re-converging at each step and halving the step on failure. Tracks the
// branch connected to the lambda = 0 solution. Breakdown is a result,
// not a fault: the last good lambda is the empirical lambda_c estimate.
BpOutcome bp_solve(const InteractionHypergraph& h, double lambda_target, const BpSchedule& schedule = {});

// Closed-form uniform-message solution on the infinite chain, valid for
// lambda >= -1/4; at the critical point q = l = -1 and f = -log 2.
struct ChainSolution {
    double q = 0, l = 0, f = 0;
};
ChainSolution chain_uniform_solution(double lambda);

// Uniform-message solution on the infinite (t,k)-biregular tree. Solves
// x^k - x^{k-1} = lambda (t-1) on the branch continuous with x(0) = 1 by
// bracketed bisection; valid for lambda >= lambda_c(t,k).
struct TreeSolution {
    double x = 0, q = 0, l = 0, f = 0;
};
TreeSolution regular_tree_solution(int t, int k, double lambda);

// lambda_c = -(1/(t-1)) (k-1)^{k-1} / k^k
double regular_tree_lambda_c(int t, int k);

// Breakdown fugacity of BP on the depth-`depth` (t,k)-tree patch. On the
// patch the messages depend only on the level, so the sweep reduces to
// iterating x -> 1 + lambda (t-1) / x^{k-1} from the leaf value x = 1;
// the run is exactly bp_solve on that patch at a cost linear in depth,
// which makes depths far beyond explicit storage reachable. Returns the
// most negative surviving lambda, bisected to `resolution`.
double tree_patch_breakdown_lambda(int t, int k, long depth, double resolution);

// Yang-Lee edge exponents of the hard-core singularity by lattice
// dimension (D >= 6 is the high-dimensional value).
struct CriticalExponents {
    static constexpr double phi_1d = 0.5;
    static constexpr double phi_2d = 5.0 / 6.0;
    static constexpr double phi_high_d = 1.5;
};

struct SingularityFit {
    double lambda_c = 0;
    double amplitude = 0;  // coefficient of (lambda - lambda_c)^phi
    double c0 = 0, c1 = 0;  // analytic background
    double residual = 0;    // rms misfit
};

// Least-squares fit of samples (lambda, y) to
//   y = c0 + c1 (lambda - lambda_c) + B (lambda - lambda_c)^phi
// with the exponent held fixed; lambda_c is scanned and refined below the
// smallest sampled lambda. Needs >= 6 samples on the lambda > lambda_c side.
SingularityFit fit_singularity(std::span<const std::pair<double, double>> samples, double exponent,
                               double lambda_c_guess);

}  // namespace qshearer
