#include "qshearer/cavity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace qshearer {

CavityState zero_state(const LinkIndex& idx, double lambda) {
    CavityState s;
    s.lambda = lambda;
    s.q.assign(idx.n_links, 0.0);
    s.l.assign(idx.n_links, 0.0);
    return s;
}

namespace {

std::string link_name(const LinkIndex& idx, int link) {
    int edge = 0;
    while (idx.edge_offset[edge + 1] <= link) ++edge;
    return "site " + std::to_string(idx.link_site[link]) + " <-> hyperedge " + std::to_string(edge);
}

}  // namespace

CavityState bp_sweep(const LinkIndex& idx, const CavityState& state, double damping) {
    const double lambda = state.lambda;
    CavityState next = state;
    if (lambda == 0.0) {
        std::fill(next.q.begin(), next.q.end(), 0.0);
        std::fill(next.l.begin(), next.l.end(), 0.0);
        return next;
    }

    // q_{a->i} = lambda / (lambda + 1 + sum_{j in da\i} l_j / (1 - l_j))
    for (int a = 0; a < idx.n_sites; ++a) {
        const auto& links = idx.site_links[a];
        double total = 0.0;
        for (int ln : links) {
            const double denom = 1.0 - state.l[ln];
            if (denom == 0.0)
                throw SingularUpdate("bp_sweep: message l = 1 at link " + link_name(idx, ln));
            total += state.l[ln] / denom;
        }
        for (int ln : links) {
            const double own = state.l[ln] / (1.0 - state.l[ln]);
            const double denom = lambda + 1.0 + (total - own);
            if (denom == 0.0 || !std::isfinite(denom))
                throw SingularUpdate("bp_sweep: vanishing q denominator at link " + link_name(idx, ln));
            next.q[ln] = lambda / denom;
        }
    }

    // l_{i->a} = lambda / (lambda + prod_{b in di\a} (lambda / q_b - lambda))
    for (int e = 0; e < idx.n_edges; ++e) {
        const int begin = idx.edge_offset[e], end = idx.edge_offset[e + 1];
        for (int ln = begin; ln < end; ++ln) {
            double prod = 1.0;
            bool huge = false;
            for (int other = begin; other < end; ++other) {
                if (other == ln) continue;
                const double qb = state.q[other];
                if (qb == 0.0 || !std::isfinite(lambda / qb)) {
                    huge = true;  // factor diverges; l -> 0 in the limit
                    break;
                }
                prod *= lambda / qb - lambda;
            }
            if (huge || !std::isfinite(prod)) {
                next.l[ln] = 0.0;
                continue;
            }
            const double denom = lambda + prod;
            if (denom == 0.0)
                throw SingularUpdate("bp_sweep: vanishing l denominator at link " + link_name(idx, ln));
            const double value = lambda / denom;
            if (!std::isfinite(value))
                throw SingularUpdate("bp_sweep: non-finite l update at link " + link_name(idx, ln));
            next.l[ln] = value;
        }
    }

    if (damping != 0.0) {
        for (int ln = 0; ln < idx.n_links; ++ln) {
            next.q[ln] = (1.0 - damping) * next.q[ln] + damping * state.q[ln];
            next.l[ln] = (1.0 - damping) * next.l[ln] + damping * state.l[ln];
        }
    }
    return next;
}

FreeEnergyResult free_energy(const LinkIndex& idx, const CavityState& state) {
    FreeEnergyResult out;
    const double lambda = state.lambda;
    BetheFreeEnergy fe;
    fe.site_terms.resize(idx.n_sites);
    fe.edge_terms.resize(idx.n_edges);
    fe.link_terms.resize(idx.n_links);
    if (lambda == 0.0) {
        // Z = 1: only the empty configuration contributes.
        std::fill(fe.site_terms.begin(), fe.site_terms.end(), 0.0);
        std::fill(fe.edge_terms.begin(), fe.edge_terms.end(), 0.0);
        std::fill(fe.link_terms.begin(), fe.link_terms.end(), 0.0);
        out.ok = true;
        out.fe = std::move(fe);
        return out;
    }

    auto fail = [&](const std::string& what) {
        out.ok = false;
        out.breakdown = what;
        return out;
    };

    // F_a = log[prod_j (1-l_j) + sum_j l_j prod_{k != j} (1-l_k)]
    for (int a = 0; a < idx.n_sites; ++a) {
        const auto& links = idx.site_links[a];
        const int d = static_cast<int>(links.size());
        std::vector<double> prefix(d + 1, 1.0), suffix(d + 1, 1.0);
        for (int j = 0; j < d; ++j) prefix[j + 1] = prefix[j] * (1.0 - state.l[links[j]]);
        for (int j = d - 1; j >= 0; --j) suffix[j] = suffix[j + 1] * (1.0 - state.l[links[j]]);
        double arg = prefix[d];
        for (int j = 0; j < d; ++j) arg += state.l[links[j]] * prefix[j] * suffix[j + 1];
        if (!(arg > 0.0))
            return fail("nonpositive site free-energy argument at site " + std::to_string(a));
        fe.site_terms[a] = std::log(arg);
    }

    // F_i = log[prod_b (1-q_b) + lambda prod_b (q_b / lambda)]
    for (int e = 0; e < idx.n_edges; ++e) {
        double empty = 1.0, occupied = lambda;
        for (int ln = idx.edge_offset[e]; ln < idx.edge_offset[e + 1]; ++ln) {
            empty *= 1.0 - state.q[ln];
            occupied *= state.q[ln] / lambda;
        }
        const double arg = empty + occupied;
        if (!(arg > 0.0))
            return fail("nonpositive edge free-energy argument at hyperedge " + std::to_string(e));
        fe.edge_terms[e] = std::log(arg);
    }

    // F_ai = log[(1-l)(1-q) + l q / lambda]
    for (int ln = 0; ln < idx.n_links; ++ln) {
        const double arg = (1.0 - state.l[ln]) * (1.0 - state.q[ln]) + state.l[ln] * state.q[ln] / lambda;
        if (!(arg > 0.0))
            return fail("nonpositive link free-energy argument at link " + link_name(idx, ln));
        fe.link_terms[ln] = std::log(arg);
    }

    double total = 0.0;
    for (double v : fe.site_terms) total += v;
    for (double v : fe.edge_terms) total += v;
    for (double v : fe.link_terms) total -= v;
    fe.total = total;
    fe.density = (idx.n_sites > 0) ? total / idx.n_sites : 0.0;
    out.ok = true;
    out.fe = std::move(fe);
    return out;
}

double occupation_density(const LinkIndex& idx, const CavityState& state) {
    const double lambda = state.lambda;
    if (lambda == 0.0 || idx.n_sites == 0) return 0.0;
    double total = 0.0;
    for (int e = 0; e < idx.n_edges; ++e) {
        double empty = 1.0, occupied = lambda;
        for (int ln = idx.edge_offset[e]; ln < idx.edge_offset[e + 1]; ++ln) {
            empty *= 1.0 - state.q[ln];
            occupied *= state.q[ln] / lambda;
        }
        total += occupied / (empty + occupied);
    }
    return total / idx.n_sites;
}

namespace {

struct ConvergeResult {
    bool converged = false;
    CavityState state;
    long iterations = 0;
    double residual = 0;
};

ConvergeResult converge_at(const LinkIndex& idx, CavityState state, double lambda,
                           const BpSchedule& schedule) {
    state.lambda = lambda;
    const double damping = (lambda < 0.0) ? schedule.damping_negative : schedule.damping_positive;
    ConvergeResult res;
    for (int iter = 0; iter < schedule.max_iterations; ++iter) {
        CavityState raw = bp_sweep(idx, state, 0.0);
        double residual = 0.0;
        for (int ln = 0; ln < idx.n_links; ++ln) {
            residual = std::max(residual, std::abs(raw.q[ln] - state.q[ln]));
            residual = std::max(residual, std::abs(raw.l[ln] - state.l[ln]));
        }
        if (damping != 0.0) {
            for (int ln = 0; ln < idx.n_links; ++ln) {
                raw.q[ln] = (1.0 - damping) * raw.q[ln] + damping * state.q[ln];
                raw.l[ln] = (1.0 - damping) * raw.l[ln] + damping * state.l[ln];
            }
        }
        state = std::move(raw);
        ++res.iterations;
        if (residual < schedule.tol) {
            res.converged = true;
            res.residual = residual;
            res.state = std::move(state);
            return res;
        }
        res.residual = residual;
    }
    res.state = std::move(state);
    return res;
}

}  // namespace

BpOutcome bp_solve(const InteractionHypergraph& h, double lambda_target, const BpSchedule& schedule) {
    const LinkIndex idx(h);
    BpOutcome out;
    out.state = zero_state(idx, 0.0);
    out.lambda_reached = 0.0;
    out.step_resolution = schedule.min_step;
    if (lambda_target == 0.0) return out;

    const double direction = (lambda_target > 0.0) ? 1.0 : -1.0;
    double current = 0.0;
    double step = std::min(schedule.initial_step, std::abs(lambda_target));
    CavityState good = out.state;

    while (current != lambda_target) {
        double next = current + direction * step;
        if ((lambda_target - next) * direction < 0.0) next = lambda_target;
        bool ok = false;
        std::string kind, detail;
        ConvergeResult res;
        try {
            res = converge_at(idx, good, next, schedule);
            out.total_iterations += res.iterations;
            if (!res.converged) {
                kind = "non_convergence";
                detail = "no fixed point within iteration cap at lambda = " + std::to_string(next);
            } else {
                auto feval = free_energy(idx, res.state);
                if (!feval.ok) {
                    kind = "nonpositive_log_argument";
                    detail = feval.breakdown + " at lambda = " + std::to_string(next);
                } else {
                    ok = true;
                }
            }
        } catch (const SingularUpdate& e) {
            kind = "singular_update";
            detail = e.what();
        }
        if (ok) {
            good = std::move(res.state);
            current = next;
            out.residual = res.residual;
            continue;
        }
        step /= 2.0;
        if (step < schedule.min_step) {
            out.status = BpOutcome::Status::breakdown;
            out.state = std::move(good);
            out.lambda_reached = current;
            out.breakdown_kind = kind;
            out.detail = detail;
            return out;
        }
    }
    out.status = BpOutcome::Status::converged;
    out.state = std::move(good);
    out.lambda_reached = lambda_target;
    return out;
}

ChainSolution chain_uniform_solution(double lambda) {
    if (lambda < -0.25)
        throw std::domain_error("chain_uniform_solution: lambda < -1/4, messages are complex");
    ChainSolution sol;
    if (lambda == 0.0) return sol;
    const double s = std::sqrt(1.0 + 4.0 * lambda);
    // 1 + (1 - s) / (2 lambda) rewritten as (s - 1) / (s + 1), which is
    // stable as lambda -> 0.
    sol.q = sol.l = (s - 1.0) / (s + 1.0);
    sol.f = std::log((1.0 + s) / 2.0);
    return sol;
}

double regular_tree_lambda_c(int t, int k) {
    if (t < 2) throw std::invalid_argument("regular_tree_lambda_c: t must be >= 2");
    if (k < 2) throw std::invalid_argument("regular_tree_lambda_c: k must be >= 2");
    if (k > 30) throw std::invalid_argument("regular_tree_lambda_c: k too large");
    double num = 1.0;
    for (int i = 0; i < k - 1; ++i) num *= k - 1;
    double den = 1.0;
    for (int i = 0; i < k; ++i) den *= k;
    return -num / (den * (t - 1));
}

TreeSolution regular_tree_solution(int t, int k, double lambda) {
    const double lambda_c = regular_tree_lambda_c(t, k);
    if (lambda < lambda_c)
        throw std::domain_error("regular_tree_solution: lambda below lambda_c = " +
                                std::to_string(lambda_c));
    if (t == 2 && k == 2) {
        // The (2,2)-tree is the chain; the chain closed form also covers
        // the critical point where the generic assembly degenerates.
        auto chain = chain_uniform_solution(lambda);
        TreeSolution sol;
        sol.q = chain.q;
        sol.l = chain.l;
        sol.x = (chain.q == 0.0) ? 1.0 : lambda * (1.0 - chain.q) / chain.q;
        if (lambda == -0.25) sol.x = 0.5;
        sol.f = chain.f;
        return sol;
    }

    TreeSolution sol;
    if (lambda == 0.0) {
        sol.x = 1.0;
        return sol;
    }
    const double z = lambda * (t - 1);
    const double x_c = static_cast<double>(k - 1) / k;
    auto g = [k](double x) {
        double p = 1.0;
        for (int i = 0; i < k - 1; ++i) p *= x;
        return p * (x - 1.0);
    };
    // g is monotone increasing on [x_c, inf); bracket and bisect.
    double lo = x_c, hi = std::max(2.0, 1.0 + std::abs(z));
    while (g(hi) < z) hi *= 2.0;
    for (int iter = 0; iter < 200; ++iter) {
        double mid = 0.5 * (lo + hi);
        if (g(mid) < z)
            lo = mid;
        else
            hi = mid;
        if (hi - lo < 1e-16 * std::max(1.0, std::abs(lo))) break;
    }
    const double x = 0.5 * (lo + hi);
    sol.x = x;
    sol.q = lambda / (x + lambda);
    sol.l = (x - 1.0) / (x + t - 2.0);

    const double q = sol.q, l = sol.l;
    double one_minus_l_pow = 1.0;  // (1-l)^(t-1)
    for (int i = 0; i < t - 1; ++i) one_minus_l_pow *= 1.0 - l;
    const double site_arg = one_minus_l_pow * (1.0 + (t - 1) * l);
    double empty = 1.0, occupied = lambda;
    for (int i = 0; i < k; ++i) {
        empty *= 1.0 - q;
        occupied *= q / lambda;
    }
    const double edge_arg = empty + occupied;
    const double link_arg = (1.0 - l) * (1.0 - q) + l * q / lambda;
    if (!(site_arg > 0.0) || !(edge_arg > 0.0) || !(link_arg > 0.0))
        throw std::domain_error("regular_tree_solution: free energy undefined at lambda = " +
                                std::to_string(lambda));
    sol.f = std::log(site_arg) + (static_cast<double>(t) / k) * std::log(edge_arg) -
            t * std::log(link_arg);
    return sol;
}

double tree_patch_breakdown_lambda(int t, int k, long depth, double resolution) {
    if (t < 2 || k < 2) throw std::invalid_argument("tree_patch_breakdown_lambda: t, k must be >= 2");
    if (depth < 1) throw std::invalid_argument("tree_patch_breakdown_lambda: depth must be >= 1");
    if (resolution <= 0) throw std::invalid_argument("tree_patch_breakdown_lambda: resolution must be > 0");
    auto survives = [&](double lambda) {
        const double z = lambda * (t - 1);
        double x = 1.0;  // leaf sites have degree 1
        for (long level = 0; level < depth; ++level) {
            double p = 1.0;
            for (int i = 0; i < k - 1; ++i) p *= x;
            x = 1.0 + z / p;
            if (!(x > 0.0) || !std::isfinite(x)) return false;
        }
        return true;
    };
    // Survival is monotone in lambda; bracket the threshold from the
    // infinite-tree value, which lower-bounds the finite-patch one.
    double lo = 2.0 * regular_tree_lambda_c(t, k);  // broken
    double hi = -resolution;                        // survives for any depth
    while (!survives(hi)) hi /= 2.0;
    if (survives(lo)) return lo;
    while (hi - lo > resolution) {
        double mid = 0.5 * (lo + hi);
        if (survives(mid))
            hi = mid;
        else
            lo = mid;
    }
    return hi;
}

namespace {

// Solve the 3x3 normal equations for y ~ c0 + c1 u + B u^phi at fixed
// lambda_c, u = lambda - lambda_c. Returns rms residual, or infinity if
// the system is numerically singular.
double linear_fit(std::span<const std::pair<double, double>> samples, double exponent, double lambda_c,
                  double out[3]) {
    long double ata[3][3] = {};
    long double aty[3] = {};
    for (const auto& [lam, y] : samples) {
        const long double u = lam - lambda_c;
        if (!(u > 0.0L)) return std::numeric_limits<double>::infinity();
        const long double row[3] = {1.0L, u, std::pow(u, static_cast<long double>(exponent))};
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j) ata[i][j] += row[i] * row[j];
            aty[i] += row[i] * y;
        }
    }
    // Gaussian elimination with partial pivoting.
    long double a[3][4];
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) a[i][j] = ata[i][j];
        a[i][3] = aty[i];
    }
    for (int col = 0; col < 3; ++col) {
        int piv = col;
        for (int r = col + 1; r < 3; ++r)
            if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
        if (a[piv][col] == 0.0L) return std::numeric_limits<double>::infinity();
        std::swap(a[piv], a[col]);
        for (int r = 0; r < 3; ++r) {
            if (r == col) continue;
            long double factor = a[r][col] / a[col][col];
            for (int j = col; j < 4; ++j) a[r][j] -= factor * a[col][j];
        }
    }
    for (int i = 0; i < 3; ++i) out[i] = static_cast<double>(a[i][3] / a[i][i]);
    long double ss = 0.0L;
    for (const auto& [lam, y] : samples) {
        const long double u = lam - lambda_c;
        const long double model =
            out[0] + out[1] * u + out[2] * std::pow(u, static_cast<long double>(exponent));
        ss += (y - model) * (y - model);
    }
    return static_cast<double>(std::sqrt(ss / samples.size()));
}

}  // namespace

SingularityFit fit_singularity(std::span<const std::pair<double, double>> samples, double exponent,
                               double lambda_c_guess) {
    if (samples.size() < 6)
        throw std::invalid_argument("fit_singularity: need at least 6 samples above lambda_c");
    double lambda_min = samples[0].first;
    for (const auto& [lam, y] : samples) lambda_min = std::min(lambda_min, lam);
    if (lambda_c_guess >= lambda_min)
        lambda_c_guess = lambda_min - 1e-3 * std::max(1.0, std::abs(lambda_min));

    const double gap = lambda_min - lambda_c_guess;
    double lo = lambda_c_guess - 20.0 * gap;
    double hi = lambda_min - 1e-12 * std::max(1.0, std::abs(lambda_min)) - 1e-300;

    double coeff[3];
    // Coarse scan, then golden-section refinement of the rms residual.
    double best = std::numeric_limits<double>::infinity(), best_lc = lambda_c_guess;
    const int grid = 400;
    for (int i = 0; i <= grid; ++i) {
        double lc = lo + (hi - lo) * i / grid;
        double r = linear_fit(samples, exponent, lc, coeff);
        if (r < best) {
            best = r;
            best_lc = lc;
        }
    }
    if (!std::isfinite(best)) throw std::runtime_error("fit_singularity: ill-conditioned fit");
    double span = (hi - lo) / grid;
    double a = std::max(lo, best_lc - span), b = std::min(hi, best_lc + span);
    const double golden = 0.61803398874989484820;
    double x1 = b - golden * (b - a), x2 = a + golden * (b - a);
    double f1 = linear_fit(samples, exponent, x1, coeff);
    double f2 = linear_fit(samples, exponent, x2, coeff);
    for (int iter = 0; iter < 200 && (b - a) > 1e-14 * std::max(1.0, std::abs(a)); ++iter) {
        if (f1 < f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - golden * (b - a);
            f1 = linear_fit(samples, exponent, x1, coeff);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + golden * (b - a);
            f2 = linear_fit(samples, exponent, x2, coeff);
        }
    }
    SingularityFit fit;
    fit.lambda_c = 0.5 * (a + b);
    fit.residual = linear_fit(samples, exponent, fit.lambda_c, coeff);
    if (!std::isfinite(fit.residual)) throw std::runtime_error("fit_singularity: ill-conditioned fit");
    fit.c0 = coeff[0];
    fit.c1 = coeff[1];
    fit.amplitude = coeff[2];
    return fit;
}

}  // namespace qshearer
