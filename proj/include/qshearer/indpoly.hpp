#pragma once

#include <string>
#include <vector>

#include <gmpxx.h>

#include "qshearer/hypergraph.hpp"

namespace qshearer {

// Exact independence polynomial: coeffs[s] counts the independent sets of
// size s. Doubles as the hard-core partition function Z(G, x).
struct IndependencePolynomial {
    std::vector<mpz_class> coeffs;

    int degree() const { return static_cast<int>(coeffs.size()) - 1; }
    int n_vertices() const;  // c_1

    double evaluate(double x) const;                        // Horner in double
    mpq_class evaluate_exact(const mpq_class& x) const;     // exact rational Horner
    mpq_class at_negative_fugacity(const mpq_class& p) const { return evaluate_exact(mpq_class(-p)); }

    // Total number of independent sets (evaluation at 1).
    mpz_class total_count() const;

    std::vector<std::string> coeff_strings() const;  // decimal, JSON-safe
    static IndependencePolynomial from_coeff_strings(const std::vector<std::string>& s);

    bool operator==(const IndependencePolynomial&) const = default;
};

IndependencePolynomial operator*(const IndependencePolynomial& a, const IndependencePolynomial& b);

struct IndpolyOptions {
    // Exact computation is exponential in the worst case; graphs beyond
    // the budget are rejected (callers should switch to the cavity
    // solver). Capped at 64 by the subgraph encoding.
    int vertex_budget = 64;
};

IndependencePolynomial independence_polynomial(const DependencyGraph& g, const IndpolyOptions& opts = {});

// Counts sets of pairwise qudit-disjoint hyperedges by size via a
// recursion on the hypergraph itself. Coefficient-identical to the
// independence polynomial of the line graph, which the tests cross-check.
IndependencePolynomial matching_polynomial(const InteractionHypergraph& h, const IndpolyOptions& opts = {});

// Smallest p > 0 with I(G, -p) = 0, refined to ~1e-12 relative accuracy.
// Sign scanning runs on the square-free part of I(G, -p) so that
// even-multiplicity first zeros (e.g. duplicated disjoint components) are
// still detected.
double first_negative_zero(const IndependencePolynomial& poly);

struct ShearerCertificate {
    double p = 0.0;
    double p_c = 0.0;
    bool certified = false;
    double lower_bound = 0.0;          // I(G,-p) = Z(G,-p) when certified
    double dim_lower_bound = 0.0;      // q^N * I(G,-p); may overflow to inf
    double log_dim_lower_bound = 0.0;  // N log q + log I(G,-p), overflow-safe
};

// Quantum Shearer criterion: certified iff I(G,-p') > 0 on the whole
// closed interval [0, p], i.e. iff p < p_c strictly (I vanishes at p_c,
// the bound would be vacuous there). Decided in exact arithmetic.
ShearerCertificate shearer_certify(const DependencyGraph& g, double p, int qudit_dim, int n_qudits,
                                   const IndpolyOptions& opts = {});

}  // namespace qshearer
