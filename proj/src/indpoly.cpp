#include "qshearer/indpoly.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <stdexcept>
#include <unordered_map>

namespace qshearer {

int IndependencePolynomial::n_vertices() const {
    if (coeffs.empty()) return 0;
    if (coeffs.size() == 1) return 0;
    return static_cast<int>(coeffs[1].get_si());
}

double IndependencePolynomial::evaluate(double x) const {
    double acc = 0.0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * x + it->get_d();
    return acc;
}

mpq_class IndependencePolynomial::evaluate_exact(const mpq_class& x) const {
    mpq_class acc = 0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * x + mpq_class(*it);
    return acc;
}

mpz_class IndependencePolynomial::total_count() const {
    mpz_class total = 0;
    for (const auto& c : coeffs) total += c;
    return total;
}

std::vector<std::string> IndependencePolynomial::coeff_strings() const {
    std::vector<std::string> out;
    out.reserve(coeffs.size());
    for (const auto& c : coeffs) out.push_back(c.get_str());
    return out;
}

IndependencePolynomial IndependencePolynomial::from_coeff_strings(const std::vector<std::string>& s) {
    IndependencePolynomial p;
    for (const auto& str : s) p.coeffs.emplace_back(str);
    return p;
}

IndependencePolynomial operator*(const IndependencePolynomial& a, const IndependencePolynomial& b) {
    IndependencePolynomial out;
    if (a.coeffs.empty() || b.coeffs.empty()) return out;
    out.coeffs.assign(a.coeffs.size() + b.coeffs.size() - 1, mpz_class(0));
    for (std::size_t i = 0; i < a.coeffs.size(); ++i)
        for (std::size_t j = 0; j < b.coeffs.size(); ++j) out.coeffs[i + j] += a.coeffs[i] * b.coeffs[j];
    return out;
}

namespace {

using Poly = std::vector<mpz_class>;  // coeffs by ascending power

void poly_add(Poly& a, const Poly& b) {
    if (b.size() > a.size()) a.resize(b.size(), mpz_class(0));
    for (std::size_t i = 0; i < b.size(); ++i) a[i] += b[i];
}

// a += x * b
void poly_add_shifted(Poly& a, const Poly& b) {
    if (b.size() + 1 > a.size()) a.resize(b.size() + 1, mpz_class(0));
    for (std::size_t i = 0; i < b.size(); ++i) a[i + 1] += b[i];
}

Poly poly_mul(const Poly& a, const Poly& b) {
    Poly out(a.size() + b.size() - 1, mpz_class(0));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    return out;
}

// Exact independent-set counting on a <=64 vertex graph held as
// neighborhood bitmasks. Recursion: I(G) = I(G - v) + x * I(G - N[v]),
// pivoting on a maximum-degree vertex, factorizing over connected
// components, memoizing per component vertex set.
class IndpolyEngine {
public:
    explicit IndpolyEngine(const DependencyGraph& g) : n_(g.n_vertices) {
        nbr_.assign(n_, 0);
        for (int v = 0; v < n_; ++v)
            for (int w : g.adj[v]) nbr_[v] |= (std::uint64_t{1} << w);
    }

    // Direct construction from neighborhood masks (used by the matching
    // recursion, which never materializes the line graph).
    IndpolyEngine(int n, std::vector<std::uint64_t> nbr) : n_(n), nbr_(std::move(nbr)) {}

    Poly run() {
        const std::uint64_t all = (n_ == 64) ? ~std::uint64_t{0} : ((std::uint64_t{1} << n_) - 1);
        return solve(all);
    }

private:
    Poly solve(std::uint64_t mask) {
        if (mask == 0) return Poly{mpz_class(1)};
        // Split into connected components; multiply their polynomials.
        Poly result{mpz_class(1)};
        std::uint64_t rest = mask;
        while (rest) {
            std::uint64_t comp = component_of(std::countr_zero(rest), rest);
            rest &= ~comp;
            Poly part = solve_component(comp);
            result = (result.size() == 1 && result[0] == 1) ? std::move(part) : poly_mul(result, part);
        }
        return result;
    }

    Poly solve_component(std::uint64_t comp) {
        if (auto it = memo_.find(comp); it != memo_.end()) return it->second;
        const int count = std::popcount(comp);
        Poly result;
        if (count == 1) {
            result = Poly{mpz_class(1), mpz_class(1)};
        } else {
            const int v = pivot(comp);
            const std::uint64_t bit = std::uint64_t{1} << v;
            result = solve(comp & ~bit);                   // sets avoiding v
            Poly with_v = solve(comp & ~(nbr_[v] | bit));  // sets containing v
            poly_add_shifted(result, with_v);
        }
        memo_.emplace(comp, result);
        return result;
    }

    int pivot(std::uint64_t comp) const {
        int best = -1, best_deg = -1;
        std::uint64_t rest = comp;
        while (rest) {
            int v = std::countr_zero(rest);
            rest &= rest - 1;
            int deg = std::popcount(nbr_[v] & comp);
            if (deg > best_deg) {
                best_deg = deg;
                best = v;
            }
        }
        return best;
    }

    std::uint64_t component_of(int start, std::uint64_t mask) const {
        std::uint64_t comp = std::uint64_t{1} << start;
        std::uint64_t frontier = comp;
        while (frontier) {
            std::uint64_t next = 0;
            std::uint64_t rest = frontier;
            while (rest) {
                int v = std::countr_zero(rest);
                rest &= rest - 1;
                next |= nbr_[v] & mask & ~comp;
            }
            comp |= next;
            frontier = next;
        }
        return comp;
    }

    int n_;
    std::vector<std::uint64_t> nbr_;
    std::unordered_map<std::uint64_t, Poly> memo_;
};

void check_budget(int n, const IndpolyOptions& opts, const char* what) {
    if (opts.vertex_budget < 1 || opts.vertex_budget > 64)
        throw std::invalid_argument("indpoly: vertex budget must be in [1, 64]");
    if (n > opts.vertex_budget)
        throw std::invalid_argument(std::string(what) + ": instance too large for exact computation (" +
                                    std::to_string(n) + " > budget " + std::to_string(opts.vertex_budget) +
                                    "); use the cavity solver instead");
}

}  // namespace

IndependencePolynomial independence_polynomial(const DependencyGraph& g, const IndpolyOptions& opts) {
    check_budget(g.n_vertices, opts, "independence_polynomial");
    IndpolyEngine engine(g);
    IndependencePolynomial out;
    out.coeffs = engine.run();
    return out;
}

IndependencePolynomial matching_polynomial(const InteractionHypergraph& h, const IndpolyOptions& opts) {
    check_budget(h.n_edges(), opts, "matching_polynomial");
    const int m = h.n_edges();
    // Conflict masks straight from the supports: edges conflict iff their
    // qudit sets intersect.
    std::vector<std::uint64_t> conflict(m, 0);
    auto inc = h.incidence();
    for (const auto& edges_at_qudit : inc)
        for (std::size_t x = 0; x < edges_at_qudit.size(); ++x)
            for (std::size_t y = x + 1; y < edges_at_qudit.size(); ++y) {
                conflict[edges_at_qudit[x]] |= (std::uint64_t{1} << edges_at_qudit[y]);
                conflict[edges_at_qudit[y]] |= (std::uint64_t{1} << edges_at_qudit[x]);
            }
    IndpolyEngine engine(m, std::move(conflict));
    IndependencePolynomial out;
    out.coeffs = engine.run();
    return out;
}

namespace {

// Signed polynomial J(p) = I(G, -p), coefficients b_s = (-1)^s c_s.
// All root work happens on J over exact integers.
Poly signed_poly(const IndependencePolynomial& poly) {
    Poly b(poly.coeffs.begin(), poly.coeffs.end());
    for (std::size_t s = 1; s < b.size(); s += 2) b[s] = -b[s];
    while (b.size() > 1 && b.back() == 0) b.pop_back();
    return b;
}

Poly poly_derivative(const Poly& a) {
    if (a.size() <= 1) return Poly{mpz_class(0)};
    Poly d(a.size() - 1);
    for (std::size_t i = 1; i < a.size(); ++i) d[i - 1] = a[i] * static_cast<long>(i);
    return d;
}

mpz_class poly_content(const Poly& a) {
    mpz_class g = 0;
    for (const auto& c : a) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
    return g == 0 ? mpz_class(1) : g;
}

Poly poly_primitive(Poly a) {
    mpz_class g = poly_content(a);
    if (g != 1)
        for (auto& c : a) mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), g.get_mpz_t());
    if (!a.empty() && a.back() < 0)
        for (auto& c : a) c = -c;
    return a;
}

bool poly_is_zero(const Poly& a) {
    for (const auto& c : a)
        if (c != 0) return false;
    return true;
}

// Pseudo-remainder of a by b (lc(b)^(deg a - deg b + 1) * a mod b).
Poly poly_pseudo_rem(Poly a, const Poly& b) {
    const int db = static_cast<int>(b.size()) - 1;
    const mpz_class lead = b.back();
    while (static_cast<int>(a.size()) - 1 >= db && !poly_is_zero(a)) {
        const int da = static_cast<int>(a.size()) - 1;
        const mpz_class factor = a.back();
        for (auto& c : a) c *= lead;
        for (int i = 0; i <= db; ++i) a[da - db + i] -= factor * b[i];
        while (a.size() > 1 && a.back() == 0) a.pop_back();
        if (a.size() == 1 && a[0] == 0) break;
    }
    return a;
}

// Primitive-PRS gcd over Z.
Poly poly_gcd(Poly a, Poly b) {
    a = poly_primitive(std::move(a));
    b = poly_primitive(std::move(b));
    if (poly_is_zero(a)) return b;
    if (poly_is_zero(b)) return a;
    if (a.size() < b.size()) std::swap(a, b);
    while (!poly_is_zero(b)) {
        Poly r = poly_pseudo_rem(a, b);
        a = std::move(b);
        b = poly_primitive(std::move(r));
    }
    return a;
}

// Exact division, asserting zero remainder (valid for primitive parts by
// Gauss's lemma).
Poly poly_div_exact(const Poly& a, const Poly& b) {
    Poly rem = a;
    const int db = static_cast<int>(b.size()) - 1;
    Poly quot(a.size() - b.size() + 1, mpz_class(0));
    for (int i = static_cast<int>(rem.size()) - 1; i >= db; --i) {
        if (rem[i] == 0) continue;
        mpz_class q;
        mpz_divexact(q.get_mpz_t(), rem[i].get_mpz_t(), b.back().get_mpz_t());
        quot[i - db] = q;
        for (int j = 0; j <= db; ++j) rem[i - db + j] -= q * b[j];
    }
    if (!poly_is_zero(rem)) throw std::logic_error("poly_div_exact: nonzero remainder");
    return quot;
}

Poly square_free_part(const Poly& a) {
    Poly p = poly_primitive(a);
    if (p.size() <= 2) return p;
    Poly g = poly_gcd(p, poly_derivative(p));
    if (g.size() <= 1) return p;  // already square-free
    return poly_primitive(poly_div_exact(p, g));
}

int sign_at(const Poly& b, const mpq_class& x) {
    mpq_class acc = 0;
    for (auto it = b.rbegin(); it != b.rend(); ++it) acc = acc * x + mpq_class(*it);
    return sgn(acc);
}

struct RootBracket {
    mpq_class lo, hi;  // J > 0 at lo, J < 0 at hi (or lo == hi == exact root)
    bool exact = false;
};

// Bracket the first positive root of the square-free signed polynomial:
// scan in steps of 2^-10 from p = 0 (where J = 1), then bisect with exact
// rational sign evaluation until the bracket is relatively tight.
RootBracket first_root_bracket(const Poly& sf, double rel_width) {
    const long scan_den = 1L << 10;
    RootBracket br;
    bool bracketed = false;
    for (long j = 1; j <= 64L * scan_den; ++j) {
        mpq_class x(j, scan_den);
        x.canonicalize();
        int s = sign_at(sf, x);
        if (s == 0) {
            br.lo = br.hi = x;
            br.exact = true;
            return br;
        }
        if (s < 0) {
            br.lo = mpq_class(j - 1, scan_den);
            br.lo.canonicalize();
            br.hi = x;
            bracketed = true;
            break;
        }
    }
    if (!bracketed) throw std::logic_error("first_negative_zero: no sign change found (unexpected)");

    const mpq_class rel(rel_width);
    for (int iter = 0; iter < 96; ++iter) {
        if (br.hi - br.lo < br.hi * rel) break;
        mpq_class mid = (br.lo + br.hi) / 2;
        int s = sign_at(sf, mid);
        if (s == 0) {
            br.lo = br.hi = mid;
            br.exact = true;
            return br;
        }
        (s > 0 ? br.lo : br.hi) = mid;
    }
    return br;
}

}  // namespace

double first_negative_zero(const IndependencePolynomial& poly) {
    if (poly.coeffs.size() <= 1)
        throw std::invalid_argument("first_negative_zero: polynomial of an empty graph has no zero");
    const Poly sf = square_free_part(signed_poly(poly));
    RootBracket br = first_root_bracket(sf, 1e-13);
    if (br.exact) return br.lo.get_d();
    mpq_class mid = (br.lo + br.hi) / 2;
    return mid.get_d();
}

ShearerCertificate shearer_certify(const DependencyGraph& g, double p, int qudit_dim, int n_qudits,
                                   const IndpolyOptions& opts) {
    if (p < 0.0 || p > 1.0) throw std::invalid_argument("shearer_certify: p must lie in [0, 1]");
    if (qudit_dim < 2) throw std::invalid_argument("shearer_certify: qudit dimension must be >= 2");
    if (n_qudits < 1) throw std::invalid_argument("shearer_certify: n_qudits must be >= 1");
    if (g.n_vertices < 1) throw std::invalid_argument("shearer_certify: graph has no vertices");
    const auto poly = independence_polynomial(g, opts);

    ShearerCertificate cert;
    cert.p = p;
    cert.p_c = first_negative_zero(poly);

    // Exact decision. p is a machine double, hence an exact rational;
    // certified iff I(G,-p') > 0 on all of [0, p], i.e. iff p lies
    // strictly below the first root. I(G,-p) <= 0 settles it at once;
    // otherwise the root bracket is refined until p falls outside it.
    const mpq_class p_exact(p);
    const mpq_class value = poly.at_negative_fugacity(p_exact);
    bool certified = false;
    if (value > 0) {
        const Poly sf = square_free_part(signed_poly(poly));
        RootBracket br = first_root_bracket(sf, 1e-13);
        for (int iter = 0; iter < 4096 && !br.exact && p_exact >= br.lo && p_exact <= br.hi; ++iter) {
            mpq_class mid = (br.lo + br.hi) / 2;
            int s = sign_at(sf, mid);
            if (s == 0) {
                br.lo = br.hi = mid;
                br.exact = true;
                break;
            }
            (s > 0 ? br.lo : br.hi) = mid;
        }
        certified = br.exact ? (p_exact < br.lo) : (p_exact < br.hi && p_exact <= br.lo);
    }
    cert.certified = certified;
    if (certified) {
        cert.lower_bound = value.get_d();
        mpz_class scale;
        mpz_ui_pow_ui(scale.get_mpz_t(), static_cast<unsigned long>(qudit_dim),
                      static_cast<unsigned long>(n_qudits));
        mpq_class dim_bound = value * mpq_class(scale);
        cert.dim_lower_bound = dim_bound.get_d();
        cert.log_dim_lower_bound =
            n_qudits * std::log(static_cast<double>(qudit_dim)) + std::log(cert.lower_bound);
    }
    return cert;
}

}  // namespace qshearer
