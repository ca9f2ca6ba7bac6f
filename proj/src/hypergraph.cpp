#include "qshearer/hypergraph.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>
#include <utility>

#include "qshearer/rng.hpp"

namespace qshearer {

InteractionHypergraph InteractionHypergraph::create(int n_qudits, std::vector<std::vector<int>> edges) {
    if (n_qudits < 0) throw std::invalid_argument("hypergraph: n_qudits must be >= 0");
    for (std::size_t i = 0; i < edges.size(); ++i) {
        auto& e = edges[i];
        if (e.empty())
            throw std::invalid_argument("hypergraph: edges[" + std::to_string(i) + "] is empty");
        std::sort(e.begin(), e.end());
        for (std::size_t j = 0; j < e.size(); ++j) {
            if (e[j] < 0 || e[j] >= n_qudits)
                throw std::invalid_argument("hypergraph: edges[" + std::to_string(i) + "][" +
                                            std::to_string(j) + "]: qudit index " + std::to_string(e[j]) +
                                            " out of range [0," + std::to_string(n_qudits) + ")");
            if (j > 0 && e[j] == e[j - 1])
                throw std::invalid_argument("hypergraph: edges[" + std::to_string(i) +
                                            "]: repeated qudit index " + std::to_string(e[j]));
        }
    }
    InteractionHypergraph h;
    h.n_qudits = n_qudits;
    h.edges = std::move(edges);
    return h;
}

double InteractionHypergraph::density() const {
    if (n_qudits == 0) throw std::domain_error("hypergraph: density undefined for zero qudits");
    return static_cast<double>(edges.size()) / n_qudits;
}

std::vector<int> InteractionHypergraph::qudit_degrees() const {
    std::vector<int> deg(n_qudits, 0);
    for (const auto& e : edges)
        for (int a : e) ++deg[a];
    return deg;
}

std::vector<std::vector<int>> InteractionHypergraph::incidence() const {
    std::vector<std::vector<int>> inc(n_qudits);
    for (int i = 0; i < n_edges(); ++i)
        for (int a : edges[i]) inc[a].push_back(i);
    return inc;
}

DependencyGraph DependencyGraph::from_adjacency(int n_vertices, std::vector<std::pair<int, int>> edge_list) {
    DependencyGraph g;
    g.n_vertices = n_vertices;
    g.adj.assign(n_vertices, {});
    for (auto [i, j] : edge_list) {
        if (i < 0 || i >= n_vertices || j < 0 || j >= n_vertices || i == j)
            throw std::invalid_argument("dependency graph: bad edge");
        g.adj[i].push_back(j);
        g.adj[j].push_back(i);
    }
    for (auto& nbrs : g.adj) {
        std::sort(nbrs.begin(), nbrs.end());
        nbrs.erase(std::unique(nbrs.begin(), nbrs.end()), nbrs.end());
    }
    return g;
}

bool DependencyGraph::adjacent(int i, int j) const {
    const auto& nbrs = adj[i];
    return std::binary_search(nbrs.begin(), nbrs.end(), j);
}

int DependencyGraph::n_edges() const {
    std::size_t total = 0;
    for (const auto& nbrs : adj) total += nbrs.size();
    return static_cast<int>(total / 2);
}

DependencyGraph DependencyGraph::induced(const std::vector<int>& keep) const {
    std::vector<int> newid(n_vertices, -1);
    std::vector<int> sorted_keep = keep;
    std::sort(sorted_keep.begin(), sorted_keep.end());
    for (std::size_t i = 0; i < sorted_keep.size(); ++i) {
        int v = sorted_keep[i];
        if (v < 0 || v >= n_vertices) throw std::invalid_argument("induced: vertex out of range");
        if (newid[v] != -1) throw std::invalid_argument("induced: repeated vertex");
        newid[v] = static_cast<int>(i);
    }
    DependencyGraph g;
    g.n_vertices = static_cast<int>(sorted_keep.size());
    g.adj.assign(g.n_vertices, {});
    for (int v : sorted_keep)
        for (int w : adj[v])
            if (newid[w] != -1 && v < w) {
                g.adj[newid[v]].push_back(newid[w]);
                g.adj[newid[w]].push_back(newid[v]);
            }
    for (auto& nbrs : g.adj) std::sort(nbrs.begin(), nbrs.end());
    return g;
}

DependencyGraph build_dependency_graph(const InteractionHypergraph& h) {
    const int m = h.n_edges();
    DependencyGraph g;
    g.n_vertices = m;
    g.adj.assign(m, {});
    auto inc = h.incidence();
    std::vector<std::set<int>> nbrs(m);
    for (const auto& edges_at_qudit : inc) {
        for (std::size_t x = 0; x < edges_at_qudit.size(); ++x)
            for (std::size_t y = x + 1; y < edges_at_qudit.size(); ++y) {
                nbrs[edges_at_qudit[x]].insert(edges_at_qudit[y]);
                nbrs[edges_at_qudit[y]].insert(edges_at_qudit[x]);
            }
    }
    for (int i = 0; i < m; ++i) g.adj[i].assign(nbrs[i].begin(), nbrs[i].end());
    return g;
}

DegreeStats degree_stats(const InteractionHypergraph& h, int cutoff) {
    DegreeStats stats;
    stats.cutoff = cutoff;
    auto deg = h.qudit_degrees();
    long long sum = 0;
    int above = 0;
    for (int d : deg) {
        ++stats.histogram[d];
        sum += d;
        if (d > cutoff) ++above;
    }
    if (!deg.empty()) {
        stats.mean = static_cast<double>(sum) / deg.size();
        stats.fraction_above_cutoff = static_cast<double>(above) / deg.size();
    }
    return stats;
}

void EnsembleSpec::validate() const {
    switch (kind) {
        case GraphKind::chain:
            if (length < 2) throw std::invalid_argument("chain: length must be >= 2");
            break;
        case GraphKind::cycle:
            if (length < 3) throw std::invalid_argument("cycle: length must be >= 3");
            break;
        case GraphKind::star:
            if (branches < 1) throw std::invalid_argument("star: branches must be >= 1");
            if (locality < 1) throw std::invalid_argument("star: locality must be >= 1");
            break;
        case GraphKind::regular_tree_patch:
            if (degree < 2) throw std::invalid_argument("regular_tree_patch: degree t must be >= 2");
            if (locality < 1) throw std::invalid_argument("regular_tree_patch: locality k must be >= 1");
            if (depth < 1) throw std::invalid_argument("regular_tree_patch: depth must be >= 1");
            break;
        case GraphKind::square_lattice:
        case GraphKind::triangular_lattice:
        case GraphKind::hexagonal_lattice:
        case GraphKind::checkerboard:
        case GraphKind::cubic_lattice:
            if (size < 1) throw std::invalid_argument("lattice: size must be >= 1");
            break;
        case GraphKind::er_random:
            if (length < 1) throw std::invalid_argument("er_random: length (N) must be >= 1");
            if (locality < 1 || locality > length)
                throw std::invalid_argument("er_random: locality k must be in [1, N]");
            if (alpha <= 0.0) throw std::invalid_argument("er_random: alpha must be > 0");
            break;
    }
}

namespace {

InteractionHypergraph make_chain(int n) {
    std::vector<std::vector<int>> edges;
    for (int a = 0; a + 1 < n; ++a) edges.push_back({a, a + 1});
    return InteractionHypergraph::create(n, std::move(edges));
}

InteractionHypergraph make_cycle(int n) {
    std::vector<std::vector<int>> edges;
    for (int a = 0; a + 1 < n; ++a) edges.push_back({a, a + 1});
    edges.push_back({0, n - 1});
    return InteractionHypergraph::create(n, std::move(edges));
}

InteractionHypergraph make_star(int z, int k) {
    std::vector<std::vector<int>> edges;
    int next = 1;
    for (int i = 0; i < z; ++i) {
        std::vector<int> e = {0};
        for (int j = 1; j < k; ++j) e.push_back(next++);
        edges.push_back(std::move(e));
    }
    return InteractionHypergraph::create(next, std::move(edges));
}

// Finite truncation of the (t,k)-biregular tree: the root site carries t
// hyperedges; every other non-leaf site carries t-1 child hyperedges; the
// sites added by the final generation remain leaves (degree 1).
InteractionHypergraph make_tree_patch(int t, int k, int depth) {
    std::vector<std::vector<int>> edges;
    int next_site = 1;
    std::vector<int> frontier = {0};  // sites that still spawn child edges
    for (int gen = 0; gen < depth; ++gen) {
        std::vector<int> next_frontier;
        for (int site : frontier) {
            const int child_edges = (site == 0) ? t : t - 1;
            for (int c = 0; c < child_edges; ++c) {
                std::vector<int> e = {site};
                for (int j = 1; j < k; ++j) {
                    e.push_back(next_site);
                    if (gen + 1 < depth) next_frontier.push_back(next_site);
                    ++next_site;
                }
                edges.push_back(std::move(e));
            }
        }
        frontier = std::move(next_frontier);
    }
    return InteractionHypergraph::create(next_site, std::move(edges));
}

// Shared builder for lattice patches. `sites` lists the projector
// positions (one per lattice vertex) and `site_edges` maps each to the
// ids of its incident lattice edges, including edges that leave the
// patch. Every projector then has full lattice coordination and the
// dependency graph is the patch of the lattice induced on `sites`.
InteractionHypergraph from_vertex_edge_incidence(const std::vector<std::vector<std::int64_t>>& site_edges) {
    std::map<std::int64_t, int> qudit_of_edge;
    std::vector<std::vector<int>> edges;
    for (const auto& incident : site_edges) {
        std::vector<int> e;
        for (std::int64_t key : incident) {
            auto [it, inserted] = qudit_of_edge.try_emplace(key, static_cast<int>(qudit_of_edge.size()));
            e.push_back(it->second);
        }
        edges.push_back(std::move(e));
    }
    return InteractionHypergraph::create(static_cast<int>(qudit_of_edge.size()), std::move(edges));
}

std::int64_t pack(std::int64_t a, std::int64_t b) { return a * 1000003 + b; }

// Undirected lattice edge key: canonical order of the two endpoint keys,
// tagged by direction class to keep parallel families distinct.
std::int64_t edge_key(std::int64_t u, std::int64_t v) {
    std::int64_t lo = std::min(u, v), hi = std::max(u, v);
    return lo * 2000003 + hi;
}

InteractionHypergraph make_square(int m, QuditPlacement placement) {
    auto vid = [m](int i, int j) { return static_cast<std::int64_t>(i) * (m + 2) + j; };
    if (placement == QuditPlacement::edges_as_qudits) {
        // Projectors on the m*m vertices, qudits on all incident lattice
        // edges (dangling boundary edges included so every projector has
        // locality 4).
        std::vector<std::vector<std::int64_t>> site_edges;
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) {
                std::int64_t v = vid(i + 1, j + 1);
                site_edges.push_back({edge_key(v, vid(i, j + 1)), edge_key(v, vid(i + 2, j + 1)),
                                      edge_key(v, vid(i + 1, j)), edge_key(v, vid(i + 1, j + 2))});
            }
        return from_vertex_edge_incidence(site_edges);
    }
    // Qudits on the m*m vertices, projectors on the internal lattice edges.
    auto q = [m](int i, int j) { return i * m + j; };
    std::vector<std::vector<int>> edges;
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            if (i + 1 < m) edges.push_back({q(i, j), q(i + 1, j)});
            if (j + 1 < m) edges.push_back({q(i, j), q(i, j + 1)});
        }
    return InteractionHypergraph::create(m * m, std::move(edges));
}

InteractionHypergraph make_triangular(int m, QuditPlacement placement) {
    // Axial coordinates: vertex (i,j) adjacent to (i+-1,j), (i,j+-1),
    // (i+1,j-1), (i-1,j+1); coordination 6.
    auto vid = [m](int i, int j) { return static_cast<std::int64_t>(i) * (m + 4) + j; };
    const int d[6][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}, {1, -1}, {-1, 1}};
    if (placement == QuditPlacement::edges_as_qudits) {
        std::vector<std::vector<std::int64_t>> site_edges;
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) {
                std::int64_t v = vid(i + 2, j + 2);
                std::vector<std::int64_t> incident;
                for (auto& dd : d) incident.push_back(edge_key(v, vid(i + 2 + dd[0], j + 2 + dd[1])));
                site_edges.push_back(std::move(incident));
            }
        return from_vertex_edge_incidence(site_edges);
    }
    auto q = [m](int i, int j) { return i * m + j; };
    std::vector<std::vector<int>> edges;
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            if (i + 1 < m) edges.push_back({q(i, j), q(i + 1, j)});
            if (j + 1 < m) edges.push_back({q(i, j), q(i, j + 1)});
            if (i + 1 < m && j > 0) edges.push_back({q(i, j), q(i + 1, j - 1)});
        }
    return InteractionHypergraph::create(m * m, std::move(edges));
}

InteractionHypergraph make_hexagonal(int m, QuditPlacement placement) {
    // Honeycomb with m*m unit cells, two sublattice sites per cell.
    // A(i,j) neighbors B(i,j), B(i-1,j), B(i,j-1); coordination 3.
    auto aid = [m](int i, int j) { return pack(2 * (static_cast<std::int64_t>(i) * (m + 2) + j), 0); };
    auto bid = [m](int i, int j) { return pack(2 * (static_cast<std::int64_t>(i) * (m + 2) + j) + 1, 0); };
    if (placement == QuditPlacement::edges_as_qudits) {
        std::vector<std::vector<std::int64_t>> site_edges;
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) {
                std::int64_t a = aid(i + 1, j + 1);
                site_edges.push_back({edge_key(a, bid(i + 1, j + 1)), edge_key(a, bid(i, j + 1)),
                                      edge_key(a, bid(i + 1, j))});
                std::int64_t b = bid(i + 1, j + 1);
                site_edges.push_back({edge_key(b, aid(i + 1, j + 1)), edge_key(b, aid(i + 2, j + 1)),
                                      edge_key(b, aid(i + 1, j + 2))});
            }
        return from_vertex_edge_incidence(site_edges);
    }
    // Qudits on the 2*m*m sites, projectors on internal lattice edges.
    auto qa = [m](int i, int j) { return 2 * (i * m + j); };
    auto qb = [m](int i, int j) { return 2 * (i * m + j) + 1; };
    std::vector<std::vector<int>> edges;
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            edges.push_back({qa(i, j), qb(i, j)});
            if (i > 0) edges.push_back({qa(i, j), qb(i - 1, j)});
            if (j > 0) edges.push_back({qa(i, j), qb(i, j - 1)});
        }
    return InteractionHypergraph::create(2 * m * m, std::move(edges));
}

// Checkerboard reading (see README): qudits on the black plaquettes of an
// alternately two-colored square plaquette board, projectors on the red
// plaquettes, each acting on its 4 edge-adjacent black plaquettes. Red
// plaquettes with base coordinates (i,j), i+j even, 0 <= i,j < size.
InteractionHypergraph make_checkerboard(int m) {
    std::vector<std::vector<std::int64_t>> site_edges;
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            if ((i + j) % 2 != 0) continue;
            // black neighbors of red (i,j): (i+-1, j), (i, j+-1); coordinates
            // shifted by +1 to stay nonnegative
            site_edges.push_back({pack(i + 2, j + 1), pack(i, j + 1), pack(i + 1, j + 2), pack(i + 1, j)});
        }
    return from_vertex_edge_incidence(site_edges);
}

InteractionHypergraph make_cubic(int m, QuditPlacement placement) {
    auto vid = [m](int i, int j, int l) {
        return (static_cast<std::int64_t>(i) * (m + 2) + j) * (m + 2) + l;
    };
    const int d[6][3] = {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};
    if (placement == QuditPlacement::edges_as_qudits) {
        std::vector<std::vector<std::int64_t>> site_edges;
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j)
                for (int l = 0; l < m; ++l) {
                    std::int64_t v = vid(i + 1, j + 1, l + 1);
                    std::vector<std::int64_t> incident;
                    for (auto& dd : d)
                        incident.push_back(edge_key(v, vid(i + 1 + dd[0], j + 1 + dd[1], l + 1 + dd[2])));
                    site_edges.push_back(std::move(incident));
                }
        return from_vertex_edge_incidence(site_edges);
    }
    auto q = [m](int i, int j, int l) { return (i * m + j) * m + l; };
    std::vector<std::vector<int>> edges;
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            for (int l = 0; l < m; ++l) {
                if (i + 1 < m) edges.push_back({q(i, j, l), q(i + 1, j, l)});
                if (j + 1 < m) edges.push_back({q(i, j, l), q(i, j + 1, l)});
                if (l + 1 < m) edges.push_back({q(i, j, l), q(i, j, l + 1)});
            }
    return InteractionHypergraph::create(m * m * m, std::move(edges));
}

// Simple hypergraph: duplicate edges (as sets) are rejected and resampled.
InteractionHypergraph make_er(int n, double alpha, int k, std::uint64_t seed) {
    const long long m = std::llround(alpha * n);
    Rng rng(mix64(seed, 0x45525f47454eULL));
    std::set<std::vector<int>> seen;
    std::vector<std::vector<int>> edges;
    while (static_cast<long long>(edges.size()) < m) {
        std::vector<int> e;
        while (static_cast<int>(e.size()) < k) {
            int candidate = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
            if (std::find(e.begin(), e.end(), candidate) == e.end()) e.push_back(candidate);
        }
        std::sort(e.begin(), e.end());
        if (seen.insert(e).second) edges.push_back(std::move(e));
    }
    return InteractionHypergraph::create(n, std::move(edges));
}

}  // namespace

InteractionHypergraph generate(const EnsembleSpec& spec) {
    spec.validate();
    switch (spec.kind) {
        case GraphKind::chain: return make_chain(spec.length);
        case GraphKind::cycle: return make_cycle(spec.length);
        case GraphKind::star: return make_star(spec.branches, spec.locality);
        case GraphKind::regular_tree_patch: return make_tree_patch(spec.degree, spec.locality, spec.depth);
        case GraphKind::square_lattice: return make_square(spec.size, spec.placement);
        case GraphKind::triangular_lattice: return make_triangular(spec.size, spec.placement);
        case GraphKind::hexagonal_lattice: return make_hexagonal(spec.size, spec.placement);
        case GraphKind::checkerboard: return make_checkerboard(spec.size);
        case GraphKind::cubic_lattice: return make_cubic(spec.size, spec.placement);
        case GraphKind::er_random: return make_er(spec.length, spec.alpha, spec.locality, spec.seed);
    }
    throw std::logic_error("generate: unknown graph kind");
}

GraphKind graph_kind_from_string(const std::string& name) {
    if (name == "chain") return GraphKind::chain;
    if (name == "cycle") return GraphKind::cycle;
    if (name == "star") return GraphKind::star;
    if (name == "regular_tree_patch") return GraphKind::regular_tree_patch;
    if (name == "square_lattice" || name == "square") return GraphKind::square_lattice;
    if (name == "triangular_lattice" || name == "triangular") return GraphKind::triangular_lattice;
    if (name == "hexagonal_lattice" || name == "hexagonal") return GraphKind::hexagonal_lattice;
    if (name == "checkerboard") return GraphKind::checkerboard;
    if (name == "cubic_lattice" || name == "cubic") return GraphKind::cubic_lattice;
    if (name == "er_random" || name == "er") return GraphKind::er_random;
    throw std::invalid_argument("unknown graph kind: " + name);
}

std::string to_string(GraphKind kind) {
    switch (kind) {
        case GraphKind::chain: return "chain";
        case GraphKind::cycle: return "cycle";
        case GraphKind::star: return "star";
        case GraphKind::regular_tree_patch: return "regular_tree_patch";
        case GraphKind::square_lattice: return "square_lattice";
        case GraphKind::triangular_lattice: return "triangular_lattice";
        case GraphKind::hexagonal_lattice: return "hexagonal_lattice";
        case GraphKind::checkerboard: return "checkerboard";
        case GraphKind::cubic_lattice: return "cubic_lattice";
        case GraphKind::er_random: return "er_random";
    }
    return "unknown";
}

LinkIndex::LinkIndex(const InteractionHypergraph& h) {
    n_sites = h.n_qudits;
    n_edges = h.n_edges();
    edge_offset.resize(n_edges + 1, 0);
    for (int i = 0; i < n_edges; ++i)
        edge_offset[i + 1] = edge_offset[i] + static_cast<int>(h.edges[i].size());
    n_links = edge_offset[n_edges];
    link_site.resize(n_links);
    site_links.assign(n_sites, {});
    for (int i = 0; i < n_edges; ++i)
        for (std::size_t j = 0; j < h.edges[i].size(); ++j) {
            int id = edge_offset[i] + static_cast<int>(j);
            link_site[id] = h.edges[i][j];
            site_links[h.edges[i][j]].push_back(id);
        }
}

}  // namespace qshearer
