#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace qshearer {

// Interaction hypergraph of a local projector Hamiltonian: one hyperedge
// per projector, listing the qudits in its support. Immutable once built.
struct InteractionHypergraph {
    int n_qudits = 0;
    std::vector<std::vector<int>> edges;  // each sorted ascending, no repeats

    // Validates index ranges, sorts each edge, rejects empty edges and
    // repeated indices within an edge. Throws std::invalid_argument.
    static InteractionHypergraph create(int n_qudits, std::vector<std::vector<int>> edges);

    int n_edges() const { return static_cast<int>(edges.size()); }
    double density() const;  // alpha = M/N

    // Degree of each qudit (number of incident hyperedges).
    std::vector<int> qudit_degrees() const;

    // Hyperedges incident to each qudit, in edge order.
    std::vector<std::vector<int>> incidence() const;
};

// One vertex per hyperedge; vertices adjacent iff the hyperedges share a
// qudit. This is the substrate of the hard-core gas.
struct DependencyGraph {
    int n_vertices = 0;
    std::vector<std::vector<int>> adj;  // sorted neighbor lists, no self-loops

    static DependencyGraph from_adjacency(int n_vertices, std::vector<std::pair<int, int>> edge_list);

    bool adjacent(int i, int j) const;
    int n_edges() const;
    // Graph induced on the kept vertices (renumbered in increasing order).
    DependencyGraph induced(const std::vector<int>& keep) const;
};

DependencyGraph build_dependency_graph(const InteractionHypergraph& h);

struct DegreeStats {
    std::map<int, int> histogram;  // degree -> count
    double mean = 0.0;
    int cutoff = 0;
    double fraction_above_cutoff = 0.0;  // strictly greater than cutoff
};

// Exact empirical qudit-degree histogram; fraction of qudits with degree
// strictly above `cutoff` (used to report rare high-degree sites).
DegreeStats degree_stats(const InteractionHypergraph& h, int cutoff);

enum class GraphKind {
    chain,
    cycle,
    star,
    regular_tree_patch,
    square_lattice,
    triangular_lattice,
    hexagonal_lattice,
    checkerboard,
    cubic_lattice,
    er_random,
};

// Whether lattice sites or lattice edges carry the qudits. With
// edges_as_qudits the projectors sit on the sites and the dependency
// graph is the lattice itself; with vertices_as_qudits the projectors sit
// on the lattice edges and the dependency graph is the line graph.
enum class QuditPlacement { vertices_as_qudits, edges_as_qudits };

struct EnsembleSpec {
    GraphKind kind = GraphKind::chain;
    int length = 0;            // chain/cycle: number of qudits
    int branches = 0;          // star: number of hyperedges z
    int locality = 0;          // star / tree / er: hyperedge size k
    int degree = 0;            // regular tree: site degree t
    int depth = 0;             // regular tree patch: hyperedge generations
    int size = 0;              // lattices: linear patch size
    double alpha = 0.0;        // er: density M/N
    std::uint64_t seed = 0;    // er: RNG seed
    QuditPlacement placement = QuditPlacement::edges_as_qudits;

    void validate() const;  // throws std::invalid_argument on bad parameters
};

// Deterministic generator: a pure function of (spec, seed).
InteractionHypergraph generate(const EnsembleSpec& spec);

GraphKind graph_kind_from_string(const std::string& name);
std::string to_string(GraphKind kind);

// Flat indexing of the (site, hyperedge) incidences. Link j of edge i has
// id edge_offset[i] + j; message arrays in the cavity solver are indexed
// by link id.
struct LinkIndex {
    explicit LinkIndex(const InteractionHypergraph& h);

    int n_sites = 0;
    int n_edges = 0;
    int n_links = 0;
    std::vector<int> edge_offset;              // size n_edges + 1
    std::vector<int> link_site;                // site at each link
    std::vector<std::vector<int>> site_links;  // link ids incident to each site
};

}  // namespace qshearer
