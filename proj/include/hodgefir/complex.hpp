#ifndef HODGEFIR_COMPLEX_HPP
#define HODGEFIR_COMPLEX_HPP

#include <algorithm>
#include <array>
#include <map>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "errors.hpp"

namespace hodgefir {

using SparseMat = Eigen::SparseMatrix<double>;
using Vec = Eigen::VectorXd;

/// A simplicial complex of dimension at most 2: nodes, oriented edges and
/// oriented triangles. Node identifiers are arbitrary strings; they are mapped
/// to dense indices at build time and the map is kept for I/O. The reference
/// orientation of every simplex is the increasing-index order of its tuple.
/// Immutable after construction.
struct SimplicialComplex {
    std::vector<std::string> nodes;
    std::vector<std::array<int, 2>> edges;      // (u,v) with u < v, lexicographic
    std::vector<std::array<int, 3>> triangles;  // (u,v,w) with u < v < w, lexicographic
    std::unordered_map<std::string, int> node_index;
    std::map<std::pair<int, int>, int> edge_index;

    int num_nodes() const { return static_cast<int>(nodes.size()); }
    int num_edges() const { return static_cast<int>(edges.size()); }
    int num_triangles() const { return static_cast<int>(triangles.size()); }

    /// Index of edge {u,v} (either order), or -1 if absent.
    int find_edge(int u, int v) const {
        if (u > v) std::swap(u, v);
        auto it = edge_index.find({u, v});
        return it == edge_index.end() ? -1 : it->second;
    }
};

/// Node-edge and edge-triangle incidence matrices under the reference
/// orientations. Entries are in {-1, 0, +1} and B1*B2 = 0.
struct IncidencePair {
    SparseMat b1;  // N0 x N1
    SparseMat b2;  // N1 x N2
};

/// The graph Laplacian L0 = B1*B1^T and the three edge-space Laplacians:
/// lower L1l = B1^T*B1, upper L1u = B2*B2^T, and L1 = L1l + L1u.
struct HodgeLaplacians {
    SparseMat l0;
    SparseMat l1;
    SparseMat l1_lower;
    SparseMat l1_upper;
};

/// A real signal on the edges; the sign of an entry is the flow direction
/// relative to the edge's reference orientation.
struct EdgeFlow {
    Vec values;
};

/// Canonicalize raw node/edge/triangle lists into a complex.
///
/// Tuples may arrive unsorted; they are sorted into reference orientation,
/// duplicates are silently merged, and the lists are ordered
/// lexicographically by node index. Downward closure is validated, never
/// auto-completed: a triangle whose edge is missing raises DanglingSimplex.
inline SimplicialComplex build_complex(
    const std::vector<std::string>& nodes,
    const std::vector<std::array<std::string, 2>>& edges,
    const std::vector<std::array<std::string, 3>>& triangles) {
    SimplicialComplex sc;
    for (const auto& n : nodes) {
        if (sc.node_index.count(n)) continue;  // duplicates merged
        sc.node_index[n] = static_cast<int>(sc.nodes.size());
        sc.nodes.push_back(n);
    }
    auto node_of = [&](const std::string& id) {
        auto it = sc.node_index.find(id);
        if (it == sc.node_index.end())
            throw DanglingSimplex("simplex references unknown node '" + id + "'");
        return it->second;
    };

    std::set<std::array<int, 2>> edge_set;
    for (const auto& e : edges) {
        int u = node_of(e[0]), v = node_of(e[1]);
        if (u == v) throw DanglingSimplex("degenerate edge on node '" + e[0] + "'");
        if (u > v) std::swap(u, v);
        edge_set.insert({u, v});
    }
    sc.edges.assign(edge_set.begin(), edge_set.end());
    for (int i = 0; i < sc.num_edges(); ++i)
        sc.edge_index[{sc.edges[i][0], sc.edges[i][1]}] = i;

    std::set<std::array<int, 3>> tri_set;
    for (const auto& t : triangles) {
        std::array<int, 3> v{node_of(t[0]), node_of(t[1]), node_of(t[2])};
        std::sort(v.begin(), v.end());
        if (v[0] == v[1] || v[1] == v[2])
            throw DanglingSimplex("degenerate triangle");
        for (auto [a, b] : {std::pair{v[0], v[1]}, {v[1], v[2]}, {v[0], v[2]}})
            if (sc.find_edge(a, b) < 0)
                throw DanglingSimplex("triangle {" + sc.nodes[v[0]] + "," +
                                      sc.nodes[v[1]] + "," + sc.nodes[v[2]] +
                                      "} misses edge (" + sc.nodes[a] + "," +
                                      sc.nodes[b] + ")");
        tri_set.insert(v);
    }
    sc.triangles.assign(tri_set.begin(), tri_set.end());
    return sc;
}

/// Incidence matrices. B1 column for edge (u,v): -1 at row u, +1 at row v.
/// B2 column for triangle (u,v,w), u<v<w: +1 on edges (u,v) and (v,w),
/// -1 on edge (u,w) (boundary-operator sign convention, so B1*B2 = 0).
inline IncidencePair incidence(const SimplicialComplex& sc) {
    IncidencePair p;
    std::vector<Eigen::Triplet<double>> t1;
    t1.reserve(2 * sc.num_edges());
    for (int j = 0; j < sc.num_edges(); ++j) {
        t1.emplace_back(sc.edges[j][0], j, -1.0);
        t1.emplace_back(sc.edges[j][1], j, +1.0);
    }
    p.b1.resize(sc.num_nodes(), sc.num_edges());
    p.b1.setFromTriplets(t1.begin(), t1.end());

    std::vector<Eigen::Triplet<double>> t2;
    t2.reserve(3 * sc.num_triangles());
    for (int j = 0; j < sc.num_triangles(); ++j) {
        auto [u, v, w] = sc.triangles[j];
        t2.emplace_back(sc.find_edge(u, v), j, +1.0);
        t2.emplace_back(sc.find_edge(v, w), j, +1.0);
        t2.emplace_back(sc.find_edge(u, w), j, -1.0);
    }
    p.b2.resize(sc.num_edges(), sc.num_triangles());
    p.b2.setFromTriplets(t2.begin(), t2.end());
    return p;
}

inline HodgeLaplacians laplacians(const IncidencePair& p) {
    HodgeLaplacians l;
    l.l0 = p.b1 * SparseMat(p.b1.transpose());
    l.l1_lower = SparseMat(p.b1.transpose()) * p.b1;
    l.l1_upper = p.b2 * SparseMat(p.b2.transpose());
    l.l1 = l.l1_lower + l.l1_upper;
    l.l0.makeCompressed();
    l.l1_lower.makeCompressed();
    l.l1_upper.makeCompressed();
    l.l1.makeCompressed();
    return l;
}

struct EdgeNeighborhoods {
    std::set<int> lower;  // edges sharing a node
    std::set<int> upper;  // edges sharing a triangle
};

inline EdgeNeighborhoods neighborhoods(const SimplicialComplex& sc, int edge) {
    if (edge < 0 || edge >= sc.num_edges())
        throw DimensionMismatch("edge index out of range");
    EdgeNeighborhoods nb;
    auto [u, v] = sc.edges[edge];
    for (int j = 0; j < sc.num_edges(); ++j) {
        if (j == edge) continue;
        auto [a, b] = sc.edges[j];
        if (a == u || a == v || b == u || b == v) nb.lower.insert(j);
    }
    for (const auto& t : sc.triangles) {
        int e0 = sc.find_edge(t[0], t[1]);
        int e1 = sc.find_edge(t[1], t[2]);
        int e2 = sc.find_edge(t[0], t[2]);
        if (e0 == edge || e1 == edge || e2 == edge)
            for (int e : {e0, e1, e2})
                if (e != edge) nb.upper.insert(e);
    }
    return nb;
}

/// Lower plus upper degree of an edge.
inline int edge_degree(const SimplicialComplex& sc, int edge) {
    auto nb = neighborhoods(sc, edge);
    return static_cast<int>(nb.lower.size() + nb.upper.size());
}

inline int max_edge_degree(const SimplicialComplex& sc) {
    int d = 0;
    for (int i = 0; i < sc.num_edges(); ++i) d = std::max(d, edge_degree(sc, i));
    return d;
}

/// Rank of a small integer matrix by Gaussian elimination over Z_p. Entries
/// must be in {-1,0,1}; a 31-bit prime keeps the arithmetic exact and avoids
/// any floating-point tolerance in rank decisions.
inline int integer_rank(const SparseMat& m) {
    constexpr long long p = 2147483647LL;
    const int rows = static_cast<int>(m.rows()), cols = static_cast<int>(m.cols());
    std::vector<std::vector<long long>> a(rows, std::vector<long long>(cols, 0));
    for (int k = 0; k < m.outerSize(); ++k)
        for (SparseMat::InnerIterator it(m, k); it; ++it) {
            long long v = static_cast<long long>(it.value());
            a[it.row()][it.col()] = ((v % p) + p) % p;
        }
    auto mulmod = [&](long long x, long long y) { return (__int128)x * y % p; };
    auto powmod = [&](long long b, long long e) {
        long long r = 1;
        while (e) {
            if (e & 1) r = mulmod(r, b);
            b = mulmod(b, b);
            e >>= 1;
        }
        return r;
    };
    int rank = 0;
    for (int col = 0; col < cols && rank < rows; ++col) {
        int pivot = -1;
        for (int r = rank; r < rows; ++r)
            if (a[r][col] != 0) { pivot = r; break; }
        if (pivot < 0) continue;
        std::swap(a[rank], a[pivot]);
        long long inv = powmod(a[rank][col], p - 2);
        for (int c = col; c < cols; ++c) a[rank][c] = mulmod(a[rank][c], inv);
        for (int r = 0; r < rows; ++r) {
            if (r == rank || a[r][col] == 0) continue;
            long long f = a[r][col];
            for (int c = col; c < cols; ++c)
                a[r][c] = ((a[r][c] - mulmod(f, a[rank][c])) % p + p) % p;
        }
        ++rank;
    }
    return rank;
}

}  // namespace hodgefir

#endif
