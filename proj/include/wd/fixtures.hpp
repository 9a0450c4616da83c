#ifndef WD_FIXTURES_HPP
#define WD_FIXTURES_HPP

// Small standard triangulations and chain models.

#include "wd/duality.hpp"

namespace wd::fixtures {

inline SimplicialComplex simplex(int n) {
    Simplex s;
    for (int v = 0; v <= n; ++v) s.push_back(v);
    return SimplicialComplex::from_facets(n + 1, {s});
}

inline std::vector<Simplex> simplex_boundary_facets(int n) {
    std::vector<Simplex> fs;
    for (int drop = n; drop >= 0; --drop) {
        Simplex s;
        for (int v = 0; v <= n; ++v)
            if (v != drop) s.push_back(v);
        fs.push_back(s);
    }
    return fs;
}

// Boundary of the n-simplex, a triangulated (n-1)-sphere.
inline SimplicialComplex sphere(int dim) { return SimplicialComplex::from_facets(dim + 2, simplex_boundary_facets(dim + 1)); }

// (Delta^n, boundary)
inline SimplicialPair ball_pair(int n) { return make_simplicial_pair(simplex(n), simplex_boundary_facets(n)); }

// Square disc on four vertices with its boundary 4-cycle.
inline SimplicialPair disc4() {
    SimplicialComplex D = SimplicialComplex::from_facets(4, {{0, 1, 2}, {0, 2, 3}});
    return make_simplicial_pair(D, {{0, 1}, {1, 2}, {2, 3}, {0, 3}});
}

// Seven-vertex torus.
inline SimplicialComplex torus7() {
    std::vector<Simplex> fs;
    for (int i = 0; i < 7; ++i) {
        fs.push_back({i, (i + 1) % 7, (i + 3) % 7});
        fs.push_back({i, (i + 2) % 7, (i + 3) % 7});
    }
    return SimplicialComplex::from_facets(7, fs);
}

// Eight-vertex Klein bottle.
inline SimplicialComplex klein8() {
    return SimplicialComplex::from_facets(
        8, {{0, 1, 3}, {0, 1, 7}, {0, 2, 4}, {0, 2, 7}, {0, 3, 6}, {0, 4, 5}, {0, 5, 6}, {1, 2, 4},
            {1, 2, 6}, {1, 3, 4}, {1, 6, 7}, {2, 5, 6}, {2, 5, 7}, {3, 4, 7}, {3, 6, 7}, {4, 5, 7}});
}

// Cellular chain model of S^n: one cell in degree 0 and one in degree n.
inline ChainComplex sphere_cells(int n) {
    std::vector<std::size_t> r(static_cast<std::size_t>(n + 1), 0);
    r[0] += 1;
    r[static_cast<std::size_t>(n)] += 1;
    return ChainComplex(0, r);
}

// Cellular model of D^n = S^{n-1} u e^n together with the boundary inclusion.
inline ChainMap ball_cells(int n) {
    std::vector<std::size_t> r(static_cast<std::size_t>(n + 1), 0);
    r[0] += 1;
    r[static_cast<std::size_t>(n - 1)] += 1;
    r[static_cast<std::size_t>(n)] += 1;
    Matrix dn(r[static_cast<std::size_t>(n - 1)], 1);
    dn(dn.rows() - 1, 0) = 1;
    ChainComplex D(0, r, {{n, dn}});
    ChainComplex S = sphere_cells(n - 1);
    std::map<int, Matrix> inc;
    for (int i = 0; i <= n - 1; ++i) {
        Matrix m(D.rank(i), S.rank(i));
        for (std::size_t k = 0; k < S.rank(i); ++k) m(D.rank(i) - S.rank(i) + k, k) = 1;
        inc[i] = m;
    }
    return ChainMap(S, D, inc);
}

// Cellular model of S^1 x S^2: cells in degrees 0, 1, 2, 3 with zero boundary.
inline ChainComplex s1xs2_cells() { return ChainComplex(0, {1, 1, 1, 1}); }

// Cellular model of S^3 # S^3 style doubles: two copies of a complex glued at
// the base point, given as the wedge of two copies of C (C assumed to have a
// single 0-cell).
inline ChainComplex wedge_double(const ChainComplex& C) {
    std::vector<std::size_t> r;
    std::map<int, Matrix> d;
    for (int i = 0; i <= C.top(); ++i) r.push_back(i == 0 ? 1 : 2 * C.rank(i));
    for (int i = 1; i <= C.top(); ++i) {
        Matrix m(i == 1 ? 1 : 2 * C.rank(i - 1), 2 * C.rank(i));
        if (i == 1) {
            m.set_block(0, 0, C.d(1));
            m.set_block(0, C.rank(1), C.d(1));
        } else {
            m.set_block(0, 0, C.d(i));
            m.set_block(C.rank(i - 1), C.rank(i), C.d(i));
        }
        d[i] = m;
    }
    return ChainComplex(0, r, d);
}

// The swap of the two wedge summands.
inline ChainMap wedge_swap(const ChainComplex& C, const ChainComplex& W) {
    std::map<int, Matrix> m;
    for (int i = 0; i <= W.top(); ++i) {
        if (i == 0) {
            m[i] = Matrix::identity(1);
            continue;
        }
        std::size_t n = C.rank(i);
        Matrix s(2 * n, 2 * n);
        s.set_block(0, n, Matrix::identity(n));
        s.set_block(n, 0, Matrix::identity(n));
        m[i] = s;
    }
    return ChainMap(W, W, m);
}


// Connected sum K # K of a closed c-dimensional cell complex with one 0-cell
// and one top cell: the (c-1)-skeleton is the wedge of two copies and a single
// top cell is attached along the sum of both top boundaries.
inline ChainComplex connected_sum_double(const ChainComplex& K, int c) {
    if (K.rank(0) != 1 || K.rank(c) != 1) throw MathError("connected sum needs one 0-cell and one top cell");
    std::vector<std::size_t> r;
    std::map<int, Matrix> d;
    for (int i = 0; i <= c; ++i) r.push_back(i == 0 || i == c ? 1 : 2 * K.rank(i));
    for (int i = 1; i <= c; ++i) {
        Matrix m(r[static_cast<std::size_t>(i - 1)], r[static_cast<std::size_t>(i)]);
        std::size_t a = K.rank(i - 1), b = K.rank(i);
        Matrix k = K.d(i);
        if (i == 1 && i == c) {
            m.set_block(0, 0, k);
        } else if (i == 1) {
            m.set_block(0, 0, k);
            m.set_block(0, b, k);
        } else if (i == c) {
            m.set_block(0, 0, k);
            m.set_block(a, 0, k);
        } else {
            m.set_block(0, 0, k);
            m.set_block(a, b, k);
        }
        d[i] = m;
    }
    return ChainComplex(0, r, d);
}

// Interchange of the two summands of connected_sum_double.
inline ChainMap summand_swap(const ChainComplex& L, int c) {
    std::map<int, Matrix> m;
    for (int i = 0; i <= c; ++i) {
        std::size_t n = L.rank(i);
        if (i == 0 || i == c) {
            m[i] = Matrix::identity(n);
            continue;
        }
        Matrix s(n, n);
        s.set_block(0, n / 2, Matrix::identity(n / 2));
        s.set_block(n / 2, 0, Matrix::identity(n / 2));
        m[i] = s;
    }
    return ChainMap(L, L, m);
}

inline LinkBundleData flat_link(ChainComplex L, int c, ChainMap lambda, int order) {
    LinkBundleData b;
    b.fiber = std::move(L);
    b.fiber_dim = c;
    b.monodromy = std::move(lambda);
    b.order = order;
    return b;
}

// Link S^3 with trivial monodromy.
inline LinkBundleData s3_link() {
    ChainComplex L = sphere_cells(3);
    return flat_link(L, 3, ChainMap::identity(L), 1);
}

/**
 * Link S^1 x S^2; the order-2 monodromy reverses both factors (so it keeps
 * the orientation). The reduced cohomology of the truncation cone with
 * trivial monodromy is the ideal of H^*(S^1 x S^2 x S^1) generated by the
 * S^2 class, in degrees 2, 3, 3, 4; all products of two of its classes
 * vanish, which the supplied table records.
 */
inline LinkBundleData s1xs2_link(bool twisted) {
    ChainComplex L = s1xs2_cells();
    if (!twisted) {
        LinkBundleData b = flat_link(L, 3, ChainMap::identity(L), 1);
        CohomologyRing R;
        R.dims = {0, 0, 1, 2, 1};
        R.trusted = true;
        b.cone_ring = R;
        return b;
    }
    Matrix m1{{-1}}, m2{{-1}};
    ChainMap lam(L, L, {{0, Matrix::identity(1)}, {1, m1}, {2, m2}, {3, Matrix::identity(1)}});
    return flat_link(L, 3, lam, 2);
}

/**
 * Link (S^1 x S^2) # (S^1 x S^2) with the summand swap (order 2) or the
 * identity. The degree-2 classes of the cone come from classes of the
 * S^2 factors, whose products vanish in a connected sum; the table records
 * zero products.
 */
inline LinkBundleData swap_link(bool twisted) {
    ChainComplex L = connected_sum_double(s1xs2_cells(), 3);
    LinkBundleData b = twisted ? flat_link(L, 3, summand_swap(L, 3), 2) : flat_link(L, 3, ChainMap::identity(L), 1);
    CohomologyRing R;
    R.dims = twisted ? std::vector<std::size_t>{0, 0, 1, 2, 1} : std::vector<std::size_t>{0, 0, 2, 3, 1};
    R.trusted = true;
    b.cone_ring = R;
    return b;
}

// Even-dimensional Witt link S^4 with trivial monodromy.
inline LinkBundleData s4_link() {
    ChainComplex L = sphere_cells(4);
    return flat_link(L, 4, ChainMap::identity(L), 1);
}

// Witt space with regular part D^4 x S^1 and one singular circle with link S^3.
inline WittSpaceSpec d4xs1_spec() {
    ChainMap ball = ball_cells(4);
    ChainMap idS = ChainMap::identity(ball.source()), idD = ChainMap::identity(ball.target());
    TorusResult E = algebraic_mapping_torus(idS), M = algebraic_mapping_torus(idD);
    WittSpaceSpec w;
    w.n = 5;
    w.M = M.torus;
    w.boundary = torus_map(ball, E.torus, M.torus);
    w.strata.push_back(s3_link());
    return w;
}

// Regular part (S^3 x S^1) x [0, 1] with two singular circles; the far end
// carries the opposite boundary orientation.
inline WittSpaceSpec doubled_spec() {
    LinkBundleData a = s3_link(), b = s3_link();
    b.orientation = -1;
    ChainComplex E = algebraic_mapping_torus(ChainMap::identity(sphere_cells(3))).torus;
    CylinderResult cyl = mapping_cylinder(ChainMap::identity(E));
    ChainComplex EE = disjoint_union(E, E);
    std::map<int, Matrix> m;
    for (int i = EE.bottom(); i <= EE.top(); ++i) m[i] = hstack(cyl.from_source.at(i), cyl.from_target.at(i));
    WittSpaceSpec w;
    w.n = 5;
    w.M = cyl.cylinder;
    w.boundary = ChainMap(EE, cyl.cylinder, m);
    w.strata = {a, b};
    return w;
}

// (D^4, S^3) as the 4-simplex.
inline SimplicialPair d4_pair() { return ball_pair(4); }

// S^2 x S^2 with the interior of one 4-simplex removed.
inline SimplicialPair punctured_s2xs2() {
    SimplicialComplex P = simplicial_product(sphere(2), sphere(2));
    std::vector<Simplex> fs = P.facets();
    Simplex gone = fs.front();
    fs.erase(fs.begin());
    SimplicialComplex M = SimplicialComplex::from_facets(P.vertex_count(), fs);
    std::vector<Simplex> bd;
    for (std::size_t i = 0; i < gone.size(); ++i) bd.push_back(face(gone, i));
    return make_simplicial_pair(M, bd);
}

// Ring tables with top class in degree 4: CP^2 and S^2 x S^2.
inline CohomologyRing ring_table(std::vector<std::size_t> dims, const Matrix& middle) {
    CohomologyRing R;
    R.dims = std::move(dims);
    R.trusted = true;
    for (int p = 0; p <= 4; ++p)
        for (int q = 0; p + q <= 4; ++q) {
            Matrix m(R.dim(p + q), R.dim(p) * R.dim(q));
            if (p == 0)
                for (std::size_t j = 0; j < R.dim(q); ++j) m(j, j) = 1;
            else if (q == 0)
                for (std::size_t i = 0; i < R.dim(p); ++i) m(i, i) = 1;
            else if (p == 2 && q == 2)
                for (std::size_t i = 0; i < R.dim(2); ++i)
                    for (std::size_t j = 0; j < R.dim(2); ++j) m(0, i * R.dim(2) + j) = middle(i, j);
            R.mult[{p, q}] = m;
        }
    return R;
}

inline CohomologyRing cp2_ring() { return ring_table({1, 0, 1, 0, 1}, Matrix{{1}}); }
inline CohomologyRing s2xs2_ring() { return ring_table({1, 0, 2, 0, 1}, Matrix{{0, 1}, {1, 0}}); }

}  // namespace wd::fixtures

#endif
