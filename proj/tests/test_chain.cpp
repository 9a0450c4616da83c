#include "catch_amalgamated.hpp"

#include "oracles.hpp"
#include "wd/chain.hpp"

#include <random>

using namespace wd;

namespace {

ChainComplex circle() { return ChainComplex(0, {1, 1}); }
ChainComplex sphere(int n) {
    std::vector<std::size_t> r(static_cast<std::size_t>(n + 1), 0);
    r[0] = 1;
    r[static_cast<std::size_t>(n)] += 1;
    return ChainComplex(0, r);
}

std::vector<std::vector<std::vector<int>>> boundary_of_simplex(int n) {
    // all proper faces of the simplex on {0..n}
    std::vector<std::vector<std::vector<int>>> by_dim(static_cast<std::size_t>(n));
    for (int mask = 1; mask < (1 << (n + 1)) - 1; ++mask) {
        std::vector<int> s;
        for (int v = 0; v <= n; ++v)
            if (mask >> v & 1) s.push_back(v);
        by_dim[s.size() - 1].push_back(s);
    }
    for (auto& v : by_dim) std::sort(v.begin(), v.end());
    return by_dim;
}

Matrix random_invertible(std::mt19937& rng, std::size_t n) {
    std::uniform_int_distribution<int> d(-2, 2);
    for (;;) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) m(i, j) = d(rng);
        if (rank(m) == n) return m;
    }
}

Matrix inverse(const Matrix& m) {
    Matrix out(m.rows(), m.rows());
    for (std::size_t j = 0; j < m.rows(); ++j) {
        Vec x = *solve(m, unit_vec(m.rows(), j));
        for (std::size_t i = 0; i < m.rows(); ++i) out(i, j) = x[i];
    }
    return out;
}

// Sum of spheres and contractible pairs in degrees 0..3, in a random basis.
ChainComplex random_complex(std::mt19937& rng) {
    std::uniform_int_distribution<int> cnt(0, 2);
    int top = 3;
    std::vector<std::size_t> spheres(4), pairs(4);
    for (int i = 0; i <= top; ++i) spheres[i] = cnt(rng);
    spheres[0] += 1;
    for (int i = 1; i <= top; ++i) pairs[i] = cnt(rng);  // pairs[i]: C_i -> C_{i-1}
    std::vector<std::size_t> ranks(4);
    for (int i = 0; i <= top; ++i) ranks[i] = spheres[i] + pairs[i] + (i < top ? pairs[i + 1] : 0);
    // basis order in degree i: spheres, sources of pairs[i], targets of pairs[i+1]
    std::map<int, Matrix> d;
    for (int i = 1; i <= top; ++i) {
        Matrix m(ranks[i - 1], ranks[i]);
        for (std::size_t k = 0; k < pairs[i]; ++k) m(spheres[i - 1] + pairs[i - 1] + k, spheres[i] + k) = 1;
        d[i] = m;
    }
    std::vector<Matrix> P;
    for (int i = 0; i <= top; ++i) P.push_back(random_invertible(rng, ranks[i]));
    for (int i = 1; i <= top; ++i) d[i] = P[i - 1] * d[i] * inverse(P[i]);
    return ChainComplex(0, ranks, d);
}

// f = inclusion + (dh + hd) into C (+) E, a chain map with random homotopy part.
ChainMap random_map(std::mt19937& rng, const ChainComplex& C, const ChainComplex& E) {
    ChainComplex T = disjoint_union(C, E);
    std::uniform_int_distribution<int> d(-1, 1);
    std::map<int, Matrix> h;
    for (int i = C.bottom() - 1; i <= T.top(); ++i) {
        Matrix m(T.rank(i + 1), C.rank(i));
        for (std::size_t a = 0; a < m.rows(); ++a)
            for (std::size_t b = 0; b < m.cols(); ++b) m(a, b) = d(rng);
        h[i] = m;
    }
    std::map<int, Matrix> f;
    for (int i = T.bottom(); i <= T.top(); ++i) {
        Matrix inc(T.rank(i), C.rank(i));
        for (std::size_t k = 0; k < C.rank(i); ++k) inc(k, k) = 1;
        f[i] = inc + T.d(i + 1) * h[i] + h[i - 1] * C.d(i);
    }
    return ChainMap(C, T, f);
}

}  // namespace

TEST_CASE("homology examples") {
    CHECK(betti_numbers(circle(), 0, 1) == std::vector<std::size_t>{1, 1});
    ChainComplex tet = oracle::simplicial_oracle(boundary_of_simplex(3));
    CHECK(oracle::bettis(tet, 0, 2) == std::vector<std::size_t>{1, 0, 1});
    CHECK(betti_numbers(tet, 0, 2) == std::vector<std::size_t>{1, 0, 1});
    HomologyBasis h2 = homology(tet, 2);
    REQUIRE(h2.dim() == 1);
    CHECK(is_zero(tet.d(2) * h2.reps.column(0)));
}

TEST_CASE("d squared must vanish") {
    CHECK_THROWS_AS(ChainComplex(0, {1, 1, 1}, {{1, Matrix{{1}}}, {2, Matrix{{1}}}}), MathError);
    CHECK_THROWS_AS(ChainComplex(0, {1, 1}, {{1, Matrix{{1, 1}}}}), MathError);
}

TEST_CASE("mapping cone") {
    ChainComplex s1 = circle();
    ConeResult c = mapping_cone(ChainMap::identity(s1));
    for (int i = c.cone.bottom(); i <= c.cone.top(); ++i) CHECK(betti(c.cone, i) == 0);
    CHECK(les_exact(c.pair));

    // zero map from the circle to a point: ranks 1, 1, 1 with zero differential
    ConeResult z = mapping_cone(ChainMap::zero(s1, point_complex()));
    CHECK(oracle::bettis(z.cone, 0, 2) == std::vector<std::size_t>{1, 1, 1});
    CHECK(betti(z.cone, 1) == 1);
    CHECK(betti(z.cone, 2) == 1);
    CHECK(les_exact(z.pair));
}

TEST_CASE("cone and torus on random inputs: d^2, Euler characteristic, exactness") {
    std::mt19937 rng(17);
    for (int t = 0; t < 10; ++t) {
        ChainComplex C = random_complex(rng), E = random_complex(rng);
        ChainMap f = random_map(rng, C, E);
        ConeResult c = mapping_cone(f);
        CHECK(c.cone.euler_characteristic() == f.target().euler_characteristic() - C.euler_characteristic());
        CHECK(les_exact(c.pair));
        // f is a split injection up to homotopy, so the cone has the homology of E
        CHECK(oracle::bettis(c.cone, 0, 4) == oracle::bettis(E, 0, 4));

        TorusResult tr = algebraic_mapping_torus(ChainMap::identity(C));
        CHECK(tr.torus.euler_characteristic() == 0);
        CHECK(les_exact(tr.wang));
    }
}

TEST_CASE("mapping cylinder") {
    CylinderResult c = mapping_cylinder(ChainMap::identity(circle()));
    CHECK(betti_numbers(c.cylinder, 0, 2) == std::vector<std::size_t>{1, 1, 0});

    std::mt19937 rng(23);
    for (int t = 0; t < 10; ++t) {
        ChainComplex C = random_complex(rng), E = random_complex(rng);
        ChainMap f = random_map(rng, C, E);
        CylinderResult cy = mapping_cylinder(f);
        CHECK(oracle::bettis(cy.cylinder, 0, 4) == oracle::bettis(f.target(), 0, 4));
        CHECK(cy.target_quasi_iso);
    }
}

TEST_CASE("relative homology of the cylinder equals cone homology") {
    std::mt19937 rng(29);
    for (int t = 0; t < 5; ++t) {
        ChainComplex C = random_complex(rng), E = random_complex(rng);
        ChainMap f = random_map(rng, C, E);
        CylinderResult cy = mapping_cylinder(f);
        PairData rel = make_pair(cy.from_source);
        ConeResult c = mapping_cone(f);
        CHECK(oracle::bettis(rel.relative, 0, 5) == oracle::bettis(c.cone, 0, 5));
    }
}

TEST_CASE("algebraic mapping torus") {
    TorusResult t = algebraic_mapping_torus(ChainMap::identity(circle()));
    // L x S^1: b_i = b_i(L) + b_{i-1}(L)
    CHECK(oracle::bettis(t.torus, 0, 2) == std::vector<std::size_t>{1, 2, 1});
    CHECK(betti_numbers(t.torus, 0, 2) == std::vector<std::size_t>{1, 2, 1});

    ChainComplex two(0, {2});
    ChainMap swap(two, two, {{0, Matrix{{0, 1}, {1, 0}}}});
    TorusResult s = algebraic_mapping_torus(swap);
    // phi - id has rank 1 on H_0 = Q^2: coker 1, ker 1
    CHECK(betti_numbers(s.torus, 0, 1) == std::vector<std::size_t>{1, 1});
    CHECK(les_exact(s.wang));

    TorusResult p = algebraic_mapping_torus(ChainMap::identity(point_complex()));
    CHECK(betti_numbers(p.torus, 0, 1) == std::vector<std::size_t>{1, 1});
}

TEST_CASE("Moore truncation") {
    TruncationResult t = moore_truncation(sphere(3), 2);
    CHECK(betti_numbers(t.truncated, 0, 3) == std::vector<std::size_t>{1, 0, 0, 0});

    ChainComplex tet = oracle::simplicial_oracle(boundary_of_simplex(3));
    TruncationResult t2 = moore_truncation(tet, 2);
    CHECK(betti_numbers(t2.truncated, 0, 2) == std::vector<std::size_t>{1, 0, 0});
    TruncationResult t5 = moore_truncation(tet, 5);
    CHECK(betti_numbers(t5.truncated, 0, 2) == std::vector<std::size_t>{1, 0, 1});

    ChainComplex s4 = oracle::simplicial_oracle(boundary_of_simplex(4));
    for (int r = 1; r <= 4; ++r) {
        TruncationResult tr = moore_truncation(s4, r);
        for (int i = 0; i <= 3; ++i) CHECK(betti(tr.truncated, i) == (i < r ? oracle::betti(s4, i) : 0));
    }
}

TEST_CASE("equivariant Moore truncation") {
    ChainComplex tet = oracle::simplicial_oracle(boundary_of_simplex(3));
    ChainComplex two = disjoint_union(tet, tet);
    std::map<int, Matrix> sw;
    for (int i = 0; i <= 2; ++i) {
        std::size_t n = tet.rank(i);
        Matrix m(2 * n, 2 * n);
        m.set_block(0, n, Matrix::identity(n));
        m.set_block(n, 0, Matrix::identity(n));
        sw[i] = m;
    }
    ChainMap swap(two, two, sw);
    for (int r = 1; r <= 2; ++r) {
        TruncationResult t = equivariant_moore_truncation(two, swap, 2, r);
        Matrix W = t.inclusion.at(r);
        // phi(W) = W as subspaces
        CHECK(image_basis(swap.at(r) * W) == image_basis(W));
        CHECK(is_identity(power(t.monodromy, 2)));
    }
    CHECK_THROWS_AS(equivariant_moore_truncation(two, swap, 3, 1), MathError);

    TruncationResult a = equivariant_moore_truncation(tet, ChainMap::identity(tet), 1, 2);
    TruncationResult b = moore_truncation(tet, 2);
    CHECK(a.inclusion.at(2) == b.inclusion.at(2));
}

TEST_CASE("attach_top_cell and connecting homomorphism") {
    ChainComplex s1 = circle();
    AttachResult z = attach_top_cell(s1, Vec{0}, 2);
    CHECK(betti_numbers(z.complex, 0, 2) == std::vector<std::size_t>{1, 1, 1});

    ChainComplex tet = oracle::simplicial_oracle(boundary_of_simplex(3));
    HomologyBasis h = homology(tet, 2);
    AttachResult d3 = attach_top_cell(tet, h.reps.column(0), 3);
    CHECK(betti_numbers(d3.complex, 0, 3) == std::vector<std::size_t>{1, 0, 0, 0});
    CHECK(les_exact(d3.pair));

    auto m = connecting_image_membership(d3.pair, 3, Vec{1});
    CHECK(m.member);
    auto zero = connecting_image_membership(d3.pair, 3, Vec{0});
    CHECK(zero.member);
    CHECK(is_zero(zero.witness));

    // wedge of two circles with a disc on the first loop
    ChainComplex wedge(0, {1, 2});
    AttachResult a = attach_top_cell(wedge, Vec{1, 0}, 2);
    CHECK(rank(a.pair.connecting(2)) == 1);
    CHECK(homology(wedge, 1).dim() == 2);
    CHECK(connecting_image_membership(a.pair, 2, Vec{1, 0}).member);
    CHECK_FALSE(connecting_image_membership(a.pair, 2, Vec{0, 1}).member);

    CHECK_THROWS_AS(attach_top_cell(tet, Vec{1, 0, 0, 0}, 3), MathError);
}

TEST_CASE("homotopy pushout") {
    ChainComplex s1 = circle();
    // both maps to points: suspension of the circle
    PushoutResult p = homotopy_pushout(augmentation(s1), augmentation(s1));
    CHECK(oracle::bettis(p.complex, 0, 2) == std::vector<std::size_t>{1, 0, 1});
    for (auto& s : p.mayer_vietoris) CHECK(s.exact);

    std::mt19937 rng(31);
    for (int t = 0; t < 5; ++t) {
        ChainComplex C = random_complex(rng), E = random_complex(rng);
        ChainMap f = random_map(rng, C, E);
        PushoutResult q = homotopy_pushout(f, ChainMap::identity(C));
        CHECK(oracle::bettis(q.complex, 0, 4) == oracle::bettis(f.target(), 0, 4));
        for (auto& s : q.mayer_vietoris) CHECK(s.exact);
    }
}

TEST_CASE("cohomology matches homology") {
    ChainComplex tet = oracle::simplicial_oracle(boundary_of_simplex(3));
    CHECK(cohomology(tet, 2).dim() == 1);
    // transpose ranks as the independent count
    for (int i = 0; i <= 2; ++i) {
        std::size_t co = tet.rank(i) - oracle::rank_mod_p(tet.d(i + 1).transpose()) -
                         oracle::rank_mod_p(tet.d(i).transpose());
        CHECK(cohomology(tet, i).dim() == co);
    }
    std::mt19937 rng(37);
    for (int t = 0; t < 5; ++t) {
        ChainComplex C = random_complex(rng);
        for (int i = 0; i <= 3; ++i) CHECK(cohomology(C, i).dim() == betti(C, i));
    }
}
