#include "generators.hpp"
#include "oracles.hpp"
#include "wd/fixtures.hpp"
#include "wd/simplicial.hpp"

#include <catch_amalgamated.hpp>

#include <random>

using namespace wd;
namespace fx = wd::fixtures;

namespace {

std::vector<std::vector<Simplex>> by_dim(const SimplicialComplex& K) {
    std::vector<std::vector<Simplex>> out;
    for (int k = 0; k <= K.dim(); ++k) out.push_back(K.simplices(k));
    return out;
}

Cochain random_cochain(const SimplicialComplex& K, int p, std::mt19937& rng) {
    std::uniform_int_distribution<int> u(-3, 3);
    Cochain c{p, zero_vec(K.count(p))};
    for (auto& x : c.values) x = u(rng);
    return c;
}

Vec random_chain(const SimplicialComplex& K, int n, std::mt19937& rng) {
    std::uniform_int_distribution<int> u(-3, 3);
    Vec c = zero_vec(K.count(n));
    for (auto& x : c) x = u(rng);
    return c;
}

Q evaluate(const Cochain& a, const Vec& c) {
    Q s = 0;
    for (std::size_t i = 0; i < c.size(); ++i) s += a.values[i] * c[i];
    return s;
}

using gen::random_complex;
using gen::random_simplicial_map;
using gen::RandomMap;

}  // namespace

TEST_CASE("simplicial chain complexes match the face formula", "[simplicial]") {
    for (auto K : {fx::sphere(1), fx::sphere(2), fx::sphere(3), fx::torus7(), fx::klein8(), fx::simplex(4)}) {
        ChainComplex C = chain_complex(K);
        ChainComplex O = oracle::simplicial_oracle(by_dim(K));
        for (int i = 0; i <= K.dim(); ++i) CHECK(betti(C, i) == oracle::betti(O, i));
    }
    CHECK(betti_numbers(chain_complex(fx::sphere(3)), 0, 3) == std::vector<std::size_t>{1, 0, 0, 1});
    CHECK(betti_numbers(chain_complex(fx::torus7()), 0, 2) == std::vector<std::size_t>{1, 2, 1});
    // Over Q the Klein bottle has b = (1, 1, 0) and Euler characteristic 0.
    CHECK(betti_numbers(chain_complex(fx::klein8()), 0, 2) == std::vector<std::size_t>{1, 1, 0});
    CHECK(chain_complex(fx::klein8()).euler_characteristic() == 0);
    CHECK(fx::torus7().count(2) == 14);
    CHECK(fx::klein8().count(1) == 24);
}

TEST_CASE("facet input is validated", "[simplicial]") {
    CHECK_THROWS_AS(SimplicialComplex::from_facets(3, {{0, 0, 1}}), MathError);
    CHECK_THROWS_AS(SimplicialComplex::from_facets(3, {{0, 3}}), MathError);
    CHECK_THROWS_AS(make_simplicial_pair(fx::sphere(1), {{0, 1, 2}}), MathError);
    SimplicialComplex K = SimplicialComplex::from_facets(4, {{2, 0, 1}});
    CHECK(K.contains({0, 1, 2}));
    CHECK(K.facets() == std::vector<Simplex>{{0, 1, 2}, {3}});
}

TEST_CASE("relative chains of a ball give a sphere shifted up", "[simplicial]") {
    for (int n = 1; n <= 4; ++n) {
        ChainComplex R = relative_chain_complex(fx::ball_pair(n));
        for (int i = 0; i <= n; ++i) CHECK(betti(R, i) == (i == n ? 1u : 0u));
    }
}

TEST_CASE("vertex maps give chain maps", "[simplicial]") {
    std::mt19937 rng(11);
    for (int t = 0; t < 20; ++t) {
        RandomMap m = random_simplicial_map(rng);
        ChainMap f = simplicial_map(m.K, m.L, m.f);  // constructor checks commutation
        ChainMap e = compose(augmentation(f.target()), f);
        CHECK(e.at(0) == augmentation(f.source()).at(0));
    }
    CHECK_THROWS_AS(simplicial_map(fx::simplex(2), fx::sphere(1), {0, 1, 2}), MathError);
    CHECK_THROWS_AS(simplicial_map(fx::simplex(2), fx::sphere(1), {0, 1}), MathError);
    // the reflection of the circle has degree -1
    ChainMap r = simplicial_map(fx::sphere(1), fx::sphere(1), {0, 2, 1});
    CHECK(homology_map(r, 1)(0, 0) == -1);
}

TEST_CASE("cup product identities on cochains", "[simplicial]") {
    std::mt19937 rng(5);
    SimplicialComplex K = random_complex(7, 6, 4, rng);
    for (int t = 0; t < 10; ++t)
        for (int p = 0; p <= 2; ++p)
            for (int q = 0; p + q + 1 <= K.dim(); ++q) {
                Cochain a = random_cochain(K, p, rng), b = random_cochain(K, q, rng), c = random_cochain(K, 1, rng);
                Cochain lhs = coboundary(K, cup(K, a, b));
                Cochain r1 = cup(K, coboundary(K, a), b), r2 = cup(K, a, coboundary(K, b));
                Vec rhs = r1.values;
                for (std::size_t i = 0; i < rhs.size(); ++i) rhs[i] += ((p % 2) ? -1 : 1) * r2.values[i];
                CHECK(lhs.values == rhs);
                if (p + q + 1 <= K.dim())
                    CHECK(cup(K, cup(K, a, b), c).values == cup(K, a, cup(K, b, c)).values);
            }
    Cochain one{0, Vec(K.count(0), Q(1))};
    Cochain x = random_cochain(K, 2, rng);
    CHECK(cup(K, one, x).values == x.values);
    CHECK(cup(K, x, one).values == x.values);
}

TEST_CASE("cap product identities on chains", "[simplicial]") {
    std::mt19937 rng(6);
    SimplicialComplex K = random_complex(7, 6, 4, rng);
    ChainComplex C = chain_complex(K);
    Cochain one{0, Vec(K.count(0), Q(1))};
    for (int n = 1; n <= K.dim(); ++n)
        for (int p = 0; p <= n; ++p)
            for (int t = 0; t < 4; ++t) {
                Vec c = random_chain(K, n, rng);
                Cochain a = random_cochain(K, p, rng);
                CHECK(cap(K, one, c, n) == c);
                // evaluation: <b, a cap c> = <b cup a, c>
                if (p < n) {
                    Cochain b = random_cochain(K, n - p, rng);
                    CHECK(evaluate(b, cap(K, a, c, n)) == evaluate(cup(K, b, a), c));
                }
                for (int q = 0; p + q <= n; ++q) {
                    Cochain b = random_cochain(K, q, rng);
                    CHECK(cap(K, cup(K, a, b), c, n) == cap(K, a, cap(K, b, c, n), n - q));
                }
                if (p < n) {
                    Vec lhs = C.d(n - p) * cap(K, a, c, n);
                    Vec r1 = p <= n - 1 ? cap(K, a, C.d(n) * c, n - 1) : Vec{};
                    Vec r2 = cap(K, coboundary(K, a), c, n);
                    for (std::size_t i = 0; i < lhs.size(); ++i) r1[i] += (((n - p) % 2) ? -1 : 1) * r2[i];
                    CHECK(lhs == r1);
                }
            }
    CHECK_THROWS_AS(cap(K, random_cochain(K, 2, rng), random_chain(K, 1, rng), 1), MathError);
}

TEST_CASE("torus cup and cap products", "[simplicial]") {
    SimplicialComplex T = fx::torus7();
    ChainComplex C = chain_complex(T);
    Vec fund = fundamental_cycle(T);
    CHECK((C.d(2) * fund) == zero_vec(T.count(1)));
    HomologyBasis h1 = cohomology(C, 1);
    REQUIRE(h1.dim() == 2);
    Cochain a{1, h1.reps.column(0)}, b{1, h1.reps.column(1)};
    // cup of the two generators is a generator of H^2; squares vanish
    Q ab = evaluate(cup(T, a, b), fund), ba = evaluate(cup(T, b, a), fund);
    CHECK(ab != 0);
    CHECK(ba == -ab);
    CHECK(evaluate(cup(T, a, a), fund) == 0);
    CHECK(evaluate(cup(T, b, b), fund) == 0);
    // a cap [T] is a 1-cycle detected by b but not by a
    Vec ac = cap(T, a, fund, 2);
    CHECK(C.d(1) * ac == zero_vec(T.count(0)));
    CHECK(evaluate(a, ac) == 0);
    CHECK(evaluate(b, ac) == ba);
}

TEST_CASE("fundamental cycles and their failures", "[simplicial]") {
    for (int d = 1; d <= 4; ++d) {
        SimplicialComplex S = fx::sphere(d);
        Vec z = fundamental_cycle(S);
        CHECK(chain_complex(S).d(d) * z == zero_vec(S.count(d - 1)));
        Vec neg = fundamental_cycle(S, nullptr, -1);
        for (std::size_t i = 0; i < z.size(); ++i) CHECK(neg[i] == -z[i]);
    }
    CHECK_THROWS_WITH(fundamental_cycle(fx::klein8()), Catch::Matchers::ContainsSubstring("non-orientable"));
    CHECK_THROWS_WITH(fundamental_cycle(disjoint_union(fx::sphere(1), fx::sphere(1))),
                      Catch::Matchers::ContainsSubstring("not connected"));
    CHECK_THROWS_WITH(fundamental_cycle(SimplicialComplex::from_facets(5, {{0, 1, 2}, {0, 1, 3}, {0, 1, 4}})),
                      Catch::Matchers::ContainsSubstring("pseudomanifold"));
    // a disc needs its boundary declared
    SimplicialPair D = fx::disc4();
    CHECK_THROWS_AS(fundamental_cycle(D.ambient), MathError);
    Vec a = fundamental_cycle(D.ambient, &D);
    CHECK(a.size() == 2);
}

TEST_CASE("Poincare-Lefschetz duality on pairs", "[simplicial]") {
    SECTION("disc") {
        SimplicialPair D = fx::disc4();
        Vec a = fundamental_cycle(D.ambient, &D);
        PdReport rep = verify_pd_pair(D, 2, a);
        CHECK(rep.duality);
        CHECK(rep.boundary_checked);
        CHECK(rep.boundary_ok);
        CHECK(rep.passed());
        CHECK(rep.degrees[0].cohomology_dim == 1);
        CHECK(rep.degrees[1].cohomology_dim == 0);
        // scaling the class by a nonzero rational does not change the verdict
        for (Q s : {Q(2), frac(1, 3), Q(-1)}) {
            Vec b = a;
            for (auto& x : b) x *= s;
            CHECK(verify_pd_pair(D, 2, b).passed());
        }
        Vec zero = zero_vec(a.size());
        PdReport z = verify_pd_pair(D, 2, zero);
        CHECK_FALSE(z.passed());
        CHECK(z.first_failure == 0);
        Vec one = a;
        one[0] = 0;
        CHECK_THROWS_WITH(verify_pd_pair(D, 2, one), Catch::Matchers::ContainsSubstring("not a relative cycle"));
    }
    SECTION("closed surfaces and spheres") {
        for (auto K : {fx::sphere(2), fx::torus7(), fx::sphere(3)}) {
            SimplicialPair P(K, SimplicialComplex::from_facets(K.vertex_count(), {}, false));
            PdReport rep = verify_pd_pair(P, K.dim(), fundamental_cycle(K));
            CHECK(rep.passed());
            CHECK_FALSE(rep.boundary_checked);
            PdReport z = verify_pd_pair(P, K.dim(), zero_vec(K.count(K.dim())));
            CHECK_FALSE(z.duality);
            CHECK(z.first_failure == 0);
        }
    }
    SECTION("four-ball") {
        SimplicialPair B = fx::ball_pair(4);
        Vec a(1, Q(1));
        PdReport rep = verify_pd_pair(B, 4, a);
        CHECK(rep.passed());
        REQUIRE(rep.boundary_degrees.size() >= 4);
        CHECK(rep.boundary_degrees[3].cohomology_dim == 1);
        // d a is the fundamental class of the boundary 3-sphere
        ChainComplex C = chain_complex(B.ambient);
        CHECK((C.d(4) * a).size() == 5);
    }
    SECTION("a pair that is not a manifold pair fails") {
        // a disc with only part of its boundary marked
        SimplicialComplex D = fx::disc4().ambient;
        SimplicialPair P = make_simplicial_pair(D, {{0, 1}, {1, 2}});
        Vec a = {1, 1};
        CHECK_THROWS_AS(verify_pd_pair(P, 2, a), MathError);
        // the wedge of two circles has no duality in degree 1
        SimplicialComplex W = SimplicialComplex::from_facets(5, {{0, 1}, {1, 2}, {0, 2}, {0, 3}, {3, 4}, {0, 4}});
        SimplicialPair Q0(W, SimplicialComplex::from_facets(5, {}, false));
        Vec z = zero_vec(W.count(1));
        z[*W.index_of({0, 1})] = 1;
        z[*W.index_of({1, 2})] = 1;
        z[*W.index_of({0, 2})] = -1;
        CHECK_FALSE(verify_pd_pair(Q0, 1, z).passed());
    }
}

TEST_CASE("products of complexes", "[simplicial]") {
    SimplicialComplex P = simplicial_product(fx::sphere(1), fx::sphere(1));
    CHECK(betti_numbers(chain_complex(P), 0, 2) == std::vector<std::size_t>{1, 2, 1});
    SimplicialComplex Q2 = simplicial_product(fx::sphere(2), fx::sphere(2));
    CHECK(betti_numbers(chain_complex(Q2), 0, 4) == std::vector<std::size_t>{1, 0, 2, 0, 1});
    SimplicialPair closed(Q2, SimplicialComplex::from_facets(Q2.vertex_count(), {}, false));
    CHECK(verify_pd_pair(closed, 4, fundamental_cycle(Q2)).passed());
    SimplicialComplex B = simplicial_product(fx::simplex(1), fx::sphere(1));
    CHECK(betti_numbers(chain_complex(B), 0, 2) == std::vector<std::size_t>{1, 1, 0});
}

TEST_CASE("simplicial mapping cylinders and cones", "[simplicial]") {
    std::mt19937 rng(21);
    for (int t = 0; t < 25; ++t) {
        RandomMap m = random_simplicial_map(rng);
        ChainMap f = simplicial_map(m.K, m.L, m.f);
        SimplicialCylinder cyl = simplicial_mapping_cylinder(m.K, m.L, m.f);
        ChainComplex CC = chain_complex(cyl.complex);
        int top = std::max(m.K.dim(), m.L.dim()) + 1;
        // the cylinder retracts onto the target
        CHECK(betti_numbers(CC, 0, top) == betti_numbers(chain_complex(m.L), 0, top));
        std::vector<int> retract(static_cast<std::size_t>(cyl.complex.vertex_count()));
        for (int v = 0; v < m.K.vertex_count(); ++v)
            retract[static_cast<std::size_t>(cyl.source_vertex[static_cast<std::size_t>(v)])] = m.f[static_cast<std::size_t>(v)];
        for (int w = 0; w < m.L.vertex_count(); ++w) retract[static_cast<std::size_t>(cyl.target_vertex[static_cast<std::size_t>(w)])] = w;
        CHECK(is_quasi_isomorphism(simplicial_map(cyl.complex, m.L, retract)));
        // reduced homology of the simplicial cone equals the algebraic cone
        SimplicialCylinder cone = simplicial_mapping_cone(m.K, m.L, m.f);
        ChainComplex alg = cone_complex(f);
        auto red = reduced_betti_numbers(chain_complex(cone.complex), 0, top);
        for (int i = 0; i <= top; ++i) CHECK(red[static_cast<std::size_t>(i)] == betti(alg, i));
    }
    // cone of the boundary inclusion of a triangle is a 2-sphere
    SimplicialComplex S1 = fx::sphere(1), D = fx::simplex(2);
    SimplicialCylinder c = simplicial_mapping_cone(S1, D, {0, 1, 2});
    CHECK(reduced_betti_numbers(chain_complex(c.complex), 0, 3) == std::vector<std::size_t>{0, 0, 1, 0});
}
