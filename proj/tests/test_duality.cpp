#include "oracles.hpp"
#include "wd/duality.hpp"
#include "wd/fixtures.hpp"

#include <catch_amalgamated.hpp>

#include <random>

using namespace wd;
namespace fx = wd::fixtures;

namespace {

std::vector<std::size_t> reduced_oracle(const ChainComplex& c, int lo, int hi) {
    auto b = oracle::bettis(c, lo, hi);
    if (lo <= 0 && b[static_cast<std::size_t>(-lo)] > 0) b[static_cast<std::size_t>(-lo)] -= 1;
    return b;
}

std::vector<std::pair<std::string, LinkBundleData>> bundle_fixtures() {
    return {{"S3 id", fx::s3_link()},           {"S1xS2 id", fx::s1xs2_link(false)},
            {"S1xS2 order 2", fx::s1xs2_link(true)}, {"swap id", fx::swap_link(false)},
            {"swap order 2", fx::swap_link(true)},   {"S4 id", fx::s4_link()}};
}

// Random perversity of length len and its complement.
PerversityPair random_pair(std::mt19937& rng, std::size_t len) {
    std::uniform_int_distribution<int> step(0, 1);
    std::vector<int> p{0}, q{0};
    for (std::size_t i = 1; i < len; ++i) {
        p.push_back(p.back() + step(rng));
        q.push_back(static_cast<int>(i) - p.back());
    }
    return {Perversity::table(p), Perversity::table(q)};
}

}  // namespace

TEST_CASE("cut-off degrees") {
    PerversityPair mid = middle_perversities();
    Cutoff c3 = cutoff_degrees(3, mid);
    CHECK(c3.k == 2);
    CHECK(c3.l == 2);
    Cutoff c4 = cutoff_degrees(4, mid);
    CHECK(c4.lo() == 2);
    CHECK(c4.hi() == 3);
    Cutoff c6 = cutoff_degrees(6, mid);
    CHECK(c6.k == 3);
    CHECK(c6.l == 4);
    for (int c = 1; c <= 40; ++c) {
        Cutoff r = cutoff_degrees(c, mid);
        CHECK(r.k == (c + 1) / 2);
        CHECK(r.l == (c + 2) / 2);
    }

    std::mt19937 rng(5);
    for (int t = 0; t < 50; ++t) {
        PerversityPair pp = random_pair(rng, 20);
        for (int c = 1; c <= 20; ++c) CHECK(cutoff_degrees(c, pp).k + cutoff_degrees(c, pp).l == c + 1);
    }
    CHECK_THROWS_WITH(cutoff_degrees(0, mid), Catch::Matchers::ContainsSubstring(">= 1"));
    CHECK_THROWS_WITH(Perversity::table({1, 1}), Catch::Matchers::ContainsSubstring("p(2)"));
    CHECK_THROWS_WITH(Perversity::table({0, 2}), Catch::Matchers::ContainsSubstring("growth"));
    PerversityPair bad{Perversity::lower_middle(), Perversity::lower_middle()};
    CHECK_THROWS_WITH(cutoff_degrees(5, bad), Catch::Matchers::ContainsSubstring("complementary"));
    PerversityPair shorty{Perversity::table({0, 0}), Perversity::table({0, 1})};
    CHECK_THROWS_WITH(cutoff_degrees(5, shorty), Catch::Matchers::ContainsSubstring("does not reach"));
}

TEST_CASE("flat bundles: reduced cone homology vanishes below max(k, l)") {
    for (auto& [name, data] : bundle_fixtures()) {
        INFO(name);
        FlatBundle B = build_flat_bundle(data);
        CHECK(B.n == data.fiber_dim + 2);
        CHECK(B.lemma_ok);
        auto want = reduced_oracle(B.cone.complex, 0, B.n);
        CHECK(B.cone_reduced_betti == want);
        for (int i = 0; i < B.cut.hi(); ++i) CHECK(want[static_cast<std::size_t>(i)] == 0);
        // the truncation is a Moore approximation of degree min(k, l)
        const ChainComplex& T = B.truncation->truncated;
        for (int i = 0; i <= data.fiber_dim; ++i) {
            if (i < B.cut.lo()) CHECK(oracle::betti(T, i) == oracle::betti(data.fiber, i));
            else CHECK(oracle::betti(T, i) == 0);
        }
        for (auto& slot : B.cone.mayer_vietoris) CHECK(slot.exact);
    }

    FlatBundle s3 = build_flat_bundle(fx::s3_link());
    CHECK(oracle::bettis(s3.chains.ft, 0, 2) == std::vector<std::size_t>{1, 1, 0});
    CHECK(oracle::bettis(s3.chains.E, 0, 4) == std::vector<std::size_t>{1, 1, 0, 1, 1});
    CHECK(s3.cone_reduced_betti == std::vector<std::size_t>{0, 0, 0, 1, 1, 0});

    FlatBundle tw = build_flat_bundle(fx::s1xs2_link(true));
    CHECK(oracle::bettis(tw.chains.E, 0, 4) == std::vector<std::size_t>{1, 1, 0, 1, 1});
    CHECK(tw.cone_reduced_betti == std::vector<std::size_t>{0, 0, 0, 1, 1, 0});
}

TEST_CASE("equivariant truncation of the swap model") {
    LinkBundleData data = fx::swap_link(true);
    FlatBundle B = build_flat_bundle(data);
    const TruncationResult& t = *B.truncation;
    const ChainMap& lam = *data.monodromy;
    for (int i = 0; i <= 3; ++i) {
        CHECK(t.inclusion.at(i) * t.monodromy.at(i) == lam.at(i) * t.inclusion.at(i));
        CHECK(t.monodromy.at(i) * t.monodromy.at(i) == Matrix::identity(t.truncated.rank(i)));
    }
    CHECK_FALSE(is_identity(t.monodromy));
}

TEST_CASE("flat bundle input errors") {
    ChainComplex s2s2(0, {1, 0, 2, 0, 1});
    CHECK_THROWS_WITH(build_flat_bundle(fx::flat_link(s2s2, 4, ChainMap::identity(s2s2), 1)),
                      Catch::Matchers::ContainsSubstring("Witt condition"));
    ChainComplex L = fx::s1xs2_cells();
    ChainMap rev(L, L, {{0, Matrix::identity(1)}, {1, Matrix::identity(1)}, {2, Matrix::identity(1)}, {3, Matrix{{-1}}}});
    CHECK_THROWS_WITH(build_flat_bundle(fx::flat_link(L, 3, rev, 2)), Catch::Matchers::ContainsSubstring("fiber class"));
    LinkBundleData wrong_order = fx::s1xs2_link(true);
    wrong_order.order = 3;
    CHECK_THROWS_WITH(build_flat_bundle(wrong_order), Catch::Matchers::ContainsSubstring("order"));
    LinkBundleData none;
    none.fiber = L;
    none.fiber_dim = 3;
    CHECK_THROWS_WITH(build_flat_bundle(none), Catch::Matchers::ContainsSubstring("monodromy"));
}

TEST_CASE("local duality obstructions") {
    // S^3 link: every complementary pair has a zero factor
    FlatBundle s3 = build_flat_bundle(fx::s3_link());
    ObstructionReport r = local_duality_obstructions(fx::s3_link(), s3);
    CHECK(r.source == ProductSource::ranks_only);
    CHECK_FALSE(r.refused);
    CHECK(r.all_vanish());
    REQUIRE(r.degrees.size() == 3);
    auto rb = reduced_oracle(s3.cone.complex, 0, 4);
    for (const auto& d : r.degrees) {
        CHECK((rb[static_cast<std::size_t>(d.i)] == 0 || rb[static_cast<std::size_t>(4 - d.i)] == 0));
        CHECK(d.by_ranks);
    }

    // S^1 x S^2: degree-2 classes pair with themselves, so ranks alone refuse
    LinkBundleData plain = fx::s1xs2_link(false);
    FlatBundle b = build_flat_bundle(plain);
    ObstructionReport refused = local_duality_obstructions_by_ranks(b.cone.complex, b.n);
    CHECK(refused.refused);
    CHECK_FALSE(refused.all_vanish());
    ObstructionReport table = local_duality_obstructions(plain, b);
    CHECK(table.source == ProductSource::ring_table);
    CHECK(table.trusted);
    CHECK(table.all_vanish());
    plain.cone_ring->dims = {0, 0, 2, 2, 1};
    CHECK_THROWS_WITH(local_duality_obstructions(plain, b), Catch::Matchers::ContainsSubstring("does not match"));

    for (bool tw : {false, true}) {
        LinkBundleData s = fx::swap_link(tw);
        CHECK(local_duality_obstructions(s, build_flat_bundle(s)).all_vanish());
    }

    // cone of a point into the torus: H^1 x H^1 -> H^2 is onto, so O_1 != 0 for n = 3
    SimplicialComplex T = fx::torus7();
    SimplicialComplex pt = SimplicialComplex::from_facets(1, {{0}});
    SimplicialCylinder cone = simplicial_mapping_cone(pt, T, {0});
    ObstructionReport ot = local_duality_obstructions(cone.complex, 3);
    CHECK(ot.source == ProductSource::simplicial);
    REQUIRE(ot.degrees.size() == 1);
    CHECK(ot.degrees[0].span.cols() == 1);
    // exhaustive oracle: some product of two degree-1 classes pairs nontrivially with [T]
    ChainComplex CT = chain_complex(cone.complex);
    HomologyBasis h1 = cohomology(CT, 1);
    SimplicialComplex Tc = SimplicialComplex::from_facets(cone.complex.vertex_count(), {});
    Vec fc = zero_vec(cone.complex.count(2));
    Vec ft = fundamental_cycle(T);
    for (std::size_t j = 0; j < T.count(2); ++j) {
        Simplex s;
        for (int v : T.simplices(2)[j]) s.push_back(cone.target_vertex[static_cast<std::size_t>(v)]);
        std::sort(s.begin(), s.end());
        fc[*cone.complex.index_of(s)] = ft[j];
    }
    bool nonzero = false;
    for (std::size_t a = 0; a < h1.dim(); ++a)
        for (std::size_t c = 0; c < h1.dim(); ++c) {
            Vec v = cup(cone.complex, {1, h1.reps.column(a)}, {1, h1.reps.column(c)}).values;
            Q s = 0;
            for (std::size_t k = 0; k < v.size(); ++k) s += v[k] * fc[k];
            nonzero = nonzero || sgn(s) != 0;
        }
    CHECK(nonzero);

    // ring route: CP^2-type table has a nonzero square in the middle
    ObstructionReport oc = local_duality_obstructions(fx::cp2_ring(), 5);
    CHECK(oc.degrees[1].i == 2);
    CHECK(oc.degrees[1].span.cols() == 1);
    CHECK_FALSE(oc.all_vanish());
    CHECK_THROWS(local_duality_obstructions(fx::cp2_ring(), 2));
}

TEST_CASE("one-cell completion criterion on the S^3 fixture") {
    LinkBundleData data = fx::s3_link();
    FlatBundle B = build_flat_bundle(data);
    Vec z = canonical_witness(B);
    DualityReport rep = verify_completion_criterion(B, z, data);
    CHECK(rep.hypotheses);
    CHECK(rep.statement_ii);
    CHECK(rep.statement_ii_pair);
    CHECK(rep.statement_i);
    CHECK(rep.remark_betti);
    CHECK(rep.remark_relative);
    CHECK(rep.obstructions.all_vanish());
    CHECK_FALSE(rep.inconsistency);
    CHECK_FALSE(rep.completion_refused);
    CHECK(rep.passed());
    for (const auto& c : rep.checks) {
        INFO(c.name << " r=" << c.degree);
        CHECK(c.ok);
    }
    // Betti consequence computed independently
    AttachResult A = attach_top_cell(B.cone.complex, z, 5);
    CHECK(oracle::betti(A.complex, 4) + 1 == oracle::betti(B.cone.complex, 4));
    CHECK(oracle::betti(A.complex, 5) == 0);

    // a positive multiple of the witness gives the same verdicts
    Vec z3 = z;
    for (auto& x : z3) x *= 3;
    DualityReport rep3 = verify_completion_criterion(B, z3, data);
    CHECK(rep3.passed());
    CHECK(rep3.lift[0] * 3 == rep.lift[0]);

    // zero witness: [E] != 0 in H_4(X) but the connecting map is zero
    DualityReport zero = verify_completion_criterion(B, zero_vec(z.size()), data);
    CHECK_FALSE(is_zero(zero.e_class));
    CHECK_FALSE(zero.statement_ii);
    CHECK_FALSE(zero.statement_i);
    CHECK(zero.completion_refused);
    CHECK_FALSE(zero.inconsistency);

    Vec bad = zero_vec(z.size() + 1);
    CHECK_THROWS(verify_completion_criterion(B, bad, data));
}

TEST_CASE("completion criterion on the other flat bundles") {
    for (auto& [name, data] : bundle_fixtures()) {
        INFO(name);
        FlatBundle B = build_flat_bundle(data);
        DualityReport rep = verify_completion_criterion(B, canonical_witness(B), data);
        CHECK(rep.hypotheses);
        CHECK(rep.statement_ii);
        CHECK(rep.passed());
        CHECK_FALSE(rep.obstructions.refused);
        CHECK(rep.obstructions.all_vanish());
    }
}

TEST_CASE("intersection space assembly") {
    WittSpaceSpec spec = fx::d4xs1_spec();
    IntersectionSpace ix = assemble_intersection_space(spec);
    CHECK(ix.mv_exact);
    CHECK(ix.boundary_bounds);
    ChainMap g = compose(spec.boundary, ix.bundles[0].chains.F);
    ChainMap aug = augmentation(ix.bundles[0].chains.ft);
    for (int i = 0; i <= 5; ++i) CHECK(oracle::betti(ix.complex, i) == oracle::pushout_betti(g, aug, i));
    CHECK(oracle::bettis(ix.complex, 0, 5) == std::vector<std::size_t>{1, 0, 0, 0, 0, 0});

    WittSpaceSpec empty = spec;
    empty.strata.clear();
    IntersectionSpace im = assemble_intersection_space(empty);
    CHECK(same_complex(im.complex, spec.M));

    WittSpaceSpec two = fx::doubled_spec();
    IntersectionSpace i2 = assemble_intersection_space(two);
    CHECK(i2.mv_exact);
    CHECK(i2.boundary_bounds);
    ChainMap F2 = disjoint_union(i2.bundles[0].chains.F, i2.bundles[1].chains.F);
    ChainMap g2 = compose(two.boundary, F2);
    ChainMap aug2 = augmentation(F2.source());
    for (int i = 0; i <= 5; ++i) CHECK(oracle::betti(i2.complex, i) == oracle::pushout_betti(g2, aug2, i));

    WittSpaceSpec wrong = spec;
    wrong.strata[0] = fx::s1xs2_link(false);
    CHECK_THROWS_WITH(assemble_intersection_space(wrong), Catch::Matchers::ContainsSubstring("boundary mismatch"));
    WittSpaceSpec low = spec;
    low.n = 2;
    CHECK_THROWS(assemble_intersection_space(low));
}

TEST_CASE("one-cell completion of intersection spaces") {
    WittSpaceSpec spec = fx::d4xs1_spec();
    IntersectionSpace ix = assemble_intersection_space(spec);
    Completion c = klimczak_completion(spec, ix, {canonical_witness(ix.bundles[0])});
    CHECK(c.passed());
    for (int r = 1; r <= 4; ++r) CHECK(oracle::betti(c.complex, r) == oracle::betti(ix.complex, r));
    CHECK(oracle::betti(c.complex, 5) == 1);
    for (int r = 0; r <= 5; ++r) CHECK(oracle::betti(c.complex, r) == oracle::betti(c.complex, 5 - r));

    WittSpaceSpec two = fx::doubled_spec();
    IntersectionSpace i2 = assemble_intersection_space(two);
    Completion c2 = klimczak_completion(two, i2, {canonical_witness(i2.bundles[0]), canonical_witness(i2.bundles[1])});
    CHECK(c2.passed());
    CHECK(oracle::betti(c2.complex, 5) == 1);

    // inconsistent boundary orientation: the witnesses add up to 2[E] in IX
    WittSpaceSpec bad = two;
    bad.strata[1].orientation = 1;
    IntersectionSpace ib = assemble_intersection_space(bad);
    CHECK_FALSE(ib.boundary_bounds);
    Completion cb = klimczak_completion(bad, ib, {canonical_witness(ib.bundles[0]), canonical_witness(ib.bundles[1])});
    CHECK_FALSE(cb.passed());

    // no strata on a closed M: the zero witness adds a wedge summand
    WittSpaceSpec closed;
    closed.n = 5;
    closed.M = fx::sphere_cells(5);
    IntersectionSpace ic = assemble_intersection_space(closed);
    Completion cc = klimczak_completion(closed, ic, {});
    CHECK_FALSE(cc.passed());
    CHECK(cc.betti_hat[5] == 2);

    // zero stratum witness is refused
    Completion cz = klimczak_completion(spec, ix, {zero_vec(canonical_witness(ix.bundles[0]).size())});
    CHECK_FALSE(cz.strata_ok);
    CHECK_FALSE(cz.passed());
}

TEST_CASE("signatures") {
    SimplicialPair d4 = fx::d4_pair();
    Vec a = fundamental_cycle(d4.ambient, &d4);
    CHECK(novikov_signature(d4, 4, a).signature == 0);
    CHECK(novikov_signature(d4, 4, a).form.dim() == 0);

    SimplicialComplex P = simplicial_product(fx::sphere(2), fx::sphere(2));
    SimplicialPair closed(P, SimplicialComplex::from_facets(P.vertex_count(), {}, false));
    Vec fp = fundamental_cycle(P);
    SignatureResult s = novikov_signature(closed, 4, fp);
    CHECK(s.signature == 0);
    CHECK(s.form.dim() == 2);
    // hyperbolic oracle: nondegenerate 2x2 form with determinant -1 and a zero diagonal in some basis
    CHECK(s.form.matrix(0, 0) * s.form.matrix(1, 1) - s.form.matrix(0, 1) * s.form.matrix(1, 0) == -1);
    CHECK(s.witt.is_zero());

    SimplicialPair pm = fx::punctured_s2xs2();
    Vec am = fundamental_cycle(pm.ambient, &pm);
    SignatureResult sm = novikov_signature(pm, 4, am);
    CHECK(sm.signature == 0);
    CHECK(diagonalize_symmetric(sm.form).diagonal.size() == 2);
    Vec neg = am;
    for (auto& x : neg) x = -x;
    CHECK(novikov_signature(pm, 4, neg).signature == 0);

    SignatureResult cp = novikov_signature(fx::cp2_ring(), 4, Vec{1});
    CHECK(cp.signature == 1);
    CHECK(cp.trusted);
    CHECK(novikov_signature(fx::cp2_ring(), 4, Vec{-1}).signature == -1);
    CHECK(novikov_signature(fx::cp2_ring(), 4, Vec{frac(1, 3)}).signature == 1);
    CHECK(novikov_signature(fx::s2xs2_ring(), 4, Vec{1}).witt.is_zero());

    // additivity under disjoint union
    CohomologyRing two = ring_disjoint_union(fx::cp2_ring(), fx::cp2_ring());
    CHECK(novikov_signature(two, 4, Vec{1, 1}).signature == 2);
    SignatureResult mixed = novikov_signature(two, 4, Vec{1, -1});
    CHECK(mixed.signature == 0);
    CHECK(mixed.witt.is_zero());
    CohomologyRing cs = ring_disjoint_union(fx::cp2_ring(), fx::s2xs2_ring());
    CHECK(novikov_signature(cs, 4, Vec{1, 1}).signature == 1);
    SimplicialComplex PP = disjoint_union(P, P);
    SimplicialPair cpp(PP, SimplicialComplex::from_facets(PP.vertex_count(), {}, false));
    Vec fpp = fp;
    fpp.insert(fpp.end(), fp.begin(), fp.end());
    SignatureResult spp = novikov_signature(cpp, 4, fpp);
    CHECK(spp.signature == 2 * s.signature);
    CHECK(spp.form.dim() == 4);

    CHECK_THROWS_WITH(novikov_signature(d4, 4, zero_vec(a.size())), Catch::Matchers::ContainsSubstring("orientation"));
    CHECK_THROWS_WITH(novikov_signature(fx::cp2_ring(), 6, Vec{}), Catch::Matchers::ContainsSubstring("4d"));
}

TEST_CASE("Witt classes of completions of isolated singularities") {
    for (auto pair : {fx::d4_pair(), fx::punctured_s2xs2()}) {
        Vec a = fundamental_cycle(pair.ambient, &pair);
        for (int sign : {1, -1}) {
            Vec as = a;
            for (auto& x : as) x *= sign;
            IsolatedCompletion c = isolated_completion(pair, 4, as);
            CHECK(c.passed());
            CHECK(c.pd.passed());
            CHECK(c.obstructions.all_vanish());
            CHECK(c.betti_agree);
            for (int r = 0; r <= 4; ++r) CHECK(oracle::betti(chain_complex(c.complex), r) == c.betti_hat[static_cast<std::size_t>(r)]);
            WittComparison w = compare_witt(pair, 4, as);
            CHECK(w.witt_equal);
            CHECK(w.signatures_equal);
            CHECK(w.completed.witt.is_zero());
        }
    }
    SimplicialPair pm = fx::punctured_s2xs2();
    Vec a = fundamental_cycle(pm.ambient, &pm);
    IsolatedCompletion c = isolated_completion(pm, 4, a);
    CHECK(c.betti_hat == std::vector<std::size_t>{1, 0, 2, 0, 1});
    CHECK_THROWS_WITH(compare_witt(pm, 5, a), Catch::Matchers::ContainsSubstring("4d"));
}

TEST_CASE("converse dimension bound") {
    CHECK(converse_dimension_bound(1, 3));
    CHECK_FALSE(converse_dimension_bound(2, 3));
    CHECK(converse_dimension_bound(2, 4));
    CHECK_FALSE(converse_dimension_bound(4, 4));
    CHECK(converse_dimension_bound(1, 6));
}
