#ifndef WD_DUALITY_HPP
#define WD_DUALITY_HPP

// Truncation cones of flat link bundles, local duality obstructions,
// intersection spaces, their one-cell completions, and the signature
// comparison in dimensions divisible by four.

#include "wd/simplicial.hpp"
#include "wd/sullivan.hpp"

#include <optional>

namespace wd {

// ---------------------------------------------------------------------------
// Perversities and cut-off degrees

struct Perversity {
    enum class Kind { lower_middle, upper_middle, table };
    Kind kind = Kind::lower_middle;
    std::vector<int> values;  // values[s - 2] for tables

    static Perversity lower_middle() { return {Kind::lower_middle, {}}; }
    static Perversity upper_middle() { return {Kind::upper_middle, {}}; }
    static Perversity table(std::vector<int> v) {
        Perversity p{Kind::table, std::move(v)};
        if (p.values.empty()) throw MathError("perversity table is empty");
        p.check_growth(static_cast<int>(p.values.size()) + 1);
        return p;
    }

    int operator()(int s) const {
        if (s < 2) throw MathError("perversities are defined for s >= 2");
        switch (kind) {
        case Kind::lower_middle: return s / 2 - 1;
        case Kind::upper_middle: return (s + 1) / 2 - 1;
        default:
            if (static_cast<std::size_t>(s - 2) >= values.size())
                throw MathError("perversity table does not reach s = " + std::to_string(s));
            return values[static_cast<std::size_t>(s - 2)];
        }
    }

    std::string name() const {
        if (kind == Kind::lower_middle) return "m";
        if (kind == Kind::upper_middle) return "n";
        std::string s = "table:";
        for (std::size_t i = 0; i < values.size(); ++i) s += (i ? "," : "") + std::to_string(values[i]);
        return s;
    }

    // p(2) = 0 and p(s) <= p(s+1) <= p(s) + 1 up to smax.
    void check_growth(int smax) const {
        if ((*this)(2) != 0) throw MathError("invalid perversity: p(2) != 0");
        for (int s = 2; s < smax; ++s) {
            int a = (*this)(s), b = (*this)(s + 1);
            if (b < a || b > a + 1) throw MathError("invalid perversity: growth fails at s = " + std::to_string(s));
        }
    }
};

struct PerversityPair {
    Perversity p, q;
};

// Ordered so that k = floor((c+1)/2) <= l.
inline PerversityPair middle_perversities() { return {Perversity::upper_middle(), Perversity::lower_middle()}; }

inline void check_complementary(const PerversityPair& pp, int smax) {
    pp.p.check_growth(smax);
    pp.q.check_growth(smax);
    for (int s = 2; s <= smax; ++s)
        if (pp.p(s) + pp.q(s) != s - 2)
            throw MathError("invalid perversity: p and q are not complementary at s = " + std::to_string(s));
}

struct Cutoff {
    int k = 0, l = 0;
    int lo() const { return std::min(k, l); }
    int hi() const { return std::max(k, l); }
};

inline Cutoff cutoff_degrees(int c, const PerversityPair& pp) {
    if (c < 1) throw MathError("link dimension must be >= 1");
    check_complementary(pp, c + 1);
    Cutoff r{c - pp.p(c + 1), c - pp.q(c + 1)};
    if (r.k + r.l != c + 1) throw MathError("internal: k + l != c + 1");
    return r;
}

// Dimension bound under which vanishing obstructions give back the Hurewicz
// criterion for a simply connected truncation cone.
inline bool converse_dimension_bound(int base_dim, int c) {
    return c % 2 ? 2 * base_dim < c + 1 : 2 * base_dim < c + 4;
}

// ---------------------------------------------------------------------------
// Link bundles

struct BundleChains {
    ChainComplex E, ft;  // total space and fiberwise truncation
    ChainMap F;          // F_< : ft -> E
    Vec fundamental;     // cycle for [E] in degree dim E
};

struct LinkBundleData {
    ChainComplex fiber;
    int fiber_dim = 0;
    std::optional<ChainMap> monodromy;  // finite order chain automorphism of fiber
    int order = 1;
    std::optional<BundleChains> precomputed;
    Vec fiber_class;    // top class of L; empty selects the unique one
    int orientation = 1;  // sign of [E] against the boundary orientation of M
    std::optional<SimplicialComplex> cone_model;  // simplicial model of cone(F_<)
    std::optional<CohomologyRing> cone_ring;      // caller-supplied table for H^*(cone(F_<))
    bool simply_connected_asserted = false;
};

struct FlatBundle {
    int c = 0, n = 0;
    Cutoff cut;
    std::optional<TruncationResult> truncation;
    BundleChains chains;
    PushoutResult cone;  // X = pt u_ft E, with from_x : E -> X
    std::vector<std::size_t> cone_reduced_betti;
    bool lemma_ok = false;  // reduced homology of X vanishes below max(k, l)
};

inline std::size_t reduced_betti(const ChainComplex& c, int i) {
    std::size_t b = betti(c, i);
    return (i == 0 && b > 0) ? b - 1 : b;
}

inline Vec default_fiber_class(const ChainComplex& L, int c, const Vec& given) {
    if (!given.empty()) {
        if (given.size() != L.rank(c) || !is_zero(L.d(c) * given)) throw MathError("fiber class is not a cycle in degree " + std::to_string(c));
        Vec cls = homology(L, c).class_of(given);
        if (is_zero(cls)) throw MathError("fiber class is zero in homology");
        return given;
    }
    HomologyBasis h = homology(L, c);
    if (h.dim() != 1) throw MathError("fiber top homology has rank " + std::to_string(h.dim()) + "; supply the fiber class");
    return h.reps.column(0);
}

inline BundleChains torus_chains(const LinkBundleData& data, const TruncationResult& tr, const Vec& fclass) {
    const ChainMap& lam = *data.monodromy;
    TorusResult T = algebraic_mapping_torus(lam), Tl = algebraic_mapping_torus(tr.monodromy);
    BundleChains b;
    b.E = T.torus;
    b.ft = Tl.torus;
    b.F = torus_map(tr.inclusion, Tl.torus, T.torus);
    int c = data.fiber_dim;
    // [E] = (0, [L]) in E_{c+1} = L_{c+1} + L_c
    Vec e = zero_vec(b.E.rank(c + 1));
    for (std::size_t i = 0; i < fclass.size(); ++i) e[data.fiber.rank(c + 1) + i] = fclass[i] * data.orientation;
    if (!is_zero(b.E.d(c + 1) * e)) throw MathError("monodromy does not preserve the fiber class");
    b.fundamental = e;
    return b;
}

inline FlatBundle build_flat_bundle(const LinkBundleData& data, const PerversityPair& pp = middle_perversities()) {
    FlatBundle B;
    B.c = data.fiber_dim;
    B.cut = cutoff_degrees(B.c, pp);
    if (data.orientation != 1 && data.orientation != -1) throw MathError("orientation sign must be +1 or -1");
    if (data.precomputed) {
        B.chains = *data.precomputed;
    } else {
        if (!data.monodromy) throw MathError("bundle needs a monodromy or precomputed total-space data");
        if (B.c % 2 == 0 && betti(data.fiber, B.c / 2) != 0)
            throw MathError("Witt condition fails: H_" + std::to_string(B.c / 2) + "(L) != 0");
        Vec fclass = default_fiber_class(data.fiber, B.c, data.fiber_class);
        B.truncation = equivariant_moore_truncation(data.fiber, *data.monodromy, data.order, B.cut.lo());
        B.chains = torus_chains(data, *B.truncation, fclass);
    }
    const BundleChains& ch = B.chains;
    if (ch.E.empty()) throw MathError("total space is empty");
    B.n = ch.E.top() + 1;
    if (ch.fundamental.size() != ch.E.rank(B.n - 1) || !is_zero(ch.E.d(B.n - 1) * ch.fundamental))
        throw MathError("fundamental chain of E is not a cycle in degree " + std::to_string(B.n - 1));
    B.cone = homotopy_pushout(ch.F, augmentation(ch.ft));
    for (int i = 0; i <= B.n; ++i) B.cone_reduced_betti.push_back(reduced_betti(B.cone.complex, i));
    B.lemma_ok = true;
    for (int i = 0; i < B.cut.hi(); ++i)
        if (B.cone_reduced_betti[static_cast<std::size_t>(i)] != 0) B.lemma_ok = false;
    if (!B.lemma_ok) throw MathError("internal: truncation cone has reduced homology below max(k, l)");
    return B;
}

// ---------------------------------------------------------------------------
// Local duality obstructions

enum class ProductSource { simplicial, ring_table, ranks_only };

inline const char* source_name(ProductSource s) {
    switch (s) {
    case ProductSource::simplicial: return "simplicial";
    case ProductSource::ring_table: return "ring-table";
    default: return "ranks-only";
    }
}

struct ObstructionDegree {
    int i = 0;
    std::size_t left = 0, right = 0;  // dims of H~^i and H~^{n-1-i}
    Matrix span;                      // basis of O_i in H^{n-1} coordinates
    bool by_ranks = false;            // zero because a factor vanishes
    bool vanishes() const { return span.cols() == 0; }
};

struct ObstructionReport {
    int n = 0;
    ProductSource source = ProductSource::ranks_only;
    bool trusted = false;
    bool refused = false;
    std::string reason;
    std::vector<ObstructionDegree> degrees;  // i = 1 .. n-2; zero outside
    bool all_vanish() const {
        if (refused) return false;
        for (const auto& d : degrees)
            if (!d.vanishes()) return false;
        return true;
    }
};

// Spans of all products of basis classes of complementary degrees.
template <class Product>
ObstructionReport obstructions_from_products(int n, const std::vector<std::size_t>& dims, std::size_t top_dim, Product prod) {
    ObstructionReport rep;
    rep.n = n;
    for (int i = 1; i <= n - 2; ++i) {
        int j = n - 1 - i;
        ObstructionDegree od;
        od.i = i;
        od.left = dims[static_cast<std::size_t>(i)];
        od.right = dims[static_cast<std::size_t>(j)];
        std::vector<Vec> cols;
        for (std::size_t a = 0; a < od.left; ++a)
            for (std::size_t b = 0; b < od.right; ++b) cols.push_back(prod(i, a, j, b));
        od.span = image_basis(Matrix::from_columns(top_dim, cols)).basis();
        rep.degrees.push_back(std::move(od));
    }
    return rep;
}

inline ObstructionReport local_duality_obstructions(const SimplicialComplex& K, int n) {
    if (n < 3) throw MathError("obstructions need n >= 3");
    ChainComplex CK = chain_complex(K);
    std::vector<HomologyBasis> h;
    std::vector<std::size_t> dims;
    for (int p = 0; p <= n - 1; ++p) {
        h.push_back(cohomology(CK, p));
        dims.push_back(h.back().dim());
    }
    auto rep = obstructions_from_products(n, dims, dims[static_cast<std::size_t>(n - 1)],
                                          [&](int i, std::size_t a, int j, std::size_t b) {
                                              Cochain x{i, h[static_cast<std::size_t>(i)].reps.column(a)};
                                              Cochain y{j, h[static_cast<std::size_t>(j)].reps.column(b)};
                                              return h[static_cast<std::size_t>(n - 1)].class_of(cup(K, x, y).values);
                                          });
    rep.source = ProductSource::simplicial;
    return rep;
}

inline ObstructionReport local_duality_obstructions(const CohomologyRing& R, int n) {
    if (n < 3) throw MathError("obstructions need n >= 3");
    if (R.top() < n - 1) throw MathError("ring table stops below degree " + std::to_string(n - 1));
    std::vector<std::size_t> dims;
    for (int p = 0; p <= n - 1; ++p) dims.push_back(R.dim(p));
    auto rep = obstructions_from_products(n, dims, R.dim(n - 1), [&](int i, std::size_t a, int j, std::size_t b) {
        return R.product(i, unit_vec(R.dim(i), a), j, unit_vec(R.dim(j), b));
    });
    rep.source = ProductSource::ring_table;
    rep.trusted = R.trusted;
    return rep;
}

// Without products only a vanishing factor decides; anything else is refused.
inline ObstructionReport local_duality_obstructions_by_ranks(const ChainComplex& cone, int n) {
    if (n < 3) throw MathError("obstructions need n >= 3");
    ObstructionReport rep;
    rep.n = n;
    rep.source = ProductSource::ranks_only;
    std::size_t top = reduced_betti(cone, n - 1);
    for (int i = 1; i <= n - 2; ++i) {
        ObstructionDegree od;
        od.i = i;
        od.left = reduced_betti(cone, i);
        od.right = reduced_betti(cone, n - 1 - i);
        od.span = Matrix(top, 0);
        od.by_ranks = true;
        if (od.left && od.right && top) {
            rep.refused = true;
            rep.reason = "no product structure for degrees " + std::to_string(i) + " and " + std::to_string(n - 1 - i);
        }
        rep.degrees.push_back(std::move(od));
    }
    return rep;
}

// Picks the best product source attached to the bundle and checks that it
// matches the reduced Betti numbers of the chain-level cone.
inline ObstructionReport local_duality_obstructions(const LinkBundleData& data, const FlatBundle& B) {
    int n = B.n;
    auto check_dims = [&](const std::vector<std::size_t>& dims, const char* what) {
        for (int i = 1; i <= n - 1; ++i)
            if (dims[static_cast<std::size_t>(i)] != B.cone_reduced_betti[static_cast<std::size_t>(i)])
                throw MathError(std::string(what) + " does not match the cone's Betti number in degree " + std::to_string(i));
    };
    if (data.cone_model) {
        ChainComplex CK = chain_complex(*data.cone_model);
        std::vector<std::size_t> dims;
        for (int i = 0; i <= n - 1; ++i) dims.push_back(reduced_betti(CK, i));
        check_dims(dims, "simplicial cone model");
        return local_duality_obstructions(*data.cone_model, n);
    }
    if (data.cone_ring) {
        std::vector<std::size_t> dims;
        for (int i = 0; i <= n - 1; ++i) dims.push_back(data.cone_ring->dim(i));
        check_dims(dims, "ring table");
        return local_duality_obstructions(*data.cone_ring, n);
    }
    return local_duality_obstructions_by_ranks(B.cone.complex, n);
}

// ---------------------------------------------------------------------------
// The one-cell completion criterion for a single truncation cone

struct Check {
    std::string name;
    int degree = 0;
    bool ok = false;
    std::string detail;
};

struct DualityReport {
    int n = 0;
    Cutoff cut;
    std::vector<Check> checks;
    std::map<std::string, Matrix> matrices;
    Vec witness;
    Vec e_class;     // image of [E] in H_{n-1}(X)
    Vec lift;        // preimage in H_n(X^phi, X)
    Vec lift_pair;   // [e_phi] in H_n(X^phi, Z)
    bool hypotheses = false;    // H_0 bijection and conditions (1), (2)
    bool statement_ii = false;  // [E] in the image of the connecting map of (X^phi, X)
    bool statement_ii_pair = false;
    bool statement_i = false;   // lift exists and duality holds at rank level
    bool remark_betti = false;
    bool remark_relative = false;
    ObstructionReport obstructions;
    bool inconsistency = false;
    bool completion_refused = true;
    std::vector<std::string> notes;

    bool passed() const { return statement_i && statement_ii && !inconsistency; }
    void add(std::string name, int degree, bool ok, std::string detail = {}) {
        checks.push_back({std::move(name), degree, ok, std::move(detail)});
    }
};

inline const char* stasheff_note() {
    return "uniqueness of the rational homotopy type of the completion is not claimed";
}

inline Vec canonical_witness(const FlatBundle& B) { return B.cone.from_x.at(B.n - 1) * B.chains.fundamental; }

inline bool surjective(const Matrix& m, std::size_t target_dim) { return m.rows() == target_dim && rank(m) == target_dim; }

/**
 * Attaches an n-cell to X = cone(F_<) along z and checks the homological
 * content of the equivalence: membership of [E] in the image of the
 * connecting map, the lift to (X^phi, E), duality ranks together with
 * surjectivity of H_*(E) -> H_*(X^phi), the Betti bookkeeping, and the
 * vanishing of the obstructions whenever the membership holds.
 */
inline DualityReport verify_completion_criterion(const FlatBundle& B, const Vec& z, const LinkBundleData& data) {
    const int n = B.n;
    if (n < 3) throw MathError("n must be >= 3");
    const ChainComplex &Z = B.chains.E, &Y = B.chains.ft, &X = B.cone.complex;
    const ChainMap& inc = B.cone.from_x;
    DualityReport rep;
    rep.n = n;
    rep.cut = B.cut;
    rep.witness = z;

    Matrix h0 = homology_map(B.chains.F, 0);
    bool h0ok = h0.rows() == h0.cols() && rank(h0) == h0.rows();
    rep.add("H_0(ft) -> H_0(E) bijective", 0, h0ok);
    bool c1 = true, c2 = true;
    for (int r = 0; r <= n; ++r) {
        bool ok = surjective(homology_map(inc, r), betti(X, r));
        rep.add("condition 1: H_r(E) -> H_r(X) onto", r, ok);
        c1 = c1 && ok;
        std::size_t a = betti(Y, r), b = reduced_betti(X, n - r - 1);
        ok = a == b;
        rep.add("condition 2: rank H_r(ft) = rank H~_{n-r-1}(X)", r, ok, std::to_string(a) + " vs " + std::to_string(b));
        c2 = c2 && ok;
    }
    rep.hypotheses = h0ok && c1 && c2;

    AttachResult A = attach_top_cell(X, z, n);
    const ChainComplex& Xp = A.complex;
    rep.matrices["connecting (X^phi, X)"] = A.pair.connecting(n);
    rep.e_class = homology(X, n - 1).class_of(inc.at(n - 1) * B.chains.fundamental);
    auto m1 = connecting_image_membership(A.pair, n, rep.e_class);
    rep.statement_ii = m1.member;
    rep.lift = m1.witness;
    rep.add("(ii) [E] in image of connecting map of (X^phi, X)", n, m1.member);

    ChainMap zinc = compose(A.pair.inclusion, inc);
    PairData pz = make_pair(zinc);
    Vec ez = homology(Z, n - 1).class_of(B.chains.fundamental);
    rep.matrices["connecting (X^phi, E)"] = pz.connecting(n);
    auto m2 = connecting_image_membership(pz, n, ez);
    rep.statement_ii_pair = m2.member;
    rep.lift_pair = m2.witness;
    rep.add("lift [e_phi] in H_n(X^phi, E)", n, m2.member);

    bool dual = m2.member;
    for (int r = 0; r <= n; ++r) {
        Matrix hz = homology_map(zinc, r);
        bool onto = surjective(hz, betti(Xp, r));
        std::size_t a = betti(Xp, r), b = betti(pz.relative, n - r);
        rep.add("(i) H_r(E) -> H_r(X^phi) onto", r, onto);
        rep.add("(i) rank H^r(X^phi) = rank H_{n-r}(X^phi, E)", r, a == b, std::to_string(a) + " vs " + std::to_string(b));
        dual = dual && onto && a == b;
    }
    rep.statement_i = dual;

    bool rb = betti(A.pair.relative, n) == 1;
    for (int r = 0; r <= n; ++r) {
        std::size_t bx = betti(X, r), bp = betti(Xp, r);
        rb = rb && (r == n - 1 ? bx > 0 && bp + 1 == bx : bp == bx);
    }
    rep.remark_betti = rb;
    rep.add("H_r(X) = H_r(X^phi) for r != n-1, H_{n-1} drops by one", n - 1, rb);
    bool rr = true;
    for (int r = 0; r <= n; ++r) {
        std::size_t want = r == n ? betti(Y, n - 1) + 1 : (r >= 1 ? reduced_betti(Y, r - 1) : 0);
        rr = rr && betti(pz.relative, r) == want;
    }
    rep.remark_relative = rr;
    rep.add("H_r(X^phi, E) = H~_{r-1}(ft), plus Q in degree n", n, rr);

    rep.obstructions = local_duality_obstructions(data, B);
    if (rep.obstructions.refused) {
        rep.notes.push_back("obstruction check refused: " + rep.obstructions.reason);
    } else {
        rep.add("all O_i = 0", n - 1, rep.obstructions.all_vanish(), source_name(rep.obstructions.source));
        if (rep.obstructions.trusted) rep.notes.push_back("products come from a caller-supplied table");
    }

    if (rep.hypotheses) {
        if (rep.statement_ii != rep.statement_ii_pair) rep.inconsistency = true;
        if (rep.statement_ii && (!rep.statement_i || !rep.remark_betti || !rep.remark_relative)) rep.inconsistency = true;
    }
    if (rep.statement_ii && !rep.obstructions.refused && !rep.obstructions.all_vanish()) rep.inconsistency = true;
    if (rep.inconsistency) rep.notes.push_back("internal inconsistency between the equivalent statements");
    rep.completion_refused = !(rep.statement_ii && rep.statement_i && !rep.inconsistency);
    if (!rep.statement_ii) rep.notes.push_back("no completion along this witness");

    if (betti(Z, 0) != 1) rep.notes.push_back("E is not connected; the canonical duality in degree n-1 needs connectedness");
    rep.notes.push_back(std::string("H_1(X) = 0: ") + (betti(X, 1) == 0 ? "yes" : "no") +
                        " (proxy, not proof of simple connectivity); simply connected asserted: " +
                        (data.simply_connected_asserted ? "yes" : "no"));
    return rep;
}

// ---------------------------------------------------------------------------
// Intersection spaces

struct WittSpaceSpec {
    int n = 0;
    ChainComplex M;
    ChainMap boundary;  // disjoint union of the E^(i), in stratum order, -> M
    std::vector<LinkBundleData> strata;
    PerversityPair perversities = middle_perversities();
};

struct IntersectionSpace {
    ChainComplex complex;
    std::vector<FlatBundle> bundles;
    std::vector<ChainMap> cone_maps;  // cone(F^(i)) -> IX
    ChainMap from_m;
    std::vector<LesSlot> mayer_vietoris;
    bool mv_exact = true;
    bool boundary_bounds = true;  // sum of the oriented [E^(i)] dies in H_{n-1}(M)
};

inline bool same_complex(const ChainComplex& a, const ChainComplex& b) {
    auto [lo, hi] = joint_range(a, b);
    for (int i = lo; i <= hi; ++i)
        if (a.rank(i) != b.rank(i) || a.d(i) != b.d(i)) return false;
    return true;
}

inline IntersectionSpace assemble_intersection_space(const WittSpaceSpec& spec) {
    if (spec.n < 3) throw MathError("Witt space dimension must be >= 3");
    IntersectionSpace ix;
    if (spec.strata.empty()) {
        ix.complex = spec.M;
        ix.from_m = ChainMap::identity(spec.M);
        return ix;
    }
    ChainComplex Eall, ftall;
    ChainMap Fall;
    Vec eall;
    for (std::size_t s = 0; s < spec.strata.size(); ++s) {
        FlatBundle B = build_flat_bundle(spec.strata[s], spec.perversities);
        if (B.n != spec.n) throw MathError("stratum " + std::to_string(s) + " has total-space dimension " + std::to_string(B.n - 1) + ", expected " + std::to_string(spec.n - 1));
        Fall = s == 0 ? B.chains.F : disjoint_union(Fall, B.chains.F);
        eall.insert(eall.end(), B.chains.fundamental.begin(), B.chains.fundamental.end());
        ix.bundles.push_back(std::move(B));
    }
    Eall = Fall.target();
    ftall = Fall.source();
    if (!same_complex(spec.boundary.source(), Eall) || !same_complex(spec.boundary.target(), spec.M))
        throw MathError("boundary mismatch: boundary map does not start at the union of the link bundles");
    PushoutResult P = homotopy_pushout(compose(spec.boundary, Fall), augmentation(ftall));
    ix.complex = P.complex;
    ix.from_m = P.from_x;
    ix.mayer_vietoris = P.mayer_vietoris;
    for (const auto& slot : P.mayer_vietoris) ix.mv_exact = ix.mv_exact && slot.exact;
    ix.boundary_bounds = is_zero(homology(spec.M, spec.n - 1).class_of(spec.boundary.at(spec.n - 1) * eall));

    // cone(F^(i))_j = E^(i)_j + pt_j + ft^(i)_{j-1}  ->  M_j + pt_j + ft_{j-1}
    std::vector<std::size_t> eoff(static_cast<std::size_t>(spec.n + 2), 0), foff(static_cast<std::size_t>(spec.n + 2), 0);
    for (const auto& B : ix.bundles) {
        const ChainComplex& Xi = B.cone.complex;
        std::map<int, Matrix> comps;
        for (int j = Xi.bottom(); j <= Xi.top(); ++j) {
            Matrix m(ix.complex.rank(j), Xi.rank(j));
            std::size_t ej = B.chains.E.rank(j), pj = j == 0 ? 1 : 0, fj = B.chains.ft.rank(j - 1);
            Matrix ein(Eall.rank(j), ej);
            for (std::size_t t = 0; t < ej; ++t) ein(eoff[static_cast<std::size_t>(j)] + t, t) = 1;
            m.set_block(0, 0, spec.boundary.at(j) * ein);
            if (pj) m(spec.M.rank(j), ej) = 1;
            for (std::size_t t = 0; t < fj; ++t)
                m(spec.M.rank(j) + pj + (j >= 1 ? foff[static_cast<std::size_t>(j - 1)] : 0) + t, ej + pj + t) = 1;
            comps[j] = m;
        }
        ix.cone_maps.emplace_back(Xi, ix.complex, comps);
        for (int j = 0; j <= spec.n + 1; ++j) {
            eoff[static_cast<std::size_t>(j)] += B.chains.E.rank(j);
            foff[static_cast<std::size_t>(j)] += B.chains.ft.rank(j);
        }
    }
    return ix;
}

struct Completion {
    ChainComplex complex;
    Vec witness;  // global attaching cycle in IX
    std::vector<DualityReport> strata;
    std::vector<std::size_t> betti_ix, betti_hat;
    std::vector<Check> checks;
    bool strata_ok = false, betti_agree = false, top_ok = false, duality_ranks = false;
    bool passed() const { return strata_ok && betti_agree && top_ok && duality_ranks; }
};

/**
 * Attaches one n-cell to IX along the sum of the stratum witnesses pushed into
 * IX (the wedge bookkeeping of the multi-stratum case) and checks the rank
 * consequences: H_n = Q, unchanged Betti numbers in degrees 1..n-1, and
 * b_r = b_{n-r}.
 */
inline Completion klimczak_completion(const WittSpaceSpec& spec, const IntersectionSpace& ix, const std::vector<Vec>& witnesses) {
    if (witnesses.size() != ix.bundles.size()) throw MathError("need one witness per stratum");
    const int n = spec.n;
    Completion c;
    c.witness = zero_vec(ix.complex.rank(n - 1));
    c.strata_ok = true;
    for (std::size_t s = 0; s < ix.bundles.size(); ++s) {
        c.strata.push_back(verify_completion_criterion(ix.bundles[s], witnesses[s], spec.strata[s]));
        c.strata_ok = c.strata_ok && c.strata.back().passed();
        Vec w = ix.cone_maps[s].at(n - 1) * witnesses[s];
        for (std::size_t i = 0; i < w.size(); ++i) c.witness[i] += w[i];
    }
    if (!ix.boundary_bounds) c.checks.push_back({"oriented boundary bounds in M", n - 1, false, {}});
    AttachResult A = attach_top_cell(ix.complex, c.witness, n);
    c.complex = A.complex;
    for (int r = 0; r <= n; ++r) {
        c.betti_ix.push_back(betti(ix.complex, r));
        c.betti_hat.push_back(betti(c.complex, r));
    }
    c.betti_agree = true;
    for (int r = 1; r <= n - 1; ++r) {
        bool ok = c.betti_ix[static_cast<std::size_t>(r)] == c.betti_hat[static_cast<std::size_t>(r)];
        c.checks.push_back({"b_r(IX) = b_r(completion)", r, ok, {}});
        c.betti_agree = c.betti_agree && ok;
    }
    c.top_ok = c.betti_hat[static_cast<std::size_t>(n)] == 1;
    c.checks.push_back({"dim H_n(completion) = 1", n, c.top_ok, std::to_string(c.betti_hat[static_cast<std::size_t>(n)])});
    c.duality_ranks = true;
    for (int r = 0; r <= n; ++r) {
        bool ok = c.betti_hat[static_cast<std::size_t>(r)] == c.betti_hat[static_cast<std::size_t>(n - r)];
        c.checks.push_back({"b_r = b_{n-r} on the completion", r, ok, {}});
        c.duality_ranks = c.duality_ranks && ok;
    }
    if (ix.bundles.empty()) c.checks.push_back({"strata present", 0, false, "no strata: IX = M and the witness is zero"});
    return c;
}

// ---------------------------------------------------------------------------
// Signatures

struct SignatureResult {
    int signature = 0;
    SymmetricForm form;
    WittClass witt;
    bool trusted = false;
};

inline SignatureResult signature_of(SymmetricForm f, bool trusted = false) {
    SignatureResult r;
    r.signature = signature(f);
    r.witt = witt_class(f);
    r.form = std::move(f);
    r.trusted = trusted;
    return r;
}

/**
 * Intersection pairing of (M, dM) in dimension 4d: <x u y, a> on relative
 * cocycles of degree 2d. Its radical is the kernel of H^{2d}(M, dM) ->
 * H^{2d}(M), so the signature is that of the pairing on the image.
 */
inline SignatureResult novikov_signature(const SimplicialPair& p, int n, const Vec& a) {
    if (n <= 0 || n % 4) throw MathError("signature needs dimension 4d, got " + std::to_string(n));
    const SimplicialComplex& A = p.ambient;
    if (a.size() != A.count(n) || is_zero(a)) throw MathError("no orientation class in degree " + std::to_string(n));
    auto rb = relative_basis(p);
    Vec bd = chain_complex(A).d(n) * a;
    if (!is_zero(restrict_to(bd, rb[static_cast<std::size_t>(n - 1)]))) throw MathError("no orientation class: chain is not a relative cycle");
    int m = n / 2;
    HomologyBasis h = cohomology(relative_chain_complex(p), m);
    std::vector<Cochain> xs;
    for (std::size_t j = 0; j < h.dim(); ++j)
        xs.push_back({m, extend_from(h.reps.column(j), rb[static_cast<std::size_t>(m)], A.count(m))});
    Matrix f(h.dim(), h.dim());
    for (std::size_t i = 0; i < xs.size(); ++i)
        for (std::size_t j = 0; j < xs.size(); ++j) {
            Vec v = cup(A, xs[i], xs[j]).values;
            Q s = 0;
            for (std::size_t k = 0; k < v.size(); ++k) s += v[k] * a[k];
            f(i, j) = s;
        }
    return signature_of(SymmetricForm(f));
}

// Same pairing on a cohomology ring; `orientation` is a functional on H^n.
inline SignatureResult novikov_signature(const CohomologyRing& R, int n, const Vec& orientation) {
    if (n <= 0 || n % 4) throw MathError("signature needs dimension 4d, got " + std::to_string(n));
    if (orientation.size() != R.dim(n) || is_zero(orientation)) throw MathError("no orientation class in degree " + std::to_string(n));
    int m = n / 2;
    Matrix f(R.dim(m), R.dim(m));
    for (std::size_t i = 0; i < R.dim(m); ++i)
        for (std::size_t j = 0; j < R.dim(m); ++j) {
            Vec v = R.product(m, unit_vec(R.dim(m), i), m, unit_vec(R.dim(m), j));
            Q s = 0;
            for (std::size_t k = 0; k < v.size(); ++k) s += v[k] * orientation[k];
            f(i, j) = s;
        }
    return signature_of(SymmetricForm(f), R.trusted);
}

// Cohomology ring of a disjoint union: the product of the two rings.
inline CohomologyRing ring_disjoint_union(const CohomologyRing& a, const CohomologyRing& b) {
    CohomologyRing r;
    int top = std::max(a.top(), b.top());
    for (int p = 0; p <= top; ++p) r.dims.push_back(a.dim(p) + b.dim(p));
    for (int p = 0; p <= top; ++p)
        for (int q = 0; p + q <= top; ++q) {
            Matrix m(r.dim(p + q), r.dim(p) * r.dim(q));
            for (int side = 0; side < 2; ++side) {
                const CohomologyRing& s = side ? b : a;
                auto it = s.mult.find({p, q});
                if (it == s.mult.end()) continue;
                std::size_t op = side ? a.dim(p) : 0, oq = side ? a.dim(q) : 0, opq = side ? a.dim(p + q) : 0;
                for (std::size_t i = 0; i < s.dim(p); ++i)
                    for (std::size_t j = 0; j < s.dim(q); ++j)
                        for (std::size_t k = 0; k < s.dim(p + q); ++k)
                            m(opq + k, (op + i) * r.dim(q) + oq + j) = it->second(k, i * s.dim(q) + j);
            }
            r.mult[{p, q}] = m;
        }
    r.trusted = a.trusted || b.trusted;
    return r;
}

// ---------------------------------------------------------------------------
// Isolated singularities with simplicial regular part

struct IsolatedCompletion {
    int n = 0;
    SimplicialComplex complex;  // M u cone(dM)
    int apex = -1;
    Vec fundamental;
    PdReport pd;
    ObstructionReport obstructions;
    std::vector<std::size_t> betti_ix, betti_hat;
    bool betti_agree = false;
    bool passed() const { return pd.passed() && betti_agree && obstructions.all_vanish(); }
};

/**
 * Completion of a Witt space with one isolated singular point whose link is
 * the connected boundary of M and whose truncation is a point. Then IX ~ M
 * and the completion is M with the boundary coned off; the orientation chain
 * is a + s * cone(da) with the sign s making it a cycle.
 */
inline IsolatedCompletion isolated_completion(const SimplicialPair& p, int n, const Vec& a) {
    const SimplicialComplex &M = p.ambient, &dM = p.sub;
    if (n < 3) throw MathError("Witt space dimension must be >= 3");
    if (a.size() != M.count(n)) throw MathError("orientation chain has the wrong length");
    Cutoff cut = cutoff_degrees(n - 1, middle_perversities());
    ChainComplex CdM = chain_complex(dM);
    if (betti(CdM, 0) != 1) throw MathError("boundary must be connected");
    for (int i = 1; i < cut.lo(); ++i)
        if (betti(CdM, i) != 0) throw MathError("truncation of the link is not a point: H_" + std::to_string(i) + " != 0");
    ChainComplex CM = chain_complex(M);
    Vec bd = CM.d(n) * a;
    IsolatedCompletion out;
    out.n = n;
    out.apex = M.vertex_count();
    std::vector<Simplex> fs = M.facets();
    for (auto f : dM.facets()) {
        f.push_back(out.apex);
        fs.push_back(f);
    }
    out.complex = SimplicialComplex::from_facets(out.apex + 1, fs);
    const SimplicialComplex& K = out.complex;
    ChainComplex CK = chain_complex(K);
    Vec base = zero_vec(K.count(n)), coned = zero_vec(K.count(n));
    for (std::size_t j = 0; j < M.count(n); ++j) base[*K.index_of(M.simplices(n)[j])] = a[j];
    for (std::size_t j = 0; j < M.count(n - 1); ++j) {
        if (sgn(bd[j]) == 0) continue;
        Simplex s = M.simplices(n - 1)[j];
        s.push_back(out.apex);
        coned[*K.index_of(s)] = bd[j];
    }
    bool found = false;
    for (int sgn_c : {1, -1}) {
        Vec f = base;
        for (std::size_t i = 0; i < f.size(); ++i) f[i] += coned[i] * sgn_c;
        if (is_zero(CK.d(n) * f)) {
            out.fundamental = f;
            found = true;
            break;
        }
    }
    if (!found) throw MathError("orientation chain does not extend over the coned boundary");
    out.pd = verify_pd_pair(SimplicialPair(K, SimplicialComplex::from_facets(K.vertex_count(), {}, false)), n, out.fundamental);

    // cone(F_<) for F_< : pt -> dM, as a simplicial mapping cone
    SimplicialComplex pt = SimplicialComplex::from_facets(1, {{0}});
    SimplicialComplex link = SimplicialComplex::from_facets(dM.vertex_count(), dM.facets());
    int v = dM.facets().front().front();
    SimplicialCylinder cone = simplicial_mapping_cone(pt, link, {v});
    out.obstructions = local_duality_obstructions(cone.complex, n);

    // IX = M u_{dM} cone(F_<); F_< hits a single vertex so IX ~ M
    Matrix pick(CM.rank(0), 1);
    pick(static_cast<std::size_t>(*M.index_of({v})), 0) = 1;
    ChainMap into(point_complex(), CM, {{0, pick}});
    ChainComplex IX = pushout_complex(into, augmentation(point_complex()));
    out.betti_agree = true;
    for (int r = 0; r <= n; ++r) {
        out.betti_ix.push_back(betti(IX, r));
        out.betti_hat.push_back(betti(CK, r));
        if (r >= 1 && r <= n - 1 && out.betti_ix.back() != out.betti_hat.back()) out.betti_agree = false;
    }
    return out;
}

struct WittComparison {
    int n = 0;
    SignatureResult completed;  // middle form of the completion
    SignatureResult novikov;    // pairing of (M, dM)
    bool witt_equal = false;
    bool signatures_equal = false;
    std::vector<std::string> notes;
};

inline WittComparison compare_witt(const SimplicialPair& p, int n, const Vec& a) {
    if (n % 4) throw MathError("Witt comparison needs dimension 4d, got " + std::to_string(n));
    IsolatedCompletion c = isolated_completion(p, n, a);
    if (!c.passed()) throw MathError("completion failed; Witt classes are not compared");
    WittComparison w;
    w.n = n;
    SimplicialPair closed(c.complex, SimplicialComplex::from_facets(c.complex.vertex_count(), {}, false));
    w.completed = novikov_signature(closed, n, c.fundamental);
    w.novikov = novikov_signature(p, n, a);
    w.witt_equal = wd::witt_equal(w.completed.witt, w.novikov.witt);
    w.signatures_equal = w.completed.signature == w.novikov.signature;
    w.notes.push_back("intersection homology side reached through the pairing of (M, dM)");
    w.notes.push_back(stasheff_note());
    return w;
}

}  // namespace wd

#endif
