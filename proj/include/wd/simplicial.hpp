#ifndef WD_SIMPLICIAL_HPP
#define WD_SIMPLICIAL_HPP

#include "wd/chain.hpp"

#include <queue>
#include <set>

namespace wd {

using Simplex = std::vector<int>;

/**
 * Finite ordered simplicial complex on vertices 0..vertex_count-1. Simplices
 * are strictly increasing vertex tuples, stored sorted per dimension, and the
 * collection is closed under faces.
 */
class SimplicialComplex {
public:
    SimplicialComplex() = default;

    // With all_vertices every label is a 0-simplex; subcomplexes pass false.
    static SimplicialComplex from_facets(int vertex_count, const std::vector<Simplex>& facets,
                                         bool all_vertices = true) {
        SimplicialComplex K;
        K.n_ = vertex_count;
        std::vector<std::set<Simplex>> acc;
        auto add = [&](const Simplex& s) {
            if (acc.size() < s.size()) acc.resize(s.size());
            acc[s.size() - 1].insert(s);
        };
        if (all_vertices)
            for (int v = 0; v < vertex_count; ++v) add({v});
        for (Simplex f : facets) {
            if (f.empty()) continue;
            std::sort(f.begin(), f.end());
            if (std::adjacent_find(f.begin(), f.end()) != f.end()) throw MathError("facet has a repeated vertex");
            if (f.front() < 0 || f.back() >= vertex_count) throw MathError("facet vertex out of range");
            std::size_t k = f.size();
            if (k > 30) throw MathError("facet dimension too large");
            for (unsigned long mask = 1; mask < (1UL << k); ++mask) {
                Simplex s;
                for (std::size_t i = 0; i < k; ++i)
                    if (mask >> i & 1) s.push_back(f[i]);
                add(s);
            }
        }
        for (auto& level : acc) K.simplices_.emplace_back(level.begin(), level.end());
        K.build_index();
        return K;
    }

    int vertex_count() const { return n_; }
    int dim() const { return static_cast<int>(simplices_.size()) - 1; }
    std::size_t count(int k) const {
        if (k < 0 || k > dim()) return 0;
        return simplices_[static_cast<std::size_t>(k)].size();
    }
    const std::vector<Simplex>& simplices(int k) const {
        static const std::vector<Simplex> none;
        if (k < 0 || k > dim()) return none;
        return simplices_[static_cast<std::size_t>(k)];
    }
    std::optional<std::size_t> index_of(const Simplex& s) const {
        int k = static_cast<int>(s.size()) - 1;
        if (k < 0 || k > dim()) return std::nullopt;
        auto it = index_[static_cast<std::size_t>(k)].find(s);
        if (it == index_[static_cast<std::size_t>(k)].end()) return std::nullopt;
        return it->second;
    }
    bool contains(const Simplex& s) const { return index_of(s).has_value(); }

    std::vector<Simplex> facets() const {
        std::vector<Simplex> out;
        for (int k = dim(); k >= 0; --k)
            for (const auto& s : simplices(k)) {
                bool maximal = true;
                if (k < dim())
                    for (const auto& t : simplices(k + 1))
                        if (std::includes(t.begin(), t.end(), s.begin(), s.end())) {
                            maximal = false;
                            break;
                        }
                if (maximal) out.push_back(s);
            }
        std::sort(out.begin(), out.end());
        return out;
    }

private:
    void build_index() {
        index_.assign(simplices_.size(), {});
        for (std::size_t k = 0; k < simplices_.size(); ++k)
            for (std::size_t i = 0; i < simplices_[k].size(); ++i) index_[k][simplices_[k][i]] = i;
    }
    int n_ = 0;
    std::vector<std::vector<Simplex>> simplices_;
    std::vector<std::map<Simplex, std::size_t>> index_;
};

inline Simplex face(const Simplex& s, std::size_t drop) {
    Simplex f = s;
    f.erase(f.begin() + static_cast<long>(drop));
    return f;
}

struct SimplicialPair {
    SimplicialComplex ambient;
    SimplicialComplex sub;

    SimplicialPair() = default;
    SimplicialPair(SimplicialComplex a, SimplicialComplex b) : ambient(std::move(a)), sub(std::move(b)) {
        for (int k = 0; k <= sub.dim(); ++k)
            for (const auto& s : sub.simplices(k))
                if (!ambient.contains(s)) throw MathError("sub simplex is not in the ambient complex");
    }
    bool in_sub(const Simplex& s) const { return sub.contains(s); }
};

inline SimplicialPair make_simplicial_pair(const SimplicialComplex& A, const std::vector<Simplex>& sub_facets) {
    return SimplicialPair(A, SimplicialComplex::from_facets(A.vertex_count(), sub_facets, false));
}

inline ChainComplex chain_complex(const SimplicialComplex& K) {
    std::vector<std::size_t> ranks;
    std::map<int, Matrix> d;
    for (int k = 0; k <= K.dim(); ++k) ranks.push_back(K.count(k));
    for (int k = 1; k <= K.dim(); ++k) {
        Matrix m(K.count(k - 1), K.count(k));
        const auto& ss = K.simplices(k);
        for (std::size_t j = 0; j < ss.size(); ++j)
            for (std::size_t i = 0; i < ss[j].size(); ++i) m(*K.index_of(face(ss[j], i)), j) = (i % 2) ? -1 : 1;
        d[k] = std::move(m);
    }
    return ChainComplex(0, std::move(ranks), std::move(d));
}

// Positions (within each dimension) of the simplices not in the subcomplex.
inline std::vector<std::vector<std::size_t>> relative_basis(const SimplicialPair& p) {
    std::vector<std::vector<std::size_t>> out(static_cast<std::size_t>(p.ambient.dim() + 1));
    for (int k = 0; k <= p.ambient.dim(); ++k)
        for (std::size_t j = 0; j < p.ambient.count(k); ++j)
            if (!p.in_sub(p.ambient.simplices(k)[j])) out[static_cast<std::size_t>(k)].push_back(j);
    return out;
}

inline Vec restrict_to(const Vec& v, const std::vector<std::size_t>& idx) {
    Vec out;
    for (auto i : idx) out.push_back(v[i]);
    return out;
}

inline Vec extend_from(const Vec& v, const std::vector<std::size_t>& idx, std::size_t n) {
    Vec out = zero_vec(n);
    for (std::size_t i = 0; i < idx.size(); ++i) out[idx[i]] = v[i];
    return out;
}

// C is the chain complex of p.ambient.
inline ChainComplex relative_chain_complex(const SimplicialPair& p, const ChainComplex& C) {
    if (p.sub.dim() < 0) return C;
    auto rb = relative_basis(p);
    std::vector<std::size_t> ranks;
    std::map<int, Matrix> d;
    for (int k = 0; k <= p.ambient.dim(); ++k) ranks.push_back(rb[static_cast<std::size_t>(k)].size());
    for (int k = 1; k <= p.ambient.dim(); ++k) {
        const auto &rows = rb[static_cast<std::size_t>(k - 1)], &cols = rb[static_cast<std::size_t>(k)];
        const Matrix& full = C.d(k);
        Matrix m(rows.size(), cols.size());
        for (std::size_t a = 0; a < rows.size(); ++a)
            for (std::size_t b = 0; b < cols.size(); ++b) m(a, b) = full(rows[a], cols[b]);
        d[k] = std::move(m);
    }
    return ChainComplex(0, std::move(ranks), std::move(d));
}

inline ChainComplex relative_chain_complex(const SimplicialPair& p) { return relative_chain_complex(p, chain_complex(p.ambient)); }

// Chain map induced by a vertex map; degenerate images contribute zero.
inline ChainMap simplicial_map(const SimplicialComplex& K, const SimplicialComplex& L, const std::vector<int>& vmap) {
    if (static_cast<int>(vmap.size()) != K.vertex_count()) throw MathError("vertex map has wrong length");
    std::map<int, Matrix> comps;
    for (int k = 0; k <= K.dim(); ++k) {
        Matrix m(L.count(k), K.count(k));
        const auto& ss = K.simplices(k);
        for (std::size_t j = 0; j < ss.size(); ++j) {
            Simplex img;
            for (int v : ss[j]) img.push_back(vmap[static_cast<std::size_t>(v)]);
            Simplex sorted = img;
            std::sort(sorted.begin(), sorted.end());
            bool degenerate = std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end();
            std::set<int> support(sorted.begin(), sorted.end());
            Simplex supp(support.begin(), support.end());
            if (!L.contains(supp)) throw MathError("vertex map is not simplicial");
            if (degenerate) continue;
            int inversions = 0;
            for (std::size_t a = 0; a < img.size(); ++a)
                for (std::size_t b = a + 1; b < img.size(); ++b)
                    if (img[a] > img[b]) ++inversions;
            m(*L.index_of(sorted), j) = (inversions % 2) ? -1 : 1;
        }
        comps[k] = m;
    }
    return ChainMap(chain_complex(K), chain_complex(L), comps);
}

// ---------------------------------------------------------------------------
// Cochains, cup and cap

struct Cochain {
    int degree = 0;
    Vec values;  // one value per degree-simplex, in the complex's order
};

inline Cochain coboundary(const SimplicialComplex& K, const Cochain& a) {
    Cochain out{a.degree + 1, zero_vec(K.count(a.degree + 1))};
    const auto& ss = K.simplices(a.degree + 1);
    for (std::size_t j = 0; j < ss.size(); ++j)
        for (std::size_t i = 0; i < ss[j].size(); ++i) {
            const Q& v = a.values[*K.index_of(face(ss[j], i))];
            if (i % 2) out.values[j] -= v;
            else out.values[j] += v;
        }
    return out;
}

// (a cup b)(v_0..v_{p+q}) = a(v_0..v_p) b(v_p..v_{p+q})
inline Cochain cup(const SimplicialComplex& K, const Cochain& a, const Cochain& b) {
    if (a.values.size() != K.count(a.degree) || b.values.size() != K.count(b.degree))
        throw MathError("cochain does not belong to this complex");
    int p = a.degree, q = b.degree;
    Cochain out{p + q, zero_vec(K.count(p + q))};
    const auto& ss = K.simplices(p + q);
    for (std::size_t j = 0; j < ss.size(); ++j) {
        const Simplex& s = ss[j];
        Simplex front(s.begin(), s.begin() + p + 1), back(s.begin() + p, s.end());
        const Q& x = a.values[*K.index_of(front)];
        if (sgn(x) == 0) continue;
        out.values[j] = x * b.values[*K.index_of(back)];
    }
    return out;
}

// a cap [v_0..v_n] = a(v_{n-p}..v_n) [v_0..v_{n-p}]
// This makes (a cup b) cap c = a cap (b cap c) hold exactly, and
// d(a cap c) = a cap dc + (-1)^{n-p} (da cap c) for c of degree n.
inline Vec cap(const SimplicialComplex& K, const Cochain& a, const Vec& c, int n) {
    int p = a.degree;
    if (c.size() != K.count(n)) throw MathError("chain does not belong to this complex");
    if (p > n) throw MathError("cap: cochain degree exceeds chain degree");
    Vec out = zero_vec(K.count(n - p));
    const auto& ss = K.simplices(n);
    for (std::size_t j = 0; j < ss.size(); ++j) {
        if (sgn(c[j]) == 0) continue;
        const Simplex& s = ss[j];
        Simplex front(s.begin(), s.begin() + (n - p) + 1), back(s.begin() + (n - p), s.end());
        const Q& x = a.values[*K.index_of(back)];
        if (sgn(x) == 0) continue;
        out[*K.index_of(front)] += x * c[j];
    }
    return out;
}

// ---------------------------------------------------------------------------
// Fundamental cycles

/**
 * Signed sum of the top simplices with boundary supported in `boundary`
 * (empty for closed complexes). Requires every top-minus-one simplex outside
 * the boundary to lie in exactly two top simplices, those inside in exactly
 * one, and the top simplices to be connected through interior faces.
 * @param first_sign orientation of the first top simplex
 */
inline Vec fundamental_cycle(const SimplicialComplex& K, const SimplicialPair* boundary = nullptr, int first_sign = 1) {
    int n = K.dim();
    if (n < 1) throw MathError("fundamental cycle needs dimension >= 1");
    const auto& tops = K.simplices(n);
    std::vector<std::vector<std::pair<std::size_t, int>>> cofaces(K.count(n - 1));
    for (std::size_t j = 0; j < tops.size(); ++j)
        for (std::size_t i = 0; i < tops[j].size(); ++i)
            cofaces[*K.index_of(face(tops[j], i))].push_back({j, (i % 2) ? -1 : 1});
    for (std::size_t f = 0; f < cofaces.size(); ++f) {
        bool in_b = boundary && boundary->in_sub(K.simplices(n - 1)[f]);
        std::size_t want = in_b ? 1 : 2;
        if (cofaces[f].size() != want) throw MathError("not a pseudomanifold: face in " + std::to_string(cofaces[f].size()) + " top simplices");
    }
    std::vector<int> sign(tops.size(), 0);
    sign[0] = first_sign;
    std::queue<std::size_t> bfs;
    bfs.push(0);
    while (!bfs.empty()) {
        std::size_t j = bfs.front();
        bfs.pop();
        for (std::size_t i = 0; i < tops[j].size(); ++i) {
            const auto& cf = cofaces[*K.index_of(face(tops[j], i))];
            if (cf.size() != 2) continue;
            auto [a, ea] = cf[0];
            auto [b, eb] = cf[1];
            std::size_t other = (a == j) ? b : a;
            int ej = (a == j) ? ea : eb, eo = (a == j) ? eb : ea;
            int want = -sign[j] * ej * eo;
            if (sign[other] == 0) {
                sign[other] = want;
                bfs.push(other);
            } else if (sign[other] != want) {
                throw MathError("non-orientable: sign propagation conflict");
            }
        }
    }
    for (int s : sign)
        if (s == 0) throw MathError("top-dimensional simplices are not connected");
    Vec c(tops.size());
    for (std::size_t j = 0; j < tops.size(); ++j) c[j] = sign[j];
    return c;
}

// ---------------------------------------------------------------------------
// Poincare duality verification

struct PdDegree {
    int r = 0;
    std::size_t cohomology_dim = 0, homology_dim = 0, rank = 0;
    bool iso = false;
    Matrix matrix;
};

struct PdReport {
    int n = 0;
    std::vector<PdDegree> degrees;
    bool duality = false;
    bool boundary_checked = false;
    bool boundary_ok = true;
    std::vector<PdDegree> boundary_degrees;
    int first_failure = -1;
    bool passed() const { return duality && boundary_ok; }
};

// CA is the chain complex of p.ambient.
inline std::vector<PdDegree> cap_matrices(const SimplicialPair& p, int n, const Vec& a, const ChainComplex& CA) {
    const SimplicialComplex& A = p.ambient;
    ChainComplex rel = relative_chain_complex(p, CA);
    auto rb = relative_basis(p);
    std::vector<PdDegree> out;
    int top = std::max(n, A.dim());
    for (int r = 0; r <= top; ++r) {
        HomologyBasis hc = cohomology(CA, r);
        int m = n - r;
        HomologyBasis hr = (m >= 0 && m <= A.dim()) ? homology(rel, m) : HomologyBasis{};
        PdDegree d;
        d.r = r;
        d.cohomology_dim = hc.dim();
        d.homology_dim = hr.dim();
        d.matrix = Matrix(hr.dim(), hc.dim());
        for (std::size_t j = 0; j < hc.dim() && m >= 0; ++j) {
            Vec capped = cap(A, Cochain{r, hc.reps.column(j)}, a, n);
            Vec c = hr.class_of(restrict_to(capped, rb[static_cast<std::size_t>(m)]));
            for (std::size_t k = 0; k < c.size(); ++k) d.matrix(k, j) = c[k];
        }
        d.rank = rank(d.matrix);
        d.iso = d.cohomology_dim == d.homology_dim && d.rank == d.cohomology_dim;
        out.push_back(std::move(d));
    }
    return out;
}

inline std::vector<PdDegree> cap_matrices(const SimplicialPair& p, int n, const Vec& a) { return cap_matrices(p, n, a, chain_complex(p.ambient)); }

inline PdReport verify_pd_pair(const SimplicialPair& p, int n, const Vec& a) {
    const SimplicialComplex& A = p.ambient;
    if (n < 0 || n > A.dim() || a.size() != A.count(n)) throw MathError("orientation chain has the wrong degree or length");
    ChainComplex CA = chain_complex(A);
    Vec bd = n > 0 ? CA.d(n) * a : Vec{};
    auto rb = relative_basis(p);
    if (n > 0 && !is_zero(restrict_to(bd, rb[static_cast<std::size_t>(n - 1)])))
        throw MathError("orientation chain is not a relative cycle");
    PdReport rep;
    rep.n = n;
    rep.degrees = cap_matrices(p, n, a, CA);
    rep.duality = true;
    for (const auto& d : rep.degrees)
        if (!d.iso) {
            rep.duality = false;
            if (rep.first_failure < 0) rep.first_failure = d.r;
        }
    if (p.sub.dim() >= 0 && n > 0) {
        const SimplicialComplex& B = p.sub;
        Vec b = zero_vec(B.count(n - 1));
        const auto& faces = A.simplices(n - 1);
        for (std::size_t i = 0; i < faces.size(); ++i)
            if (sgn(bd[i]) != 0) b[*B.index_of(faces[i])] = bd[i];
        SimplicialPair closed(B, SimplicialComplex::from_facets(B.vertex_count(), {}, false));
        rep.boundary_checked = true;
        rep.boundary_degrees = cap_matrices(closed, n - 1, b);
        for (const auto& d : rep.boundary_degrees)
            if (!d.iso) rep.boundary_ok = false;
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Constructions

inline SimplicialComplex disjoint_union(const SimplicialComplex& K, const SimplicialComplex& L) {
    std::vector<Simplex> fs = K.facets();
    for (auto f : L.facets()) {
        for (auto& v : f) v += K.vertex_count();
        fs.push_back(f);
    }
    return SimplicialComplex::from_facets(K.vertex_count() + L.vertex_count(), fs);
}

// Staircase triangulation of K x L; vertex (a, b) gets label a * |L| + b.
inline SimplicialComplex simplicial_product(const SimplicialComplex& K, const SimplicialComplex& L) {
    int nl = L.vertex_count();
    std::vector<Simplex> fs;
    for (const auto& s : K.facets())
        for (const auto& t : L.facets()) {
            std::size_t p = s.size() - 1, q = t.size() - 1;
            // choose which of the p+q steps move in the K direction
            std::vector<int> steps(p + q, 0);
            std::fill(steps.begin(), steps.begin() + static_cast<long>(q), 1);
            std::sort(steps.begin(), steps.end());
            do {
                std::size_t i = 0, j = 0;
                Simplex f{s[0] * nl + t[0]};
                for (int st : steps) {
                    if (st == 0) ++i;
                    else ++j;
                    f.push_back(s[i] * nl + t[j]);
                }
                fs.push_back(f);
            } while (std::next_permutation(steps.begin(), steps.end()));
        }
    return SimplicialComplex::from_facets(K.vertex_count() * nl, fs);
}

struct SimplicialCylinder {
    SimplicialComplex complex;
    std::vector<int> source_vertex;  // old K vertex -> new label
    std::vector<int> target_vertex;  // L vertex -> new label
    int apex = -1;                   // cone point for the mapping cone
};

/**
 * Ordered mapping cylinder of a vertex map f: K -> L. K is relabeled so that f
 * is non-decreasing on every simplex; then each simplex v_0 < .. < v_p
 * contributes the staircase simplices {v_0..v_i} u {f(v_i)..f(v_p)}.
 */
inline SimplicialCylinder simplicial_mapping_cylinder(const SimplicialComplex& K, const SimplicialComplex& L,
                                                      const std::vector<int>& f) {
    simplicial_map(K, L, f);  // validates
    int nk = K.vertex_count(), nl = L.vertex_count();
    std::vector<int> order(static_cast<std::size_t>(nk));
    for (int v = 0; v < nk; ++v) order[static_cast<std::size_t>(v)] = v;
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        return std::make_pair(f[static_cast<std::size_t>(a)], a) < std::make_pair(f[static_cast<std::size_t>(b)], b);
    });
    SimplicialCylinder cyl;
    cyl.source_vertex.assign(static_cast<std::size_t>(nk), 0);
    for (int i = 0; i < nk; ++i) cyl.source_vertex[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])] = i;
    for (int w = 0; w < nl; ++w) cyl.target_vertex.push_back(nk + w);
    std::vector<Simplex> fs;
    for (const auto& t : L.facets()) {
        Simplex g;
        for (int w : t) g.push_back(nk + w);
        fs.push_back(g);
    }
    for (const auto& s : K.facets()) {
        Simplex r;
        for (int v : s) r.push_back(cyl.source_vertex[static_cast<std::size_t>(v)]);
        std::sort(r.begin(), r.end());
        for (std::size_t i = 0; i < r.size(); ++i) {
            std::set<int> g(r.begin(), r.begin() + static_cast<long>(i) + 1);
            for (std::size_t j = i; j < r.size(); ++j) g.insert(nk + f[static_cast<std::size_t>(order[static_cast<std::size_t>(r[j])])]);
            fs.push_back(Simplex(g.begin(), g.end()));
        }
    }
    cyl.complex = SimplicialComplex::from_facets(nk + nl, fs);
    return cyl;
}

inline SimplicialCylinder simplicial_mapping_cone(const SimplicialComplex& K, const SimplicialComplex& L,
                                                  const std::vector<int>& f) {
    SimplicialCylinder c = simplicial_mapping_cylinder(K, L, f);
    int apex = c.complex.vertex_count();
    std::vector<Simplex> fs = c.complex.facets();
    for (const auto& s : K.facets()) {
        Simplex g;
        for (int v : s) g.push_back(c.source_vertex[static_cast<std::size_t>(v)]);
        g.push_back(apex);
        fs.push_back(g);
    }
    c.complex = SimplicialComplex::from_facets(apex + 1, fs);
    c.apex = apex;
    return c;
}

inline std::vector<std::size_t> reduced_betti_numbers(const ChainComplex& c, int lo, int hi) {
    auto b = betti_numbers(c, lo, hi);
    if (lo <= 0 && hi >= 0 && b[static_cast<std::size_t>(-lo)] > 0) b[static_cast<std::size_t>(-lo)] -= 1;
    return b;
}

}  // namespace wd

#endif
