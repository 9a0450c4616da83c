#ifndef WD_CHAIN_HPP
#define WD_CHAIN_HPP

#include "wd/qlinalg.hpp"

#include <functional>

namespace wd {

// Finitely generated chain complex over Q concentrated in [bottom, top].
// d(i) : C_i -> C_{i-1}; all groups outside the range are zero.
class ChainComplex {
public:
    ChainComplex() = default;
    ChainComplex(int bottom, std::vector<std::size_t> ranks, std::map<int, Matrix> d = {})
        : bottom_(bottom), ranks_(std::move(ranks)) {
        for (auto& [i, m] : d) {
            if (m.rows() != rank(i - 1) || m.cols() != rank(i))
                throw MathError("boundary d_" + std::to_string(i) + " has shape " + std::to_string(m.rows()) +
                                "x" + std::to_string(m.cols()) + ", expected " + std::to_string(rank(i - 1)) +
                                "x" + std::to_string(rank(i)));
            d_[i] = std::move(m);
        }
        // every boundary that can have a nonzero shape is stored, so d() never copies
        for (int i = bottom_; i <= top() + 1; ++i)
            if (!d_.count(i)) d_[i] = Matrix(rank(i - 1), rank(i));
        for (int i = bottom_ + 1; i <= top(); ++i)
            if (!(this->d(i - 1) * this->d(i)).is_zero())
                throw MathError("d_" + std::to_string(i - 1) + " d_" + std::to_string(i) + " != 0");
    }

    int bottom() const { return bottom_; }
    int top() const { return bottom_ + static_cast<int>(ranks_.size()) - 1; }
    bool empty() const { return ranks_.empty(); }
    std::size_t rank(int i) const {
        if (i < bottom_ || i > top()) return 0;
        return ranks_[static_cast<std::size_t>(i - bottom_)];
    }
    const Matrix& d(int i) const {
        static const Matrix none;
        auto it = d_.find(i);
        return it != d_.end() ? it->second : none;
    }
    long euler_characteristic() const {
        long chi = 0;
        for (int i = bottom_; i <= top(); ++i) chi += ((i % 2 == 0) ? 1 : -1) * static_cast<long>(rank(i));
        return chi;
    }

private:
    int bottom_ = 0;
    std::vector<std::size_t> ranks_;
    std::map<int, Matrix> d_;
};

inline ChainComplex point_complex() { return ChainComplex(0, {1}); }

inline std::pair<int, int> joint_range(const ChainComplex& a, const ChainComplex& b) {
    if (a.empty()) return {b.bottom(), b.top()};
    if (b.empty()) return {a.bottom(), a.top()};
    return {std::min(a.bottom(), b.bottom()), std::max(a.top(), b.top())};
}

class ChainMap {
public:
    ChainMap() = default;
    ChainMap(ChainComplex source, ChainComplex target, std::map<int, Matrix> comps = {})
        : src_(std::move(source)), tgt_(std::move(target)) {
        for (auto& [i, m] : comps) {
            if (m.rows() != tgt_.rank(i) || m.cols() != src_.rank(i))
                throw MathError("chain map component in degree " + std::to_string(i) + " has wrong shape");
            if (!m.is_zero()) f_[i] = m;
        }
        auto [lo, hi] = joint_range(src_, tgt_);
        for (int i = lo; i <= hi + 1; ++i)
            if (tgt_.d(i) * at(i) != at(i - 1) * src_.d(i))
                throw MathError("chain map does not commute with d in degree " + std::to_string(i));
    }

    static ChainMap identity(const ChainComplex& c) {
        std::map<int, Matrix> m;
        for (int i = c.bottom(); i <= c.top(); ++i) m[i] = Matrix::identity(c.rank(i));
        return ChainMap(c, c, m);
    }
    static ChainMap zero(const ChainComplex& s, const ChainComplex& t) { return ChainMap(s, t); }

    const ChainComplex& source() const { return src_; }
    const ChainComplex& target() const { return tgt_; }
    Matrix at(int i) const {
        auto it = f_.find(i);
        if (it != f_.end()) return it->second;
        return Matrix(tgt_.rank(i), src_.rank(i));
    }

private:
    ChainComplex src_, tgt_;
    std::map<int, Matrix> f_;
};

inline ChainMap compose(const ChainMap& g, const ChainMap& f) {
    auto [lo, hi] = joint_range(f.source(), g.target());
    std::map<int, Matrix> m;
    for (int i = lo; i <= hi; ++i) m[i] = g.at(i) * f.at(i);
    return ChainMap(f.source(), g.target(), m);
}

inline ChainMap difference(const ChainMap& a, const ChainMap& b) {
    std::map<int, Matrix> m;
    for (int i = a.source().bottom(); i <= a.source().top(); ++i) m[i] = a.at(i) - b.at(i);
    return ChainMap(a.source(), a.target(), m);
}

// Augmentation to the point: all vertices go to the point.
inline ChainMap augmentation(const ChainComplex& c) {
    Matrix e(1, c.rank(0));
    for (std::size_t j = 0; j < c.rank(0); ++j) e(0, j) = 1;
    return ChainMap(c, point_complex(), {{0, e}});
}

// ---------------------------------------------------------------------------
// Homology

struct HomologyBasis {
    int degree = 0;
    Subspace cycles;
    Subspace boundaries;
    Matrix reps;  // columns: cycle representatives, canonical complement of boundaries in cycles
    std::size_t dim() const { return reps.cols(); }

    // Class coordinates of a cycle with respect to `reps`.
    Vec class_of(const Vec& z) const {
        if (!cycles.contains(z)) throw MathError("vector is not a cycle in degree " + std::to_string(degree));
        // boundaries are in echelon form, so reducing modulo them only reads pivots
        auto reduce = [&](const Vec& v) {
            Vec c(boundaries.dim());
            for (std::size_t j = 0; j < c.size(); ++j) c[j] = v[boundaries.pivots()[j]];
            Vec r = boundaries.basis() * c;
            for (std::size_t k = 0; k < r.size(); ++k) r[k] = v[k] - r[k];
            return r;
        };
        std::vector<Vec> cols;
        for (std::size_t j = 0; j < dim(); ++j) cols.push_back(reduce(reps.column(j)));
        auto x = solve(Matrix::from_columns(z.size(), cols), reduce(z));
        if (!x) throw MathError("internal: cycle not in span of representatives and boundaries");
        return *x;
    }
};

inline HomologyBasis homology(const ChainComplex& c, int i) {
    HomologyBasis h;
    h.degree = i;
    h.cycles = kernel_basis(c.d(i));
    h.boundaries = image_basis(c.d(i + 1));
    h.reps = quotient_basis(h.boundaries, h.cycles).basis();
    return h;
}

inline std::size_t betti(const ChainComplex& c, int i) {
    return c.rank(i) - rank(c.d(i)) - rank(c.d(i + 1));
}

inline std::vector<std::size_t> betti_numbers(const ChainComplex& c, int lo, int hi) {
    std::vector<std::size_t> b;
    for (int i = lo; i <= hi; ++i) b.push_back(betti(c, i));
    return b;
}

// Matrix of H_i(f) in the canonical representative bases.
inline Matrix homology_map(const ChainMap& f, int i) {
    HomologyBasis hs = homology(f.source(), i), ht = homology(f.target(), i);
    Matrix out(ht.dim(), hs.dim());
    Matrix fi = f.at(i);
    for (std::size_t j = 0; j < hs.dim(); ++j) {
        Vec c = ht.class_of(fi * hs.reps.column(j));
        for (std::size_t k = 0; k < c.size(); ++k) out(k, j) = c[k];
    }
    return out;
}

inline bool is_quasi_isomorphism(const ChainMap& f) {
    auto [lo, hi] = joint_range(f.source(), f.target());
    for (int i = lo; i <= hi; ++i) {
        Matrix h = homology_map(f, i);
        if (h.rows() != h.cols() || rank(h) != h.rows()) return false;
    }
    return true;
}

// Cochains as the chain complex in negated degrees: D_{-i} = C^i with
// boundary D_{-i} -> D_{-i-1} given by the transpose of d_{i+1}.
inline ChainComplex dualize(const ChainComplex& c) {
    if (c.empty()) return {};
    std::vector<std::size_t> ranks;
    for (int i = c.top(); i >= c.bottom(); --i) ranks.push_back(c.rank(i));
    std::map<int, Matrix> d;
    for (int i = c.bottom(); i < c.top(); ++i) d[-i] = c.d(i + 1).transpose();
    return ChainComplex(-c.top(), ranks, d);
}

// Same as homology(dualize(c), -i) without building the dual complex.
inline HomologyBasis cohomology(const ChainComplex& c, int i) {
    HomologyBasis h;
    h.degree = i;
    h.cycles = kernel_basis(c.d(i + 1).transpose());
    h.boundaries = image_basis(c.d(i).transpose());
    h.reps = quotient_basis(h.boundaries, h.cycles).basis();
    return h;
}

// ---------------------------------------------------------------------------
// Pairs and long exact sequences

struct LesSlot {
    std::string name;
    int degree;
    bool exact;
};

struct PairData {
    ChainMap inclusion;            // sub -> ambient, injective in every degree
    ChainComplex relative;         // ambient / sub
    std::map<int, Matrix> complement;  // columns span a complement of the image in each degree
    std::vector<LesSlot> les;

    const ChainComplex& sub() const { return inclusion.source(); }
    Matrix comp(int i) const {
        auto it = complement.find(i);
        if (it != complement.end()) return it->second;
        return Matrix(ambient().rank(i), 0);
    }
    const ChainComplex& ambient() const { return inclusion.target(); }

    // Relative coordinates of an ambient chain.
    Vec project(int i, const Vec& v) const {
        Matrix sys = hstack(inclusion.at(i), comp(i));
        auto x = solve(sys, v);
        if (!x) throw MathError("internal: projection failed");
        std::size_t ns = inclusion.at(i).cols();
        return Vec(x->begin() + static_cast<long>(ns), x->end());
    }

    // H_i(ambient) -> H_i(relative)
    Matrix projection_map(int i) const {
        HomologyBasis ha = homology(ambient(), i), hr = homology(relative, i);
        Matrix out(hr.dim(), ha.dim());
        for (std::size_t j = 0; j < ha.dim(); ++j) {
            Vec c = hr.class_of(project(i, ha.reps.column(j)));
            for (std::size_t k = 0; k < c.size(); ++k) out(k, j) = c[k];
        }
        return out;
    }

    // The connecting homomorphism H_i(relative) -> H_{i-1}(sub).
    Matrix connecting(int i) const {
        HomologyBasis hr = homology(relative, i), hs = homology(sub(), i - 1);
        Matrix out(hs.dim(), hr.dim());
        Matrix W = comp(i);
        for (std::size_t j = 0; j < hr.dim(); ++j) {
            Vec lift = W * hr.reps.column(j);
            Vec bd = ambient().d(i) * lift;
            auto s = solve(inclusion.at(i - 1), bd);
            if (!s) throw MathError("internal: boundary of relative cycle not in subcomplex");
            Vec c = hs.class_of(*s);
            for (std::size_t k = 0; k < c.size(); ++k) out(k, j) = c[k];
        }
        return out;
    }
};

// Exactness at B for A --f--> B --g--> C given dim B.
inline bool exact_at(const Matrix& f, const Matrix& g, std::size_t dimB) {
    if (!(g * f).is_zero()) return false;
    return rank(f) + rank(g) == dimB;
}

inline std::vector<LesSlot> check_pair_les(const PairData& p) {
    std::vector<LesSlot> out;
    auto [lo, hi] = joint_range(p.sub(), p.ambient());
    for (int i = lo; i <= hi + 1; ++i) {
        Matrix inc = homology_map(p.inclusion, i);
        Matrix proj = p.projection_map(i);
        Matrix con = p.connecting(i);
        Matrix con_up = p.connecting(i + 1);
        out.push_back({"sub", i, exact_at(con_up, inc, betti(p.sub(), i))});
        out.push_back({"ambient", i, exact_at(inc, proj, betti(p.ambient(), i))});
        out.push_back({"relative", i, exact_at(proj, con, betti(p.relative, i))});
    }
    return out;
}

inline bool les_exact(const PairData& p) {
    for (const auto& s : p.les)
        if (!s.exact) return false;
    return true;
}

inline PairData make_pair(const ChainMap& inclusion) {
    PairData p;
    p.inclusion = inclusion;
    const ChainComplex& A = inclusion.target();
    auto [lo, hi] = joint_range(inclusion.source(), A);
    std::vector<std::size_t> ranks;
    std::map<int, Matrix> dq;
    for (int i = lo; i <= hi; ++i) {
        Matrix f = inclusion.at(i);
        if (rank(f) != f.cols()) throw MathError("pair inclusion is not injective in degree " + std::to_string(i));
        Subspace im = image_basis(f);
        std::vector<Vec> cols;
        for (auto j : echelon_complement_coords(im)) cols.push_back(unit_vec(A.rank(i), j));
        p.complement[i] = Matrix::from_columns(A.rank(i), cols);
        ranks.push_back(cols.size());
    }
    for (int i = lo + 1; i <= hi; ++i) {
        Matrix sys = hstack(inclusion.at(i - 1), p.complement[i - 1]);
        std::size_t ns = inclusion.at(i - 1).cols();
        Matrix W = p.complement[i];
        Matrix m(p.complement[i - 1].cols(), W.cols());
        for (std::size_t j = 0; j < W.cols(); ++j) {
            auto x = solve(sys, A.d(i) * W.column(j));
            for (std::size_t k = 0; k < m.rows(); ++k) m(k, j) = (*x)[ns + k];
        }
        dq[i] = m;
    }
    p.relative = ChainComplex(lo, ranks, dq);
    p.les = check_pair_les(p);
    return p;
}

// ---------------------------------------------------------------------------
// Constructions

struct ConeResult {
    ChainComplex cone;
    PairData pair;  // (cone, target)
};

// cone_i = Y_i (+) X_{i-1},  d(y, x) = (dy + f x, -dx)
inline ChainComplex cone_complex(const ChainMap& f) {
    const ChainComplex &X = f.source(), &Y = f.target();
    if (X.empty()) return Y;
    int lo = Y.empty() ? X.bottom() + 1 : std::min(Y.bottom(), X.bottom() + 1);
    int hi = Y.empty() ? X.top() + 1 : std::max(Y.top(), X.top() + 1);
    std::vector<std::size_t> ranks;
    std::map<int, Matrix> d;
    for (int i = lo; i <= hi; ++i) ranks.push_back(Y.rank(i) + X.rank(i - 1));
    for (int i = lo + 1; i <= hi; ++i) {
        Matrix m(Y.rank(i - 1) + X.rank(i - 2), Y.rank(i) + X.rank(i - 1));
        m.set_block(0, 0, Y.d(i));
        m.set_block(0, Y.rank(i), f.at(i - 1));
        m.set_block(Y.rank(i - 1), Y.rank(i), -X.d(i - 1));
        d[i] = m;
    }
    return ChainComplex(lo, ranks, d);
}

// Inclusion of the first summand of a block complex.
inline ChainMap block_inclusion(const ChainComplex& part, const ChainComplex& whole,
                                const std::function<std::size_t(int)>& offset) {
    std::map<int, Matrix> m;
    for (int i = part.bottom(); i <= part.top(); ++i) {
        Matrix b(whole.rank(i), part.rank(i));
        for (std::size_t j = 0; j < part.rank(i); ++j) b(offset(i) + j, j) = 1;
        m[i] = b;
    }
    return ChainMap(part, whole, m);
}

inline ConeResult mapping_cone(const ChainMap& f) {
    ConeResult r;
    r.cone = cone_complex(f);
    ChainMap inc = block_inclusion(f.target(), r.cone, [](int) { return std::size_t{0}; });
    r.pair = make_pair(inc);
    return r;
}

struct PushoutResult {
    ChainComplex complex;
    ChainMap from_x, from_y;
    std::vector<LesSlot> mayer_vietoris;
};

// P_i = X_i (+) Y_i (+) A_{i-1},  d(x, y, a) = (dx + f a, dy - g a, -da)
inline ChainComplex pushout_complex(const ChainMap& f, const ChainMap& g) {
    const ChainComplex &A = f.source(), &X = f.target(), &Y = g.target();
    int lo = std::min({X.empty() ? 1000 : X.bottom(), Y.empty() ? 1000 : Y.bottom(),
                       A.empty() ? 1000 : A.bottom() + 1});
    int hi = std::max({X.empty() ? -1000 : X.top(), Y.empty() ? -1000 : Y.top(), A.empty() ? -1000 : A.top() + 1});
    if (lo > hi) return {};
    std::vector<std::size_t> ranks;
    std::map<int, Matrix> d;
    for (int i = lo; i <= hi; ++i) ranks.push_back(X.rank(i) + Y.rank(i) + A.rank(i - 1));
    for (int i = lo + 1; i <= hi; ++i) {
        std::size_t rx = X.rank(i - 1), ry = Y.rank(i - 1);
        Matrix m(rx + ry + A.rank(i - 2), X.rank(i) + Y.rank(i) + A.rank(i - 1));
        m.set_block(0, 0, X.d(i));
        m.set_block(rx, X.rank(i), Y.d(i));
        m.set_block(0, X.rank(i) + Y.rank(i), f.at(i - 1));
        m.set_block(rx, X.rank(i) + Y.rank(i), -g.at(i - 1));
        m.set_block(rx + ry, X.rank(i) + Y.rank(i), -A.d(i - 1));
        d[i] = m;
    }
    return ChainComplex(lo, ranks, d);
}

// Mayer-Vietoris: H_i(A) -(f, -g)-> H_i(X) (+) H_i(Y) -> H_i(P) -> H_{i-1}(A)
inline std::vector<LesSlot> check_mayer_vietoris(const ChainMap& f, const ChainMap& g, const PushoutResult& p) {
    const ChainComplex& A = f.source();
    auto hom_ab = [&](int i) {
        Matrix a = homology_map(f, i), b = homology_map(g, i);
        return vstack(a, -b);
    };
    auto hom_bc = [&](int i) { return hstack(homology_map(p.from_x, i), homology_map(p.from_y, i)); };
    auto hom_ca = [&](int i) {
        HomologyBasis hp = homology(p.complex, i), ha = homology(A, i - 1);
        Matrix out(ha.dim(), hp.dim());
        std::size_t off = f.target().rank(i) + g.target().rank(i);
        for (std::size_t j = 0; j < hp.dim(); ++j) {
            Vec z = hp.reps.column(j);
            Vec a(z.begin() + static_cast<long>(off), z.end());
            Vec c = ha.class_of(a);
            for (std::size_t k = 0; k < c.size(); ++k) out(k, j) = c[k];
        }
        return out;
    };
    std::vector<LesSlot> out;
    int lo = p.complex.empty() ? 0 : p.complex.bottom() - 1;
    int hi = p.complex.empty() ? 0 : p.complex.top() + 1;
    for (int i = lo; i <= hi; ++i) {
        out.push_back({"A", i, exact_at(hom_ca(i + 1), hom_ab(i), betti(A, i))});
        out.push_back({"X+Y", i, exact_at(hom_ab(i), hom_bc(i), betti(f.target(), i) + betti(g.target(), i))});
        out.push_back({"P", i, exact_at(hom_bc(i), hom_ca(i), betti(p.complex, i))});
    }
    return out;
}

inline PushoutResult homotopy_pushout(const ChainMap& f, const ChainMap& g) {
    PushoutResult r;
    r.complex = pushout_complex(f, g);
    const ChainComplex &X = f.target(), &Y = g.target();
    r.from_x = block_inclusion(X, r.complex, [](int) { return std::size_t{0}; });
    r.from_y = block_inclusion(Y, r.complex, [&](int i) { return X.rank(i); });
    r.mayer_vietoris = check_mayer_vietoris(f, g, r);
    return r;
}

struct CylinderResult {
    ChainComplex cylinder;
    ChainMap from_source, from_target;
    bool target_quasi_iso = false;
};

inline CylinderResult mapping_cylinder(const ChainMap& f) {
    PushoutResult p = homotopy_pushout(ChainMap::identity(f.source()), f);
    CylinderResult c{p.complex, p.from_x, p.from_y, false};
    c.target_quasi_iso = is_quasi_isomorphism(c.from_target);
    if (!c.target_quasi_iso) throw MathError("internal: cylinder target inclusion is not a quasi-isomorphism");
    return c;
}

struct TorusResult {
    ChainComplex torus;
    PairData wang;  // pair (T, C); its LES is the Wang sequence
};

// T_i = C_i (+) C_{i-1},  d(y, x) = (dy + (phi - id) x, -dx)
inline TorusResult algebraic_mapping_torus(const ChainMap& phi) {
    const ChainComplex &S = phi.source(), &T = phi.target();
    bool same = S.bottom() == T.bottom() && S.top() == T.top();
    for (int i = S.bottom(); same && i <= S.top(); ++i) same = S.rank(i) == T.rank(i) && S.d(i) == T.d(i);
    if (!same) throw MathError("mapping torus needs an endomorphism");
    ConeResult c = mapping_cone(difference(phi, ChainMap::identity(phi.source())));
    return {c.cone, c.pair};
}

// Induced map of mapping tori for g commuting with the monodromies.
inline ChainMap torus_map(const ChainMap& g, const ChainComplex& Ts, const ChainComplex& Tt) {
    const ChainComplex &S = g.source(), &T = g.target();
    std::map<int, Matrix> m;
    for (int i = Ts.bottom(); i <= Ts.top(); ++i) {
        Matrix b(Tt.rank(i), Ts.rank(i));
        b.set_block(0, 0, g.at(i));
        b.set_block(T.rank(i), S.rank(i), g.at(i - 1));
        m[i] = b;
    }
    return ChainMap(Ts, Tt, m);
}

struct TruncationResult {
    ChainComplex truncated;
    ChainMap inclusion;  // f_<
    ChainMap monodromy;  // phi_< (identity for the plain version)
};

inline ChainComplex truncate_with(const ChainComplex& C, int r, const Matrix& W) {
    int lo = C.bottom();
    int hi = std::min(C.top(), r);
    if (hi < lo) return {};
    std::vector<std::size_t> ranks;
    std::map<int, Matrix> d;
    for (int i = lo; i <= hi; ++i) ranks.push_back(i < r ? C.rank(i) : W.cols());
    for (int i = lo + 1; i <= hi; ++i) d[i] = i < r ? C.d(i) : C.d(i) * W;
    return ChainComplex(lo, ranks, d);
}

inline void check_truncation(const ChainComplex& C, const TruncationResult& t, int r) {
    for (int i = C.bottom(); i <= C.top(); ++i) {
        if (i < r) {
            Matrix h = homology_map(t.inclusion, i);
            if (h.rows() != h.cols() || rank(h) != h.rows())
                throw MathError("internal: truncation is not a homology iso in degree " + std::to_string(i));
        } else if (betti(t.truncated, i) != 0) {
            throw MathError("internal: truncation has homology in degree " + std::to_string(i));
        }
    }
}

inline Matrix truncation_complement(const ChainComplex& C, int r) {
    Subspace Z = kernel_basis(C.d(r));
    std::vector<Vec> cols;
    for (auto j : echelon_complement_coords(Z)) cols.push_back(unit_vec(C.rank(r), j));
    return Matrix::from_columns(C.rank(r), cols);
}

inline ChainMap truncation_inclusion(const ChainComplex& C, const ChainComplex& T, int r, const Matrix& W) {
    std::map<int, Matrix> m;
    for (int i = T.bottom(); i <= T.top(); ++i) m[i] = i < r ? Matrix::identity(C.rank(i)) : W;
    return ChainMap(T, C, m);
}

inline TruncationResult moore_truncation(const ChainComplex& C, int r) {
    if (r < 1) throw MathError("truncation degree must be >= 1");
    Matrix W = C.rank(r) ? truncation_complement(C, r) : Matrix(0, 0);
    ChainComplex T = truncate_with(C, r, W);
    TruncationResult t{T, truncation_inclusion(C, T, r, W), ChainMap::identity(T)};
    check_truncation(C, t, r);
    return t;
}

inline ChainMap power(const ChainMap& phi, int n) {
    ChainMap out = ChainMap::identity(phi.source());
    for (int i = 0; i < n; ++i) out = compose(phi, out);
    return out;
}

inline bool is_identity(const ChainMap& f) {
    for (int i = f.source().bottom(); i <= f.source().top(); ++i)
        if (f.at(i) != Matrix::identity(f.source().rank(i))) return false;
    return true;
}

// Complement of the cycles in degree r made phi-invariant by averaging the
// projection onto the cycles over the orbit (Maschke).
inline TruncationResult equivariant_moore_truncation(const ChainComplex& C, const ChainMap& phi, int order, int r) {
    if (r < 1) throw MathError("truncation degree must be >= 1");
    if (order < 1 || !is_identity(power(phi, order))) throw MathError("monodromy does not have the stated order");
    std::size_t n = C.rank(r);
    Matrix W(n, 0);
    if (n) {
        Matrix W0 = truncation_complement(C, r);
        Subspace Z = kernel_basis(C.d(r));
        // projection onto Z along W0
        Matrix basis = hstack(Z.basis(), W0);
        Matrix inv(n, n);
        for (std::size_t j = 0; j < n; ++j) {
            auto x = solve(basis, unit_vec(n, j));
            for (std::size_t k = 0; k < n; ++k) inv(k, j) = (*x)[k];
        }
        Matrix keepZ(n, n);
        for (std::size_t k = 0; k < Z.dim(); ++k) keepZ(k, k) = 1;
        Matrix piZ = basis * keepZ * inv;
        Matrix phir = phi.at(r);
        Matrix phiinv = power(phi, order - 1).at(r);
        Matrix avg(n, n), pj = Matrix::identity(n), pjinv = Matrix::identity(n);
        for (int j = 0; j < order; ++j) {
            avg = avg + pj * piZ * pjinv;
            pj = phir * pj;
            pjinv = pjinv * phiinv;
        }
        avg = avg.scaled(frac(1, order));
        W = image_basis(Matrix::identity(n) - avg).basis();
    }
    ChainComplex T = truncate_with(C, r, W);
    ChainMap inc = truncation_inclusion(C, T, r, W);
    std::map<int, Matrix> pm;
    for (int i = T.bottom(); i <= T.top(); ++i) {
        if (i < r) {
            pm[i] = phi.at(i);
            continue;
        }
        Matrix img = phi.at(i) * W;
        Matrix a(W.cols(), W.cols());
        for (std::size_t j = 0; j < W.cols(); ++j) {
            auto x = solve(W, img.column(j));
            if (!x) throw MathError("internal: averaged complement is not invariant");
            for (std::size_t k = 0; k < W.cols(); ++k) a(k, j) = (*x)[k];
        }
        pm[i] = a;
    }
    ChainMap phil(T, T, pm);
    TruncationResult t{T, inc, phil};
    check_truncation(C, t, r);
    for (int i = T.bottom(); i <= T.top(); ++i)
        if (inc.at(i) * phil.at(i) != phi.at(i) * inc.at(i))
            throw MathError("internal: truncated monodromy does not commute with f_<");
    if (!is_identity(power(phil, order))) throw MathError("internal: truncated monodromy has wrong order");
    return t;
}

struct AttachResult {
    ChainComplex complex;
    PairData pair;  // (X^phi, X)
    std::size_t cell_index = 0;  // position of the new generator in degree n
};

inline AttachResult attach_top_cell(const ChainComplex& C, const Vec& z, int n) {
    if (z.size() != C.rank(n - 1)) throw MathError("attaching cycle has wrong length for degree " + std::to_string(n - 1));
    if (!is_zero(C.d(n - 1) * z)) throw MathError("attaching chain is not a cycle");
    int lo = C.empty() ? n - 1 : std::min(C.bottom(), n - 1);
    int hi = C.empty() ? n : std::max(C.top(), n);
    std::vector<std::size_t> ranks;
    std::map<int, Matrix> d;
    for (int i = lo; i <= hi; ++i) ranks.push_back(C.rank(i) + (i == n ? 1 : 0));
    for (int i = lo + 1; i <= hi; ++i) {
        Matrix m(ranks[static_cast<std::size_t>(i - 1 - lo)], ranks[static_cast<std::size_t>(i - lo)]);
        m.set_block(0, 0, C.d(i));
        if (i == n)
            for (std::size_t k = 0; k < z.size(); ++k) m(k, C.rank(n)) = z[k];
        d[i] = m;
    }
    AttachResult a;
    a.complex = ChainComplex(lo, ranks, d);
    a.cell_index = C.rank(n);
    a.pair = make_pair(block_inclusion(C, a.complex, [](int) { return std::size_t{0}; }));
    if (betti(a.pair.relative, n) != 1) throw MathError("internal: relative group of the new cell is not Q");
    return a;
}

struct MembershipResult {
    bool member = false;
    Vec witness;  // preimage in H_n(relative)
};

inline MembershipResult connecting_image_membership(const PairData& p, int n, const Vec& cls) {
    auto [lo, hi] = joint_range(p.sub(), p.ambient());
    if (n < lo || n > hi + 1) throw MathError("degree out of range for connecting homomorphism");
    Matrix del = p.connecting(n);
    if (cls.size() != del.rows()) throw MathError("class has wrong length for H_" + std::to_string(n - 1));
    auto x = solve(del, cls);
    if (!x) return {false, {}};
    return {true, *x};
}

// Disjoint union (direct sum) of complexes.
inline ChainComplex disjoint_union(const ChainComplex& a, const ChainComplex& b) {
    if (a.empty()) return b;
    if (b.empty()) return a;
    auto [lo, hi] = joint_range(a, b);
    std::vector<std::size_t> ranks;
    std::map<int, Matrix> d;
    for (int i = lo; i <= hi; ++i) ranks.push_back(a.rank(i) + b.rank(i));
    for (int i = lo + 1; i <= hi; ++i) d[i] = direct_sum(a.d(i), b.d(i));
    return ChainComplex(lo, ranks, d);
}

inline ChainMap disjoint_union(const ChainMap& f, const ChainMap& g) {
    ChainComplex s = disjoint_union(f.source(), g.source()), t = disjoint_union(f.target(), g.target());
    std::map<int, Matrix> m;
    for (int i = s.bottom(); i <= s.top(); ++i) m[i] = direct_sum(f.at(i), g.at(i));
    return ChainMap(s, t, m);
}

}  // namespace wd

#endif
