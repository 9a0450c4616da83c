#ifndef WD_SULLIVAN_HPP
#define WD_SULLIVAN_HPP

// Free graded-commutative algebras, finite CDGAs and minimal Sullivan models.
// All gradings are cohomological and start at 0; everything is truncated at
// an explicit degree cap.

#include "wd/chain.hpp"

#include <functional>
#include <set>

namespace wd {

struct Generator {
    std::string name;
    int degree = 0;
};

using Monomial = std::vector<int>;  // one exponent per generator
using Poly = std::map<Monomial, Q>;

inline void add_term(Poly& p, const Monomial& m, const Q& c) {
    if (sgn(c) == 0) return;
    auto it = p.find(m);
    if (it == p.end()) {
        p.emplace(m, c);
        return;
    }
    it->second += c;
    if (sgn(it->second) == 0) p.erase(it);
}

inline int mono_degree(const Monomial& m, const std::vector<Generator>& g) {
    int d = 0;
    for (std::size_t i = 0; i < m.size(); ++i) d += m[i] * g[i].degree;
    return d;
}

inline int wordlength(const Monomial& m) {
    int w = 0;
    for (int e : m) w += e;
    return w;
}

// Sign of (a)(b) -> (ab) in canonical order, or 0 when an odd generator repeats.
inline int mono_sign(const Monomial& a, const Monomial& b, const std::vector<Generator>& g) {
    int sign = 1;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (g[i].degree % 2 == 0 || a[i] == 0) continue;
        if (b[i]) return 0;
        for (std::size_t j = 0; j < i; ++j)
            if (g[j].degree % 2 && b[j]) sign = -sign;
    }
    return sign;
}

inline Poly poly_mul(const Poly& p, const Poly& q, const std::vector<Generator>& g) {
    Poly out;
    for (const auto& [a, x] : p)
        for (const auto& [b, y] : q) {
            int s = mono_sign(a, b, g);
            if (!s) continue;
            Monomial m(a.size());
            for (std::size_t i = 0; i < m.size(); ++i) m[i] = a[i] + b[i];
            add_term(out, m, s * x * y);
        }
    return out;
}

inline Poly generator_poly(std::size_t i, std::size_t n) {
    Monomial m(n, 0);
    m[i] = 1;
    return {{m, Q(1)}};
}

// Generator occurrences of a monomial in canonical order.
inline std::vector<std::size_t> occurrences(const Monomial& m) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < m.size(); ++i)
        for (int e = 0; e < m[i]; ++e) out.push_back(i);
    return out;
}

// Leibniz extension of the generator differentials `dg` to a monomial.
inline Poly derive_monomial(const Monomial& m, const std::vector<Generator>& g, const std::vector<Poly>& dg) {
    auto occ = occurrences(m);
    Poly out;
    std::size_t n = g.size();
    Poly unit{{Monomial(n, 0), Q(1)}};
    for (std::size_t j = 0; j < occ.size(); ++j) {
        Poly pre = unit, post = unit;
        int deg = 0;
        for (std::size_t k = 0; k < j; ++k) {
            pre = poly_mul(pre, generator_poly(occ[k], n), g);
            deg += g[occ[k]].degree;
        }
        for (std::size_t k = j + 1; k < occ.size(); ++k) post = poly_mul(post, generator_poly(occ[k], n), g);
        // the canonical word order multiplies back to +m, so only the Koszul sign remains
        Poly term = poly_mul(poly_mul(pre, dg[occ[j]], g), post, g);
        for (const auto& [mm, c] : term) add_term(out, mm, deg % 2 ? -c : c);
    }
    return out;
}

inline std::string poly_str(const Poly& p, const std::vector<Generator>& g) {
    if (p.empty()) return "0";
    std::string s;
    bool first = true;
    for (const auto& [m, c] : p) {
        Q a = abs(c);
        s += first ? (sgn(c) < 0 ? "-" : "") : (sgn(c) < 0 ? " - " : " + ");
        first = false;
        std::string word;
        for (std::size_t i = 0; i < m.size(); ++i) {
            if (!m[i]) continue;
            if (!word.empty()) word += "*";
            word += g[i].name;
            if (m[i] > 1) word += "^" + std::to_string(m[i]);
        }
        if (word.empty()) s += a.get_str();
        else if (a == 1) s += word;
        else s += a.get_str() + "*" + word;
    }
    return s;
}

// Monomials of each degree 0..top; `bound` caps exponents (0 = unbounded even).
inline std::vector<std::vector<Monomial>> enumerate_monomials(const std::vector<Generator>& g, int top,
                                                              const std::vector<int>& bound = {}) {
    std::vector<std::vector<Monomial>> out(static_cast<std::size_t>(top + 1));
    Monomial cur(g.size(), 0);
    std::function<void(std::size_t, int)> rec = [&](std::size_t i, int deg) {
        if (i == g.size()) {
            out[static_cast<std::size_t>(deg)].push_back(cur);
            return;
        }
        int maxe = g[i].degree % 2 ? 1 : (top - deg) / g[i].degree;
        if (!bound.empty() && bound[i] > 0) maxe = std::min(maxe, bound[i] - 1);
        for (int e = 0; e <= maxe && deg + e * g[i].degree <= top; ++e) {
            cur[i] = e;
            rec(i + 1, deg + e * g[i].degree);
        }
        cur[i] = 0;
    };
    rec(0, 0);
    for (auto& level : out) std::sort(level.begin(), level.end(), std::greater<>());
    return out;
}

// Cochain complex in degrees 0..top as a chain complex in degrees -top..0.
inline ChainComplex cochain_complex(const std::vector<std::size_t>& dims, const std::vector<Matrix>& dmats) {
    std::vector<std::size_t> ranks(dims.rbegin(), dims.rend());
    std::map<int, Matrix> d;
    for (std::size_t p = 0; p < dmats.size(); ++p) d[-static_cast<int>(p)] = dmats[p];
    return ChainComplex(-static_cast<int>(dims.size()) + 1, ranks, d);
}

inline void check_generators(const std::vector<Generator>& g) {
    std::set<std::string> names;
    for (const auto& x : g) {
        if (x.degree < 1) throw MathError("generator " + x.name + " has degree < 1");
        if (x.name.empty() || !names.insert(x.name).second) throw MathError("generator names must be unique and nonempty");
    }
}

// ---------------------------------------------------------------------------

/**
 * (Lambda V, d) truncated at degree `cap`. Monomial bases are kept through
 * cap + 1 so that H^i is exact for i <= cap.
 */
class FreeCGA {
public:
    FreeCGA() = default;
    FreeCGA(std::vector<Generator> gens, std::vector<Poly> d, int cap) : g_(std::move(gens)), dg_(std::move(d)), cap_(cap) {
        check_generators(g_);
        if (dg_.size() != g_.size()) throw MathError("one differential value per generator is required");
        if (cap_ < 0) throw MathError("degree cap must be nonnegative");
        for (std::size_t i = 0; i < g_.size(); ++i) {
            if (g_[i].degree > cap_) throw MathError("generator " + g_[i].name + " lies above the degree cap");
            for (const auto& [m, c] : dg_[i]) {
                if (m.size() != g_.size()) throw MathError("monomial arity mismatch in d" + g_[i].name);
                if (mono_degree(m, g_) != g_[i].degree + 1) throw MathError("d" + g_[i].name + " is not of degree " + std::to_string(g_[i].degree + 1));
                for (std::size_t k = 0; k < m.size(); ++k)
                    if (m[k] < 0 || (g_[k].degree % 2 && m[k] > 1)) throw MathError("invalid monomial in d" + g_[i].name);
            }
        }
        basis_ = enumerate_monomials(g_, cap_ + 1);
        index_.resize(basis_.size());
        for (std::size_t p = 0; p < basis_.size(); ++p)
            for (std::size_t j = 0; j < basis_[p].size(); ++j) index_[p][basis_[p][j]] = j;
        for (int p = 0; p <= cap_; ++p) {
            Matrix m(dim(p + 1), dim(p));
            for (std::size_t j = 0; j < dim(p); ++j) {
                Vec v = to_vec(derive_monomial(basis(p)[j], g_, dg_), p + 1);
                for (std::size_t i = 0; i < v.size(); ++i) m(i, j) = v[i];
            }
            d_.push_back(m);
        }
        for (int p = 0; p + 1 <= cap_; ++p)
            if (!(d_[static_cast<std::size_t>(p + 1)] * d_[static_cast<std::size_t>(p)]).is_zero())
                throw MathError("d^2 != 0 on degree " + std::to_string(p));
    }

    const std::vector<Generator>& generators() const { return g_; }
    const std::vector<Poly>& differentials() const { return dg_; }
    int cap() const { return cap_; }
    std::size_t dim(int p) const {
        if (p < 0 || p > cap_ + 1) return 0;
        return basis_[static_cast<std::size_t>(p)].size();
    }
    const std::vector<Monomial>& basis(int p) const { return basis_.at(static_cast<std::size_t>(p)); }
    const Matrix& d_matrix(int p) const { return d_.at(static_cast<std::size_t>(p)); }
    std::size_t generator_count(int p) const {
        std::size_t c = 0;
        for (const auto& x : g_) c += x.degree == p;
        return c;
    }
    int degree_of(const Monomial& m) const { return mono_degree(m, g_); }

    Vec to_vec(const Poly& p, int deg) const {
        Vec v = zero_vec(dim(deg));
        for (const auto& [m, c] : p) {
            auto it = index_.at(static_cast<std::size_t>(deg)).find(m);
            if (it == index_[static_cast<std::size_t>(deg)].end()) throw MathError("monomial is not of degree " + std::to_string(deg));
            v[it->second] = c;
        }
        return v;
    }
    Poly to_poly(const Vec& v, int deg) const {
        Poly p;
        for (std::size_t j = 0; j < v.size(); ++j) add_term(p, basis(deg)[j], v[j]);
        return p;
    }
    Poly mul(const Poly& a, const Poly& b) const { return poly_mul(a, b, g_); }

    ChainComplex complex() const {
        std::vector<std::size_t> dims;
        for (int p = 0; p <= cap_ + 1; ++p) dims.push_back(dim(p));
        return cochain_complex(dims, d_);
    }
    HomologyBasis cohomology(int p) const {
        if (p < 0 || p > cap_) throw MathError("cohomology degree " + std::to_string(p) + " exceeds the cap " + std::to_string(cap_));
        HomologyBasis h = homology(complex(), -p);
        h.degree = p;
        return h;
    }

    // im d inside the span of wordlength >= 2 monomials.
    bool is_minimal() const {
        for (const auto& p : dg_)
            for (const auto& [m, c] : p)
                if (wordlength(m) < 2) return false;
        return true;
    }
    // Existence of the exhausting filtration V(0) c V(1) c ...
    bool is_sullivan() const {
        std::vector<bool> placed(g_.size(), false);
        std::size_t done = 0;
        for (bool progress = true; progress;) {
            progress = false;
            std::vector<bool> next = placed;
            for (std::size_t i = 0; i < g_.size(); ++i) {
                if (placed[i]) continue;
                bool ok = true;
                for (const auto& [m, c] : dg_[i])
                    for (std::size_t k = 0; k < m.size(); ++k)
                        if (m[k] && !placed[k]) ok = false;
                if (ok) {
                    next[i] = true;
                    ++done;
                    progress = true;
                }
            }
            placed = next;
        }
        return done == g_.size();
    }

    FreeCGA with_cap(int cap) const { return FreeCGA(g_, dg_, cap); }

    bool formal_surrogate = false;  // built from a cohomology ring with d = 0

private:
    std::vector<Generator> g_;
    std::vector<Poly> dg_;
    int cap_ = 0;
    std::vector<std::vector<Monomial>> basis_;
    std::vector<std::map<Monomial, std::size_t>> index_;
    std::vector<Matrix> d_;
};

// ---------------------------------------------------------------------------

/**
 * Finite commutative cochain algebra with A^0 = Q spanned by the unit (basis
 * element 0 in degree 0). Products are structure matrices
 * mult(p, q) : A^p (x) A^q -> A^{p+q}, column index i * dim(q) + j.
 */
class CDGA {
public:
    CDGA() = default;
    CDGA(std::vector<std::size_t> dims, std::map<std::pair<int, int>, Matrix> mult, std::vector<Matrix> d,
         std::vector<std::vector<std::string>> names = {})
        : dims_(std::move(dims)), mult_(std::move(mult)), d_(std::move(d)), names_(std::move(names)) {
        if (dims_.empty() || dims_[0] != 1) throw MathError("a CDGA needs A^0 = Q");
        int t = top();
        d_.resize(static_cast<std::size_t>(t));
        for (int p = 0; p < t; ++p) {
            Matrix& m = d_[static_cast<std::size_t>(p)];
            if (m.rows() == 0 && m.cols() == 0) m = Matrix(dim(p + 1), dim(p));
            if (m.rows() != dim(p + 1) || m.cols() != dim(p)) throw MathError("differential on degree " + std::to_string(p) + " has the wrong shape");
        }
        for (int p = 0; p <= t; ++p)
            for (int q = 0; p + q <= t; ++q) {
                auto key = std::make_pair(p, q);
                if (p == 0 || q == 0) {
                    // the unit acts as the identity; a supplied table must agree
                    Matrix u(dim(p + q), dim(p) * dim(q));
                    for (std::size_t k = 0; k < dim(p + q); ++k) u(k, k) = 1;
                    auto it = mult_.find(key);
                    if (it != mult_.end() && it->second != u) throw MathError("the unit is not a two-sided identity");
                    mult_[key] = u;
                    continue;
                }
                auto it = mult_.find(key);
                if (it == mult_.end()) mult_[key] = Matrix(dim(p + q), dim(p) * dim(q));
                else if (it->second.rows() != dim(p + q) || it->second.cols() != dim(p) * dim(q))
                    throw MathError("product table (" + std::to_string(p) + "," + std::to_string(q) + ") has the wrong shape");
            }
        validate();
    }

    int top() const { return static_cast<int>(dims_.size()) - 1; }
    std::size_t dim(int p) const {
        if (p < 0 || p > top()) return 0;
        return dims_[static_cast<std::size_t>(p)];
    }
    const std::vector<std::size_t>& dims() const { return dims_; }
    Matrix d_matrix(int p) const {
        if (p >= 0 && p < top()) return d_[static_cast<std::size_t>(p)];
        return Matrix(dim(p + 1), dim(p));
    }
    const std::map<std::pair<int, int>, Matrix>& products() const { return mult_; }
    std::string name(int p, std::size_t i) const {
        if (static_cast<std::size_t>(p) < names_.size() && i < names_[static_cast<std::size_t>(p)].size())
            return names_[static_cast<std::size_t>(p)][i];
        return "e" + std::to_string(p) + "_" + std::to_string(i);
    }
    const std::vector<std::vector<std::string>>& names() const { return names_; }

    Vec unit() const { return unit_vec(1, 0); }
    Vec product(int p, const Vec& a, int q, const Vec& b) const {
        if (p + q > top()) return {};
        const Matrix& m = mult_.at({p, q});
        Vec out = zero_vec(dim(p + q));
        for (std::size_t i = 0; i < a.size(); ++i) {
            if (sgn(a[i]) == 0) continue;
            for (std::size_t j = 0; j < b.size(); ++j) {
                if (sgn(b[j]) == 0) continue;
                Q c = a[i] * b[j];
                std::size_t col = i * dim(q) + j;
                for (std::size_t k = 0; k < out.size(); ++k)
                    if (sgn(m(k, col))) out[k] += c * m(k, col);
            }
        }
        return out;
    }
    Vec d(int p, const Vec& a) const { return d_matrix(p) * a; }

    ChainComplex complex() const { return cochain_complex(dims_, d_); }
    HomologyBasis cohomology(int p) const {
        if (p < 0 || p > top()) {
            HomologyBasis h;
            h.degree = p;
            return h;
        }
        HomologyBasis h = homology(complex(), -p);
        h.degree = p;
        return h;
    }

    bool formal_surrogate = false;

private:
    void validate() const {
        int t = top();
        for (int p = 0; p + 1 < t; ++p)
            if (!(d_matrix(p + 1) * d_matrix(p)).is_zero()) throw MathError("d^2 != 0 on degree " + std::to_string(p));
        if (!is_zero(d(0, unit()))) throw MathError("d(1) != 0");
        for (int p = 1; p <= t; ++p)
            for (int q = p; p + q <= t; ++q)
                for (std::size_t i = 0; i < dim(p); ++i)
                    for (std::size_t j = 0; j < dim(q); ++j) {
                        Vec a = unit_vec(dim(p), i), b = unit_vec(dim(q), j);
                        Vec ab = product(p, a, q, b), ba = product(q, b, p, a);
                        int s = (p * q) % 2 ? -1 : 1;
                        for (auto& x : ba) x *= s;
                        if (ab != ba)
                            throw MathError("product " + name(p, i) + "*" + name(q, j) + " is not graded commutative");
                    }
        for (int p = 1; p <= t; ++p)
            for (int q = 1; p + q <= t; ++q)
                for (int r = 1; p + q + r <= t; ++r)
                    for (std::size_t i = 0; i < dim(p); ++i)
                        for (std::size_t j = 0; j < dim(q); ++j)
                            for (std::size_t k = 0; k < dim(r); ++k) {
                                Vec a = unit_vec(dim(p), i), b = unit_vec(dim(q), j), c = unit_vec(dim(r), k);
                                if (product(p + q, product(p, a, q, b), r, c) != product(p, a, q + r, product(q, b, r, c)))
                                    throw MathError("product is not associative on " + name(p, i) + "," + name(q, j) + "," + name(r, k));
                            }
        for (int p = 0; p <= t; ++p)
            for (int q = 0; p + q + 1 <= t; ++q)
                for (std::size_t i = 0; i < dim(p); ++i)
                    for (std::size_t j = 0; j < dim(q); ++j) {
                        Vec a = unit_vec(dim(p), i), b = unit_vec(dim(q), j);
                        Vec lhs = d(p + q, product(p, a, q, b));
                        Vec r1 = product(p + 1, d(p, a), q, b), r2 = product(p, a, q + 1, d(q, b));
                        if (r1.empty()) r1 = zero_vec(lhs.size());
                        if (r2.empty()) r2 = zero_vec(lhs.size());
                        for (std::size_t k = 0; k < lhs.size(); ++k) r1[k] += (p % 2 ? -1 : 1) * r2[k];
                        if (lhs != r1) throw MathError("Leibniz rule fails on " + name(p, i) + "*" + name(q, j));
                    }
    }

    std::vector<std::size_t> dims_;
    std::map<std::pair<int, int>, Matrix> mult_;
    std::vector<Matrix> d_;
    std::vector<std::vector<std::string>> names_;
};

/**
 * Finite CDGA presented as Lambda V modulo x^bound = 0 for the bounded
 * generators (odd generators square to zero anyway). Every even generator
 * needs a bound so that the basis is finite; d must preserve the ideal, which
 * the CDGA constructor checks through the Leibniz rule.
 */
inline CDGA cdga_from_presentation(const std::vector<Generator>& g, const std::vector<Poly>& dg, const std::vector<int>& bound) {
    check_generators(g);
    if (dg.size() != g.size() || bound.size() != g.size()) throw MathError("presentation arrays have mismatched lengths");
    int top = 0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (g[i].degree % 2 == 0 && bound[i] < 1) throw MathError("even generator " + g[i].name + " needs a truncation bound");
        int e = g[i].degree % 2 ? 1 : bound[i] - 1;
        if (g[i].degree % 2 && bound[i] == 1) e = 0;
        top += e * g[i].degree;
    }
    auto basis = enumerate_monomials(g, top, bound);
    while (top > 0 && basis[static_cast<std::size_t>(top)].empty()) --top;
    basis.resize(static_cast<std::size_t>(top + 1));
    std::vector<std::map<Monomial, std::size_t>> index(basis.size());
    for (std::size_t p = 0; p < basis.size(); ++p)
        for (std::size_t j = 0; j < basis[p].size(); ++j) index[p][basis[p][j]] = j;
    auto to_vec = [&](const Poly& poly, int p) {
        Vec v = zero_vec(p <= top ? basis[static_cast<std::size_t>(p)].size() : 0);
        if (p > top) return v;
        for (const auto& [m, c] : poly) {
            auto it = index[static_cast<std::size_t>(p)].find(m);
            if (it != index[static_cast<std::size_t>(p)].end()) v[it->second] = c;
        }
        return v;
    };
    std::vector<std::size_t> dims;
    std::vector<std::vector<std::string>> names;
    for (int p = 0; p <= top; ++p) {
        dims.push_back(basis[static_cast<std::size_t>(p)].size());
        std::vector<std::string> row;
        for (const auto& m : basis[static_cast<std::size_t>(p)]) row.push_back(poly_str({{m, Q(1)}}, g));
        names.push_back(row);
    }
    std::map<std::pair<int, int>, Matrix> mult;
    for (int p = 1; p <= top; ++p)
        for (int q = 1; p + q <= top; ++q) {
            Matrix m(dims[static_cast<std::size_t>(p + q)], dims[static_cast<std::size_t>(p)] * dims[static_cast<std::size_t>(q)]);
            for (std::size_t i = 0; i < dims[static_cast<std::size_t>(p)]; ++i)
                for (std::size_t j = 0; j < dims[static_cast<std::size_t>(q)]; ++j) {
                    Vec v = to_vec(poly_mul({{basis[static_cast<std::size_t>(p)][i], Q(1)}}, {{basis[static_cast<std::size_t>(q)][j], Q(1)}}, g), p + q);
                    for (std::size_t k = 0; k < v.size(); ++k) m(k, i * dims[static_cast<std::size_t>(q)] + j) = v[k];
                }
            mult[{p, q}] = m;
        }
    std::vector<Matrix> d;
    for (int p = 0; p < top; ++p) {
        Matrix m(dims[static_cast<std::size_t>(p + 1)], dims[static_cast<std::size_t>(p)]);
        for (std::size_t j = 0; j < dims[static_cast<std::size_t>(p)]; ++j) {
            Vec v = to_vec(derive_monomial(basis[static_cast<std::size_t>(p)][j], g, dg), p + 1);
            for (std::size_t k = 0; k < v.size(); ++k) m(k, j) = v[k];
        }
        d.push_back(m);
    }
    return CDGA(dims, mult, d, names);
}

// ---------------------------------------------------------------------------
// Cohomology rings

/**
 * Graded ring by structure constants in degrees 0..top with a unit in degree
 * 0. `trusted` marks tables supplied by the caller rather than computed here.
 */
struct CohomologyRing {
    std::vector<std::size_t> dims;
    std::map<std::pair<int, int>, Matrix> mult;
    bool trusted = false;

    int top() const { return static_cast<int>(dims.size()) - 1; }
    std::size_t dim(int p) const {
        if (p < 0 || p > top()) return 0;
        return dims[static_cast<std::size_t>(p)];
    }
    Vec product(int p, const Vec& a, int q, const Vec& b) const {
        if (p + q > top() || p < 0 || q < 0) return {};
        auto it = mult.find({p, q});
        Vec out = zero_vec(dim(p + q));
        if (it == mult.end()) return out;
        for (std::size_t i = 0; i < a.size(); ++i)
            for (std::size_t j = 0; j < b.size(); ++j) {
                if (sgn(a[i]) == 0 || sgn(b[j]) == 0) continue;
                for (std::size_t k = 0; k < out.size(); ++k) out[k] += a[i] * b[j] * it->second(k, i * dim(q) + j);
            }
        return out;
    }
};

template <class Algebra, class Mul>
CohomologyRing ring_from_cocycles(const Algebra& A, int top, Mul mul) {
    CohomologyRing R;
    std::vector<HomologyBasis> h;
    for (int p = 0; p <= top; ++p) {
        h.push_back(A.cohomology(p));
        R.dims.push_back(h.back().dim());
    }
    for (int p = 0; p <= top; ++p)
        for (int q = 0; p + q <= top; ++q) {
            Matrix m(R.dim(p + q), R.dim(p) * R.dim(q));
            for (std::size_t i = 0; i < R.dim(p); ++i)
                for (std::size_t j = 0; j < R.dim(q); ++j) {
                    Vec z = mul(p, h[static_cast<std::size_t>(p)].reps.column(i), q, h[static_cast<std::size_t>(q)].reps.column(j));
                    Vec c = h[static_cast<std::size_t>(p + q)].class_of(z);
                    for (std::size_t k = 0; k < c.size(); ++k) m(k, i * R.dim(q) + j) = c[k];
                }
            R.mult[{p, q}] = m;
        }
    return R;
}

inline CohomologyRing cohomology_ring(const CDGA& A) {
    return ring_from_cocycles(A, A.top(), [&](int p, const Vec& a, int q, const Vec& b) { return A.product(p, a, q, b); });
}

inline CohomologyRing cohomology_ring(const FreeCGA& M, int top) {
    if (top > M.cap()) throw MathError("ring requested above the degree cap");
    return ring_from_cocycles(M, top, [&](int p, const Vec& a, int q, const Vec& b) {
        return M.to_vec(M.mul(M.to_poly(a, p), M.to_poly(b, q)), p + q);
    });
}

// The formal surrogate (H, 0) of a cohomology ring as a CDGA.
inline CDGA cdga_from_ring(const CohomologyRing& R) {
    std::map<std::pair<int, int>, Matrix> mult;
    for (const auto& [k, m] : R.mult)
        if (k.first > 0 && k.second > 0) mult[k] = m;
    CDGA A(R.dims, mult, {});
    A.formal_surrogate = true;
    return A;
}

// ---------------------------------------------------------------------------
// Morphisms Lambda V -> A

/**
 * Algebra map determined by generator values; extended multiplicatively along
 * the canonical monomial order. Construction checks that it is a cochain map
 * through the source cap and multiplicative on generator times monomial.
 */
class CDGAMorphism {
public:
    CDGAMorphism() = default;
    CDGAMorphism(FreeCGA source, CDGA target, std::vector<Vec> values)
        : s_(std::move(source)), t_(std::move(target)), v_(std::move(values)) {
        const auto& g = s_.generators();
        if (v_.size() != g.size()) throw MathError("one value per generator is required");
        for (std::size_t i = 0; i < g.size(); ++i)
            if (v_[i].size() != t_.dim(g[i].degree)) throw MathError("value of " + g[i].name + " has the wrong degree or length");
        for (int p = 0; p <= s_.cap() + 1; ++p) m_.push_back(build(p));
        for (int p = 0; p <= s_.cap(); ++p)
            if (t_.d_matrix(p) * at(p) != at(p + 1) * s_.d_matrix(p))
                throw MathError("morphism does not commute with d in degree " + std::to_string(p));
        std::size_t n = g.size();
        for (std::size_t i = 0; i < n; ++i)
            for (int q = 0; q + g[i].degree <= s_.cap(); ++q)
                for (std::size_t j = 0; j < s_.dim(q); ++j) {
                    int p = g[i].degree;
                    Vec lhs = at(p + q) * s_.to_vec(s_.mul(generator_poly(i, n), {{s_.basis(q)[j], Q(1)}}), p + q);
                    Vec rhs = t_.product(p, v_[i], q, at(q).column(j));
                    if (rhs.empty()) rhs = zero_vec(lhs.size());
                    if (lhs != rhs) throw MathError("morphism is not multiplicative on " + g[i].name);
                }
    }

    const FreeCGA& source() const { return s_; }
    const CDGA& target() const { return t_; }
    const std::vector<Vec>& values() const { return v_; }
    const Matrix& at(int p) const { return m_.at(static_cast<std::size_t>(p)); }

    Matrix cohomology_map(int p) const {
        HomologyBasis hs = s_.cohomology(p), ht = t_.cohomology(p);
        Matrix out(ht.dim(), hs.dim());
        for (std::size_t j = 0; j < hs.dim(); ++j) {
            Vec img = at(p) * hs.reps.column(j);
            if (ht.dim() == 0) continue;
            Vec c = ht.class_of(img);
            for (std::size_t k = 0; k < c.size(); ++k) out(k, j) = c[k];
        }
        return out;
    }

private:
    Matrix build(int p) const {
        Matrix out(t_.dim(p), s_.dim(p));
        if (t_.dim(p) == 0) return out;
        const auto& g = s_.generators();
        for (std::size_t j = 0; j < s_.dim(p); ++j) {
            Vec acc = t_.unit();
            int deg = 0;
            for (auto i : occurrences(s_.basis(p)[j])) {
                acc = t_.product(deg, acc, g[i].degree, v_[i]);
                deg += g[i].degree;
                if (acc.empty()) break;
            }
            if (acc.empty()) continue;
            for (std::size_t k = 0; k < acc.size(); ++k) out(k, j) = acc[k];
        }
        return out;
    }

    FreeCGA s_;
    CDGA t_;
    std::vector<Vec> v_;
    std::vector<Matrix> m_;
};

// ---------------------------------------------------------------------------
// Minimal models

struct ModelStage {
    int degree = 0;              // degree of the generators added
    std::size_t closed = 0;      // new cocycle generators (d = 0)
    std::size_t killing = 0;     // new generators with d v = z
};

struct ModelCertificate {
    int cap = 0;
    std::vector<std::size_t> model_betti, target_betti, map_rank;  // degrees 0..cap+1
    bool iso_through_cap = false;
    bool injective_above = false;
    bool minimal = false;
    bool sullivan = false;
    std::vector<ModelStage> stages;
    bool ok() const { return iso_through_cap && injective_above && minimal && sullivan; }
};

struct MinimalModel {
    FreeCGA model;
    CDGAMorphism map;
    ModelCertificate certificate;
};

/**
 * Inductive construction for a simply connected CDGA: at stage k the new
 * generators of degree k+1 are the echelon complement of im H^{k+1}(m_k)
 * (closed) and the echelon basis of ker H^{k+2}(m_k) (killing, with image the
 * first solution of d b = m z).
 */
inline MinimalModel minimal_model(const CDGA& A, int N) {
    if (N < 1) throw MathError("model cap must be at least 1");
    if (A.cohomology(0).dim() != 1) throw MathError("H^0(A) is not Q");
    if (A.cohomology(1).dim() != 0) throw MathError("H^1(A) != 0; only simply connected algebras are supported");
    std::vector<Generator> gens;
    std::vector<Poly> dg;
    std::vector<Vec> vals;
    ModelCertificate cert;
    cert.cap = N;
    for (int k = 1; k < N; ++k) {
        FreeCGA Mk(gens, dg, k + 2);
        CDGAMorphism mk(Mk, A, vals);
        int deg = k + 1;
        ModelStage st;
        st.degree = deg;
        HomologyBasis hA = A.cohomology(deg);
        Subspace im = Subspace::span_of(mk.cohomology_map(deg));
        std::vector<Generator> add;
        std::vector<Poly> add_d;
        std::vector<Vec> add_v;
        for (auto c : echelon_complement_coords(im)) {
            add.push_back({"v" + std::to_string(deg) + "_" + std::to_string(add.size()), deg});
            add_d.push_back({});
            add_v.push_back(hA.reps.column(c));
            ++st.closed;
        }
        HomologyBasis hL = Mk.cohomology(deg + 1);
        Subspace ker = kernel_basis(mk.cohomology_map(deg + 1));
        for (std::size_t b = 0; b < ker.dim(); ++b) {
            Vec z = hL.reps * ker.vector(b);
            Vec mz = mk.at(deg + 1) * z;
            Vec sol = zero_vec(A.dim(deg));
            if (A.dim(deg) > 0) {
                auto x = solve(A.d_matrix(deg), mz);
                if (!x) throw MathError("internal: no b with d b = m z in degree " + std::to_string(deg));
                sol = *x;
            } else if (!is_zero(mz)) {
                throw MathError("internal: m z is not a boundary in degree " + std::to_string(deg + 1));
            }
            add.push_back({"v" + std::to_string(deg) + "_" + std::to_string(add.size()), deg});
            add_d.push_back(Mk.to_poly(z, deg + 1));
            add_v.push_back(sol);
            ++st.killing;
        }
        std::size_t old = gens.size(), total = old + add.size();
        auto widen = [&](const Poly& p) {
            Poly out;
            for (const auto& [m, c] : p) {
                Monomial w = m;
                w.resize(total, 0);
                out.emplace(w, c);
            }
            return out;
        };
        for (auto& p : dg) p = widen(p);
        for (std::size_t i = 0; i < add.size(); ++i) {
            gens.push_back(add[i]);
            dg.push_back(widen(add_d[i]));
            vals.push_back(add_v[i]);
        }
        cert.stages.push_back(st);
    }
    FreeCGA check(gens, dg, N + 1);
    CDGAMorphism mc(check, A, vals);
    cert.iso_through_cap = true;
    for (int p = 0; p <= N + 1; ++p) {
        Matrix h = mc.cohomology_map(p);
        std::size_t r = rank(h);
        cert.model_betti.push_back(h.cols());
        cert.target_betti.push_back(h.rows());
        cert.map_rank.push_back(r);
        if (p <= N && !(h.rows() == h.cols() && r == h.cols())) cert.iso_through_cap = false;
        if (p == N + 1) cert.injective_above = r == h.cols();
    }
    MinimalModel out;
    out.model = FreeCGA(gens, dg, N);
    out.model.formal_surrogate = A.formal_surrogate;
    out.map = CDGAMorphism(out.model, A, vals);
    cert.minimal = out.model.is_minimal();
    cert.sullivan = out.model.is_sullivan();
    out.certificate = cert;
    return out;
}

// V^{<r} = 0 and d = 0 on generators of degree <= 2r - 2.
inline bool verify_degree_bounds(const FreeCGA& M, int r) {
    for (std::size_t i = 0; i < M.generators().size(); ++i) {
        int p = M.generators()[i].degree;
        if (p < r) return false;
        if (p <= 2 * r - 2 && !M.differentials()[i].empty()) return false;
    }
    return true;
}

// Largest s with d = 0 on every generator of degree <= s (capped at M.cap()).
inline int differential_free_through(const FreeCGA& M) {
    int s = M.cap();
    for (std::size_t i = 0; i < M.generators().size(); ++i)
        if (!M.differentials()[i].empty()) s = std::min(s, M.generators()[i].degree - 1);
    return s;
}

// Smallest p >= 2 with H^p != 0 up to `top`, if any.
template <class Algebra>
std::optional<int> connectivity_degree(const Algebra& A, int top) {
    for (int p = 2; p <= top; ++p)
        if (A.cohomology(p).dim() > 0) return p;
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// zeta and its criteria

struct ZetaResult {
    int t = 0;
    Matrix matrix;      // rows: generators of degree t; columns: H^t basis
    Subspace kernel;    // in H^t class coordinates
    std::size_t h_dim = 0, v_dim = 0;
    bool injective() const { return kernel.dim() == 0; }
};

inline ZetaResult zeta(const FreeCGA& M, int t) {
    if (t < 1) throw MathError("zeta is defined on positive degrees");
    if (t > M.cap()) throw MathError("zeta degree " + std::to_string(t) + " exceeds the cap " + std::to_string(M.cap()));
    if (!M.is_minimal()) throw MathError("zeta needs a minimal algebra (im d in wordlength >= 2)");
    HomologyBasis h = M.cohomology(t);
    const auto& g = M.generators();
    std::vector<std::size_t> rows;  // basis positions of the linear monomials
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (g[i].degree != t) continue;
        Monomial m(g.size(), 0);
        m[i] = 1;
        const auto& b = M.basis(t);
        rows.push_back(static_cast<std::size_t>(std::find(b.begin(), b.end(), m) - b.begin()));
    }
    ZetaResult z;
    z.t = t;
    z.h_dim = h.dim();
    z.v_dim = rows.size();
    z.matrix = Matrix(rows.size(), h.dim());
    for (std::size_t j = 0; j < h.dim(); ++j)
        for (std::size_t i = 0; i < rows.size(); ++i) z.matrix(i, j) = h.reps(rows[i], j);
    z.kernel = kernel_basis(z.matrix);
    return z;
}

struct ProductWitness {
    int i = 0;             // degree of the first factor
    std::size_t a = 0, b = 0;  // basis indices in H^i and H^{t-i}
};

struct ComplementaryProducts {
    int t = 0;
    bool vanish = true;
    std::optional<ProductWitness> witness;
};

inline ComplementaryProducts check_complementary_products(const CohomologyRing& R, int t) {
    ComplementaryProducts out;
    out.t = t;
    if (t > R.top()) throw MathError("ring is not known through degree " + std::to_string(t));
    for (int i = 1; i <= t - 1; ++i)
        for (std::size_t a = 0; a < R.dim(i); ++a)
            for (std::size_t b = 0; b < R.dim(t - i); ++b) {
                Vec p = R.product(i, unit_vec(R.dim(i), a), t - i, unit_vec(R.dim(t - i), b));
                if (!is_zero(p)) {
                    out.vanish = false;
                    out.witness = ProductWitness{i, a, b};
                    return out;
                }
            }
    return out;
}

inline ComplementaryProducts check_complementary_products(const FreeCGA& M, int t) {
    return check_complementary_products(cohomology_ring(M, t), t);
}

inline const char* formality_caveat() {
    return "model built from the cohomology ring with zero differential; exact only for formal spaces";
}

struct LemmaVerdict {
    int r = 0, s = 0, t = 0;
    bool v_starts_at_r = false, d_zero_through_s = false, t_within = false;
    ComplementaryProducts products;
    bool applies = false;
    ZetaResult direct;
    bool consistent = true;  // applies implies direct injectivity
    std::vector<std::string> failures;
};

inline LemmaVerdict zeta_injectivity_via_lemma(const FreeCGA& M, int r, int s, int t) {
    LemmaVerdict v;
    v.r = r;
    v.s = s;
    v.t = t;
    v.v_starts_at_r = true;
    for (const auto& g : M.generators())
        if (g.degree < r) v.v_starts_at_r = false;
    v.d_zero_through_s = differential_free_through(M) >= s;
    v.t_within = t <= r + s;
    v.products = check_complementary_products(M, t);
    if (!v.v_starts_at_r) v.failures.push_back("V has generators below degree r");
    if (!v.d_zero_through_s) v.failures.push_back("d is nonzero on some generator of degree <= s");
    if (!v.products.vanish) v.failures.push_back("a t-complementary product is nonzero");
    if (!v.t_within) v.failures.push_back("t > r + s");
    v.applies = v.failures.empty();
    v.direct = zeta(M, t);
    v.consistent = !v.applies || v.direct.injective();
    return v;
}

struct HurewiczVerdict {
    int n = 0;
    bool simply_connected = false, finite_type = false;
    ZetaResult zeta_top;               // zeta in degree n - 1
    bool surjective = false;           // rational Hurewicz onto H_{n-1}
    std::optional<int> r;              // first nonzero H^{>=2}
    bool n_within = false;             // n <= 3r - 1
    ComplementaryProducts products;    // (n-1)-complementary
    bool corollary_applies = false;
    bool consistent = true;            // corollary => surjective, surjective => products vanish
    std::string caveat;
};

inline HurewiczVerdict hurewicz_surjectivity_certificate(const FreeCGA& M, int n, bool simply_connected, bool finite_type) {
    if (!simply_connected || !finite_type)
        throw MathError("the Hurewicz criterion needs the simply-connected and finite-type hypotheses asserted");
    if (n < 3) throw MathError("the Hurewicz criterion needs n >= 3");
    HurewiczVerdict v;
    v.n = n;
    v.simply_connected = simply_connected;
    v.finite_type = finite_type;
    v.zeta_top = zeta(M, n - 1);
    v.surjective = v.zeta_top.injective();
    v.r = connectivity_degree(M, M.cap());
    v.n_within = v.r && n <= 3 * *v.r - 1;
    v.products = check_complementary_products(M, n - 1);
    v.corollary_applies = v.n_within && v.products.vanish;
    v.consistent = (!v.corollary_applies || v.surjective) && (!v.surjective || v.products.vanish);
    if (M.formal_surrogate) v.caveat = formality_caveat();
    return v;
}

// Lambda(x, y, z) with |x| = |y| = u odd, |z| = 2u - 1, dz = xy.
inline FreeCGA example_minimal_algebra(int u, int cap) {
    if (u < 3 || u % 2 == 0) throw MathError("u must be an odd integer >= 3");
    std::vector<Generator> g{{"x", u}, {"y", u}, {"z", 2 * u - 1}};
    std::vector<Poly> d(3);
    d[2] = {{Monomial{1, 1, 0}, Q(1)}};
    return FreeCGA(g, d, cap);
}

}  // namespace wd

#endif
