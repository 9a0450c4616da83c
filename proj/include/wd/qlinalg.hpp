#ifndef WD_QLINALG_HPP
#define WD_QLINALG_HPP

// Exact linear algebra over Q. Everything is built on mpq_class, which keeps
// entries canonical (lowest terms, positive denominator) after every operation.

#include <gmpxx.h>

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace wd {

using Q = mpq_class;
using Vec = std::vector<Q>;

struct MathError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// mpq_class(a, b) is not canonicalized by GMP; always build fractions here.
inline Q frac(long a, long b) {
    if (b == 0) throw MathError("zero denominator");
    Q q(a, b);
    q.canonicalize();
    return q;
}

inline std::string to_string(const Q& q) { return q.get_str(); }

inline Vec zero_vec(std::size_t n) { return Vec(n, Q(0)); }

inline bool is_zero(const Vec& v) {
    for (const auto& x : v)
        if (sgn(x) != 0) return false;
    return true;
}

inline Vec unit_vec(std::size_t n, std::size_t i) {
    Vec v = zero_vec(n);
    v[i] = 1;
    return v;
}

class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t r, std::size_t c) : r_(r), c_(c), a_(r * c, Q(0)) {}
    Matrix(std::initializer_list<std::initializer_list<Q>> rows) {
        r_ = rows.size();
        c_ = r_ ? rows.begin()->size() : 0;
        a_.reserve(r_ * c_);
        for (const auto& row : rows) {
            if (row.size() != c_) throw MathError("ragged matrix literal");
            for (const auto& x : row) a_.push_back(x);
        }
    }

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
        return m;
    }

    static Matrix from_columns(std::size_t rows, const std::vector<Vec>& cols) {
        Matrix m(rows, cols.size());
        for (std::size_t j = 0; j < cols.size(); ++j) {
            if (cols[j].size() != rows) throw MathError("column length mismatch");
            for (std::size_t i = 0; i < rows; ++i) m(i, j) = cols[j][i];
        }
        return m;
    }

    static Matrix from_rows(std::size_t cols, const std::vector<Vec>& rows) {
        Matrix m(rows.size(), cols);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (rows[i].size() != cols) throw MathError("row length mismatch");
            for (std::size_t j = 0; j < cols; ++j) m(i, j) = rows[i][j];
        }
        return m;
    }

    std::size_t rows() const { return r_; }
    std::size_t cols() const { return c_; }

    Q& operator()(std::size_t i, std::size_t j) { return a_[i * c_ + j]; }
    const Q& operator()(std::size_t i, std::size_t j) const { return a_[i * c_ + j]; }

    Vec column(std::size_t j) const {
        Vec v(r_);
        for (std::size_t i = 0; i < r_; ++i) v[i] = (*this)(i, j);
        return v;
    }
    Vec row(std::size_t i) const {
        return Vec(a_.begin() + static_cast<long>(i * c_), a_.begin() + static_cast<long>((i + 1) * c_));
    }
    std::vector<Vec> columns() const {
        std::vector<Vec> out;
        for (std::size_t j = 0; j < c_; ++j) out.push_back(column(j));
        return out;
    }

    Matrix transpose() const {
        Matrix t(c_, r_);
        for (std::size_t i = 0; i < r_; ++i)
            for (std::size_t j = 0; j < c_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    bool is_zero() const {
        for (const auto& x : a_)
            if (sgn(x) != 0) return false;
        return true;
    }

    Vec operator*(const Vec& v) const {
        if (v.size() != c_) throw MathError("matrix-vector dimension mismatch");
        Vec out = zero_vec(r_);
        for (std::size_t i = 0; i < r_; ++i)
            for (std::size_t j = 0; j < c_; ++j)
                if (sgn((*this)(i, j)) != 0 && sgn(v[j]) != 0) out[i] += (*this)(i, j) * v[j];
        return out;
    }

    Matrix operator*(const Matrix& b) const {
        if (c_ != b.r_) throw MathError("matrix product dimension mismatch");
        Matrix out(r_, b.c_);
        std::vector<std::vector<std::size_t>> nz(b.r_);  // nonzero columns of each row of b
        for (std::size_t k = 0; k < b.r_; ++k)
            for (std::size_t j = 0; j < b.c_; ++j)
                if (sgn(b(k, j)) != 0) nz[k].push_back(j);
        for (std::size_t i = 0; i < r_; ++i)
            for (std::size_t k = 0; k < c_; ++k) {
                const Q& x = (*this)(i, k);
                if (sgn(x) == 0) continue;
                for (std::size_t j : nz[k]) out(i, j) += x * b(k, j);
            }
        return out;
    }

    Matrix operator+(const Matrix& b) const {
        check_same(b);
        Matrix out = *this;
        for (std::size_t i = 0; i < a_.size(); ++i) out.a_[i] += b.a_[i];
        return out;
    }
    Matrix operator-(const Matrix& b) const {
        check_same(b);
        Matrix out = *this;
        for (std::size_t i = 0; i < a_.size(); ++i) out.a_[i] -= b.a_[i];
        return out;
    }
    Matrix operator-() const {
        Matrix out = *this;
        for (auto& x : out.a_) x = -x;
        return out;
    }
    Matrix scaled(const Q& s) const {
        Matrix out = *this;
        for (auto& x : out.a_) x *= s;
        return out;
    }

    bool operator==(const Matrix& b) const { return r_ == b.r_ && c_ == b.c_ && a_ == b.a_; }
    bool operator!=(const Matrix& b) const { return !(*this == b); }

    // Copy `b` into this matrix with its top-left corner at (i0, j0).
    void set_block(std::size_t i0, std::size_t j0, const Matrix& b) {
        if (i0 + b.r_ > r_ || j0 + b.c_ > c_) throw MathError("block out of range");
        for (std::size_t i = 0; i < b.r_; ++i)
            for (std::size_t j = 0; j < b.c_; ++j) (*this)(i0 + i, j0 + j) = b(i, j);
    }
    Matrix block(std::size_t i0, std::size_t j0, std::size_t nr, std::size_t nc) const {
        if (i0 + nr > r_ || j0 + nc > c_) throw MathError("block out of range");
        Matrix out(nr, nc);
        for (std::size_t i = 0; i < nr; ++i)
            for (std::size_t j = 0; j < nc; ++j) out(i, j) = (*this)(i0 + i, j0 + j);
        return out;
    }

    std::string str() const {
        std::ostringstream os;
        for (std::size_t i = 0; i < r_; ++i) {
            for (std::size_t j = 0; j < c_; ++j) os << (j ? " " : "") << (*this)(i, j).get_str();
            os << "\n";
        }
        return os.str();
    }

private:
    void check_same(const Matrix& b) const {
        if (r_ != b.r_ || c_ != b.c_) throw MathError("matrix dimension mismatch");
    }
    std::size_t r_ = 0, c_ = 0;
    std::vector<Q> a_;
};

inline Matrix hstack(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows()) throw MathError("hstack row mismatch");
    Matrix m(a.rows(), a.cols() + b.cols());
    m.set_block(0, 0, a);
    m.set_block(0, a.cols(), b);
    return m;
}

inline Matrix vstack(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.cols()) throw MathError("vstack column mismatch");
    Matrix m(a.rows() + b.rows(), a.cols());
    m.set_block(0, 0, a);
    m.set_block(a.rows(), 0, b);
    return m;
}

inline Matrix direct_sum(const Matrix& a, const Matrix& b) {
    Matrix m(a.rows() + b.rows(), a.cols() + b.cols());
    m.set_block(0, 0, a);
    m.set_block(a.rows(), a.cols(), b);
    return m;
}

// Sparse rows: (column, nonzero value) pairs sorted by column.
using SparseRow = std::vector<std::pair<std::size_t, Q>>;

inline SparseRow sparse_row(const Matrix& M, std::size_t i) {
    SparseRow r;
    for (std::size_t j = 0; j < M.cols(); ++j)
        if (sgn(M(i, j)) != 0) r.emplace_back(j, M(i, j));
    return r;
}

// r - f p
inline SparseRow sparse_axpy(SparseRow& r, const Q& f, const SparseRow& p) {
    SparseRow out;
    out.reserve(r.size() + p.size());
    std::size_t a = 0, b = 0;
    while (a < r.size() || b < p.size()) {
        if (b == p.size() || (a < r.size() && r[a].first < p[b].first)) {
            out.push_back(std::move(r[a++]));
        } else if (a == r.size() || p[b].first < r[a].first) {
            out.emplace_back(p[b].first, -f * p[b].second);
            ++b;
        } else {
            Q x = r[a].second - f * p[b].second;
            if (sgn(x) != 0) out.emplace_back(r[a].first, std::move(x));
            ++a;
            ++b;
        }
    }
    return out;
}

// Reduced row echelon form, computed on sparse rows. The result is unique,
// so the order in which pivots are found does not matter.
struct Echelon {
    Matrix R;
    std::vector<std::size_t> pivots;
};

inline Echelon rref(const Matrix& m) {
    std::map<std::size_t, std::vector<SparseRow>> by_lead;  // rows bucketed by leading column
    for (std::size_t i = 0; i < m.rows(); ++i) {
        SparseRow r = sparse_row(m, i);
        if (!r.empty()) by_lead[r.front().first].push_back(std::move(r));
    }
    std::vector<SparseRow> rows;
    std::vector<std::size_t> piv;
    while (!by_lead.empty()) {
        auto it = by_lead.begin();
        std::size_t col = it->first;
        std::vector<SparseRow> bucket = std::move(it->second);
        by_lead.erase(it);
        SparseRow p = std::move(bucket.front());
        Q inv = 1 / p.front().second;
        for (auto& [j, x] : p) x *= inv;
        for (std::size_t k = 1; k < bucket.size(); ++k) {
            Q f = bucket[k].front().second;
            SparseRow r = sparse_axpy(bucket[k], f, p);
            if (!r.empty()) by_lead[r.front().first].push_back(std::move(r));
        }
        rows.push_back(std::move(p));
        piv.push_back(col);
    }
    // back substitution: clear each pivot column above its pivot
    for (std::size_t j = rows.size(); j-- > 0;)
        for (std::size_t i = 0; i < j; ++i) {
            auto hit = std::lower_bound(rows[i].begin(), rows[i].end(), piv[j], [](const auto& e, std::size_t c) { return e.first < c; });
            if (hit == rows[i].end() || hit->first != piv[j]) continue;
            Q f = hit->second;
            rows[i] = sparse_axpy(rows[i], f, rows[j]);
        }
    Matrix R(m.rows(), m.cols());
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (auto& [j, x] : rows[i]) R(i, j) = std::move(x);
    return {std::move(R), std::move(piv)};
}

inline std::size_t rank(const Matrix& M) {
    std::map<std::size_t, SparseRow> pivot;  // leading column -> reduced row
    for (std::size_t i = 0; i < M.rows(); ++i) {
        SparseRow r = sparse_row(M, i);
        while (!r.empty()) {
            auto it = pivot.find(r.front().first);
            if (it == pivot.end()) {
                pivot.emplace(r.front().first, std::move(r));
                break;
            }
            const SparseRow& p = it->second;
            r = sparse_axpy(r, r.front().second / p.front().second, p);
        }
    }
    return pivot.size();
}

// A subspace of Q^n stored canonically: its basis vectors are the columns of
// the transpose of a reduced row echelon matrix.
class Subspace {
public:
    Subspace() = default;
    explicit Subspace(std::size_t ambient) : n_(ambient), B_(ambient, 0) {}
    Subspace(std::size_t ambient, const std::vector<Vec>& spanning) : n_(ambient) {
        Echelon e = rref(Matrix::from_rows(ambient, spanning));
        std::vector<Vec> basis;
        for (std::size_t i = 0; i < e.pivots.size(); ++i) basis.push_back(e.R.row(i));
        B_ = Matrix::from_columns(ambient, basis);
        piv_ = e.pivots;
    }
    static Subspace full(std::size_t n) {
        std::vector<Vec> v;
        for (std::size_t i = 0; i < n; ++i) v.push_back(unit_vec(n, i));
        return Subspace(n, v);
    }
    static Subspace span_of(const Matrix& cols) { return Subspace(cols.rows(), cols.columns()); }

    std::size_t ambient_dim() const { return n_; }
    std::size_t dim() const { return B_.cols(); }
    const Matrix& basis() const { return B_; }
    Vec vector(std::size_t j) const { return B_.column(j); }
    const std::vector<std::size_t>& pivots() const { return piv_; }

    // Coordinates of v in the echelon basis; read off at the pivot positions.
    std::optional<Vec> coordinates(const Vec& v) const {
        if (v.size() != n_) throw MathError("subspace membership dimension mismatch");
        Vec c(dim());
        for (std::size_t j = 0; j < dim(); ++j) c[j] = v[piv_[j]];
        if (B_ * c != v) return std::nullopt;
        return c;
    }
    bool contains(const Vec& v) const { return coordinates(v).has_value(); }
    bool contains(const Subspace& s) const {
        for (std::size_t j = 0; j < s.dim(); ++j)
            if (!contains(s.vector(j))) return false;
        return true;
    }

    bool operator==(const Subspace& o) const { return n_ == o.n_ && B_ == o.B_; }
    bool operator!=(const Subspace& o) const { return !(*this == o); }

private:
    std::size_t n_ = 0;
    Matrix B_;
    std::vector<std::size_t> piv_;
};

inline Subspace kernel_basis(const Matrix& M) {
    Echelon e = rref(M);
    std::vector<bool> is_piv(M.cols(), false);
    for (auto p : e.pivots) is_piv[p] = true;
    std::vector<Vec> vs;
    for (std::size_t f = 0; f < M.cols(); ++f) {
        if (is_piv[f]) continue;
        Vec v = zero_vec(M.cols());
        v[f] = 1;
        for (std::size_t i = 0; i < e.pivots.size(); ++i) v[e.pivots[i]] = -e.R(i, f);
        vs.push_back(std::move(v));
    }
    return Subspace(M.cols(), vs);
}

inline Subspace image_basis(const Matrix& M) { return Subspace(M.rows(), M.columns()); }

// Particular solution with every free variable set to zero.
inline std::optional<Vec> solve(const Matrix& M, const Vec& b) {
    if (b.size() != M.rows()) throw MathError("solve: right-hand side has wrong length");
    Matrix aug = hstack(M, Matrix::from_columns(M.rows(), {b}));
    Echelon e = rref(aug);
    if (!e.pivots.empty() && e.pivots.back() == M.cols()) return std::nullopt;
    Vec x = zero_vec(M.cols());
    for (std::size_t i = 0; i < e.pivots.size(); ++i) x[e.pivots[i]] = e.R(i, M.cols());
    return x;
}

inline Subspace sum(const Subspace& a, const Subspace& b) {
    if (a.ambient_dim() != b.ambient_dim()) throw MathError("subspace sum dimension mismatch");
    auto v = a.basis().columns();
    for (auto& x : b.basis().columns()) v.push_back(x);
    return Subspace(a.ambient_dim(), v);
}

// Representatives of a complement of `sub` inside `ambient`: ambient basis
// vectors are taken in order whenever they enlarge the running span.
inline Subspace quotient_basis(const Subspace& sub, const Subspace& ambient) {
    if (sub.ambient_dim() != ambient.ambient_dim()) throw MathError("quotient_basis: dimension mismatch");
    if (!ambient.contains(sub)) throw MathError("quotient_basis: sub is not contained in ambient");
    // running span kept as reduced vectors with distinct leading coordinates
    std::vector<std::pair<std::size_t, Vec>> red;
    auto reduce = [&](Vec v) {
        for (const auto& [p, w] : red) {
            if (sgn(v[p]) == 0) continue;
            Q f = v[p] / w[p];
            for (std::size_t k = 0; k < v.size(); ++k)
                if (sgn(w[k]) != 0) v[k] -= f * w[k];
        }
        return v;
    };
    auto lead = [](const Vec& v) {
        for (std::size_t k = 0; k < v.size(); ++k)
            if (sgn(v[k]) != 0) return k;
        return v.size();
    };
    for (std::size_t j = 0; j < sub.dim(); ++j) {
        Vec v = reduce(sub.vector(j));
        std::size_t p = lead(v);
        if (p < v.size()) red.emplace_back(p, std::move(v));
    }
    std::vector<Vec> chosen;
    for (std::size_t j = 0; j < ambient.dim() && red.size() < ambient.dim(); ++j) {
        Vec v = reduce(ambient.vector(j));
        std::size_t p = lead(v);
        if (p == v.size()) continue;
        chosen.push_back(ambient.vector(j));
        red.emplace_back(p, std::move(v));
    }
    return Subspace(ambient.ambient_dim(), chosen);
}

// Complement of `sub` in the whole space spanned by the standard basis vectors
// at the non-pivot coordinates of its echelon form.
inline std::vector<std::size_t> echelon_complement_coords(const Subspace& sub) {
    std::vector<bool> p(sub.ambient_dim(), false);
    for (auto i : sub.pivots()) p[i] = true;
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < sub.ambient_dim(); ++i)
        if (!p[i]) out.push_back(i);
    return out;
}

// ---------------------------------------------------------------------------
// Symmetric forms

struct SymmetricForm {
    Matrix matrix;
    SymmetricForm() = default;
    explicit SymmetricForm(Matrix m) : matrix(std::move(m)) {
        if (matrix.rows() != matrix.cols() || matrix != matrix.transpose())
            throw MathError("symmetric form matrix is not symmetric");
    }
    std::size_t dim() const { return matrix.rows(); }
    static SymmetricForm diagonal(const std::vector<Q>& d) {
        Matrix m(d.size(), d.size());
        for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
        return SymmetricForm(m);
    }
};

inline SymmetricForm orthogonal_sum(const SymmetricForm& a, const SymmetricForm& b) {
    return SymmetricForm(direct_sum(a.matrix, b.matrix));
}

struct Diagonalization {
    std::vector<Q> diagonal;
    Matrix P;  // P^T f P = diag(diagonal)
    std::size_t radical_dim = 0;
};

inline Diagonalization diagonalize_symmetric(const SymmetricForm& f) {
    std::size_t n = f.dim();
    Matrix A = f.matrix;
    Matrix P = Matrix::identity(n);
    // Congruence step A <- E^T A E recorded in P <- P E, with E elementary.
    auto add_col = [&](std::size_t dst, std::size_t src, const Q& c) {
        for (std::size_t i = 0; i < n; ++i) A(i, dst) += c * A(i, src);
        for (std::size_t j = 0; j < n; ++j) A(dst, j) += c * A(src, j);
        for (std::size_t i = 0; i < n; ++i) P(i, dst) += c * P(i, src);
    };
    auto swap_idx = [&](std::size_t a, std::size_t b) {
        for (std::size_t i = 0; i < n; ++i) std::swap(A(i, a), A(i, b));
        for (std::size_t j = 0; j < n; ++j) std::swap(A(a, j), A(b, j));
        for (std::size_t i = 0; i < n; ++i) std::swap(P(i, a), P(i, b));
    };
    for (std::size_t k = 0; k < n; ++k) {
        if (sgn(A(k, k)) == 0) {
            std::size_t j = k + 1;
            while (j < n && sgn(A(j, j)) == 0) ++j;
            if (j < n) {
                swap_idx(k, j);
            } else {
                j = k + 1;
                while (j < n && sgn(A(k, j)) == 0) ++j;
                if (j == n) continue;
                add_col(k, j, Q(1));
            }
        }
        for (std::size_t j = k + 1; j < n; ++j)
            if (sgn(A(k, j)) != 0) add_col(j, k, -A(k, j) / A(k, k));
    }
    Diagonalization d;
    d.P = P;
    for (std::size_t i = 0; i < n; ++i) {
        d.diagonal.push_back(A(i, i));
        if (sgn(A(i, i)) == 0) ++d.radical_dim;
    }
    return d;
}

inline int signature(const SymmetricForm& f) {
    int s = 0;
    for (const auto& x : diagonalize_symmetric(f).diagonal) s += sgn(x);
    return s;
}

// ---------------------------------------------------------------------------
// Witt classes over Q: signature plus the second residue at every prime.
// For odd p the residue form over F_p is recorded by its rank mod 2 and the
// square class of its signed discriminant (-1)^{m(m-1)/2} det, which is what
// makes the pair a Witt invariant. At 2 only the rank mod 2 survives.

struct ResidueData {
    int rank_mod2 = 0;
    int disc_class = 1;  // +1 square, -1 non-square in F_p^*
    bool operator==(const ResidueData& o) const { return rank_mod2 == o.rank_mod2 && disc_class == o.disc_class; }
    bool trivial() const { return rank_mod2 == 0 && disc_class == 1; }
};

struct WittClass {
    int signature = 0;
    std::map<unsigned long, ResidueData> residues;  // odd primes
    ResidueData dyadic;
    std::size_t radical_dim = 0;
    bool is_zero() const {
        if (signature != 0 || !dyadic.trivial()) return false;
        for (const auto& [p, r] : residues)
            if (!r.trivial()) return false;
        return true;
    }
};

inline unsigned long factor_bound() {
    if (const char* s = std::getenv("WD_FACTOR_BOUND")) {
        char* end = nullptr;
        unsigned long v = std::strtoul(s, &end, 10);
        if (end && *end == '\0' && v >= 2) return v;
        throw MathError("WD_FACTOR_BOUND is not an integer >= 2");
    }
    return 1000000UL;
}

// Trial division up to `bound`. A remaining cofactor is accepted as prime only
// when it is below bound^2; otherwise the factorization is refused.
inline std::map<unsigned long, int> factorize(mpz_class n, unsigned long bound) {
    std::map<unsigned long, int> out;
    n = abs(n);
    if (n == 0) throw MathError("cannot factor zero");
    for (unsigned long p = 2; p <= bound && n > 1; p += (p == 2 ? 1 : 2)) {
        if (mpz_class(p) * p > n) break;
        while (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
            ++out[p];
            n /= p;
        }
    }
    if (n > 1) {
        mpz_class b = bound;
        if (n >= b * b) throw MathError("factorization bound exceeded for " + n.get_str());
        if (!n.fits_ulong_p()) throw MathError("prime factor too large: " + n.get_str());
        ++out[n.get_ui()];
    }
    return out;
}

inline int legendre(const mpz_class& a, unsigned long p) {
    mpz_class pp = p;
    return mpz_legendre(a.get_mpz_t(), pp.get_mpz_t());
}

inline WittClass witt_class(const SymmetricForm& f) {
    Diagonalization d = diagonalize_symmetric(f);
    unsigned long bound = factor_bound();
    WittClass w;
    w.radical_dim = d.radical_dim;
    std::vector<mpz_class> ints;
    for (const auto& x : d.diagonal) {
        if (sgn(x) == 0) continue;
        w.signature += sgn(x);
        ints.push_back(x.get_num() * x.get_den());  // same square class
    }
    std::map<unsigned long, std::vector<mpz_class>> odd_units;
    int dyadic_count = 0;
    for (const auto& a : ints) {
        auto fac = factorize(a, bound);
        for (const auto& [p, e] : fac) {
            if (p == 2) {
                if (e % 2) ++dyadic_count;
                continue;
            }
            auto& slot = odd_units[p];
            if (e % 2) {
                mpz_class u = a;
                for (int i = 0; i < e; ++i) u /= p;
                slot.push_back(u);
            }
        }
    }
    w.dyadic.rank_mod2 = dyadic_count % 2;
    for (const auto& [p, units] : odd_units) {
        ResidueData r;
        std::size_t m = units.size();
        r.rank_mod2 = static_cast<int>(m % 2);
        int disc = ((m * (m - 1) / 2) % 2) ? legendre(mpz_class(-1), p) : 1;
        for (const auto& u : units) disc *= legendre(u, p);
        r.disc_class = disc;
        w.residues[p] = r;
    }
    return w;
}

inline bool witt_equal(const WittClass& a, const WittClass& b) {
    if (a.signature != b.signature || !(a.dyadic == b.dyadic)) return false;
    std::map<unsigned long, ResidueData> ka, kb;
    for (const auto& [p, r] : a.residues)
        if (!r.trivial()) ka[p] = r;
    for (const auto& [p, r] : b.residues)
        if (!r.trivial()) kb[p] = r;
    return ka == kb;
}

}  // namespace wd

#endif
