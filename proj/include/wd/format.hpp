#ifndef WD_FORMAT_HPP
#define WD_FORMAT_HPP

// Line-oriented text documents for chain complexes, maps, simplicial
// complexes, CDGA presentations, flat bundles and Witt space specs.
//
//   kind <tag> <name>          first line; names the primary block
//   [<tag> <name>]             opens a block
//   key value ...              one field per line; '#' starts a comment
//
// Rationals are written p/q. Matrices follow their header line row by row,
// the row count being fixed by the header. Blocks may refer only to blocks
// defined above them.

#include "wd/duality.hpp"

#include <cctype>
#include <iomanip>

namespace wd::format {

struct ParseError : std::runtime_error {
    int line, column;
    ParseError(int l, int c, const std::string& msg)
        : std::runtime_error("line " + std::to_string(l) + ", column " + std::to_string(c) + ": " + msg), line(l), column(c) {}
};

struct Token {
    std::string text;
    int column = 0;
};

struct Line {
    int number = 0;
    std::string raw;
    std::vector<Token> tokens;
};

inline std::vector<Line> lex(const std::string& text) {
    std::vector<Line> out;
    std::istringstream in(text);
    std::string raw;
    int n = 0;
    while (std::getline(in, raw)) {
        ++n;
        if (!raw.empty() && raw.back() == '\r') raw.pop_back();
        std::string s = raw.substr(0, raw.find('#'));
        Line l{n, s, {}};
        std::size_t i = 0;
        while (i < s.size()) {
            while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
            if (i == s.size()) break;
            std::size_t j = i;
            while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j]))) ++j;
            l.tokens.push_back({s.substr(i, j - i), static_cast<int>(i) + 1});
            i = j;
        }
        if (!l.tokens.empty()) out.push_back(std::move(l));
    }
    return out;
}

inline Q parse_rational(const Line& l, const Token& t) {
    const std::string& s = t.text;
    std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    std::size_t slash = s.find('/');
    auto digits = [&](std::size_t a, std::size_t b) {
        if (a >= b) return false;
        for (std::size_t k = a; k < b; ++k)
            if (!std::isdigit(static_cast<unsigned char>(s[k]))) return false;
        return true;
    };
    bool ok = slash == std::string::npos ? digits(i, s.size()) : digits(i, slash) && digits(slash + 1, s.size());
    if (!ok) throw ParseError(l.number, t.column, "expected a rational p/q, got '" + s + "'");
    if (slash != std::string::npos && s.find_first_not_of('0', slash + 1) == std::string::npos)
        throw ParseError(l.number, t.column, "zero denominator in '" + s + "'");
    Q q;
    if (q.set_str(s[0] == '+' ? s.substr(1) : s, 10) != 0) throw ParseError(l.number, t.column, "invalid rational '" + s + "'");
    q.canonicalize();
    return q;
}

inline long parse_int(const Line& l, const Token& t) {
    const std::string& s = t.text;
    std::size_t i = (s[0] == '-') ? 1 : 0;
    if (i == s.size() || s.size() > 18) throw ParseError(l.number, t.column, "expected an integer, got '" + s + "'");
    for (std::size_t k = i; k < s.size(); ++k)
        if (!std::isdigit(static_cast<unsigned char>(s[k]))) throw ParseError(l.number, t.column, "expected an integer, got '" + s + "'");
    return std::stol(s);
}

inline std::size_t parse_count(const Line& l, const Token& t) {
    long v = parse_int(l, t);
    if (v < 0) throw ParseError(l.number, t.column, "expected a nonnegative count, got '" + t.text + "'");
    return static_cast<std::size_t>(v);
}

inline std::string emit_q(const Q& q) { return q.get_str(); }

inline std::string emit_vec(const Vec& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + emit_q(v[i]);
    return s;
}

inline void emit_rows(std::ostream& os, const Matrix& m) {
    for (std::size_t i = 0; i < m.rows(); ++i) os << emit_vec(m.row(i)) << "\n";
}

// ---------------------------------------------------------------------------
// Blocks

struct MapEntry {
    std::string source, target;
    ChainMap map;
};

struct SimplicialEntry {
    int vertices = 0;
    std::vector<Simplex> facets;
    bool is_pair = false;
    std::vector<Simplex> sub_facets;
    std::optional<Vec> orientation;  // top chain, in the complex's simplex order

    SimplicialComplex complex() const { return SimplicialComplex::from_facets(vertices, facets); }
    SimplicialPair pair() const {
        return SimplicialPair(complex(), SimplicialComplex::from_facets(vertices, sub_facets, false));
    }
};

struct CdgaEntry {
    std::vector<Generator> gens;
    std::vector<Poly> d;
    std::vector<int> bound;       // exponent bound for even generators, 0 for odd
    std::optional<int> free_cap;  // set for a free algebra

    CDGA cdga() const {
        if (free_cap) throw MathError("this block is a free algebra, not a finite CDGA");
        return cdga_from_presentation(gens, d, bound);
    }
    FreeCGA free_algebra() const {
        if (!free_cap) throw MathError("this block is a finite CDGA; a free algebra needs a 'free <cap>' line");
        return FreeCGA(gens, d, *free_cap);
    }
};

struct BundleEntry {
    std::string fiber, monodromy, cone_model;
    int dim = 0, order = 1, orientation = 1;
    Vec fiber_class;
    bool simply_connected = false;
    std::optional<CohomologyRing> ring;
};

struct WittEntry {
    int n = 0;
    std::string M, boundary;
    std::vector<std::string> strata;
    std::optional<std::vector<int>> p, q;  // perversity tables; middle when absent
};

struct Field {
    std::string key;
    std::vector<std::string> values;
    std::optional<Matrix> matrix;
};

// Free-form record: reports and witnesses.
struct Record {
    std::vector<Field> fields;

    Record& add(const std::string& k, std::vector<std::string> v) {
        fields.push_back({k, std::move(v), std::nullopt});
        return *this;
    }
    Record& add(const std::string& k, const std::string& v) { return add(k, std::vector<std::string>{v}); }
    Record& add(const std::string& k, const char* v) { return add(k, std::string(v)); }
    Record& add(const std::string& k, long v) { return add(k, std::to_string(v)); }
    Record& add(const std::string& k, int v) { return add(k, std::to_string(v)); }
    Record& add(const std::string& k, std::size_t v) { return add(k, std::to_string(v)); }
    Record& add(const std::string& k, bool v) { return add(k, std::string(v ? "yes" : "no")); }
    Record& add(const std::string& k, const Vec& v) {
        std::vector<std::string> s;
        for (const auto& x : v) s.push_back(emit_q(x));
        return add(k, s);
    }
    template <class T>
    Record& add_list(const std::string& k, const std::vector<T>& v) {
        std::vector<std::string> s;
        for (const auto& x : v) s.push_back(std::to_string(x));
        return add(k, s);
    }
    Record& add_matrix(const std::string& k, const Matrix& m) {
        fields.push_back({k, {}, m});
        return *this;
    }

    const Field* find(const std::string& k) const {
        for (const auto& f : fields)
            if (f.key == k) return &f;
        return nullptr;
    }
    const Field& get(const std::string& k) const {
        const Field* f = find(k);
        if (!f) throw MathError("record has no field '" + k + "'");
        return *f;
    }
    std::string str(const std::string& k) const {
        const Field& f = get(k);
        if (f.values.size() != 1) throw MathError("field '" + k + "' is not a single value");
        return f.values[0];
    }
    long integer(const std::string& k) const { return std::stol(str(k)); }
    Vec vec(const std::string& k) const {
        Vec v;
        for (const auto& s : get(k).values) {
            Q q(s);
            q.canonicalize();
            v.push_back(q);
        }
        return v;
    }
    const Matrix& mat(const std::string& k) const {
        const Field& f = get(k);
        if (!f.matrix) throw MathError("field '" + k + "' is not a matrix");
        return *f.matrix;
    }
};

struct Document {
    std::string kind, primary;
    std::vector<std::pair<std::string, std::string>> order;  // (tag, name) as written
    std::map<std::string, ChainComplex> chains;
    std::map<std::string, MapEntry> maps;
    std::map<std::string, SimplicialEntry> simplicial;
    std::map<std::string, CdgaEntry> cdgas;
    std::map<std::string, BundleEntry> bundles;
    std::map<std::string, WittEntry> wittspecs;
    std::map<std::string, Record> records;  // report and witness blocks

    bool has(const std::string& name) const {
        for (const auto& [t, n] : order)
            if (n == name) return true;
        return false;
    }
    std::string tag_of(const std::string& name) const {
        for (const auto& [t, n] : order)
            if (n == name) return t;
        return {};
    }

    void add_chain(const std::string& name, ChainComplex c) {
        order.emplace_back("chain", name);
        chains[name] = std::move(c);
    }
    void add_map(const std::string& name, const std::string& s, const std::string& t, ChainMap f) {
        order.emplace_back("map", name);
        maps[name] = {s, t, std::move(f)};
    }
    void add_simplicial(const std::string& name, SimplicialEntry e) {
        order.emplace_back("simplicial", name);
        simplicial[name] = std::move(e);
    }
    void add_cdga(const std::string& name, CdgaEntry e) {
        order.emplace_back("cdga", name);
        cdgas[name] = std::move(e);
    }
    void add_bundle(const std::string& name, BundleEntry e) {
        order.emplace_back("bundle", name);
        bundles[name] = std::move(e);
    }
    void add_wittspec(const std::string& name, WittEntry e) {
        order.emplace_back("wittspec", name);
        wittspecs[name] = std::move(e);
    }
    void add_record(const std::string& tag, const std::string& name, Record r) {
        order.emplace_back(tag, name);
        records[name] = std::move(r);
    }

    LinkBundleData bundle(const std::string& name) const {
        const BundleEntry& b = bundles.at(name);
        LinkBundleData d;
        d.fiber = chains.at(b.fiber);
        d.fiber_dim = b.dim;
        if (!b.monodromy.empty()) d.monodromy = maps.at(b.monodromy).map;
        else d.monodromy = ChainMap::identity(d.fiber);
        d.order = b.order;
        d.fiber_class = b.fiber_class;
        d.orientation = b.orientation;
        d.simply_connected_asserted = b.simply_connected;
        if (!b.cone_model.empty()) d.cone_model = simplicial.at(b.cone_model).complex();
        d.cone_ring = b.ring;
        return d;
    }

    WittSpaceSpec wittspec(const std::string& name) const {
        const WittEntry& w = wittspecs.at(name);
        WittSpaceSpec s;
        s.n = w.n;
        s.M = chains.at(w.M);
        s.boundary = maps.at(w.boundary).map;
        for (const auto& st : w.strata) s.strata.push_back(bundle(st));
        if (w.p) s.perversities = {Perversity::table(*w.p), Perversity::table(*w.q)};
        return s;
    }
};

// ---------------------------------------------------------------------------
// Parser

namespace detail {

inline const std::vector<std::string>& tags() {
    static const std::vector<std::string> t{"chain", "map", "simplicial", "cdga", "bundle", "wittspec", "report", "witness"};
    return t;
}

class Parser {
public:
    explicit Parser(const std::vector<Line>& lines) : L_(lines) {}

    Document run() {
        Document doc;
        if (L_.empty()) throw ParseError(1, 1, "empty document");
        const Line& h = L_[0];
        if (h.tokens[0].text != "kind" || h.tokens.size() != 3)
            throw ParseError(h.number, h.tokens[0].column, "document must start with 'kind <tag> <name>'");
        doc.kind = h.tokens[1].text;
        doc.primary = h.tokens[2].text;
        if (std::find(tags().begin(), tags().end(), doc.kind) == tags().end())
            throw ParseError(h.number, h.tokens[1].column, "unknown kind '" + doc.kind + "'");
        pos_ = 1;
        while (pos_ < L_.size()) block(doc);
        if (doc.tag_of(doc.primary) != doc.kind)
            throw ParseError(h.number, h.tokens[2].column, "no " + doc.kind + " block named '" + doc.primary + "'");
        return doc;
    }

private:
    const std::vector<Line>& L_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const Line& l, const Token& t, const std::string& m) const { throw ParseError(l.number, t.column, m); }

    void need(const Line& l, std::size_t n) const {
        if (l.tokens.size() != n)
            fail(l, l.tokens.back(), "'" + l.tokens[0].text + "' takes " + std::to_string(n - 1) + " argument(s)");
    }

    std::string ref(const Document& doc, const Line& l, const Token& t, const std::string& tag) const {
        if (doc.tag_of(t.text) != tag) fail(l, t, "no " + tag + " named '" + t.text + "' defined above");
        return t.text;
    }

    std::vector<Q> row(const Line& l, std::size_t from) const {
        std::vector<Q> v;
        for (std::size_t i = from; i < l.tokens.size(); ++i) v.push_back(parse_rational(l, l.tokens[i]));
        return v;
    }

    Matrix matrix(std::size_t rows, std::size_t cols, const Line& head, const std::string& what) {
        Matrix m(rows, cols);
        for (std::size_t i = 0; i < rows; ++i) {
            if (pos_ >= L_.size() || L_[pos_].tokens[0].text[0] == '[')
                fail(head, head.tokens[0], what + ": expected " + std::to_string(rows) + " rows of " + std::to_string(cols) + " entries");
            const Line& l = L_[pos_++];
            if (l.tokens.size() != cols)
                fail(l, l.tokens[0], what + ": row has " + std::to_string(l.tokens.size()) + " entries, expected " + std::to_string(cols));
            for (std::size_t j = 0; j < cols; ++j) m(i, j) = parse_rational(l, l.tokens[j]);
        }
        return m;
    }

    bool at_block_end() const { return pos_ >= L_.size() || L_[pos_].tokens[0].text[0] == '['; }

    void block(Document& doc) {
        const Line& h = L_[pos_++];
        const Token& t0 = h.tokens[0];
        if (t0.text.front() != '[' || h.tokens.size() != 2 || h.tokens[1].text.back() != ']')
            fail(h, t0, "expected a block header '[<tag> <name>]'");
        std::string tag = t0.text.substr(1);
        std::string name = h.tokens[1].text.substr(0, h.tokens[1].text.size() - 1);
        if (std::find(tags().begin(), tags().end(), tag) == tags().end()) fail(h, t0, "unknown block tag '" + tag + "'");
        if (name.empty()) fail(h, h.tokens[1], "empty block name");
        if (doc.has(name)) fail(h, h.tokens[1], "duplicate block name '" + name + "'");
        try {
            if (tag == "chain") doc.add_chain(name, chain(h));
            else if (tag == "map") map(doc, h, name);
            else if (tag == "simplicial") doc.add_simplicial(name, simplicial(h));
            else if (tag == "cdga") doc.add_cdga(name, cdga(h));
            else if (tag == "bundle") doc.add_bundle(name, bundle(doc, h));
            else if (tag == "wittspec") doc.add_wittspec(name, wittspec(doc, h));
            else doc.add_record(tag, name, record());
        } catch (const MathError& e) {
            fail(h, t0, tag + " '" + name + "': " + e.what());
        }
    }

    ChainComplex chain(const Line& h) {
        int bottom = 0;
        std::vector<std::size_t> ranks;
        bool have_ranks = false;
        std::map<int, Matrix> d;
        while (!at_block_end()) {
            const Line& l = L_[pos_++];
            const std::string& k = l.tokens[0].text;
            if (k == "bottom") {
                need(l, 2);
                if (have_ranks) fail(l, l.tokens[0], "'bottom' must come before 'ranks'");
                bottom = static_cast<int>(parse_int(l, l.tokens[1]));
            } else if (k == "ranks") {
                for (std::size_t i = 1; i < l.tokens.size(); ++i) ranks.push_back(parse_count(l, l.tokens[i]));
                have_ranks = true;
            } else if (k == "d") {
                need(l, 2);
                if (!have_ranks) fail(l, l.tokens[0], "'ranks' must come before the differentials");
                int i = static_cast<int>(parse_int(l, l.tokens[1]));
                if (d.count(i)) fail(l, l.tokens[1], "differential d " + std::to_string(i) + " given twice");
                auto rk = [&](int j) -> std::size_t {
                    if (j < bottom || j >= bottom + static_cast<int>(ranks.size())) return 0;
                    return ranks[static_cast<std::size_t>(j - bottom)];
                };
                if (rk(i) == 0 && rk(i - 1) == 0) fail(l, l.tokens[1], "differential in degree " + std::to_string(i) + " is outside the complex");
                d[i] = matrix(rk(i - 1), rk(i), l, "differential in degree " + std::to_string(i));
            } else {
                fail(l, l.tokens[0], "unknown chain field '" + k + "'");
            }
        }
        if (!have_ranks) fail(h, h.tokens[0], "chain block needs a 'ranks' line");
        return ChainComplex(bottom, ranks, d);
    }

    void map(Document& doc, const Line& h, const std::string& name) {
        std::string s, t;
        std::map<int, Matrix> comps;
        while (!at_block_end()) {
            const Line& l = L_[pos_++];
            const std::string& k = l.tokens[0].text;
            if (k == "source" || k == "target") {
                need(l, 2);
                (k == "source" ? s : t) = ref(doc, l, l.tokens[1], "chain");
            } else if (k == "f") {
                need(l, 2);
                if (s.empty() || t.empty()) fail(l, l.tokens[0], "'source' and 'target' must come before the components");
                int i = static_cast<int>(parse_int(l, l.tokens[1]));
                if (comps.count(i)) fail(l, l.tokens[1], "component f " + std::to_string(i) + " given twice");
                comps[i] = matrix(doc.chains.at(t).rank(i), doc.chains.at(s).rank(i), l, "map component in degree " + std::to_string(i));
            } else {
                fail(l, l.tokens[0], "unknown map field '" + k + "'");
            }
        }
        if (s.empty() || t.empty()) fail(h, h.tokens[0], "map block needs 'source' and 'target'");
        doc.add_map(name, s, t, ChainMap(doc.chains.at(s), doc.chains.at(t), comps));
    }

    Simplex simplex(const Line& l, int vertices) const {
        Simplex s;
        for (std::size_t i = 1; i < l.tokens.size(); ++i) {
            long v = parse_int(l, l.tokens[i]);
            if (v < 0 || v >= vertices) fail(l, l.tokens[i], "vertex " + l.tokens[i].text + " out of range");
            s.push_back(static_cast<int>(v));
        }
        if (s.empty()) fail(l, l.tokens[0], "empty simplex");
        return s;
    }

    SimplicialEntry simplicial(const Line& h) {
        SimplicialEntry e;
        bool have_v = false;
        while (!at_block_end()) {
            const Line& l = L_[pos_++];
            const std::string& k = l.tokens[0].text;
            if (k == "vertices") {
                need(l, 2);
                e.vertices = static_cast<int>(parse_count(l, l.tokens[1]));
                have_v = true;
            } else if (k == "facet" || k == "sub-facet") {
                if (!have_v) fail(l, l.tokens[0], "'vertices' must come first");
                (k == "facet" ? e.facets : e.sub_facets).push_back(simplex(l, e.vertices));
                if (k == "sub-facet") e.is_pair = true;
            } else if (k == "sub") {
                need(l, 2);
                if (l.tokens[1].text != "empty") fail(l, l.tokens[1], "expected 'sub empty'");
                e.is_pair = true;
            } else if (k == "orientation") {
                e.orientation = row(l, 1);
            } else {
                fail(l, l.tokens[0], "unknown simplicial field '" + k + "'");
            }
        }
        if (!have_v) fail(h, h.tokens[0], "simplicial block needs a 'vertices' line");
        SimplicialPair p = e.pair();  // validates the subcomplex
        if (e.orientation) {
            int n = p.ambient.dim();
            if (e.orientation->size() != p.ambient.count(n))
                fail(h, h.tokens[0], "orientation has " + std::to_string(e.orientation->size()) + " entries, the complex has " +
                                         std::to_string(p.ambient.count(n)) + " top simplices");
        }
        return e;
    }

    // expr := [+-] term ([+-] term)*;  term := factor ('*' factor)*;  factor := rational | name ['^' int]
    Poly poly(const Line& l, std::size_t col, const std::vector<Generator>& g) const {
        const std::string& s = l.raw;
        std::size_t i = col;
        auto skip = [&] {
            while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
        };
        auto err = [&](const std::string& m) { throw ParseError(l.number, static_cast<int>(i) + 1, m); };
        Poly out;
        Monomial one(g.size(), 0);
        bool first = true;
        skip();
        if (i == s.size()) err("empty polynomial");
        while (true) {
            skip();
            if (i == s.size()) break;
            int sign = 1;
            if (s[i] == '+' || s[i] == '-') {
                sign = s[i] == '-' ? -1 : 1;
                ++i;
                skip();
            } else if (!first) {
                err("expected '+' or '-'");
            }
            first = false;
            Poly term{{one, Q(sign)}};
            while (true) {
                skip();
                if (i == s.size()) err("expected a factor");
                if (std::isdigit(static_cast<unsigned char>(s[i]))) {
                    std::size_t j = i;
                    while (j < s.size() && (std::isdigit(static_cast<unsigned char>(s[j])) || s[j] == '/')) ++j;
                    Token t{s.substr(i, j - i), static_cast<int>(i) + 1};
                    Q c = parse_rational(l, t);
                    for (auto& [m, v] : term) v *= c;
                    i = j;
                } else if (std::isalpha(static_cast<unsigned char>(s[i])) || s[i] == '_') {
                    std::size_t j = i;
                    while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_' || s[j] == '\'')) ++j;
                    std::string name = s.substr(i, j - i);
                    std::size_t gi = 0;
                    while (gi < g.size() && g[gi].name != name) ++gi;
                    if (gi == g.size()) err("unknown generator '" + name + "'");
                    i = j;
                    long e = 1;
                    if (i < s.size() && s[i] == '^') {
                        ++i;
                        std::size_t k = i;
                        while (k < s.size() && std::isdigit(static_cast<unsigned char>(s[k]))) ++k;
                        if (k == i) err("expected an exponent");
                        e = std::stol(s.substr(i, k - i));
                        i = k;
                    }
                    for (long r = 0; r < e; ++r) term = poly_mul(term, generator_poly(gi, g.size()), g);
                } else {
                    err(std::string("unexpected character '") + s[i] + "'");
                }
                skip();
                if (i < s.size() && s[i] == '*') {
                    ++i;
                    continue;
                }
                break;
            }
            for (const auto& [m, c] : term) add_term(out, m, c);
        }
        return out;
    }

    CdgaEntry cdga(const Line& h) {
        CdgaEntry e;
        std::vector<std::pair<const Line*, std::size_t>> dlines;  // parsed after all generators are known
        while (!at_block_end()) {
            const Line& l = L_[pos_++];
            const std::string& k = l.tokens[0].text;
            if (k == "generator") {
                if (l.tokens.size() != 3 && l.tokens.size() != 5) fail(l, l.tokens[0], "expected 'generator <name> <degree> [bound <b>]'");
                Generator g{l.tokens[1].text, static_cast<int>(parse_int(l, l.tokens[2]))};
                for (const auto& o : e.gens)
                    if (o.name == g.name) fail(l, l.tokens[1], "generator '" + g.name + "' declared twice");
                int b = 0;
                if (l.tokens.size() == 5) {
                    if (l.tokens[3].text != "bound") fail(l, l.tokens[3], "expected 'bound'");
                    b = static_cast<int>(parse_count(l, l.tokens[4]));
                }
                e.gens.push_back(g);
                e.bound.push_back(b);
            } else if (k == "d") {
                if (l.tokens.size() < 4 || l.tokens[2].text != "=") fail(l, l.tokens[0], "expected 'd <generator> = <polynomial>'");
                dlines.emplace_back(&l, static_cast<std::size_t>(l.tokens[3].column - 1));
            } else if (k == "free") {
                need(l, 2);
                e.free_cap = static_cast<int>(parse_count(l, l.tokens[1]));
            } else {
                fail(l, l.tokens[0], "unknown cdga field '" + k + "'");
            }
        }
        if (e.gens.empty()) fail(h, h.tokens[0], "cdga block needs at least one generator");
        e.d.assign(e.gens.size(), Poly{});
        std::vector<bool> seen(e.gens.size(), false);
        for (auto [l, col] : dlines) {
            std::size_t gi = 0;
            while (gi < e.gens.size() && e.gens[gi].name != l->tokens[1].text) ++gi;
            if (gi == e.gens.size()) fail(*l, l->tokens[1], "unknown generator '" + l->tokens[1].text + "'");
            if (seen[gi]) fail(*l, l->tokens[1], "d" + l->tokens[1].text + " given twice");
            seen[gi] = true;
            e.d[gi] = poly(*l, col, e.gens);
        }
        if (e.free_cap) {
            for (std::size_t i = 0; i < e.gens.size(); ++i)
                if (e.bound[i]) fail(h, h.tokens[0], "free algebras take no exponent bounds");
            (void)e.free_algebra();
        } else {
            (void)e.cdga();
        }
        return e;
    }

    CohomologyRing& ring_of(BundleEntry& b, const Line& l) const {
        if (!b.ring) fail(l, l.tokens[0], "'ring-dims' must come before the ring products");
        return *b.ring;
    }

    BundleEntry bundle(const Document& doc, const Line& h) {
        BundleEntry b;
        while (!at_block_end()) {
            const Line& l = L_[pos_++];
            const std::string& k = l.tokens[0].text;
            if (k == "fiber") {
                need(l, 2);
                b.fiber = ref(doc, l, l.tokens[1], "chain");
            } else if (k == "dim") {
                need(l, 2);
                b.dim = static_cast<int>(parse_int(l, l.tokens[1]));
            } else if (k == "monodromy") {
                need(l, 2);
                b.monodromy = ref(doc, l, l.tokens[1], "map");
            } else if (k == "order") {
                need(l, 2);
                b.order = static_cast<int>(parse_int(l, l.tokens[1]));
            } else if (k == "orientation") {
                need(l, 2);
                long o = parse_int(l, l.tokens[1]);
                if (o != 1 && o != -1) fail(l, l.tokens[1], "orientation must be 1 or -1");
                b.orientation = static_cast<int>(o);
            } else if (k == "fiber-class") {
                b.fiber_class = row(l, 1);
            } else if (k == "simply-connected") {
                need(l, 2);
                if (l.tokens[1].text != "yes" && l.tokens[1].text != "no") fail(l, l.tokens[1], "expected yes or no");
                b.simply_connected = l.tokens[1].text == "yes";
            } else if (k == "cone-model") {
                need(l, 2);
                b.cone_model = ref(doc, l, l.tokens[1], "simplicial");
            } else if (k == "ring-dims") {
                b.ring = CohomologyRing{};
                for (std::size_t i = 1; i < l.tokens.size(); ++i) b.ring->dims.push_back(parse_count(l, l.tokens[i]));
                b.ring->trusted = true;
            } else if (k == "ring-product") {
                need(l, 3);
                CohomologyRing& R = ring_of(b, l);
                int p = static_cast<int>(parse_int(l, l.tokens[1])), q = static_cast<int>(parse_int(l, l.tokens[2]));
                if (p < 0 || q < 0 || p + q > R.top()) fail(l, l.tokens[1], "product degrees out of range");
                R.mult[{p, q}] = matrix(R.dim(p + q), R.dim(p) * R.dim(q), l, "ring product (" + std::to_string(p) + "," + std::to_string(q) + ")");
            } else {
                fail(l, l.tokens[0], "unknown bundle field '" + k + "'");
            }
        }
        if (b.fiber.empty()) fail(h, h.tokens[0], "bundle block needs a 'fiber'");
        if (!b.monodromy.empty()) {
            const MapEntry& m = doc.maps.at(b.monodromy);
            if (m.source != b.fiber || m.target != b.fiber) fail(h, h.tokens[0], "monodromy must be a self-map of the fiber");
        }
        return b;
    }

    WittEntry wittspec(const Document& doc, const Line& h) {
        WittEntry w;
        while (!at_block_end()) {
            const Line& l = L_[pos_++];
            const std::string& k = l.tokens[0].text;
            auto table = [&] {
                std::vector<int> v;
                for (std::size_t i = 1; i < l.tokens.size(); ++i) v.push_back(static_cast<int>(parse_int(l, l.tokens[i])));
                return v;
            };
            if (k == "n") {
                need(l, 2);
                w.n = static_cast<int>(parse_int(l, l.tokens[1]));
            } else if (k == "regular") {
                need(l, 2);
                w.M = ref(doc, l, l.tokens[1], "chain");
            } else if (k == "boundary") {
                need(l, 2);
                w.boundary = ref(doc, l, l.tokens[1], "map");
            } else if (k == "stratum") {
                need(l, 2);
                w.strata.push_back(ref(doc, l, l.tokens[1], "bundle"));
            } else if (k == "perversity-p") {
                w.p = table();
            } else if (k == "perversity-q") {
                w.q = table();
            } else {
                fail(l, l.tokens[0], "unknown wittspec field '" + k + "'");
            }
        }
        if (w.M.empty() || w.boundary.empty()) fail(h, h.tokens[0], "wittspec needs 'regular' and 'boundary'");
        if (w.p.has_value() != w.q.has_value()) fail(h, h.tokens[0], "give both perversity tables or neither");
        if (doc.maps.at(w.boundary).target != w.M) fail(h, h.tokens[0], "boundary map must land in the regular part");
        return w;
    }

    Record record() {
        Record r;
        while (!at_block_end()) {
            const Line& l = L_[pos_++];
            if (l.tokens[0].text == "matrix") {
                need(l, 4);
                std::size_t rows = parse_count(l, l.tokens[2]), cols = parse_count(l, l.tokens[3]);
                r.add_matrix(l.tokens[1].text, matrix(rows, cols, l, "matrix " + l.tokens[1].text));
            } else {
                std::vector<std::string> v;
                for (std::size_t i = 1; i < l.tokens.size(); ++i) v.push_back(l.tokens[i].text);
                r.add(l.tokens[0].text, v);
            }
        }
        return r;
    }
};

}  // namespace detail

inline Document parse(const std::string& text) {
    auto lines = lex(text);
    return detail::Parser(lines).run();
}

// ---------------------------------------------------------------------------
// Emitter

inline void emit_chain(std::ostream& os, const ChainComplex& c) {
    os << "bottom " << c.bottom() << "\nranks";
    for (int i = c.bottom(); i <= c.top(); ++i) os << " " << c.rank(i);
    os << "\n";
    for (int i = c.bottom() + 1; i <= c.top(); ++i) {
        Matrix d = c.d(i);
        if (d.rows() == 0 || d.cols() == 0 || d.is_zero()) continue;
        os << "d " << i << "\n";
        emit_rows(os, d);
    }
}

inline void emit_record(std::ostream& os, const Record& r) {
    for (const auto& f : r.fields) {
        if (f.matrix) {
            os << "matrix " << f.key << " " << f.matrix->rows() << " " << f.matrix->cols() << "\n";
            emit_rows(os, *f.matrix);
            continue;
        }
        os << f.key;
        for (const auto& v : f.values) os << " " << v;
        os << "\n";
    }
}

inline std::string emit(const Document& doc) {
    std::ostringstream os;
    os << "kind " << doc.kind << " " << doc.primary << "\n";
    for (const auto& [tag, name] : doc.order) {
        os << "\n[" << tag << " " << name << "]\n";
        if (tag == "chain") {
            emit_chain(os, doc.chains.at(name));
        } else if (tag == "map") {
            const MapEntry& m = doc.maps.at(name);
            os << "source " << m.source << "\ntarget " << m.target << "\n";
            const ChainComplex& s = m.map.source();
            for (int i = s.bottom(); i <= s.top(); ++i) {
                Matrix f = m.map.at(i);
                if (f.rows() == 0 || f.cols() == 0 || f.is_zero()) continue;
                os << "f " << i << "\n";
                emit_rows(os, f);
            }
        } else if (tag == "simplicial") {
            const SimplicialEntry& e = doc.simplicial.at(name);
            os << "vertices " << e.vertices << "\n";
            auto simp = [&](const char* k, const Simplex& s) {
                os << k;
                for (int v : s) os << " " << v;
                os << "\n";
            };
            for (const auto& f : e.facets) simp("facet", f);
            if (e.is_pair && e.sub_facets.empty()) os << "sub empty\n";
            for (const auto& f : e.sub_facets) simp("sub-facet", f);
            if (e.orientation) os << "orientation " << emit_vec(*e.orientation) << "\n";
        } else if (tag == "cdga") {
            const CdgaEntry& e = doc.cdgas.at(name);
            if (e.free_cap) os << "free " << *e.free_cap << "\n";
            for (std::size_t i = 0; i < e.gens.size(); ++i) {
                os << "generator " << e.gens[i].name << " " << e.gens[i].degree;
                if (e.bound[i]) os << " bound " << e.bound[i];
                os << "\n";
            }
            for (std::size_t i = 0; i < e.gens.size(); ++i)
                if (!e.d[i].empty()) os << "d " << e.gens[i].name << " = " << poly_str(e.d[i], e.gens) << "\n";
        } else if (tag == "bundle") {
            const BundleEntry& b = doc.bundles.at(name);
            os << "fiber " << b.fiber << "\ndim " << b.dim << "\n";
            if (!b.monodromy.empty()) os << "monodromy " << b.monodromy << "\n";
            os << "order " << b.order << "\norientation " << b.orientation << "\n";
            if (!b.fiber_class.empty()) os << "fiber-class " << emit_vec(b.fiber_class) << "\n";
            os << "simply-connected " << (b.simply_connected ? "yes" : "no") << "\n";
            if (!b.cone_model.empty()) os << "cone-model " << b.cone_model << "\n";
            if (b.ring) {
                os << "ring-dims";
                for (auto d : b.ring->dims) os << " " << d;
                os << "\n";
                for (const auto& [pq, m] : b.ring->mult) {
                    if (pq.first == 0 || pq.second == 0 || m.rows() == 0 || m.cols() == 0 || m.is_zero()) continue;
                    os << "ring-product " << pq.first << " " << pq.second << "\n";
                    emit_rows(os, m);
                }
            }
        } else if (tag == "wittspec") {
            const WittEntry& w = doc.wittspecs.at(name);
            os << "n " << w.n << "\nregular " << w.M << "\nboundary " << w.boundary << "\n";
            for (const auto& s : w.strata) os << "stratum " << s << "\n";
            auto table = [&](const char* k, const std::vector<int>& v) {
                os << k;
                for (int x : v) os << " " << x;
                os << "\n";
            };
            if (w.p) {
                table("perversity-p", *w.p);
                table("perversity-q", *w.q);
            }
        } else {
            emit_record(os, doc.records.at(name));
        }
    }
    return os.str();
}

// ---------------------------------------------------------------------------
// Builders from library objects

inline SimplicialEntry simplicial_entry(const SimplicialComplex& K) {
    return {K.vertex_count(), K.facets(), false, {}, std::nullopt};
}

inline SimplicialEntry simplicial_entry(const SimplicialPair& p) {
    SimplicialEntry e = simplicial_entry(p.ambient);
    e.is_pair = true;
    if (p.sub.dim() >= 0) e.sub_facets = p.sub.facets();
    return e;
}

inline CdgaEntry cdga_entry(const FreeCGA& M) {
    return {M.generators(), M.differentials(), std::vector<int>(M.generators().size(), 0), M.cap()};
}

// Fiber chain, monodromy and bundle blocks named <prefix>L, <prefix>lambda, <prefix>.
inline void add_bundle(Document& doc, const std::string& prefix, const LinkBundleData& d) {
    BundleEntry b;
    b.fiber = prefix + "L";
    doc.add_chain(b.fiber, d.fiber);
    if (d.monodromy) {
        b.monodromy = prefix + "lambda";
        doc.add_map(b.monodromy, b.fiber, b.fiber, *d.monodromy);
    }
    if (d.cone_model) {
        b.cone_model = prefix + "cone";
        doc.add_simplicial(b.cone_model, simplicial_entry(*d.cone_model));
    }
    b.dim = d.fiber_dim;
    b.order = d.order;
    b.orientation = d.orientation;
    b.fiber_class = d.fiber_class;
    b.simply_connected = d.simply_connected_asserted;
    b.ring = d.cone_ring;
    doc.add_bundle(prefix.empty() ? "E" : prefix, b);
}

inline Document bundle_document(const LinkBundleData& d) {
    Document doc;
    doc.kind = "bundle";
    doc.primary = "E";
    add_bundle(doc, "", d);
    return doc;
}

inline Document wittspec_document(const WittSpaceSpec& s) {
    Document doc;
    doc.kind = "wittspec";
    doc.primary = "X";
    WittEntry w;
    w.n = s.n;
    for (std::size_t i = 0; i < s.strata.size(); ++i) {
        std::string p = "S" + std::to_string(i + 1);
        add_bundle(doc, p, s.strata[i]);
        w.strata.push_back(p);
    }
    doc.add_chain("M", s.M);
    doc.add_chain("dM", s.boundary.source());
    doc.add_map("incl", "dM", "M", s.boundary);
    w.M = "M";
    w.boundary = "incl";
    const PerversityPair& pp = s.perversities;
    if (pp.p.kind == Perversity::Kind::table) {
        w.p = pp.p.values;
        w.q = pp.q.values;
    }
    doc.add_wittspec("X", w);
    return doc;
}

// Human-readable rendering of a record; matrices are printed as aligned rows.
inline std::string render(const std::string& title, const Record& r) {
    std::ostringstream os;
    os << title << "\n";
    std::size_t w = 0;
    for (const auto& f : r.fields) w = std::max(w, f.key.size());
    for (const auto& f : r.fields) {
        os << "  " << std::left << std::setw(static_cast<int>(w)) << f.key << " : ";
        if (!f.matrix) {
            for (std::size_t i = 0; i < f.values.size(); ++i) os << (i ? " " : "") << f.values[i];
            os << "\n";
            continue;
        }
        const Matrix& m = *f.matrix;
        os << m.rows() << "x" << m.cols() << (m.rows() && m.cols() ? "" : " (empty)") << "\n";
        if (m.cols() == 0) continue;
        std::size_t cw = 1;
        for (std::size_t i = 0; i < m.rows(); ++i)
            for (std::size_t j = 0; j < m.cols(); ++j) cw = std::max(cw, emit_q(m(i, j)).size());
        for (std::size_t i = 0; i < m.rows(); ++i) {
            os << "    [";
            for (std::size_t j = 0; j < m.cols(); ++j) os << (j ? " " : "") << std::right << std::setw(static_cast<int>(cw)) << emit_q(m(i, j));
            os << "]\n";
        }
    }
    return os.str();
}

}  // namespace wd::format

#endif
