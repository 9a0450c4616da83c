// Command-line front end. Exit codes: 0 verified, 1 refuted (a witness is
// printed), 2 input error. With --check-witness a previously printed witness
// is re-verified against the same input: 0 confirmed, 1 rejected.

#include "wd/fixtures.hpp"
#include "wd/format.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

using namespace wd;
namespace fmt = wd::format;
namespace fx = wd::fixtures;

namespace {

struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Options {
    std::string file;
    std::optional<int> degree, n, cap;
    std::string perversity = "middle";
    std::string witness;
    bool check_witness = false;
    std::string format = "text";
    // gen-example
    std::string what;
    int u = 3;
    std::string link = "s3", monodromy = "id", fixture;
};

struct Outcome {
    std::string title;
    fmt::Record report;
    std::optional<fmt::Record> witness;
    fmt::Document extra;  // output blocks (complexes, models)
    int code = 0;
};

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot read '" + path + "'");
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

fmt::Document load(const std::string& path) {
    try {
        return fmt::parse(slurp(path));
    } catch (const fmt::ParseError& e) {
        throw InputError(path + ": " + e.what());
    }
}

void expect_kind(const fmt::Document& d, std::initializer_list<const char*> kinds) {
    std::string all;
    for (const char* k : kinds) {
        if (d.kind == k) return;
        all += (all.empty() ? "" : " or ") + std::string(k);
    }
    throw InputError("expected a " + all + " document, got '" + d.kind + "'");
}

PerversityPair perversities(const Options& o) {
    if (o.perversity == "middle") return middle_perversities();
    if (o.perversity.rfind("table:", 0) != 0) throw InputError("--perversity takes 'middle' or 'table:FILE'");
    std::optional<std::vector<int>> p, q;
    for (const auto& l : fmt::lex(slurp(o.perversity.substr(6)))) {
        std::vector<int> v;
        for (std::size_t i = 1; i < l.tokens.size(); ++i) v.push_back(static_cast<int>(fmt::parse_int(l, l.tokens[i])));
        if (l.tokens[0].text == "p") p = v;
        else if (l.tokens[0].text == "q") q = v;
        else throw fmt::ParseError(l.number, l.tokens[0].column, "expected 'p' or 'q'");
    }
    if (!p || !q) throw InputError("perversity file needs a 'p' line and a 'q' line");
    return {Perversity::table(*p), Perversity::table(*q)};
}

int need(const std::optional<int>& v, const char* flag) {
    if (!v) throw InputError(std::string("missing required flag ") + flag);
    return *v;
}

std::vector<std::string> words(const std::vector<std::size_t>& v) {
    std::vector<std::string> s;
    for (auto x : v) s.push_back(std::to_string(x));
    return s;
}

fmt::Record witness_for(const std::string& command) {
    fmt::Record w;
    w.add("command", command);
    return w;
}

// ---------------------------------------------------------------------------
// Shared input handling

ChainComplex chain_input(const fmt::Document& d) {
    if (d.kind == "chain") return d.chains.at(d.primary);
    if (d.kind == "simplicial") return chain_complex(d.simplicial.at(d.primary).complex());
    throw InputError("expected a chain or simplicial document, got '" + d.kind + "'");
}

struct PdInput {
    SimplicialPair pair;
    int n = 0;
    Vec a;
};

PdInput pd_input(const fmt::Document& d, const Options& o) {
    expect_kind(d, {"simplicial"});
    const fmt::SimplicialEntry& e = d.simplicial.at(d.primary);
    PdInput in;
    in.pair = e.pair();
    in.n = o.n.value_or(in.pair.ambient.dim());
    if (e.orientation) in.a = *e.orientation;
    else in.a = fundamental_cycle(in.pair.ambient, e.sub_facets.empty() ? nullptr : &in.pair);
    return in;
}

FreeCGA free_input(const fmt::Document& d, const Options& o, fmt::Record& r) {
    expect_kind(d, {"cdga"});
    const fmt::CdgaEntry& e = d.cdgas.at(d.primary);
    if (e.free_cap) {
        FreeCGA M = e.free_algebra();
        if (o.cap) M = M.with_cap(*o.cap);
        r.add("algebra", "free, as given");
        return M;
    }
    int cap = o.cap.value_or(12);
    MinimalModel mm = minimal_model(e.cdga(), cap);
    r.add("algebra", "minimal model of the input, cap " + std::to_string(cap));
    return mm.model;
}

// ---------------------------------------------------------------------------
// Commands

Outcome homology_cmd(const Options& o, bool co) {
    fmt::Document d = load(o.file);
    ChainComplex C = chain_input(d);
    Outcome out;
    out.title = co ? "cohomology" : "homology";
    int lo = o.degree.value_or(C.bottom()), hi = o.degree.value_or(C.top());
    std::vector<std::size_t> b;
    for (int i = lo; i <= hi; ++i) b.push_back(betti(C, i));
    out.report.add("degrees", std::to_string(lo) + ".." + std::to_string(hi)).add("betti", words(b));
    for (int i = lo; i <= hi; ++i) {
        HomologyBasis h = co ? cohomology(C, i) : homology(C, i);
        out.report.add_matrix((co ? "H^" : "H_") + std::to_string(i) + "-representatives", h.reps);
    }
    return out;
}

Outcome cone_cmd(const Options& o) {
    fmt::Document d = load(o.file);
    expect_kind(d, {"map"});
    ConeResult c = mapping_cone(d.maps.at(d.primary).map);
    Outcome out;
    out.title = "mapping cone";
    out.report.add("betti", words(betti_numbers(c.cone, c.cone.bottom(), c.cone.top())));
    out.report.add("long-exact-sequence", les_exact(c.pair));
    out.extra.add_chain("cone", c.cone);
    return out;
}

Outcome torus_cmd(const Options& o) {
    fmt::Document d = load(o.file);
    expect_kind(d, {"map", "bundle"});
    ChainMap phi = d.kind == "map" ? d.maps.at(d.primary).map : *d.bundle(d.primary).monodromy;
    TorusResult t = algebraic_mapping_torus(phi);
    Outcome out;
    out.title = "algebraic mapping torus";
    out.report.add("betti", words(betti_numbers(t.torus, t.torus.bottom(), t.torus.top())));
    out.report.add("wang-sequence-exact", les_exact(t.wang));
    out.extra.add_chain("torus", t.torus);
    return out;
}

Outcome truncate_cmd(const Options& o) {
    fmt::Document d = load(o.file);
    expect_kind(d, {"bundle"});
    LinkBundleData b = d.bundle(d.primary);
    int r = o.degree ? *o.degree : cutoff_degrees(b.fiber_dim, perversities(o)).lo();
    TruncationResult t = equivariant_moore_truncation(b.fiber, *b.monodromy, b.order, r);
    Outcome out;
    out.title = "equivariant Moore truncation";
    out.report.add("degree", r);
    out.report.add("fiber-betti", words(betti_numbers(b.fiber, 0, b.fiber_dim)));
    out.report.add("truncated-betti", words(betti_numbers(t.truncated, 0, b.fiber_dim)));
    bool commutes = true;
    for (int i = 0; i <= b.fiber_dim; ++i) {
        commutes = commutes && t.inclusion.at(i) * t.monodromy.at(i) == b.monodromy->at(i) * t.inclusion.at(i);
        out.report.add_matrix("monodromy-" + std::to_string(i), t.monodromy.at(i));
    }
    out.report.add("commutes-with-monodromy", commutes);
    out.extra.add_chain("truncated", t.truncated);
    out.extra.add_chain("fiber", b.fiber);
    out.extra.add_map("inclusion", "truncated", "fiber", t.inclusion);
    return out;
}

void report_obstructions(fmt::Record& r, const ObstructionReport& ob) {
    r.add("source", source_name(ob.source)).add("trusted", ob.trusted).add("refused", ob.refused);
    if (ob.refused) r.add("reason", ob.reason);
    for (const auto& g : ob.degrees) {
        std::string k = "O_" + std::to_string(g.i);
        r.add(k, std::vector<std::string>{"dim", std::to_string(g.span.cols()), "factors", std::to_string(g.left),
                                          std::to_string(g.right), g.by_ranks ? "by-ranks" : "by-products"});
    }
    r.add("all-vanish", ob.all_vanish());
}

// A pair of complementary classes with nonzero product, found directly.
std::optional<fmt::Record> simplicial_obstruction_witness(const SimplicialComplex& K, int n) {
    ChainComplex C = chain_complex(K);
    HomologyBasis top = cohomology(C, n - 1);
    for (int i = 1; i <= n - 2; ++i) {
        HomologyBasis a = cohomology(C, i), b = cohomology(C, n - 1 - i);
        for (std::size_t x = 0; x < a.dim(); ++x)
            for (std::size_t y = 0; y < b.dim(); ++y) {
                Vec p = cup(K, {i, a.reps.column(x)}, {n - 1 - i, b.reps.column(y)}).values;
                if (is_zero(top.class_of(p))) continue;
                fmt::Record w = witness_for("obstructions");
                w.add("source", "simplicial").add("n", n).add("degree", i);
                w.add("alpha", a.reps.column(x)).add("beta", b.reps.column(y));
                return w;
            }
    }
    return std::nullopt;
}

std::optional<fmt::Record> ring_obstruction_witness(const CohomologyRing& R, int n) {
    for (int i = 1; i <= n - 2; ++i)
        for (std::size_t x = 0; x < R.dim(i); ++x)
            for (std::size_t y = 0; y < R.dim(n - 1 - i); ++y) {
                Vec p = R.product(i, unit_vec(R.dim(i), x), n - 1 - i, unit_vec(R.dim(n - 1 - i), y));
                if (is_zero(p)) continue;
                fmt::Record w = witness_for("obstructions");
                w.add("source", "ring-table").add("n", n).add("degree", i);
                w.add("alpha", unit_vec(R.dim(i), x)).add("beta", unit_vec(R.dim(n - 1 - i), y)).add("product", p);
                return w;
            }
    return std::nullopt;
}

Outcome obstructions_cmd(const Options& o) {
    fmt::Document d = load(o.file);
    expect_kind(d, {"bundle", "simplicial"});
    Outcome out;
    out.title = "local duality obstructions";
    ObstructionReport ob;
    std::optional<SimplicialComplex> model;
    std::optional<CohomologyRing> ring;
    if (d.kind == "simplicial") {
        model = d.simplicial.at(d.primary).complex();
        int n = need(o.n, "--n");
        ob = local_duality_obstructions(*model, n);
        out.report.add("n", n);
    } else {
        LinkBundleData data = d.bundle(d.primary);
        FlatBundle B = build_flat_bundle(data, perversities(o));
        if (o.n && *o.n != B.n) throw InputError("--n " + std::to_string(*o.n) + " does not match the bundle, which has n = " + std::to_string(B.n));
        ob = local_duality_obstructions(data, B);
        out.report.add("n", B.n).add("cut-off", std::vector<std::string>{std::to_string(B.cut.k), std::to_string(B.cut.l)});
        out.report.add("cone-reduced-betti", words(B.cone_reduced_betti));
        model = data.cone_model;
        ring = data.cone_ring;
    }
    report_obstructions(out.report, ob);
    if (ob.refused) {
        out.code = 2;
        return out;
    }
    if (!ob.all_vanish()) {
        out.witness = ob.source == ProductSource::simplicial ? simplicial_obstruction_witness(*model, ob.n) : ring_obstruction_witness(*ring, ob.n);
        if (!out.witness) throw MathError("internal: nonzero obstruction without a product witness");
        out.code = 1;
    }
    return out;
}

Outcome minimal_model_cmd(const Options& o) {
    fmt::Document d = load(o.file);
    expect_kind(d, {"cdga"});
    const fmt::CdgaEntry& e = d.cdgas.at(d.primary);
    Outcome out;
    out.title = "minimal Sullivan model";
    int cap = o.cap.value_or(e.free_cap.value_or(12));
    auto ranks = [&](const FreeCGA& M) {
        std::vector<std::size_t> h, v;
        for (int p = 1; p <= cap; ++p) {
            h.push_back(M.cohomology(p).dim());
            v.push_back(M.generator_count(p));
        }
        out.report.add("degrees", "1.." + std::to_string(cap)).add("generators", words(v)).add("cohomology-ranks", words(h));
    };
    if (e.free_cap) {
        FreeCGA M = e.free_algebra().with_cap(cap);
        out.report.add("input", "free algebra");
        ranks(M);
        out.report.add("minimal", M.is_minimal()).add("sullivan", M.is_sullivan());
        if (!M.is_minimal()) {
            out.code = 1;
            out.witness = witness_for("minimal-model");
            for (std::size_t i = 0; i < M.generators().size(); ++i)
                for (const auto& [m, c] : M.differentials()[i])
                    if (wordlength(m) == 1 && !out.witness->find("generator")) out.witness->add("generator", M.generators()[i].name);
        }
        return out;
    }
    MinimalModel mm = minimal_model(e.cdga(), cap);
    const ModelCertificate& c = mm.certificate;
    out.report.add("input", "finite CDGA").add("cap", cap);
    ranks(mm.model);
    for (const auto& s : c.stages)
        out.report.add("stage-" + std::to_string(s.degree), std::vector<std::string>{"closed", std::to_string(s.closed), "killing", std::to_string(s.killing)});
    out.report.add("model-betti", words(c.model_betti)).add("target-betti", words(c.target_betti)).add("map-rank", words(c.map_rank));
    out.report.add("iso-through-cap", c.iso_through_cap).add("injective-above", c.injective_above);
    out.report.add("minimal", c.minimal).add("sullivan", c.sullivan).add("certificate", c.ok());
    out.extra.add_cdga("model", fmt::cdga_entry(mm.model));
    if (!c.ok()) {
        out.code = 1;
        out.witness = witness_for("minimal-model");
        out.witness->add("cap", cap);
        for (std::size_t p = 0; p < c.map_rank.size(); ++p)
            if (c.map_rank[p] != c.model_betti[p] || c.map_rank[p] != c.target_betti[p]) {
                out.witness->add("degree", p);
                break;
            }
    }
    return out;
}

Outcome zeta_cmd(const Options& o) {
    fmt::Document d = load(o.file);
    Outcome out;
    out.title = "zeta homomorphism";
    FreeCGA M = free_input(d, o, out.report);
    int t = need(o.degree, "--degree");
    ZetaResult z = zeta(M, t);
    out.report.add("degree", t).add("cohomology-dim", z.h_dim).add("generator-dim", z.v_dim);
    out.report.add("kernel-dim", z.kernel.dim()).add("injective", z.injective()).add_matrix("zeta", z.matrix);
    if (!z.injective()) {
        Vec cls = z.kernel.vector(0);
        HomologyBasis h = M.cohomology(t);
        out.code = 1;
        out.witness = witness_for("zeta");
        out.witness->add("degree", t).add("cap", M.cap()).add("class", cls).add("cocycle", h.reps * cls);
    }
    return out;
}

Outcome verify_pd_cmd(const Options& o) {
    fmt::Document d = load(o.file);
    PdInput in = pd_input(d, o);
    PdReport rep = verify_pd_pair(in.pair, in.n, in.a);
    Outcome out;
    out.title = "Poincare duality pair";
    out.report.add("n", in.n).add("duality", rep.duality).add("boundary-checked", rep.boundary_checked).add("boundary-duality", rep.boundary_ok);
    for (const auto& g : rep.degrees) {
        out.report.add("r=" + std::to_string(g.r), std::vector<std::string>{"H^r", std::to_string(g.cohomology_dim), "H_n-r", std::to_string(g.homology_dim),
                                                                           "rank", std::to_string(g.rank), g.iso ? "iso" : "not-iso"});
        out.report.add_matrix("cap-" + std::to_string(g.r), g.matrix);
    }
    if (!rep.passed()) {
        out.code = 1;
        out.witness = witness_for("verify-pd");
        bool boundary = rep.duality;
        const auto& degs = boundary ? rep.boundary_degrees : rep.degrees;
        for (const auto& g : degs) {
            if (g.iso) continue;
            out.witness->add("part", boundary ? "boundary" : "pair").add("degree", g.r);
            Subspace k = kernel_basis(g.matrix);
            if (g.cohomology_dim != g.homology_dim) out.witness->add("dims", std::vector<std::string>{std::to_string(g.cohomology_dim), std::to_string(g.homology_dim)});
            else if (k.dim() > 0) out.witness->add("kernel", k.vector(0));
            else out.witness->add("cokernel", "yes");
            break;
        }
    }
    return out;
}

fmt::Record criterion_record(const DualityReport& r) {
    fmt::Record s;
    s.add("n", r.n).add("k-l", std::vector<std::string>{std::to_string(r.cut.k), std::to_string(r.cut.l)});
    for (const auto& c : r.checks) s.add(c.name + "@" + std::to_string(c.degree), c.ok ? std::string("ok") : "fails " + c.detail);
    s.add("hypotheses", r.hypotheses).add("statement-ii", r.statement_ii).add("statement-ii-pair", r.statement_ii_pair);
    s.add("statement-i", r.statement_i).add("remark-betti", r.remark_betti).add("remark-relative", r.remark_relative);
    s.add("obstructions-vanish", r.obstructions.all_vanish()).add("inconsistency", r.inconsistency).add("completion-refused", r.completion_refused);
    s.add("witness", r.witness).add("E-class", r.e_class);
    for (const auto& [k, m] : r.matrices) s.add_matrix(k, m);
    for (const auto& note : r.notes) s.add("note", note);
    return s;
}

Outcome assemble_cmd(const Options& o) {
    fmt::Document d = load(o.file);
    expect_kind(d, {"wittspec"});
    WittSpaceSpec spec = d.wittspec(d.primary);
    IntersectionSpace ix = assemble_intersection_space(spec);
    Outcome out;
    out.title = "intersection space";
    out.report.add("n", spec.n).add("strata", spec.strata.size());
    out.report.add("betti", words(betti_numbers(ix.complex, 0, spec.n)));
    out.report.add("mayer-vietoris-exact", ix.mv_exact).add("boundary-bounds", ix.boundary_bounds);
    for (std::size_t i = 0; i < ix.bundles.size(); ++i)
        out.report.add("stratum-" + std::to_string(i + 1) + "-cone-reduced-betti", words(ix.bundles[i].cone_reduced_betti));
    out.extra.add_chain("IX", ix.complex);
    return out;
}

std::vector<Vec> stratum_witnesses(const Options& o, const IntersectionSpace& ix) {
    std::vector<Vec> ws;
    std::optional<fmt::Record> given;
    if (!o.witness.empty()) {
        fmt::Document w = load(o.witness);
        for (const auto& [tag, name] : w.order)
            if (tag == "witness") given = w.records.at(name);
        if (!given) throw InputError(o.witness + ": no witness block");
    }
    for (std::size_t i = 0; i < ix.bundles.size(); ++i) {
        std::string k = "stratum-" + std::to_string(i + 1);
        if (given && given->find(k)) ws.push_back(given->vec(k));
        else ws.push_back(canonical_witness(ix.bundles[i]));
    }
    return ws;
}

Outcome complete_cmd(const Options& o) {
    fmt::Document d = load(o.file);
    expect_kind(d, {"wittspec"});
    WittSpaceSpec spec = d.wittspec(d.primary);
    IntersectionSpace ix = assemble_intersection_space(spec);
    std::vector<Vec> ws = stratum_witnesses(o, ix);
    Completion c = klimczak_completion(spec, ix, ws);
    Outcome out;
    out.title = "one-cell completion";
    out.report.add("n", spec.n).add("betti-IX", words(c.betti_ix)).add("betti-completed", words(c.betti_hat));
    out.report.add("strata-ok", c.strata_ok).add("betti-agree", c.betti_agree).add("top-class", c.top_ok).add("duality-ranks", c.duality_ranks);
    for (const auto& k : c.checks) out.report.add(k.name + "@" + std::to_string(k.degree), k.ok ? std::string("ok") : "fails " + k.detail);
    out.report.add("note", stasheff_note());
    for (std::size_t i = 0; i < c.strata.size(); ++i) {
        fmt::Record s = criterion_record(c.strata[i]);
        out.extra.add_record("report", "stratum-" + std::to_string(i + 1), s);
    }
    out.extra.add_chain("completed", c.complex);
    if (!c.passed()) {
        out.code = 1;
        out.witness = witness_for("complete");
        for (std::size_t i = 0; i < c.strata.size(); ++i)
            if (!c.strata[i].passed()) {
                out.witness->add("stratum", i + 1).add("z", ws[i]).add("E-class", c.strata[i].e_class);
                return out;
            }
        for (int r = 1; r < spec.n; ++r)
            if (c.betti_ix[static_cast<std::size_t>(r)] != c.betti_hat[static_cast<std::size_t>(r)] ||
                c.betti_hat[static_cast<std::size_t>(r)] != c.betti_hat[static_cast<std::size_t>(spec.n - r)]) {
                out.witness->add("degree", r);
                break;
            }
        if (!out.witness->find("degree")) out.witness->add("degree", spec.n);
        for (std::size_t i = 0; i < ws.size(); ++i) out.witness->add("stratum-" + std::to_string(i + 1), ws[i]);
    }
    return out;
}

void report_form(fmt::Record& r, const std::string& prefix, const SignatureResult& s) {
    r.add_matrix(prefix + "form", s.form.matrix).add(prefix + "signature", s.signature).add(prefix + "radical", s.witt.radical_dim);
    std::vector<std::string> res;
    for (const auto& [p, d] : s.witt.residues)
        if (!d.trivial()) res.push_back(std::to_string(p) + ":" + std::to_string(d.rank_mod2) + "," + std::to_string(d.disc_class));
    r.add(prefix + "residues", res.empty() ? std::vector<std::string>{"none"} : res);
    r.add(prefix + "dyadic", std::vector<std::string>{std::to_string(s.witt.dyadic.rank_mod2), std::to_string(s.witt.dyadic.disc_class)});
    r.add(prefix + "witt-zero", s.witt.is_zero());
}

Outcome signature_cmd(const Options& o) {
    fmt::Document d = load(o.file);
    PdInput in = pd_input(d, o);
    SignatureResult s = novikov_signature(in.pair, in.n, in.a);
    Outcome out;
    out.title = "Novikov signature";
    out.report.add("n", in.n);
    report_form(out.report, "", s);
    return out;
}

Outcome witt_compare_cmd(const Options& o) {
    fmt::Document d = load(o.file);
    PdInput in = pd_input(d, o);
    WittComparison w = compare_witt(in.pair, in.n, in.a);
    Outcome out;
    out.title = "Witt class comparison";
    out.report.add("n", in.n);
    report_form(out.report, "completed-", w.completed);
    report_form(out.report, "novikov-", w.novikov);
    out.report.add("witt-equal", w.witt_equal).add("signatures-equal", w.signatures_equal);
    for (const auto& note : w.notes) out.report.add("note", note);
    if (!w.witt_equal) {
        out.code = 1;
        out.witness = witness_for("witt-compare");
        out.witness->add_matrix("completed", w.completed.form.matrix).add_matrix("novikov", w.novikov.form.matrix);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Witness checks: recompute the refuted fact from the witness data alone.

std::string check_witness(const std::string& command, const Options& o, const fmt::Record& w) {
    if (w.str("command") != command) return "witness belongs to '" + w.str("command") + "'";
    fmt::Document d = load(o.file);
    if (command == "zeta") {
        fmt::Record scratch;
        Options oc = o;
        oc.cap = static_cast<int>(w.integer("cap"));
        FreeCGA M = free_input(d, oc, scratch);
        int t = static_cast<int>(w.integer("degree"));
        Vec v = w.vec("cocycle");
        if (v.size() != M.dim(t)) return "cocycle has the wrong length";
        if (!is_zero(M.d_matrix(t) * v)) return "not a cocycle";
        if (t > 0 && solve(M.d_matrix(t - 1), v)) return "the cocycle is a coboundary";
        const auto& g = M.generators();
        for (std::size_t j = 0; j < M.basis(t).size(); ++j)
            if (wordlength(M.basis(t)[j]) == 1 && sgn(v[j]) != 0) return "the linear part is nonzero";
        (void)g;
        return {};
    }
    if (command == "obstructions") {
        int n = static_cast<int>(w.integer("n")), i = static_cast<int>(w.integer("degree"));
        Vec a = w.vec("alpha"), b = w.vec("beta");
        if (w.str("source") == "simplicial") {
            SimplicialComplex K = d.kind == "simplicial" ? d.simplicial.at(d.primary).complex() : *d.bundle(d.primary).cone_model;
            ChainComplex C = chain_complex(K);
            if (a.size() != K.count(i) || b.size() != K.count(n - 1 - i)) return "cochains have the wrong length";
            if (!is_zero(coboundary(K, {i, a}).values) || !is_zero(coboundary(K, {n - 1 - i, b}).values)) return "a factor is not a cocycle";
            Vec p = cup(K, {i, a}, {n - 1 - i, b}).values;
            if (solve(dualize(C).d(-(n - 2)), p)) return "the product is a coboundary";
            return {};
        }
        CohomologyRing R = *d.bundle(d.primary).cone_ring;
        if (is_zero(R.product(i, a, n - 1 - i, b))) return "the product vanishes";
        return {};
    }
    if (command == "verify-pd") {
        PdInput in = pd_input(d, o);
        int r = static_cast<int>(w.integer("degree"));
        bool boundary = w.str("part") == "boundary";
        PdReport rep = verify_pd_pair(in.pair, in.n, in.a);
        const auto& degs = boundary ? rep.boundary_degrees : rep.degrees;
        for (const auto& g : degs) {
            if (g.r != r) continue;
            if (w.find("dims")) return g.cohomology_dim != g.homology_dim ? std::string{} : "dimensions agree";
            if (w.find("kernel")) {
                Vec k = w.vec("kernel");
                if (k.size() != g.matrix.cols() || is_zero(k)) return "kernel vector has the wrong length or is zero";
                return is_zero(g.matrix * k) ? std::string{} : "the class does not cap to zero";
            }
            return rank(g.matrix) < g.homology_dim ? std::string{} : "the cap map is onto";
        }
        return "no such degree";
    }
    if (command == "witt-compare") {
        SymmetricForm a(w.mat("completed")), b(w.mat("novikov"));
        return witt_equal(witt_class(a), witt_class(b)) ? "the forms are Witt equivalent" : std::string{};
    }
    if (command == "complete") {
        WittSpaceSpec spec = d.wittspec(d.primary);
        IntersectionSpace ix = assemble_intersection_space(spec);
        if (w.find("stratum")) {
            std::size_t i = static_cast<std::size_t>(w.integer("stratum")) - 1;
            if (i >= ix.bundles.size()) return "no such stratum";
            DualityReport r = verify_completion_criterion(ix.bundles[i], w.vec("z"), spec.strata[i]);
            return r.passed() ? "the stratum passes with this witness" : std::string{};
        }
        std::vector<Vec> ws;
        for (std::size_t i = 0; i < ix.bundles.size(); ++i) ws.push_back(w.vec("stratum-" + std::to_string(i + 1)));
        Completion c = klimczak_completion(spec, ix, ws);
        int r = static_cast<int>(w.integer("degree"));
        auto b = [&](int k) { return betti(c.complex, k); };
        if (r == spec.n) return b(r) != 1 ? std::string{} : "H_n is one-dimensional";
        return (b(r) != betti(ix.complex, r) || b(r) != b(spec.n - r)) ? std::string{} : "Betti numbers agree in this degree";
    }
    if (command == "minimal-model") {
        const fmt::CdgaEntry& e = d.cdgas.at(d.primary);
        if (e.free_cap) return e.free_algebra().is_minimal() ? "the algebra is minimal" : std::string{};
        MinimalModel mm = minimal_model(e.cdga(), static_cast<int>(w.integer("cap")));
        return mm.certificate.ok() ? "the certificate holds" : std::string{};
    }
    return "command '" + command + "' emits no witnesses";
}

// ---------------------------------------------------------------------------
// Example generators

fmt::Document gen_example(const Options& o) {
    fmt::Document doc;
    if (o.what == "sullivan") {
        if (o.u < 3 || o.u % 2 == 0) throw InputError("--u must be an odd integer >= 3");
        // finite exterior algebra on x, y, z with dz = xy; it is its own minimal model
        FreeCGA M = example_minimal_algebra(o.u, 4 * o.u);
        fmt::CdgaEntry e = fmt::cdga_entry(M);
        e.free_cap.reset();
        doc.kind = "cdga";
        doc.primary = "A";
        doc.add_cdga("A", e);
        return doc;
    }
    if (o.what == "torus") {
        bool twisted = o.monodromy != "id";
        if (o.monodromy != "id" && o.monodromy != "swap") throw InputError("--monodromy takes id or swap");
        if (o.link == "s3") {
            if (twisted) throw InputError("the S^3 link is only generated with identity monodromy");
            return fmt::bundle_document(fx::s3_link());
        }
        if (o.link == "s1xs2") return fmt::bundle_document(fx::s1xs2_link(twisted));
        if (o.link == "swap") return fmt::bundle_document(fx::swap_link(twisted));
        if (o.link == "s4" && !twisted) return fmt::bundle_document(fx::s4_link());
        throw InputError("--link takes s3, s1xs2, swap or s4");
    }
    if (o.what == "wittspec") {
        if (o.fixture == "d4xs1") return fmt::wittspec_document(fx::d4xs1_spec());
        if (o.fixture == "doubled") return fmt::wittspec_document(fx::doubled_spec());
        throw InputError("--fixture takes d4xs1 or doubled");
    }
    if (o.what == "simplicial") {
        doc.kind = "simplicial";
        doc.primary = "K";
        if (o.fixture == "d2") doc.add_simplicial("K", fmt::simplicial_entry(fx::ball_pair(2)));
        else if (o.fixture == "s2") doc.add_simplicial("K", fmt::simplicial_entry(SimplicialPair(fx::sphere(2), SimplicialComplex::from_facets(4, {}, false))));
        else if (o.fixture == "d4") doc.add_simplicial("K", fmt::simplicial_entry(fx::d4_pair()));
        else if (o.fixture == "punctured-s2xs2") doc.add_simplicial("K", fmt::simplicial_entry(fx::punctured_s2xs2()));
        else if (o.fixture == "torus-cone") {
            SimplicialComplex pt = SimplicialComplex::from_facets(1, {{0}});
            doc.add_simplicial("K", fmt::simplicial_entry(simplicial_mapping_cone(pt, fx::torus7(), {0}).complex));
        } else {
            throw InputError("--fixture takes d2, s2, d4, punctured-s2xs2 or torus-cone");
        }
        return doc;
    }
    throw InputError("gen-example takes sullivan, torus, wittspec or simplicial");
}

// ---------------------------------------------------------------------------

void print(const Outcome& out, const Options& o) {
    if (o.format == "structured") {
        fmt::Document doc = out.extra;
        doc.kind = "report";
        doc.primary = "result";
        doc.order.insert(doc.order.begin(), {"report", "result"});
        doc.records["result"] = out.report;
        doc.records["result"].add("status", out.code == 0 ? "verified" : out.code == 1 ? "refuted" : "refused");
        if (out.witness) doc.add_record("witness", "witness", *out.witness);
        std::cout << fmt::emit(doc);
        return;
    }
    std::cout << fmt::render(out.title, out.report);
    std::cout << "  status : " << (out.code == 0 ? "verified" : out.code == 1 ? "refuted" : "refused") << "\n";
    if (!out.extra.order.empty()) {
        fmt::Document doc = out.extra;
        doc.kind = doc.order.front().first;
        doc.primary = doc.order.front().second;
        std::cout << "\n" << fmt::emit(doc);
    }
    if (out.witness) {
        fmt::Document w;
        w.kind = "witness";
        w.primary = "witness";
        w.add_record("witness", "witness", *out.witness);
        std::cout << "\n" << fmt::emit(w);
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"rational duality toolkit for Witt spaces and intersection spaces"};
    app.require_subcommand(1);
    Options o;

    auto common = [&](CLI::App* s, bool file = true) {
        if (file) s->add_option("file", o.file, "input document")->required()->check(CLI::ExistingFile);
        s->add_option("--format", o.format, "text or structured")->check(CLI::IsMember({"text", "structured"}));
        return s;
    };
    auto degree = [&](CLI::App* s) { s->add_option("--degree", o.degree, "degree"); };
    auto n = [&](CLI::App* s) { s->add_option("--n", o.n, "dimension of the ambient space"); };
    auto witness = [&](CLI::App* s) {
        s->add_option("--witness", o.witness, "witness file");
        s->add_flag("--check-witness", o.check_witness, "re-verify the witness given by --witness");
    };
    auto perv = [&](CLI::App* s) { s->add_option("--perversity", o.perversity, "middle or table:FILE"); };
    auto cap = [&](CLI::App* s) { s->add_option("--cap", o.cap, "degree cap")->check(CLI::PositiveNumber); };

    std::map<std::string, std::function<Outcome()>> run;
    auto cmd = [&](const std::string& name, const std::string& help, std::function<Outcome()> f) {
        run[name] = std::move(f);
        return common(app.add_subcommand(name, help));
    };

    degree(cmd("homology", "Betti numbers and representative cycles", [&] { return homology_cmd(o, false); }));
    degree(cmd("cohomology", "cohomology and representative cocycles", [&] { return homology_cmd(o, true); }));
    cmd("cone", "mapping cone of a chain map", [&] { return cone_cmd(o); });
    cmd("torus", "algebraic mapping torus of a self-map", [&] { return torus_cmd(o); });
    {
        auto s = cmd("truncate", "equivariant Moore truncation of a bundle fiber", [&] { return truncate_cmd(o); });
        degree(s);
        perv(s);
    }
    {
        auto s = cmd("obstructions", "local duality obstructions of a truncation cone", [&] { return obstructions_cmd(o); });
        n(s);
        perv(s);
        witness(s);
    }
    {
        auto s = cmd("minimal-model", "minimal Sullivan model with certificate", [&] { return minimal_model_cmd(o); });
        cap(s);
        witness(s);
    }
    {
        auto s = cmd("zeta", "zeta homomorphism H^t -> V^t", [&] { return zeta_cmd(o); });
        degree(s);
        cap(s);
        witness(s);
    }
    {
        auto s = cmd("verify-pd", "Poincare duality of a simplicial pair", [&] { return verify_pd_cmd(o); });
        n(s);
        witness(s);
    }
    cmd("assemble-ix", "chain-level intersection space", [&] { return assemble_cmd(o); });
    witness(cmd("complete", "one-cell completion of the intersection space", [&] { return complete_cmd(o); }));
    n(cmd("signature", "Novikov signature of a 4d-dimensional pair", [&] { return signature_cmd(o); }));
    {
        auto s = cmd("witt-compare", "Witt classes of the completion and of the pair", [&] { return witt_compare_cmd(o); });
        n(s);
        witness(s);
    }
    auto gen = app.add_subcommand("gen-example", "emit an example document");
    gen->add_option("what", o.what, "sullivan, torus, wittspec or simplicial")->required();
    gen->add_option("--u", o.u, "odd degree for the sullivan family");
    gen->add_option("--link", o.link, "s3, s1xs2, swap or s4");
    gen->add_option("--monodromy", o.monodromy, "id or swap");
    gen->add_option("--fixture", o.fixture, "fixture name");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (gen->parsed()) {
            std::cout << fmt::emit(gen_example(o));
            return 0;
        }
        std::string name = app.get_subcommands().front()->get_name();
        if (o.check_witness) {
            if (o.witness.empty()) throw InputError("--check-witness needs --witness FILE");
            fmt::Document wd = load(o.witness);
            std::optional<fmt::Record> w;
            for (const auto& [tag, nm] : wd.order)
                if (tag == "witness") w = wd.records.at(nm);
            if (!w) throw InputError(o.witness + ": no witness block");
            std::string why = check_witness(name, o, *w);
            std::cout << (why.empty() ? "witness confirmed\n" : "witness rejected: " + why + "\n");
            return why.empty() ? 0 : 1;
        }
        Outcome out = run.at(name)();
        print(out, o);
        return out.code;
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
    } catch (const fmt::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
    } catch (const MathError& e) {
        std::cerr << "error: " << e.what() << "\n";
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
    }
    return 2;
}
