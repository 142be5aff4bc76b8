// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.
#include "oracles.hpp"

#include "k3fib/paperdata.hpp"
#include "k3fib/specialize.hpp"
#include "k3fib/wire.hpp"

#include <chrono>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>

using namespace k3;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
    std::vector<std::string> failures;
    void require(bool cond, const std::string& what) {
        if (!cond) {
            pass = false;
            failures.push_back(what);
        }
    }
};

QPoly P(const std::string& s) { return parse_poly(s); }

struct DiffCount {
    int match = 0, errata = 0, bad = 0;
    std::set<std::string> errata_ids;
};

DiffCount count(const std::vector<DiffLine>& lines, Outcome& out) {
    DiffCount c;
    for (const auto& d : lines) {
        if (d.status == DiffStatus::match) ++c.match;
        else if (d.status == DiffStatus::errata) ++c.errata, c.errata_ids.insert(d.id);
        else {
            ++c.bad;
            out.require(false, to_string(d.status) + " " + d.id + " " + d.detail);
        }
    }
    return c;
}

Outcome golden_g1() {
    Outcome o;
    auto c = count(verify_classification(load_tables(), 1, 1), o);
    o.require(c.errata_ids == std::set<std::string>{"9.3", "5.9"}, "errata rows differ from {9.3, 5.9}");
    o.detail = std::to_string(c.match) + " MATCH, " + std::to_string(c.errata) + " ERRATA (9.3, 5.9), " + std::to_string(c.bad) + " EXTRA/MISSING/MISMATCH";
    return o;
}

Outcome golden_all() {
    Outcome o;
    auto c = count(verify_classification(load_tables(), 2, 10), o);
    o.require(c.match > 0, "no rows compared");
    o.detail = "g = 2..10: " + std::to_string(c.match) + " MATCH, " + std::to_string(c.errata) + " registered ERRATA, " + std::to_string(c.bad) + " EXTRA/MISSING/MISMATCH";
    return o;
}

Outcome discriminant_identity() {
    Outcome o;
    auto m = family_model(load_families().family("res-i9"));
    o.require(m.A == P("-1/48*mu^4 - 1/2*mu") && m.B == P("1/864*mu^6 + 1/24*mu^3 + 1/4"), "rational model differs");
    o.require(m.delta_int() == P("1/16*(3 + mu)*(mu^2 - 3*mu + 9)"), "4A^3 + 27B^2 != (1/16)(3 + mu)(mu^2 - 3mu + 9)");
    o.require(m.delta_int() == P("(mu^3 + 27)/16"), "4A^3 + 27B^2 != (mu^3 + 27)/16");
    o.detail = "4A^3 + 27B^2 = " + m.delta_int().str();
    return o;
}

Outcome generic_configurations() {
    Outcome o;
    const auto& reg = load_families();
    int n = 0;
    for (const char* name : {"e1-k9", "e2-k9", "e3-k9", "e4-k9", "d1-e1", "d1-e2", "d1-e3", "d1-e4", "d1-e5", "d0-e1", "d0-e2",
                             "d0-e3", "d0-e4", "d0-e5", "d0-e6"}) {
        const auto& f = reg.family(name);
        auto cfg = fiber_configuration(family_model(f));
        o.require(cfg.str() == fiber_string(parse_fiber_string(f.expected)), std::string(name) + ": " + cfg.str() + " vs " + f.expected);
        o.require(cfg.euler() == 24, std::string(name) + ": Euler " + std::to_string(cfg.euler()));
        int rank = mw_rank(cfg.fibers(), f.rho);
        o.require(rank == MWGroup::parse(f.mw).rank, std::string(name) + ": Shioda-Tate rank " + std::to_string(rank) + " vs " + f.mw);
        ++n;
    }
    o.detail = std::to_string(n) + " fibrations, Euler 24, MW rank at rho 19 / 18";
    return o;
}

Outcome specialization_tables() {
    Outcome o;
    const auto& reg = load_families();
    int match = 0, errata = 0;
    std::ostringstream per;
    for (const char* id : {"k9-jumps", "d1-jumps", "d1-cuberoot", "d0-jumps"}) {
        int m = 0, e = 0;
        for (const auto& c : verify_table(reg, id)) {
            auto s = c.status();
            if (s == DiffStatus::match) ++m;
            else if (s == DiffStatus::errata) ++e;
            else o.require(false, std::string(id) + " " + c.row + " " + c.family + ": " + c.note);
            o.require(c.torsion_consistent, std::string(id) + " " + c.row + " " + c.family + ": torsion outside the candidates");
        }
        per << " " << id << " " << m << "/" << e;
        match += m;
        errata += e;
    }
    auto t612 = verify_table(reg, "k9-jumps");
    o.require(t612.size() == 12, "k9-jumps should have 2 rows x 4 fibrations (with the conjugate pair checked separately)");
    o.detail = std::to_string(match) + " MATCH, " + std::to_string(errata) + " registered ERRATA (MATCH/ERRATA:" + per.str() + ")";
    return o;
}

Outcome base_change_rows() {
    Outcome o;
    int n = 0, models = 0;
    for (const auto& r : verify_base_change_rows(load_families())) {
        ++n;
        if (!r.sample.empty()) ++models;
        for (const auto& f : r.failures) o.require(false, r.row.branch + ": " + f);
        if (r.row.branch == "I9")
            o.require(lattice_string(r.trivial_roots) == "U + A17" && r.k3_rank == 0, "I0 + I9 should give U + A17, rank 0");
        if (r.row.branch == "IV")
            o.require(lattice_string(r.trivial_roots) == "U + E6" && r.k3_rank == 6, "I0 + IV should give U + E6, rank 6");
    }
    o.require(n == 11, "expected 11 rows");
    o.detail = std::to_string(n) + " rows (" + std::to_string(models) + " also through an explicit base change)";
    return o;
}

Outcome conic_pipeline() {
    Outcome o;
    int match = 0, errata = 0;
    std::string k9;
    for (const auto& r : verify_worked_example(load_families(), 4, 9)) {
        if (r.status == DiffStatus::match) ++match;
        else if (r.status == DiffStatus::errata) ++errata;
        else o.require(false, "k=" + std::to_string(r.row.k) + ": " + r.note);
        if (r.row.k == 9) k9 = r.configuration;
    }
    o.require(match + errata == 6, "expected k = 4..9");
    o.require(k9 == "III* + I6* + 3 I1", "k = 9 gives " + k9);
    o.detail = std::to_string(match) + " MATCH, " + std::to_string(errata) + " ERRATA (k = 8 is row 8.5), k = 9: " + k9;
    return o;
}

Outcome lattice_suite() {
    Outcome o;
    std::set<std::string> seen;
    int glues = 0, milgram = 0, z2 = 0;
    for (const auto& inv : all_admissible()) {
        for (const auto& [d, recs] : full_table(inv.g, inv.k)) {
            for (const auto& r : recs) {
                std::string key = lattice_string(r.summands);
                auto f = disc_form(r.summands);
                int rank = 2;
                for (const auto& s : r.summands) rank += s.rank();
                int b = brown_invariant(f);
                if (seen.insert(key).second) {
                    ++milgram;
                    o.require(((b - (2 - rank)) % 8 + 8) % 8 == 0, key + ": Brown " + std::to_string(b) + " vs 2 - rank");
                    if (f.two_elementary())
                        for (const auto& g : two_torsion_glues(r.summands)) {
                            ++glues;
                            auto q = glue_quotient(f, glue_element(f, r.summands, g));
                            o.require(brown_invariant(q) == b, key + ": glue " + g.str() + " changes the Brown invariant");
                        }
                }
                if (r.mw.rank == 0 && r.mw.torsion == std::vector<int>{2}) {
                    ++z2;
                    bool placed = false;
                    for (const auto& g : two_torsion_glues(r.summands)) {
                        auto fi = form_invariants(glue_quotient(f, glue_element(f, r.summands, g)));
                        if (fi.a == inv.a && fi.delta == r.delta) placed = true;
                    }
                    o.require(placed, key + ": no glue lands on (a, delta) = (" + std::to_string(inv.a) + ", " + std::to_string(r.delta) + ")");
                }
            }
        }
    }
    auto delta_of = [](const char* s) {
        auto ss = LatticeSummand::parse_list(s);
        auto f = disc_form(ss);
        std::set<int> ds;
        for (const auto& g : two_torsion_glues(ss)) ds.insert(form_invariants(glue_quotient(f, glue_element(f, ss, g))).delta);
        return ds;
    };
    o.require(delta_of("D10,D6") == std::set<int>{1}, "D10 + D6 should glue to delta = 1");
    o.require(delta_of("D8,D8") == std::set<int>{0}, "D8 + D8 should glue to delta = 0");
    o.detail = std::to_string(milgram) + " trivial lattices (Milgram), " + std::to_string(glues) + " glue quotients, " + std::to_string(z2) + " MW = Z/2Z rows placed";
    return o;
}

Outcome core_properties() {
    Outcome o;
    Var x = intern("x"), y = intern("y"), t = intern("t"), a = intern("a");
    int sq = 0, res = 0, ident = 0, idem = 0, scale = 0, hom = 0;

    oracle::Rng r1(31337);
    for (int it = 0; it < 100; ++it) {
        QPoly f(Rational(r1.integer(1, 5)));
        for (int k = 0, n = static_cast<int>(r1.integer(1, 3)); k < n; ++k) {
            QPoly base = QPoly::variable(x) + QPoly(r1.small_rational());
            if (it % 2) base += QPoly::variable(a).scaled(Rational(r1.integer(-2, 2)));
            if (r1.integer(0, 1)) base = base * base + QPoly(Rational(r1.integer(1, 3)));
            f *= base.pow(static_cast<unsigned>(r1.integer(1, 3)));
        }
        auto d = squarefree_decompose(f, x);
        QPoly prod = d.unit;
        for (auto& [p, m] : d.parts) prod *= p.pow(static_cast<unsigned>(m));
        o.require(prod == f, "squarefree reconstruction: " + f.str());
        ++sq;
    }

    oracle::Rng r2(2024);
    for (int it = 0; it < 100; ++it) {
        std::vector<Rational> roots;
        QPoly f(1);
        for (int i = 0, m = static_cast<int>(r2.integer(1, 4)); i < m; ++i) {
            roots.push_back(r2.small_rational());
            f *= QPoly::variable(x) - QPoly(roots.back());
        }
        Rational lc = r2.nonzero_rational();
        f = f.scaled(lc);
        QPoly g = r2.univariate(x, static_cast<int>(r2.integer(1, 4)));
        Rational expect = lc.pow(static_cast<unsigned>(g.degree(x)));
        for (const auto& r : roots) expect *= g.evaluate(x, r).constant_value();
        o.require(resultant(f, g, x) == QPoly(expect), "resultant evaluation rule: " + f.str() + ", " + g.str());
        ++res;
    }

    oracle::Rng r3(77);
    for (int it = 0; idem < 100 && it < 1000; ++it) {
        WeierstrassModel<Rational> m;
        m.t = t;
        m.A = r3.univariate(t, static_cast<int>(r3.integer(0, 8)));
        m.B = r3.univariate(t, static_cast<int>(r3.integer(0, 12)));
        if (it % 4 == 0) {
            QPoly p = QPoly::variable(t) - QPoly(r3.small_rational());
            m.A = r3.univariate(t, 2) * p.pow(4);
            m.B = r3.univariate(t, 3) * p.pow(6);
        }
        if (m.delta_int().is_zero()) continue;
        auto inv = invariants(m);
        o.require(inv.c4.pow(3) - inv.c6.pow(2) == inv.delta_std.scaled(Rational(1728)), "c4^3 - c6^2 != 1728 delta");
        ++ident;
        auto mm = minimalize(m), mmm = minimalize(mm);
        o.require(mmm.A == mm.A && mmm.B == mm.B, "minimalize not idempotent");
        ++idem;
    }

    oracle::Rng r4(1001);
    QPoly T = QPoly::variable(t);
    const std::vector<std::pair<const char*, const char*>> seeds{{"t^3", "t^5"}, {"-3*t^2", "2*t^3 + t^5"}, {"t", "t^2"}, {"-3 + t", "2"},
                                                                 {"t^2", "t^4"}, {"0", "t^5"},          {"t", "0"}};
    for (int it = 0; it < 100; ++it) {
        WeierstrassModel<Rational> m;
        m.t = t;
        m.A = P(seeds[it % seeds.size()].first);
        m.B = P(seeds[it % seeds.size()].second);
        Place<Rational> pl;
        pl.p = T;
        auto base = classify_place(minimalize(m), pl);
        QPoly u = QPoly(r4.nonzero_rational()) + T * r4.univariate(t, 1);
        WeierstrassModel<Rational> s = m;
        s.A = m.A * u.pow(4);
        s.B = m.B * u.pow(6);
        s.chi = 6;
        o.require(classify_place(s, pl) == base, "Kodaira type changed under unit rescaling");
        ++scale;
    }

    oracle::Rng r5(99);
    for (int it = 0; it < 100; ++it) {
        QPoly f = r5.multivariate({x, y}, 3, 4), g = r5.multivariate({x, y, t}, 3, 4);
        std::map<Var, QPoly> b{{x, r5.multivariate({t, y}, 2, 3)}, {y, r5.multivariate({t}, 2, 2)}};
        o.require((f * g).substitute(b) == f.substitute(b) * g.substitute(b), "substitute does not respect products");
        o.require((f + g).substitute(b) == f.substitute(b) + g.substitute(b), "substitute does not respect sums");
        ++hom;
    }
    for (int n : {sq, res, ident, idem, scale, hom}) o.require(n >= 100, "fewer than 100 instances");
    o.detail = "squarefree " + std::to_string(sq) + ", resultant " + std::to_string(res) + ", c4/c6 identity " + std::to_string(ident) +
               ", minimalize " + std::to_string(idem) + ", scaling " + std::to_string(scale) + ", substitute " + std::to_string(hom);
    return o;
}

} // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"g = 1 golden table regeneration", golden_g1},
        {"g = 2..10 golden table regeneration", golden_all},
        {"Discriminant identity", discriminant_identity},
        {"Generic configurations", generic_configurations},
        {"Specialization tables", specialization_tables},
        {"Base-change registry", base_change_rows},
        {"Conic-bundle pipeline", conic_pipeline},
        {"Lattice/glue suite", lattice_suite},
        {"Core property suite", core_properties},
    };
    int failed = 0, i = 0;
    for (const auto& [name, run] : criteria) {
        ++i;
        auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = run();
        } catch (const std::exception& e) {
            o.pass = false;
            o.failures.push_back(std::string("exception: ") + e.what());
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::ostringstream ts;
        ts.precision(2);
        ts << std::fixed << secs;
        std::cout << (o.pass ? "PASS" : "FAIL") << "  " << i << ". " << name << ": " << o.detail << " [" << ts.str() << "s]\n";
        for (std::size_t k = 0; k < o.failures.size() && k < 10; ++k) std::cout << "      " << o.failures[k] << "\n";
        if (!o.pass) ++failed;
    }
    std::cout << (failed ? std::to_string(failed) + " of 9 criteria failed" : std::string("all 9 criteria pass")) << "\n";
    return failed ? 1 : 0;
}
