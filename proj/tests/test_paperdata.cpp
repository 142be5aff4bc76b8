#include "doctest.h"

#include "k3fib/paperdata.hpp"
#include "k3fib/wire.hpp"

#include <algorithm>

using namespace k3;

namespace {
QPoly P(const std::string& s) { return parse_poly(s); }

std::vector<QPoly> finite_places(const WeierstrassModel<Rational>& m) {
    std::vector<QPoly> out;
    for (auto& [pl, mult] : places_of_discriminant(m))
        if (!pl.infinite) out.push_back(pl.p);
    std::sort(out.begin(), out.end(), poly_less<Rational>);
    return out;
}

std::vector<QPoly> monic_parts(const QPoly& f, Var t) {
    std::vector<QPoly> out;
    for (auto& [p, m] : squarefree_decompose(f, t).parts)
        if (p.degree(t) >= 1) out.push_back(normalize_in(p, t).second);
    std::sort(out.begin(), out.end(), poly_less<Rational>);
    return out;
}
} // namespace

TEST_CASE("family registry loads") {
    const auto& reg = load_families();
    CHECK(reg.families.size() >= 18);
    CHECK(reg.pencils.size() == 3);
    CHECK(reg.base_change_rows.size() == 11);
    CHECK(reg.worked_example.rows.size() == 9);
    for (const char* id : {"k9-jumps", "d1-jumps", "d1-cuberoot", "d0-jumps"}) CHECK_NOTHROW(reg.table(id));
    CHECK_THROWS_AS(reg.family("no-such-family"), RegistryError);
    CHECK_THROWS_AS(reg.table("7.1"), RegistryError);
    CHECK(reg.erratum("d0-jumps/a = 1/d0-e1", "fibers") != nullptr);
    CHECK(reg.erratum("d0-jumps/a = 1/d0-e2", "fibers") == nullptr);
}

TEST_CASE("rational I9 surface: discriminant identity") {
    const auto& f = load_families().family("res-i9");
    auto m = family_model(f);
    CHECK(m.chi == 1);
    CHECK(m.delta_int() == P("1/16*(3 + mu)*(mu^2 - 3*mu + 9)"));
    CHECK(m.delta_int() == P("(mu^3 + 27)/16"));
    CHECK(fiber_configuration(m).str() == "I9 + 3 I1");
}

TEST_CASE("generic configurations of every family") {
    for (const auto& f : load_families().families) {
        CAPTURE(f.name);
        auto m = family_model(f);
        auto cfg = fiber_configuration(m);
        CHECK(cfg.str() == fiber_string(parse_fiber_string(f.expected)));
        CHECK(cfg.euler() == 12 * f.chi);
        auto inv = invariants(m);
        CHECK(inv.c4.pow(3) - inv.c6.pow(2) == inv.delta_std.scaled(Rational(1728)));
        if (f.chi == 2) {
            REQUIRE(f.rho > 0);
            CHECK(mw_rank(cfg.fibers(), f.rho) == MWGroup::parse(f.mw).rank);
        }
    }
}

TEST_CASE("displayed models agree with their constructions") {
    for (const auto& f : load_families().families) {
        if (!f.has_model() || (!f.conic && !f.base_change)) continue;
        CAPTURE(f.name);
        CHECK(j_invariant(family_model(f)) == j_invariant(recipe_model(f)));
        CHECK(fiber_configuration(recipe_model(f)).str() == fiber_configuration(family_model(f)).str());
    }
}

TEST_CASE("displayed discriminants vanish at the computed places") {
    int checked = 0;
    for (const auto& f : load_families().families) {
        if (f.displayed_delta.empty()) continue;
        CAPTURE(f.name);
        auto m = family_model(f);
        CHECK(finite_places(m) == monic_parts(P(f.displayed_delta), m.t));
        ++checked;
    }
    CHECK(checked >= 6);
}

TEST_CASE("base change of the I9 surface equals the E1 family") {
    const auto& reg = load_families();
    auto e1 = family_model(reg.family("e1-k9"));
    CHECK(e1.delta_int() == P("1/16*(tau^2 + mu1 + 3)*(mu1^2 + 2*tau^2*mu1 - 3*mu1 + tau^4 - 3*tau^2 + 9)"));
    CHECK(fiber_configuration(e1).str() == "I18 + 6 I1");
}

TEST_CASE("branch fibre rows") {
    auto reps = verify_base_change_rows(load_families());
    REQUIRE(reps.size() == 11);
    int with_model = 0;
    for (const auto& r : reps) {
        CAPTURE(r.row.branch);
        CAPTURE(r.row.k);
        for (const auto& f : r.failures) MESSAGE(f);
        CHECK(r.ok());
        if (!r.sample.empty()) ++with_model;
        if (r.row.branch == "I9") {
            CHECK(lattice_string(r.trivial_roots) == "U + A17");
            CHECK(r.k3_rank == 0);
            CHECK(r.k3_config == "I18 + 6 I1");
        }
        if (r.row.branch == "IV") {
            CHECK(lattice_string(r.trivial_roots) == "U + E6");
            CHECK(r.k3_rank == 6);
            CHECK(r.k3_config == "IV* + 16 I1");
        }
    }
    // only I7 lacks a sample model
    CHECK(with_model == 10);
}

TEST_CASE("worked example sextic") {
    const auto& reg = load_families();
    auto [f, g] = worked_example_sextic(reg, 9);
    CHECK(f == P("x*y*z"));
    CHECK(g == P("x^2*y + y^2*z + z^2*x + mu1*x*y*z"));
    auto [f4, g4] = worked_example_sextic(reg, 4);
    CHECK(f4 == P("x*y*z"));
    CHECK(g4.contains(intern("a9")));
    CHECK_FALSE(g4.contains(intern("a4")));
    CHECK_THROWS(worked_example_sextic(reg, 10));
}

TEST_CASE("fixture listing") {
    auto fx = list_fixtures();
    auto has = [&](const std::string& n) {
        return std::any_of(fx.begin(), fx.end(), [&](const FixtureInfo& i) { return i.name == n; });
    };
    CHECK(has("e2-k9"));
    CHECK(has("pencil-ik"));
    CHECK(has("d0-jumps"));
    CHECK(has("base-change"));
}
