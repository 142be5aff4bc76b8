#include "doctest.h"

#include "k3fib/specialize.hpp"
#include "k3fib/wire.hpp"

#include <algorithm>

using namespace k3;

namespace {
QPoly P(const std::string& s) { return parse_poly(s); }

Assignment rational(std::map<std::string, std::string> v) {
    Assignment a;
    a.values = std::move(v);
    return a;
}

Assignment algebraic(std::map<std::string, std::string> v, std::string minpoly, std::string gen) {
    Assignment a;
    a.values = std::move(v);
    a.minpoly = std::move(minpoly);
    a.gen = std::move(gen);
    return a;
}

bool contains(const std::vector<QPoly>& v, const QPoly& p) { return std::find(v.begin(), v.end(), p) != v.end(); }

QPoly product(const std::vector<QPoly>& v) {
    QPoly r(1);
    for (const auto& p : v) r *= p;
    return r;
}
} // namespace

TEST_CASE("jump candidates") {
    auto e1 = FamilyHandle::from_registry("e1-k9");
    CHECK(e1.params == std::vector<std::string>{"mu1"});
    auto c1 = jump_candidates(e1, "mu1");
    // -3 and (3 +- 3 sqrt(-3))/2 together
    CHECK(product(c1) == P("mu1^3 + 27"));
    // mu1 = 0 appears on E4, where the I2 fibre runs into the II* at infinity
    auto c4 = jump_candidates(FamilyHandle::from_registry("e4-k9"), "mu1");
    CHECK(contains(c4, P("mu1")));
    CHECK(contains(c4, P("mu1^3 + 27")));

    auto c5 = jump_candidates(FamilyHandle::from_registry("d1-e5"), "mu1");
    CHECK(contains(c5, P("mu1 + a^2/4")));

    auto c0 = jump_candidates(FamilyHandle::from_registry("d0-e1"), "mu1");
    // roots 2(+-1 +- sqrt a)
    CHECK(contains(c0, P("((mu1 - 2)^2 - 4*a)*((mu1 + 2)^2 - 4*a)")));

    auto d2 = jump_candidates(FamilyHandle::from_registry("d1-e2"), "a");
    CHECK(contains(d2, P("a*mu1 - 1")));
}

TEST_CASE("jump candidates reject isotrivial families") {
    WeierstrassModel<Rational> m;
    m.A = QPoly(0);
    m.B = P("c1");
    m.t = intern("t");
    auto h = FamilyHandle::from_model("isotrivial", m, 18);
    CHECK_THROWS_AS(jump_candidates(h, "c1"), MathError);
    auto e1 = FamilyHandle::from_registry("e1-k9");
    CHECK_THROWS_AS(jump_candidates(e1, "a"), MathError);
}

TEST_CASE("specialize_at examples") {
    auto e4 = FamilyHandle::from_registry("e4-k9");
    CHECK(e4.generic().str() == "2 II* + I2 + 2 I1");
    auto r4 = specialize_at(e4, rational({{"mu1", "0"}}), 20, 3);
    CHECK(r4.special_str() == "2 II* + IV");
    CHECK_FALSE(r4.merged_places.empty());
    CHECK(r4.mw_rank == 0);
    CHECK(r4.mw_rank_delta == 0);

    auto e1 = FamilyHandle::from_registry("e1-k9");
    auto r1 = specialize_at(e1, rational({{"mu1", "-3"}}), 20, 4);
    CHECK(r1.special_str() == "I18 + I2 + 4 I1");
    CHECK(r1.trivial_disc == 36);
    CHECK(r1.torsion_candidates == std::vector<long>{3});

    // the conjugate pair gives the same configuration
    auto r1a = specialize_at(e1, algebraic({{"mu1", "r"}}, "r^2 - 3*r + 9", "r"), 20, 4);
    CHECK(r1a.special_str() == "I18 + I2 + 4 I1");

    auto e6 = FamilyHandle::from_registry("d0-e6");
    for (const char* mu : {"4", "-4"}) {
        auto r = specialize_at(e6, rational({{"a", "1"}, {"mu1", mu}}), 20, 8);
        CHECK(r.special_str() == "I13* + I2 + 3 I1");
    }
}

TEST_CASE("specialize_at away from the candidates") {
    auto e1 = FamilyHandle::from_registry("e1-k9");
    auto r = specialize_at(e1, rational({{"mu1", "5"}}), 19);
    CHECK(r.special_str() == e1.generic().str());
    CHECK(r.merged_places.empty());
    CHECK(r.mw_rank_delta == 0);
    CHECK_FALSE(r.rebuilt);
    // no rho: rank undetermined, every n with n^2 | 18
    auto u = specialize_at(e1, rational({{"mu1", "5"}}));
    CHECK_FALSE(u.mw_rank);
    CHECK(u.torsion_candidates == std::vector<long>{1, 3});
}

TEST_CASE("specialize_at keeps free parameters") {
    auto d0 = FamilyHandle::from_registry("d0-e1");
    auto r = specialize_at(d0, rational({{"a", "s^2"}, {"mu1", "2 + 2*s"}}), 19, 8);
    CHECK(r.special_str() == "I16 + I2 + 6 I1");
    CHECK(r.mw_rank == 1);
}

TEST_CASE("specialize_at at a vanishing generic unit") {
    // the discriminant of d0-e1 carries a^2; at a = 0 the rebuilt surface degenerates
    auto d0 = FamilyHandle::from_registry("d0-e1");
    CHECK_THROWS_AS(specialize_at(d0, rational({{"a", "0"}})), MathError);
}

TEST_CASE("torsion candidates") {
    auto f = parse_fiber_string("I16 + 2 I2 + 4 I1");
    CHECK(trivial_disc_order(f) == 64);
    CHECK(torsion_candidates(f, 0, 4) == std::vector<long>{4});
    CHECK(torsion_candidates(f, 1, 4) == std::vector<long>{1, 2, 4, 8});
    CHECK(torsion_candidates(f, 0, 3).empty());
    CHECK(trivial_disc_order(parse_fiber_string("2 II* + IV")) == 3);
}

TEST_CASE("specialization tables") {
    const auto& reg = load_families();
    int errata = 0, cells = 0;
    for (const char* id : {"k9-jumps", "d1-jumps", "d1-cuberoot", "d0-jumps"}) {
        auto rep = verify_table(reg, id);
        CHECK_FALSE(rep.empty());
        for (const auto& c : rep) {
            CAPTURE(c.table);
            CAPTURE(c.row);
            CAPTURE(c.family);
            CAPTURE(c.assignment);
            CAPTURE(c.note);
            CHECK(c.status() != DiffStatus::mismatch);
            CHECK(c.torsion_consistent);
            if (c.status() == DiffStatus::errata) ++errata;
            ++cells;
        }
    }
    CHECK(cells == 70);
    CHECK(errata == 5);

    auto t612 = verify_table(reg, "k9-jumps");
    CHECK(t612.size() == 12);
    CHECK(std::all_of(t612.begin(), t612.end(), [](const CellReport& c) { return c.status() == DiffStatus::match; }));
}

TEST_CASE("verify_table reports a wrong cell") {
    FamilyRegistry reg = load_families();
    auto& row = reg.tables.front().rows.front();
    row.cells.begin()->second.fibers = "I17 + I3 + 4 I1";
    auto rep = verify_table(reg, reg.tables.front().id);
    CHECK(std::count_if(rep.begin(), rep.end(), [](const CellReport& c) { return c.status() == DiffStatus::mismatch; }) >= 1);
}
