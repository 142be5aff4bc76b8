#include "doctest.h"

#include "k3fib/paperdata.hpp"

#include <set>

using namespace k3;

namespace {
std::vector<std::string> lattices(const std::vector<FibrationRecord>& v) {
    std::vector<std::string> out;
    for (const auto& r : v) out.push_back(lattice_string(r.summands) + " " + r.mw.str());
    return out;
}
} // namespace

TEST_CASE("Nikulin invariants") {
    auto inv = NikulinInvariants::make(2, 9, 0);
    CHECK(inv.r == 18);
    CHECK(inv.a == 0);
    CHECK_THROWS_AS(NikulinInvariants::make(2, 9, 1), RegistryError);
    CHECK_THROWS_AS(NikulinInvariants::make(1, 10, 1), RegistryError);
    CHECK(admissible_deltas(1, 8) == std::vector<int>{0, 1});
    CHECK(admissible_deltas(1, 7) == std::vector<int>{1});
}

TEST_CASE("Mordell-Weil text") {
    CHECK(MWGroup::parse("Z x Z/2Z").str() == "Z x Z/2Z");
    CHECK(MWGroup::parse("{1}").str() == "{1}");
    CHECK(MWGroup::parse("Z^6").rank == 6);
    CHECK(MWGroup::parse("Z/3Z").torsion == std::vector<int>{3});
}

TEST_CASE("type 1 enumeration examples") {
    auto v = enumerate_type1(NikulinInvariants::make(1, 9, 1));
    CHECK(lattices(v) == std::vector<std::string>{"U + E8^2 + A1 {1}", "U + E7 + D10 Z/2Z", "U + D16 + A1 Z/2Z"});
    // the I6* fibre carries 4 special curves
    CHECK(v[1].s == std::vector<int>{3, 4});
    CHECK(v[1].sections == 2);
    auto w = enumerate_type1(NikulinInvariants::make(6, 5, 0));
    REQUIRE(w.size() == 1);
    CHECK(lattice_string(w[0].summands) == "U + E8");
    CHECK(w[0].sections == 1);
    auto u = enumerate_type1(NikulinInvariants::make(10, 1, 0));
    REQUIRE(u.size() == 1);
    CHECK(u[0].summands.empty());
    CHECK(u[0].mw.str() == "{1}");
}

TEST_CASE("type 2 rows") {
    auto r9 = type2_row(9, 1);
    CHECK(lattice_string(r9.summands) == "U + A17");
    CHECK(r9.mw.str() == "Z/3Z");
    auto r4 = type2_row(4, 0);
    CHECK(lattice_string(r4.summands) == "U + E6");
    CHECK(r4.mw.rank == 6);
    auto r7 = type2_row(7, 1);
    CHECK(lattice_string(r7.summands) == "U + A13");
    CHECK(r7.mw.rank == 2);
    CHECK(type2_row(8, 0).mw.str() == "Z x Z/2Z");
    CHECK(type2_row(8, 1).mw.str() == "Z");
    CHECK_THROWS(type2_row(10, 1));
    CHECK_THROWS(type2_row(0, 1));
}

TEST_CASE("full tables examples") {
    auto t18 = full_table(1, 8);
    CHECK(t18[0].size() == 6);
    CHECK(t18[1].size() == 5);
    auto t21 = full_table(2, 1);
    REQUIRE(t21[1].size() == 1);
    CHECK(lattice_string(t21[1][0].summands) == "U + A1^8");
    auto t32 = full_table(3, 2);
    CHECK(lattices(t32[1]) == std::vector<std::string>{"U + D4 + A1^4 {1}"});
    CHECK(lattices(t32[0]) == std::vector<std::string>{"U + A1^8 Z/2Z"});
    CHECK_THROWS_AS(full_table(4, 9), RegistryError);
}

TEST_CASE("record invariants over every table") {
    for (const auto& inv : all_admissible()) {
        CAPTURE(inv.g);
        CAPTURE(inv.k);
        for (const auto& [d, recs] : full_table(inv.g, inv.k))
            for (const auto& r : recs) {
                CHECK_NOTHROW(check_record(r));
                auto f = disc_form(r.summands);
                if (r.type == 1) {
                    long expect = 1L << (inv.a + (r.mw.torsion.empty() ? 0 : 2));
                    CHECK(f.order() == expect);
                }
                if (inv.g > 3) CHECK(r.mw.torsion.empty());
                int euler = 0;
                for (const auto& fib : r.fibers) euler += fib.euler();
                CHECK(euler <= 22);
            }
    }
}

TEST_CASE("golden registry loads and validates") {
    auto reg = load_tables();
    std::set<std::pair<int, int>> gk;
    for (const auto& inv : all_admissible()) gk.insert({inv.g, inv.k});
    CHECK(reg.blocks.size() == gk.size());
    CHECK(reg.find(1, 9)->rows.size() == 4);
    CHECK(reg.errata.size() >= 2);
}

TEST_CASE("diff detects a wrong golden row") {
    auto reg = load_tables();
    auto blk = *reg.find(1, 9);
    blk.rows[1].s = {4, 5, 0};
    std::vector<FibrationRecord> recs;
    for (auto& [d, v] : full_table(1, 9))
        for (auto& r : v) recs.push_back(r);
    auto lines = diff_block(recs, blk.rows, reg.errata);
    int mism = 0;
    for (auto& l : lines) mism += l.status == DiffStatus::mismatch;
    CHECK(mism == 1);
    blk.rows.pop_back();
    lines = diff_block(recs, blk.rows, reg.errata);
    CHECK(std::any_of(lines.begin(), lines.end(), [](const DiffLine& l) { return l.status == DiffStatus::extra; }));
}
