#include "doctest.h"
#include "oracles.hpp"

#include "k3fib/polyalg.hpp"
#include "k3fib/wire.hpp"

using namespace k3;

namespace {
QPoly P(const char* s) { return parse_poly(s); }
Var V(const char* s) { return intern(s); }

bool same_up_to_unit(const QPoly& a, const QPoly& b) {
    if (a.is_zero() || b.is_zero()) return a.is_zero() && b.is_zero();
    return normalize(a).second == normalize(b).second;
}
} // namespace

TEST_CASE("rational basics") {
    CHECK(Rational::parse("6/-4") == Rational(-3) / Rational(2));
    CHECK(Rational::parse("0/7").str() == "0");
    CHECK(Rational::parse("-12/8").den() == 2);
    CHECK_THROWS(Rational::parse("1.5"));
    CHECK_THROWS(Rational::parse("1/0"));
    Rational r;
    CHECK(Rational::parse("9/4").is_square(&r));
    CHECK(r == Rational::parse("3/2"));
}

TEST_CASE("parser and printing") {
    QPoly f = P("-1/48*mu^4 - mu/2");
    CHECK(f.degree(V("mu")) == 4);
    CHECK(f.str() == "-1/48*mu^4 - 1/2*mu");
    CHECK(P("(x+1)^2") == P("x^2 + 2*x + 1"));
    CHECK(P("x - x").is_zero());
    CHECK_THROWS(P("x/y"));
    QPoly g = P("3*t^2*a - a^2 + 1/5");
    CHECK(poly_from_json(poly_to_json(g, {"t"})) == g);
    json j = json::parse(R"({"vars":["t"],"params":["a","mu1"],"terms":[{"coeff":"-1/48","exps":{"t":4}},{"coeff":"2","exps":{"a":1,"mu1":2}}]})");
    CHECK(poly_from_json(j) == P("-1/48*t^4 + 2*a*mu1^2"));
}

TEST_CASE("resultant examples") {
    CHECK(resultant(P("x - y"), P("x - z"), V("x")) == P("y - z"));
    CHECK(resultant(P("x^2 + 1"), P("x + 3"), V("x")) == P("10"));
    QPoly r = resultant(P("x^2 - 2"), P("x^2 - t"), V("x"));
    CHECK(r == P("(t - 2)^2"));
    CHECK(r == oracle::sylvester_resultant(P("x^2 - 2"), P("x^2 - t"), V("x")));
    CHECK(resultant(P("3"), P("x^2+1"), V("x")) == P("9"));
    CHECK_THROWS(resultant(QPoly(), QPoly(), V("x")));
}

TEST_CASE("resultant agrees with the Sylvester determinant") {
    oracle::Rng rng(1234);
    Var x = V("x"), y = V("y");
    for (int it = 0; it < 40; ++it) {
        QPoly f = rng.multivariate({x, y}, 3, 4) + QPoly::monomial(rng.nonzero_rational(), {{x, 2}});
        QPoly g = rng.multivariate({x, y}, 3, 4) + QPoly::monomial(rng.nonzero_rational(), {{x, 3}});
        if (f.degree(x) < 1 || g.degree(x) < 1) continue;
        CHECK(resultant(f, g, x) == oracle::sylvester_resultant(f, g, x));
    }
}

TEST_CASE("gcd examples") {
    Var x = V("x");
    CHECK(gcd_in(P("x^2 - 1"), P("x - 1"), x) == P("x - 1"));
    CHECK(gcd_in(P("x^2"), P("x^3"), x) == P("x^2"));
    QPoly f = P("(x - t)^2*(x + 1)"), g = P("(x - t)*(x + 2)");
    QPoly h = gcd_in(f, g, x);
    CHECK(h == P("x - t"));
    CHECK(divide_exact(f, h).has_value());
    CHECK(divide_exact(g, h).has_value());
    CHECK(gcd_in(QPoly(), P("2*x + 4"), x) == P("x + 2"));
    // content is a unit over the parameter field
    CHECK(gcd_in(P("a*(x-1)*(x+a)"), P("(a+1)*(x+a)"), x) == P("x + a"));
    CHECK(gcd(P("a*(x-1)*(x+a)"), P("a*(a+1)*(x+a)")) == P("a*x + a^2"));
}

TEST_CASE("squarefree examples") {
    Var x = V("x");
    auto d = squarefree_decompose(P("x^3"), x);
    REQUIRE(d.parts.size() == 1);
    CHECK(d.parts[0].first == P("x"));
    CHECK(d.parts[0].second == 3);
    d = squarefree_decompose(P("(x^2-1)^2*(x+2)"), x);
    REQUIRE(d.parts.size() == 2);
    CHECK(d.parts[0] == std::make_pair(P("x+2"), 1));
    CHECK(d.parts[1] == std::make_pair(P("x^2-1"), 2));
    d = squarefree_decompose(P("7*a^2*(x-a)^3*x^2*(x+1)"), x);
    REQUIRE(d.parts.size() == 3);
    CHECK(d.unit == P("7*a^2"));
    CHECK_THROWS(squarefree_decompose(QPoly(), x));
}

TEST_CASE("coprime_refine examples") {
    Var x = V("x");
    auto r = coprime_refine<Rational>({P("x*(x-1)"), P("x*(x+1)")}, x);
    REQUIRE(r.size() == 3);
    std::vector<QPoly> want{P("x"), P("x-1"), P("x+1")};
    for (auto& w : want) CHECK(std::find(r.begin(), r.end(), w) != r.end());
    r = coprime_refine<Rational>({P("x^2 - t^2"), P("x - t")}, x);
    REQUIRE(r.size() == 2);
    CHECK(std::find(r.begin(), r.end(), P("x - t")) != r.end());
    CHECK(std::find(r.begin(), r.end(), P("x + t")) != r.end());
}

TEST_CASE("coprime_refine property: products of linear forms") {
    oracle::Rng rng(77);
    Var x = V("x");
    for (int it = 0; it < 100; ++it) {
        std::vector<QPoly> lin;
        for (int k = 0; k < 4; ++k) lin.push_back(QPoly::variable(x) - QPoly(Rational(rng.integer(-3, 3))));
        std::vector<QPoly> in{lin[0] * lin[1] * lin[2], lin[1] * lin[3], lin[2] * lin[2] * lin[3]};
        auto out = coprime_refine(in, x);
        for (std::size_t i = 0; i < out.size(); ++i)
            for (std::size_t j = i + 1; j < out.size(); ++j) CHECK(gcd_in(out[i], out[j], x).degree(x) == 0);
        for (const auto& p : in) {
            // p is a product of outputs
            QPoly rest = p;
            for (const auto& o : out)
                while (auto q = divide_exact(rest, o)) rest = *q;
            CHECK(rest.degree(x) == 0);
        }
    }
}

TEST_CASE("substitute examples") {
    QPoly f = P("mu^3 + 27");
    CHECK(f.substitute(V("mu"), P("tau^2 + mu1")) == P("(tau^2+mu1)^3 + 27"));
    CHECK(P("x").substitute(V("x"), P("x")) == P("x"));
    // simultaneous: swap x and y
    CHECK(P("x^2*y").substitute({{V("x"), P("y")}, {V("y"), P("x")}}) == P("y^2*x"));
    auto F = std::make_shared<NumberField>(UPolyQ{Rational(9), Rational(-3), Rational(1)}, "r");
    APoly g = to_algebraic(P("mu1^2 - 3*mu1 + 9"));
    APoly z = g.substitute(V("mu1"), APoly(AlgebraicNumber::generator(F)));
    CHECK(z.is_zero());
}

TEST_CASE("substitute is a ring homomorphism") {
    oracle::Rng rng(99);
    Var x = V("x"), y = V("y"), t = V("t");
    for (int it = 0; it < 100; ++it) {
        QPoly f = rng.multivariate({x, y}, 3, 4), g = rng.multivariate({x, y, t}, 3, 4);
        std::map<Var, QPoly> b{{x, rng.multivariate({t, y}, 2, 3)}, {y, rng.multivariate({t}, 2, 2)}};
        CHECK((f * g).substitute(b) == f.substitute(b) * g.substitute(b));
        CHECK((f + g).substitute(b) == f.substitute(b) + g.substitute(b));
    }
}

TEST_CASE("resultant evaluation rule on random instances") {
    oracle::Rng rng(2024);
    Var x = V("x");
    for (int it = 0; it < 100; ++it) {
        int m = static_cast<int>(rng.integer(1, 4));
        std::vector<Rational> roots;
        QPoly f(1);
        for (int i = 0; i < m; ++i) {
            roots.push_back(rng.small_rational());
            f *= QPoly::variable(x) - QPoly(roots.back());
        }
        Rational lc = rng.nonzero_rational();
        f = f.scaled(lc);
        QPoly g = rng.univariate(x, static_cast<int>(rng.integer(1, 4)));
        Rational expect = lc.pow(static_cast<unsigned>(g.degree(x)));
        for (const auto& r : roots) expect *= g.evaluate(x, r).constant_value();
        CHECK(resultant(f, g, x) == QPoly(expect));
    }
}

TEST_CASE("resultant vanishes iff gcd has positive degree") {
    oracle::Rng rng(5);
    Var x = V("x");
    int shared = 0;
    for (int it = 0; it < 100; ++it) {
        QPoly f = rng.univariate(x, static_cast<int>(rng.integer(1, 4)));
        QPoly g = rng.univariate(x, static_cast<int>(rng.integer(1, 4)));
        if (it % 3 == 0) {
            QPoly c = QPoly::variable(x) - QPoly(rng.small_rational());
            f *= c;
            g *= c;
            ++shared;
        }
        bool zero = resultant(f, g, x).is_zero();
        bool common = gcd_in(f, g, x).degree(x) > 0;
        CHECK(zero == common);
    }
    CHECK(shared > 30);
}

TEST_CASE("squarefree reconstruction and gcd(f, f') degree on random inputs") {
    oracle::Rng rng(31337);
    Var x = V("x"), a = V("a");
    for (int it = 0; it < 100; ++it) {
        QPoly f(Rational(rng.integer(1, 5)));
        int nf = static_cast<int>(rng.integer(1, 3));
        for (int k = 0; k < nf; ++k) {
            QPoly base = QPoly::variable(x) + QPoly(rng.small_rational());
            if (it % 2) base += QPoly::variable(a).scaled(Rational(rng.integer(-2, 2)));
            if (rng.integer(0, 1)) base = base * base + QPoly(Rational(rng.integer(1, 3)));
            f *= base.pow(static_cast<unsigned>(rng.integer(1, 3)));
        }
        auto d = squarefree_decompose(f, x);
        QPoly prod = d.unit;
        int expect = 0;
        for (auto& [p, m] : d.parts) {
            prod *= p.pow(static_cast<unsigned>(m));
            expect += (m - 1) * p.degree(x);
            CHECK(gcd_in(p, p.derivative(x), x).degree(x) == 0);
        }
        CHECK(prod == f);
        CHECK(gcd_in(f, f.derivative(x), x).degree(x) == expect);
        for (std::size_t i = 0; i < d.parts.size(); ++i)
            for (std::size_t j = i + 1; j < d.parts.size(); ++j)
                CHECK(gcd_in(d.parts[i].first, d.parts[j].first, x).degree(x) == 0);
    }
}

TEST_CASE("number field arithmetic") {
    oracle::Rng rng(8);
    auto F = std::make_shared<NumberField>(UPolyQ{Rational(9), Rational(-3), Rational(1)}, "r");
    for (int it = 0; it < 100; ++it) {
        AlgebraicNumber z(F, UPolyQ{rng.small_rational(), rng.nonzero_rational()});
        CHECK((z * z.inverse()).is_one());
    }
    auto G = std::make_shared<NumberField>(UPolyQ{Rational(-2), Rational(0), Rational(0), Rational(1)}, "th");
    AlgebraicNumber th = AlgebraicNumber::generator(G);
    CHECK((th * th * th) == AlgebraicNumber(Rational(2)));
    CHECK_THROWS(NumberField(UPolyQ{Rational(-4), Rational(0), Rational(1)}));   // x^2-4 reducible
    CHECK_THROWS(NumberField(UPolyQ{Rational(1), Rational(2), Rational(1)}));    // not squarefree
    CHECK(certify_irreducible(UPolyQ{Rational(1), Rational(0), Rational(0), Rational(0), Rational(1)}));
}

TEST_CASE("gcd over a number field") {
    auto F = std::make_shared<NumberField>(UPolyQ{Rational(-2), Rational(0), Rational(1)}, "r");
    APoly r(AlgebraicNumber::generator(F));
    APoly x = APoly::variable("x");
    APoly f = (x - r) * (x + APoly(1)), g = (x - r) * (x - APoly(2));
    APoly h = gcd_in(f, g, intern("x"));
    CHECK(h == x - r);
    CHECK(resultant(x * x - APoly(2), x - r, intern("x")).is_zero());
    CHECK(same_up_to_unit(gcd_in(P("2*x^2 - 2"), P("3*x - 3"), intern("x")), P("x - 1")));
}
