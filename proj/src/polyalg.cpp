#include "k3fib/polyalg.hpp"

#include <algorithm>

namespace k3 {

namespace {

template <class K> using UP = std::vector<Poly<K>>;

template <class K>
void trim(UP<K>& p) {
    while (!p.empty() && p.back().is_zero()) p.pop_back();
}

template <class K>
int udeg(const UP<K>& p) {
    return static_cast<int>(p.size()) - 1;
}

// Pick the variable of g along which to run a recursive division:
// the one of highest degree in g.
template <class K>
Var division_var(const Poly<K>& g) {
    Var best = g.vars()[0];
    int bd = -1;
    for (Var v : g.vars()) {
        int d = g.degree(v);
        if (d > bd) {
            bd = d;
            best = v;
        }
    }
    return best;
}

template <class K>
std::optional<UP<K>> divide_exact_up(UP<K> r, const UP<K>& g) {
    int dg = udeg(g);
    int dr = udeg(r);
    if (dr < dg) {
        for (const auto& c : r)
            if (!c.is_zero()) return std::nullopt;
        return UP<K>{};
    }
    UP<K> q(dr - dg + 1);
    for (int k = dr; k >= dg; --k) {
        if (r[k].is_zero()) continue;
        auto c = divide_exact(r[k], g[dg]);
        if (!c) return std::nullopt;
        for (int i = 0; i <= dg; ++i)
            if (!g[i].is_zero()) r[k - dg + i] -= *c * g[i];
        q[k - dg] = std::move(*c);
    }
    for (int i = 0; i < dg; ++i)
        if (!r[i].is_zero()) return std::nullopt;
    trim(q);
    return q;
}

// Univariate helpers over the field K, dense low->high.
template <class K>
void ktrim(std::vector<K>& p) {
    while (!p.empty() && p.back().is_zero()) p.pop_back();
}

template <class K>
std::vector<K> kgcd(std::vector<K> a, std::vector<K> b) {
    ktrim(a);
    ktrim(b);
    while (!b.empty()) {
        // a mod b
        K inv = b.back().inverse();
        while (a.size() >= b.size()) {
            K f = a.back() * inv;
            std::size_t shift = a.size() - b.size();
            for (std::size_t i = 0; i < b.size(); ++i) a[shift + i] -= f * b[i];
            a.pop_back();
            ktrim(a);
            if (a.empty()) break;
        }
        std::swap(a, b);
    }
    return a;
}

// Evaluate every variable except v at the given point and return dense coefficients in v.
template <class K>
std::optional<std::vector<K>> specialize_univariate(const Poly<K>& f, Var v, const std::vector<Var>& others,
                                                    const std::vector<long>& point) {
    Poly<K> s = f;
    for (std::size_t i = 0; i < others.size(); ++i) s = s.evaluate(others[i], K(point[i]));
    std::vector<K> out;
    auto cs = s.coeffs_in(v);
    for (auto& c : cs) out.push_back(c.constant_value());
    return out;
}

// Degree bound for gcd over K(others)[v] from one lucky specialization.
// Returns the degree of the specialized gcd, or -1 when no usable point was found.
template <class K>
int specialized_gcd_degree(const Poly<K>& f, const Poly<K>& g, Var v) {
    std::vector<Var> others;
    for (Var x : f.vars())
        if (x != v) others.push_back(x);
    for (Var x : g.vars())
        if (x != v && std::find(others.begin(), others.end(), x) == others.end()) others.push_back(x);
    if (others.empty()) return -1;
    int df = f.degree(v), dg = g.degree(v);
    static const long seeds[] = {3, -5, 7, 11, -13, 17, 19, -23, 29, 31};
    for (int attempt = 0; attempt < 4; ++attempt) {
        std::vector<long> pt(others.size());
        for (std::size_t i = 0; i < others.size(); ++i) pt[i] = seeds[(i * 3 + attempt * 7) % 10] + attempt;
        auto fs = specialize_univariate(f, v, others, pt);
        auto gs = specialize_univariate(g, v, others, pt);
        ktrim(*fs);
        ktrim(*gs);
        if (static_cast<int>(fs->size()) - 1 != df || static_cast<int>(gs->size()) - 1 != dg) continue;
        return static_cast<int>(kgcd(*fs, *gs).size()) - 1;
    }
    return -1;
}

// Subresultant PRS in v; returns the last nonzero remainder (not made primitive).
template <class K>
Poly<K> prs_last(const Poly<K>& f, const Poly<K>& g, Var v) {
    Poly<K> A = f, B = g;
    if (A.degree(v) < B.degree(v)) std::swap(A, B);
    Poly<K> gg(K(1)), h(K(1));
    while (true) {
        int delta = A.degree(v) - B.degree(v);
        Poly<K> R = prem(A, B, v);
        if (R.is_zero()) return B;
        if (R.degree(v) == 0) return R;
        A = B;
        B = div_exact(R, gg * h.pow(delta));
        gg = A.lc_in(v);
        if (delta == 0) {
        } else if (delta == 1) {
            h = gg;
        } else {
            h = div_exact(gg.pow(delta), h.pow(delta - 1));
        }
    }
}

// gcd over K(others)[v] by evaluating one parameter at integer points, recursing, and
// interpolating the images scaled to leading coefficient gcd(lc f, lc g). Dense in that
// parameter only. nullopt when the points run out without a verified answer.
template <class K>
std::optional<Poly<K>> interp_gcd(const Poly<K>& f, const Poly<K>& g, Var v) {
    std::vector<Var> params;
    for (const auto* p : {&f, &g})
        for (Var x : p->vars())
            if (x != v && std::find(params.begin(), params.end(), x) == params.end()) params.push_back(x);
    if (params.empty()) return std::nullopt;
    Var y = params[0];
    int best = 1 << 30;
    for (Var x : params) {
        int d = std::max(f.degree(x), g.degree(x));
        if (d < best) {
            best = d;
            y = x;
        }
    }
    Poly<K> lf = f.lc_in(v), lg = g.lc_in(v);
    Poly<K> gamma = gcd(lf, lg);
    int bound = std::max(gamma.degree(y), 0) + std::min(std::max(f.degree(y), 0), std::max(g.degree(y), 0));
    Poly<K> Y = Poly<K>::variable(y);

    std::vector<long> pts;
    Poly<K> H, basis(K(1));
    int dv = 1 << 30;
    int tries = 0;
    for (long k = 1; tries < 2 * bound + 40; ++k) {
        long yi = (k % 2) ? (k + 1) / 2 : -(k / 2);
        ++tries;
        K yk(yi);
        if (lf.evaluate(y, yk).is_zero() || lg.evaluate(y, yk).is_zero()) continue;
        Poly<K> fi = f.evaluate(y, yk), gi = g.evaluate(y, yk);
        Poly<K> Gi = gcd_in(fi, gi, v);
        int d = Gi.degree(v);
        if (d == 0) return Poly<K>(K(1));
        if (d > dv) continue;
        auto Vi = divide_exact(gamma.evaluate(y, yk) * Gi, Gi.lc_in(v));
        if (!Vi) continue;
        if (d < dv) {
            // earlier points were unlucky
            dv = d;
            pts.clear();
            H = Poly<K>();
            basis = Poly<K>(K(1));
        }
        // Newton step
        K denom(1);
        for (long p : pts) denom *= K(yi - p);
        Poly<K> ck = (*Vi - H.evaluate(y, yk)).scaled(denom.inverse());
        bool stable = ck.is_zero() && !pts.empty();
        H += ck * basis;
        basis *= Y - Poly<K>(K(yi));
        pts.push_back(yi);
        if (stable || static_cast<int>(pts.size()) > bound) {
            Poly<K> G = primitive_in(H, v);
            if (G.degree(v) == dv && divide_exact(f, G) && divide_exact(g, G)) return G;
            if (static_cast<int>(pts.size()) > bound + 1) return std::nullopt;
        }
    }
    return std::nullopt;
}

} // namespace

template <class K>
std::optional<Poly<K>> divide_exact(const Poly<K>& f, const Poly<K>& g) {
    if (g.is_zero()) throw MathError("division by zero polynomial");
    if (f.is_zero()) return Poly<K>();
    if (g.is_constant()) return f.scaled(g.constant_value().inverse());
    if (f.total_degree() < g.total_degree()) return std::nullopt;
    for (Var x : g.vars())
        if (f.degree(x) < g.degree(x)) return std::nullopt;
    Var v = division_var(g);
    auto q = divide_exact_up<K>(f.coeffs_in(v), g.coeffs_in(v));
    if (!q) return std::nullopt;
    return Poly<K>::from_coeffs(v, *q);
}

template <class K>
Poly<K> div_exact(const Poly<K>& f, const Poly<K>& g) {
    auto q = divide_exact(f, g);
    if (!q) throw InconsistencyError("inexact division of " + f.str() + " by " + g.str());
    return *q;
}

template <class K>
Poly<K> prem(const Poly<K>& f, const Poly<K>& g, Var v) {
    if (g.is_zero()) throw MathError("prem by zero");
    UP<K> R = f.coeffs_in(v);
    UP<K> G = g.coeffs_in(v);
    int m = udeg(R), n = udeg(G);
    if (m < n) return f;
    const Poly<K>& lcg = G[n];
    int skipped = 0;
    for (int k = m; k >= n; --k) {
        if (k >= static_cast<int>(R.size()) || R[k].is_zero()) {
            ++skipped;
            continue;
        }
        Poly<K> c = R[k];
        for (int i = 0; i < k; ++i)
            if (!R[i].is_zero()) R[i] = R[i] * lcg;
        for (int i = 0; i < n; ++i)
            if (!G[i].is_zero()) R[k - n + i] -= c * G[i];
        R[k] = Poly<K>();
    }
    trim(R);
    Poly<K> r = Poly<K>::from_coeffs(v, R);
    if (skipped) r = r * lcg.pow(skipped);
    return r;
}

template <class K>
Poly<K> resultant(const Poly<K>& f, const Poly<K>& g, Var v) {
    if (f.is_zero() && g.is_zero()) throw MathError("resultant of two zero polynomials");
    if (f.is_zero() || g.is_zero()) return Poly<K>();
    int df = f.degree(v), dg = g.degree(v);
    if (df == 0) return f.pow(dg);
    if (dg == 0) return g.pow(df);
    Poly<K> A = f, B = g;
    K s(1);
    if (df < dg) {
        std::swap(A, B);
        if ((df & 1) && (dg & 1)) s = -s;
    }
    Poly<K> gg(K(1)), h(K(1));
    while (true) {
        int da = A.degree(v), db = B.degree(v);
        int delta = da - db;
        if ((da & 1) && (db & 1)) s = -s;
        Poly<K> R = prem(A, B, v);
        A = B;
        if (R.is_zero()) return Poly<K>();
        B = div_exact(R, gg * h.pow(delta));
        gg = A.lc_in(v);
        if (delta == 0) {
        } else if (delta == 1) {
            h = gg;
        } else {
            h = div_exact(gg.pow(delta), h.pow(delta - 1));
        }
        if (B.degree(v) == 0) {
            int d = A.degree(v);
            // h <- h^(1-d) * lc(B)^d
            Poly<K> res = div_exact(B.pow(d), h.pow(d - 1));
            return res.scaled(s);
        }
    }
}

template <class K>
Poly<K> discriminant(const Poly<K>& f, Var v) {
    int n = f.degree(v);
    if (n < 1) throw MathError("discriminant of a polynomial of degree < 1");
    Poly<K> r = resultant(f, f.derivative(v), v);
    Poly<K> d = div_exact(r, f.lc_in(v));
    if ((n * (n - 1) / 2) % 2) d = -d;
    return d;
}

template <class K>
std::pair<K, Poly<K>> normalize(const Poly<K>& f) {
    if (f.is_zero()) return {K(1), f};
    K lc = f.leading_coeff();
    if (lc.is_one()) return {lc, f};
    return {lc, f.scaled(lc.inverse())};
}

template <class K>
std::pair<K, Poly<K>> normalize_in(const Poly<K>& f, Var v) {
    if (f.is_zero()) return {K(1), f};
    K lc = f.lc_in(v).leading_coeff();
    if (lc.is_one()) return {lc, f};
    return {lc, f.scaled(lc.inverse())};
}

template <class K>
Poly<K> content_in(const Poly<K>& f, Var v) {
    if (f.is_zero()) return f;
    auto cs = f.coeffs_in(v);
    // start with the smallest coefficient
    std::sort(cs.begin(), cs.end(), [](const Poly<K>& a, const Poly<K>& b) {
        if (a.is_zero() != b.is_zero()) return !a.is_zero();
        return a.nterms() < b.nterms();
    });
    Poly<K> g;
    for (const auto& c : cs) {
        if (c.is_zero()) continue;
        g = g.is_zero() ? normalize(c).second : gcd(g, c);
        if (g.is_constant()) return Poly<K>(K(1));
    }
    return g;
}

template <class K>
Poly<K> primitive_in(const Poly<K>& f, Var v) {
    if (f.is_zero()) return f;
    Poly<K> c = content_in(f, v);
    Poly<K> p = c.is_constant() ? f : div_exact(f, c);
    return normalize_in(p, v).second;
}

template <class K>
Poly<K> gcd(const Poly<K>& f, const Poly<K>& g) {
    if (f.is_zero()) return normalize(g).second;
    if (g.is_zero()) return normalize(f).second;
    if (f.is_constant() || g.is_constant()) return Poly<K>(K(1));
    std::vector<Var> common;
    std::set_intersection(f.vars().begin(), f.vars().end(), g.vars().begin(), g.vars().end(),
                          std::back_inserter(common));
    if (common.empty()) return Poly<K>(K(1));
    if (f == g) return normalize(f).second;
    // main variable: the common one with the smallest maximal degree
    Var v = common[0];
    int best = 1 << 30;
    for (Var x : common) {
        int d = std::max(f.degree(x), g.degree(x));
        if (d < best) {
            best = d;
            v = x;
        }
    }
    Poly<K> cf = content_in(f, v), cg = content_in(g, v);
    Poly<K> c = gcd(cf, cg);
    Poly<K> pf = cf.is_constant() ? f : div_exact(f, cf);
    Poly<K> pg = cg.is_constant() ? g : div_exact(g, cg);
    Poly<K> h;
    if (pf.degree(v) == 0 || pg.degree(v) == 0) {
        h = Poly<K>(K(1));
    } else {
        h = gcd_in(pf, pg, v);
    }
    return normalize(c * h).second;
}

template <class K>
Poly<K> gcd_in(const Poly<K>& f, const Poly<K>& g, Var v) {
    if (f.is_zero() && g.is_zero()) return f;
    if (f.is_zero()) return primitive_in(g, v);
    if (g.is_zero()) return primitive_in(f, v);
    int df = f.degree(v), dg = g.degree(v);
    if (df == 0 || dg == 0) return Poly<K>(K(1));
    if (f == g) return primitive_in(f, v);
    int bound = specialized_gcd_degree(f, g, v);
    if (bound == 0) return Poly<K>(K(1));
    if (bound < 0 && f.vars().size() == 1 && g.vars().size() == 1) {
        // purely univariate: Euclid over K directly
        std::vector<K> a, b;
        for (auto& c : f.coeffs_in(v)) a.push_back(c.constant_value());
        for (auto& c : g.coeffs_in(v)) b.push_back(c.constant_value());
        auto r = kgcd(a, b);
        std::vector<Poly<K>> cs;
        for (auto& c : r) cs.push_back(Poly<K>(c));
        return normalize_in(Poly<K>::from_coeffs(v, cs), v).second;
    }
    // try the smaller input as the answer when the degree bound allows it
    const Poly<K>& small = df <= dg ? f : g;
    const Poly<K>& large = df <= dg ? g : f;
    if (bound == small.degree(v)) {
        Poly<K> ps = primitive_in(small, v);
        if (divide_exact(large, ps)) return ps;
    }
    if (auto G = interp_gcd(f, g, v)) return normalize_in(*G, v).second;
    Poly<K> last = prs_last(f, g, v);
    if (last.degree(v) == 0) return Poly<K>(K(1));
    return primitive_in(last, v);
}

template <class K>
SquarefreeDecomposition<K> squarefree_decompose(const Poly<K>& f, Var v) {
    if (f.is_zero()) throw MathError("squarefree decomposition of zero");
    SquarefreeDecomposition<K> out;
    if (f.degree(v) == 0) {
        out.unit = f;
        return out;
    }
    // split off the power of v first: cheap and very common
    int k = f.min_degree(v);
    Poly<K> P = primitive_in(k ? f.shift_down(v, k) : f, v);
    std::vector<std::pair<Poly<K>, int>> parts;
    if (P.degree(v) > 0) {
        Poly<K> dP = P.derivative(v);
        Poly<K> a0 = gcd_in(P, dP, v);
        Poly<K> b = a0.is_constant() ? P : div_exact(P, a0);
        Poly<K> c = a0.is_constant() ? dP : div_exact(dP, a0);
        Poly<K> d = c - b.derivative(v);
        for (int i = 1; b.degree(v) > 0; ++i) {
            Poly<K> a = d.is_zero() ? primitive_in(b, v) : gcd_in(b, d, v);
            if (a.degree(v) > 0) parts.emplace_back(normalize_in(a, v).second, i);
            if (a.degree(v) == 0) {
                // b and d coprime means nothing of multiplicity i remains
                c = d;
            } else {
                b = div_exact(b, a);
                c = div_exact(d, a);
            }
            d = c - b.derivative(v);
        }
    }
    if (k) {
        // merge v^k into the list
        Poly<K> x = Poly<K>::variable(v);
        bool merged = false;
        for (auto& [p, m] : parts)
            if (p == x) {
                m += k;
                merged = true;
            }
        if (!merged) parts.emplace_back(x, k);
        std::stable_sort(parts.begin(), parts.end(), [](const auto& a, const auto& b) { return a.second < b.second; });
    }
    Poly<K> prod(K(1));
    for (auto& [p, m] : parts) prod = prod * p.pow(static_cast<unsigned>(m));
    out.unit = div_exact(f, prod);
    if (out.unit.contains(v)) throw InconsistencyError("squarefree decomposition left a non-unit cofactor");
    out.parts = std::move(parts);
    return out;
}

template <class K>
bool poly_less(const Poly<K>& a, const Poly<K>& b) {
    if (a.total_degree() != b.total_degree()) return a.total_degree() < b.total_degree();
    if (a.nterms() != b.nterms()) return a.nterms() < b.nterms();
    return a.str() < b.str();
}

template <class K>
std::vector<Poly<K>> coprime_refine(const std::vector<Poly<K>>& parts, Var v) {
    std::vector<Poly<K>> work;
    for (const auto& p : parts) {
        if (p.is_zero()) throw MathError("coprime_refine: zero input");
        if (p.degree(v) > 0) work.push_back(primitive_in(p, v));
    }
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t i = 0; i < work.size() && !changed; ++i) {
            for (std::size_t j = i + 1; j < work.size() && !changed; ++j) {
                Poly<K> g = gcd_in(work[i], work[j], v);
                if (g.degree(v) == 0) continue;
                Poly<K> x = div_exact(work[i], g), y = div_exact(work[j], g);
                std::vector<Poly<K>> next;
                for (std::size_t k = 0; k < work.size(); ++k)
                    if (k != i && k != j) next.push_back(work[k]);
                next.push_back(g);
                if (x.degree(v) > 0) next.push_back(primitive_in(x, v));
                if (y.degree(v) > 0) next.push_back(primitive_in(y, v));
                work = std::move(next);
                changed = true;
            }
        }
    }
    std::sort(work.begin(), work.end(), poly_less<K>);
    return work;
}

template <class K>
int valuation(const Poly<K>& f, const Poly<K>& p) {
    if (f.is_zero()) return -1;
    int n = 0;
    Poly<K> r = f;
    while (true) {
        auto q = divide_exact(r, p);
        if (!q) return n;
        r = std::move(*q);
        ++n;
    }
}

namespace {
bool coeff_sqrt(const Rational& c, Rational* r) { return c.is_square(r); }
bool coeff_sqrt(const AlgebraicNumber& c, AlgebraicNumber* r) { return c.is_square(r); }
} // namespace

// classical top-down square root in graded-lex order
template <class K>
std::optional<Poly<K>> sqrt_exact(const Poly<K>& f) {
    if (f.is_zero()) return Poly<K>();
    const auto& lt = f.terms()[0];
    K c;
    if (!coeff_sqrt(lt.second, &c)) return std::nullopt;
    std::vector<std::pair<Var, unsigned>> half;
    for (std::size_t i = 0; i < f.vars().size(); ++i) {
        if (lt.first.e[i] % 2) return std::nullopt;
        if (lt.first.e[i]) half.emplace_back(f.vars()[i], lt.first.e[i] / 2);
    }
    Poly<K> root = Poly<K>::monomial(c, half);
    Poly<K> lead2 = root.scaled(K(2));
    Poly<K> rem = f - root * root;
    // the leading term of rem strictly decreases, and q must stay divisible, so this stops
    while (!rem.is_zero()) {
        Poly<K> lead_rem = Poly<K>::from_terms(rem.vars(), {rem.terms()[0]});
        auto q = divide_exact(lead_rem, lead2);
        if (!q) return std::nullopt;
        root += *q;
        rem = f - root * root;
    }
    return root;
}

#define K3_INSTANTIATE(K)                                                                   \
    template std::optional<Poly<K>> divide_exact(const Poly<K>&, const Poly<K>&);          \
    template Poly<K> div_exact(const Poly<K>&, const Poly<K>&);                            \
    template Poly<K> prem(const Poly<K>&, const Poly<K>&, Var);                            \
    template Poly<K> resultant(const Poly<K>&, const Poly<K>&, Var);                       \
    template Poly<K> discriminant(const Poly<K>&, Var);                                    \
    template Poly<K> content_in(const Poly<K>&, Var);                                      \
    template Poly<K> primitive_in(const Poly<K>&, Var);                                    \
    template std::pair<K, Poly<K>> normalize(const Poly<K>&);                              \
    template std::pair<K, Poly<K>> normalize_in(const Poly<K>&, Var);                      \
    template Poly<K> gcd(const Poly<K>&, const Poly<K>&);                                  \
    template Poly<K> gcd_in(const Poly<K>&, const Poly<K>&, Var);                          \
    template SquarefreeDecomposition<K> squarefree_decompose(const Poly<K>&, Var);         \
    template std::vector<Poly<K>> coprime_refine(const std::vector<Poly<K>>&, Var);        \
    template int valuation(const Poly<K>&, const Poly<K>&);                                \
    template bool poly_less(const Poly<K>&, const Poly<K>&);                               \
    template std::optional<Poly<K>> sqrt_exact(const Poly<K>&);

K3_INSTANTIATE(Rational)
K3_INSTANTIATE(AlgebraicNumber)

} // namespace k3
