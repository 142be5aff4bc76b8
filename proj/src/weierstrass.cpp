#include "k3fib/weierstrass.hpp"

#include <algorithm>

namespace k3 {

template <class K>
Poly<K> WeierstrassModel<K>::delta_int() const {
    return A.pow(3).scaled(K(4)) + B.pow(2).scaled(K(27));
}

template <class K>
void WeierstrassModel<K>::check() const {
    if (chi != 1 && chi != 2) throw MathError("Euler grade must be 1 or 2");
    if (delta_int().is_zero()) throw MathError("not an elliptic surface: 4A^3+27B^2 vanishes identically");
    if (A.degree(t) > 4 * chi || B.degree(t) > 6 * chi)
        throw MathError("Weierstrass model exceeds the degree bounds (" + std::to_string(4 * chi) + ", " +
                        std::to_string(6 * chi) + ") in " + var_name(t));
}

template <class K>
Invariants<K> invariants(const WeierstrassModel<K>& m) {
    Invariants<K> r;
    r.delta_int = m.delta_int();
    if (r.delta_int.is_zero()) throw MathError("not an elliptic surface: 4A^3+27B^2 vanishes identically");
    r.c4 = m.A.scaled(K(-48));
    r.c6 = m.B.scaled(K(-864));
    r.delta_std = r.delta_int.scaled(K(-16));
    if (r.c4.pow(3) - r.c6.pow(2) != r.delta_std.scaled(K(1728)))
        throw InconsistencyError("c4^3 - c6^2 != 1728 delta");
    return r;
}

template <class K>
std::pair<Poly<K>, Poly<K>> j_invariant(const WeierstrassModel<K>& m) {
    auto inv = invariants(m);
    Poly<K> num = inv.c4.pow(3), den = inv.delta_std;
    if (num.is_zero()) return {Poly<K>(), Poly<K>(1)};
    Poly<K> g = gcd(num, den);
    num = div_exact(num, g);
    den = div_exact(den, g);
    auto [u, dn] = normalize(den);
    return {num.scaled(u.inverse()), dn};
}

namespace {

// valuation with zero -> "large"
template <class K>
int vcap(const Poly<K>& f, const Poly<K>& p, int cap) {
    if (f.is_zero()) return cap;
    return std::min(valuation(f, p), cap);
}

template <class K>
std::vector<Poly<K>> squarefree_places(const Poly<K>& f, Var t) {
    std::vector<Poly<K>> out;
    if (f.is_zero() || f.degree(t) <= 0) return out;
    for (auto& [p, m] : squarefree_decompose(f, t).parts) out.push_back(p);
    return out;
}

} // namespace

template <class K>
WeierstrassModel<K> minimalize(const WeierstrassModel<K>& m) {
    WeierstrassModel<K> r = m;
    if (r.delta_int().is_zero()) throw MathError("not an elliptic surface: 4A^3+27B^2 vanishes identically");
    // only common zeros of A and B can be non-minimal
    std::vector<Poly<K>> cand;
    if (r.A.is_zero()) cand = squarefree_places(r.B, r.t);
    else if (r.B.is_zero()) cand = squarefree_places(r.A, r.t);
    else {
        Poly<K> g = gcd_in(r.A, r.B, r.t);
        cand = squarefree_places(g, r.t);
    }
    for (const auto& p : cand) {
        Poly<K> p4 = p.pow(4), p6 = p.pow(6);
        while (vcap(r.A, p, 4) >= 4 && vcap(r.B, p, 6) >= 6) {
            if (!r.A.is_zero()) r.A = div_exact(r.A, p4);
            if (!r.B.is_zero()) r.B = div_exact(r.B, p6);
        }
    }
    // constants in t, but possibly parameter-dependent, are units: strip a common
    // parameter factor u with u^4 | A and u^6 | B is not attempted (harmless for classification)
    int da = r.A.is_zero() ? -1 : r.A.degree(r.t), db = r.B.is_zero() ? -1 : r.B.degree(r.t);
    if (da > 4 * r.chi || db > 6 * r.chi)
        throw MathError("Weierstrass model violates the degree bounds at infinity for chi = " + std::to_string(r.chi));
    return r;
}

template <class K>
bool minimal_at_infinity(const WeierstrassModel<K>& m) {
    int da = m.A.is_zero() ? -1 : m.A.degree(m.t), db = m.B.is_zero() ? -1 : m.B.degree(m.t);
    return !((m.A.is_zero() || 4 * m.chi - da >= 4) && (m.B.is_zero() || 6 * m.chi - db >= 6));
}

template <class K>
WeierstrassModel<K> quadratic_base_change(const WeierstrassModel<K>& m, const Poly<K>& mu1, Var tau) {
    if (m.chi != 1) throw MathError("quadratic base change expects a rational elliptic surface (chi = 1)");
    WeierstrassModel<K> mm = minimalize(m);
    Poly<K> sub = Poly<K>::variable(tau).pow(2) + mu1;
    WeierstrassModel<K> r;
    r.t = tau;
    r.chi = 2;
    r.A = mm.A.substitute(m.t, sub);
    r.B = mm.B.substitute(m.t, sub);
    // a reduced branch fibre never needs minimalization at tau = 0 or at infinity
    Poly<K> tp = Poly<K>::variable(tau);
    if (vcap(r.A, tp, 4) >= 4 && vcap(r.B, tp, 6) >= 6) throw MathError("branch fiber not reduced at " + var_name(m.t) + " = " + mu1.str());
    r = minimalize(r);
    if (!minimal_at_infinity(r)) throw MathError("branch fiber not reduced at infinity");
    return r;
}

template <class K>
std::pair<Poly<K>, Poly<K>> quartic_IJ(const Poly<K>& q, Var x) {
    if (q.degree(x) > 4) throw MathError("quartic model has degree > 4 in " + var_name(x));
    Poly<K> a = q.coeff_of(x, 4), b = q.coeff_of(x, 3), c = q.coeff_of(x, 2), d = q.coeff_of(x, 1), e = q.coeff_of(x, 0);
    Poly<K> I = (a * e).scaled(K(12)) - (b * d).scaled(K(3)) + c * c;
    Poly<K> J = (a * c * e).scaled(K(72)) + (b * c * d).scaled(K(9)) - (a * d * d).scaled(K(27)) -
                (e * b * b).scaled(K(27)) - c.pow(3).scaled(K(2));
    return {I, J};
}

namespace {

template <class K>
void require_section(const QuarticModel<K>& qm) {
    int dx = qm.q.degree(qm.x);
    if (dx <= 2) throw MathError("degenerate pencil: quartic has degree <= 2 in " + var_name(qm.x));
    using S = typename QuarticModel<K>::Section;
    switch (qm.section) {
    case S::none:
        throw MathError("no rational point: no section declared and leading coefficient not a square");
    case S::at_infinity:
        if (dx != 4 || !sqrt_exact(qm.q.lc_in(qm.x))) throw MathError("declared section at infinity but leading coefficient is not a square");
        break;
    case S::infinite_root:
        if (dx != 3) throw MathError("declared root at infinity but quartic has degree 4");
        break;
    case S::point: {
        Poly<K> lin = qm.den * Poly<K>::variable(qm.x) - qm.num;
        if (qm.den.is_zero() || !divide_exact(qm.q, lin)) throw MathError("declared section is not a root of the quartic");
        break;
    }
    }
}

// long-form coefficients -> short model
template <class K>
WeierstrassModel<K> from_long(const Poly<K>& a1, const Poly<K>& a2, const Poly<K>& a3, const Poly<K>& a4,
                              const Poly<K>& a6, Var t, int chi) {
    Poly<K> b2 = a1 * a1 + a2.scaled(K(4));
    Poly<K> b4 = a4.scaled(K(2)) + a1 * a3;
    Poly<K> b6 = a3 * a3 + a6.scaled(K(4));
    Poly<K> c4 = b2 * b2 - b4.scaled(K(24));
    Poly<K> c6 = -b2.pow(3) + (b2 * b4).scaled(K(36)) - b6.scaled(K(216));
    WeierstrassModel<K> r;
    r.t = t;
    r.chi = chi;
    r.A = c4.scaled(K(Rational(-1, 48)));
    r.B = c6.scaled(K(Rational(-1, 864)));
    return r;
}

// Q(y) with Q(0) = 0 obtained by moving the section to y = 0; also returns the scaling D
template <class K>
std::pair<Poly<K>, Poly<K>> root_at_origin(const QuarticModel<K>& qm, Var y) {
    using S = typename QuarticModel<K>::Section;
    Poly<K> Y = Poly<K>::variable(y);
    if (qm.section == S::infinite_root) {
        // y = 1/x
        Poly<K> Q = qm.q.substitute(qm.x, Y).reverse_in(y, 4);
        return {Q, Poly<K>(1)};
    }
    // x = (N + y) / D, Q = D^4 q(x)
    const Poly<K>& D = qm.den;
    auto co = qm.q.coeffs_in(qm.x);
    Poly<K> Q;
    Poly<K> lin = qm.num + Y;
    for (int i = 0; i < static_cast<int>(co.size()); ++i)
        Q += co[i] * lin.pow(static_cast<unsigned>(i)) * D.pow(static_cast<unsigned>(4 - i));
    return {Q, D};
}

} // namespace

template <class K>
WeierstrassModel<K> quartic_to_weierstrass(const QuarticModel<K>& qm, int chi) {
    require_section(qm);
    auto [I, J] = quartic_IJ(qm.q, qm.x);
    WeierstrassModel<K> r;
    r.t = qm.t;
    r.chi = chi;
    r.A = I.scaled(K(-27));
    r.B = J.scaled(K(-27));
    if (r.delta_int().is_zero()) throw MathError("not an elliptic surface: the quartic has a repeated factor");
    return minimalize(r);
}

template <class K>
WeierstrassModel<K> quartic_to_weierstrass_via_point(const QuarticModel<K>& qm, int chi) {
    require_section(qm);
    using S = typename QuarticModel<K>::Section;
    if (qm.section == S::at_infinity) {
        // reversed quartic e u^4 + d u^3 + c u^2 + b u + s^2, s^2 = leading coefficient
        Poly<K> s = *sqrt_exact(qm.q.lc_in(qm.x));
        Poly<K> b = qm.q.coeff_of(qm.x, 3), c = qm.q.coeff_of(qm.x, 2), d = qm.q.coeff_of(qm.x, 1),
                e = qm.q.coeff_of(qm.x, 0);
        // long form scaled by 4 s^2 to stay polynomial: (x, y) -> (4 s^2 x, 8 s^3 y)
        Poly<K> s2 = s * s;
        Poly<K> a1 = b.scaled(K(2));                        // (b/s) * 2s
        Poly<K> a2 = c.scaled(K(4)) * s2 - b * b;           // (c - b^2/4s^2) * 4s^2
        Poly<K> a3 = d.scaled(K(16)) * s2 * s2;             // 2 s d * 8 s^3
        Poly<K> a4 = e.scaled(K(-64)) * s2 * s2 * s2;       // -4 s^2 e * 16 s^4
        Poly<K> a6 = a2 * a4;                               // a2 a4 * 64 s^6
        return from_long(a1, a2, a3, a4, a6, qm.t, chi);
    }
    Var y = intern("y");
    auto [Q, D] = root_at_origin(qm, y);
    Poly<K> A1 = Q.coeff_of(y, 1), A2 = Q.coeff_of(y, 2), A3 = Q.coeff_of(y, 3), A4 = Q.coeff_of(y, 4);
    if (A1.is_zero()) throw MathError("section is a repeated root of the quartic");
    Poly<K> zero;
    return from_long(zero, A2, zero, A1 * A3, A1 * A1 * A4, qm.t, chi);
}

namespace {

// reduce P(u, v) modulo v^2 - Q(u)
template <class K>
Poly<K> reduce_square(const Poly<K>& P, Var v, const Poly<K>& Q) {
    auto co = P.coeffs_in(v);
    Poly<K> r;
    Poly<K> V = Poly<K>::variable(v);
    for (int k = 0; k < static_cast<int>(co.size()); ++k) {
        Poly<K> term = co[k] * Q.pow(static_cast<unsigned>(k / 2));
        if (k % 2) term *= V;
        r += term;
    }
    return r;
}

} // namespace

template <class K>
bool quartic_point_roundtrip(const QuarticModel<K>& qm) {
    require_section(qm);
    using S = typename QuarticModel<K>::Section;
    Var X = intern("x2"), Y = intern("x1"), w = intern("w");
    Poly<K> Xv = Poly<K>::variable(X), Yv = Poly<K>::variable(Y), W = Poly<K>::variable(w);
    Poly<K> xv = Poly<K>::variable(qm.x);
    if (qm.section == S::at_infinity) {
        // reversed quartic v^2 = e u^4 + d u^3 + c u^2 + b u + s^2 with u = 1/x, v = w/x^2;
        // x = X/u^2, y = Y/(2s u^3); the long-form equation times 4 s^2 u^6
        Poly<K> s = *sqrt_exact(qm.q.lc_in(qm.x));
        Poly<K> b = qm.q.coeff_of(qm.x, 3), c = qm.q.coeff_of(qm.x, 2), d = qm.q.coeff_of(qm.x, 1),
                e = qm.q.coeff_of(qm.x, 0);
        Var u = intern("u"), v = intern("z");
        Poly<K> U = Poly<K>::variable(u), V = Poly<K>::variable(v);
        Poly<K> Qu = e * U.pow(4) + d * U.pow(3) + c * U.pow(2) + b * U + s * s;
        Poly<K> s2 = s * s, u2 = U * U, u3 = u2 * U, u4 = u2 * u2, u6 = u3 * u3;
        Poly<K> Xn = s.scaled(K(2)) * (V + s) + b * U;
        Poly<K> Yn = s2 * s.scaled(K(8)) * (V + s) + s2.scaled(K(4)) * (b * U + c * u2) - b * b * u2;
        Poly<K> a2s = c.scaled(K(4)) * s2 - b * b; // 4 s^2 a2
        Poly<K> E = Yn * Yn + (b * Xn * Yn * U).scaled(K(2)) + (d * Yn * u3).scaled(K(4)) * s2 -
                    (Xn.pow(3) * s2).scaled(K(4)) - a2s * Xn * Xn * u2 + (e * Xn * u4).scaled(K(16)) * s2 * s2 +
                    (a2s * e * u6).scaled(K(4)) * s2;
        return reduce_square(E, v, Qu).is_zero();
    }
    Var y = intern("y");
    auto [Q, D] = root_at_origin(qm, y);
    Poly<K> A1 = Q.coeff_of(y, 1), A2 = Q.coeff_of(y, 2), A3 = Q.coeff_of(y, 3), A4 = Q.coeff_of(y, 4);
    Poly<K> cubic = Xv.pow(3) + A2 * Xv * Xv + A1 * A3 * Xv + A1 * A1 * A4;
    if (qm.section == S::point) {
        // forward: yy = D x - N, X = A1/yy, Y = A1 D^2 w/yy^2:
        // yy^4 (Y^2 - cubic(X)) == A1^2 D^4 (w^2 - q(x))
        Poly<K> yy = D * xv - qm.num;
        Poly<K> lhs = (A1 * D * D * W).pow(2) - A1.pow(3) * yy - A2 * A1 * A1 * yy.pow(2) -
                      A1 * A1 * A3 * yy.pow(3) - A1 * A1 * A4 * yy.pow(4);
        if (lhs != A1 * A1 * D.pow(4) * (W * W - qm.q)) return false;
    }
    // inverse: yy = A1/X, D^2 w = Y yy^2/A1, so X^4 (D^4 w^2 - Q(yy)) = A1^2 Y^2 - X^4 Q(A1/X)
    Poly<K> QX4;
    for (int k = 1; k <= 4; ++k)
        QX4 += Q.coeff_of(y, k) * A1.pow(static_cast<unsigned>(k)) * Xv.pow(static_cast<unsigned>(4 - k));
    return A1 * A1 * Yv * Yv - QX4 == A1 * A1 * (Yv * Yv - cubic);
}

template struct WeierstrassModel<Rational>;
template struct WeierstrassModel<AlgebraicNumber>;

#define K3_W_INSTANTIATE(K)                                                                          \
    template Invariants<K> invariants(const WeierstrassModel<K>&);                                   \
    template std::pair<Poly<K>, Poly<K>> j_invariant(const WeierstrassModel<K>&);                    \
    template WeierstrassModel<K> minimalize(const WeierstrassModel<K>&);                             \
    template bool minimal_at_infinity(const WeierstrassModel<K>&);                                   \
    template WeierstrassModel<K> quadratic_base_change(const WeierstrassModel<K>&, const Poly<K>&, Var); \
    template std::pair<Poly<K>, Poly<K>> quartic_IJ(const Poly<K>&, Var);                            \
    template WeierstrassModel<K> quartic_to_weierstrass(const QuarticModel<K>&, int);                \
    template WeierstrassModel<K> quartic_to_weierstrass_via_point(const QuarticModel<K>&, int);      \
    template bool quartic_point_roundtrip(const QuarticModel<K>&);

K3_W_INSTANTIATE(Rational)
K3_W_INSTANTIATE(AlgebraicNumber)

} // namespace k3
