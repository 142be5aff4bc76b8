#include "k3fib/conicbundle.hpp"

#include <algorithm>

namespace k3 {

template <class K>
std::optional<int> homogeneous_degree(const Poly<K>& p, const std::vector<Var>& vars) {
    if (p.is_zero()) return std::nullopt;
    std::vector<int> idx;
    for (std::size_t i = 0; i < p.vars().size(); ++i)
        if (std::find(vars.begin(), vars.end(), p.vars()[i]) != vars.end()) idx.push_back(static_cast<int>(i));
    std::optional<int> d;
    for (const auto& [m, c] : p.terms()) {
        int s = 0;
        for (int i : idx) s += m.e[static_cast<std::size_t>(i)];
        if (d && *d != s) return std::nullopt;
        d = s;
    }
    return d;
}

template <class K>
void BranchSextic<K>::check() const {
    std::vector<Var> v{xs.x0, xs.x1, xs.x2};
    if (homogeneous_degree(f3, v) != 3 || homogeneous_degree(g3, v) != 3)
        throw MathError("branch sextic: both factors must be cubic forms in the plane coordinates");
    if (sqrt_exact(f3 * g3)) throw MathError("branch sextic is a square: the double cover is not normal");
}

template <class K>
void ConicBundlePencil<K>::check(const PlaneCoords& xs) {
    auto d = homogeneous_degree(h, {xs.x0, xs.x1, xs.x2});
    if (!d || *d < 1) throw MathError("pencil is not a form of positive degree in the plane coordinates");
    if (h.degree(tau) != 1) throw MathError("pencil must be linear in " + var_name(tau));
    if (*d > 3) throw MathError("pencils of plane degree " + std::to_string(*d) + " > 3 are not supported");
    e = *d;
}

namespace {

template <class K>
std::map<Var, Poly<K>> bindings(const PlaneCoords& xs, const LinearChange<K>& m) {
    return {{xs.x0, m[0]}, {xs.x1, m[1]}, {xs.x2, m[2]}};
}

// sum co[i] x0^i x2^(d - i)
template <class K>
Poly<K> homogenize(const Poly<K>& f, Var x0, Var x2, int d) {
    auto co = f.coeffs_in(x0);
    Poly<K> X0 = Poly<K>::variable(x0), X2 = Poly<K>::variable(x2), r;
    for (int i = 0; i < static_cast<int>(co.size()); ++i)
        if (!co[i].is_zero()) r += co[i] * X0.pow(static_cast<unsigned>(i)) * X2.pow(static_cast<unsigned>(d - i));
    return r;
}

template <class K>
Poly<K> product(const std::vector<Poly<K>>& v) {
    Poly<K> r(1);
    for (const auto& p : v) r *= p;
    return r;
}

} // namespace

template <class K>
BranchSextic<K> transform(const BranchSextic<K>& s, const LinearChange<K>& m) {
    auto b = bindings(s.xs, m);
    return {s.f3.substitute(b), s.g3.substitute(b), s.xs};
}

template <class K>
ConicBundlePencil<K> transform(const ConicBundlePencil<K>& h, const PlaneCoords& xs, const LinearChange<K>& m) {
    ConicBundlePencil<K> r = h;
    r.h = h.h.substitute(bindings(xs, m));
    return r;
}

template <class K>
std::pair<BranchSextic<K>, ConicBundlePencil<K>> normalize_basepoint(const BranchSextic<K>& s,
                                                                   const ConicBundlePencil<K>& h,
                                                                   const std::array<K, 3>& p) {
    const PlaneCoords& xs = s.xs;
    Poly<K> X0 = Poly<K>::variable(xs.x0), X1 = Poly<K>::variable(xs.x1), X2 = Poly<K>::variable(xs.x2);
    LinearChange<K> m;
    // columns: the image of (0:1:0) is p, the other two are unit vectors completing a basis
    if (!p[1].is_zero())
        m = {X0 + X1.scaled(p[0]), X1.scaled(p[1]), X2 + X1.scaled(p[2])};
    else if (!p[2].is_zero())
        m = {X0 + X1.scaled(p[0]), X2, X1.scaled(p[2])};
    else if (!p[0].is_zero())
        m = {X1.scaled(p[0]), X0, X2};
    else
        throw MathError("basepoint (0:0:0) is not a point");
    return {transform(s, m), transform(h, xs, m)};
}

template <class K>
std::vector<Poly<K>> project_resultant_factors(const BranchSextic<K>& s, const ConicBundlePencil<K>& h) {
    const PlaneCoords& xs = s.xs;
    int dh = h.h.degree(xs.x1);
    if (dh <= 0) throw MathError("projection-degenerate: the pencil does not involve " + var_name(xs.x1));
    if (dh > 1) throw MathError("pencil members are not parametrized by projection from (0:1:0): degree " + std::to_string(dh) + " in " + var_name(xs.x1));
    // h = x1 L + Q; the member is (x0 L : -Q : x2 L) over the projection line
    Poly<K> L = h.h.coeff_of(xs.x1, 1), Q = h.h.coeff_of(xs.x1, 0);
    std::map<Var, Poly<K>> param{{xs.x0, Poly<K>::variable(xs.x0) * L}, {xs.x1, -Q}, {xs.x2, Poly<K>::variable(xs.x2) * L}};
    // coordinate lines are split off so their images stay separate factors
    std::vector<Poly<K>> pieces;
    for (Poly<K> f : {s.f3, s.g3}) {
        for (Var v : {xs.x0, xs.x1, xs.x2}) {
            int k = f.min_degree(v);
            if (k <= 0) continue;
            f = f.shift_down(v, k);
            for (int i = 0; i < k; ++i) pieces.push_back(Poly<K>::variable(v));
        }
        if (homogeneous_degree(f, {xs.x0, xs.x1, xs.x2}) > 0) pieces.push_back(f);
        else pieces.back() *= f;
    }
    std::vector<Poly<K>> out;
    for (const auto& f : pieces) {
        Poly<K> res = f.degree(xs.x1) <= 0 ? f : resultant(f, h.h, xs.x1);
        if (res.is_zero()) throw MathError("pencil shares a component with the branch curve");
        // the resultant misses the intersections at (0:1:0), which sit over L = 0
        int deficit = *homogeneous_degree(f, {xs.x0, xs.x1, xs.x2}) - std::max(f.degree(xs.x1), 0);
        Poly<K> pulled = f.substitute(param);
        Poly<K> fixed = res * L.pow(static_cast<unsigned>(deficit));
        if (fixed != pulled && fixed != -pulled) throw InconsistencyError("projection resultant disagrees with the parametrization");
        out.push_back(std::move(pulled));
    }
    return out;
}

template <class K>
Poly<K> project_resultant(const BranchSextic<K>& s, const ConicBundlePencil<K>& h) {
    return product(project_resultant_factors(s, h));
}

template <class K>
SquareSplit<K> square_split(const std::vector<Poly<K>>& r_factors, const PlaneCoords& xs) {
    Var x0 = xs.x0, x2 = xs.x2;
    // work in the chart x2 = 1 and count the lost powers of x2 by homogeneity
    std::vector<Poly<K>> u;
    std::vector<Poly<K>> parts;
    int j = 0;
    for (const auto& r : r_factors) {
        auto d = homogeneous_degree(r, {x0, x2});
        if (!d) throw MathError("resultant is zero or not a form in " + var_name(x0) + ", " + var_name(x2));
        Poly<K> v = r.evaluate(x2, K(1));
        int dv = v.degree(x0);
        j += *d - std::max(dv, 0);
        if (dv > 0)
            for (auto& [p, m] : squarefree_decompose(v, x0).parts) parts.push_back(p);
        u.push_back(std::move(v));
    }
    std::vector<Poly<K>> base;
    for (auto& p : coprime_refine(parts, x0)) base.push_back(primitive_in(p, x0));

    SquareSplit<K> sp;
    sp.a = Poly<K>::variable(x2).pow(static_cast<unsigned>(j / 2));
    sp.b = Poly<K>::variable(x2).pow(static_cast<unsigned>(j % 2));
    sp.c = Poly<K>(1);
    if (j % 2) sp.odd_parts.push_back(Poly<K>::variable(x2));
    std::vector<int> mult(base.size(), 0);
    for (auto& v : u) {
        Poly<K> rest = v;
        for (std::size_t i = 0; i < base.size(); ++i) {
            int m = valuation(v, base[i]);
            mult[i] += m;
            if (m > 0) rest = div_exact(rest, base[i].pow(static_cast<unsigned>(m)));
        }
        if (rest.degree(x0) > 0) throw InconsistencyError("square_split: refined basis does not cover the resultant");
        sp.c *= rest;
    }
    int deg_b = j % 2;
    for (std::size_t i = 0; i < base.size(); ++i) {
        int d = base[i].degree(x0);
        Poly<K> hb = homogenize(base[i], x0, x2, d);
        if (mult[i] / 2) sp.a *= hb.pow(static_cast<unsigned>(mult[i] / 2));
        if (mult[i] % 2) {
            sp.b *= hb;
            sp.odd_parts.push_back(hb);
            deg_b += d;
        }
    }
    if (deg_b != 4)
        throw MathError("not a conic bundle: the residual has degree " + std::to_string(deg_b) + " in (" +
                        var_name(x0) + ":" + var_name(x2) + "), expected 4");
    return sp;
}

namespace {

// a root x = num/den of a factor in the chart (x, other = 1)
template <class K>
std::optional<std::pair<Poly<K>, Poly<K>>> rational_root(const Poly<K>& form, Var x, Var other) {
    Poly<K> f = form.evaluate(other, K(1));
    int d = f.degree(x);
    if (d == 1) return std::make_pair(-f.coeff_of(x, 0), f.coeff_of(x, 1));
    if (d == 2) {
        Poly<K> u = f.coeff_of(x, 2), v = f.coeff_of(x, 1), w = f.coeff_of(x, 0);
        if (auto s = sqrt_exact(v * v - (u * w).scaled(K(4)))) return std::make_pair(*s - v, u.scaled(K(2)));
        if ((v * v - (u * w).scaled(K(4))).is_zero()) return std::make_pair(-v, u.scaled(K(2)));
    }
    return std::nullopt;
}

} // namespace

template <class K>
QuarticModel<K> genus1_model(const SquareSplit<K>& sp, const PlaneCoords& xs, Var tau) {
    using S = typename QuarticModel<K>::Section;
    int d0 = sp.b.degree(xs.x0), d2 = sp.b.degree(xs.x2);
    // chart x = x0 (x2 = 1) unless x2 | b and x0 does not
    bool use_x0 = d0 == 4 || d2 < 4;
    if (std::max(d0, d2) < 3) throw MathError("degenerate residual quartic");
    Var x = use_x0 ? xs.x0 : xs.x2, other = use_x0 ? xs.x2 : xs.x0;

    QuarticModel<K> qm;
    qm.x = x;
    qm.t = tau;
    qm.q = sp.c * sp.b.evaluate(other, K(1));
    int dq = qm.q.degree(x);
    if (dq == 3) {
        qm.section = S::infinite_root;
        return qm;
    }
    if (sqrt_exact(qm.q.lc_in(x))) {
        qm.section = S::at_infinity;
        return qm;
    }
    for (const auto& part : sp.odd_parts) {
        if (auto r = rational_root(part, x, other)) {
            qm.section = S::point;
            qm.num = r->first;
            qm.den = r->second;
            return qm;
        }
    }
    // value at x = 0 a square: the other chart has the section at infinity
    Poly<K> q0 = qm.q.coeff_of(x, 0);
    if (!q0.is_zero() && sqrt_exact(q0)) {
        qm.q = sp.c * sp.b.evaluate(x, K(1));
        qm.x = other;
        qm.section = S::at_infinity;
        return qm;
    }
    qm.section = S::none;
    return qm;
}

template <class K>
PipelineResult<K> run_pipeline(const BranchSextic<K>& s, ConicBundlePencil<K> h) {
    s.check();
    h.check(s.xs);
    PipelineResult<K> out;
    out.split = square_split(project_resultant_factors(s, h), s.xs);
    out.quartic = genus1_model(out.split, s.xs, h.tau);
    out.model = quartic_to_weierstrass(out.quartic, 2);
    out.config = fiber_configuration(out.model);
    if (out.config.euler() != 24) throw InconsistencyError("conic bundle fibration has Euler number " + std::to_string(out.config.euler()));
    return out;
}

#define K3_CB_INSTANTIATE(K)                                                                                  \
    template std::optional<int> homogeneous_degree(const Poly<K>&, const std::vector<Var>&);                   \
    template struct BranchSextic<K>;                                                                           \
    template struct ConicBundlePencil<K>;                                                                      \
    template BranchSextic<K> transform(const BranchSextic<K>&, const LinearChange<K>&);                        \
    template ConicBundlePencil<K> transform(const ConicBundlePencil<K>&, const PlaneCoords&, const LinearChange<K>&); \
    template std::pair<BranchSextic<K>, ConicBundlePencil<K>> normalize_basepoint(                             \
        const BranchSextic<K>&, const ConicBundlePencil<K>&, const std::array<K, 3>&);                         \
    template std::vector<Poly<K>> project_resultant_factors(const BranchSextic<K>&, const ConicBundlePencil<K>&); \
    template Poly<K> project_resultant(const BranchSextic<K>&, const ConicBundlePencil<K>&);                   \
    template SquareSplit<K> square_split(const std::vector<Poly<K>>&, const PlaneCoords&);                     \
    template QuarticModel<K> genus1_model(const SquareSplit<K>&, const PlaneCoords&, Var);                     \
    template PipelineResult<K> run_pipeline(const BranchSextic<K>&, ConicBundlePencil<K>);

K3_CB_INSTANTIATE(Rational)
K3_CB_INSTANTIATE(AlgebraicNumber)

} // namespace k3
