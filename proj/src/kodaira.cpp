#include "k3fib/kodaira.hpp"

#include <algorithm>
#include <cctype>
#include <map>

namespace k3 {

using Kind = KodairaType::Kind;

int KodairaType::euler() const {
    switch (kind) {
    case Kind::In: return n;
    case Kind::Instar: return n + 6;
    case Kind::II: return 2;
    case Kind::III: return 3;
    case Kind::IV: return 4;
    case Kind::IVstar: return 8;
    case Kind::IIIstar: return 9;
    case Kind::IIstar: return 10;
    }
    return 0;
}

bool KodairaType::reduced() const {
    return kind == Kind::In || kind == Kind::II || kind == Kind::III || kind == Kind::IV;
}

std::string KodairaType::str() const {
    switch (kind) {
    case Kind::In: return "I" + std::to_string(n);
    case Kind::Instar: return "I" + std::to_string(n) + "*";
    case Kind::II: return "II";
    case Kind::III: return "III";
    case Kind::IV: return "IV";
    case Kind::IVstar: return "IV*";
    case Kind::IIIstar: return "III*";
    case Kind::IIstar: return "II*";
    }
    return "?";
}

KodairaType KodairaType::parse(std::string_view s) {
    bool star = !s.empty() && s.back() == '*';
    if (star) s.remove_suffix(1);
    if (s == "II") return {star ? Kind::IIstar : Kind::II, 0};
    if (s == "III") return {star ? Kind::IIIstar : Kind::III, 0};
    if (s == "IV") return {star ? Kind::IVstar : Kind::IV, 0};
    if (s.size() >= 2 && s[0] == 'I' && std::all_of(s.begin() + 1, s.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
        int n = std::stoi(std::string(s.substr(1)));
        return {star ? Kind::Instar : Kind::In, n};
    }
    throw MathError("bad Kodaira symbol: " + std::string(s));
}

namespace {
int display_class(const KodairaType& t) {
    switch (t.kind) {
    case Kind::IIstar:
    case Kind::IIIstar:
    case Kind::IVstar: return 0;
    case Kind::Instar: return 1;
    case Kind::In: return 2;
    default: return 3;
    }
}
} // namespace

bool display_before(const KodairaType& a, const KodairaType& b) {
    int ca = std::min(display_class(a), 2), cb = std::min(display_class(b), 2);
    if (ca != cb) return ca < cb;
    if (a.euler() != b.euler()) return a.euler() > b.euler();
    return display_class(a) < display_class(b);
}

KodairaType classify_valuations(Val a, Val b, int d) {
    auto ge = [](Val v, int k) { return !v || *v >= k; };
    auto eq = [](Val v, int k) { return v && *v == k; };
    auto bad = [&]() {
        auto s = [](Val v) { return v ? std::to_string(*v) : std::string("inf"); };
        return InconsistencyError("valuation triple (" + s(a) + ", " + s(b) + ", " + std::to_string(d) +
                                  ") outside the Kodaira table");
    };
    if (d < 0) throw bad();
    if (d == 0) return KodairaType::I(0);
    if (eq(a, 0)) {
        if (!eq(b, 0)) throw bad();
        return KodairaType::I(d);
    }
    // additive: a >= 1 and b >= 1
    if (!ge(a, 1) || !ge(b, 1)) throw bad();
    if (eq(a, 2) && eq(b, 3) && d >= 6) return KodairaType::Istar(d - 6);
    switch (d) {
    case 2:
        if (eq(b, 1)) return {Kind::II, 0};
        break;
    case 3:
        if (eq(a, 1) && ge(b, 2)) return {Kind::III, 0};
        break;
    case 4:
        if (ge(a, 2) && eq(b, 2)) return {Kind::IV, 0};
        break;
    case 6:
        if (ge(a, 2) && ge(b, 3)) return KodairaType::Istar(0);
        break;
    case 8:
        if (ge(a, 3) && eq(b, 4)) return {Kind::IVstar, 0};
        break;
    case 9:
        if (eq(a, 3) && ge(b, 5)) return {Kind::IIIstar, 0};
        break;
    case 10:
        if (ge(a, 4) && eq(b, 5)) return {Kind::IIstar, 0};
        break;
    default: break;
    }
    throw bad();
}

KodairaType branch_fiber_transform(const KodairaType& f) {
    switch (f.kind) {
    case Kind::In: return KodairaType::I(2 * f.n);
    case Kind::II: return {Kind::IV, 0};
    case Kind::III: return KodairaType::Istar(0);
    case Kind::IV: return {Kind::IVstar, 0};
    default: throw MathError("invalid branch fiber " + f.str() + ": branch fibers must be reduced");
    }
}

std::string fiber_string(const std::vector<KodairaType>& fibers) {
    std::map<KodairaType, int> count;
    for (const auto& f : fibers)
        if (!(f.kind == Kind::In && f.n == 0)) ++count[f];
    std::vector<std::pair<KodairaType, int>> v(count.begin(), count.end());
    std::stable_sort(v.begin(), v.end(), [](const auto& x, const auto& y) {
        if (display_before(x.first, y.first)) return true;
        if (display_before(y.first, x.first)) return false;
        return x.first < y.first;
    });
    std::string out;
    for (const auto& [t, m] : v) {
        if (!out.empty()) out += " + ";
        if (m > 1) out += std::to_string(m) + " ";
        out += t.str();
    }
    return out.empty() ? "I0" : out;
}

std::vector<KodairaType> parse_fiber_string(std::string_view s) {
    std::vector<KodairaType> out;
    std::string cur;
    auto flush = [&]() {
        std::string tok;
        for (char c : cur)
            if (!std::isspace(static_cast<unsigned char>(c)) && c != '^' && c != '_' && c != '{' && c != '}') tok += c;
        cur.clear();
        if (tok.empty()) throw MathError("empty term in fiber string");
        std::size_t i = 0;
        while (i < tok.size() && std::isdigit(static_cast<unsigned char>(tok[i]))) ++i;
        int m = i ? std::stoi(tok.substr(0, i)) : 1;
        KodairaType t = KodairaType::parse(tok.substr(i));
        if (t.kind == Kind::In && t.n == 0) return;
        for (int k = 0; k < m; ++k) out.push_back(t);
    };
    for (char c : s) {
        if (c == '+') flush();
        else cur += c;
    }
    flush();
    return out;
}

template <class K>
std::vector<KodairaType> FiberConfiguration<K>::fibers() const {
    std::vector<KodairaType> out;
    for (const auto& e : entries)
        for (int i = 0; i < e.place.degree; ++i) out.push_back(e.type);
    return out;
}

template <class K>
int FiberConfiguration<K>::euler() const {
    int s = 0;
    for (const auto& e : entries) s += e.place.degree * e.type.euler();
    return s;
}

namespace {

template <class K>
Val val_at(const Poly<K>& f, const Place<K>& pl, Var t, int weight) {
    if (f.is_zero()) return std::nullopt;
    if (pl.infinite) return weight - f.degree(t);
    return valuation(f, pl.p);
}

template <class K>
std::vector<Poly<K>> sqfree_parts(const Poly<K>& f, Var t) {
    std::vector<Poly<K>> out;
    if (f.is_zero() || f.degree(t) <= 0) return out;
    for (auto& pm : squarefree_decompose(f, t).parts) out.push_back(pm.first);
    return out;
}

} // namespace

template <class K>
std::vector<std::pair<Place<K>, int>> places_of_discriminant(const WeierstrassModel<K>& m) {
    Poly<K> D = m.delta_int();
    if (D.is_zero()) throw MathError("not an elliptic surface: 4A^3+27B^2 vanishes identically");
    Var t = m.t;
    std::vector<Poly<K>> dparts = sqfree_parts(D, t);
    std::vector<Poly<K>> all = dparts;
    for (auto& p : sqfree_parts(m.A, t)) all.push_back(p);
    for (auto& p : sqfree_parts(m.B, t)) all.push_back(p);
    std::vector<Poly<K>> refined = coprime_refine(all, t);
    std::vector<std::pair<Place<K>, int>> out;
    for (const auto& p : refined) {
        int v = valuation(D, p);
        if (v <= 0) continue;
        Place<K> pl;
        pl.p = p;
        pl.degree = p.degree(t);
        out.emplace_back(pl, v);
    }
    int vinf = 12 * m.chi - D.degree(t);
    if (vinf < 0) throw MathError("discriminant degree exceeds 12 chi");
    Place<K> inf;
    inf.infinite = true;
    out.emplace_back(inf, vinf);
    return out;
}

template <class K>
KodairaType classify_place(const WeierstrassModel<K>& m, const Place<K>& place) {
    Val a = val_at(m.A, place, m.t, 4 * m.chi);
    Val b = val_at(m.B, place, m.t, 6 * m.chi);
    Val d = val_at(m.delta_int(), place, m.t, 12 * m.chi);
    if (!d) throw MathError("not an elliptic surface: 4A^3+27B^2 vanishes identically");
    return classify_valuations(a, b, *d);
}

template <class K>
FiberConfiguration<K> fiber_configuration(const WeierstrassModel<K>& m0) {
    WeierstrassModel<K> m = minimalize(m0);
    if (!minimal_at_infinity(m)) throw MathError("model is not minimal at infinity: Euler grade " + std::to_string(m.chi) + " too large");
    FiberConfiguration<K> cfg;
    cfg.chi = m.chi;
    for (auto& [pl, vd] : places_of_discriminant(m)) {
        if (vd == 0) continue;
        FiberEntry<K> e;
        e.place = pl;
        e.v_c4 = val_at(m.A, pl, m.t, 4 * m.chi);
        e.v_c6 = val_at(m.B, pl, m.t, 6 * m.chi);
        e.v_delta = vd;
        e.type = classify_valuations(e.v_c4, e.v_c6, vd);
        cfg.entries.push_back(std::move(e));
    }
    std::stable_sort(cfg.entries.begin(), cfg.entries.end(), [](const FiberEntry<K>& x, const FiberEntry<K>& y) {
        if (display_before(x.type, y.type)) return true;
        if (display_before(y.type, x.type)) return false;
        if (x.type != y.type) return x.type < y.type;
        return x.place.degree < y.place.degree;
    });
    if (cfg.euler() != 12 * m.chi)
        throw InconsistencyError("Euler numbers sum to " + std::to_string(cfg.euler()) + ", expected " +
                                 std::to_string(12 * m.chi));
    return cfg;
}

int lattice_rank(const KodairaType& f) {
    switch (f.kind) {
    case Kind::In: return f.n >= 2 ? f.n - 1 : 0;
    case Kind::Instar: return f.n + 4;
    case Kind::II: return 0;
    case Kind::III: return 1;
    case Kind::IV: return 2;
    case Kind::IVstar: return 6;
    case Kind::IIIstar: return 7;
    case Kind::IIstar: return 8;
    }
    return 0;
}

int mw_rank(const std::vector<KodairaType>& fibers, int picard_number) {
    int r = picard_number - 2;
    for (const auto& f : fibers) r -= lattice_rank(f);
    if (r < 0) throw MathError("inconsistent input: trivial lattice rank exceeds the Picard number");
    return r;
}

template struct FiberConfiguration<Rational>;
template struct FiberConfiguration<AlgebraicNumber>;

#define K3_K_INSTANTIATE(K)                                                                       \
    template std::vector<std::pair<Place<K>, int>> places_of_discriminant(const WeierstrassModel<K>&); \
    template KodairaType classify_place(const WeierstrassModel<K>&, const Place<K>&);             \
    template FiberConfiguration<K> fiber_configuration(const WeierstrassModel<K>&);

K3_K_INSTANTIATE(Rational)
K3_K_INSTANTIATE(AlgebraicNumber)

} // namespace k3
