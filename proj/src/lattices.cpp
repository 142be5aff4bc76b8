#include "k3fib/lattices.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <complex>
#include <functional>
#include <map>
#include <numeric>

namespace k3 {

long LatticeSummand::disc_order() const {
    switch (family) {
    case 'A': return index + 1;
    case 'D': return 4;
    case 'E': return index == 6 ? 3 : index == 7 ? 2 : 1;
    }
    return 1;
}

std::string LatticeSummand::str() const { return std::string(1, family) + std::to_string(index); }

LatticeSummand LatticeSummand::parse(std::string_view s) {
    if (s.size() < 2 || !std::all_of(s.begin() + 1, s.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
        throw MathError("bad lattice summand: " + std::string(s));
    LatticeSummand r{s[0], std::stoi(std::string(s.substr(1)))};
    bool ok = (r.family == 'A' && r.index >= 1) || (r.family == 'D' && r.index >= 4) ||
              (r.family == 'E' && r.index >= 6 && r.index <= 8);
    if (!ok) throw MathError("unsupported lattice summand: " + std::string(s));
    return r;
}

std::vector<LatticeSummand> LatticeSummand::parse_list(std::string_view s) {
    std::vector<LatticeSummand> out;
    std::string tok;
    auto flush = [&]() {
        std::string t;
        for (char c : tok)
            if (!std::isspace(static_cast<unsigned char>(c)) && c != '{' && c != '}' && c != '_' && c != '\\') t += c;
        tok.clear();
        if (t.empty() || t == "U" || t == "oplus") return;
        int mult = 1;
        if (auto caret = t.find('^'); caret != std::string::npos) {
            mult = std::stoi(t.substr(caret + 1));
            t = t.substr(0, caret);
        }
        auto one = parse(t);
        for (int i = 0; i < mult; ++i) out.push_back(one);
    };
    for (char c : s) {
        if (c == ',' || c == '+') flush();
        else tok += c;
    }
    flush();
    return out;
}

std::string lattice_string(const std::vector<LatticeSummand>& s) {
    // E before D before A, larger index first
    std::vector<LatticeSummand> v = s;
    std::sort(v.begin(), v.end(), [](const LatticeSummand& x, const LatticeSummand& y) {
        if (x.family != y.family) return x.family > y.family;
        return x.index > y.index;
    });
    std::string out = "U";
    for (std::size_t i = 0; i < v.size();) {
        std::size_t j = i;
        while (j < v.size() && v[j] == v[i]) ++j;
        out += " + " + v[i].str();
        if (j - i > 1) out += "^" + std::to_string(j - i);
        i = j;
    }
    return out;
}

std::optional<LatticeSummand> summand_of(const KodairaType& f) {
    using Kind = KodairaType::Kind;
    switch (f.kind) {
    case Kind::In:
        if (f.n >= 2) return LatticeSummand{'A', f.n - 1};
        return std::nullopt;
    case Kind::Instar: return LatticeSummand{'D', f.n + 4};
    case Kind::II: return std::nullopt;
    case Kind::III: return LatticeSummand{'A', 1};
    case Kind::IV: return LatticeSummand{'A', 2};
    case Kind::IVstar: return LatticeSummand{'E', 6};
    case Kind::IIIstar: return LatticeSummand{'E', 7};
    case Kind::IIstar: return LatticeSummand{'E', 8};
    }
    return std::nullopt;
}

Rational mod2(const Rational& r) {
    // r - 2 floor(r/2)
    Rational h = r / Rational(2);
    Integer fl;
    mpz_fdiv_q(fl.get_mpz_t(), h.num().get_mpz_t(), h.den().get_mpz_t());
    return r - Rational(fl) * Rational(2);
}

Rational mod1(const Rational& r) {
    Integer fl;
    mpz_fdiv_q(fl.get_mpz_t(), r.num().get_mpz_t(), r.den().get_mpz_t());
    return r - Rational(fl);
}

long FiniteQuadraticForm::order() const {
    long o = 1;
    for (long n : orders) o *= n;
    return o;
}

bool FiniteQuadraticForm::two_elementary() const {
    return std::all_of(orders.begin(), orders.end(), [](long n) { return n == 2; });
}

Rational FiniteQuadraticForm::q_of(const std::vector<long>& x) const {
    Rational r;
    for (int i = 0; i < length(); ++i) {
        if (!x[i]) continue;
        r += q[i] * Rational(x[i] * x[i]);
        for (int j = i + 1; j < length(); ++j)
            if (x[j]) r += Rational(2) * b[i][j] * Rational(x[i] * x[j]);
    }
    return mod2(r);
}

Rational FiniteQuadraticForm::b_of(const std::vector<long>& x, const std::vector<long>& y) const {
    Rational r;
    for (int i = 0; i < length(); ++i)
        for (int j = 0; j < length(); ++j)
            if (x[i] && y[j]) r += b[i][j] * Rational(x[i] * y[j]);
    return mod1(r);
}

std::vector<std::vector<long>> FiniteQuadraticForm::elements() const {
    std::vector<std::vector<long>> out;
    std::vector<long> x(orders.size(), 0);
    while (true) {
        out.push_back(x);
        std::size_t i = 0;
        while (i < x.size()) {
            if (++x[i] < orders[i]) break;
            x[i] = 0;
            ++i;
        }
        if (i == x.size()) break;
    }
    return out;
}

namespace {

void add_gen(FiniteQuadraticForm& f, long order, const Rational& q) {
    f.orders.push_back(order);
    f.q.push_back(mod2(q));
    for (auto& row : f.b) row.push_back(Rational(0));
    f.b.emplace_back(f.orders.size(), Rational(0));
    f.b.back().back() = mod1(q);
}

} // namespace

FiniteQuadraticForm disc_form(const std::vector<LatticeSummand>& summands) {
    FiniteQuadraticForm f;
    for (const auto& s : summands) {
        int start = f.length();
        switch (s.family) {
        case 'A':
            add_gen(f, s.index + 1, Rational(-s.index, s.index + 1));
            break;
        case 'D':
            if (s.index % 2 == 0) {
                // vector class v and spinor s, b(v, s) = 1/2
                add_gen(f, 2, Rational(-1));
                add_gen(f, 2, Rational(-s.index, 4));
                int i = f.length() - 2;
                f.b[i][i + 1] = f.b[i + 1][i] = Rational(1, 2);
            } else {
                add_gen(f, 4, Rational(-s.index, 4));
            }
            break;
        case 'E':
            if (s.index == 6) add_gen(f, 3, Rational(-4, 3));
            else if (s.index == 7) add_gen(f, 2, Rational(-3, 2));
            else if (s.index != 8) throw MathError("unsupported summand " + s.str());
            break;
        default: throw MathError("unsupported summand " + s.str());
        }
        f.summand_gens.emplace_back(start, f.length());
    }
    // consistency of the stored pairing with q
    for (int i = 0; i < f.length(); ++i)
        for (int j = 0; j < f.length(); ++j) {
            if (i == j) continue;
            std::vector<long> x(f.length(), 0), y(f.length(), 0), xy(f.length(), 0);
            x[i] = 1;
            y[j] = 1;
            xy[i] = 1;
            xy[j] = 1;
            Rational lhs = mod2(f.q_of(xy) - f.q_of(x) - f.q_of(y));
            if (lhs != mod2(Rational(2) * f.b[i][j])) throw InconsistencyError("discriminant form pairing");
        }
    return f;
}

namespace {

// Z[zeta_N] elements as integer vectors modulo x^N - 1, compared modulo Phi_N.
using Cyc = std::vector<Integer>;

std::vector<Integer> cyclotomic(long N) {
    // Phi_N = (x^N - 1) / prod_{d | N, d < N} Phi_d
    std::vector<Integer> num(N + 1, 0);
    num[0] = -1;
    num[N] = 1;
    for (long d = 1; d < N; ++d) {
        if (N % d) continue;
        auto den = cyclotomic(d);
        // exact division by a monic integer polynomial
        int dn = static_cast<int>(num.size()) - 1, dd = static_cast<int>(den.size()) - 1;
        std::vector<Integer> q(dn - dd + 1, 0);
        for (int i = dn - dd; i >= 0; --i) {
            q[i] = num[i + dd];
            for (int j = 0; j <= dd; ++j) num[i + j] -= q[i] * den[j];
        }
        num = q;
    }
    return num;
}

std::vector<Integer> reduce_phi(const Cyc& c, const std::vector<Integer>& phi) {
    std::vector<Integer> r = c;
    int dp = static_cast<int>(phi.size()) - 1;
    for (int i = static_cast<int>(r.size()) - 1; i >= dp; --i) {
        if (r[i] == 0) continue;
        Integer k = r[i];
        for (int j = 0; j <= dp; ++j) r[i - dp + j] -= k * phi[j];
    }
    r.resize(dp);
    return r;
}

Cyc cyc_mul(const Cyc& a, const Cyc& b, long N) {
    Cyc r(N, 0);
    for (long i = 0; i < N; ++i) {
        if (a[i] == 0) continue;
        for (long j = 0; j < N; ++j)
            if (b[j] != 0) r[(i + j) % N] += a[i] * b[j];
    }
    return r;
}

} // namespace

int brown_invariant(const FiniteQuadraticForm& f) {
    if (f.order() > (1L << 22)) throw MathError("discriminant group too large for the Gauss sum");
    auto els = f.elements();
    std::vector<Rational> qs;
    qs.reserve(els.size());
    Integer lcmden = 8;
    for (const auto& x : els) {
        qs.push_back(f.q_of(x));
        Integer d = qs.back().den() * 2;
        mpz_lcm(lcmden.get_mpz_t(), lcmden.get_mpz_t(), d.get_mpz_t());
    }
    long N = lcmden.get_si();
    // S = sum zeta_N^(N q / 2)
    Cyc S(N, 0);
    std::complex<long double> approx(0, 0);
    const long double pi = std::acos(-1.0L);
    for (const auto& q : qs) {
        Rational e = q * Rational(N) / Rational(2);
        long k = e.num().get_si() % N;
        if (k < 0) k += N;
        S[k] += 1;
        approx += std::polar(1.0L, 2 * pi * static_cast<long double>(k) / static_cast<long double>(N));
    }
    long double phase = std::arg(approx) / (2 * pi) * 8;
    int guess = static_cast<int>(std::lround(phase));
    guess = ((guess % 8) + 8) % 8;
    // certificate: T = S * zeta_8^-guess is real with T^2 = |G|
    Cyc z(N, 0);
    z[(N - (N / 8) * guess) % N] = 1;
    Cyc T = cyc_mul(S, z, N);
    Cyc Tbar(N, 0);
    for (long i = 0; i < N; ++i) Tbar[(N - i) % N] += T[i];
    auto phi = cyclotomic(N);
    auto diff = T;
    for (long i = 0; i < N; ++i) diff[i] -= Tbar[i];
    auto rdiff = reduce_phi(diff, phi);
    bool real = std::all_of(rdiff.begin(), rdiff.end(), [](const Integer& c) { return c == 0; });
    Cyc T2 = cyc_mul(T, T, N);
    T2[0] -= Integer(static_cast<long>(els.size()));
    auto red = reduce_phi(T2, phi);
    bool norm = std::all_of(red.begin(), red.end(), [](const Integer& c) { return c == 0; });
    if (!real || !norm || std::abs(approx) < 0.5L) throw InconsistencyError("Gauss sum certificate failed");
    return guess;
}

FormInvariants form_invariants(const FiniteQuadraticForm& f) {
    if (!f.two_elementary()) throw MathError("form invariants need a 2-elementary form");
    FormInvariants r;
    r.a = f.length();
    r.delta = 0;
    for (const auto& x : f.elements())
        if (!f.q_of(x).is_integer()) r.delta = 1;
    r.brown = brown_invariant(f);
    return r;
}

Rational glue_contribution(const LatticeSummand& s, GlueChoice c) {
    switch (c) {
    case GlueChoice::identity: return Rational(0);
    case GlueChoice::a1:
        if (s.family == 'A' && s.index == 1) return Rational(1, 2);
        break;
    case GlueChoice::d_near:
        if (s.family == 'D') return Rational(1);
        break;
    case GlueChoice::d_far:
        if (s.family == 'D') return Rational(s.index, 4);
        break;
    case GlueChoice::e7:
        if (s.family == 'E' && s.index == 7) return Rational(3, 2);
        break;
    }
    throw MathError("glue choice does not fit summand " + s.str());
}

Rational glue_total(const std::vector<LatticeSummand>& summands, const GlueVector& g) {
    if (g.choice.size() != summands.size()) throw MathError("glue vector does not match the summand list");
    Rational r;
    for (std::size_t i = 0; i < summands.size(); ++i) r += glue_contribution(summands[i], g.choice[i]);
    return r;
}

std::string GlueVector::str() const {
    std::string out;
    for (auto c : choice) {
        if (!out.empty()) out += ",";
        switch (c) {
        case GlueChoice::identity: out += "identity"; break;
        case GlueChoice::a1: out += "A1-nonzero"; break;
        case GlueChoice::d_near: out += "near"; break;
        case GlueChoice::d_far: out += "far"; break;
        case GlueChoice::e7: out += "E7-nonzero"; break;
        }
    }
    return out;
}

std::vector<GlueVector> two_torsion_glues(const std::vector<LatticeSummand>& summands) {
    std::vector<std::vector<GlueChoice>> opts;
    for (const auto& s : summands) {
        std::vector<GlueChoice> o{GlueChoice::identity};
        if (s.family == 'A' && s.index == 1) o.push_back(GlueChoice::a1);
        if (s.family == 'D' && s.index % 2 == 0) {
            o.push_back(GlueChoice::d_near);
            o.push_back(GlueChoice::d_far);
        }
        if (s.family == 'E' && s.index == 7) o.push_back(GlueChoice::e7);
        opts.push_back(o);
    }
    std::vector<GlueVector> out;
    GlueVector cur;
    cur.choice.resize(summands.size());
    std::function<void(std::size_t, Rational)> rec = [&](std::size_t i, Rational sum) {
        if (sum > Rational(4)) return;
        if (i == summands.size()) {
            if (sum == Rational(4)) out.push_back(cur);
            return;
        }
        for (auto c : opts[i]) {
            cur.choice[i] = c;
            rec(i + 1, sum + glue_contribution(summands[i], c));
        }
    };
    rec(0, Rational(0));
    return out;
}

std::vector<long> glue_element(const FiniteQuadraticForm& f, const std::vector<LatticeSummand>& summands,
                               const GlueVector& g) {
    if (g.choice.size() != summands.size() || f.summand_gens.size() != summands.size())
        throw MathError("glue vector does not match the summand list");
    std::vector<long> x(f.length(), 0);
    for (std::size_t i = 0; i < summands.size(); ++i) {
        int start = f.summand_gens[i].first;
        switch (g.choice[i]) {
        case GlueChoice::identity: break;
        case GlueChoice::a1:
        case GlueChoice::e7: x[start] = 1; break;
        case GlueChoice::d_near: x[start] = 1; break;
        case GlueChoice::d_far: x[start + 1] = 1; break;
        }
        // contribution == -q(component) mod 2
        std::vector<long> comp(f.length(), 0);
        for (int k = f.summand_gens[i].first; k < f.summand_gens[i].second; ++k) comp[k] = x[k];
        if (mod2(glue_contribution(summands[i], g.choice[i]) + f.q_of(comp)) != Rational(0))
            throw InconsistencyError("glue contribution is not -q of its component");
    }
    return x;
}

namespace {

// F2 vectors packed as bit masks over the generator list
using Bits = unsigned long long;

std::vector<long> unpack(Bits m, int n) {
    std::vector<long> x(n);
    for (int i = 0; i < n; ++i) x[i] = (m >> i) & 1;
    return x;
}

Bits pack(const std::vector<long>& x) {
    Bits m = 0;
    for (std::size_t i = 0; i < x.size(); ++i)
        if (x[i] % 2) m |= Bits(1) << i;
    return m;
}

} // namespace

FiniteQuadraticForm glue_quotient(const FiniteQuadraticForm& f, const std::vector<long>& e) {
    if (!f.two_elementary()) throw MathError("glue quotient needs a 2-elementary form");
    int n = f.length();
    if (n > 60) throw MathError("form too long");
    if (f.q_of(e) != Rational(0)) throw MathError("glue element is not isotropic");
    Bits eb = pack(e);
    if (!eb) throw MathError("glue element is zero");
    // e^perp: kernel of x -> 2 b(x, e) over F2, spanned by generator combinations
    std::vector<Bits> perp;
    std::vector<int> pairing(n);
    for (int i = 0; i < n; ++i) {
        std::vector<long> g(n, 0);
        g[i] = 1;
        pairing[i] = f.b_of(g, e).is_zero() ? 0 : 1;
    }
    int pivot = -1;
    for (int i = 0; i < n; ++i)
        if (pairing[i]) pivot = i;
    for (int i = 0; i < n; ++i) {
        if (pairing[i] == 0) perp.push_back(Bits(1) << i);
        else if (i != pivot) perp.push_back((Bits(1) << i) | (Bits(1) << pivot));
    }
    // extend e to a basis of perp, then drop e
    // keep basis in echelon form with distinct leading bits
    // pivots by leading bit
    std::map<int, Bits> ech;
    auto lead = [](Bits v) { return 63 - __builtin_clzll(v); };
    auto ech_reduce = [&](Bits v) {
        for (int bit = 63; bit >= 0 && v; --bit) {
            if (!((v >> bit) & 1)) continue;
            auto it = ech.find(bit);
            if (it != ech.end()) v ^= it->second;
        }
        return v;
    };
    ech[lead(eb)] = eb;
    std::vector<Bits> reps;
    for (Bits v : perp) {
        Bits r = ech_reduce(v);
        if (r) {
            ech[lead(r)] = r;
            reps.push_back(v);
        }
    }
    if (static_cast<int>(reps.size()) != n - 2) throw InconsistencyError("glue quotient has unexpected length");
    FiniteQuadraticForm out;
    for (Bits v : reps) add_gen(out, 2, f.q_of(unpack(v, n)));
    for (std::size_t i = 0; i < reps.size(); ++i)
        for (std::size_t j = 0; j < reps.size(); ++j)
            if (i != j) out.b[i][j] = f.b_of(unpack(reps[i], n), unpack(reps[j], n));
    return out;
}

std::vector<long> torsion_order_bound(long trivial_disc_order, int target_a) {
    std::vector<long> out;
    if (target_a < 0 || target_a > 60) return out;
    long p2 = 1L << target_a;
    if (trivial_disc_order % p2) return out;
    long rest = trivial_disc_order / p2;
    long t = std::lround(std::sqrt(static_cast<double>(rest)));
    for (long c = std::max(1L, t - 1); c <= t + 1; ++c)
        if (c * c == rest) out.push_back(c);
    return out;
}

} // namespace k3
