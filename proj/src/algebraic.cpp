#include "k3fib/algebraic.hpp"

#include "k3fib/errors.hpp"

#include <sstream>

namespace k3 {

namespace uq {

void trim(UPolyQ& p) {
    while (!p.empty() && p.back().is_zero()) p.pop_back();
}

int degree(const UPolyQ& p) {
    for (int i = static_cast<int>(p.size()) - 1; i >= 0; --i)
        if (!p[i].is_zero()) return i;
    return -1;
}

UPolyQ add(const UPolyQ& a, const UPolyQ& b) {
    UPolyQ r(std::max(a.size(), b.size()));
    for (size_t i = 0; i < a.size(); ++i) r[i] += a[i];
    for (size_t i = 0; i < b.size(); ++i) r[i] += b[i];
    trim(r);
    return r;
}

UPolyQ sub(const UPolyQ& a, const UPolyQ& b) {
    UPolyQ r(std::max(a.size(), b.size()));
    for (size_t i = 0; i < a.size(); ++i) r[i] += a[i];
    for (size_t i = 0; i < b.size(); ++i) r[i] -= b[i];
    trim(r);
    return r;
}

UPolyQ mul(const UPolyQ& a, const UPolyQ& b) {
    if (a.empty() || b.empty()) return {};
    UPolyQ r(a.size() + b.size() - 1);
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i].is_zero()) continue;
        for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    }
    trim(r);
    return r;
}

void divmod(const UPolyQ& a, const UPolyQ& b, UPolyQ& q, UPolyQ& r) {
    int db = degree(b);
    if (db < 0) throw MathError("polynomial division by zero");
    r = a;
    trim(r);
    q.assign(std::max<int>(0, degree(r) - db + 1), Rational(0));
    Rational inv = b[db].inverse();
    for (int dr = degree(r); dr >= db; dr = degree(r)) {
        Rational f = r[dr] * inv;
        q[dr - db] = f;
        for (int i = 0; i <= db; ++i) r[dr - db + i] -= f * b[i];
        trim(r);
    }
    trim(q);
}

UPolyQ gcd(UPolyQ a, UPolyQ b) {
    trim(a);
    trim(b);
    while (!b.empty()) {
        UPolyQ q, r;
        divmod(a, b, q, r);
        a = std::move(b);
        b = std::move(r);
    }
    if (a.empty()) return a;
    Rational inv = a.back().inverse();
    for (auto& c : a) c *= inv;
    return a;
}

UPolyQ derivative(const UPolyQ& a) {
    UPolyQ r;
    for (size_t i = 1; i < a.size(); ++i) r.push_back(a[i] * Rational(static_cast<long>(i)));
    trim(r);
    return r;
}

Rational eval(const UPolyQ& a, const Rational& x) {
    Rational acc(0);
    for (size_t i = a.size(); i-- > 0;) acc = acc * x + a[i];
    return acc;
}

std::string str(const UPolyQ& a, const std::string& var) {
    std::ostringstream os;
    bool first = true;
    for (size_t i = a.size(); i-- > 0;) {
        if (a[i].is_zero()) continue;
        Rational c = a[i];
        if (!first) {
            os << (c.sign() < 0 ? " - " : " + ");
            if (c.sign() < 0) c = -c;
        } else if (c.sign() < 0 && i > 0) {
            os << "-";
            c = -c;
        }
        first = false;
        if (i == 0) {
            os << c;
        } else {
            if (!c.is_one()) os << c << "*";
            os << var;
            if (i > 1) os << "^" << i;
        }
    }
    if (first) os << "0";
    return os.str();
}

} // namespace uq

// Irreducibility certificates for small degree: a polynomial that stays
// irreducible of the same degree modulo some prime is irreducible over Q.
namespace {

long mod_p(const Rational& c, long p) {
    Integer n = c.num() % p, d = c.den() % p;
    long nn = n.get_si(), dd = d.get_si();
    if (nn < 0) nn += p;
    if (dd < 0) dd += p;
    // inverse of dd mod p via Fermat
    long inv = 1, base = dd, e = p - 2;
    while (e > 0) {
        if (e & 1) inv = inv * base % p;
        base = base * base % p;
        e >>= 1;
    }
    return nn * inv % p;
}

// remainder of f by monic divisor g over F_p, both low->high
std::vector<long> rem_p(std::vector<long> f, const std::vector<long>& g, long p) {
    int dg = static_cast<int>(g.size()) - 1;
    for (int i = static_cast<int>(f.size()) - 1; i >= dg; --i) {
        long c = f[i];
        if (c == 0) continue;
        for (int j = 0; j <= dg; ++j) f[i - dg + j] = ((f[i - dg + j] - c * g[j]) % p + p) % p;
    }
    f.resize(std::min<size_t>(f.size(), dg));
    return f;
}

bool all_zero(const std::vector<long>& v) {
    for (long x : v)
        if (x != 0) return false;
    return true;
}

bool irreducible_mod_p(const UPolyQ& f, long p) {
    int n = uq::degree(f);
    for (const auto& c : f)
        if (mpz_divisible_ui_p(c.den().get_mpz_t(), p)) return false;
    std::vector<long> fp(n + 1);
    for (int i = 0; i <= n; ++i) fp[i] = mod_p(f[i], p);
    if (fp[n] == 0) return false;
    // make monic
    long lc = fp[n], inv = 1, base = lc, e = p - 2;
    while (e > 0) {
        if (e & 1) inv = inv * base % p;
        base = base * base % p;
        e >>= 1;
    }
    for (auto& c : fp) c = c * inv % p;
    for (long x = 0; x < p; ++x)
        if (all_zero(rem_p(fp, {(p - x) % p, 1}, p))) return false;
    if (n >= 4) {
        for (long b = 0; b < p; ++b)
            for (long c = 0; c < p; ++c)
                if (all_zero(rem_p(fp, {c, b, 1}, p))) return false;
    }
    return n <= 4;
}

} // namespace

namespace {

// positive divisors of |d|, d != 0; empty when |d| is too large to factor by trial division
std::vector<Integer> divisors_of(const Integer& d) {
    Integer m = abs(d);
    if (m > Integer("1000000000000")) return {};
    std::vector<std::pair<Integer, int>> fac;
    for (Integer q = 2; q * q <= m; ++q) {
        int e = 0;
        while (m % q == 0) { m /= q; ++e; }
        if (e) fac.emplace_back(q, e);
    }
    if (m > 1) fac.emplace_back(m, 1);
    std::vector<Integer> out{Integer(1)};
    for (auto& [q, e] : fac) {
        std::size_t sz = out.size();
        Integer pw = 1;
        for (int k = 1; k <= e; ++k) {
            pw *= q;
            for (std::size_t i = 0; i < sz; ++i) out.push_back(out[i] * pw);
        }
    }
    return out;
}

// exact test for degree 3 and 4: no linear and (degree 4) no quadratic factor over Q
bool irreducible_small_integer(const UPolyQ& p0) {
    int n = uq::degree(p0);
    UPolyQ p = p0;
    Rational inv = p.back().inverse();
    for (auto& c : p) c *= inv;
    // x -> x / L makes a monic integer polynomial
    Integer L = 1;
    for (const auto& c : p) L = lcm(L, c.den());
    std::vector<Integer> a(n + 1);
    Integer pw = 1;
    for (int i = n; i >= 0; --i) {
        Rational v = p[i] * Rational(pw);
        a[i] = v.num();
        pw *= L;
    }
    if (a[0] == 0) return false;
    auto divs = divisors_of(a[0]);
    if (divs.empty()) return false;
    auto value = [&](const Integer& x) {
        Integer v = 0;
        for (int i = n; i >= 0; --i) v = v * x + a[i];
        return v;
    };
    for (const auto& q : divs)
        if (value(q) == 0 || value(-q) == 0) return false;
    if (n == 3) return true;
    // (x^2 + u x + q)(x^2 + r x + s), q s = a0
    const Integer &A = a[3], &B = a[2], &C = a[1], &D = a[0];
    for (const auto& q0 : divs)
        for (int sg : {1, -1}) {
            Integer q = q0 * sg, s = D / q;
            if (q != s) {
                Integer num = C - A * q, den = s - q;
                if (num % den != 0) continue;
                Integer u = num / den, r = A - u;
                if (q + s + u * r == B) return false;
            } else {
                if (C != q * A) continue;
                Integer disc = A * A - 4 * (B - 2 * q);
                if (disc < 0) continue;
                Integer rt = sqrt(disc);
                if (rt * rt == disc && (A + rt) % 2 == 0) return false;
            }
        }
    return true;
}

} // namespace

bool certify_irreducible(const UPolyQ& p) {
    int n = uq::degree(p);
    if (n <= 0) return false;
    if (n == 1) return true;
    if (n == 2) {
        Rational disc = p[1] * p[1] - Rational(4) * p[2] * p[0];
        return !disc.is_square();
    }
    if (n > 4) return false;
    static const long primes[] = {3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97};
    for (long q : primes)
        if (irreducible_mod_p(p, q)) return true;
    // x^4+1 and friends split mod every prime; search factors over Z directly
    return irreducible_small_integer(p);
}

NumberField::NumberField(UPolyQ minpoly, std::string gen) : m_(std::move(minpoly)), gen_(std::move(gen)) {
    uq::trim(m_);
    if (uq::degree(m_) < 1) throw MathError("minimal polynomial must have positive degree");
    Rational inv = m_.back().inverse();
    for (auto& c : m_) c *= inv;
    if (uq::degree(uq::gcd(m_, uq::derivative(m_))) > 0)
        throw MathError("minimal polynomial is not squarefree: " + uq::str(m_, gen_));
    if (!certify_irreducible(m_))
        throw MathError("cannot certify irreducibility of " + uq::str(m_, gen_));
}

UPolyQ NumberField::reduce(const UPolyQ& p) const {
    UPolyQ q, r;
    uq::divmod(p, m_, q, r);
    return r;
}

AlgebraicNumber::AlgebraicNumber(std::shared_ptr<const NumberField> f, UPolyQ coords)
    : f_(std::move(f)), c_(std::move(coords)) {
    if (f_) c_ = f_->reduce(c_);
    uq::trim(c_);
    if (c_.empty()) c_.push_back(Rational(0));
}

AlgebraicNumber AlgebraicNumber::generator(std::shared_ptr<const NumberField> f) {
    return AlgebraicNumber(std::move(f), UPolyQ{Rational(0), Rational(1)});
}

bool AlgebraicNumber::is_zero() const { return c_.size() == 1 && c_[0].is_zero(); }
bool AlgebraicNumber::is_one() const { return c_.size() == 1 && c_[0].is_one(); }
bool AlgebraicNumber::is_rational() const { return c_.size() == 1; }

Rational AlgebraicNumber::rational_value() const {
    if (!is_rational()) throw MathError("algebraic number is not rational: " + str());
    return c_[0];
}

void AlgebraicNumber::adopt(const AlgebraicNumber& o) {
    if (!o.f_) return;
    if (!f_) {
        f_ = o.f_;
        return;
    }
    if (f_ != o.f_ && !f_->same_as(*o.f_))
        throw MathError("mixing elements of different number fields");
}

AlgebraicNumber AlgebraicNumber::operator-() const {
    AlgebraicNumber r = *this;
    for (auto& c : r.c_) c = -c;
    return r;
}

static void normalize_coords(UPolyQ& c) {
    uq::trim(c);
    if (c.empty()) c.push_back(Rational(0));
}

AlgebraicNumber& AlgebraicNumber::operator+=(const AlgebraicNumber& o) {
    adopt(o);
    if (c_.size() < o.c_.size()) c_.resize(o.c_.size());
    for (size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
    normalize_coords(c_);
    return *this;
}

AlgebraicNumber& AlgebraicNumber::operator-=(const AlgebraicNumber& o) {
    adopt(o);
    if (c_.size() < o.c_.size()) c_.resize(o.c_.size());
    for (size_t i = 0; i < o.c_.size(); ++i) c_[i] -= o.c_[i];
    normalize_coords(c_);
    return *this;
}

AlgebraicNumber& AlgebraicNumber::operator*=(const AlgebraicNumber& o) {
    adopt(o);
    if (o.c_.size() == 1) {
        for (auto& c : c_) c *= o.c_[0];
    } else if (c_.size() == 1) {
        Rational s = c_[0];
        c_ = o.c_;
        for (auto& c : c_) c *= s;
    } else {
        c_ = f_->reduce(uq::mul(c_, o.c_));
    }
    normalize_coords(c_);
    return *this;
}

AlgebraicNumber AlgebraicNumber::inverse() const {
    if (is_zero()) throw MathError("division by zero in number field");
    if (is_rational()) return AlgebraicNumber(f_, UPolyQ{c_[0].inverse()});
    // extended Euclid: s*c + t*m = 1
    UPolyQ r0 = f_->minpoly(), r1 = c_;
    UPolyQ s0{}, s1{Rational(1)};
    while (uq::degree(r1) > 0) {
        UPolyQ q, r;
        uq::divmod(r0, r1, q, r);
        UPolyQ s = uq::sub(s0, uq::mul(q, s1));
        r0 = std::move(r1);
        r1 = std::move(r);
        s0 = std::move(s1);
        s1 = std::move(s);
    }
    if (uq::degree(r1) < 0) throw MathError("zero divisor in number field (minimal polynomial reducible)");
    Rational inv = r1[0].inverse();
    for (auto& c : s1) c *= inv;
    return AlgebraicNumber(f_, s1);
}

bool operator==(const AlgebraicNumber& a, const AlgebraicNumber& b) {
    if (a.c_ != b.c_) return false;
    if (a.is_rational()) return true;
    return a.f_ == b.f_ || a.f_->same_as(*b.f_);
}

bool AlgebraicNumber::is_square(AlgebraicNumber* root) const {
    if (!is_rational()) return false;
    Rational r;
    if (!c_[0].is_square(&r)) return false;
    if (root) *root = AlgebraicNumber(f_, UPolyQ{r});
    return true;
}

std::string AlgebraicNumber::str() const {
    if (is_rational()) return c_[0].str();
    return "(" + uq::str(c_, f_->generator_name()) + ")";
}

std::ostream& operator<<(std::ostream& os, const AlgebraicNumber& a) { return os << a.str(); }

} // namespace k3
