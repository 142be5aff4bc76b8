#include "k3fib/rational.hpp"

#include "k3fib/errors.hpp"

#include <cctype>

namespace k3 {

Rational::Rational(const Integer& n, const Integer& d) {
    if (d == 0) throw MathError("rational with zero denominator");
    v_ = mpq_class(n, d);
    v_.canonicalize();
}

static bool valid_integer_text(std::string_view s) {
    size_t i = 0;
    if (i < s.size() && (s[i] == '-' || s[i] == '+')) ++i;
    if (i == s.size()) return false;
    for (; i < s.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    return true;
}

static Integer parse_integer(std::string_view s) {
    if (!valid_integer_text(s)) throw MathError("not an exact rational: '" + std::string(s) + "'");
    std::string t(s);
    if (t[0] == '+') t.erase(0, 1);
    return Integer(t, 10);
}

Rational Rational::parse(std::string_view text) {
    std::string t;
    for (char ch : text)
        if (!std::isspace(static_cast<unsigned char>(ch))) t.push_back(ch);
    auto slash = t.find('/');
    if (slash == std::string::npos) return Rational(parse_integer(t));
    return Rational(parse_integer(std::string_view(t).substr(0, slash)),
                    parse_integer(std::string_view(t).substr(slash + 1)));
}

Rational Rational::inverse() const {
    if (is_zero()) throw MathError("division by zero");
    mpq_class r = 1 / v_;
    return Rational(r);
}

Rational& Rational::operator/=(const Rational& o) {
    if (o.is_zero()) throw MathError("division by zero");
    v_ /= o.v_;
    return *this;
}

Rational Rational::pow(unsigned e) const {
    Integer n, d;
    mpz_pow_ui(n.get_mpz_t(), v_.get_num_mpz_t(), e);
    mpz_pow_ui(d.get_mpz_t(), v_.get_den_mpz_t(), e);
    return Rational(n, d);
}

bool Rational::is_square(Rational* root) const {
    if (sign() < 0) return false;
    if (!mpz_perfect_square_p(v_.get_num_mpz_t()) || !mpz_perfect_square_p(v_.get_den_mpz_t()))
        return false;
    if (root) {
        Integer n, d;
        mpz_sqrt(n.get_mpz_t(), v_.get_num_mpz_t());
        mpz_sqrt(d.get_mpz_t(), v_.get_den_mpz_t());
        *root = Rational(n, d);
    }
    return true;
}

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

} // namespace k3
