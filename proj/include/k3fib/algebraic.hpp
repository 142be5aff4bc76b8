#ifndef K3FIB_ALGEBRAIC_HPP
#define K3FIB_ALGEBRAIC_HPP

#include "k3fib/rational.hpp"

#include <memory>
#include <string>
#include <vector>

namespace k3 {

/// Dense univariate polynomial over Q, coefficients from low to high degree.
using UPolyQ = std::vector<Rational>;

namespace uq {
void trim(UPolyQ& p);
int degree(const UPolyQ& p); // -1 for zero
UPolyQ add(const UPolyQ& a, const UPolyQ& b);
UPolyQ sub(const UPolyQ& a, const UPolyQ& b);
UPolyQ mul(const UPolyQ& a, const UPolyQ& b);
void divmod(const UPolyQ& a, const UPolyQ& b, UPolyQ& q, UPolyQ& r);
UPolyQ gcd(UPolyQ a, UPolyQ b); // monic
UPolyQ derivative(const UPolyQ& a);
Rational eval(const UPolyQ& a, const Rational& x);
std::string str(const UPolyQ& a, const std::string& var);
} // namespace uq

/// Q[x]/(m) with m monic and irreducible over Q.
class NumberField {
public:
    /// minpoly low->high, normalized to monic; `gen` names the class of x.
    /// Throws unless m is squarefree and irreducibility can be certified.
    NumberField(UPolyQ minpoly, std::string gen = "r");

    const UPolyQ& minpoly() const { return m_; }
    int degree() const { return static_cast<int>(m_.size()) - 1; }
    const std::string& generator_name() const { return gen_; }
    bool same_as(const NumberField& o) const { return m_ == o.m_; }

    UPolyQ reduce(const UPolyQ& p) const;

private:
    UPolyQ m_;
    std::string gen_;
};

/// True when p (deg <= 4) is shown irreducible over Q; false means "could not show it".
bool certify_irreducible(const UPolyQ& p);

/// Element of a number field; a null field means an embedded rational that
/// adopts the field of whatever it meets.
class AlgebraicNumber {
public:
    AlgebraicNumber() : c_{Rational(0)} {}
    AlgebraicNumber(long v) : c_{Rational(v)} {}
    AlgebraicNumber(int v) : c_{Rational(v)} {}
    AlgebraicNumber(const Rational& v) : c_{v} {}
    AlgebraicNumber(std::shared_ptr<const NumberField> f, UPolyQ coords);

    static AlgebraicNumber generator(std::shared_ptr<const NumberField> f);

    const std::shared_ptr<const NumberField>& field() const { return f_; }
    const UPolyQ& coords() const { return c_; }

    bool is_zero() const;
    bool is_one() const;
    bool is_rational() const;
    Rational rational_value() const; // throws unless is_rational()

    AlgebraicNumber inverse() const;
    AlgebraicNumber operator-() const;
    AlgebraicNumber& operator+=(const AlgebraicNumber& o);
    AlgebraicNumber& operator-=(const AlgebraicNumber& o);
    AlgebraicNumber& operator*=(const AlgebraicNumber& o);
    AlgebraicNumber& operator/=(const AlgebraicNumber& o) { return *this *= o.inverse(); }
    friend AlgebraicNumber operator+(AlgebraicNumber a, const AlgebraicNumber& b) { return a += b; }
    friend AlgebraicNumber operator-(AlgebraicNumber a, const AlgebraicNumber& b) { return a -= b; }
    friend AlgebraicNumber operator*(AlgebraicNumber a, const AlgebraicNumber& b) { return a *= b; }
    friend AlgebraicNumber operator/(AlgebraicNumber a, const AlgebraicNumber& b) { return a /= b; }
    friend bool operator==(const AlgebraicNumber& a, const AlgebraicNumber& b);

    bool is_square(AlgebraicNumber* root = nullptr) const; // only decides rational values
    std::string str() const;

private:
    std::shared_ptr<const NumberField> f_;
    UPolyQ c_;
    void adopt(const AlgebraicNumber& o);
};

std::ostream& operator<<(std::ostream& os, const AlgebraicNumber& a);

} // namespace k3

#endif
