#ifndef K3FIB_POLY_HPP
#define K3FIB_POLY_HPP

#include "k3fib/algebraic.hpp"
#include "k3fib/errors.hpp"
#include "k3fib/rational.hpp"

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace k3 {

// Variables are interned names; the id order is the declared variable order
// used for graded-lex sorting and printing.
using Var = std::uint32_t;
Var intern(std::string_view name);
const std::string& var_name(Var v);
std::optional<Var> lookup_var(std::string_view name);

/// Exponent vector relative to a polynomial's own variable list.
struct Mono {
    static constexpr int kMaxVars = 20;
    std::uint32_t deg = 0;
    std::array<std::uint16_t, kMaxVars> e{};
    friend bool operator==(const Mono&, const Mono&) = default;
};

/// Sparse multivariate polynomial over K (Rational or AlgebraicNumber).
/// Canonical form: the variable list holds exactly the variables that occur,
/// sorted by id; terms are sorted by descending graded-lex order; no zero
/// coefficients.
template <class K>
class Poly {
public:
    using Term = std::pair<Mono, K>;

    Poly() = default;
    Poly(const K& c);
    Poly(long c) : Poly(K(c)) {}
    Poly(int c) : Poly(K(static_cast<long>(c))) {}

    static Poly variable(Var v);
    static Poly variable(std::string_view name) { return variable(intern(name)); }
    /// c * prod vars[i]^exps[i]; vars need not be sorted
    static Poly monomial(const K& c, const std::vector<std::pair<Var, unsigned>>& powers);
    /// build from arbitrary (unsorted, possibly repeated) terms over the given variables
    static Poly from_terms(std::vector<Var> vars, std::vector<Term> terms);
    /// sum_i coeffs[i] * v^i
    static Poly from_coeffs(Var v, const std::vector<Poly>& coeffs);

    const std::vector<Var>& vars() const { return vars_; }
    const std::vector<Term>& terms() const { return terms_; }
    std::size_t nterms() const { return terms_.size(); }
    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const { return vars_.empty(); }
    bool is_one() const { return is_constant() && !is_zero() && terms_[0].second.is_one(); }
    bool contains(Var v) const;
    /// constant value; throws unless constant
    K constant_value() const;
    /// coefficient of the graded-lex leading term (0 for the zero polynomial)
    K leading_coeff() const { return is_zero() ? K(0) : terms_[0].second; }

    int degree(Var v) const;  // -1 for zero polynomial
    int total_degree() const; // -1 for zero polynomial
    /// coefficients of powers of v (index = exponent), each free of v
    std::vector<Poly> coeffs_in(Var v) const;
    Poly coeff_of(Var v, int e) const;
    Poly lc_in(Var v) const; // leading coefficient as a polynomial in v

    Poly operator-() const;
    Poly& operator+=(const Poly& o) { *this = *this + o; return *this; }
    Poly& operator-=(const Poly& o) { *this = *this - o; return *this; }
    Poly& operator*=(const Poly& o) { *this = *this * o; return *this; }
    friend Poly operator+(const Poly& a, const Poly& b) { return add_(a, b, false); }
    friend Poly operator-(const Poly& a, const Poly& b) { return add_(a, b, true); }
    friend Poly operator*(const Poly& a, const Poly& b) { return mul_(a, b); }
    Poly scaled(const K& c) const;
    Poly pow(unsigned e) const;

    friend bool operator==(const Poly& a, const Poly& b) { return a.vars_ == b.vars_ && a.terms_ == b.terms_; }

    Poly derivative(Var v) const;
    /// simultaneous substitution of variables by polynomials
    Poly substitute(const std::map<Var, Poly>& bindings) const;
    Poly substitute(Var v, const Poly& value) const { return substitute(std::map<Var, Poly>{{v, value}}); }
    /// v -> value, constant
    Poly evaluate(Var v, const K& value) const;
    /// homogenize/dehomogenize helpers are built from substitute

    /// exponent of v in every term is multiplied by k (v -> v^k)
    Poly inflate(Var v, unsigned k) const;
    /// v^d * f(1/v) where d >= degree(v)
    Poly reverse_in(Var v, int d) const;
    /// the largest power of v dividing f; f / v^k
    int min_degree(Var v) const;
    Poly shift_down(Var v, int k) const;

    template <class K2, class F>
    Poly<K2> map_coeffs(F&& fn) const {
        std::vector<typename Poly<K2>::Term> t;
        t.reserve(terms_.size());
        for (const auto& [m, c] : terms_) t.emplace_back(m, fn(c));
        return Poly<K2>::from_terms(vars_, std::move(t));
    }

    std::string str() const;

    /// rewrite onto a superset of variables (result not canonical; internal use)
    std::vector<Term> terms_over(const std::vector<Var>& target) const;

private:
    std::vector<Var> vars_;
    std::vector<Term> terms_;

    void canonicalize_vars();
    static Poly add_(const Poly& a, const Poly& b, bool negate_b);
    static Poly mul_(const Poly& a, const Poly& b);
    template <class L> friend class Poly;
};

template <class K> std::ostream& operator<<(std::ostream& os, const Poly<K>& p) { return os << p.str(); }

using QPoly = Poly<Rational>;
using APoly = Poly<AlgebraicNumber>;

/// Rational -> AlgebraicNumber coefficient lift.
APoly to_algebraic(const QPoly& p);
/// AlgebraicNumber -> Rational; throws if some coefficient is irrational.
QPoly to_rational(const APoly& p);

/// coefficient formatting hooks used by Poly::str
std::string coeff_str(const Rational& c);
std::string coeff_str(const AlgebraicNumber& c);
bool coeff_negative(const Rational& c);
bool coeff_negative(const AlgebraicNumber& c);

extern template class Poly<Rational>;
extern template class Poly<AlgebraicNumber>;

} // namespace k3

#endif
