#ifndef K3FIB_POLYALG_HPP
#define K3FIB_POLYALG_HPP

#include "k3fib/poly.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace k3 {

/// f / g when g divides f in K[vars]; nullopt otherwise.
template <class K> std::optional<Poly<K>> divide_exact(const Poly<K>& f, const Poly<K>& g);
/// f / g, throwing InconsistencyError when the division is not exact.
template <class K> Poly<K> div_exact(const Poly<K>& f, const Poly<K>& g);

/// Pseudo-remainder lc_v(g)^(deg f - deg g + 1) * f mod g, in the variable v.
template <class K> Poly<K> prem(const Poly<K>& f, const Poly<K>& g, Var v);

/// Res_v(f, g) computed by the subresultant PRS.
template <class K> Poly<K> resultant(const Poly<K>& f, const Poly<K>& g, Var v);
/// Res_v(f, f') / lc_v(f) with the usual sign.
template <class K> Poly<K> discriminant(const Poly<K>& f, Var v);

/// gcd of the coefficients of f in v (a polynomial free of v), normalized.
template <class K> Poly<K> content_in(const Poly<K>& f, Var v);
/// f / content_in(f, v), normalized in v.
template <class K> Poly<K> primitive_in(const Poly<K>& f, Var v);

/// Scale so the graded-lex leading coefficient is 1. Returns (removed unit, result).
template <class K> std::pair<K, Poly<K>> normalize(const Poly<K>& f);
/// Scale so the leading coefficient in v has graded-lex leading coefficient 1
/// (monic in v whenever that coefficient is a constant).
template <class K> std::pair<K, Poly<K>> normalize_in(const Poly<K>& f, Var v);

/// Full multivariate gcd over K, normalized.
template <class K> Poly<K> gcd(const Poly<K>& f, const Poly<K>& g);
/// gcd over K(other variables)[v]: primitive in v, normalized in v.
/// gcd(0, g) is the normalized primitive part of g.
template <class K> Poly<K> gcd_in(const Poly<K>& f, const Poly<K>& g, Var v);

template <class K>
struct SquarefreeDecomposition {
    Poly<K> unit;                              // free of v
    std::vector<std::pair<Poly<K>, int>> parts; // increasing multiplicity
};

/// Yun decomposition over K(other variables)[v].
/// unit * prod parts[i].first^parts[i].second == f exactly.
template <class K> SquarefreeDecomposition<K> squarefree_decompose(const Poly<K>& f, Var v);

/// Pairwise coprime (in v) polynomials of positive degree in v such that every
/// input is, up to a factor free of v, a product of outputs. Output sorted.
template <class K> std::vector<Poly<K>> coprime_refine(const std::vector<Poly<K>>& parts, Var v);

/// Multiplicity of the squarefree place p in f (p primitive in v, positive degree).
/// Returns -1 for f == 0 (infinite valuation).
template <class K> int valuation(const Poly<K>& f, const Poly<K>& p);

/// r with r*r == f and positive graded-lex leading coefficient sign, if one exists.
/// Irrational algebraic coefficients are never recognised as squares.
template <class K> std::optional<Poly<K>> sqrt_exact(const Poly<K>& f);

/// Canonical total order used to sort factor lists deterministically.
template <class K> bool poly_less(const Poly<K>& a, const Poly<K>& b);

} // namespace k3

#endif
