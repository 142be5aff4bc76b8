#ifndef K3FIB_WEIERSTRASS_HPP
#define K3FIB_WEIERSTRASS_HPP

#include "k3fib/polyalg.hpp"

#include <optional>
#include <string>

namespace k3 {

/// Short Weierstrass model Y^2 = X^3 + A X + B over K(params)[t].
/// chi = 1 for rational elliptic surfaces, 2 for K3 surfaces.
template <class K>
struct WeierstrassModel {
    Poly<K> A, B;
    Var t = 0;
    int chi = 2;

    /// 4A^3 + 27B^2
    Poly<K> delta_int() const;
    /// throws MathError when the degree bounds of chi are violated or delta_int == 0
    void check() const;
};

template <class K>
struct Invariants {
    Poly<K> c4, c6, delta_int, delta_std;
};

/// c4 = -48A, c6 = -864B, delta_std = -16 delta_int; throws on delta_int == 0.
template <class K> Invariants<K> invariants(const WeierstrassModel<K>& m);

/// j = c4^3 / delta_std reduced by the full multivariate gcd: (numerator, denominator),
/// denominator normalized.
template <class K> std::pair<Poly<K>, Poly<K>> j_invariant(const WeierstrassModel<K>& m);

/// Remove p^4, p^6 at every finite place p; throws if the result violates the
/// degree bounds of chi.
template <class K> WeierstrassModel<K> minimalize(const WeierstrassModel<K>& m);
/// false when v_inf(A) >= 4 and v_inf(B) >= 6 in the chart of weights (4 chi, 6 chi)
template <class K> bool minimal_at_infinity(const WeierstrassModel<K>& m);

/// mu -> tau^2 + mu1 on a chi = 1 model in mu; result is chi = 2 in tau, minimalized.
/// Throws MathError("branch fiber not reduced") if the branch fibres were not reduced.
template <class K>
WeierstrassModel<K> quadratic_base_change(const WeierstrassModel<K>& m, const Poly<K>& mu1, Var tau);

/// Genus one model w^2 = q(x) with q of degree 3 or 4 in x, coefficients in K(params)[t].
template <class K>
struct QuarticModel {
    enum class Section { none, at_infinity, point, infinite_root };
    Poly<K> q;
    Var x = 0, t = 0;
    Section section = Section::none;
    // point section x = num/den with w = 0
    Poly<K> num, den;
};

/// Classical invariants of a x^4 + b x^3 + c x^2 + d x + e.
template <class K> std::pair<Poly<K>, Poly<K>> quartic_IJ(const Poly<K>& q, Var x);

/// Jacobian model A = -27 I, B = -27 J, minimalized. Requires a declared section.
template <class K> WeierstrassModel<K> quartic_to_weierstrass(const QuarticModel<K>& qm, int chi = 2);

/// Explicit birational transformation using the declared section (before minimalization).
/// Used to cross-check the invariant path.
template <class K> WeierstrassModel<K> quartic_to_weierstrass_via_point(const QuarticModel<K>& qm, int chi = 2);

/// Substitutes the forward map into the cubic and the inverse map into the quartic;
/// true when both reduce to multiples of the target curve equation.
template <class K> bool quartic_point_roundtrip(const QuarticModel<K>& qm);

extern template struct WeierstrassModel<Rational>;
extern template struct WeierstrassModel<AlgebraicNumber>;

} // namespace k3

#endif
