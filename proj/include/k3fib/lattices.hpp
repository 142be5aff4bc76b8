#ifndef K3FIB_LATTICES_HPP
#define K3FIB_LATTICES_HPP

#include "k3fib/kodaira.hpp"
#include "k3fib/rational.hpp"

#include <optional>
#include <string>
#include <vector>

namespace k3 {

struct LatticeSummand {
    char family = 'A'; // 'A', 'D', 'E'
    int index = 1;

    int rank() const { return index; }
    long disc_order() const;
    std::string str() const; // "A1", "D10", "E8"
    static LatticeSummand parse(std::string_view s);
    /// "A1,A1,D4" or "A1^2+D4" style lists; empty text -> empty list
    static std::vector<LatticeSummand> parse_list(std::string_view s);

    friend bool operator==(const LatticeSummand&, const LatticeSummand&) = default;
    friend auto operator<=>(const LatticeSummand&, const LatticeSummand&) = default;
};

/// "U + E8 + E8 + A1" style canonical text with exponents ("U + D4 + A1^4").
std::string lattice_string(const std::vector<LatticeSummand>& s);

std::optional<LatticeSummand> summand_of(const KodairaType& f);

/// Finite quadratic form on a product of cyclic groups, negative-definite fibre convention.
/// q values mod 2, bilinear values mod 1.
struct FiniteQuadraticForm {
    std::vector<long> orders;
    std::vector<Rational> q;
    std::vector<std::vector<Rational>> b; // symmetric; b[i][i] = q[i] mod 1
    // generator ranges per summand, filled by disc_form
    std::vector<std::pair<int, int>> summand_gens;

    int length() const { return static_cast<int>(orders.size()); }
    long order() const;
    bool two_elementary() const;
    /// element given by coordinates (x_i mod orders[i])
    Rational q_of(const std::vector<long>& x) const;
    Rational b_of(const std::vector<long>& x, const std::vector<long>& y) const;
    /// all elements in mixed-radix order
    std::vector<std::vector<long>> elements() const;
};

/// reduce into [0, 2) and [0, 1)
Rational mod2(const Rational& r);
Rational mod1(const Rational& r);

FiniteQuadraticForm disc_form(const std::vector<LatticeSummand>& summands);

struct FormInvariants {
    int a = 0;
    int delta = 0;
    int brown = 0;
};

/// Exact Gauss-sum phase: sum over x of exp(pi i q(x)) = sqrt(|G|) exp(2 pi i brown / 8).
int brown_invariant(const FiniteQuadraticForm& f);

/// 2-elementary forms only; throws MathError otherwise.
FormInvariants form_invariants(const FiniteQuadraticForm& f);

enum class GlueChoice { identity, a1, d_near, d_far, e7 };

struct GlueVector {
    std::vector<GlueChoice> choice; // one per summand
    std::string str() const;
    friend bool operator==(const GlueVector&, const GlueVector&) = default;
};

/// positive height contribution of a component choice on a summand
Rational glue_contribution(const LatticeSummand& s, GlueChoice c);

/// sum of contributions over the summands
Rational glue_total(const std::vector<LatticeSummand>& summands, const GlueVector& g);

/// All assignments with total contribution exactly 4, far components of D taken as s (not c).
std::vector<GlueVector> two_torsion_glues(const std::vector<LatticeSummand>& summands);

/// the glue as a group element of disc_form(summands)
std::vector<long> glue_element(const FiniteQuadraticForm& f, const std::vector<LatticeSummand>& summands,
                               const GlueVector& g);

/// e^perp / <e> for an isotropic element e of a 2-elementary form; throws if not isotropic.
FiniteQuadraticForm glue_quotient(const FiniteQuadraticForm& f, const std::vector<long>& e);

/// T >= 1 with T^2 * 2^a == disc_order
std::vector<long> torsion_order_bound(long trivial_disc_order, int target_a);

} // namespace k3

#endif
