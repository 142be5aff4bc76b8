#ifndef K3FIB_KODAIRA_HPP
#define K3FIB_KODAIRA_HPP

#include "k3fib/weierstrass.hpp"

#include <compare>
#include <optional>
#include <string>
#include <vector>

namespace k3 {

struct KodairaType {
    enum class Kind { In, Instar, II, III, IV, IVstar, IIIstar, IIstar };
    Kind kind = Kind::In;
    int n = 0; // only for In / Instar

    static KodairaType I(int n) { return {Kind::In, n}; }
    static KodairaType Istar(int n) { return {Kind::Instar, n}; }

    int euler() const;
    bool reduced() const; // I_n, II, III, IV
    /// "I18", "I6*", "III*", "II"
    std::string str() const;
    /// inverse of str(); throws MathError
    static KodairaType parse(std::string_view s);

    friend bool operator==(const KodairaType&, const KodairaType&) = default;
    /// display order: II*, III*, IV* first, then I_n*, then the rest; Euler number descending
    /// inside each group, I_n before II/III/IV on ties
    friend bool display_before(const KodairaType& a, const KodairaType& b);
    friend auto operator<=>(const KodairaType& a, const KodairaType& b) {
        if (a.kind != b.kind) return a.kind <=> b.kind;
        return a.n <=> b.n;
    }
};

/// A valuation that may be infinite (the polynomial vanishes identically).
using Val = std::optional<int>;

/// Kodaira type from (v(c4), v(c6), v(delta)) of a minimal model, residue characteristic 0.
/// Throws InconsistencyError for triples outside the table.
KodairaType classify_valuations(Val a, Val b, int d);

/// I_n -> I_2n, II -> IV, III -> I0*, IV -> IV*; throws MathError for non-reduced input.
KodairaType branch_fiber_transform(const KodairaType& f);

template <class K>
struct Place {
    bool infinite = false;
    Poly<K> p; // monic in t, squarefree
    int degree = 1;
    std::string str() const { return infinite ? "infinity" : p.str(); }
};

template <class K>
struct FiberEntry {
    Place<K> place;
    KodairaType type;
    Val v_c4, v_c6;
    int v_delta = 0;
};

/// Canonical text for a multiset of types: "2 II* + IV", "I12* + I3 + 3 I1".
std::string fiber_string(const std::vector<KodairaType>& fibers);
/// Inverse of fiber_string; also accepts compact and TeX-like forms ("2II^*+I_{2}").
std::vector<KodairaType> parse_fiber_string(std::string_view s);

template <class K>
struct FiberConfiguration {
    std::vector<FiberEntry<K>> entries; // singular fibres only
    int chi = 2;
    /// one entry per geometric fibre (finite places counted with their degree)
    std::vector<KodairaType> fibers() const;
    int euler() const;
    std::string str() const { return fiber_string(fibers()); }
};

template <class K>
std::vector<std::pair<Place<K>, int>> places_of_discriminant(const WeierstrassModel<K>& m);

template <class K> KodairaType classify_place(const WeierstrassModel<K>& m, const Place<K>& place);

/// minimalize, decompose, classify; asserts Euler sum 12 chi.
template <class K> FiberConfiguration<K> fiber_configuration(const WeierstrassModel<K>& m);

/// rank of the root lattice summand of a fibre (0 for I0, I1, II)
int lattice_rank(const KodairaType& f);

/// Shioda-Tate: picard - 2 - sum of fibre lattice ranks; throws MathError if negative.
int mw_rank(const std::vector<KodairaType>& fibers, int picard_number);

} // namespace k3

#endif
