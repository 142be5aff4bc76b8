#ifndef K3FIB_CONICBUNDLE_HPP
#define K3FIB_CONICBUNDLE_HPP

#include "k3fib/kodaira.hpp"

#include <array>
#include <optional>
#include <vector>

namespace k3 {

/// Plane coordinates (x0 : x1 : x2); projection is from (0:1:0).
struct PlaneCoords {
    Var x0, x1, x2;
    static PlaneCoords named(std::string_view a, std::string_view b, std::string_view c) {
        return {intern(a), intern(b), intern(c)};
    }
};

/// total degree in vars when every term has the same one; nullopt otherwise (and for 0)
template <class K> std::optional<int> homogeneous_degree(const Poly<K>& p, const std::vector<Var>& vars);

/// w^2 = f3 g3 with both factors cubic forms in the plane coordinates
template <class K>
struct BranchSextic {
    Poly<K> f3, g3;
    PlaneCoords xs;
    /// throws MathError: not cubic forms, or the product is a square
    void check() const;
};

/// h(x0:x1:x2, tau), a form of degree e in the plane coordinates, linear in tau
template <class K>
struct ConicBundlePencil {
    Poly<K> h;
    Var tau;
    int e = 0;
    /// fills e; throws MathError when h is not a form, not linear in tau, or e > 3
    void check(const PlaneCoords& xs);
};

/// projective change x = M x' sending (0:1:0) to the point p; applied to both objects
template <class K>
std::pair<BranchSextic<K>, ConicBundlePencil<K>> normalize_basepoint(const BranchSextic<K>& s,
                                                                   const ConicBundlePencil<K>& h,
                                                                   const std::array<K, 3>& p);

/// old coordinate -> linear form in the new ones
template <class K> using LinearChange = std::array<Poly<K>, 3>;
template <class K> BranchSextic<K> transform(const BranchSextic<K>& s, const LinearChange<K>& m);
template <class K> ConicBundlePencil<K> transform(const ConicBundlePencil<K>& h, const PlaneCoords& xs, const LinearChange<K>& m);

/// Res_{x1}(f, h) L^(deg f - deg_{x1} f) for the factors f of f3, g3 (coordinate lines split off), where
/// h = x1 L + Q: the pullback along the parametrization (x0 L : -Q : x2 L). Equal to Res_{x1}(f3 g3, h)
/// when L = 1.
template <class K>
std::vector<Poly<K>> project_resultant_factors(const BranchSextic<K>& s, const ConicBundlePencil<K>& h);
template <class K> Poly<K> project_resultant(const BranchSextic<K>& s, const ConicBundlePencil<K>& h);

/// r = a^2 b c exactly; a, b forms in (x0, x2), c free of both, deg b = 4
template <class K>
struct SquareSplit {
    Poly<K> a, b, c;
    std::vector<Poly<K>> odd_parts; // factors of b (forms), x2 included when it occurs
};

/// r given as a product of forms in (x0, x2) with the total degree per factor known from homogeneity
template <class K> SquareSplit<K> square_split(const std::vector<Poly<K>>& r_factors, const PlaneCoords& xs);
template <class K> SquareSplit<K> square_split(const Poly<K>& r, const PlaneCoords& xs) {
    return square_split(std::vector<Poly<K>>{r}, xs);
}

/// w^2 = c b in the chart x0/x2 (or x2/x0 when that keeps the degree), with a section when one is visible
template <class K> QuarticModel<K> genus1_model(const SquareSplit<K>& sp, const PlaneCoords& xs, Var tau);

template <class K>
struct PipelineResult {
    SquareSplit<K> split;
    QuarticModel<K> quartic;
    WeierstrassModel<K> model;
    FiberConfiguration<K> config;
};

/// project_resultant -> square_split -> genus1_model -> quartic_to_weierstrass -> fiber_configuration
template <class K> PipelineResult<K> run_pipeline(const BranchSextic<K>& s, ConicBundlePencil<K> h);

} // namespace k3

#endif
