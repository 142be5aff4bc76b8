#ifndef K3FIB_SPECIALIZE_HPP
#define K3FIB_SPECIALIZE_HPP

#include "k3fib/paperdata.hpp"

#include <optional>
#include <string>
#include <vector>

namespace k3 {

struct FamilyHandle {
    std::string name;
    WeierstrassModel<Rational> model;
    std::vector<std::string> params; // sorted names
    int rho_generic = 0;
    const FamilyFixture* fixture = nullptr; // recipe for rebuilding, may be null

    /// cached generic configuration
    const FiberConfiguration<Rational>& generic() const;

    static FamilyHandle from_registry(std::string_view name);
    static FamilyHandle from_model(std::string name, WeierstrassModel<Rational> m, int rho_generic);

private:
    mutable std::optional<FiberConfiguration<Rational>> generic_;
};

/// Conditions on the parameters under which discriminant zeros collide: squarefree parts of the
/// t-discriminant of each squarefree factor of delta, of the pairwise resultants, and of the
/// leading coefficient (collision with t = infinity). Only conditions involving `param` are kept;
/// parameter factors of the generic discriminant's content are excluded. Throws MathError for an
/// isotrivial family.
std::vector<QPoly> jump_candidates(const FamilyHandle& fam, std::string_view param);

struct DegenerationReport {
    Assignment assignment;
    std::vector<KodairaType> generic_fibers, special_fibers;
    std::vector<std::string> merged_places; // generic places that meet at the specialization
    std::optional<int> rho;                 // supplied by the caller
    std::optional<int> mw_rank;             // Shioda-Tate for the special configuration
    std::optional<int> mw_rank_delta;
    long trivial_disc = 1;                  // |disc| of the special trivial lattice
    std::vector<long> torsion_candidates;   // orders allowed by the discriminants
    bool rebuilt = false;                   // the model was rebuilt from the recipe

    std::string special_str() const { return fiber_string(special_fibers); }
};

/// The assignment binds parameters to polynomials in new parameters or to elements of Q(gen).
/// rho: Picard number of the special member, when known; disc_T: |det| of its transcendental lattice.
DegenerationReport specialize_at(const FamilyHandle& fam, const Assignment& assignment, std::optional<int> rho = std::nullopt,
                                 long disc_T = 0);

/// |disc| of the trivial lattice of a configuration (product of component group orders)
long trivial_disc_order(const std::vector<KodairaType>& fibers);

/// torsion orders compatible with the lattices: for rank 0 and known disc_T exactly sqrt(trivial/disc_T),
/// otherwise every n with n^2 dividing the trivial discriminant
std::vector<long> torsion_candidates(const std::vector<KodairaType>& fibers, std::optional<int> mw_rank, long disc_T);

struct CellReport {
    std::string table, row, family, assignment;
    std::string expected_fibers, computed_fibers;
    std::string expected_mw;
    std::optional<int> computed_rank;
    std::vector<long> torsion_candidates;
    DiffStatus fibers_status = DiffStatus::match;
    DiffStatus mw_status = DiffStatus::match;
    bool torsion_consistent = true;
    std::string note; // erratum justification or mismatch detail

    DiffStatus status() const;
};

/// specialize_at for every (row, family, assignment) of a registry table
std::vector<CellReport> verify_table(const FamilyRegistry& reg, const std::string& table_id);

} // namespace k3

#endif
