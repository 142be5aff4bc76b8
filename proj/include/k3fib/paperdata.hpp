#ifndef K3FIB_PAPERDATA_HPP
#define K3FIB_PAPERDATA_HPP

#include "k3fib/classifier.hpp"
#include "k3fib/kodaira.hpp"

#include <array>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace k3 {

/// $K3FIB_DATA if set, else the directory baked in at build time
std::filesystem::path data_dir();

struct GoldenBlock {
    int g = 1, k = 0, r = 0, a = 0;
    std::vector<int> deltas;
    std::vector<GoldenRow> rows;
};

struct TableRegistry {
    std::vector<GoldenBlock> blocks;
    std::vector<Erratum> errata;
    std::vector<std::string> notes;
    const GoldenBlock* find(int g, int k) const;
};

/// parsed and validated classification tables; throws RegistryError listing the violated invariant
TableRegistry load_tables();

/// full_table + diff_block for every golden block with g in [g_min, g_max]
std::vector<DiffLine> verify_classification(const TableRegistry& reg, int g_min, int g_max);

// ---- families, specialization tables, base-change rows ----

struct PencilFixture {
    std::string name, text, pencil_var, truncation, infinity;
};

struct ConicRecipe {
    std::string f3, g3, pencil;
    std::optional<std::array<std::string, 3>> basepoint;
};

struct BaseChangeRecipe {
    std::string base, mu1;
};

struct FamilyFixture {
    std::string name, title;
    int chi = 2;
    std::string t;
    std::string A, B; // displayed model, empty when only a recipe is given
    std::optional<ConicRecipe> conic;
    std::optional<BaseChangeRecipe> base_change;
    std::string delta_int;       // optional exact 4A^3 + 27B^2
    std::string displayed_delta; // optional displayed discriminant, compared up to units and multiplicities
    std::string expected;        // generic fibre string
    std::string mw;
    int rho = 0;
    bool has_model() const { return !A.empty(); }
};

/// parameter bindings; values are infix text in the remaining (or new) parameters and in `gen`
struct Assignment {
    std::map<std::string, std::string> values;
    std::string minpoly, gen; // empty: rational assignment
    std::string str() const;
};

struct SpecCell {
    std::string fibers, mw;
};

struct SpecRow {
    std::string label, transcendental, sample;
    long disc_T = 0; // 0: not stated
    int rho = 0;
    std::vector<Assignment> assignments;
    std::map<std::string, SpecCell> cells; // family name -> expected cell
};

struct SpecTable {
    std::string id, title;
    std::vector<std::string> families;
    std::vector<SpecRow> rows;
};

struct BaseChangeRow {
    std::string branch, others, mw, model;
    int r = 0, a = 0, delta = 1, k = 0;
};

struct WorkedExampleRow {
    int k = 0;
    std::string printed, id;
    int delta = 1;
};

struct WorkedExample {
    std::string cubic_at_infinity, pencil, lines, t;
    std::vector<WorkedExampleRow> rows;
};

struct RecipeNote {
    std::string id, base_points, type, fibration;
    int delta = 1, degree = 1;
};

struct FamilyErratum {
    std::string location, field, printed, corrected, justification;
};

struct FamilyRegistry {
    std::vector<PencilFixture> pencils;
    std::vector<FamilyFixture> families;
    std::vector<SpecTable> tables;
    std::vector<BaseChangeRow> base_change_rows;
    WorkedExample worked_example;
    std::vector<RecipeNote> recipes;
    std::vector<FamilyErratum> errata;

    /// throws RegistryError for an unknown name
    const FamilyFixture& family(std::string_view name) const;
    const PencilFixture& pencil(std::string_view name) const;
    const SpecTable& table(std::string_view id) const;
    /// erratum for a table cell ("<table>/<row label>/<family>") and field, if registered
    const FamilyErratum* erratum(const std::string& location, const std::string& field) const;
};

/// parsed and validated families.json
const FamilyRegistry& load_families();

/// the model of a family: the displayed one, or built from its recipe (base change or conic pipeline)
WeierstrassModel<Rational> family_model(const FamilyFixture& f);
/// model rebuilt from the recipe even when a displayed model exists; throws if there is no recipe
WeierstrassModel<Rational> recipe_model(const FamilyFixture& f);
/// same, with the parameters bound before the construction
WeierstrassModel<Rational> recipe_model(const FamilyFixture& f, const std::map<Var, QPoly>& bindings);

/// branch sextic of the worked example for a2 = ... = ak = 0
std::pair<QPoly, QPoly> worked_example_sextic(const FamilyRegistry& reg, int k);

/// One branch-fibre row checked at the lattice level, and on a sample rational model when one exists.
struct BaseChangeReport {
    BaseChangeRow row;
    KodairaType branch, k3_fibre;                 // fibre at infinity before and after the base change
    NikulinInvariants inv;                        // (r, a, delta) of (g = 1, k)
    std::vector<LatticeSummand> trivial_roots;    // root part of the K3 trivial lattice
    int rational_rank = 0, k3_rank = 0;           // Shioda-Tate with rho = 10 and rho = r
    std::string sample;                           // "" when no sample model is available
    std::string rational_config, k3_config, expected_k3_config;
    std::vector<std::string> failures;
    bool ok() const { return failures.empty(); }
};
std::vector<BaseChangeReport> verify_base_change_rows(const FamilyRegistry& reg);

/// Line pencil on the k-family sextic, compared with the classifier row the registry names.
struct WorkedExampleReport {
    WorkedExampleRow row;
    std::string configuration;         // full computed configuration
    std::string reducible, expected;   // reducible fibres: computed, and of the classifier row `row.id`
    DiffStatus status = DiffStatus::match;
    std::string note;
};
/// rows with k_min <= k <= k_max; below k = 4 the pipeline takes seconds to minutes per row
std::vector<WorkedExampleReport> verify_worked_example(const FamilyRegistry& reg, int k_min, int k_max);

/// reducible fibres of the classifier record labelled `id` in the (g = 1, k) table
std::string classifier_row_fibres(int k, const std::string& id);

struct FixtureInfo {
    std::string name, kind, description;
};
/// everything `load` can return, in registry order
std::vector<FixtureInfo> list_fixtures();

} // namespace k3

#endif
