#ifndef K3FIB_CLASSIFIER_HPP
#define K3FIB_CLASSIFIER_HPP

#include "k3fib/lattices.hpp"

#include <map>
#include <string>
#include <vector>

namespace k3 {

struct NikulinInvariants {
    int g = 1, k = 0, r = 0, a = 0, delta = 1;
    /// r = 11 + k - g, a = r - 2k; throws RegistryError for an inadmissible (g, k, delta)
    static NikulinInvariants make(int g, int k, int delta);
};

/// (g, k, delta) triples with a classification table
bool admissible(int g, int k, int delta);
std::vector<int> admissible_deltas(int g, int k);
std::vector<NikulinInvariants> all_admissible();

struct MWGroup {
    int rank = 0;
    std::vector<int> torsion; // cyclic factor orders, e.g. {2} or {3}
    std::string str() const;  // "{1}", "Z/2Z", "Z x Z/2Z", "Z^6"
    static MWGroup parse(std::string_view s);
    friend bool operator==(const MWGroup&, const MWGroup&) = default;
};

struct FibrationRecord {
    int g = 1, k = 0, delta = 1;
    int type = 1; // 1: a fixed curve is a section; 2: induced by base change
    std::vector<LatticeSummand> summands;
    std::vector<KodairaType> fibers;
    std::vector<int> s; // special curves per reducible fibre (type 2: one entry, k)
    std::vector<int> c; // non-identity components per reducible fibre
    int sections = 1;
    MWGroup mw;
    std::string label; // golden id, "EXTRA" if unmatched
};

/// special curve and component counts of a fibre summand
int special_count(const LatticeSummand& s);
KodairaType fibre_of(const LatticeSummand& s);

/// sum c = r - 2 (+ MW rank for type 2), sum s + sections = k; throws InconsistencyError
void check_record(const FibrationRecord& rec);

std::vector<FibrationRecord> enumerate_type1(const NikulinInvariants& inv);
FibrationRecord type2_row(int k, int delta);
/// delta -> records, type 2 row first for g = 1
std::map<int, std::vector<FibrationRecord>> full_table(int g, int k);

struct GoldenRow {
    std::string id;
    int g = 1, k = 0, delta = 1;
    std::vector<LatticeSummand> summands;
    std::vector<int> c;
    int mw_rank = 0;
    std::vector<int> s;
    int sections = 1;
    MWGroup mw;
};

struct Erratum {
    std::string id;
    std::string field; // "s", "c", "sections", "mw"
    std::string printed, corrected;
    std::string justification;
};

enum class DiffStatus { match, errata, mismatch, extra, missing };
std::string to_string(DiffStatus s);

struct DiffLine {
    DiffStatus status = DiffStatus::match;
    std::string id;
    int g = 1, k = 0, delta = 1;
    std::string detail;
};

/// text form of an integer vector as printed in the tables: "3+4"
std::string join_plus(const std::vector<int>& v);

/// Compare the records of one (g, k) table, all deltas, with its golden rows. Labels the records.
std::vector<DiffLine> diff_block(std::vector<FibrationRecord>& records, const std::vector<GoldenRow>& golden,
                                 const std::vector<Erratum>& errata);

std::string render_table(const std::vector<FibrationRecord>& records);

} // namespace k3

#endif
