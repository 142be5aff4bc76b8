#include "k3fib/classifier.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>
#include <tuple>

namespace k3 {

namespace {

// table headers: for each g, the k values and the deltas present
struct HeaderEntry {
    int g, k;
    std::vector<int> deltas;
};

const std::vector<HeaderEntry>& headers() {
    static const std::vector<HeaderEntry> h = [] {
        std::vector<HeaderEntry> v;
        for (int k = 1; k <= 9; ++k) v.push_back({1, k, (k == 4 || k == 8) ? std::vector<int>{0, 1} : std::vector<int>{1}});
        v.push_back({2, 9, {0}});
        for (int k = 8; k >= 1; --k) v.push_back({2, k, k == 5 ? std::vector<int>{0, 1} : std::vector<int>{1}});
        v.push_back({3, 6, {0}});
        for (int k = 5; k >= 1; --k) v.push_back({3, k, k == 2 ? std::vector<int>{0, 1} : std::vector<int>{1}});
        for (int k = 5; k >= 1; --k) v.push_back({4, k, k == 3 ? std::vector<int>{0, 1} : std::vector<int>{1}});
        for (int k = 5; k >= 1; --k) v.push_back({5, k, k == 4 ? std::vector<int>{0, 1} : std::vector<int>{1}});
        v.push_back({6, 5, {0}});
        for (int k = 4; k >= 1; --k) v.push_back({6, k, {1}});
        // printed as delta = 1; U + D4 forces 0 (errata)
        v.push_back({7, 2, {0}});
        v.push_back({7, 1, {1}});
        v.push_back({8, 1, {1}});
        v.push_back({9, 1, {1}});
        v.push_back({10, 1, {0}});
        return v;
    }();
    return h;
}

} // namespace

NikulinInvariants NikulinInvariants::make(int g, int k, int delta) {
    if (!admissible(g, k, delta))
        throw RegistryError("no classification table for g=" + std::to_string(g) + ", k=" + std::to_string(k) +
                            ", delta=" + std::to_string(delta));
    NikulinInvariants inv;
    inv.g = g;
    inv.k = k;
    inv.delta = delta;
    inv.r = 11 + k - g;
    inv.a = inv.r - 2 * k;
    if (2 * g != 22 - inv.r - inv.a || 2 * k != inv.r - inv.a) throw InconsistencyError("Nikulin invariants");
    return inv;
}

bool admissible(int g, int k, int delta) {
    auto d = admissible_deltas(g, k);
    return std::find(d.begin(), d.end(), delta) != d.end();
}

std::vector<int> admissible_deltas(int g, int k) {
    for (const auto& h : headers())
        if (h.g == g && h.k == k) return h.deltas;
    return {};
}

std::vector<NikulinInvariants> all_admissible() {
    std::vector<NikulinInvariants> out;
    for (const auto& h : headers())
        for (int d : h.deltas) out.push_back(NikulinInvariants::make(h.g, h.k, d));
    return out;
}

std::string MWGroup::str() const {
    std::string out;
    if (rank == 1) out = "Z";
    else if (rank > 1) out = "Z^" + std::to_string(rank);
    for (int t : torsion) {
        if (!out.empty()) out += " x ";
        out += "Z/" + std::to_string(t) + "Z";
    }
    return out.empty() ? "{1}" : out;
}

MWGroup MWGroup::parse(std::string_view s) {
    std::string t;
    for (char c : s)
        if (c != ' ') t += c;
    MWGroup g;
    if (t == "{1}" || t == "1" || t == "trivial") return g;
    std::size_t pos = 0;
    while (pos < t.size()) {
        std::size_t nxt = t.find('x', pos);
        std::string part = t.substr(pos, nxt == std::string::npos ? std::string::npos : nxt - pos);
        pos = nxt == std::string::npos ? t.size() : nxt + 1;
        if (part == "Z") g.rank += 1;
        else if (part.rfind("Z^", 0) == 0) g.rank += std::stoi(part.substr(2));
        else if (part.rfind("Z/", 0) == 0) {
            std::string n = part.substr(2);
            if (!n.empty() && n.back() == 'Z') n.pop_back();
            g.torsion.push_back(std::stoi(n));
        } else
            throw MathError("bad Mordell-Weil group text: " + std::string(s));
    }
    return g;
}

int special_count(const LatticeSummand& s) {
    if (s.family == 'A' && s.index == 1) return 0;
    if (s.family == 'D' && s.index % 2 == 0) return (s.index - 4) / 2 + 1;
    if (s.family == 'E' && s.index == 7) return 3;
    if (s.family == 'E' && s.index == 8) return 4;
    throw MathError("summand " + s.str() + " does not occur for a type 1 fibration");
}

KodairaType fibre_of(const LatticeSummand& s) {
    switch (s.family) {
    case 'A':
        if (s.index == 1) return KodairaType::I(2);
        return KodairaType::I(s.index + 1);
    case 'D': return KodairaType::Istar(s.index - 4);
    default:
        if (s.index == 6) return {KodairaType::Kind::IVstar, 0};
        if (s.index == 7) return {KodairaType::Kind::IIIstar, 0};
        return {KodairaType::Kind::IIstar, 0};
    }
}

void check_record(const FibrationRecord& rec) {
    int r = 11 + rec.k - rec.g;
    int sc = std::accumulate(rec.c.begin(), rec.c.end(), 0);
    int ss = std::accumulate(rec.s.begin(), rec.s.end(), 0);
    if (sc + rec.mw.rank != r - 2)
        throw InconsistencyError("record " + lattice_string(rec.summands) + ": sum c + rank MW != r - 2");
    if (ss + rec.sections != rec.k)
        throw InconsistencyError("record " + lattice_string(rec.summands) + ": sum s + sections != k");
    if (rec.fibers.size() != rec.summands.size()) throw InconsistencyError("fibres and summands differ in number");
    for (std::size_t i = 0; i < rec.fibers.size(); ++i) {
        auto back = summand_of(rec.fibers[i]);
        if (!back || *back != rec.summands[i]) throw InconsistencyError("fibre " + rec.fibers[i].str() + " does not give " + rec.summands[i].str());
    }
    if (rec.g > 3 && !rec.mw.torsion.empty()) throw InconsistencyError("torsion section for g > 3");
    int euler = 0;
    for (const auto& f : rec.fibers) euler += f.euler();
    if (euler > 22) throw InconsistencyError("Euler budget exceeded");
}

namespace {

struct Candidate {
    LatticeSummand s;
    int c, e;
};

FibrationRecord make_type1(const NikulinInvariants& inv, const std::vector<LatticeSummand>& sum, bool torsion) {
    FibrationRecord rec;
    rec.g = inv.g;
    rec.k = inv.k;
    rec.delta = inv.delta;
    rec.type = 1;
    rec.summands = sum;
    for (const auto& x : sum) {
        rec.fibers.push_back(fibre_of(x));
        rec.s.push_back(special_count(x));
        rec.c.push_back(x.rank());
    }
    rec.sections = torsion ? 2 : 1;
    if (torsion) rec.mw.torsion = {2};
    return rec;
}

} // namespace

std::vector<FibrationRecord> enumerate_type1(const NikulinInvariants& inv) {
    const int target_c = inv.r - 2;
    std::vector<Candidate> cands;
    cands.push_back({{'E', 8}, 8, 10});
    cands.push_back({{'E', 7}, 7, 9});
    for (int m = 2 * (target_c / 2); m >= 4; m -= 2) cands.push_back({{'D', m}, m, m + 2});
    cands.push_back({{'A', 1}, 1, 2});

    std::vector<FibrationRecord> out;
    std::vector<LatticeSummand> cur;
    auto consider = [&]() {
        int ss = 0;
        for (const auto& x : cur) ss += special_count(x);
        auto form = disc_form(cur);
        if (ss == inv.k - 1) {
            auto fi = form_invariants(form);
            if (fi.a == inv.a && fi.delta == inv.delta) out.push_back(make_type1(inv, cur, false));
        }
        if (inv.g <= 3 && ss == inv.k - 2 && form.length() == inv.a + 2) {
            for (const auto& glue : two_torsion_glues(cur)) {
                auto q = glue_quotient(form, glue_element(form, cur, glue));
                auto fi = form_invariants(q);
                if (fi.a == inv.a && fi.delta == inv.delta) {
                    out.push_back(make_type1(inv, cur, true));
                    break;
                }
            }
        }
    };
    // multisets in candidate order; Euler budget leaves room for two more singular fibres
    std::function<void(std::size_t, int, int)> rec = [&](std::size_t from, int c, int e) {
        if (c == target_c) {
            consider();
            return;
        }
        for (std::size_t i = from; i < cands.size(); ++i) {
            if (c + cands[i].c > target_c || e + cands[i].e > 22) continue;
            cur.push_back(cands[i].s);
            rec(i, c + cands[i].c, e + cands[i].e);
            cur.pop_back();
        }
    };
    rec(0, 0, 0);
    for (const auto& r : out) check_record(r);
    return out;
}

FibrationRecord type2_row(int k, int delta) {
    if (k < 1 || k > 9) throw MathError("type 2 rows need 1 <= k <= 9");
    if (!admissible(1, k, delta)) throw RegistryError("no type 2 row for k=" + std::to_string(k) + ", delta=" + std::to_string(delta));
    FibrationRecord rec;
    rec.g = 1;
    rec.k = k;
    rec.delta = delta;
    rec.type = 2;
    KodairaType branch = (k == 4 && delta == 0) ? KodairaType{KodairaType::Kind::IV, 0} : KodairaType::I(k);
    KodairaType fib = branch_fiber_transform(branch);
    auto sum = summand_of(fib);
    if (!sum) throw InconsistencyError("branch fibre without a root lattice");
    rec.summands = {*sum};
    rec.fibers = {fib};
    rec.c = {sum->rank()};
    rec.s = {k};
    rec.sections = 0;
    rec.mw.rank = mw_rank({fib}, 10 + k);
    if (k == 9) rec.mw.torsion = {3};
    if (k == 8 && delta == 0) rec.mw.torsion = {2};
    check_record(rec);
    return rec;
}

std::map<int, std::vector<FibrationRecord>> full_table(int g, int k) {
    auto deltas = admissible_deltas(g, k);
    if (deltas.empty())
        throw RegistryError("no classification table for g=" + std::to_string(g) + ", k=" + std::to_string(k));
    std::map<int, std::vector<FibrationRecord>> out;
    for (int d : deltas) {
        auto& v = out[d];
        if (g == 1) v.push_back(type2_row(k, d));
        for (auto& r : enumerate_type1(NikulinInvariants::make(g, k, d))) v.push_back(std::move(r));
    }
    return out;
}

std::string to_string(DiffStatus s) {
    switch (s) {
    case DiffStatus::match: return "MATCH";
    case DiffStatus::errata: return "ERRATA";
    case DiffStatus::mismatch: return "MISMATCH";
    case DiffStatus::extra: return "EXTRA";
    case DiffStatus::missing: return "MISSING";
    }
    return "?";
}

std::string join_plus(const std::vector<int>& v) {
    std::string out;
    for (int x : v) {
        if (!out.empty()) out += "+";
        out += std::to_string(x);
    }
    return out;
}

namespace {

std::vector<LatticeSummand> sorted(std::vector<LatticeSummand> v) {
    std::sort(v.begin(), v.end());
    return v;
}

} // namespace

std::vector<DiffLine> diff_block(std::vector<FibrationRecord>& records, const std::vector<GoldenRow>& golden,
                                 const std::vector<Erratum>& errata) {
    std::vector<DiffLine> out;
    std::vector<bool> used(records.size(), false);
    for (auto& r : records) r.label = "EXTRA";
    for (const auto& row : golden) {
        DiffLine line;
        line.id = row.id;
        line.g = row.g;
        line.k = row.k;
        line.delta = row.delta;
        std::size_t hit = records.size();
        // same delta first, then any delta (a delta mismatch is reported per field)
        for (int pass = 0; pass < 2 && hit == records.size(); ++pass)
            for (std::size_t i = 0; i < records.size() && hit == records.size(); ++i)
                if (!used[i] && (pass == 1 || records[i].delta == row.delta) &&
                    sorted(records[i].summands) == sorted(row.summands) && records[i].mw.torsion == row.mw.torsion)
                    hit = i;
        if (hit == records.size()) {
            line.status = DiffStatus::missing;
            line.detail = lattice_string(row.summands) + " " + row.mw.str();
            out.push_back(line);
            continue;
        }
        used[hit] = true;
        auto& rec = records[hit];
        rec.label = row.id;
        // per-field comparison; s and c follow the golden summand order
        std::vector<int> rs, rc;
        std::vector<bool> taken(rec.summands.size(), false);
        for (const auto& x : row.summands)
            for (std::size_t j = 0; j < rec.summands.size(); ++j)
                if (!taken[j] && rec.summands[j] == x) {
                    taken[j] = true;
                    if (rec.type == 1) {
                        rs.push_back(rec.s[j]);
                        rc.push_back(rec.c[j]);
                    }
                    break;
                }
        if (rec.type == 2) {
            rs = rec.s;
            rc = rec.c;
        }
        std::vector<std::tuple<std::string, std::string, std::string>> fields{
            {"c", join_plus(row.c), join_plus(rc)},
            {"mw_rank", std::to_string(row.mw_rank), std::to_string(rec.mw.rank)},
            {"s", join_plus(row.s), join_plus(rs)},
            {"sections", std::to_string(row.sections), std::to_string(rec.sections)},
            {"mw", row.mw.str(), rec.mw.str()},
            {"delta", std::to_string(row.delta), std::to_string(rec.delta)},
        };
        line.status = DiffStatus::match;
        for (const auto& [field, printed, computed] : fields) {
            if (printed == computed) continue;
            bool covered = std::any_of(errata.begin(), errata.end(), [&](const Erratum& e) {
                return e.id == row.id && e.field == field && e.printed == printed && e.corrected == computed;
            });
            if (!line.detail.empty()) line.detail += "; ";
            line.detail += field + ": printed " + printed + ", computed " + computed;
            if (covered) {
                if (line.status == DiffStatus::match) line.status = DiffStatus::errata;
            } else
                line.status = DiffStatus::mismatch;
        }
        out.push_back(line);
    }
    for (std::size_t i = 0; i < records.size(); ++i) {
        if (used[i]) continue;
        DiffLine line;
        line.status = DiffStatus::extra;
        line.id = "EXTRA";
        line.g = records[i].g;
        line.k = records[i].k;
        line.delta = records[i].delta;
        line.detail = lattice_string(records[i].summands) + " " + records[i].mw.str();
        out.push_back(line);
    }
    return out;
}

std::string render_table(const std::vector<FibrationRecord>& records) {
    std::ostringstream os;
    for (const auto& r : records) {
        os << (r.label.empty() ? "-" : r.label) << " | " << lattice_string(r.summands) << " | "
           << join_plus(r.c) << "+" << r.mw.rank << " | " << join_plus(r.s) << "+" << r.sections << " | "
           << r.mw.str() << " | " << fiber_string(r.fibers) << "\n";
    }
    return os.str();
}

} // namespace k3
