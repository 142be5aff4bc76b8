#include "k3fib/specialize.hpp"

#include "k3fib/lattices.hpp"
#include "k3fib/wire.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <map>
#include <memory>
#include <set>

namespace k3 {

const FiberConfiguration<Rational>& FamilyHandle::generic() const {
    if (!generic_) generic_ = fiber_configuration(model);
    return *generic_;
}

FamilyHandle FamilyHandle::from_model(std::string name, WeierstrassModel<Rational> m, int rho_generic) {
    FamilyHandle h;
    h.name = std::move(name);
    h.model = std::move(m);
    h.rho_generic = rho_generic;
    std::set<std::string> ps;
    for (const auto* p : {&h.model.A, &h.model.B})
        for (Var v : p->vars())
            if (v != h.model.t) ps.insert(var_name(v));
    h.params.assign(ps.begin(), ps.end());
    return h;
}

FamilyHandle FamilyHandle::from_registry(std::string_view name) {
    const auto& f = load_families().family(name);
    FamilyHandle h = from_model(f.name, family_model(f), f.rho);
    h.fixture = &f;
    return h;
}

namespace {

// squarefree parts in v of f, each made primitive
std::vector<QPoly> param_parts(const QPoly& f, Var v) {
    std::vector<QPoly> out;
    if (f.is_zero() || f.degree(v) < 1) return out;
    for (auto& [p, m] : squarefree_decompose(f, v).parts) {
        (void)m;
        if (p.degree(v) >= 1) out.push_back(normalize_in(primitive_in(p, v), v).second);
    }
    return out;
}

} // namespace

std::vector<QPoly> jump_candidates(const FamilyHandle& fam, std::string_view param) {
    Var p = intern(param);
    Var t = fam.model.t;
    QPoly D = fam.model.delta_int();
    if (D.degree(t) < 1) throw MathError("isotrivial family: the discriminant does not depend on " + var_name(t));
    if (!D.contains(p)) throw MathError("the discriminant does not depend on " + std::string(param));
    QPoly content = content_in(D, t);

    std::vector<QPoly> places;
    for (auto& [pl, mult] : places_of_discriminant(fam.model))
        if (!pl.infinite) places.push_back(pl.p);

    std::vector<QPoly> raw;
    for (std::size_t i = 0; i < places.size(); ++i) {
        const auto& f = places[i];
        raw.push_back(f.lc_in(t)); // meets t = infinity
        if (f.degree(t) >= 2) raw.push_back(discriminant(f, t));
        for (std::size_t j = i + 1; j < places.size(); ++j) raw.push_back(resultant(f, places[j], t));
    }
    std::vector<QPoly> parts;
    for (const auto& r : raw)
        for (auto& q : param_parts(r, p)) parts.push_back(q);
    auto content_parts = param_parts(content, p);
    for (const auto& q : content_parts) parts.push_back(q);
    if (parts.empty()) return {};
    std::vector<QPoly> out;
    for (auto& q : coprime_refine(parts, p)) {
        bool generic = std::any_of(content_parts.begin(), content_parts.end(),
                                   [&](const QPoly& c) { return gcd_in(c, q, p).degree(p) >= 1; });
        if (!generic) out.push_back(normalize_in(q, p).second);
    }
    std::sort(out.begin(), out.end(), poly_less<Rational>);
    return out;
}

long trivial_disc_order(const std::vector<KodairaType>& fibers) {
    long d = 1;
    for (const auto& f : fibers)
        if (auto s = summand_of(f)) d *= s->disc_order();
    return d;
}

std::vector<long> torsion_candidates(const std::vector<KodairaType>& fibers, std::optional<int> mw_rank, long disc_T) {
    long D = trivial_disc_order(fibers);
    std::vector<long> out;
    if (mw_rank && *mw_rank == 0 && disc_T > 0) {
        if (D % disc_T != 0) return out;
        long q = D / disc_T;
        long r = std::lround(std::sqrt(static_cast<double>(q)));
        for (long c = std::max(1L, r - 1); c <= r + 1; ++c)
            if (c * c == q) out.push_back(c);
        return out;
    }
    for (long n = 1; n * n <= D; ++n)
        if (D % (n * n) == 0) out.push_back(n);
    return out;
}

namespace {

template <class K>
std::vector<std::string> merged_places(const std::vector<std::pair<QPoly, Poly<K>>>& places, Var t) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < places.size(); ++i) {
        const auto& [gi, si] = places[i];
        if (si.degree(t) < gi.degree(t)) out.push_back(gi.str() + " ~ infinity");
        if (si.degree(t) >= 2 && gcd_in(si, si.derivative(t), t).degree(t) >= 1) out.push_back(gi.str() + " ~ itself");
        for (std::size_t j = i + 1; j < places.size(); ++j)
            if (gcd_in(si, places[j].second, t).degree(t) >= 1) out.push_back(gi.str() + " ~ " + places[j].first.str());
    }
    return out;
}

template <class K>
WeierstrassModel<K> substituted(const WeierstrassModel<Rational>& m, const std::map<Var, Poly<K>>& bind,
                                Poly<K> (*lift)(const QPoly&)) {
    WeierstrassModel<K> out;
    out.A = lift(m.A).substitute(bind);
    out.B = lift(m.B).substitute(bind);
    out.t = m.t;
    out.chi = m.chi;
    return out;
}

QPoly lift_q(const QPoly& p) { return p; }
APoly lift_a(const QPoly& p) { return to_algebraic(p); }

template <class K>
void fill_report(DegenerationReport& rep, const FamilyHandle& fam, const WeierstrassModel<K>& special,
                 const std::map<Var, Poly<K>>& bind, Poly<K> (*lift)(const QPoly&)) {
    auto cfg = fiber_configuration(special);
    rep.special_fibers = cfg.fibers();
    std::vector<std::pair<QPoly, Poly<K>>> places;
    for (auto& [pl, mult] : places_of_discriminant(fam.model))
        if (!pl.infinite) places.emplace_back(pl.p, lift(pl.p).substitute(bind));
    rep.merged_places = merged_places(places, fam.model.t);
}

} // namespace

DegenerationReport specialize_at(const FamilyHandle& fam, const Assignment& asg, std::optional<int> rho, long disc_T) {
    DegenerationReport rep;
    rep.assignment = asg;
    rep.generic_fibers = fam.generic().fibers();
    rep.rho = rho;
    Var t = fam.model.t;
    QPoly content = content_in(fam.model.delta_int(), t);

    if (asg.minpoly.empty()) {
        std::map<Var, QPoly> bind;
        for (const auto& [k, v] : asg.values) bind[intern(k)] = parse_poly(v);
        WeierstrassModel<Rational> special = substituted<Rational>(fam.model, bind, lift_q);
        // a parameter unit of the generic model vanishes: rebuild the member from its construction
        if (content.substitute(bind).is_zero() || special.delta_int().is_zero()) {
            if (!fam.fixture || (!fam.fixture->conic && !fam.fixture->base_change))
                throw MathError("specialization kills the discriminant of " + fam.name);
            special = recipe_model(*fam.fixture, bind);
            rep.rebuilt = true;
        }
        if (special.delta_int().is_zero()) throw MathError("specialization kills the discriminant of " + fam.name);
        fill_report(rep, fam, special, bind, lift_q);
    } else {
        QPoly mp = parse_poly(asg.minpoly);
        Var g = intern(asg.gen);
        if (mp.vars() != std::vector<Var>{g}) throw MathError("minimal polynomial must be univariate in " + asg.gen);
        UPolyQ coeffs(mp.degree(g) + 1);
        for (int i = 0; i <= mp.degree(g); ++i) coeffs[i] = mp.coeff_of(g, i).is_zero() ? Rational(0) : mp.coeff_of(g, i).constant_value();
        auto field = std::make_shared<const NumberField>(coeffs, asg.gen);
        APoly r(AlgebraicNumber::generator(field));
        std::map<Var, APoly> bind;
        for (const auto& [k, v] : asg.values) bind[intern(k)] = to_algebraic(parse_poly(v)).substitute(g, r);
        if (content.vars().empty() ? false : to_algebraic(content).substitute(bind).is_zero())
            throw MathError("specialization hits a parameter unit of " + fam.name + "; algebraic rebuilds are not supported");
        auto special = substituted<AlgebraicNumber>(fam.model, bind, lift_a);
        if (special.delta_int().is_zero()) throw MathError("specialization kills the discriminant of " + fam.name);
        fill_report(rep, fam, special, bind, lift_a);
    }

    int e = 0;
    for (const auto& f : rep.special_fibers) e += f.euler();
    if (e != 24 * fam.model.chi / 2) throw InconsistencyError("Euler sum not preserved under specialization");
    rep.trivial_disc = trivial_disc_order(rep.special_fibers);
    if (rho) {
        rep.mw_rank = mw_rank(rep.special_fibers, *rho);
        rep.mw_rank_delta = *rep.mw_rank - mw_rank(rep.generic_fibers, fam.rho_generic);
    }
    rep.torsion_candidates = torsion_candidates(rep.special_fibers, rep.mw_rank, disc_T);
    return rep;
}

DiffStatus CellReport::status() const {
    if (fibers_status == DiffStatus::mismatch || mw_status == DiffStatus::mismatch || !torsion_consistent) return DiffStatus::mismatch;
    if (fibers_status == DiffStatus::errata || mw_status == DiffStatus::errata) return DiffStatus::errata;
    return DiffStatus::match;
}

namespace {

long torsion_order(const MWGroup& g) {
    long n = 1;
    for (int x : g.torsion) n *= x;
    return n;
}

CellReport make_cell(const FamilyRegistry& reg, const SpecTable& tab, const SpecRow& row, const std::string& fam_name,
                     const SpecCell& cell, const FamilyHandle& fam, const Assignment& asg) {
    CellReport c;
    c.table = tab.id;
    c.row = row.label;
    c.family = fam_name;
    c.assignment = asg.str();
    c.expected_fibers = cell.fibers;
    c.expected_mw = cell.mw;
    std::string loc = tab.id + "/" + row.label + "/" + fam_name;
    DegenerationReport rep;
    try {
        rep = specialize_at(fam, asg, row.rho, row.disc_T);
    } catch (const std::exception& e) {
        c.fibers_status = DiffStatus::mismatch;
        c.note = e.what();
        return c;
    }
    c.computed_fibers = rep.special_str();
    c.computed_rank = rep.mw_rank;
    c.torsion_candidates = rep.torsion_candidates;
    std::vector<std::string> notes;

    if (fiber_string(parse_fiber_string(cell.fibers)) != c.computed_fibers) {
        const auto* e = reg.erratum(loc, "fibers");
        if (e && fiber_string(parse_fiber_string(e->corrected)) == c.computed_fibers) {
            c.fibers_status = DiffStatus::errata;
            notes.push_back("fibers: printed " + cell.fibers + ", computed " + c.computed_fibers);
        } else {
            c.fibers_status = DiffStatus::mismatch;
            notes.push_back("fibers: expected " + cell.fibers + ", computed " + c.computed_fibers);
        }
    }
    MWGroup mw = MWGroup::parse(cell.mw);
    if (c.computed_rank && *c.computed_rank != mw.rank) {
        const auto* e = reg.erratum(loc, "mw");
        if (e && MWGroup::parse(e->corrected).rank == *c.computed_rank) {
            c.mw_status = DiffStatus::errata;
            notes.push_back("mw: printed " + cell.mw + ", corrected " + e->corrected);
            mw = MWGroup::parse(e->corrected);
        } else {
            c.mw_status = DiffStatus::mismatch;
            notes.push_back("mw rank: expected " + std::to_string(mw.rank) + ", computed " + std::to_string(*c.computed_rank));
        }
    }
    long tor = torsion_order(mw);
    c.torsion_consistent = std::find(c.torsion_candidates.begin(), c.torsion_candidates.end(), tor) != c.torsion_candidates.end();
    if (!c.torsion_consistent) notes.push_back("torsion order " + std::to_string(tor) + " outside the candidates");
    for (const auto& n : notes) c.note += (c.note.empty() ? "" : "; ") + n;
    return c;
}

} // namespace

std::vector<CellReport> verify_table(const FamilyRegistry& reg, const std::string& table_id) {
    const auto& tab = reg.table(table_id);
    // families run concurrently; cells are collected in table order
    std::vector<std::future<std::vector<CellReport>>> jobs;
    for (const auto& fam_name : tab.families)
        jobs.push_back(std::async(std::launch::async, [&reg, &tab, fam_name] {
            std::vector<CellReport> cells;
            FamilyHandle fam = FamilyHandle::from_registry(fam_name);
            for (const auto& row : tab.rows) {
                auto it = row.cells.find(fam_name);
                if (it == row.cells.end()) continue;
                for (const auto& asg : row.assignments) cells.push_back(make_cell(reg, tab, row, fam_name, it->second, fam, asg));
            }
            return cells;
        }));
    std::vector<std::vector<CellReport>> per_family;
    for (auto& j : jobs) per_family.push_back(j.get());
    std::vector<CellReport> out;
    for (const auto& row : tab.rows)
        for (const auto& cells : per_family)
            for (const auto& c : cells)
                if (c.row == row.label) out.push_back(c);
    return out;
}

} // namespace k3
