#include "k3fib/conicbundle.hpp"
#include "k3fib/paperdata.hpp"
#include "k3fib/specialize.hpp"
#include "k3fib/wire.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

using namespace k3;

namespace {

enum Exit { ok = 0, computational = 1, usage = 2, paper_mismatch = 3 };

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::optional<std::filesystem::path> locate(const std::string& arg) {
    std::filesystem::path p(arg);
    if (std::filesystem::is_regular_file(p)) return p;
    if (p.is_relative() && std::filesystem::is_regular_file(data_dir() / p)) return data_dir() / p;
    return std::nullopt;
}

json read_json(const std::filesystem::path& p) {
    std::ifstream in(p);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw UsageError(p.string() + ": " + e.what());
    }
}

// a model file, a file under the data directory, or a registry family name
WeierstrassModel<Rational> load_model(const std::string& arg) {
    if (auto p = locate(arg)) return model_from_json(read_json(*p));
    const auto& reg = load_families();
    for (const auto& f : reg.families)
        if (f.name == arg) return family_model(f);
    throw UsageError("no model file or family named " + arg);
}

// a polynomial file (wire format or a JSON string) or inline infix text
QPoly load_poly(const std::string& arg) {
    if (auto p = locate(arg)) return poly_from_json(read_json(*p));
    return parse_poly(arg);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) out.push_back(item);
    return out;
}

// "p=v" pairs; a value "root(<minpoly>)" declares the field and binds p to its generator
Assignment parse_assignment(const std::vector<std::string>& sets, const std::string& field) {
    Assignment a;
    auto declare = [&](const std::string& minpoly) {
        QPoly mp = parse_poly(minpoly);
        if (mp.vars().size() != 1) throw UsageError("field polynomial must be univariate: " + minpoly);
        if (!a.minpoly.empty() && parse_poly(a.minpoly) != mp) throw UsageError("only one number field per assignment");
        a.minpoly = minpoly;
        a.gen = var_name(mp.vars()[0]);
    };
    if (!field.empty()) declare(field);
    for (const auto& s : sets) {
        auto eq = s.find('=');
        if (eq == std::string::npos || eq == 0) throw UsageError("expected <param>=<value>, got " + s);
        std::string name = s.substr(0, eq), value = s.substr(eq + 1);
        if (value.rfind("root(", 0) == 0 && value.back() == ')') {
            declare(value.substr(5, value.size() - 6));
            value = a.gen;
        }
        parse_poly(value);
        a.values[name] = value;
    }
    return a;
}

json fibers_json(const FiberConfiguration<Rational>& cfg) {
    json entries = json::array();
    auto val = [](const Val& v) { return v ? json(*v) : json("inf"); };
    for (const auto& e : cfg.entries)
        entries.push_back({{"place", e.place.str()}, {"degree", e.place.degree}, {"type", e.type.str()},
                           {"v_c4", val(e.v_c4)}, {"v_c6", val(e.v_c6)}, {"v_delta", e.v_delta}});
    return {{"configuration", cfg.str()}, {"euler", cfg.euler()}, {"fibers", entries}};
}

json record_json(const FibrationRecord& r) {
    std::vector<std::string> summands, fibers;
    for (const auto& s : r.summands) summands.push_back(s.str());
    for (const auto& f : r.fibers) fibers.push_back(f.str());
    return {{"label", r.label}, {"g", r.g}, {"k", r.k}, {"delta", r.delta}, {"type", r.type},
            {"trivial_lattice", lattice_string(r.summands)}, {"summands", summands}, {"fibers", fibers},
            {"s", r.s}, {"c", r.c}, {"sections", r.sections}, {"mw", r.mw.str()}};
}

// monic normalization in t with the unit split off: "unit * (monic)"
std::string unit_times_monic(const QPoly& p, Var t) {
    auto [unit, monic] = normalize_in(p, t);
    return unit.str() + " * (" + monic.str() + ")";
}

struct Tally {
    int match = 0, errata = 0, mismatch = 0;
    void add(DiffStatus s) {
        if (s == DiffStatus::match) ++match;
        else if (s == DiffStatus::errata) ++errata;
        else ++mismatch;
    }
};

void print_line(DiffStatus s, const std::string& what, const std::string& detail) {
    std::cout << to_string(s) << "  " << what;
    if (!detail.empty()) std::cout << "  -- " << detail;
    std::cout << "\n";
}

Tally verify_section(const std::string& section, int k_min) {
    Tally tally;
    const auto& fams = load_families();
    auto classification = [&](int g0, int g1) {
        for (const auto& d : verify_classification(load_tables(), g0, g1)) {
            tally.add(d.status);
            if (d.status != DiffStatus::match)
                print_line(d.status, d.id + " (g=" + std::to_string(d.g) + ", k=" + std::to_string(d.k) + ", delta=" + std::to_string(d.delta) + ")", d.detail);
        }
    };
    if (section == "golden-g1") {
        classification(1, 1);
    } else if (section == "golden-all") {
        classification(2, 10);
    } else if (section == "base-change") {
        for (const auto& r : verify_base_change_rows(fams)) {
            DiffStatus s = r.ok() ? DiffStatus::match : DiffStatus::mismatch;
            tally.add(s);
            std::string what = "I0 + " + r.row.branch + " (delta=" + std::to_string(r.row.delta) + ", k=" + std::to_string(r.row.k) +
                               ") -> " + lattice_string(r.trivial_roots) + ", rank " + std::to_string(r.k3_rank);
            std::string detail = r.sample.empty() ? "lattice level only, no sample model" : r.k3_config;
            for (const auto& f : r.failures) detail += "; " + f;
            print_line(s, what, detail);
        }
    } else if (section == "worked-example") {
        for (const auto& r : verify_worked_example(fams, k_min, 9)) {
            tally.add(r.status);
            print_line(r.status, "k=" + std::to_string(r.row.k) + " row " + r.row.id + ": " + r.configuration, r.note);
        }
    } else {
        fams.table(section); // RegistryError for an unknown id
        for (const auto& c : verify_table(fams, section)) {
            tally.add(c.status());
            print_line(c.status(), c.row + " | " + c.family + " | " + c.assignment + " | " + c.computed_fibers, c.note);
        }
    }
    return tally;
}

const std::vector<std::string> kSections{"golden-g1", "golden-all", "k9-jumps", "d1-jumps", "d1-cuberoot", "d0-jumps", "base-change", "worked-example"};

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact elliptic fibration toolkit for K3 double covers of rational elliptic surfaces", "k3fib"};
    app.require_subcommand(1);
    std::string format = "table";
    auto add_format = [&](CLI::App* c) {
        c->add_option("--format", format, "output format")->check(CLI::IsMember({"table", "json"}));
    };

    int g = 1, k = 0;
    std::optional<int> delta;
    bool diff_paper = false;
    auto* classify = app.add_subcommand("classify", "enumerate the fibrations of a (g, k) block");
    classify->add_option("--g", g, "genus of the fixed curve")->required();
    classify->add_option("--k", k, "number of fixed rational curves")->required();
    classify->add_option("--delta", delta, "restrict to one delta")->check(CLI::IsMember({0, 1}));
    classify->add_flag("--diff-paper", diff_paper, "compare with the golden rows");
    add_format(classify);

    std::string model_arg, field;
    std::vector<std::string> at;
    auto* fibers = app.add_subcommand("fibers", "fibre configuration of a Weierstrass model");
    fibers->add_option("model", model_arg, "model JSON file or family name")->required();
    fibers->add_option("--at", at, "specialize first: <param>=<value> or <param>=root(<minpoly>)");
    fibers->add_option("--field", field, "minimal polynomial of the generator used in --at values");
    add_format(fibers);

    auto* invariants_cmd = app.add_subcommand("invariants", "c4, c6, discriminant and j of a model");
    invariants_cmd->add_option("model", model_arg, "model JSON file or family name")->required();
    add_format(invariants_cmd);

    std::string sextic, pencil_arg, tau, basepoint, coords = "x,y,z";
    auto* conic = app.add_subcommand("conic", "elliptic fibration from a branch sextic and a conic-bundle pencil");
    conic->add_option("--sextic", sextic, "<f3>,<g3>: files or infix text")->required();
    conic->add_option("--pencil", pencil_arg, "pencil: file or infix text")->required();
    conic->add_option("--tau", tau, "pencil parameter (default: the variable outside the plane and the sextic)");
    conic->add_option("--basepoint", basepoint, "move this base point a:b:c to the projection centre (0:1:0)");
    conic->add_option("--coords", coords, "plane coordinates");
    add_format(conic);

    std::string family, jumps;
    std::vector<std::string> sets;
    std::optional<int> rho;
    long disc_T = 0;
    auto* specialize = app.add_subcommand("specialize", "specialize a registry family");
    specialize->add_option("--family", family, "family name")->required();
    specialize->add_option("--set", sets, "<param>=<value> or <param>=root(<minpoly>)");
    specialize->add_option("--field", field, "minimal polynomial of the generator used in --set values");
    specialize->add_option("--rho", rho, "Picard number of the special member");
    specialize->add_option("--disc-T", disc_T, "|det| of the transcendental lattice of the special member");
    specialize->add_option("--jumps", jumps, "list the collision conditions in this parameter instead");
    add_format(specialize);

    std::string summands, op = "invariants";
    auto* lattice = app.add_subcommand("lattice", "discriminant forms and two-torsion glue of a root lattice");
    lattice->add_option("--summands", summands, "e.g. D10,D6")->required();
    lattice->add_option("--op", op, "operation")->check(CLI::IsMember({"glues", "disc", "invariants"}));

    std::string section;
    bool all = false;
    int k_min = 4;
    auto* verify = app.add_subcommand("verify-paper", "compare computed tables with the golden registry");
    auto* sec_opt = verify->add_option("--section", section, "section id")->check(CLI::IsMember(kSections));
    verify->add_flag("--all", all, "every section")->excludes(sec_opt);
    verify->add_option("--k-min", k_min, "smallest k for the worked example (k < 4 is slow)")->check(CLI::Range(1, 9));

    auto* list = app.add_subcommand("list-fixtures", "registry contents");
    add_format(list);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? Exit::ok : Exit::usage;
    }

    try {
        if (*classify) {
            if (admissible_deltas(g, k).empty() || (delta && !admissible(g, k, *delta)))
                throw UsageError("no classification table for g = " + std::to_string(g) + ", k = " + std::to_string(k) +
                                 (delta ? ", delta = " + std::to_string(*delta) : ""));
            std::vector<FibrationRecord> recs;
            for (auto& [d, v] : full_table(g, k))
                if (!delta || d == *delta) recs.insert(recs.end(), v.begin(), v.end());
            std::vector<DiffLine> diff;
            auto tables = load_tables();
            if (const auto* block = tables.find(g, k)) {
                std::vector<GoldenRow> golden;
                for (const auto& r : block->rows)
                    if (!delta || r.delta == *delta) golden.push_back(r);
                diff = diff_block(recs, golden, tables.errata);
            }
            if (format == "json") {
                json out = json::array();
                for (const auto& r : recs) out.push_back(record_json(r));
                std::cout << out.dump(1) << "\n";
            } else {
                std::cout << render_table(recs);
            }
            if (diff_paper) {
                bool bad = false;
                for (const auto& d : diff) {
                    if (d.status == DiffStatus::match) continue;
                    bad = bad || d.status != DiffStatus::errata;
                    print_line(d.status, d.id, d.detail);
                }
                if (bad) return Exit::paper_mismatch;
            }
            return Exit::ok;
        }

        if (*fibers) {
            auto m = load_model(model_arg);
            if (at.empty() && field.empty()) {
                auto cfg = fiber_configuration(m);
                if (format == "json") std::cout << fibers_json(cfg).dump(1) << "\n";
                else std::cout << cfg.str() << "\n";
                return Exit::ok;
            }
            auto fam = FamilyHandle::from_model(model_arg, m, 0);
            auto rep = specialize_at(fam, parse_assignment(at, field));
            if (format == "json")
                std::cout << json{{"assignment", rep.assignment.str()}, {"generic", fiber_string(rep.generic_fibers)},
                                  {"configuration", rep.special_str()}}.dump(1) << "\n";
            else
                std::cout << rep.special_str() << "\n";
            return Exit::ok;
        }

        if (*invariants_cmd) {
            auto m = load_model(model_arg);
            auto inv = invariants(m);
            auto [jn, jd] = j_invariant(m);
            if (format == "json") {
                std::vector<std::string> base{var_name(m.t)};
                std::cout << json{{"c4", poly_to_json(inv.c4, base)}, {"c6", poly_to_json(inv.c6, base)},
                                  {"delta_int", poly_to_json(inv.delta_int, base)}, {"delta_std", poly_to_json(inv.delta_std, base)},
                                  {"j_numerator", poly_to_json(jn, base)}, {"j_denominator", poly_to_json(jd, base)}}.dump(1) << "\n";
            } else {
                std::cout << "c4 = " << inv.c4.str() << "\n"
                          << "c6 = " << inv.c6.str() << "\n"
                          << "delta_int = 4A^3 + 27B^2 = " << unit_times_monic(inv.delta_int, m.t) << "\n"
                          << "delta_std = -16 delta_int = " << unit_times_monic(inv.delta_std, m.t) << "\n"
                          << "j = (" << jn.str() << ") / (" << jd.str() << ")\n";
            }
            return Exit::ok;
        }

        if (*conic) {
            auto names = split(coords, ',');
            if (names.size() != 3) throw UsageError("--coords needs three names");
            auto parts = split(sextic, ',');
            if (parts.size() != 2) throw UsageError("--sextic needs <f3>,<g3>");
            PlaneCoords xs = PlaneCoords::named(names[0], names[1], names[2]);
            BranchSextic<Rational> s{load_poly(parts[0]), load_poly(parts[1]), xs};
            QPoly h = load_poly(pencil_arg);
            Var tv;
            if (!tau.empty()) {
                tv = intern(tau);
            } else {
                std::vector<Var> cands;
                for (Var v : h.vars())
                    if (v != xs.x0 && v != xs.x1 && v != xs.x2 && !s.f3.contains(v) && !s.g3.contains(v)) cands.push_back(v);
                if (cands.size() != 1) throw UsageError("cannot infer the pencil parameter; pass --tau");
                tv = cands[0];
            }
            ConicBundlePencil<Rational> pencil{h, tv, 0};
            if (!basepoint.empty()) {
                auto c = split(basepoint, ':');
                if (c.size() != 3) throw UsageError("--basepoint needs a:b:c");
                std::tie(s, pencil) = normalize_basepoint(s, pencil, {Rational::parse(c[0]), Rational::parse(c[1]), Rational::parse(c[2])});
            }
            auto res = run_pipeline(s, pencil);
            if (format == "json") {
                json out = fibers_json(res.config);
                out["model"] = model_to_json(res.model);
                std::cout << out.dump(1) << "\n";
            } else {
                std::cout << "A = " << res.model.A.str() << "\nB = " << res.model.B.str() << "\n" << res.config.str() << "\n";
            }
            return Exit::ok;
        }

        if (*specialize) {
            auto fam = FamilyHandle::from_registry(family);
            if (!jumps.empty()) {
                auto c = jump_candidates(fam, jumps);
                if (format == "json") {
                    json out = json::array();
                    for (const auto& q : c) out.push_back(q.str());
                    std::cout << out.dump(1) << "\n";
                } else {
                    for (const auto& q : c) std::cout << q.str() << " = 0\n";
                }
                return Exit::ok;
            }
            if (sets.empty()) throw UsageError("specialize needs --set or --jumps");
            auto rep = specialize_at(fam, parse_assignment(sets, field), rho, disc_T);
            if (format == "json") {
                json out{{"family", family}, {"assignment", rep.assignment.str()}, {"generic", fiber_string(rep.generic_fibers)},
                         {"special", rep.special_str()}, {"merged_places", rep.merged_places}, {"trivial_disc", rep.trivial_disc},
                         {"torsion_candidates", rep.torsion_candidates}, {"rebuilt", rep.rebuilt}};
                out["mw_rank"] = rep.mw_rank ? json(*rep.mw_rank) : json("undetermined");
                if (rep.mw_rank_delta) out["mw_rank_delta"] = *rep.mw_rank_delta;
                std::cout << out.dump(1) << "\n";
            } else {
                std::cout << "family:  " << family << "\n"
                          << "at:      " << rep.assignment.str() << "\n"
                          << "generic: " << fiber_string(rep.generic_fibers) << "\n"
                          << "special: " << rep.special_str() << "\n";
                for (const auto& mp : rep.merged_places) std::cout << "merged:  " << mp << "\n";
                std::cout << "mw rank: " << (rep.mw_rank ? std::to_string(*rep.mw_rank) : "undetermined (pass --rho)");
                if (rep.mw_rank_delta) std::cout << " (" << (*rep.mw_rank_delta >= 0 ? "+" : "") << *rep.mw_rank_delta << ")";
                std::cout << "\ntorsion: ";
                for (std::size_t i = 0; i < rep.torsion_candidates.size(); ++i) std::cout << (i ? ", " : "") << rep.torsion_candidates[i];
                std::cout << "\n";
            }
            return Exit::ok;
        }

        if (*lattice) {
            auto ss = LatticeSummand::parse_list(summands);
            auto f = disc_form(ss);
            json out{{"summands", lattice_string(ss)}, {"order", f.order()}, {"length", f.length()}, {"brown", brown_invariant(f)}};
            if (op == "disc") {
                json gens = json::array();
                for (int i = 0; i < f.length(); ++i) gens.push_back({{"order", f.orders[i]}, {"q", f.q[i].str()}});
                out["generators"] = gens;
            } else if (op == "invariants") {
                if (f.two_elementary()) {
                    auto fi = form_invariants(f);
                    out["a"] = fi.a;
                    out["delta"] = fi.delta;
                } else {
                    out["two_elementary"] = false;
                }
            } else {
                json glues = json::array();
                for (const auto& gv : two_torsion_glues(ss)) {
                    json e{{"glue", gv.str()}};
                    if (f.two_elementary()) {
                        auto q = glue_quotient(f, glue_element(f, ss, gv));
                        auto fi = form_invariants(q);
                        e["a"] = fi.a;
                        e["delta"] = fi.delta;
                        e["brown"] = brown_invariant(q);
                    }
                    glues.push_back(e);
                }
                out["glues"] = glues;
            }
            std::cout << out.dump(1) << "\n";
            return Exit::ok;
        }

        if (*verify) {
            if (!all && section.empty()) throw UsageError("verify-paper needs --section or --all");
            std::vector<std::string> run = all ? kSections : std::vector<std::string>{section};
            Tally total;
            for (const auto& s : run) {
                std::cout << "== " << s << "\n";
                Tally t = verify_section(s, k_min);
                std::cout << s << ": " << t.match << " MATCH, " << t.errata << " ERRATA, " << t.mismatch << " MISMATCH\n";
                total.match += t.match;
                total.errata += t.errata;
                total.mismatch += t.mismatch;
            }
            if (run.size() > 1)
                std::cout << "total: " << total.match << " MATCH, " << total.errata << " ERRATA, " << total.mismatch << " MISMATCH\n";
            return total.mismatch ? Exit::paper_mismatch : Exit::ok;
        }

        if (*list) {
            auto fx = list_fixtures();
            if (format == "json") {
                json out = json::array();
                for (const auto& f : fx) out.push_back({{"name", f.name}, {"kind", f.kind}, {"description", f.description}});
                std::cout << out.dump(1) << "\n";
            } else {
                for (const auto& f : fx) std::cout << f.kind << "  " << f.name << "  " << f.description << "\n";
            }
            return Exit::ok;
        }
    } catch (const UsageError& e) {
        std::cerr << "k3fib: " << e.what() << "\n";
        return Exit::usage;
    } catch (const RegistryError& e) {
        std::cerr << "k3fib: " << e.what() << "\n";
        return Exit::usage;
    } catch (const std::exception& e) {
        std::cerr << "k3fib: " << e.what() << "\n";
        return Exit::computational;
    }
    return Exit::usage;
}
