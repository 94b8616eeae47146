// olab command-line front end.
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "olab/olab.hpp"

namespace {

using namespace olab;

struct Globals {
    std::uint64_t seed = 1;
    int mesh = 64;
    std::string out;
    std::string config;
};

struct PhiOptions {
    double t_min = 1e-4, t_max = 1e4;
    int t_samples = 512;
};

void emit(const Report& rep, const Globals& g) {
    if (g.out.empty()) return;
    if (g.out == "-") std::cout << emit_report(rep);
    else write_report_atomic(g.out, rep);
}

std::string witness_summary(const json& c) {
    std::ostringstream os;
    os << "FAIL " << c.value("anchor", std::string("?"));
    if (c.contains("case") && !c["case"].get<std::string>().empty()) os << " [" << c["case"].get<std::string>() << "]";
    if (c.contains("witness") && c["witness"].is_object()) os << ": " << c["witness"].value("detail", std::string());
    if (c.contains("lhs")) os << ": lhs=" << c["lhs"].dump() << " > C*rhs with C=" << c["constant"].dump()
                              << ", rhs=" << c["rhs"].dump();
    return os.str();
}

int finish(const Report& rep, const Globals& g) {
    emit(rep, g);
    int failures = 0;
    for (const auto& c : rep.cases)
        if (c.contains("holds") && !c["holds"].get<bool>()) {
            if (failures < 10) std::cerr << witness_summary(c) << '\n';
            ++failures;
        }
    if (failures) {
        std::cerr << failures << " of " << rep.cases.size() << " cases failed\n";
        return 1;
    }
    return 0;
}

CheckConfig check_config(const Globals& g, const PhiOptions& po) {
    CheckConfig cfg;
    cfg.seed = g.seed;
    cfg.t_min = po.t_min;
    cfg.t_max = po.t_max;
    cfg.t_samples = po.t_samples;
    if (!(cfg.t_min > 0.0) || !(cfg.t_max > cfg.t_min) || cfg.t_samples < 2)
        throw ArgumentError("need 0 < t-min < t-max and t-samples >= 2");
    return cfg;
}

void add_phi_options(CLI::App* sub, PhiOptions& po) {
    sub->add_option("--t-min", po.t_min, "smallest sampled t");
    sub->add_option("--t-max", po.t_max, "largest sampled t");
    sub->add_option("--t-samples", po.t_samples, "number of log-spaced t samples");
}

// ---- phi-check -------------------------------------------------------------

struct PhiCheckArgs {
    std::string phi;
    std::vector<std::string> properties{"aInc", "aDec", "doubling", "A0", "cmp", "adA1"};
    double inc = 1.0, dec = 64.0, theta_factor = 4.0, bound = 2.0;
    PhiOptions po;
};

int run_phi_check(const PhiCheckArgs& a, const Globals& g) {
    PhiFunction phi = load_phi(a.phi);
    CheckConfig cfg = check_config(g, a.po);
    CatalogSettings s;
    s.domain = phi.domain();
    s.inc_exponent = a.inc;
    s.dec_exponent = a.dec;
    s.theta_factor = a.theta_factor;
    s.comparability_bound = a.bound;
    Report rep = Report::make("phi-check", g.seed, 0);
    rep.header["phi"] = phi.label();
    for (const auto& p : a.properties) {
        PropertyReport r;
        if (p == "aInc" || p == "Inc") r = check_inc(phi, a.inc, p == "aInc", cfg);
        else if (p == "aDec" || p == "Dec") r = check_dec(phi, a.dec, p == "aDec", cfg);
        else if (p == "doubling") r = doubling_constant(phi, cfg);
        else if (p == "A0") r = check_A0(phi, cfg);
        else if (p == "cmp") r = run_table_check(phi, TableProperty::Comparability, s, cfg);
        else if (p == "adA1") r = check_adA1(phi, adA1_test_balls(phi, phi.domain()), cfg);
        else if (p == "A1") r = check_A1(phi, adA1_test_balls(phi, phi.domain()), cfg);
        else throw ArgumentError("unknown property '" + p + "'");
        std::cout << p << ": " << (r.holds ? "holds" : "fails");
        for (const auto& [k, v] : r.constants) std::cout << ' ' << k << '=' << format_number(v);
        std::cout << '\n';
        rep.add(to_json(r));
    }
    return finish(rep, g);
}

// ---- norm / maximal --------------------------------------------------------

int run_norm(const std::string& phi_path, const std::string& input, const Globals& g) {
    PhiFunction phi = load_phi(phi_path);
    GridFunction f = load_gfn(input);
    double rho = modular(phi, f), n = luxemburg_norm(phi, f);
    std::cout << "modular " << format_number(rho) << "\nluxemburg " << format_number(n) << '\n';
    Report rep = Report::make("norm", g.seed, f.nx());
    rep.header["phi"] = phi.label();
    rep.add({{"kind", "value"}, {"anchor", "orlicz/norm"}, {"modular", json_number(rho)}, {"luxemburg", json_number(n)}});
    return finish(rep, g);
}

int run_maximal(const std::string& input, const std::string& out) {
    GridFunction Mf = maximal_operator(load_gfn(input));
    if (out.empty()) write_gfn(std::cout, Mf);
    else {
        std::string tmp = out + ".tmp";
        save_gfn(tmp, Mf);
        std::error_code ec;
        std::filesystem::rename(tmp, out, ec);
        if (ec) throw IoError("cannot rename into '" + out + "'");
    }
    return 0;
}

// ---- poincare --------------------------------------------------------------

struct PoincareArgs {
    std::string phi;
    double p = 2.0;
    std::string corpus = "jumpy";
    int n = 50;
    std::string form = "all";
    std::optional<double> C;
};

int run_poincare(const PoincareArgs& a, const Globals& g, const Tolerances& tol) {
    const Ball B{{0.0, 0.0}, 1.0, 2};
    const Domain D = Domain::unit_ball(2);
    auto corpus = generate_corpus(corpus_kind_from_name(a.corpus), a.n, g.mesh, g.seed);
    const bool inv = a.form == "all" || a.form == "inv", hom = a.form == "all" || a.form == "hom",
               gen = a.form == "all" || a.form == "gen";
    if (!inv && !hom && !gen) throw ArgumentError("--form must be inv, hom, gen or all");

    Report rep = Report::make("poincare", g.seed, g.mesh);
    rep.header["corpus"] = a.corpus;
    rep.header["n"] = a.n;
    rep.header["form"] = a.form;

    if (inv || hom) {
        PhiFunction phi = a.phi.empty() ? PhiFunction::power(D, a.p) : load_phi(a.phi);
        rep.header["phi"] = phi.label();
        const double Ci = a.C.value_or(tol.get("poincare_inverse"));
        const double Ch = a.C.value_or(tol.get("poincare_homogeneous"));
        for (int k = 0; k < a.n; ++k) {
            std::string id = a.corpus + "/" + std::to_string(k);
            if (inv) {
                auto r = verify_poincare(phi, corpus[k], B, Ci);
                r.case_id = id;
                rep.add(to_json(r));
            }
            if (hom) {
                auto r = verify_poincare_homogeneous(phi, corpus[k], B, Ch);
                r.case_id = id;
                rep.add(to_json(r));
            }
        }
    }
    if (gen) {
        PhiFunction phi = a.phi.empty() ? detail::catalog_compliant(3, CatalogSettings{}) : load_phi(a.phi);
        rep.header["phi_generalized"] = phi.label();
        GeneralizedGate gate;
        try {
            gate = generalized_gate(phi, B);
        } catch (const HypothesisError& e) {
            auto j = to_json(e.report());
            j["holds"] = false;
            rep.add(j);
            return finish(rep, g);
        }
        const double C1 = a.C.value_or(tol.get("generalized_p1")), C2 = a.C.value_or(tol.get("generalized_p2"));
        for (int k = 0; k < a.n; ++k) {
            std::string id = a.corpus + "/" + std::to_string(k);
            auto T = generalized_terms(gate, phi, corpus[k], default_gamma_iso(2));
            rep.add(to_json(make_report("P1", T.p1_lhs, T.p1_rhs, C1, T.mesh, id)));
            rep.add(to_json(make_report("P2", T.p2_lhs, T.p2_rhs, C2, T.mesh, id)));
        }
    }
    int fails = 0;
    for (const auto& c : rep.cases) fails += c["holds"].get<bool>() ? 0 : 1;
    std::cout << rep.cases.size() - fails << " of " << rep.cases.size() << " inequality cases hold\n";
    return finish(rep, g);
}

// ---- table -----------------------------------------------------------------

std::vector<TableRow> select_rows(const std::string& rows_arg) {
    auto rows = all_table_rows();
    if (rows_arg == "all") return rows;
    std::vector<int> fams;
    std::stringstream ss(rows_arg);
    std::string tok;
    while (std::getline(ss, tok, ',')) fams.push_back(family_from_roman(tok));
    std::vector<TableRow> out;
    for (const auto& r : rows)
        if (std::find(fams.begin(), fams.end(), r.family) != fams.end()) out.push_back(r);
    return out;
}

int run_table(const std::string& rows_spec, const Globals& g) {
    auto checks = verify_table(select_rows(rows_spec), g.seed);
    std::cout << render_table(checks);
    Report rep = Report::make("table", g.seed, 0);
    rep.header["rows"] = rows_spec;
    for (const auto& c : checks) {
        json j = to_json(c.report);
        j["family"] = roman(c.row.family);
        j["hypothesis"] = c.row.hypothesis;
        j["regime"] = c.regime == Regime::Compliant ? "compliant" : "violating";
        j["instance"] = c.instance;
        j["expected"] = c.row.expected;
        j["property_holds"] = c.report.holds;
        // The asserted property of a table case is agreement with the expected pattern.
        j["holds"] = c.matches;
        rep.add(j);
    }
    return finish(rep, g);
}

// ---- relax -----------------------------------------------------------------

BulkIntegrand bulk_from_name(const std::string& name, const Domain& D) {
    if (name == "double-well") return BulkIntegrand::double_well(D);
    if (name == "quadratic") return BulkIntegrand::quadratic(D);
    throw ArgumentError("unknown bulk '" + name + "' (double-well, quadratic)");
}

int run_relax(int dim, const std::string& bulk, double slope, std::vector<int> meshes, const Globals& g) {
    if (dim != 1) throw ArgumentError("relax supports --dim 1 only");
    if (meshes.empty()) meshes = {g.mesh};
    const Ball A{{0.0, 0.0}, 1.0, 1};
    const Domain D = Domain::ball(1, {0.0, 0.0}, 1.0);
    Functional F{bulk_from_name(bulk, D), SurfaceIntegrand::constant(1.0), D};
    auto r = relaxation_experiment(F, slope, A, meshes);
    Report rep = Report::make("relax", g.seed, meshes.back());
    rep.header["bulk"] = bulk;
    rep.header["slope"] = slope;
    rep.header["qf"] = r.qf;
    double prev = HUGE_VAL;
    for (const auto& e : r.entries) {
        bool monotone = e.value <= prev * (1.0 + 1e-9) + 1e-12;
        prev = e.value;
        std::cout << "mesh " << e.mesh << " value " << format_number(e.value) << " gap " << format_number(e.gap)
                  << " family " << e.family << '\n';
        rep.add({{"kind", "relaxation"},
                 {"anchor", property_anchor("relaxation")},
                 {"mesh", e.mesh},
                 {"value", json_number(e.value)},
                 {"gap", json_number(e.gap)},
                 {"family", e.family},
                 {"budget_exhausted", e.budget_exhausted},
                 {"holds", monotone && e.gap >= -1e-9}});
    }
    return finish(rep, g);
}

// ---- cellmin ---------------------------------------------------------------

// Functional config: key = value lines with bulk, surface, alpha, cap, base, phi, dim.
Functional load_functional(const std::string& path, int& dim) {
    std::ifstream f(path);
    if (!f) throw IoError("cannot open functional config '" + path + "'");
    std::map<std::string, std::string> kv;
    std::string line;
    while (std::getline(f, line)) {
        if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
        line = detail::trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos) throw ParseError("functional config: expected 'key = value'");
        kv[detail::trim(line.substr(0, eq))] = detail::trim(line.substr(eq + 1));
    }
    auto num = [&](const std::string& k, double d) { return kv.count(k) ? detail::parse_real(k, kv[k]) : d; };
    dim = static_cast<int>(num("dim", 2));
    if (dim != 1 && dim != 2) throw ParseError("functional config: dim must be 1 or 2");
    const Domain D = Domain::box(dim, {-4.0, -4.0}, {4.0, dim > 1 ? 4.0 : 0.0});
    std::string bulk = kv.count("bulk") ? kv["bulk"] : "quadratic";
    auto make_bulk = [&]() -> BulkIntegrand {
        if (bulk == "phi") {
            if (!kv.count("phi")) throw ParseError("functional config: bulk = phi needs phi = <descriptor>");
            auto p = std::filesystem::path(kv["phi"]);
            if (p.is_relative()) p = std::filesystem::path(path).parent_path() / p;
            return BulkIntegrand::from_phi(load_phi(p.string()));
        }
        try {
            return bulk_from_name(bulk, D);
        } catch (const ArgumentError& e) {
            throw ParseError(std::string("functional config: ") + e.what());
        }
    };
    BulkIntegrand b = make_bulk();
    std::string surf = kv.count("surface") ? kv["surface"] : "constant";
    SurfaceIntegrand s;
    if (surf == "constant") s = SurfaceIntegrand::constant(num("alpha", 1.0));
    else if (surf == "capped") s = SurfaceIntegrand::capped(num("cap", 1.0), num("base", 0.5));
    else throw ParseError("functional config: unknown surface '" + surf + "'");
    return {b, s, D};
}

struct CellminArgs {
    std::string functional;
    std::string datum = "affine";
    double radius = 0.5;
    std::vector<double> center{0.0, 0.0};
    std::vector<double> xi{1.0, 0.0};
    double jump = 1.0;
    std::vector<double> normal{1.0, 0.0};
};

int run_cellmin(const CellminArgs& a, const Globals& g) {
    int d = 2;
    Functional F = load_functional(a.functional, d);
    if (a.center.size() != 2 || a.normal.size() != 2) throw ArgumentError("--center and --normal take two numbers");
    Point c{a.center[0], d > 1 ? a.center[1] : 0.0};
    BoundaryDatum datum;
    if (a.datum == "affine") {
        if (static_cast<int>(a.xi.size()) < d) throw ArgumentError("--xi needs d numbers");
        datum = BoundaryDatum::affine(d, c, {0.0}, std::vector<double>(a.xi.begin(), a.xi.begin() + d));
    } else if (a.datum == "step") {
        datum = BoundaryDatum::step(d, c, {a.jump}, {0.0}, {a.normal[0], d > 1 ? a.normal[1] : 0.0});
    } else {
        throw ArgumentError("--datum must be affine or step");
    }
    CellSearchConfig cfg;
    cfg.mesh = g.mesh;
    auto r = cell_minimum(F, datum, Ball{c, a.radius, d}, cfg);
    std::cout << "cell minimum " << format_number(r.value) << " (datum energy " << format_number(r.datum_energy)
              << ", family " << r.family << ")\n";
    Report rep = Report::make("cellmin", g.seed, g.mesh);
    rep.header["datum"] = a.datum;
    rep.add({{"kind", "value"},
             {"anchor", "functional/cell-formula"},
             {"value", json_number(r.value)},
             {"datum_energy", json_number(r.datum_energy)},
             {"measure", json_number(r.measure)},
             {"family", r.family},
             {"budget_exhausted", r.budget_exhausted},
             {"holds", r.value <= r.datum_energy * (1.0 + 1e-12) + 1e-12}});
    return finish(rep, g);
}

// ---- lsc -------------------------------------------------------------------

int run_lsc(int n, const std::string& kind, const Globals& g, const Tolerances& tol) {
    const Domain box = Domain::box(2, {0.0, 0.0}, {1.0, 1.0});
    Functional F{BulkIntegrand::quadratic(box), SurfaceIntegrand::capped(1.0, 0.5), box};
    const double ctol = tol.get("lsc_ctol");
    if (kind != "mollified" && kind != "oscillation" && kind != "both")
        throw ArgumentError("--kind must be mollified, oscillation or both");
    Report rep = Report::make("lsc", g.seed, g.mesh);
    rep.header["kind"] = kind;
    for (int k = 0; k < n; ++k) {
        Rng rng(derive_seed(g.seed, static_cast<std::uint64_t>(k)));
        bool mollified = kind == "mollified" || (kind == "both" && k % 2 == 0);
        auto seq = mollified ? mollified_step_sequence(rng, g.mesh, 2, F.surface.alpha2)
                             : oscillation_sequence(rng, g.mesh, 2);
        auto r = lsc_experiment(F, seq, box, ctol);
        auto j = to_json(r);
        j["case"] = seq.kind + "/" + std::to_string(k);
        rep.add(j);
    }
    std::cout << n << " sequences checked\n";
    return finish(rep, g);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"olab: generalized Orlicz and free-discontinuity laboratory"};
    app.require_subcommand(1);
    app.fallthrough();
    Globals g;
    app.add_option("--seed", g.seed, "random seed")->capture_default_str();
    app.add_option("--mesh", g.mesh, "grid cells per axis")->capture_default_str()->check(CLI::PositiveNumber);
    app.add_option("--out", g.out, "JSON-lines report path ('-' for stdout)");
    app.add_option("--config", g.config, "JSON file overriding named tolerances");

    PhiCheckArgs pc;
    auto* s_phi = app.add_subcommand("phi-check", "check growth and continuity properties of a Phi-function");
    s_phi->add_option("--phi", pc.phi, "Phi-descriptor file")->required();
    s_phi->add_option("--property", pc.properties, "properties to check")->delimiter(',');
    s_phi->add_option("--inc", pc.inc, "exponent for (a)Inc");
    s_phi->add_option("--dec", pc.dec, "exponent for (a)Dec");
    s_phi->add_option("--theta-factor", pc.theta_factor, "theta = factor * sigma for local comparability");
    s_phi->add_option("--bound", pc.bound, "ratio bound for local comparability");
    add_phi_options(s_phi, pc.po);

    std::string norm_phi, norm_input;
    auto* s_norm = app.add_subcommand("norm", "modular and Luxemburg norm of a grid function");
    s_norm->add_option("--phi", norm_phi, "Phi-descriptor file")->required();
    s_norm->add_option("--input", norm_input, "GFN file")->required();

    std::string max_input, max_out;
    auto* s_max = app.add_subcommand("maximal", "restricted maximal function of a grid function");
    s_max->add_option("--input", max_input, "GFN file")->required();
    s_max->add_option("--out", max_out, "output GFN file (stdout if omitted)");

    PoincareArgs pa;
    double pa_C = 0.0;
    auto* s_poi = app.add_subcommand("poincare", "Poincare inequalities on a seeded corpus");
    s_poi->add_option("--phi", pa.phi, "Phi-descriptor file (default t^p; double phase for --form gen)");
    s_poi->add_option("--p", pa.p, "exponent of the default t^p");
    s_poi->add_option("--corpus", pa.corpus, "smooth, jumpy or laminate");
    s_poi->add_option("--n", pa.n, "corpus size")->check(CLI::PositiveNumber);
    s_poi->add_option("--form", pa.form, "inv, hom, gen or all");
    auto* opt_C = s_poi->add_option("--C", pa_C, "override the frozen constant");

    std::string rows = "all";
    auto* s_tab = app.add_subcommand("table", "verify the examples table");
    s_tab->add_option("--rows", rows, "'all' or a comma list of I..VI");

    int rdim = 1;
    std::string rbulk = "double-well";
    double rslope = 0.0;
    std::vector<int> rmeshes;
    auto* s_rel = app.add_subcommand("relax", "1D relaxation through the cell formula");
    s_rel->add_option("--dim", rdim, "dimension (1)");
    s_rel->add_option("--bulk", rbulk, "double-well or quadratic");
    s_rel->add_option("--slope", rslope, "affine boundary slope");
    s_rel->add_option("--meshes", rmeshes, "mesh list (default: --mesh)")->delimiter(',');

    CellminArgs ca;
    auto* s_cell = app.add_subcommand("cellmin", "cell-formula minimum on a ball");
    s_cell->add_option("--functional", ca.functional, "functional config file")->required();
    s_cell->add_option("--datum", ca.datum, "affine or step");
    s_cell->add_option("--ball", ca.radius, "ball radius")->check(CLI::PositiveNumber);
    s_cell->add_option("--center", ca.center, "ball center x,y")->delimiter(',');
    s_cell->add_option("--xi", ca.xi, "affine gradient")->delimiter(',');
    s_cell->add_option("--jump", ca.jump, "step amplitude");
    s_cell->add_option("--normal", ca.normal, "step normal x,y")->delimiter(',');

    int ln = 50;
    std::string lkind = "both";
    auto* s_lsc = app.add_subcommand("lsc", "lower-semicontinuity probe");
    s_lsc->add_option("--n", ln, "number of sequences")->check(CLI::PositiveNumber);
    s_lsc->add_option("--kind", lkind, "mollified, oscillation or both");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        Tolerances tol = load_tolerances(g.config);
        if (*s_phi) return run_phi_check(pc, g);
        if (*s_norm) return run_norm(norm_phi, norm_input, g);
        if (*s_max) return run_maximal(max_input, max_out);
        if (*s_poi) {
            if (*opt_C) pa.C = pa_C;
            return run_poincare(pa, g, tol);
        }
        if (*s_tab) return run_table(rows, g);
        if (*s_rel) return run_relax(rdim, rbulk, rslope, rmeshes, g);
        if (*s_cell) return run_cellmin(ca, g);
        if (*s_lsc) return run_lsc(ln, lkind, g, tol);
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << '\n';
        return 2;
    } catch (const ArgumentError& e) {
        std::cerr << "argument error: " << e.what() << '\n';
        return 2;
    } catch (const IoError& e) {
        std::cerr << "I/O error: " << e.what() << '\n';
        return 3;
    } catch (const PreconditionError& e) {
        std::cerr << "FAIL precondition: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
