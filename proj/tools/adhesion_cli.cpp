#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "adhesion/acceptance.hpp"
#include "adhesion/fields.hpp"
#include "adhesion/flow.hpp"
#include "adhesion/measures.hpp"
#include "adhesion/riemann3.hpp"

#ifndef ADHESION_VERSION
#define ADHESION_VERSION "0.0.0"
#endif

namespace fs = std::filesystem;
using nlohmann::json;
using namespace adhesion;

namespace {

enum Exit { ok = 0, usage = 1, check_failed = 2, not_converged = 3 };

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

const std::map<std::string, double> kTolDefaults = {
    {"lipschitz", 1e-6},  // |grad u| <= K + tol
    {"concavity", 1e-6},  // semi-concavity and w-eps convexity margins
    {"ladder", 0.02},     // Cauchy gap between ladder rungs
    {"integrator", 1e-7},
    {"contraction", 1e-6},
    {"inclusion", -1.0},  // negative: 1e-6 on closed forms, the ladder tol otherwise
    {"ac", -1.0},         // negative: ac agreement reported, not enforced
};

struct RunConfig {
    std::string command;
    json potential;  // as read, so sampled specs keep their csv path
    PotentialSpec spec;
    double lo = -1.0, hi = 1.0;
    int n = 41;
    std::vector<double> times{0.3};
    double eps = 0.0;
    std::vector<double> ladder;
    int seeds = 0;  // 0 picks a per-command default
    std::string out = "adhesion_out";
    std::map<std::string, double> tol = kTolDefaults;
    std::uint64_t seed = 1;
    std::vector<int> criteria;

    double tolerance(const std::string& k) const { return tol.at(k); }

    json canonical() const {
        json j;
        j["command"] = command;
        j["potential"] = potential;
        j["grid"] = {lo, hi, n};
        j["t"] = times;
        j["eps"] = eps;
        j["eps_ladder"] = ladder;
        j["seeds"] = seeds;
        j["tol"] = tol;
        j["seed"] = seed;
        if (!criteria.empty()) j["criteria"] = criteria;
        return j;
    }
};

std::string config_hash(const RunConfig& c) {
    // FNV-1a 64
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char ch : c.canonical().dump()) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

json stamp(const RunConfig& c) {
    json j;
    j["tool"] = "adhesion";
    j["version"] = ADHESION_VERSION;
    j["config_hash"] = config_hash(c);
    j["seed"] = c.seed;
    j["config"] = c.canonical();
    return j;
}

void write_file(const RunConfig& c, const std::string& name, const std::string& text) {
    fs::create_directories(c.out);
    std::ofstream f(fs::path(c.out) / name, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + (fs::path(c.out) / name).string());
    f << text;
}

void write_json(const RunConfig& c, const std::string& name, json body) {
    json j = stamp(c);
    j.update(body);
    write_file(c, name, j.dump(2) + "\n");
}

std::string slot(const char* stem, std::size_t k, const char* ext) { return stem + std::to_string(k) + ext; }

// ---- config assembly

std::vector<double> split_numbers(const std::string& s) {
    std::vector<double> v;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        try {
            std::size_t used = 0;
            v.push_back(std::stod(tok, &used));
            if (used != tok.size()) throw std::invalid_argument(tok);
        } catch (const std::exception&) {
            throw UsageError("not a number: '" + tok + "'");
        }
    }
    return v;
}

void set_grid(RunConfig& c, const std::vector<double>& g) {
    if (g.size() != 3) throw UsageError("grid wants lo,hi,n");
    c.lo = g[0];
    c.hi = g[1];
    c.n = int(g[2]);
    if (double(c.n) != g[2] || c.n < 2 || !(c.hi > c.lo)) throw UsageError("grid wants lo < hi and integer n >= 2");
}

void set_tol(RunConfig& c, const std::string& name, double v) {
    if (!kTolDefaults.count(name)) {
        std::string known;
        for (auto& [k, d] : kTolDefaults) known += " " + k;
        throw UsageError("unknown tolerance '" + name + "' (known:" + known + ")");
    }
    c.tol[name] = v;
}

json load_json_file(const fs::path& p) {
    if (!fs::exists(p)) throw UsageError("no such file: " + p.string());
    std::ifstream f(p);
    try {
        return json::parse(f);
    } catch (const json::exception& e) {
        throw UsageError(p.string() + ": " + e.what());
    }
}

json load_potential(const std::string& path, const fs::path& base) {
    fs::path p = path;
    if (p.is_relative()) p = base / p;
    return load_json_file(p);
}

std::vector<double> numbers_of(const json& v) {
    if (v.is_number()) return {v.get<double>()};
    if (v.is_string()) return split_numbers(v.get<std::string>());
    return v.get<std::vector<double>>();
}

// keys mirror the long flags; values here win over flags
void apply_config_file(RunConfig& c, const std::string& path) {
    fs::path p = path;
    json j = load_json_file(p);
    if (!j.is_object()) throw UsageError(path + ": expected an object");
    try {
        for (auto& [k, v] : j.items()) {
            if (k == "potential")
                c.potential = v.is_string() ? load_potential(v.get<std::string>(), p.parent_path()) : v;
            else if (k == "t")
                c.times = numbers_of(v);
            else if (k == "eps")
                c.eps = v.get<double>();
            else if (k == "eps_ladder" || k == "eps-ladder")
                c.ladder = numbers_of(v);
            else if (k == "grid")
                set_grid(c, numbers_of(v));
            else if (k == "seeds")
                c.seeds = v.get<int>();
            else if (k == "out")
                c.out = v.get<std::string>();
            else if (k == "tol")
                for (auto& [name, val] : v.items()) set_tol(c, name, val.get<double>());
            else if (k == "seed")
                c.seed = v.get<std::uint64_t>();
            else if (k == "criteria")
                c.criteria = v.get<std::vector<int>>();
            else
                throw UsageError(path + ": unknown key '" + k + "'");
        }
    } catch (const json::exception& e) {
        throw UsageError(path + ": " + e.what());
    }
}

void finish_config(RunConfig& c) {
    if (c.times.empty()) throw UsageError("no times given");
    for (double t : c.times)
        if (!(t > 0)) throw UsageError("times must be positive");
    for (std::size_t k = 0; k < c.ladder.size(); ++k) {
        if (!(c.ladder[k] > 0)) throw UsageError("ladder rungs must be positive");
        if (k && !(c.ladder[k] < c.ladder[k - 1])) throw UsageError("eps ladder must be strictly decreasing");
    }
    if (c.eps < 0) throw UsageError("eps must be >= 0");
    if (c.seeds < 0) throw UsageError("seeds must be >= 0");
    if (c.command == "accept") return;
    if (c.potential.is_null()) throw UsageError("--potential is required");
    try {
        c.spec = PotentialSpec::from_json(c.potential.dump());
    } catch (const std::exception& e) {
        throw UsageError(std::string("invalid potential: ") + e.what());
    }
}

Grid field_grid(const RunConfig& c, int n) {
    if (c.spec.dim == 1) return Grid::line(c.lo, c.hi, n);
    return Grid::box({c.lo, c.lo}, {c.hi, c.hi}, n);
}

Window window_of(const RunConfig& c) {
    if (c.spec.dim == 1) return Window::line(c.lo, c.hi);
    return Window::box({c.lo, c.lo}, {c.hi, c.hi});
}

std::vector<double> with_zero(std::vector<double> t) {
    std::sort(t.begin(), t.end());
    t.erase(std::unique(t.begin(), t.end()), t.end());
    if (t.front() > 0) t.insert(t.begin(), 0.0);
    return t;
}

std::vector<double> ladder_of(const RunConfig& c) { return c.ladder.empty() ? default_eps_ladder() : c.ladder; }

json vec_json(Vec2 v, int dim) { return dim == 1 ? json::array({v.x}) : json::array({v.x, v.y}); }

// ---- commands

int cmd_fields(RunConfig& c) {
    std::vector<double> epss = c.ladder;
    if (c.eps > 0 && std::find(epss.begin(), epss.end(), c.eps) == epss.end()) epss.insert(epss.begin(), c.eps);
    if (epss.empty()) epss.push_back(0.1);
    Grid g = field_grid(c, c.n);
    double tol_l = c.tolerance("lipschitz"), tol_c = c.tolerance("concavity");
    bool pass = true, decreasing = true;
    json files = json::array(), checks = json::array(), gaps = json::array();
    for (std::size_t k = 0; k < c.times.size(); ++k) {
        double t = c.times[k];
        auto u = sample_u(c.spec, g, t), w = sample_w(c.spec, g, t);
        auto dump = [&](const std::string& name, const ScalarField& f, double eps) {
            std::ostringstream os;
            write_csv(os, f);
            write_file(c, name, os.str());
            files.push_back({{"file", name}, {"t", t}, {"eps", eps}});
        };
        dump(slot("u_t", k, ".csv"), u, 0.0);
        dump(slot("w_t", k, ".csv"), w, 0.0);
        double prev = INFINITY;
        for (std::size_t e = 0; e < epss.size(); ++e) {
            ViscousParams vp;
            vp.eps = epss[e];
            auto ue = sample_u_viscous(c.spec, g, t, vp);
            auto we = sample_w_viscous(c.spec, g, t, vp);
            std::string tag = "_e" + std::to_string(e);
            dump(slot(("ueps" + tag + "_t").c_str(), k, ".csv"), ue, vp.eps);
            dump(slot(("weps" + tag + "_t").c_str(), k, ".csv"), we, vp.eps);
            auto fc = check_fields(c.spec, t, g, vp);
            bool lip = fc.max_grad_u <= fc.K + tol_l && fc.max_grad_u_eps <= fc.K + tol_l;
            bool conc = fc.min_concavity >= -tol_c && fc.min_w_eps_eig >= -tol_c;
            pass = pass && lip && conc;
            checks.push_back({{"t", t},
                              {"eps", vp.eps},
                              {"K", fc.K},
                              {"max_grad_u", fc.max_grad_u},
                              {"max_grad_u_eps", fc.max_grad_u_eps},
                              {"min_concavity", fc.min_concavity},
                              {"min_w_eps_eig", fc.min_w_eps_eig},
                              {"lipschitz_ok", lip},
                              {"concavity_ok", conc}});
            double gap = 0.0;
            for (std::size_t i = 0; i < g.size(); ++i) gap = std::max(gap, std::abs(ue[i] - u[i]));
            if (!(gap < prev) && e > 0) decreasing = false;
            prev = gap;
            gaps.push_back({{"t", t}, {"eps", vp.eps}, {"sup_gap_u", gap}});
        }
    }
    write_json(c, "fields.json",
               {{"grid", {{"lo", c.lo}, {"hi", c.hi}, {"n", c.n}, {"dim", c.spec.dim}}},
                {"files", files},
                {"checks", checks},
                {"eps_gaps", gaps},
                {"gaps_decreasing", decreasing},
                {"pass", pass}});
    if (!pass) {
        std::cerr << "fields: Lipschitz or concavity check failed, see fields.json\n";
        return check_failed;
    }
    if (epss.size() > 1 && !decreasing) {
        std::cerr << "fields: sup-norm gaps do not decrease along the eps ladder\n";
        return not_converged;
    }
    return ok;
}

json violations_json(const std::vector<PairViolation>& v) {
    json a = json::array();
    for (std::size_t k = 0; k < std::min<std::size_t>(v.size(), 20); ++k)
        a.push_back({{"y", v[k].y}, {"z", v[k].z}, {"s", v[k].s}, {"t", v[k].t}, {"excess", v[k].excess}});
    return a;
}

int cmd_flow(RunConfig& c) {
    int ns = c.seeds > 0 ? c.seeds : 21;
    Grid sg = field_grid(c, ns);
    auto times = with_zero(c.times);
    PathBundle b;
    bool limit = c.eps == 0.0;
    if (limit) {
        LadderOptions lo;
        lo.tol = c.tolerance("ladder");
        lo.integ.tol = c.tolerance("integrator");
        b = limit_flow(c.spec, grid_seeds(sg), times, ladder_of(c), lo);
    } else {
        ViscousParams vp;
        vp.eps = c.eps;
        IntegratorOptions io;
        io.tol = c.tolerance("integrator");
        b = integrate_viscous(c.spec, grid_seeds(sg), times, vp, io);
    }
    b.seed_volume = sg.cell_volume();
    std::ostringstream csv;
    b.write_csv(csv);
    write_file(c, "paths.csv", csv.str());

    bool pass = true;
    json body;
    body["eps"] = b.eps;
    body["times"] = times;
    body["seeds"] = b.n_seeds();
    body["converged"] = b.converged;
    body["rung_eps"] = b.rung_eps;
    body["ladder_decrements"] = b.decrements;

    auto cr = contraction_check(b, c.spec.lambda, c.tolerance("contraction"));
    body["contraction"] = {{"lambda", c.spec.lambda},
                           {"pairs", cr.pairs},
                           {"delta_stick", cr.delta_stick},
                           {"contraction_violations", cr.contraction.size()},
                           {"sticking_violations", cr.sticking.size()},
                           {"contraction", violations_json(cr.contraction)},
                           {"sticking", violations_json(cr.sticking)}};
    pass = pass && cr.ok();

    if (limit) {
        auto ir = inclusion_residual(b, c.spec);
        double tol = c.tolerance("inclusion");
        if (tol < 0) tol = b.rung_eps == 0.0 ? 1e-6 : c.tolerance("ladder");
        body["inclusion"] = {{"max_residual", ir.max_residual},
                             {"samples", ir.samples},
                             {"one_sided", ir.one_sided},
                             {"tol", tol},
                             {"ok", ir.max_residual <= tol}};
        pass = pass && ir.max_residual <= tol;
    }
    if (times.size() >= 3) {
        auto sr = semiflow_map(b, times.front(), times[times.size() / 2], times.back(), c.spec.lambda);
        body["semiflow"] = {{"s", sr.s},
                            {"r", sr.r},
                            {"t", sr.t},
                            {"assoc_error", sr.assoc_error},
                            {"lipschitz", sr.lipschitz},
                            {"lipschitz_bound", sr.lipschitz_bound},
                            {"points", sr.points}};
    }
    body["pass"] = pass;
    write_json(c, "flow.json", body);
    if (!b.converged) {
        std::cerr << "flow: eps ladder did not converge, see flow.json\n";
        return not_converged;
    }
    if (!pass) {
        std::cerr << "flow: contraction or inclusion check failed, see flow.json\n";
        return check_failed;
    }
    return ok;
}

json mass_json(const MeasureRepr& m) {
    return {{"ac", m.ac_mass()},
            {"atoms", m.atom_mass()},
            {"segments", m.segment_mass()},
            {"total", m.total_mass()},
            {"n_atoms", m.atoms.size()},
            {"n_segments", m.segments.size()}};
}

int cmd_measures(RunConfig& c) {
    Window win = window_of(c);
    int nc = c.n;
    Grid cells = c.spec.dim == 1 ? cell_grid(win, nc) : cell_grid(win, nc, nc);
    double cw = cells.spacing(0);
    double tmax = *std::max_element(c.times.begin(), c.times.end());
    // seeds at sub-cell centres over the window padded by whole cells covering K t
    int sub = c.seeds > 0 ? std::max(1, c.seeds / nc) : 4;
    int pad = int(std::ceil(c.spec.K * tmax / cw));
    double lo = c.lo - pad * cw + 0.5 * cw / sub, hi = c.hi + pad * cw - 0.5 * cw / sub;
    int ns = (nc + 2 * pad) * sub;
    Grid sg = c.spec.dim == 1 ? Grid::line(lo, hi, ns) : Grid::box({lo, lo}, {hi, hi}, ns);

    auto times = with_zero(c.times);
    LadderOptions lopt;
    lopt.tol = c.tolerance("ladder");
    lopt.integ.tol = c.tolerance("integrator");
    auto b = limit_flow(c.spec, grid_seeds(sg), times, ladder_of(c), lopt);
    b.seed_volume = sg.cell_volume();

    bool pass = true;
    json rows = json::array();
    for (std::size_t k = 0; k < c.times.size(); ++k) {
        double t = c.times[k];
        auto rho = pushforward_histogram(b, t, cells);
        extract_atoms(rho, b.snapshot(t));
        auto nu = monge_ampere_measure(c.spec, t, cells, sg);
        write_file(c, slot("rho_t", k, ".json"), rho.to_json() + "\n");
        write_file(c, slot("nu_t", k, ".json"), nu.to_json() + "\n");
        auto mask = singular_support_mask(nu, cells, 1);
        auto ag = ac_agreement_check(rho, nu, mask);
        json row = {{"t", t},
                    {"rho", mass_json(rho)},
                    {"nu", mass_json(nu)},
                    {"flat_metric", flat_metric(rho, nu, win)},
                    {"ac_agreement",
                     {{"cells", ag.cells},
                      {"max_rel_rho", ag.max_rel_rho},
                      {"max_rel_nu", ag.max_rel_nu},
                      {"max_rel_between", ag.max_rel_between}}}};
        double tol = c.tolerance("ac");
        if (tol >= 0 && ag.max_rel_between > tol) pass = false;
        if (c.eps > 0) {
            ViscousParams vp;
            vp.eps = c.eps;
            auto vd = viscous_density(c.spec, vp, cells, t, sg);
            write_file(c, slot("nu_eps_t", k, ".json"), vd.measure.to_json() + "\n");
            row["nu_eps"] = mass_json(vd.measure);
            row["nu_eps"]["near_singular"] = vd.near_singular;
            row["flat_metric_nu_eps_nu"] = flat_metric(vd.measure, nu, win);
        }
        rows.push_back(row);
    }
    write_json(c, "measures.json",
               {{"cells", nc},
                {"seeds", sg.size()},
                {"seed_window", {lo, hi}},
                {"converged", b.converged},
                {"times", rows},
                {"pass", pass}});
    if (!b.converged) {
        std::cerr << "measures: eps ladder did not converge\n";
        return not_converged;
    }
    if (!pass) {
        std::cerr << "measures: ac agreement above tolerance, see measures.json\n";
        return check_failed;
    }
    return ok;
}

int cmd_riemann3(RunConfig& c) {
    if (!c.spec.is_three_sector()) throw UsageError("riemann3 needs a planar piecewise_linear_min potential with three vectors");
    ThreeSectorProblem p;
    try {
        p = build(c.spec);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    OracleOptions oo;
    oo.n = c.seeds > 0 ? c.seeds : 512;
    oo.bins = std::max(8, oo.n / 2);
    bool pass = true;
    json runs = json::array();
    for (std::size_t k = 0; k < c.times.size(); ++k) {
        double t = c.times[k];
        auto r = riemann3_report(p, t, &oo, 2000, c.seed);
        json j = json::parse(r.to_json());
        bool consistent = r.mono.monotone == p.sticky;
        j["monotone_matches_sticky"] = consistent;
        pass = pass && consistent;
        write_json(c, slot("riemann3_t", k, ".json"), j);
        write_file(c, slot("lagrangian_t", k, ".svg"), svg_lagrangian(p, t));
        write_file(c, slot("eulerian_t", k, ".svg"), svg_eulerian(p, t));
        write_file(c, slot("preimages_t", k, ".svg"), svg_preimages(p, 0.5 * t, t));
        runs.push_back({{"t", t}, {"report", slot("riemann3_t", k, ".json")}, {"monotone_matches_sticky", consistent}});
    }
    write_json(c, "riemann3.json", {{"runs", runs}, {"pass", pass}});
    if (!pass) {
        std::cerr << "riemann3: monotonicity verdict disagrees with the sticky classification\n";
        return check_failed;
    }
    return ok;
}

int cmd_convergence(RunConfig& c) {
    auto ladder = ladder_of(c);
    if (ladder.size() < 2) throw UsageError("convergence needs at least two ladder rungs");
    int ns = c.seeds > 0 ? c.seeds : 21;
    Grid sg = field_grid(c, ns);
    auto seeds = grid_seeds(sg);
    auto times = with_zero(c.times);
    IntegratorOptions io;
    io.tol = c.tolerance("integrator");
    bool exact = has_exact_flow(c.spec);

    std::vector<PathBundle> rungs;
    for (double e : ladder) {
        ViscousParams vp;
        vp.eps = e;
        rungs.push_back(integrate_viscous(c.spec, seeds, times, vp, io));
    }
    bool decreasing = true;
    json rows = json::array();
    std::ostringstream csv;
    csv << "eps,t,gap_prev,gap_exact\n";
    for (double t : c.times) {
        std::size_t kt = rungs[0].time_index(t);
        double last_prev = INFINITY, last_exact = INFINITY;
        for (std::size_t r = 0; r < rungs.size(); ++r) {
            double gp = NAN, ge = NAN;
            if (r > 0) {
                gp = 0;
                for (std::size_t s = 0; s < seeds.size(); ++s)
                    gp = std::max(gp, norm(rungs[r].at(s, kt) - rungs[r - 1].at(s, kt)));
            }
            if (exact) {
                ge = 0;
                for (std::size_t s = 0; s < seeds.size(); ++s)
                    ge = std::max(ge, norm(rungs[r].at(s, kt) - exact_flow(c.spec, seeds[s], t)));
            }
            if (r > 1 && !(gp < last_prev)) decreasing = false;
            if (exact && !(ge < last_exact)) decreasing = false;
            if (r > 0) last_prev = gp;
            if (exact) last_exact = ge;
            csv << fmt17(ladder[r]) << ',' << fmt17(t) << ',' << (r > 0 ? fmt17(gp) : "") << ','
                << (exact ? fmt17(ge) : "") << '\n';
            json row = {{"eps", ladder[r]}, {"t", t}};
            row["gap_prev"] = r > 0 ? json(gp) : json(nullptr);
            row["gap_exact"] = exact ? json(ge) : json(nullptr);
            rows.push_back(row);
        }
    }
    write_file(c, "convergence.csv", csv.str());
    write_json(c, "convergence.json",
               {{"seeds", seeds.size()}, {"exact_reference", exact}, {"table", rows}, {"decreasing", decreasing}});
    if (!decreasing) {
        std::cerr << "convergence: sup-norm gaps do not decrease along the ladder\n";
        return not_converged;
    }
    return ok;
}

int cmd_accept(RunConfig& c) {
    for (int id : c.criteria)
        if (id < 1 || id > kCriteria) throw UsageError("criterion ids run from 1 to " + std::to_string(kCriteria));
    auto res = run_acceptance(c.criteria, c.seed);
    int failed = 0;
    json rows = json::array();
    for (auto& r : res) {
        std::cout << format_line(r) << std::endl;
        failed += !r.pass;
        rows.push_back({{"id", r.id}, {"title", r.title}, {"pass", r.pass}, {"detail", r.detail}});
    }
    write_json(c, "accept.json", {{"criteria", rows}, {"failed", failed}});
    std::cout << failed << " of " << res.size() << " criteria failed" << std::endl;
    if (failed) {
        for (auto& r : res)
            if (!r.pass) std::cerr << "failed: " << r.id << " " << r.title << "\n";
        return check_failed;
    }
    return ok;
}

struct RawFlags {
    std::string potential, grid, config;
    std::vector<double> times, ladder;
    std::vector<std::string> tols;
    double eps = 0.0;
    int seeds = 0;
    std::string out;
    std::uint64_t seed = 1;
    std::vector<int> criteria;
};

void add_common(CLI::App* sc, RawFlags& f) {
    sc->add_option("--potential", f.potential, "potential spec JSON");
    sc->add_option("--t", f.times, "times, comma separated")->delimiter(',');
    sc->add_option("--eps", f.eps, "viscosity");
    sc->add_option("--eps-ladder", f.ladder, "strictly decreasing viscosities, comma separated")->delimiter(',');
    sc->add_option("--grid", f.grid, "lo,hi,n");
    sc->add_option("--seeds", f.seeds, "seeds per axis");
    sc->add_option("--out", f.out, "output directory");
    sc->add_option("--tol", f.tols, "name=value, repeatable");
    sc->add_option("--seed", f.seed, "random seed");
    sc->add_option("--config", f.config, "JSON config; its keys override flags");
}

RunConfig resolve(const std::string& command, const RawFlags& f, CLI::App* sc) {
    RunConfig c;
    c.command = command;
    if (!f.potential.empty()) c.potential = load_potential(f.potential, fs::current_path());
    if (sc->count("--t")) c.times = f.times;
    if (sc->count("--eps")) c.eps = f.eps;
    if (sc->count("--eps-ladder")) c.ladder = f.ladder;
    if (!f.grid.empty()) set_grid(c, split_numbers(f.grid));
    if (sc->count("--seeds")) c.seeds = f.seeds;
    if (!f.out.empty()) c.out = f.out;
    for (auto& kv : f.tols) {
        auto eq = kv.find('=');
        if (eq == std::string::npos) throw UsageError("--tol wants name=value, got '" + kv + "'");
        auto v = split_numbers(kv.substr(eq + 1));
        if (v.size() != 1) throw UsageError("--tol wants one value, got '" + kv + "'");
        set_tol(c, kv.substr(0, eq), v[0]);
    }
    c.seed = f.seed;
    c.criteria = f.criteria;
    if (!f.config.empty()) apply_config_file(c, f.config);
    finish_config(c);
    return c;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"adhesion: viscous and inviscid adhesion dynamics studies"};
    app.set_version_flag("--version", ADHESION_VERSION);
    app.require_subcommand(1);
    RawFlags f;
    const std::vector<std::pair<const char*, const char*>> cmds = {
        {"fields", "u, w and their viscous versions on a grid, with Lipschitz and concavity checks"},
        {"flow", "limit or viscous paths with contraction, inclusion and semiflow reports"},
        {"measures", "pushforward and Monge-Ampere measures with comparison reports"},
        {"riemann3", "three-sector oracle report and figures"},
        {"convergence", "eps-ladder Cauchy table of viscous paths"},
        {"accept", "acceptance suite"},
    };
    std::vector<CLI::App*> subs;
    for (auto& [name, help] : cmds) {
        auto* sc = app.add_subcommand(name, help);
        add_common(sc, f);
        subs.push_back(sc);
    }
    subs.back()->add_option("--criteria", f.criteria, "criterion ids, comma separated")->delimiter(',');

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? ok : usage;
    }

    CLI::App* sc = nullptr;
    for (auto* s : subs)
        if (s->parsed()) sc = s;
    std::string command = sc->get_name();
    try {
        RunConfig c = resolve(command, f, sc);
        if (command == "fields") return cmd_fields(c);
        if (command == "flow") return cmd_flow(c);
        if (command == "measures") return cmd_measures(c);
        if (command == "riemann3") return cmd_riemann3(c);
        if (command == "convergence") return cmd_convergence(c);
        return cmd_accept(c);
    } catch (const UsageError& e) {
        std::cerr << command << ": " << e.what() << "\n";
        return usage;
    } catch (const std::invalid_argument& e) {
        std::cerr << command << ": " << e.what() << "\n";
        return usage;
    } catch (const std::exception& e) {
        std::cerr << command << ": numerical failure: " << e.what() << "\n";
        return not_converged;
    }
}
