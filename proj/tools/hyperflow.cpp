// hyperflow command-line driver: periods, isoperiodic deformations,
// identity checks, comb regions and canned example runs.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "hyperflow/hyperflow.hpp"
#include "hyperflow/io.hpp"

namespace fs = std::filesystem;
using namespace hyperflow;

namespace {

struct Common {
    std::string basis = "gap";
    std::string alpha;          // JSON array, empty means zero
    double tol_quad = 1e-12;
    double tol_flow = 1e-9;
    std::string out;
};

struct Run {
    std::string command;
    std::vector<std::string> argv;
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    json input;
    json tolerances = json::object();
    std::string mode;
    json path;
    std::vector<std::string> outputs;
    std::string status = "ok";
    int exit = 0;
};

json parse_inline_or_file(const std::string& s) {
    auto first = s.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && (s[first] == '[' || s[first] == '{')) {
        try {
            return json::parse(s);
        } catch (const json::parse_error& e) {
            throw input_error(std::string("cannot parse inline JSON: ") + e.what());
        }
    }
    return read_json_file(s);
}

CVec alpha_for(const Common& o, int g) {
    if (o.alpha.empty()) return CVec::Zero(g);
    CVec a = cvec_from_json(parse_inline_or_file(o.alpha));
    if (a.size() != g) throw input_error("alpha must have genus entries");
    return a;
}

QuadOptions quad_for(const Common& o) {
    QuadOptions q;
    q.tol = o.tol_quad;
    q.max_nodes = 1 << 18;
    return q;
}

// Reads and validates; exit code 3 carries the full validate_config list.
BranchConfig load_config(const std::string& path, bool ordered) {
    BranchConfig c = config_from_json(read_json_file(path));
    auto report = validate_config(c, ordered);
    if (!report.empty()) {
        std::cerr << "validate_config report for " << path << ":\n";
        for (auto& r : report) std::cerr << "  - " << r << '\n';
        require_valid(c, ordered);
    }
    return c;
}

void emit(Run& run, const std::string& out, const std::string& name, const std::string& text) {
    if (out.empty()) {
        std::cout << text;
        if (!text.empty() && text.back() != '\n') std::cout << '\n';
        return;
    }
    fs::create_directories(out);
    write_text((fs::path(out) / name).string(), text);
    run.outputs.push_back(name);
}

void write_manifest(const Run& run, const std::string& out) {
    if (out.empty()) return;
    double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - run.t0).count();
    json m = {{"command", run.command},
              {"argv", run.argv},
              {"input", run.input},
              {"tolerances", run.tolerances},
              {"mode", run.mode},
              {"path", run.path},
              {"outputs", run.outputs},
              {"engine_version", version},
              {"wall_clock_s", wall},
              {"status", run.status},
              {"exit_code", run.exit}};
    fs::create_directories(out);
    write_text((fs::path(out) / "manifest.json").string(), m.dump(2) + "\n");
}

json quad_json(const QuadOptions& q) { return {{"quad_tol", q.tol}, {"quad_min_nodes", q.min_nodes}, {"quad_max_nodes", q.max_nodes}}; }

json identities_summary(const PeriodData& pd, const OmegaDifferential& om, const QuadOptions& q) {
    return to_json(verify_identities(pd, om, q));
}

// ---- periods ---------------------------------------------------------------

void cmd_periods(Run& run, const Common& o, const std::string& config, bool ordered) {
    run.input = config;
    QuadOptions q = quad_for(o);
    run.tolerances = quad_json(q);
    BranchConfig c = load_config(config, ordered);
    PeriodData pd = normalized_basis(c, make_basis(c, o.basis), q);
    OmegaDifferential om = build_omega(pd, alpha_for(o, c.genus));
    json j = to_json(pd);
    j["Omega"] = to_json(om);
    emit(run, o.out, "periods.json", j.dump(2));
}

// ---- deform ----------------------------------------------------------------

struct DeformArgs {
    std::string config, path, mode = "implicit";
    bool correct = true;
    int samples = 10;
    double drift_limit = -1.0;
};

FlowOptions flow_options(const Common& o, const DeformArgs& d, FlowMode mode) {
    FlowOptions f;
    f.rtol = o.tol_flow;
    f.atol = std::min(1e-12, o.tol_flow * 1e-3);
    f.correct = d.correct;
    f.samples_per_leg = d.samples;
    f.quad = quad_for(o);
    // verify-as-you-go threshold: tight with Newton correction, loose otherwise
    f.drift_limit = d.drift_limit > 0 ? d.drift_limit : ((mode == FlowMode::PeriodImplicit && d.correct) ? 1e-7 : 1e-5);
    return f;
}

json flow_tolerances(const FlowOptions& f) {
    json t = quad_json(f.quad);
    t.update({{"atol", f.atol}, {"rtol", f.rtol}, {"correct", f.correct}, {"newton_tol", f.newton_tol},
              {"max_newton", f.max_newton}, {"drift_limit", f.drift_limit}, {"samples_per_leg", f.samples_per_leg}});
    return t;
}

void write_trajectory(Run& run, const std::string& out, const DeformationState& st, const Trajectory& tr) {
    emit(run, out, "trajectory.csv", trajectory_csv(tr));
    emit(run, out, "trajectory.json", to_json(st, tr).dump(2));
}

void run_deform(Run& run, const std::string& out, const DeformationState& st, const std::vector<CVec>& path,
                const FlowOptions& f) {
    Trajectory tr;
    try {
        integrate_flow_into(tr, st, path, f);
    } catch (const Error& e) {
        // partial trajectory is still worth keeping
        if (!out.empty() && !tr.samples.empty()) {
            if (tr.stop_reason.empty()) tr.stop_reason = e.what();
            write_trajectory(run, out, st, tr);
        }
        throw;
    }
    write_trajectory(run, out, st, tr);
    if (out.empty()) return;
    std::cerr << "samples " << tr.samples.size() << ", max beta drift " << tr.max_drift << '\n';
}

void cmd_deform(Run& run, const Common& o, const DeformArgs& d) {
    if (o.out.empty()) throw input_error("deform needs --out DIR");
    run.input = d.config;
    FlowMode mode = parse_mode(d.mode);
    run.mode = to_string(mode);
    BranchConfig c = load_config(d.config, false);
    json pj = parse_inline_or_file(d.path);
    run.path = pj;
    auto path = path_from_json(pj, c.genus);
    // the polyline may omit the starting point
    CVec x0 = as_cvec(c.x);
    if ((path.front() - x0).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, x0.cwiseAbs().maxCoeff()))
        path.insert(path.begin(), x0);
    FlowOptions f = flow_options(o, d, mode);
    run.tolerances = flow_tolerances(f);
    DeformationState st = make_state(c, o.basis, alpha_for(o, c.genus), mode, f.quad);
    run_deform(run, o.out, st, path, f);
}

// ---- verify ----------------------------------------------------------------

void cmd_verify(Run& run, const Common& o, const std::string& config, const std::string& traj,
                std::optional<double> T) {
    QuadOptions q = quad_for(o);
    run.tolerances = quad_json(q);
    json rep;
    if (!traj.empty()) {
        run.input = traj;
        LoadedTrajectory lt = trajectory_from_json(read_json_file(traj));
        if (lt.samples.empty()) throw input_error("trajectory has no samples");
        double drift = 0.0;
        json per = json::array();
        for (auto& s : lt.samples) {
            auto P = evaluate_point(with_xu(s.x, s.u), lt.basis, lt.alpha, q);
            double d = (P.om.beta - lt.beta_target).cwiseAbs().maxCoeff();
            drift = std::max(drift, d);
            per.push_back({{"step", s.step}, {"beta_drift", d}});
        }
        auto first = evaluate_point(with_xu(lt.samples.front().x, lt.samples.front().u), lt.basis, lt.alpha, q);
        auto last = evaluate_point(with_xu(lt.samples.back().x, lt.samples.back().u), lt.basis, lt.alpha, q);
        rep["isoperiodicity"] = {{"max_beta_drift", drift}, {"samples", per}};
        rep["identities_first"] = identities_summary(first.pd, first.om, q);
        rep["identities_last"] = identities_summary(last.pd, last.om, q);
        rep["wavevector"] = to_json(kdv_wavevector_report(lt.samples, lt.basis, q));
        if (T) {
            json h = json::array();
            for (auto* P : {&first, &last}) h.push_back(to_json(hill_check(P->pd, P->om, *T)));
            rep["hill"] = h;
        }
    } else {
        if (config.empty()) throw input_error("verify needs a config file or --trajectory");
        run.input = config;
        BranchConfig c = load_config(config, false);
        PeriodData pd = normalized_basis(c, make_basis(c, o.basis), q);
        OmegaDifferential om = build_omega(pd, alpha_for(o, c.genus));
        rep["identities"] = identities_summary(pd, om, q);
        rep["U"] = to_json(wavevector_U(pd));
        rep["riemann_matrix"] = {{"symmetry_error", pd.diag.symmetry_error},
                                 {"normalization_error", pd.diag.normalization_error}};
        if (T) rep["hill"] = to_json(hill_check(pd, om, *T));
    }
    emit(run, o.out, "verify.json", rep.dump(2));
}

// ---- comb ------------------------------------------------------------------

void cmd_comb(Run& run, const Common& o, const std::string& config, const std::string& traj) {
    QuadOptions q = quad_for(o);
    run.tolerances = quad_json(q);
    json rep;
    if (!traj.empty()) {
        run.input = traj;
        LoadedTrajectory lt = trajectory_from_json(read_json_file(traj));
        if (lt.alpha.cwiseAbs().maxCoeff() != 0.0) throw input_error("comb regions need alpha = 0");
        rep = to_json(comb_invariance_check(lt.samples, lt.basis, 1e-6, q));
    } else {
        if (config.empty()) throw input_error("comb needs a config file or --trajectory");
        run.input = config;
        BranchConfig c = load_config(config, true);
        PeriodData pd = normalized_basis(c, make_basis(c, o.basis), q);
        OmegaDifferential om = build_omega(pd);
        rep = to_json(comb_map(pd, om, q));
        rep["beta"] = to_json(om.beta);
    }
    emit(run, o.out, "comb.json", rep.dump(2));
}

// ---- examples --------------------------------------------------------------

const std::vector<std::string> example_names{"genus1-reference", "lame-one-gap", "lame-two-gap", "neumann-n2",
                                             "comb-g1"};

void cmd_examples(Run& run, const Common& o, const std::string& name) {
    run.input = name;
    const std::string& out = o.out;
    FlowOptions f;
    f.quad = quad_for(o);
    f.rtol = o.tol_flow;
    if (name == "genus1-reference") {
        BranchConfig c = make_real_config({2.0}, {1.0});
        f.drift_limit = 1e-7;
        run.mode = "implicit";
        run.tolerances = flow_tolerances(f);
        CVec xe(1);
        xe[0] = 2.2;
        auto path = straight_path(c, xe);
        run.path = json::array({json::array({2.0}), json::array({2.2})});
        DeformationState st = make_state(c, "gap", CVec::Zero(1), FlowMode::PeriodImplicit, f.quad);
        if (out.empty()) {
            Trajectory tr = integrate_flow(st, path, f);
            std::cout << trajectory_csv(tr);
        } else {
            run_deform(run, out, st, path, f);
        }
    } else if (name == "lame-one-gap") {
        // e2 = 0, e3 = 1 Weierstrass curve, 5% deformation of x
        run.mode = "implicit";
        run.tolerances = flow_tolerances(f);
        CnoidalReport rep = cnoidal_period_report(0.0, 1.0, 2.1, f);
        emit(run, out, "cnoidal.json", to_json(rep).dump(2));
        if (!out.empty()) emit(run, out, "wave.csv", wave_csv(weierstrass_data(0.0, 1.0, f.quad)));
    } else if (name == "lame-two-gap") {
        run.tolerances = quad_json(f.quad);
        LameTwoGap L = lame_two_gap_config(0.0, 1.0);
        PeriodData pd = normalized_basis(L.cfg, make_basis(L.cfg, "gap"), f.quad);
        json j = to_json(pd);
        j["e2_recovered"] = L.e2_recovered;
        j["e3_recovered"] = L.e3_recovered;
        j["ordered"] = L.ordered;
        emit(run, out, "periods.json", j.dump(2));
    } else if (name == "neumann-n2") {
        run.tolerances = quad_json(f.quad);
        NeumannData N = neumann_config({4.0, 3.0, 2.0, 1.0, 0.0});
        PeriodData pd = normalized_basis(N.cfg, make_basis(N.cfg, "gap"), f.quad);
        json j = to_json(pd);
        j["A"] = N.A;
        emit(run, out, "periods.json", j.dump(2));
    } else if (name == "comb-g1") {
        run.tolerances = quad_json(f.quad);
        BranchConfig c = make_real_config({2.0}, {1.0});
        PeriodData pd = normalized_basis(c, make_basis(c, "gap"), f.quad);
        OmegaDifferential om = build_omega(pd);
        json j = to_json(comb_map(pd, om, f.quad));
        j["beta"] = to_json(om.beta);
        emit(run, out, "comb.json", j.dump(2));
    } else {
        std::string all;
        for (auto& n : example_names) all += " " + n;
        throw input_error("unknown example '" + name + "'; available:" + all);
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Periods and isoperiodic deformations of hyperelliptic curves"};
    app.set_version_flag("--version", std::string(version));
    app.require_subcommand(1);

    Common o;
    Run run;
    for (int i = 0; i < argc; ++i) run.argv.push_back(argv[i]);

    auto add_common = [&](CLI::App* s, bool with_alpha = true) {
        s->add_option("--basis", o.basis, "homology marking: gap or band")->check(CLI::IsMember({"gap", "band"}));
        if (with_alpha) s->add_option("--alpha", o.alpha, "a-periods of Omega as a JSON array (default zeros)");
        s->add_option("--tol-quad", o.tol_quad, "quadrature tolerance")->check(CLI::PositiveNumber);
        s->add_option("--out", o.out, "output directory (stdout when omitted)");
    };

    std::string config, traj, example;
    bool ordered = false;
    std::optional<double> T;
    DeformArgs d;

    auto* periods = app.add_subcommand("periods", "period matrices, Riemann matrix and Omega");
    periods->add_option("config", config, "config JSON file")->required();
    periods->add_flag("--ordered", ordered, "require 0 < u1 < x1 < ... < ug < xg");
    add_common(periods);

    auto* deform = app.add_subcommand("deform", "integrate the isoperiodic flow along an x-polyline");
    deform->add_option("config", d.config, "config JSON file")->required();
    deform->add_option("--path", d.path, "JSON polyline [[x_1..x_g], ...] inline or as a file")->required();
    deform->add_option("--mode", d.mode, "implicit or rational")->check(CLI::IsMember({"implicit", "rational"}));
    deform->add_option("--tol-flow", o.tol_flow, "relative ODE tolerance")->check(CLI::PositiveNumber);
    deform->add_flag("--correct,!--no-correct", d.correct, "Newton-correct onto the period constraint");
    deform->add_option("--samples", d.samples, "recorded samples per leg")->check(CLI::PositiveNumber);
    deform->add_option("--drift-limit", d.drift_limit, "abort with exit 5 above this beta drift");
    add_common(deform);

    auto* verify = app.add_subcommand("verify", "identity, isoperiodicity and wavevector report");
    verify->add_option("config", config, "config JSON file");
    verify->add_option("--trajectory", traj, "trajectory.json written by deform");
    verify->add_option("--T", T, "period for the Hill-curve test");
    add_common(verify);

    auto* comb = app.add_subcommand("comb", "comb region of Omega_0 or its invariance along a trajectory");
    comb->add_option("config", config, "config JSON file (ordered real)");
    comb->add_option("--trajectory", traj, "trajectory.json written by deform");
    add_common(comb, false);

    auto* examples = app.add_subcommand("examples", "canned runs");
    examples->add_option("name", example, "one of genus1-reference, lame-one-gap, lame-two-gap, neumann-n2, comb-g1")
        ->required();
    examples->add_option("--tol-flow", o.tol_flow, "relative ODE tolerance")->check(CLI::PositiveNumber);
    add_common(examples, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*periods) {
            run.command = "periods";
            cmd_periods(run, o, config, ordered);
        } else if (*deform) {
            run.command = "deform";
            cmd_deform(run, o, d);
        } else if (*verify) {
            run.command = "verify";
            cmd_verify(run, o, config, traj, T);
        } else if (*comb) {
            run.command = "comb";
            cmd_comb(run, o, config, traj);
        } else if (*examples) {
            run.command = "examples " + example;
            cmd_examples(run, o, example);
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        run.status = e.code();
        run.exit = exit_code(e.kind());
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "error: InputError: " << e.what() << '\n';
        run.status = "InputError";
        run.exit = 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        run.status = "InternalError";
        run.exit = 1;
    }
    try {
        write_manifest(run, o.out);
    } catch (const std::exception& e) {
        std::cerr << "error: cannot write manifest: " << e.what() << '\n';
        if (run.exit == 0) run.exit = 2;
    }
    return run.exit;
}
