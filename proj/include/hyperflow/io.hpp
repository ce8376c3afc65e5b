#pragma once

#include <charconv>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "hyperflow/apps.hpp"
#include "hyperflow/comb.hpp"
#include "hyperflow/curve.hpp"
#include "hyperflow/errors.hpp"
#include "hyperflow/flow.hpp"
#include "hyperflow/identities.hpp"
#include "hyperflow/periods.hpp"

namespace hyperflow {

using json = nlohmann::json;

// Shortest round-trip decimal, independent of the C++ locale.
inline std::string fmt_double(double v) {
    char buf[64];
    auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

inline json to_json(cplx z) { return json::array({z.real(), z.imag()}); }

inline cplx complex_from_json(const json& j) {
    if (j.is_number()) return j.get<double>();
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
        return {j[0].get<double>(), j[1].get<double>()};
    throw input_error("expected a number or an [re, im] pair, got " + j.dump());
}

inline json to_json(const CVec& v) {
    json a = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(to_json(v[i]));
    return a;
}

inline json to_json(const CMat& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json r = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) r.push_back(to_json(m(i, j)));
        rows.push_back(r);
    }
    return rows;
}

inline CVec cvec_from_json(const json& j) {
    if (!j.is_array()) throw input_error("expected an array, got " + j.dump());
    CVec v(j.size());
    for (size_t i = 0; i < j.size(); ++i) v[i] = complex_from_json(j[i]);
    return v;
}

inline json to_json(const BranchConfig& c) {
    json j;
    j["genus"] = c.genus;
    j["real"] = c.real;
    auto list = [&](const std::vector<cplx>& v) {
        json a = json::array();
        for (cplx z : v) a.push_back(c.real ? json(z.real()) : to_json(z));
        return a;
    };
    j["x"] = list(c.x);
    j["u"] = list(c.u);
    return j;
}

inline BranchConfig config_from_json(const json& j) {
    if (!j.is_object() || !j.contains("x") || !j.contains("u")) throw input_error("config needs \"x\" and \"u\"");
    std::vector<cplx> x, u;
    for (auto& e : j.at("x")) x.push_back(complex_from_json(e));
    for (auto& e : j.at("u")) u.push_back(complex_from_json(e));
    BranchConfig c = make_config(x, u);
    if (j.contains("genus") && (!j.at("genus").is_number_integer() || j.at("genus").get<int>() != c.genus)) throw input_error("genus does not match the x/u lengths");
    if (j.contains("real") && j.at("real").is_boolean() && j.at("real").get<bool>() && !c.real) c.real = true;   // validate_config reports it
    return c;
}

inline json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw input_error("cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw input_error(path + ": " + e.what());
    }
}

inline void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw input_error("cannot write " + path);
    out << text;
}

inline json to_json(const CanonicalBasis& b) {
    auto cyc = [](const CycleSpec& s) { return json{{"encircled", s.encircled}, {"orientation", s.orientation}}; };
    json j;
    j["kind"] = b.kind;
    j["a"] = json::array();
    j["b"] = json::array();
    for (auto& s : b.a) j["a"].push_back(cyc(s));
    for (auto& s : b.b) j["b"].push_back(cyc(s));
    return j;
}

inline json to_json(const PeriodData& pd) {
    json j;
    j["config"] = to_json(pd.cfg);
    json labels = json::array();
    for (int i = 0; i <= pd.cfg.infinity_index(); ++i) labels.push_back(pd.cfg.label(i));
    j["labels"] = labels;
    j["basis"] = to_json(pd.basis);
    json P = json::array();
    for (int i = 0; i < pd.pairing.rows(); ++i) {
        json r = json::array();
        for (int k = 0; k < pd.pairing.cols(); ++k) r.push_back(pd.pairing(i, k));
        P.push_back(r);
    }
    j["pairing_mod2"] = P;
    j["A_raw"] = to_json(pd.a_raw);
    j["B_raw"] = to_json(pd.b_raw);
    j["C"] = to_json(pd.C);
    j["B"] = to_json(pd.B);
    j["phi_at"] = to_json(pd.phi_at);
    j["omega_at"] = to_json(pd.omega_at);
    j["U"] = to_json(wavevector_U(pd));
    j["diagnostics"] = {{"max_nodes", pd.diag.max_nodes},
                        {"max_error_estimate", pd.diag.max_error_estimate},
                        {"normalization_error", pd.diag.normalization_error},
                        {"symmetry_error", pd.diag.symmetry_error},
                        {"infinity_fit_error", pd.diag.infinity_fit_error},
                        {"a_rcond", pd.diag.a_condition}};
    return j;
}

inline json to_json(const OmegaDifferential& om) {
    return {{"alpha", to_json(om.alpha)},
            {"c", to_json(om.c)},
            {"q", to_json(om.q)},
            {"beta", to_json(om.beta)},
            {"beta_formula", to_json(om.beta_formula)},
            {"a_periods", to_json(om.a_periods)},
            {"values_at", to_json(om.values_at)},
            {"leading_coefficient", om.leading_coefficient},
            {"residue_at_infinity", om.residue_at_infinity}};
}

inline json to_json(const IdentityReport& r) {
    json a = json::array();
    for (auto& c : r.checks)
        a.push_back({{"name", c.name}, {"mismatch", c.mismatch}, {"magnitude", c.magnitude}, {"instances", c.instances}});
    return a;
}

inline json to_json(const HillReport& h) {
    return {{"is_hill", h.is_hill}, {"ambiguous", h.ambiguous}, {"n", h.n}, {"residuals", h.residuals}};
}

inline json to_json(const CombRegion& R) {
    return {{"q", R.q}, {"h", R.h}, {"xi", R.xi}, {"q_over_beta", R.ratio},
            {"diagnostics", {{"max_error_estimate", R.max_error_estimate}, {"max_nodes", R.max_nodes}}}};
}

inline json to_json(const CombInvariance& r) {
    json regions = json::array();
    for (auto& R : r.regions) regions.push_back(to_json(R));
    return {{"max_q_drift", r.max_q_drift}, {"max_h_variation", r.max_h_variation},
            {"max_ratio_spread", r.max_ratio_spread}, {"q_invariant", r.q_invariant},
            {"h_varies", r.h_varies}, {"regions", regions}};
}

inline json to_json(const WavevectorReport& r) {
    json U = json::array();
    for (auto& u : r.U) U.push_back(to_json(u));
    return {{"max_drift", r.max_drift}, {"max_imag", r.max_imag}, {"U", U}};
}

inline json to_json(const CnoidalReport& r) {
    json s = json::array();
    for (auto& c : r.samples)
        s.push_back({{"x", c.x}, {"u", c.u}, {"two_w1", to_json(c.two_w1)}, {"rel_drift", c.rel_drift},
                     {"periodicity_defect", c.periodicity_defect}, {"max_imag", c.max_imag}});
    return {{"max_rel_drift", r.max_rel_drift}, {"max_periodicity_defect", r.max_periodicity_defect},
            {"c", r.c}, {"grid", r.grid}, {"samples", s}};
}

inline CanonicalBasis basis_from_json(const json& j) {
    CanonicalBasis b;
    b.kind = j.value("kind", std::string("custom"));
    auto cyc = [](const json& c) {
        CycleSpec s;
        s.encircled = c.at("encircled").get<std::vector<int>>();
        s.orientation = c.value("orientation", 1);
        return s;
    };
    for (auto& c : j.at("a")) b.a.push_back(cyc(c));
    for (auto& c : j.at("b")) b.b.push_back(cyc(c));
    return b;
}

// JSON sidecar of a deformation run: everything needed to re-verify it.
inline json to_json(const DeformationState& st, const Trajectory& tr) {
    json samples = json::array();
    for (auto& s : tr.samples)
        samples.push_back({{"step", s.step}, {"x", to_json(s.x)}, {"u", to_json(s.u)}, {"du", to_json(s.du)},
                           {"beta_drift", to_json(s.beta_drift)}, {"du_mismatch", s.du_mismatch},
                           {"accepted", s.accepted}, {"rejected", s.rejected}, {"last_step", s.last_step}});
    json path = json::array();
    for (auto& p : tr.path) path.push_back(to_json(p));
    return {{"config", to_json(st.cfg)}, {"basis", to_json(st.basis)}, {"alpha", to_json(st.alpha)},
            {"beta_target", to_json(st.beta_target)}, {"mode", to_string(st.mode)}, {"path", path},
            {"complete", tr.complete}, {"stop_reason", tr.stop_reason}, {"max_drift", tr.max_drift},
            {"samples", samples}};
}

struct LoadedTrajectory {
    BranchConfig cfg;
    CanonicalBasis basis;
    CVec alpha, beta_target;
    std::vector<Sample> samples;
};

inline LoadedTrajectory trajectory_from_json(const json& j) {
    try {
        LoadedTrajectory t;
        t.cfg = config_from_json(j.at("config"));
        t.basis = basis_from_json(j.at("basis"));
        t.alpha = cvec_from_json(j.at("alpha"));
        t.beta_target = cvec_from_json(j.at("beta_target"));
        for (auto& s : j.at("samples")) {
            Sample x;
            x.step = s.value("step", 0);
            x.x = cvec_from_json(s.at("x"));
            x.u = cvec_from_json(s.at("u"));
            t.samples.push_back(x);
        }
        return t;
    } catch (const json::exception& e) {
        throw input_error(std::string("malformed trajectory: ") + e.what());
    }
}

// Polyline in x-space: [[x_1, ..., x_g], ...], entries numbers or [re, im].
inline std::vector<CVec> path_from_json(const json& j, int genus) {
    if (!j.is_array() || j.empty()) throw input_error("path must be a nonempty array of x-vectors");
    std::vector<CVec> p;
    for (auto& pt : j) {
        CVec v = cvec_from_json(pt);
        if (v.size() != genus) throw input_error("path point has the wrong length");
        p.push_back(v);
    }
    return p;
}

// step, x_1..x_g, u_1..u_g, du_m_j (row-major), beta_drift_1..g; imaginary
// parts follow as *_im columns when the trajectory is not real.
inline std::string trajectory_csv(const Trajectory& tr) {
    if (tr.samples.empty()) return "step\n";
    const int g = int(tr.samples.front().x.size());
    double scale = 1.0, imag = 0.0;
    for (auto& s : tr.samples) {
        scale = std::max({scale, s.x.cwiseAbs().maxCoeff(), s.u.cwiseAbs().maxCoeff()});
        imag = std::max({imag, s.x.imag().cwiseAbs().maxCoeff(), s.u.imag().cwiseAbs().maxCoeff()});
    }
    const bool complex_cols = imag > 1e-12 * scale;
    std::ostringstream os;
    std::vector<std::string> names;
    for (int j = 0; j < g; ++j) names.push_back("x_" + std::to_string(j + 1));
    for (int j = 0; j < g; ++j) names.push_back("u_" + std::to_string(j + 1));
    for (int m = 0; m < g; ++m)
        for (int j = 0; j < g; ++j) names.push_back("du_" + std::to_string(m + 1) + "_" + std::to_string(j + 1));
    os << "step";
    for (auto& n : names) os << ',' << n;
    for (int j = 0; j < g; ++j) os << ",beta_drift_" << j + 1;
    if (complex_cols)
        for (auto& n : names) os << ',' << n << "_im";
    os << '\n';
    for (auto& s : tr.samples) {
        std::vector<cplx> vals;
        for (int j = 0; j < g; ++j) vals.push_back(s.x[j]);
        for (int j = 0; j < g; ++j) vals.push_back(s.u[j]);
        for (int m = 0; m < g; ++m)
            for (int j = 0; j < g; ++j) vals.push_back(s.du(m, j));
        os << s.step;
        for (cplx v : vals) os << ',' << fmt_double(v.real());
        for (int j = 0; j < g; ++j) os << ',' << fmt_double(std::abs(s.beta_drift[j]));
        if (complex_cols)
            for (cplx v : vals) os << ',' << fmt_double(v.imag());
        os << '\n';
    }
    return os.str();
}

inline std::string wave_csv(const WeierstrassData& wd, int grid = 512, double c = 0.0) {
    std::ostringstream os;
    os << "X,v\n";
    double L = 4.0 * std::abs(wd.w1);
    for (int i = 0; i < grid; ++i) {
        double X = L * i / grid;
        cplx v = 2.0 * wp_function(wd, cplx(X) - wd.w2).value - c / 6.0;
        os << fmt_double(X) << ',' << fmt_double(v.real()) << '\n';
    }
    return os.str();
}

}  // namespace hyperflow
