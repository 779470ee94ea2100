#include "ltvi/runner.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <complex>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "ltvi/analysis.hpp"
#include "ltvi/battery.hpp"
#include "ltvi/config.hpp"
#include "ltvi/controller.hpp"
#include "ltvi/csv.hpp"
#include "ltvi/svg.hpp"
#include "ltvi/tank.hpp"
#include "ltvi/ti.hpp"
#include "ltvi/transition.hpp"

namespace ltvi {
namespace {

namespace fs = std::filesystem;

const std::map<std::string, std::vector<std::string>> kKnownKeys = {
    {"plant", {"type", "c1", "c2", "c3", "c4", "c5", "c6"}},
    {"controller", {"type", "ki", "alpha", "beta_I", "antiwindup"}},
    {"disturbance", {"w"}},
    {"simulation", {"horizon", "step", "q_sat", "z1_0", "z2_0", "v_0", "sample_dt"}},
    {"sweep", {"ki", "controllers"}},
    {"analysis", {"ki", "h_variant", "H", "floor", "grid_points", "battery", "ues_starts"}},
    {"ti", {"A", "B", "C", "K", "Ki"}},
};

Config load_config(const RunConfig& rc) {
    Config cfg = rc.config_path.empty() ? Config::parse_string(default_config_text(), "<builtin>")
                                        : Config::parse_file(rc.config_path);
    cfg.require_known_keys(kKnownKeys);
    return cfg;
}

TankParams params_from(const Config& cfg) {
    TankParams p;
    p.c1 = cfg.get_double("plant", "c1", p.c1);
    p.c2 = cfg.get_double("plant", "c2", p.c2);
    p.c3 = cfg.get_double("plant", "c3", p.c3);
    p.c4 = cfg.get_double("plant", "c4", p.c4);
    p.c5 = cfg.get_double("plant", "c5", p.c5);
    p.c6 = cfg.get_double("plant", "c6", p.c6);
    p.w = cfg.get_double("disturbance", "w", p.w);
    p.q_sat = cfg.get_double("simulation", "q_sat", p.q_sat);
    p.horizon = cfg.get_double("simulation", "horizon", p.horizon);
    p.alpha = cfg.get_double("controller", "alpha", p.alpha);
    p.beta_I = cfg.get_double("controller", "beta_I", p.beta_I);
    p.ki = cfg.get_double("controller", "ki", p.ki);
    p.validate();
    return p;
}

TankPlant plant_from(const Config& cfg) {
    const std::string type = cfg.get_string("plant", "type", "nonlinear-two-tank");
    if (type == "nonlinear-two-tank") {
        return TankPlant::NonlinearTwoTank;
    }
    if (type == "linearized") {
        return TankPlant::Linearized;
    }
    throw ConfigError("config: field 'plant.type' must be nonlinear-two-tank or linearized, got '" +
                      type + "'");
}

TankControllerKind controller_kind(const std::string& name, const std::string& field) {
    if (name == "proposed") {
        return TankControllerKind::Proposed;
    }
    if (name == "standard-I") {
        return TankControllerKind::StandardI;
    }
    if (name == "none") {
        return TankControllerKind::None;
    }
    throw ConfigError("config: field '" + field +
                      "' must be proposed, standard-I or none, got '" + name + "'");
}

std::string ki_tag(double ki) {
    std::ostringstream out;
    out << ki;
    std::string s = out.str();
    std::replace(s.begin(), s.end(), '.', 'p');
    return s;
}

std::string fmt_g(double v) {
    std::ostringstream out;
    out << v;
    return out.str();
}

MatrixFunction analysis_H(const Config& cfg, const TankParams& p, const LtvSystem& sys) {
    const std::string variant = cfg.get_string("analysis", "h_variant", "uniform-alpha");
    if (variant == "uniform-alpha") {
        Matrix H(1, 2);
        H << p.alpha, p.alpha;
        return MatrixFunction::constant(H);
    }
    if (variant == "constant") {
        const Matrix H = cfg.get_matrix("analysis", "H");
        if (H.rows() != 1 || H.cols() != 2) {
            throw ConfigError("config: field 'analysis.H' must be a 1x2 matrix");
        }
        return MatrixFunction::constant(H);
    }
    if (variant == "transpose") {
        return choose_H(sys, HVariant::Transpose);
    }
    if (variant == "normalized") {
        return choose_H(sys, HVariant::Normalized);
    }
    if (variant == "eigen-normalized") {
        return choose_H(sys, HVariant::EigenNormalized);
    }
    if (variant == "floored") {
        return choose_H(sys, HVariant::Floored, cfg.get_double("analysis", "floor", 0.01));
    }
    throw ConfigError("config: field 'analysis.h_variant' has unknown value '" + variant + "'");
}

std::vector<std::complex<double>> sorted_spectrum(const Matrix& m) {
    Eigen::EigenSolver<Matrix> es(m);
    std::vector<std::complex<double>> out(static_cast<std::size_t>(m.rows()));
    for (int i = 0; i < m.rows(); ++i) {
        out[static_cast<std::size_t>(i)] = es.eigenvalues()(i);
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        if (a.real() != b.real()) {
            return a.real() < b.real();
        }
        return a.imag() < b.imag();
    });
    return out;
}

std::string complex_list(const std::vector<std::complex<double>>& eigs) {
    std::ostringstream out;
    for (std::size_t i = 0; i < eigs.size(); ++i) {
        if (i > 0) {
            out << ", ";
        }
        out << eigs[i].real();
        if (eigs[i].imag() != 0.0) {
            out << (eigs[i].imag() > 0 ? "+" : "") << eigs[i].imag() << "i";
        }
    }
    return out.str();
}

}  // namespace

std::string default_config_text() {
    return R"(# Two-tank tracking study, model and reference constants per the lab setup.
[plant]
type = nonlinear-two-tank
c1 = 0.513
c2 = 0.513
c3 = 0.299
c4 = 7.0
c5 = 2.0
c6 = 0.008

[controller]
type = proposed
ki = 1.0
alpha = 0.12
beta_I = 0.0062
antiwindup = true

[disturbance]
w = 0.5

[simulation]
horizon = 500.0
step = 0.01
q_sat = 8.0
z1_0 = 0.0
z2_0 = 0.0
v_0 = 0.0
sample_dt = 0.1

[sweep]
ki = 1, 10
controllers = proposed, standard-I

[analysis]
ki = 1.0
h_variant = uniform-alpha
grid_points = 2001
battery = 16
)";
}

int run_simulate(const RunConfig& rc, std::ostream& log) {
    Config cfg;
    TankParams base_params;
    TankPlant plant = TankPlant::NonlinearTwoTank;
    std::vector<double> ki_values;
    std::vector<TankControllerKind> controllers;
    Scenario base;
    try {
        cfg = load_config(rc);
        base_params = params_from(cfg);
        plant = plant_from(cfg);

        base.params = base_params;
        base.plant = plant;
        base.antiwindup = cfg.get_bool("controller", "antiwindup", true);
        base.z0 = Vector::Zero(2);
        base.z0 << cfg.get_double("simulation", "z1_0", 0.0),
            cfg.get_double("simulation", "z2_0", 0.0);
        base.v0 = cfg.get_double("simulation", "v_0", 0.0);
        base.solver = SolverSettings::rk4(cfg.get_double("simulation", "step", 0.01));
        base.sample_dt = cfg.get_double("simulation", "sample_dt", 0.1);

        if (!rc.ki_override.empty()) {
            ki_values = rc.ki_override;
        } else if (cfg.has("sweep", "ki")) {
            ki_values = cfg.get_list("sweep", "ki");
        } else {
            ki_values = {base_params.ki};
        }
        const std::string ctrl_list = cfg.get_string("sweep", "controllers", "proposed");
        std::istringstream in(ctrl_list);
        std::string item;
        while (std::getline(in, item, ',')) {
            const auto a = item.find_first_not_of(" \t");
            const auto b = item.find_last_not_of(" \t");
            if (a != std::string::npos) {
                controllers.push_back(
                    controller_kind(item.substr(a, b - a + 1), "sweep.controllers"));
            }
        }
        if (controllers.empty()) {
            controllers.push_back(controller_kind(
                cfg.get_string("controller", "type", "proposed"), "controller.type"));
        }
    } catch (const ConfigError& e) {
        log << "error: " << e.what() << "\n";
        return kExitConfigError;
    } catch (const std::invalid_argument& e) {
        log << "error: " << e.what() << "\n";
        return kExitConfigError;
    }

    try {
        std::vector<Scenario> members;
        for (const auto kind : controllers) {
            for (double ki : ki_values) {
                Scenario s = base;
                s.controller = kind;
                s.params.ki = ki;
                s.label = to_string(kind) + "_ki" + ki_tag(ki);
                members.push_back(std::move(s));
            }
        }
        if (rc.no_antiwindup_run) {
            Scenario s = base;
            s.controller = TankControllerKind::Proposed;
            s.params.ki = *std::max_element(ki_values.begin(), ki_values.end());
            s.antiwindup = false;
            s.label = "proposed_ki" + ki_tag(s.params.ki) + "_noaw";
            members.push_back(std::move(s));
        }

        const auto trajectories = run_sweep(members);

        fs::create_directories(rc.out_dir);
        std::ofstream summary(fs::path(rc.out_dir) / "summary.txt", std::ios::binary);
        summary << "run, settling_time_2pct [s], max_overshoot [cm], oscillation_count, "
                   "final_error [cm], clamp_warnings\n";
        std::vector<SvgSeries> level_series, voltage_series;
        const char* palette[] = {"#1f6fb2", "#c4392e", "#2c8c4b", "#8551a8", "#b07c1f", "#46a0a0"};
        for (std::size_t i = 0; i < trajectories.size(); ++i) {
            const auto& traj = trajectories[i];
            const auto path = fs::path(rc.out_dir) / (traj.label + ".csv");
            write_tank_csv(path.string(), traj);
            log << "wrote " << path.string() << "\n";

            const auto m = metrics(traj);
            summary << traj.label << ", " << fmt_g(m.settling_time_2pct) << ", "
                    << fmt_g(m.max_overshoot) << ", " << m.oscillation_count << ", "
                    << fmt_g(m.final_error) << ", " << traj.clamp_warnings << "\n";

            SvgSeries level{traj.label, {}, {}, palette[i % 6], false};
            SvgSeries voltage{traj.label, {}, {}, palette[i % 6], false};
            for (const auto& smp : traj.samples) {
                level.x.push_back(smp.t);
                level.y.push_back(smp.z2);
                voltage.x.push_back(smp.t);
                voltage.y.push_back(smp.q_star);
            }
            level_series.push_back(std::move(level));
            voltage_series.push_back(std::move(voltage));
        }
        if (!trajectories.empty()) {
            SvgSeries ref{"reference", {}, {}, "#666666", true};
            for (const auto& smp : trajectories.front().samples) {
                ref.x.push_back(smp.t);
                ref.y.push_back(smp.zref2);
            }
            level_series.insert(level_series.begin(), std::move(ref));
        }
        summary.close();
        log << "wrote " << (fs::path(rc.out_dir) / "summary.txt").string() << "\n";

        // Plotting never affects the exit status.
        try {
            const auto fig = fs::path(rc.out_dir) / "figure.svg";
            write_two_panel_svg(fig.string(), "lower tank level z2 [cm]", level_series,
                                "pump voltage q* [V]", voltage_series);
            log << "wrote " << fig.string() << "\n";
        } catch (const std::exception& e) {
            log << "plot skipped: " << e.what() << "\n";
        }
        return kExitOk;
    } catch (const std::exception& e) {
        log << "error: " << e.what() << "\n";
        return kExitViolated;
    }
}

int run_analyze(const RunConfig& rc, std::ostream& log) {
    Config cfg;
    TankParams p;
    Matrix Ki;
    long grid_points = 2001;
    long battery_count = 16;
    long ues_starts = 9;
    try {
        cfg = load_config(rc);
        p = params_from(cfg);
        if (!cfg.has("analysis", "ki")) {
            throw ConfigError("config: missing required field 'analysis.ki'");
        }
        Ki = Matrix::Constant(1, 1, cfg.get_double("analysis", "ki"));
        grid_points = cfg.get_int("analysis", "grid_points", grid_points);
        battery_count = cfg.get_int("analysis", "battery", battery_count);
        ues_starts = cfg.get_int("analysis", "ues_starts", ues_starts);
        if (grid_points < 2) {
            throw ConfigError("config: field 'analysis.grid_points' must be >= 2");
        }
    } catch (const ConfigError& e) {
        log << "error: " << e.what() << "\n";
        return kExitConfigError;
    } catch (const std::invalid_argument& e) {
        log << "error: " << e.what() << "\n";
        return kExitConfigError;
    }

    try {
        const LtvSystem sys = linearized_system(p);
        const MatrixFunction H = analysis_H(cfg, p, sys);

        std::vector<double> grid;
        grid.reserve(static_cast<std::size_t>(grid_points));
        for (long i = 0; i < grid_points; ++i) {
            grid.push_back(p.horizon * static_cast<double>(i) /
                           static_cast<double>(grid_points - 1));
        }
        std::vector<double> window_taus;
        for (double f : {0.01, 0.02, 0.05, 0.1, 0.2, 0.5}) {
            window_taus.push_back(f * p.horizon);
        }

        const auto rep = check_theorem1(H, sys.B(), Ki, grid, window_taus);
        const auto rep_cor = check_corollary1(sys.B(), Ki, grid);

        std::ostringstream text;
        text << rep.to_text();
        text << "corollary (H = B^T): " << to_string(rep_cor.verdict)
             << ", alpha = " << rep_cor.alpha << ", beta = " << rep_cor.beta << "\n";

        std::vector<std::pair<std::string, std::vector<std::pair<std::string, std::string>>>>
            doc;
        doc.emplace_back("stability", rep.to_kv());
        doc.emplace_back("corollary", rep_cor.to_kv());

        bool battery_exceeded = false;
        if (rep.verdict == Verdict::Satisfied) {
            // Nominal loop here is the open loop (K = 0), UES by the plant's
            // triangular structure; estimate (M, mu) over one reference period.
            const double period = 1.0 / p.c6;
            std::vector<double> t0_grid;
            for (long i = 0; i < ues_starts; ++i) {
                t0_grid.push_back(period * static_cast<double>(i) /
                                  static_cast<double>(std::max<long>(1, ues_starts)));
            }
            const auto ues = estimate_ues_constants(sys.A(), t0_grid, period, 1e-10);
            const auto bounds = collect_bibs_bounds(sys, H, Ki, rep, ues, grid);
            const double gamma = bibs_gain(bounds);
            text << "ues estimate: M = " << ues.M << ", mu = " << ues.mu << "\n";
            text << "bibs gain: gamma = " << gamma << "\n";
            doc.emplace_back("bibs", bounds.to_kv());
            doc.back().second.emplace_back("gamma", format_full(gamma));

            if (battery_count > 0) {
                IntegralController ctrl(MatrixFunction::constant(Matrix::Zero(1, 2)), H, Ki,
                                        false);
                const auto battery =
                    disturbance_battery(sys, ctrl, 0.0, p.horizon,
                                        SolverSettings::rk4(0.01), 0.1,
                                        static_cast<int>(battery_count), rc.seed);
                double worst = 0.0;
                for (const auto& member : battery) {
                    worst = std::max(worst, member.sup_x / member.sup_w);
                }
                battery_exceeded = worst > gamma;
                text << "battery: " << battery_count
                     << " disturbances, max sup||x||/sup||w|| = " << worst
                     << (battery_exceeded ? " EXCEEDS gamma\n" : " <= gamma\n");
                doc.back().second.emplace_back("battery_count", std::to_string(battery_count));
                doc.back().second.emplace_back("battery_max_ratio", format_full(worst));
            }
        }
        log << text.str();

        if (!rc.out_dir.empty()) {
            fs::create_directories(rc.out_dir);
            write_kv_document((fs::path(rc.out_dir) / "analysis.kv").string(), doc);
            std::ofstream txt(fs::path(rc.out_dir) / "analysis.txt", std::ios::binary);
            txt << text.str();
            log << "wrote " << (fs::path(rc.out_dir) / "analysis.kv").string() << "\n";
        }

        if (battery_exceeded) {
            return kExitViolated;
        }
        switch (rep.verdict) {
            case Verdict::Satisfied: return kExitOk;
            case Verdict::Violated: return kExitViolated;
            case Verdict::Inconclusive:
                log << "inconclusive: the sampled grid certifies neither condition\n";
                return kExitInconclusive;
        }
        return kExitInconclusive;
    } catch (const std::exception& e) {
        log << "error: " << e.what() << "\n";
        return kExitViolated;
    }
}

int run_ti(const RunConfig& rc, std::ostream& log) {
    Config cfg;
    Matrix A, B, C, K, Ki;
    try {
        cfg = load_config(rc);
        if (!cfg.has("ti", "A") || !cfg.has("ti", "B") || !cfg.has("ti", "C") ||
            !cfg.has("ti", "K") || !cfg.has("ti", "Ki")) {
            throw ConfigError("config: [ti] requires fields A, B, C, K, Ki");
        }
        A = cfg.get_matrix("ti", "A");
        B = cfg.get_matrix("ti", "B");
        C = cfg.get_matrix("ti", "C");
        K = cfg.get_matrix("ti", "K");
        Ki = cfg.get_matrix("ti", "Ki");
    } catch (const ConfigError& e) {
        log << "error: " << e.what() << "\n";
        return kExitConfigError;
    }

    try {
        const TiPlant plant(A, B, C, K);
        const Matrix M = compute_M_ti(plant);
        const Matrix H = compute_H_ti(plant, M);
        const Matrix HB = H * plant.B();

        const auto actual = closed_loop_eigs(plant, Ki, H);
        auto expected = sorted_spectrum(plant.Acl());
        const auto extra = sorted_spectrum(Matrix(-Ki));
        expected.insert(expected.end(), extra.begin(), extra.end());
        std::sort(expected.begin(), expected.end(), [](const auto& a, const auto& b) {
            if (a.real() != b.real()) {
                return a.real() < b.real();
            }
            return a.imag() < b.imag();
        });
        const double dist = multiset_distance(actual.eigenvalues, expected);

        log << "M =\n" << M << "\n";
        log << "H =\n" << H << "\n";
        log << "H B =\n" << HB << "\n";
        log << "closed-loop eigenvalues: " << complex_list(actual.eigenvalues) << "\n";
        log << "expected union:          " << complex_list(expected) << "\n";
        log << "multiset distance: " << dist << "\n";
        if (!actual.hb_identity_ok) {
            log << "warning: H B deviates from identity; the eigenvalue split does not apply\n";
        }

        if (!rc.out_dir.empty()) {
            fs::create_directories(rc.out_dir);
            std::vector<std::pair<std::string, std::string>> kv;
            kv.emplace_back("eigenvalues", complex_list(actual.eigenvalues));
            kv.emplace_back("expected", complex_list(expected));
            kv.emplace_back("multiset_distance", format_full(dist));
            kv.emplace_back("hb_identity_ok", actual.hb_identity_ok ? "true" : "false");
            write_kv_document((fs::path(rc.out_dir) / "ti_report.kv").string(), {{"ti", kv}});
        }

        if (!actual.hb_identity_ok || dist > 1e-8) {
            log << "eigenvalue union check failed\n";
            return kExitViolated;
        }
        log << "eigenvalue union verified\n";
        return kExitOk;
    } catch (const std::exception& e) {
        log << "error: " << e.what() << "\n";
        return kExitViolated;
    }
}

}  // namespace ltvi
