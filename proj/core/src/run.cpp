#include "tp/run.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "tp/acceptance.hpp"
#include "tp/csv.hpp"
#include "tp/derive_doc.hpp"
#include "tp/snapshots.hpp"
#include "tp/validation.hpp"

namespace tp {

namespace {

std::string utc_now() {
    auto now = std::chrono::system_clock::now();
    std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    return buf;
}

std::string join_path(const std::string& dir, const std::string& name) {
    return (std::filesystem::path(dir) / name).string();
}

SpectralField build_ic(const ExperimentSpec& spec) {
    Grid1D g = spec.fast_grid();
    if (spec.ic_family == "roll") return roll_ic(g, spec.amplitude);
    if (spec.ic_family == "gaussian")
        return gaussian_roll_ic(g, spec.amplitude, spec.ic_center, spec.ic_width);
    if (spec.ic_family == "random") return random_band_ic(g, spec.amplitude, spec.seed);
    throw config_error("ic family must be roll | gaussian | random");
}

SHParams sh_params(const ExperimentSpec& spec) {
    SHParams p;
    p.eps = spec.eps;
    p.nu = spec.nu;
    p.grid = spec.fast_grid();
    p.validate();
    return p;
}

void cmd_simulate(const ExperimentSpec& spec, RunManifest& manifest) {
    SHParams params = sh_params(spec);
    const SectionSpec& sec = spec.sections;

    SHState s0;
    s0.u = build_ic(spec);
    s0.v = -sec.rho_in;

    double t_end = spec.t_end > 0.0 ? spec.t_end : (sec.rho_in + sec.rho_out) / spec.eps;
    std::vector<Observer> observers{
        {"mid", sec.rho_mid_value() * std::sqrt(spec.eps)},
        {"out", sec.rho_out},
    };
    IntegrateOptions opts;
    opts.h = spec.h_fast;
    opts.theta = spec.theta;
    opts.obs_interval = std::max(spec.h_fast, t_end / 2000.0);
    opts.snapshot_times = {0.0, 0.5 * t_end, t_end};

    Trajectory traj = integrate(s0, params, t_end, observers, opts);
    manifest.run_status.push_back({"simulate", traj.ok ? "ok" : "failed: " + traj.failure});

    std::string obs_path = join_path(spec.out_dir, "observables.csv");
    write_observables_csv(obs_path, traj.observables);
    manifest.emitted_files.push_back(obs_path);

    std::vector<SnapshotRecord> records;
    for (const auto& [t, u] : traj.snapshots)
        records.push_back({t, -sec.rho_in + spec.eps * t, u.modes()});
    std::string snap_path = join_path(spec.out_dir, "snapshots.bin");
    write_snapshots(snap_path, params.grid, records);
    manifest.emitted_files.push_back(snap_path);
    manifest.emitted_files.push_back(snap_path + ".manifest.json");

    std::string sec_path = join_path(spec.out_dir, "sections.csv");
    CsvWriter csv(sec_path, {"section", "t", "v", "hul_norm", "mode1_abs"});
    for (const auto& h : traj.hits)
        csv.row({h.name, CsvWriter::num(h.t), CsvWriter::num(h.v), CsvWriter::num(h.norm_theta),
                 CsvWriter::num(h.mode1_abs)});
    manifest.emitted_files.push_back(sec_path);
}

void write_passage_csv(const std::string& path, const PassageRecord& rec,
                       RunManifest& manifest) {
    CsvWriter csv(path, {"epsilon", "section", "t_global", "v", "r_chart", "norm_theta",
                         "mode1_abs", "chart_id"});
    for (const auto& s : rec.samples)
        csv.row({CsvWriter::num(rec.eps), s.section, CsvWriter::num(s.t_global),
                 CsvWriter::num(s.v), CsvWriter::num(s.r_chart), CsvWriter::num(s.norm_theta),
                 CsvWriter::num(s.mode1_abs), CsvWriter::num(static_cast<long long>(s.chart))});
    manifest.emitted_files.push_back(path);
}

void cmd_approx(const ExperimentSpec& spec, RunManifest& manifest) {
    const SectionSpec& sec = spec.sections;
    double a11 = spec.amplitude / (2.0 * std::sqrt(sec.rho_in));
    ModulationSet ms_in = roll_modset(spec.slow_grid(), spec.order, cdouble(a11, 0.0),
                                      spec.eps / (sec.rho_in * sec.rho_in), spec.nu);
    PassageOptions popts;
    popts.order = spec.order;
    popts.theta = spec.theta;
    popts.h_slow = spec.h_slow;
    PassageRecord rec = full_passage(ms_in, spec.eps, spec.nu, sec, spec.fast_grid(), popts);
    manifest.run_status.push_back({"approx", rec.ok ? "ok" : "failed: " + rec.failure});
    write_passage_csv(join_path(spec.out_dir, "passage.csv"), rec, manifest);
}

void cmd_compare(const ExperimentSpec& spec, RunManifest& manifest) {
    DynamicErrorOptions opts;
    opts.order = spec.order;
    opts.theta = spec.theta;
    opts.sections = spec.sections;
    opts.a11 = spec.amplitude / (2.0 * std::sqrt(spec.sections.rho_in));
    if (spec.nu.count(1)) opts.nu1 = spec.nu.at(1);
    opts.fast_grid = spec.fast_grid();
    opts.slow_grid = spec.slow_grid();
    opts.h_fast = spec.h_fast;
    opts.h_slow = spec.h_slow;
    DynamicErrorRun run = dynamic_error_single(spec.eps, opts);
    manifest.run_status.push_back({"compare", "ok"});

    std::string path = join_path(spec.out_dir, "compare.csv");
    CsvWriter csv(path, {"epsilon", "t_mid", "err_mid", "u_norm", "psi_norm"});
    csv.row({CsvWriter::num(run.eps), CsvWriter::num(run.t_mid), CsvWriter::num(run.err_mid),
             CsvWriter::num(run.u_norm), CsvWriter::num(run.psi_norm)});
    manifest.emitted_files.push_back(path);
}

void write_fit_csv(const std::string& path, const std::string& claim, const ScalingFit& fit,
                   RunManifest& manifest) {
    CsvWriter csv(path, {"claim", "slope", "intercept", "fit_residual"});
    csv.row({claim, CsvWriter::num(fit.slope), CsvWriter::num(fit.intercept),
             CsvWriter::num(fit.residual)});
    manifest.emitted_files.push_back(path);
}

void cmd_sweep(const ExperimentSpec& spec, RunManifest& manifest) {
    const std::string& name = spec.experiment;
    if (name == "dynamic_error") {
        DynamicErrorOptions opts;
        opts.eps_list = spec.eps_list;
        opts.order = spec.order;
        opts.theta = spec.theta;
        opts.sections = spec.sections;
        if (spec.nu.count(1)) opts.nu1 = spec.nu.at(1);
        opts.fast_grid = spec.fast_grid();
        opts.slow_grid = spec.slow_grid();
        opts.h_fast = spec.h_fast;
        opts.h_slow = spec.h_slow;
        opts.workers = spec.workers;
        DynamicErrorResult r = dynamic_error_experiment(opts);
        std::string path = join_path(spec.out_dir, "dynamic_error.csv");
        CsvWriter csv(path, {"claim", "epsilon", "err_mid", "u_norm", "psi_norm"});
        for (const auto& run : r.runs)
            csv.row({"dynamic-validity-order", CsvWriter::num(run.eps),
                     CsvWriter::num(run.err_mid), CsvWriter::num(run.u_norm),
                     CsvWriter::num(run.psi_norm)});
        manifest.emitted_files.push_back(path);
        write_fit_csv(join_path(spec.out_dir, "dynamic_error_fit.csv"), "dynamic-validity-order",
                      r.fit, manifest);
        manifest.run_status.push_back({"sweep:dynamic_error", "ok"});
    } else if (name == "static_error") {
        StaticErrorOptions opts;
        opts.delta_list = spec.delta_list;
        opts.order = spec.order;
        opts.theta = spec.theta;
        opts.h_fast = spec.h_fast;
        opts.h_slow = spec.h_slow;
        opts.workers = spec.workers;
        StaticErrorResult r = static_error_experiment(opts);
        std::string path = join_path(spec.out_dir, "static_error.csv");
        CsvWriter csv(path, {"claim", "delta", "err_gl", "err_n"});
        for (const auto& run : r.runs)
            csv.row({"static-validity-order", CsvWriter::num(run.delta),
                     CsvWriter::num(run.err_gl), CsvWriter::num(run.err_n)});
        manifest.emitted_files.push_back(path);
        write_fit_csv(join_path(spec.out_dir, "static_error_fit_gl.csv"), "static-validity-gl",
                      r.fit_gl, manifest);
        write_fit_csv(join_path(spec.out_dir, "static_error_fit_n.csv"), "static-validity-n",
                      r.fit_n, manifest);
        manifest.run_status.push_back({"sweep:static_error", "ok"});
    } else if (name == "mid_amplitude" || name == "mid_amplitude_mu0") {
        MidAmplitudeOptions opts;
        opts.eps_list = spec.eps_list;
        opts.mu_zero = (name == "mid_amplitude_mu0");
        if (spec.nu.count(1)) opts.nu1 = spec.nu.at(1);
        opts.order = spec.order;
        opts.theta = spec.theta;
        opts.sections = spec.sections;
        opts.fast_grid = spec.fast_grid();
        opts.slow_grid = spec.slow_grid();
        opts.h_fast = spec.h_fast;
        opts.workers = spec.workers;
        MidAmplitudeResult r = mid_amplitude_check(opts);
        std::string path = join_path(spec.out_dir, name + ".csv");
        CsvWriter csv(path, {"claim", "epsilon", "mode1_abs", "ratio", "log_amp", "prediction"});
        for (const auto& row : r.rows)
            csv.row({"mid-roll-amplitude", CsvWriter::num(row.eps), CsvWriter::num(row.mode1_abs),
                     CsvWriter::num(row.ratio), CsvWriter::num(row.log_amp),
                     CsvWriter::num(r.prediction)});
        manifest.emitted_files.push_back(path);
        manifest.run_status.push_back({"sweep:" + name, "ok"});
    } else if (name == "delay") {
        DelayOptions opts;
        opts.eps_list = spec.eps_list;
        opts.rho_in = spec.sections.rho_in;
        opts.amplitude = spec.amplitude;
        opts.threshold = spec.threshold;
        opts.mode = spec.delay_mode;
        if (spec.nu.count(1)) opts.nu1 = spec.nu.at(1);
        opts.theta = spec.theta;
        opts.grid = spec.fast_grid();
        opts.h = spec.h_fast;
        opts.workers = spec.workers;
        auto records = delay_experiment(opts);
        std::string path = join_path(spec.out_dir, "delay.csv");
        CsvWriter csv(path, {"claim", "epsilon", "rho_in", "threshold", "censored", "v_exit",
                             "kappa_fit"});
        for (const auto& rec : records)
            csv.row({"delayed-loss-lower-bound", CsvWriter::num(rec.eps),
                     CsvWriter::num(rec.rho_in), CsvWriter::num(rec.threshold),
                     rec.censored ? "1" : "0", CsvWriter::num(rec.v_exit),
                     CsvWriter::num(rec.kappa_fit)});
        manifest.emitted_files.push_back(path);
        manifest.run_status.push_back({"sweep:delay", "ok"});
    } else if (name == "residual_order") {
        ResidualOrderOptions opts;
        opts.r_list = spec.r_list;
        opts.order = spec.order;
        opts.theta = spec.theta;
        opts.workers = spec.workers;
        ResidualOrderResult r = residual_order_experiment(opts);
        std::string path = join_path(spec.out_dir, "residual_order.csv");
        CsvWriter csv(path, {"claim", "r", "residual_norm"});
        for (size_t i = 0; i < r.r.size(); ++i)
            csv.row({"residual-order", CsvWriter::num(r.r[i]), CsvWriter::num(r.res[i])});
        manifest.emitted_files.push_back(path);
        write_fit_csv(join_path(spec.out_dir, "residual_order_fit.csv"), "residual-order", r.fit,
                      manifest);
        manifest.run_status.push_back({"sweep:residual_order", "ok"});
    } else {
        throw config_error("unknown experiment '" + name + "'");
    }
}

void cmd_derive(const ExperimentSpec& spec, RunManifest& manifest) {
    std::string doc = derive_document(spec.order);
    std::string path = join_path(spec.out_dir, "hierarchy_order" + std::to_string(spec.order) +
                                                   ".txt");
    std::ofstream out(path, std::ios::binary);
    out << doc;
    manifest.emitted_files.push_back(path);
    manifest.run_status.push_back({"derive", "ok"});
}

} // namespace

CommandResult run_command(const ExperimentSpec& spec) {
    CommandResult result;
    RunManifest& manifest = result.manifest;
    manifest.spec_hash = spec.spec_hash;
    manifest.code_version = kCodeVersion;
    manifest.command = spec.command;
    manifest.started_utc = utc_now();

    std::filesystem::create_directories(spec.out_dir);
    for (const auto& w : spec.warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());

    try {
        if (spec.command == "simulate") cmd_simulate(spec, manifest);
        else if (spec.command == "approx") cmd_approx(spec, manifest);
        else if (spec.command == "compare") cmd_compare(spec, manifest);
        else if (spec.command == "sweep") cmd_sweep(spec, manifest);
        else if (spec.command == "derive") cmd_derive(spec, manifest);
        else if (spec.command == "verify") {
            AcceptanceOptions aopts;
            aopts.workers = spec.workers;
            auto results = run_acceptance(aopts, true);
            for (const auto& r : results)
                manifest.run_status.push_back(
                    {"criterion " + std::to_string(r.id), r.pass ? "PASS" : "FAIL"});
            result.exit_code = all_passed(results) ? 0 : 1;
        } else {
            throw config_error("unknown command '" + spec.command + "'");
        }
    } catch (const std::exception& e) {
        manifest.run_status.push_back({spec.command, std::string("error: ") + e.what()});
        result.exit_code = 2;
        std::fprintf(stderr, "error: %s\n", e.what());
    }

    manifest.finished_utc = utc_now();
    std::string mpath = join_path(spec.out_dir, "manifest.json");
    manifest.write(mpath);
    return result;
}

} // namespace tp
