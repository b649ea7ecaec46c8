// torusflow command-line driver: runs, refinement studies, twin-run
// uniqueness checks, pressure recovery, data-compatibility checks, and
// norm inspection of checkpoints. Every artifact embeds the resolved
// config and its content hash; identical configs replay byte-identically.
//
// Exit codes: 0 ok / certificates pass, 1 certificate failure,
//             2 config error, 3 non-finite state or guard violation.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "torusflow/checkpoint.hpp"
#include "torusflow/monitors.hpp"
#include "torusflow/pressure.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace torusflow;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCertificate = 1;
constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

void write_text(const fs::path& path, const std::string& text) {
    fs::create_directories(path.parent_path().empty() ? "." : path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
}

json config_echo(const RunConfig& cfg) {
    return {{"config", json::parse(resolved_json(cfg))}, {"config_hash", config_hash(cfg)}};
}

void apply_seed_override(RunConfig& cfg, const std::optional<std::uint64_t>& seed) {
    if (!seed) return;
    cfg.ic.seed = *seed;
    cfg.forcing.seed = *seed;
}

json energy_identity_json(const EnergyIdentityReport& r, Real tol) {
    return {{"max_residual", r.max_residual},
            {"max_energy", r.max_energy},
            {"normalized", r.normalized},
            {"tolerance_rel", tol},
            {"pass", r.pass(tol)}};
}

json estimate_I_json(const EstimateICertificate& c) {
    return {{"c5_sq", c.c5_sq},
            {"margin_gronwall", c.margin_gronwall},
            {"margin_integrated", c.margin_integrated},
            {"margin_const_modes", c.margin_const_modes},
            {"sup_u_sq_bound", c.sup_y_bound},
            {"dissipation_bound", c.dissipation_bound},
            {"quad_allowance", c.quad_allowance},
            {"pass", c.pass},
            {"derivation", c.derivation}};
}

json gronwall_json(const GronwallReport& r) {
    return {{"w0_sq", r.w0_sq},
            {"c_used", r.c_used},
            {"c_measured", r.c_measured},
            {"min_margin", r.min_margin},
            {"pass", r.pass},
            {"measured_within_derived", r.measured_within_derived},
            {"times", r.times},
            {"w_sq", r.w_sq},
            {"bound", r.bound},
            {"derivation", r.derivation}};
}

int cmd_run(const std::string& config_path, const std::string& out_dir,
            const std::optional<std::uint64_t>& seed) {
    RunConfig cfg = load_config(config_path);
    apply_seed_override(cfg, seed);
    cfg.validate();
    const std::string hash = config_hash(cfg);
    const std::string compact = json::parse(resolved_json(cfg)).dump();
    const fs::path out(out_dir);
    fs::create_directories(out);
    write_text(out / "resolved_config.json", resolved_json(cfg) + "\n");

    std::vector<StepMonitor> monitors;
    if (cfg.output.checkpoint_cadence > 0) {
        monitors.push_back([&](const TrajectoryState& s) {
            if (s.step % cfg.output.checkpoint_cadence != 0) return;
            char name[48];
            std::snprintf(name, sizeof(name), "checkpoint_step_%06ld.json", s.step);
            write_checkpoint((out / name).string(), {s.u, s.t, s.step, hash, compact});
        });
    }

    const RunResult res = run(cfg, monitors);
    write_text(out / "ledger.csv", res.ledger.to_csv(hash, compact));
    write_checkpoint((out / "checkpoint_final.json").string(),
                     {res.final_state.u, res.final_state.t, res.final_state.step, hash,
                      compact});

    if (res.status != RunResult::Status::ok) {
        std::cerr << "run aborted: " << res.diagnostic << "\n";
        return kExitRuntime;
    }

    const EnergyIdentityReport energy = check_energy_identity(res.ledger, cfg.viscosity);
    const EstimateICertificate est1 =
        check_estimate_I(res.ledger, cfg.viscosity, cfg.box_l);
    const EstimateIIReport est2 = check_estimate_II(res.ledger);
    const RegularityReport reg =
        regularity_monitor(res.ledger, cfg.viscosity, shell_energy(res.final_state.u),
                           cfg.tolerances.regularity_margin_rel);

    Real max_div = 0.0, max_corr = 0.0;
    for (const LedgerRow& r : res.ledger.rows) {
        max_div = std::max(max_div, r.div_residual);
        max_corr = std::max(max_corr, r.leray_correction);
    }
    const bool guards_ok = max_div <= cfg.tolerances.solenoidal_rel &&
                           max_corr <= cfg.tolerances.solenoidal_rel;

    json cert = config_echo(cfg);
    cert["energy_identity"] = energy_identity_json(energy, cfg.tolerances.energy_identity_rel);
    cert["estimate_I"] = estimate_I_json(est1);
    cert["estimate_II"] = {{"integral_dual_sq", est2.integral_dual_sq},
                           {"finite", est2.finite}};
    cert["regularity"] = {{"sup_uprime", reg.sup_uprime},
                          {"int_uprime_h1_sq", reg.int_uprime_h1_sq},
                          {"sup_h2", reg.sup_h2},
                          {"sup_h3", reg.sup_h3},
                          {"c3", reg.c3},
                          {"envelope_margin", reg.envelope_margin},
                          {"spectral_decay_rate", reg.decay_rate},
                          {"pass", reg.pass}};
    cert["guards"] = {{"max_div_residual", max_div},
                      {"max_leray_correction", max_corr},
                      {"pass", guards_ok}};
    cert["init"] = {{"dropped_energy", res.dropped_energy},
                    {"gradient_energy", res.gradient_energy}};
    cert["grids"] = {{"evaluation", default_grid(cfg.cutoff)},
                     {"dealiased", dealiased_grid(cfg.cutoff)},
                     {"pressure", 4 * cfg.cutoff + 2}};
    const bool all_pass = energy.pass(cfg.tolerances.energy_identity_rel) && est1.pass &&
                          est2.finite && reg.pass && guards_ok;
    cert["pass"] = all_pass;
    write_text(out / "certificates.json", cert.dump(2) + "\n");

    std::cout << (all_pass ? "certificates: pass" : "certificates: FAIL") << "\n";
    return all_pass ? kExitOk : kExitCertificate;
}

int cmd_convergence(const std::string& config_path, const std::string& out_dir,
                    std::vector<int> cutoffs, const std::optional<std::uint64_t>& seed) {
    RunConfig cfg = load_config(config_path);
    apply_seed_override(cfg, seed);
    if (cutoffs.empty()) cutoffs = {4, 8, 16};
    const ConvergenceTable table = convergence_study(cfg, cutoffs);

    json j = config_echo(cfg);
    j["cutoffs"] = cutoffs;
    json rows = json::array();
    for (const ConvergencePair& p : table.pairs)
        rows.push_back({{"k_coarse", p.k_coarse},
                        {"k_fine", p.k_fine},
                        {"sup_diff_l2", p.sup_diff},
                        {"final_diff_l2", p.final_diff}});
    j["pairs"] = rows;
    j["ratios"] = table.ratios;
    j["monotone"] = table.monotone;
    const fs::path out(out_dir);
    fs::create_directories(out);
    write_text(out / "convergence.json", j.dump(2) + "\n");
    std::cout << (table.monotone ? "convergence: monotone decrease"
                                 : "convergence: NOT monotone")
              << "\n";
    return table.monotone ? kExitOk : kExitCertificate;
}

int cmd_uniqueness(const std::string& config_path, const std::string& out_dir,
                   const std::string& perturbation_json,
                   const std::optional<Real>& c_override,
                   const std::optional<std::uint64_t>& seed) {
    RunConfig cfg = load_config(config_path);
    apply_seed_override(cfg, seed);

    FieldSpec pert;
    pert.family = "random_band";
    pert.amplitude = 1e-6;
    pert.seed = 12345;
    pert.k_min = std::max(cfg.cutoff, 1);
    pert.k_max = std::max(cfg.cutoff, 1);
    if (!perturbation_json.empty()) {
        // Reuse the config parser (and its unknown-key rejection) for the
        // perturbation block.
        pert = parse_config("{\"ic\": " + perturbation_json + "}").ic;
    }

    const GronwallReport rep = twin_run_gronwall(cfg, pert, c_override);
    json j = config_echo(cfg);
    j["perturbation_family"] = pert.family;
    j["gronwall"] = gronwall_json(rep);
    const fs::path out(out_dir);
    fs::create_directories(out);
    write_text(out / "gronwall_report.json", j.dump(2) + "\n");
    std::cout << (rep.pass ? "uniqueness bound: holds" : "uniqueness bound: VIOLATED")
              << "  (c_used = " << rep.c_used << ", c_measured = " << rep.c_measured
              << ")\n";
    return rep.pass ? kExitOk : kExitCertificate;
}

int cmd_pressure(const std::string& checkpoint_path, const std::string& config_path,
                 const std::string& out_dir) {
    RunConfig cfg = load_config(config_path);
    const Checkpoint cp = read_checkpoint(checkpoint_path);
    const SpectralField f =
        realize_field(cfg.forcing, cfg.cutoff, cfg.box_l);
    const PressureField pf = recover_pressure(cp.field, f, cfg.viscosity, cfg.q0);
    const PressureResiduals res = pressure_residuals(pf, cp.field, f, cfg.viscosity);

    const fs::path out(out_dir);
    fs::create_directories(out);
    write_checkpoint((out / "pressure_checkpoint.json").string(),
                     {pf.p, cp.time, cp.step, config_hash(cfg),
                      json::parse(resolved_json(cfg)).dump()});
    const bool pass = res.poisson_rel <= cfg.tolerances.pressure_poisson_rel &&
                      res.gradient_rel <= cfg.tolerances.pressure_gradient_rel;
    json j = config_echo(cfg);
    j["poisson_rel"] = res.poisson_rel;
    j["gradient_rel"] = res.gradient_rel;
    j["unresolved_rel"] = res.unresolved_rel;
    j["q0"] = pf.q0;
    j["pass"] = pass;
    write_text(out / "pressure_report.json", j.dump(2) + "\n");
    std::cout << (pass ? "pressure residuals: pass" : "pressure residuals: FAIL")
              << "\n";
    return pass ? kExitOk : kExitCertificate;
}

int cmd_check_compat(const std::string& config_path, const std::string& out_dir,
                     std::vector<Real> times) {
    RunConfig cfg = load_config(config_path);
    if (times.empty()) times = {0.0, cfg.horizon / 2, cfg.horizon};
    const SpectralField u0 = realize_field(cfg.ic, cfg.cutoff, cfg.box_l);
    const CompatibilityReport rep =
        check_compatibility(cfg.forcing, u0, times, cfg.tolerances.compat_jump_rel);

    json j = config_echo(cfg);
    j["times"] = times;
    json conds = json::array();
    for (const auto& c : rep.conditions)
        conds.push_back({{"condition", c.name}, {"max_jump", c.max_jump}});
    j["conditions"] = conds;
    j["max_jump"] = rep.max_jump;
    j["tolerance"] = rep.tolerance;
    j["pass"] = rep.pass;
    const fs::path out(out_dir);
    fs::create_directories(out);
    write_text(out / "compatibility_report.json", j.dump(2) + "\n");
    std::cout << (rep.pass ? "compatibility: all jumps vanish"
                           : "compatibility: NONZERO jump detected")
              << "  (max " << rep.max_jump << ")\n";
    return rep.pass ? kExitOk : kExitCertificate;
}

int cmd_norms(const std::string& checkpoint_path, const std::string& out_path) {
    const Checkpoint cp = read_checkpoint(checkpoint_path);
    const SpectralField& f = cp.field;
    json j;
    j["cutoff"] = f.cutoff();
    j["components"] = f.components();
    j["box_l"] = f.box_l();
    j["time"] = cp.time;
    j["l2"] = l2_norm(f);
    json sobolev;
    for (Real s : {-1.5, -1.0, 0.0, 1.0, 1.5, 2.0, 3.0})
        sobolev[format_double(s)] = sobolev_norm(f, s);
    j["sobolev"] = sobolev;
    json lp;
    for (Real p : {2.0, 3.0, 4.0, 6.0}) lp[format_double(p)] = lp_norm(f, p);
    lp["inf"] = sup_norm(f);
    j["lp"] = lp;
    if (f.is_vector()) j["relative_divergence"] = relative_divergence(f);
    const std::string text = j.dump(2) + "\n";
    if (out_path.empty())
        std::cout << text;
    else
        write_text(out_path, text);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Divergence-free Fourier-Galerkin Navier-Stokes solver on the periodic cube"};
    app.require_subcommand(1);

    std::string config_path, out_dir = "out", checkpoint_path, pert_json, norms_out;
    std::vector<int> cutoffs;
    std::vector<Real> times;
    std::optional<std::uint64_t> seed;
    std::optional<Real> c_override;

    auto add_common = [&](CLI::App* cmd, bool needs_config = true) {
        if (needs_config)
            cmd->add_option("--config", config_path, "config file (JSON)")->required();
        cmd->add_option("--out", out_dir, "output directory");
    };

    CLI::App* c_run = app.add_subcommand("run", "integrate and certify a trajectory");
    add_common(c_run);
    c_run->add_option("--seed", seed, "override ic/forcing seeds");

    CLI::App* c_conv = app.add_subcommand("convergence", "cutoff refinement study");
    add_common(c_conv);
    c_conv->add_option("--cutoffs", cutoffs, "cutoff list (default 4 8 16)")
        ->delimiter(',');
    c_conv->add_option("--seed", seed, "override ic/forcing seeds");

    CLI::App* c_uniq = app.add_subcommand("uniqueness", "twin-run separation bound");
    add_common(c_uniq);
    c_uniq->add_option("--perturbation", pert_json,
                       "perturbation field spec (inline JSON)");
    c_uniq->add_option("--gronwall-c", c_override, "override the derived constant");
    c_uniq->add_option("--seed", seed, "override ic/forcing seeds");

    CLI::App* c_press = app.add_subcommand("pressure", "recover pressure from a checkpoint");
    add_common(c_press);
    c_press->add_option("--checkpoint", checkpoint_path, "velocity checkpoint")->required();

    CLI::App* c_compat = app.add_subcommand("check-compat", "data compatibility conditions");
    add_common(c_compat);
    c_compat->add_option("--times", times, "sample times")->delimiter(',');

    CLI::App* c_norms = app.add_subcommand("norms", "norm table of a checkpoint field");
    c_norms->add_option("--checkpoint", checkpoint_path, "checkpoint file")->required();
    c_norms->add_option("--out", norms_out, "write JSON here instead of stdout");

    CLI11_PARSE(app, argc, argv);

    try {
        if (c_run->parsed()) return cmd_run(config_path, out_dir, seed);
        if (c_conv->parsed()) return cmd_convergence(config_path, out_dir, cutoffs, seed);
        if (c_uniq->parsed())
            return cmd_uniqueness(config_path, out_dir, pert_json, c_override, seed);
        if (c_press->parsed()) return cmd_pressure(checkpoint_path, config_path, out_dir);
        if (c_compat->parsed()) return cmd_check_compat(config_path, out_dir, times);
        if (c_norms->parsed()) return cmd_norms(checkpoint_path, norms_out);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
    return kExitConfig;
}
