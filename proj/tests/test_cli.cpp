// End-to-end checks of the command-line surface: exit codes, artifacts,
// and the checkpoint pipeline between subcommands.
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include <json.hpp>

#include "torusflow/checkpoint.hpp"
#include "torusflow/operators.hpp"

using namespace torusflow;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

fs::path work_dir() {
    const auto p = fs::temp_directory_path() / "torusflow_cli_test";
    fs::create_directories(p);
    return p;
}

int cli(const std::string& args) {
    const std::string cmd = std::string(TORUSFLOW_CLI) + " " + args + " > " +
                            (work_dir() / "stdout.txt").string() + " 2> " +
                            (work_dir() / "stderr.txt").string();
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string stderr_text() {
    std::ifstream in(work_dir() / "stderr.txt");
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write(const fs::path& p, const std::string& text) {
    std::ofstream out(p);
    out << text;
}

}  // namespace

TEST_CASE("cli run: Taylor-Green certifies with exit 0 and full artifacts") {
    const fs::path dir = work_dir();
    write(dir / "tg.json", R"({
      "viscosity": 1.0, "cutoff": 4, "horizon": 0.1, "dt": 0.001,
      "scheme": "ifrk4",
      "ic": {"family": "taylor_green"},
      "output": {"checkpoint_cadence": 50}
    })");
    const fs::path out = dir / "tg_out";
    fs::remove_all(out);
    REQUIRE(cli("run --config " + (dir / "tg.json").string() + " --out " +
                out.string()) == 0);
    CHECK(fs::exists(out / "resolved_config.json"));
    CHECK(fs::exists(out / "ledger.csv"));
    CHECK(fs::exists(out / "certificates.json"));
    CHECK(fs::exists(out / "checkpoint_final.json"));
    CHECK(fs::exists(out / "checkpoint_step_000000.json"));
    CHECK(fs::exists(out / "checkpoint_step_000050.json"));

    const json cert = json::parse(std::ifstream(out / "certificates.json"));
    CHECK(cert["pass"] == true);
    CHECK(cert["energy_identity"]["pass"] == true);
    CHECK(cert["estimate_I"]["pass"] == true);
    CHECK(cert.contains("config_hash"));
    CHECK(cert["config"]["cutoff"] == 4);

    // Config echo: ledger and checkpoints carry the resolved config too.
    std::ifstream ledger(out / "ledger.csv");
    std::string l1, l2, l3;
    std::getline(ledger, l1);
    std::getline(ledger, l2);
    std::getline(ledger, l3);
    CHECK(l3.rfind("# config ", 0) == 0);
    CHECK(json::parse(l3.substr(9))["cutoff"] == 4);
    const json cp = json::parse(std::ifstream(out / "checkpoint_final.json"));
    CHECK(cp["config"]["cutoff"] == 4);
    CHECK(cp["config_hash"] == cert["config_hash"]);
}

TEST_CASE("cli run: viscous CFL violation exits 2 naming the guard") {
    const fs::path dir = work_dir();
    write(dir / "cfl.json", R"({
      "viscosity": 1.0, "cutoff": 8, "horizon": 1.0, "dt": 0.05,
      "scheme": "rk4", "ic": {"family": "taylor_green"}
    })");
    CHECK(cli("run --config " + (dir / "cfl.json").string() + " --out " +
              (dir / "cfl_out").string()) == 2);
    CHECK(stderr_text().find("viscous CFL guard") != std::string::npos);
}

TEST_CASE("cli run: unknown config keys exit 2") {
    const fs::path dir = work_dir();
    write(dir / "typo.json", R"({"viscocity": 1.0})");
    CHECK(cli("run --config " + (dir / "typo.json").string() + " --out " +
              (dir / "typo_out").string()) == 2);
}

TEST_CASE("cli run: instability exits 3 and still writes the partial ledger") {
    const fs::path dir = work_dir();
    write(dir / "blowup.json", R"({
      "viscosity": 1.0, "cutoff": 2, "horizon": 200.0, "dt": 0.5,
      "scheme": "rk4",
      "tolerances": {"cfl_viscous": 100.0, "cfl_advective": 1e12,
                      "solenoidal_rel": 1e12},
      "ic": {"family": "random_band", "seed": 2, "k_max": 2, "amplitude": 0.01}
    })");
    const fs::path out = dir / "blowup_out";
    fs::remove_all(out);
    CHECK(cli("run --config " + (dir / "blowup.json").string() + " --out " +
              out.string()) == 3);
    CHECK(fs::exists(out / "ledger.csv"));
    std::ifstream ledger(out / "ledger.csv");
    std::string line;
    int rows = 0;
    while (std::getline(ledger, line))
        if (!line.empty() && line[0] != '#' && line[0] != 's') ++rows;
    CHECK(rows >= 1);
}

TEST_CASE("cli pressure + norms consume the run's checkpoint") {
    const fs::path dir = work_dir();
    write(dir / "run.json", R"({
      "viscosity": 0.2, "cutoff": 3, "horizon": 0.05, "dt": 0.001,
      "ic": {"family": "abc_flow", "amplitude": 0.5}
    })");
    const fs::path out = dir / "press_out";
    fs::remove_all(out);
    REQUIRE(cli("run --config " + (dir / "run.json").string() + " --out " +
                out.string()) == 0);
    REQUIRE(cli("pressure --config " + (dir / "run.json").string() +
                " --checkpoint " + (out / "checkpoint_final.json").string() +
                " --out " + out.string()) == 0);
    const json rep = json::parse(std::ifstream(out / "pressure_report.json"));
    CHECK(rep["pass"] == true);
    CHECK(rep["poisson_rel"].get<double>() <= 1e-12);
    // The pressure snapshot is a scalar checkpoint with the prescribed mean.
    const Checkpoint pcp = read_checkpoint((out / "pressure_checkpoint.json").string());
    CHECK(pcp.field.components() == 1);
    const double l = pcp.field.box_l();
    CHECK(pcp.field.coeff({0, 0, 0}, 0).real() ==
          doctest::Approx(rep["q0"].get<double>() / (l * l * l)));

    REQUIRE(cli("norms --checkpoint " + (out / "checkpoint_final.json").string() +
                " --out " + (out / "norms.json").string()) == 0);
    const json norms = json::parse(std::ifstream(out / "norms.json"));
    const Checkpoint vcp = read_checkpoint((out / "checkpoint_final.json").string());
    CHECK(norms["l2"].get<double>() == doctest::Approx(l2_norm(vcp.field)).epsilon(1e-14));
    CHECK(norms["relative_divergence"].get<double>() <= 1e-11);
}

TEST_CASE("cli uniqueness: default perturbation certifies on a short run") {
    const fs::path dir = work_dir();
    write(dir / "uniq.json", R"({
      "viscosity": 0.25, "cutoff": 3, "horizon": 0.05, "dt": 0.001,
      "ic": {"family": "taylor_green"}
    })");
    const fs::path out = dir / "uniq_out";
    REQUIRE(cli("uniqueness --config " + (dir / "uniq.json").string() + " --out " +
                out.string()) == 0);
    const json rep = json::parse(std::ifstream(out / "gronwall_report.json"));
    CHECK(rep["gronwall"]["pass"] == true);
    CHECK(rep["gronwall"]["c_used"].get<double>() == doctest::Approx(2.0));  // 1/(2*0.25)
    CHECK(rep["gronwall"]["w0_sq"].get<double>() > 0.0);
}

TEST_CASE("cli run: --seed overrides the ic/forcing seeds and the hash follows") {
    const fs::path dir = work_dir();
    write(dir / "seeded.json", R"({
      "viscosity": 0.2, "cutoff": 2, "horizon": 0.02, "dt": 0.001,
      "ic": {"family": "random_band", "seed": 1, "k_max": 2, "amplitude": 0.4}
    })");
    const fs::path out_a = dir / "seed_a", out_b = dir / "seed_b";
    fs::remove_all(out_a);
    fs::remove_all(out_b);
    REQUIRE(cli("run --config " + (dir / "seeded.json").string() + " --out " +
                out_a.string()) == 0);
    REQUIRE(cli("run --config " + (dir / "seeded.json").string() +
                " --seed 999 --out " + out_b.string()) == 0);
    const json ca = json::parse(std::ifstream(out_a / "certificates.json"));
    const json cb = json::parse(std::ifstream(out_b / "certificates.json"));
    CHECK(ca["config"]["ic"]["seed"] == 1);
    CHECK(cb["config"]["ic"]["seed"] == 999);
    CHECK(ca["config_hash"] != cb["config_hash"]);
}

TEST_CASE("cli convergence: resolved data reports monotone (tiny) differences") {
    const fs::path dir = work_dir();
    write(dir / "conv.json", R"({
      "viscosity": 0.15, "cutoff": 2, "horizon": 0.02, "dt": 0.002,
      "ic": {"family": "random_band", "seed": 11, "k_min": 1, "k_max": 6,
              "slope": -3.0, "amplitude": 0.5}
    })");
    const fs::path out = dir / "conv_out";
    REQUIRE(cli("convergence --config " + (dir / "conv.json").string() +
                " --cutoffs 2,4,8 --out " + out.string()) == 0);
    const json rep = json::parse(std::ifstream(out / "convergence.json"));
    CHECK(rep["monotone"] == true);
    CHECK(rep["pairs"].size() == 2);
}
