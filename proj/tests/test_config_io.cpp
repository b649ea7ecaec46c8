#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>

#include "oracles.hpp"
#include "torusflow/checkpoint.hpp"
#include "torusflow/config.hpp"
#include "torusflow/timestepper.hpp"

using namespace torusflow;

namespace {
std::filesystem::path temp_dir() {
    auto p = std::filesystem::temp_directory_path() / "torusflow_test";
    std::filesystem::create_directories(p);
    return p;
}
}  // namespace

TEST_CASE("parse_config: defaults, q0 fallback, scheme names") {
    const RunConfig c = parse_config(R"({"cutoff": 3, "horizon": 0.5, "dt": 0.001})");
    CHECK(c.cutoff == 3);
    CHECK(c.box_l == doctest::Approx(2.0 * pi));
    CHECK(c.scheme == Scheme::ifrk4);
    CHECK(c.q0 == doctest::Approx(std::pow(2.0 * pi, 3)));  // unit mean pressure
    CHECK(c.ic.family == "zero");
    CHECK(c.tolerances.energy_identity_rel == 1e-8);

    const RunConfig r = parse_config(R"({"scheme": "rk4", "horizon": 0.01, "dt": 0.001})");
    CHECK(r.scheme == Scheme::rk4);
    CHECK_THROWS_AS(parse_config(R"({"scheme": "euler"})"), ConfigError);
}

TEST_CASE("parse_config: unknown keys are hard errors at every level") {
    CHECK_THROWS_WITH_AS(parse_config(R"({"cutof": 3})"),
                         doctest::Contains("unknown key 'cutof'"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_config(R"({"ic": {"family": "zero", "ampl": 1}})"),
                         doctest::Contains("unknown key 'ampl'"), ConfigError);
    CHECK_THROWS_WITH_AS(
        parse_config(R"({"tolerances": {"energy_identity_re": 1e-9}})"),
        doctest::Contains("unknown key 'energy_identity_re'"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_config(R"({"output": {"cadence": 5}})"),
                         doctest::Contains("unknown key 'cadence'"), ConfigError);
}

TEST_CASE("parse_config: validation catches bad numerics") {
    CHECK_THROWS_AS(parse_config(R"({"dt": -0.001})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"viscosity": 0})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"horizon": 0.0105, "dt": 0.001})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"ic": {"family": "nonsense"}})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"ic": {"family": "aperiodic_linear"}})"),
                    ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"q0": -1.0})"), ConfigError);
    CHECK_NOTHROW(parse_config(R"({"horizon": 0.01, "dt": 0.001})"));
}

TEST_CASE("config hash: stable for equal configs, sensitive to changes") {
    const std::string text = R"({"cutoff": 4, "horizon": 0.1, "dt": 0.001})";
    RunConfig a = parse_config(text);
    RunConfig b = parse_config(text);
    CHECK(config_hash(a) == config_hash(b));
    b.viscosity = 0.5;
    CHECK(config_hash(a) != config_hash(b));
    CHECK(config_hash(a).substr(0, 2) == "0x");
}

TEST_CASE("format_double: shortest form survives the round trip") {
    for (Real x : {0.1, 1.0 / 3.0, 1e-300, -0.0, 2.0 * pi, 1e17, -1.2345678901234567e-5}) {
        const std::string s = format_double(x);
        CHECK(std::strtod(s.c_str(), nullptr) == x);
    }
}

TEST_CASE("checkpoint: write/read round trip is bit-exact") {
    const SpectralField f = oracle::random_solenoidal(7, 3, 1.7);
    const auto path = (temp_dir() / "cp_roundtrip.json").string();
    write_checkpoint(path, {f, 0.625, 40, "0xdeadbeef", ""});
    const Checkpoint cp = read_checkpoint(path);
    CHECK(cp.time == 0.625);
    CHECK(cp.step == 40);
    CHECK(cp.config_hash == "0xdeadbeef");
    CHECK(cp.field.cutoff() == 3);
    CHECK(cp.field.box_l() == 1.7);
    CHECK((cp.field.coeffs() - f.coeffs()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("checkpoint: Hermitian violations and bad schema are rejected") {
    SpectralField f(2, 3, 1.0);
    f.set_coeff({1, 0, 0}, 0, Complex(1.0, 2.0));  // no conjugate partner
    const auto path = (temp_dir() / "cp_bad.json").string();
    write_checkpoint(path, {f, 0.0, 0, "", ""});
    CHECK_THROWS_WITH_AS(read_checkpoint(path), doctest::Contains("Hermitian"),
                         std::runtime_error);
    CHECK_THROWS_AS(checkpoint_from_json(R"({"schema": "other"})"), std::runtime_error);
}

TEST_CASE("ledger CSV carries the schema version and formats deterministically") {
    EnergyLedger ledger;
    LedgerRow r;
    r.step = 0;
    r.t = 0.0;
    r.energy = 1.0 / 3.0;
    ledger.rows.push_back(r);
    r.step = 1;
    r.t = 0.1;
    ledger.rows.push_back(r);
    const std::string csv = ledger.to_csv("0xabc");
    CHECK(csv.find("# schema torusflow-ledger-v1") == 0);
    CHECK(csv.find("# config_hash 0xabc") != std::string::npos);
    CHECK(csv.find("0.3333333333333333") != std::string::npos);
    CHECK(csv == ledger.to_csv("0xabc"));
}

TEST_CASE("from_file forcing: constant for one snapshot, linear for a series") {
    const Real l = 2.0 * pi;
    const SpectralField f0 = oracle::random_solenoidal(100, 2, l);
    const SpectralField f1 = oracle::random_solenoidal(101, 2, l);
    const auto dir = temp_dir();
    write_checkpoint((dir / "f0.json").string(), {f0, 0.0, 0, "", ""});
    write_checkpoint((dir / "f1.json").string(), {f1, 0.0, 0, "", ""});

    SUBCASE("single snapshot acts as static forcing") {
        FieldSpec spec;
        spec.family = "from_file";
        spec.files = {(dir / "f0.json").string()};
        const ForcingSampler sampler(spec, 2, l);
        CHECK(sampler.is_static());
        CHECK((sampler.sample(0.7).coeffs() - f0.coeffs()).cwiseAbs().maxCoeff() == 0.0);
    }
    SUBCASE("two snapshots interpolate linearly and clamp at the ends") {
        FieldSpec spec;
        spec.family = "from_file";
        spec.files = {(dir / "f0.json").string(), (dir / "f1.json").string()};
        spec.cadence = 0.5;
        const ForcingSampler sampler(spec, 2, l);
        const SpectralField mid = sampler.sample(0.25);
        const SpectralField expect = 0.5 * f0 + 0.5 * f1;
        CHECK((mid.coeffs() - expect.coeffs()).cwiseAbs().maxCoeff() <= 1e-15);
        CHECK((sampler.sample(-1.0).coeffs() - f0.coeffs()).cwiseAbs().maxCoeff() == 0.0);
        CHECK((sampler.sample(9.0).coeffs() - f1.coeffs()).cwiseAbs().maxCoeff() == 0.0);
    }
    SUBCASE("a series without cadence is a config error") {
        FieldSpec spec;
        spec.family = "from_file";
        spec.files = {(dir / "f0.json").string(), (dir / "f1.json").string()};
        CHECK_THROWS_AS(ForcingSampler(spec, 2, l), ConfigError);
    }
    SUBCASE("snapshots at a different cutoff are re-boxed to the run cutoff") {
        FieldSpec spec;
        spec.family = "from_file";
        spec.files = {(dir / "f0.json").string()};  // stored at cutoff 2
        const ForcingSampler sampler(spec, 1, l);
        const SpectralField expect = resample(f0, 1);
        CHECK((sampler.sample(0.0).coeffs() - expect.coeffs()).cwiseAbs().maxCoeff() ==
              0.0);
    }
    SUBCASE("aperiodic forcing parses but cannot drive a run") {
        // check-compat accepts it; a run's sampler must refuse it.
        const RunConfig c = parse_config(
            R"({"horizon": 0.01, "dt": 0.001,
                "forcing": {"family": "aperiodic_linear", "vector": [1,0,0]}})");
        CHECK_THROWS_AS(ForcingSampler(c.forcing, c.cutoff, c.box_l), ConfigError);
    }
}

TEST_CASE("random_band fields are reproducible and solenoidal") {
    FieldSpec spec;
    spec.family = "random_band";
    spec.seed = 31415;
    spec.k_min = 1;
    spec.k_max = 3;
    spec.slope = -1.0;
    spec.amplitude = 0.75;
    const SpectralField a = realize_field(spec, 4, 2.0 * pi);
    const SpectralField b = realize_field(spec, 4, 2.0 * pi);
    CHECK((a.coeffs() - b.coeffs()).cwiseAbs().maxCoeff() == 0.0);
    CHECK(l2_norm(a) == doctest::Approx(0.75).epsilon(1e-12));
    CHECK(relative_divergence(a) <= 1e-14);
    CHECK(a.hermitian_defect() == 0.0);
    spec.seed = 31416;
    const SpectralField c = realize_field(spec, 4, 2.0 * pi);
    CHECK((a.coeffs() - c.coeffs()).cwiseAbs().maxCoeff() > 0.0);
}

TEST_CASE("random_band truncation is consistent across cutoffs") {
    FieldSpec spec;
    spec.family = "random_band";
    spec.seed = 5;
    spec.k_min = 1;
    spec.k_max = 4;
    const SpectralField wide = realize_field(spec, 4, 1.0);
    const SpectralField narrow = realize_field(spec, 2, 1.0);
    // The narrow realization must be the renormalized truncation of the wide
    // one: same draws, same modes below the cutoff.
    const SpectralField cut = resample(wide, 2);
    const Real scale = l2_norm(narrow) / l2_norm(cut);
    CHECK(((scale * cut).coeffs() - narrow.coeffs()).cwiseAbs().maxCoeff() <=
          1e-12 * narrow.coeffs().cwiseAbs().maxCoeff());
}
