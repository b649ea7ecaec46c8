#include "torusflow/checkpoint.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace torusflow {

namespace {
using nlohmann::json;
constexpr const char* kSchema = "torusflow-checkpoint-v1";
}  // namespace

std::string checkpoint_to_json(const Checkpoint& cp) {
    const SpectralField& f = cp.field;
    json head;
    head["schema"] = kSchema;
    head["box_l"] = f.box_l();
    head["cutoff"] = f.cutoff();
    head["components"] = f.components();
    head["time"] = cp.time;
    head["step"] = cp.step;
    head["config_hash"] = cp.config_hash;

    // One mode per line keeps snapshots line-diffable; doubles are written
    // in shortest round-trip form.
    std::string out = "{\n";
    for (const auto& item : head.items())
        out += "\"" + item.key() + "\": " + item.value().dump() + ",\n";
    if (!cp.config_json.empty()) out += "\"config\": " + cp.config_json + ",\n";
    out += "\"modes\": [\n";
    for (Eigen::Index i = 0; i < f.mode_count(); ++i) {
        const WaveVector k = f.wavevector(i);
        out += '[' + std::to_string(k.k1) + ',' + std::to_string(k.k2) + ',' +
               std::to_string(k.k3);
        for (int c = 0; c < f.components(); ++c) {
            out += ',' + json(f.coeffs()(i, c).real()).dump();
            out += ',' + json(f.coeffs()(i, c).imag()).dump();
        }
        out += i + 1 < f.mode_count() ? "],\n" : "]\n";
    }
    out += "]}";
    return out;
}

Checkpoint checkpoint_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw std::runtime_error(std::string("checkpoint is not valid JSON: ") + e.what());
    }
    if (!j.contains("schema") || j["schema"].get<std::string>() != kSchema)
        throw std::runtime_error("checkpoint: unexpected schema");
    const int cutoff = j["cutoff"].get<int>();
    const int components = j["components"].get<int>();
    const Real box_l = j["box_l"].get<Real>();

    Checkpoint cp;
    cp.field = SpectralField(cutoff, components, box_l);
    cp.time = j["time"].get<Real>();
    cp.step = j.value("step", 0L);
    cp.config_hash = j.value("config_hash", std::string());
    if (j.contains("config")) cp.config_json = j["config"].dump();

    const json& modes = j["modes"];
    if (static_cast<Eigen::Index>(modes.size()) != cp.field.mode_count())
        throw std::runtime_error("checkpoint: mode count mismatch");
    for (const json& row : modes) {
        if (static_cast<int>(row.size()) != 3 + 2 * components)
            throw std::runtime_error("checkpoint: malformed mode row");
        const WaveVector k{row[0].get<int>(), row[1].get<int>(), row[2].get<int>()};
        if (!cp.field.contains(k))
            throw std::runtime_error("checkpoint: wavevector exceeds cutoff");
        for (int c = 0; c < components; ++c)
            cp.field.set_coeff(k, c,
                               Complex(row[3 + 2 * c].get<Real>(),
                                       row[4 + 2 * c].get<Real>()));
    }
    const Real scale = cp.field.coeffs().array().abs().maxCoeff();
    if (cp.field.hermitian_defect() > 1e-12 * std::max(scale, Real(1e-300)))
        throw std::runtime_error("checkpoint: field violates Hermitian symmetry");
    return cp;
}

void write_checkpoint(const std::string& path, const Checkpoint& cp) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write checkpoint: " + path);
    out << checkpoint_to_json(cp);
    out << '\n';
}

Checkpoint read_checkpoint(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read checkpoint: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return checkpoint_from_json(ss.str());
}

}  // namespace torusflow
