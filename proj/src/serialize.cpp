#include "qm/serialize.hpp"

#include <cstdint>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "qm/errors.hpp"
#include "qm/io.hpp"

namespace qm {

using nlohmann::json;

std::string observable_to_json(const Observable& obs) {
    obs.params.validate();
    json layout;
    if (obs.layout.kind == ObservableLayout::Kind::LocalSingleQubit) {
        layout = {{"kind", "local"}, {"target", obs.layout.target}};
    } else {
        layout = {{"kind", "full"}, {"n_qubits", obs.layout.n_qubits}};
    }
    const json j = {{"layout", layout},
                    {"dim", obs.params.dim},
                    {"d", obs.params.diag},
                    {"a", obs.params.off_re},
                    {"c", obs.params.off_im}};
    return j.dump(2) + "\n";
}

Observable observable_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("observable JSON: ") + e.what());
    }
    try {
        Observable obs;
        const json& layout = j.at("layout");
        const std::string kind = layout.at("kind").get<std::string>();
        if (kind == "local") {
            obs.layout = ObservableLayout::local(layout.at("target").get<std::size_t>());
        } else if (kind == "full") {
            obs.layout = ObservableLayout::full(layout.at("n_qubits").get<std::size_t>());
        } else {
            throw ParseError("observable JSON: unknown layout kind '" + kind + "'");
        }
        obs.params.dim = j.at("dim").get<std::size_t>();
        obs.params.diag = j.at("d").get<std::vector<double>>();
        obs.params.off_re = j.at("a").get<std::vector<double>>();
        obs.params.off_im = j.at("c").get<std::vector<double>>();
        obs.params.validate();
        if (obs.params.dim != obs.layout.dim()) {
            throw ValidationError("observable JSON: dim does not match layout");
        }
        return obs;
    } catch (const json::exception& e) {
        throw ParseError(std::string("observable JSON: ") + e.what());
    }
}

void save_observable(const Observable& obs, const std::filesystem::path& path) {
    atomic_write(path, observable_to_json(obs));
}

Observable load_observable(const std::filesystem::path& path) {
    return observable_from_json(read_file(path));
}

namespace {

void reject_unknown_keys(const json& obj, std::initializer_list<const char*> known,
                         const std::string& where) {
    for (const auto& [key, value] : obj.items()) {
        (void)value;
        bool ok = false;
        for (const char* k : known) {
            if (key == k) {
                ok = true;
                break;
            }
        }
        if (!ok) throw ConfigError("unknown key '" + key + "' in " + where);
    }
}

json optimizer_to_json(const OptimizerSpec& opt) {
    json j = {{"kind", optimizer_kind_name(opt.kind)}, {"lr", opt.learning_rate}};
    if (opt.kind == OptimizerKind::RmsProp) j["decay"] = opt.decay;
    if (opt.kind == OptimizerKind::Adam) {
        j["beta1"] = opt.beta1;
        j["beta2"] = opt.beta2;
    }
    if (opt.kind != OptimizerKind::Sgd) j["eps"] = opt.eps;
    return j;
}

OptimizerSpec optimizer_from_json(const json& j, const std::string& where) {
    if (!j.is_object()) throw ConfigError(where + " must be an object");
    reject_unknown_keys(j, {"kind", "lr", "decay", "beta1", "beta2", "eps"}, where);
    OptimizerSpec opt;
    opt.kind = optimizer_kind_from_name(j.at("kind").get<std::string>());
    if (j.contains("lr")) opt.learning_rate = j.at("lr").get<double>();
    if (j.contains("decay")) opt.decay = j.at("decay").get<double>();
    if (j.contains("beta1")) opt.beta1 = j.at("beta1").get<double>();
    if (j.contains("beta2")) opt.beta2 = j.at("beta2").get<double>();
    if (j.contains("eps")) opt.eps = j.at("eps").get<double>();
    opt.validate();
    return opt;
}

} // namespace

std::string sweep_config_to_json(const SweepConfig& config) {
    json j;
    j["circuit"] = {{"n_qubits", config.circuit.n_qubits},
                    {"n_layers", config.circuit.n_layers}};
    json regimes = json::array();
    for (const Regime r : config.regimes) regimes.push_back(regime_name(r));
    j["regimes"] = regimes;
    j["noises"] = config.noises;
    j["seeds"] = config.seeds;
    j["epochs"] = config.epochs;
    j["batch_size"] = config.batch_size;
    j["total_samples"] = config.total_samples;
    j["train_size"] = config.train_size;
    j["test_size"] = config.test_size;
    json opts;
    if (config.angle_optimizer) opts["angles"] = optimizer_to_json(*config.angle_optimizer);
    if (config.observable_optimizer) {
        opts["observables"] = optimizer_to_json(*config.observable_optimizer);
    }
    if (!opts.empty()) j["optimizers"] = opts;
    if (config.observable_init) {
        j["observable_init"] = observable_init_name(*config.observable_init);
    }
    return j.dump(2) + "\n";
}

SweepConfig sweep_config_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("sweep config JSON: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("sweep config must be a JSON object");
    reject_unknown_keys(j,
                        {"circuit", "regimes", "noises", "seeds", "epochs", "batch_size",
                         "total_samples", "train_size", "test_size", "optimizers",
                         "observable_init"},
                        "sweep config");
    SweepConfig config;
    try {
        if (j.contains("circuit")) {
            const json& c = j.at("circuit");
            reject_unknown_keys(c, {"n_qubits", "n_layers"}, "circuit");
            if (c.contains("n_qubits")) {
                config.circuit.n_qubits = c.at("n_qubits").get<std::size_t>();
            }
            if (c.contains("n_layers")) {
                config.circuit.n_layers = c.at("n_layers").get<std::size_t>();
            }
        }
        if (j.contains("regimes")) {
            config.regimes.clear();
            for (const auto& r : j.at("regimes")) {
                config.regimes.push_back(regime_from_name(r.get<std::string>()));
            }
        }
        if (j.contains("noises")) config.noises = j.at("noises").get<std::vector<double>>();
        if (j.contains("seeds")) {
            config.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
        }
        if (j.contains("epochs")) config.epochs = j.at("epochs").get<std::size_t>();
        if (j.contains("batch_size")) {
            config.batch_size = j.at("batch_size").get<std::size_t>();
        }
        if (j.contains("total_samples")) {
            config.total_samples = j.at("total_samples").get<std::size_t>();
        }
        if (j.contains("train_size")) {
            config.train_size = j.at("train_size").get<std::size_t>();
        }
        if (j.contains("test_size")) config.test_size = j.at("test_size").get<std::size_t>();
        if (j.contains("optimizers")) {
            const json& opts = j.at("optimizers");
            reject_unknown_keys(opts, {"angles", "observables"}, "optimizers");
            if (opts.contains("angles")) {
                config.angle_optimizer = optimizer_from_json(opts.at("angles"),
                                                             "optimizers.angles");
            }
            if (opts.contains("observables")) {
                config.observable_optimizer =
                    optimizer_from_json(opts.at("observables"), "optimizers.observables");
            }
        }
        if (j.contains("observable_init")) {
            config.observable_init =
                observable_init_from_name(j.at("observable_init").get<std::string>());
        }
    } catch (const json::exception& e) {
        throw ParseError(std::string("sweep config JSON: ") + e.what());
    }
    return config;
}

void save_sweep_config(const SweepConfig& config, const std::filesystem::path& path) {
    atomic_write(path, sweep_config_to_json(config));
}

SweepConfig load_sweep_config(const std::filesystem::path& path) {
    return sweep_config_from_json(read_file(path));
}

namespace {

std::vector<std::string> split_commas(const std::string& value) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = value.find(',', start);
        parts.push_back(value.substr(start, comma - start));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return parts;
}

std::size_t parse_size(const std::string& value, const std::string& key) {
    try {
        std::size_t pos = 0;
        const unsigned long long v = std::stoull(value, &pos);
        if (pos != value.size()) throw std::invalid_argument(value);
        return static_cast<std::size_t>(v);
    } catch (const std::exception&) {
        throw ConfigError("override " + key + ": expected a non-negative integer, got '" +
                          value + "'");
    }
}

double parse_real(const std::string& value, const std::string& key) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(value, &pos);
        if (pos != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("override " + key + ": expected a number, got '" + value + "'");
    }
}

} // namespace

void apply_override(SweepConfig& config, const std::string& key, const std::string& value) {
    if (value.empty()) throw ConfigError("override " + key + ": empty value");
    if (key == "epochs") {
        config.epochs = parse_size(value, key);
    } else if (key == "batch_size") {
        config.batch_size = parse_size(value, key);
    } else if (key == "total_samples") {
        config.total_samples = parse_size(value, key);
    } else if (key == "train_size") {
        config.train_size = parse_size(value, key);
    } else if (key == "test_size") {
        config.test_size = parse_size(value, key);
    } else if (key == "circuit.n_qubits") {
        config.circuit.n_qubits = parse_size(value, key);
    } else if (key == "circuit.n_layers") {
        config.circuit.n_layers = parse_size(value, key);
    } else if (key == "seeds") {
        config.seeds.clear();
        for (const auto& part : split_commas(value)) {
            config.seeds.push_back(parse_size(part, key));
        }
    } else if (key == "noises") {
        config.noises.clear();
        for (const auto& part : split_commas(value)) {
            config.noises.push_back(parse_real(part, key));
        }
    } else if (key == "regimes") {
        config.regimes.clear();
        for (const auto& part : split_commas(value)) {
            config.regimes.push_back(regime_from_name(part));
        }
    } else if (key == "observable_init") {
        config.observable_init = observable_init_from_name(value);
    } else if (key.rfind("optimizers.", 0) == 0) {
        const std::string rest = key.substr(std::string("optimizers.").size());
        const std::size_t dot = rest.find('.');
        if (dot == std::string::npos) {
            throw ConfigError("override " + key + ": expected optimizers.<group>.<field>");
        }
        const std::string group = rest.substr(0, dot);
        const std::string field = rest.substr(dot + 1);
        std::optional<OptimizerSpec>* slot = nullptr;
        OptimizerSpec fallback;
        if (group == "angles") {
            slot = &config.angle_optimizer;
            fallback = OptimizerSpec::rmsprop(1e-2);
        } else if (group == "observables") {
            slot = &config.observable_optimizer;
            fallback = OptimizerSpec::adam(1e-1);
        } else {
            throw ConfigError("override " + key + ": unknown optimizer group '" + group +
                              "'");
        }
        if (!slot->has_value()) *slot = fallback;
        OptimizerSpec& opt = slot->value();
        if (field == "kind") {
            opt.kind = optimizer_kind_from_name(value);
        } else if (field == "lr") {
            opt.learning_rate = parse_real(value, key);
        } else if (field == "decay") {
            opt.decay = parse_real(value, key);
        } else if (field == "beta1") {
            opt.beta1 = parse_real(value, key);
        } else if (field == "beta2") {
            opt.beta2 = parse_real(value, key);
        } else if (field == "eps") {
            opt.eps = parse_real(value, key);
        } else {
            throw ConfigError("override " + key + ": unknown optimizer field '" + field +
                              "'");
        }
        opt.validate();
    } else {
        throw ConfigError(
            "unknown override key '" + key +
            "' (valid: epochs, batch_size, total_samples, train_size, test_size, "
            "seeds, noises, regimes, observable_init, circuit.n_qubits, "
            "circuit.n_layers, optimizers.<angles|observables>.<kind|lr|decay|beta1|"
            "beta2|eps>)");
    }
}

} // namespace qm
