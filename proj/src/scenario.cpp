#include "flcsim/scenario.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <limits>
#include <sstream>
#include <type_traits>

#include <json.hpp>

namespace flcsim {

using nlohmann::json;

ScenarioConfig ScenarioConfig::paper_default() {
    ScenarioConfig c;
    c.disturbance = three_phase_disturbance();
    return c;
}

std::size_t ScenarioConfig::steps() const {
    return static_cast<std::size_t>(std::llround(horizon / dt));
}

void ScenarioConfig::validate() const {
    auto fail = [](const std::string& msg) { throw ConfigError(msg); };
    if (!(dt > 0.0) || !std::isfinite(dt)) fail("dt must be positive");
    if (!(horizon > 0.0) || !std::isfinite(horizon)) fail("horizon must be positive");
    const double n = horizon / dt;
    if (std::abs(n - std::round(n)) > 1e-6 * std::max(1.0, n))
        fail("horizon must be an integer multiple of dt");
    try {
        plant_by_name(plant);
        ControllerGains(k1, k2, ki);
        flcsim::validate(disturbance);
    } catch (const std::invalid_argument& e) {
        fail(e.what());
    }
    if (!(l1 > 0.0)) fail("observer gain l1 must be positive");
    if (!std::isfinite(l2)) fail("observer gain l2 must be finite");
    if (!(eta > 0.0)) fail("eta must be positive");
    if (!(alpha >= 0.0)) fail("alpha must be non-negative");
    if (mf_i == 0 || mf_j == 0) fail("membership function counts must be positive");
    if (!(t2nfs_init.half_range > 0.0)) fail("t2nfs.half_range must be positive");
    if (!(t2nfs_init.upper_spread_ratio > 0.0)) fail("t2nfs.upper_spread_ratio must be positive");
    if (!(adaptation.sgn_delta > 0.0)) fail("sgn_delta must be positive");
    if (!(adaptation.guard_eps > 0.0)) fail("t2nfs.guard_eps must be positive");
    if (!(adaptation.sigma_floor > 0.0)) fail("t2nfs.sigma_floor must be positive");
    if (!(adaptation.sigma_max_rel_step > 0.0)) fail("t2nfs.sigma_max_rel_step must be positive");
    if (!x0.finite()) fail("x0 must be finite");
    if (noise && !(noise->snr_db > 0.0)) fail("noise.snr_db must be positive");
}

namespace {

json time_or_null(double t) {
    return std::isinf(t) ? json(nullptr) : json(t);
}

double time_from(const json& j, const char* key, double fallback) {
    if (!j.contains(key)) return fallback;
    const json& v = j.at(key);
    if (v.is_null()) return std::numeric_limits<double>::infinity();
    return v.get<double>();
}

void reject_unknown(const json& j, std::initializer_list<const char*> allowed, const std::string& where) {
    if (!j.is_object()) throw ConfigError(where + " must be an object");
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = false;
        for (const char* a : allowed) ok = ok || it.key() == a;
        if (!ok) throw ConfigError("unknown key '" + it.key() + "' in " + where);
    }
}

json leaf_to_json(const LeafDisturbance& leaf) {
    return std::visit(
        [](const auto& p) -> json {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, ZeroDisturbance>) {
                return {{"type", "zero"}};
            } else if constexpr (std::is_same_v<T, StepDisturbance>) {
                return {{"type", "step"}, {"magnitude", p.magnitude},
                        {"t_on", p.t_on}, {"t_off", time_or_null(p.t_off)}};
            } else {
                return {{"type", "multisine"}, {"offset", p.offset},
                        {"amplitudes", p.amplitudes}, {"frequencies", p.frequencies},
                        {"t_on", p.t_on}, {"t_off", time_or_null(p.t_off)}};
            }
        },
        leaf);
}

LeafDisturbance leaf_from_json(const json& j, const std::string& where) {
    const std::string type = j.value("type", "");
    if (type == "zero") {
        reject_unknown(j, {"type"}, where);
        return ZeroDisturbance{};
    }
    if (type == "step") {
        reject_unknown(j, {"type", "magnitude", "t_on", "t_off"}, where);
        return StepDisturbance{j.at("magnitude").get<double>(), j.value("t_on", 0.0),
                               time_from(j, "t_off", std::numeric_limits<double>::infinity())};
    }
    if (type == "multisine") {
        reject_unknown(j, {"type", "offset", "amplitudes", "frequencies", "t_on", "t_off"}, where);
        return MultiSineDisturbance{j.value("offset", 0.0),
                                    j.at("amplitudes").get<std::vector<double>>(),
                                    j.at("frequencies").get<std::vector<double>>(),
                                    j.value("t_on", 0.0),
                                    time_from(j, "t_off", std::numeric_limits<double>::infinity())};
    }
    throw ConfigError(where + ": unknown disturbance type '" + type + "'");
}

json disturbance_to_json(const DisturbanceProfile& d) {
    if (const auto* pw = std::get_if<PiecewiseDisturbance>(&d)) {
        json segs = json::array();
        for (const auto& s : pw->segments)
            segs.push_back({{"t_start", s.t_start}, {"t_end", time_or_null(s.t_end)},
                            {"profile", leaf_to_json(s.profile)}});
        return {{"type", "piecewise"}, {"segments", segs}};
    }
    return std::visit(
        [](const auto& p) -> json {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, PiecewiseDisturbance>) {
                return {};
            } else {
                return leaf_to_json(LeafDisturbance{p});
            }
        },
        d);
}

DisturbanceProfile disturbance_from_json(const json& j) {
    if (j.value("type", "") == "piecewise") {
        reject_unknown(j, {"type", "segments"}, "disturbance");
        PiecewiseDisturbance pw;
        std::size_t k = 0;
        for (const json& s : j.at("segments")) {
            const std::string where = "disturbance.segments[" + std::to_string(k++) + "]";
            reject_unknown(s, {"t_start", "t_end", "profile"}, where);
            pw.segments.push_back({s.value("t_start", 0.0),
                                   time_from(s, "t_end", std::numeric_limits<double>::infinity()),
                                   leaf_from_json(s.at("profile"), where + ".profile")});
        }
        return pw;
    }
    return std::visit([](auto&& leaf) -> DisturbanceProfile { return leaf; },
                      leaf_from_json(j, "disturbance"));
}

json to_json(const ScenarioConfig& c) {
    json j;
    j["plant"] = c.plant;
    j["controller"] = {{"variant", to_string(c.variant)}, {"k1", c.k1}, {"k2", c.k2}, {"ki", c.ki}};
    j["observer"] = {{"l1", c.l1}, {"l2", c.l2}, {"eta", c.eta}, {"alpha", c.alpha}};
    j["t2nfs"] = {{"I", c.mf_i},
                  {"J", c.mf_j},
                  {"half_range", c.t2nfs_init.half_range},
                  {"upper_spread_ratio", c.t2nfs_init.upper_spread_ratio},
                  {"q0", c.t2nfs_init.q0},
                  {"f0", c.t2nfs_init.f0},
                  {"type1", c.type1},
                  {"adapt", c.adapt},
                  {"guard_eps", c.adaptation.guard_eps},
                  {"sigma_floor", c.adaptation.sigma_floor},
                  {"sigma_max_rel_step", c.adaptation.sigma_max_rel_step}};
    j["sgn_delta"] = c.adaptation.sgn_delta;
    j["x0"] = {c.x0.x1, c.x0.x2};
    j["dt"] = c.dt;
    j["horizon"] = c.horizon;
    j["scheme"] = to_string(c.scheme);
    j["disturbance"] = disturbance_to_json(c.disturbance);
    if (c.noise) {
        j["noise"] = {{"snr_db", c.noise->snr_db},
                      {"seed", c.noise->seed},
                      {"channels", c.noise->channels == NoiseChannels::Both ? "both" : "x1"}};
    } else {
        j["noise"] = nullptr;
    }
    return j;
}

ScenarioConfig from_json(const json& j) {
    reject_unknown(j, {"plant", "controller", "observer", "t2nfs", "sgn_delta", "x0", "dt",
                       "horizon", "scheme", "disturbance", "noise"},
                   "config");
    ScenarioConfig c = ScenarioConfig::paper_default();
    c.plant = j.value("plant", c.plant);
    if (j.contains("controller")) {
        const json& k = j.at("controller");
        reject_unknown(k, {"variant", "k1", "k2", "ki"}, "controller");
        if (k.contains("variant")) c.variant = variant_from_string(k.at("variant").get<std::string>());
        c.k1 = k.value("k1", c.k1);
        c.k2 = k.value("k2", c.k2);
        c.ki = k.value("ki", c.ki);
    }
    if (j.contains("observer")) {
        const json& o = j.at("observer");
        reject_unknown(o, {"l1", "l2", "eta", "alpha"}, "observer");
        c.l1 = o.value("l1", c.l1);
        c.l2 = o.value("l2", c.l2);
        c.eta = o.value("eta", c.eta);
        c.alpha = o.value("alpha", c.alpha);
    }
    if (j.contains("t2nfs")) {
        const json& t = j.at("t2nfs");
        reject_unknown(t, {"I", "J", "half_range", "upper_spread_ratio", "q0", "f0", "type1",
                           "adapt", "guard_eps", "sigma_floor", "sigma_max_rel_step"},
                       "t2nfs");
        c.mf_i = t.value("I", c.mf_i);
        c.mf_j = t.value("J", c.mf_j);
        c.t2nfs_init.half_range = t.value("half_range", c.t2nfs_init.half_range);
        c.t2nfs_init.upper_spread_ratio = t.value("upper_spread_ratio", c.t2nfs_init.upper_spread_ratio);
        c.t2nfs_init.q0 = t.value("q0", c.t2nfs_init.q0);
        c.t2nfs_init.f0 = t.value("f0", c.t2nfs_init.f0);
        c.type1 = t.value("type1", c.type1);
        c.adapt = t.value("adapt", c.adapt);
        c.adaptation.guard_eps = t.value("guard_eps", c.adaptation.guard_eps);
        c.adaptation.sigma_floor = t.value("sigma_floor", c.adaptation.sigma_floor);
        c.adaptation.sigma_max_rel_step = t.value("sigma_max_rel_step", c.adaptation.sigma_max_rel_step);
    }
    c.adaptation.sgn_delta = j.value("sgn_delta", c.adaptation.sgn_delta);
    if (j.contains("x0")) {
        const auto x0 = j.at("x0").get<std::vector<double>>();
        if (x0.size() != 2) throw ConfigError("x0 must have exactly two entries");
        c.x0 = {x0[0], x0[1]};
    }
    c.dt = j.value("dt", c.dt);
    c.horizon = j.value("horizon", c.horizon);
    if (j.contains("scheme")) c.scheme = scheme_from_string(j.at("scheme").get<std::string>());
    if (j.contains("disturbance")) c.disturbance = disturbance_from_json(j.at("disturbance"));
    if (j.contains("noise") && !j.at("noise").is_null()) {
        const json& n = j.at("noise");
        reject_unknown(n, {"snr_db", "seed", "channels"}, "noise");
        if (!n.contains("snr_db") || !n.contains("seed"))
            throw ConfigError("noise needs both snr_db and seed");
        NoiseConfig nc;
        nc.snr_db = n.at("snr_db").get<double>();
        nc.seed = n.at("seed").get<std::uint64_t>();
        const std::string ch = n.value("channels", "both");
        if (ch == "both") nc.channels = NoiseChannels::Both;
        else if (ch == "x1") nc.channels = NoiseChannels::X1Only;
        else throw ConfigError("noise.channels must be 'both' or 'x1'");
        c.noise = nc;
    }
    return c;
}

}  // namespace

std::string to_json_string(const ScenarioConfig& config, int indent) {
    return to_json(config).dump(indent);
}

ScenarioConfig config_from_json_string(const std::string& text) {
    ScenarioConfig c;
    try {
        c = from_json(json::parse(text));
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError(std::string("invalid config: ") + e.what());
    }
    c.validate();
    return c;
}

ScenarioConfig load_config(const std::string& path) {
    if (path == "paper-default") return ScenarioConfig::paper_default();
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    try {
        return config_from_json_string(ss.str());
    } catch (const ConfigError& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

std::uint64_t fnv1a64(const std::string& bytes, std::uint64_t h) {
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string hex64(std::uint64_t value) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(value));
    return buf;
}

std::string config_hash(const ScenarioConfig& config) {
    return hex64(fnv1a64(to_json(config).dump()));
}

}  // namespace flcsim
