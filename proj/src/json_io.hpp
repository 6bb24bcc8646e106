#pragma once

// nlohmann/json bindings shared by the persistence code. Not installed.

#include <json.hpp>

#include "spadwm/imager_sim.hpp"

namespace spadwm {

inline void to_json(nlohmann::json& j, const ChipParams& p) {
    j = nlohmann::json{{"array_dim", p.array_dim},
                       {"dcr_median", p.dcr_median},
                       {"dcr_sigma", p.dcr_sigma},
                       {"doubling_temp_mean", p.doubling_temp_mean},
                       {"doubling_temp_jitter", p.doubling_temp_jitter},
                       {"ref_temp", p.ref_temp},
                       {"gate_voltage", p.gate_voltage}};
}

inline void from_json(const nlohmann::json& j, ChipParams& p) {
    j.at("array_dim").get_to(p.array_dim);
    j.at("dcr_median").get_to(p.dcr_median);
    j.at("dcr_sigma").get_to(p.dcr_sigma);
    j.at("doubling_temp_mean").get_to(p.doubling_temp_mean);
    j.at("doubling_temp_jitter").get_to(p.doubling_temp_jitter);
    j.at("ref_temp").get_to(p.ref_temp);
    p.gate_voltage = j.value("gate_voltage", 0.0);
}

inline void to_json(nlohmann::json& j, const AcquisitionConfig& c) {
    j = nlohmann::json{{"temperature", c.temperature},
                       {"exposure", c.exposure},
                       {"n_frames", c.n_frames},
                       {"rng_seed", c.rng_seed}};
}

inline void from_json(const nlohmann::json& j, AcquisitionConfig& c) {
    j.at("temperature").get_to(c.temperature);
    j.at("exposure").get_to(c.exposure);
    j.at("n_frames").get_to(c.n_frames);
    j.at("rng_seed").get_to(c.rng_seed);
}

}  // namespace spadwm
