#pragma once

// Behavioral simulation of a perimeter-gated SPAD imager in the dark.
//
// A chip is a per-pixel dark count rate field at a reference temperature
// plus a per-pixel doubling temperature. Everything is regenerated from
// (seed, params), so only those are ever persisted.

#include <cstdint>
#include <filesystem>
#include <string>

#include "spadwm/matrix.hpp"

namespace spadwm {

struct ChipParams {
    std::size_t array_dim = 64;
    double dcr_median = 100.0;          // counts/s at ref_temp
    double dcr_sigma = 1.0;             // log-scale spread of the DCR population
    double doubling_temp_mean = 8.0;    // degC per doubling of DCR
    double doubling_temp_jitter = 0.05; // degC std-dev across pixels
    double ref_temp = 25.0;             // degC
    double gate_voltage = 0.0;          // native PUF only

    /// Throws ParameterError when any invariant is violated.
    void validate() const;

    friend bool operator==(const ChipParams&, const ChipParams&) = default;
};

struct ChipModel {
    std::string chip_id;
    std::uint64_t seed = 0;
    ChipParams params;
    Matrix<double> dcr_ref;        // counts/s at params.ref_temp
    Matrix<double> doubling_temp;  // degC

    std::size_t dim() const noexcept { return params.array_dim; }
};

struct AcquisitionConfig {
    double temperature = 25.0;  // degC
    double exposure = 1.0;      // seconds per frame
    std::uint32_t n_frames = 100;
    std::uint64_t rng_seed = 0;

    void validate() const;

    /// Golden enrollment acquisition at the given reference temperature.
    static AcquisitionConfig golden(double ref_temp = 25.0, std::uint64_t rng_seed = 0);

    friend bool operator==(const AcquisitionConfig&, const AcquisitionConfig&) = default;
};

using CountMatrix = Matrix<std::uint64_t>;

struct DarkCountMap {
    CountMatrix counts;
    AcquisitionConfig config;
    std::string chip_id;
};

ChipModel new_chip(std::string chip_id, std::uint64_t seed, const ChipParams& params = {});

/// Dark count rate of one pixel: dcr_ref * 2^((T - ref_temp) / doubling_temp).
double dcr_at(const ChipModel& chip, std::size_t row, std::size_t col, double temperature);

/// Accumulates n_frames independent Poisson frames of the chip's dark signal.
DarkCountMap acquire_dcm(const ChipModel& chip, const AcquisitionConfig& cfg);

// Chip persistence: `<chip_id>.chip.json` holding chip_id, seed and params.
std::string chip_to_json(const ChipModel& chip);
ChipModel chip_from_json(const std::string& text);
std::filesystem::path chip_file_name(const std::string& chip_id);

}  // namespace spadwm
