#include "spadwm/imager_sim.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "json_io.hpp"

namespace spadwm {

namespace {

// Independent streams per purpose so adding a draw in one field never
// perturbs another.
enum class Stream : std::uint32_t { dcr = 1, doubling = 2, acquisition = 3 };

std::mt19937_64 make_engine(std::uint64_t seed, Stream stream, std::uint64_t salt = 0) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(salt),
                      static_cast<std::uint32_t>(salt >> 32)};
    return std::mt19937_64(seq);
}

}  // namespace

void ChipParams::validate() const {
    if (array_dim < 2) throw ParameterError("array_dim must be >= 2");
    if (!(dcr_median > 0.0)) throw ParameterError("dcr_median must be > 0");
    if (!(dcr_sigma >= 0.0)) throw ParameterError("dcr_sigma must be >= 0");
    if (!(doubling_temp_mean > 0.0)) throw ParameterError("doubling_temp_mean must be > 0");
    if (!(doubling_temp_jitter >= 0.0)) throw ParameterError("doubling_temp_jitter must be >= 0");
    if (!std::isfinite(ref_temp)) throw ParameterError("ref_temp must be finite");
    if (gate_voltage != 0.0) throw ParameterError("only the native gate voltage (0 V) is supported");
}

void AcquisitionConfig::validate() const {
    if (!(exposure >= 0.0) || !std::isfinite(exposure)) throw ParameterError("exposure must be >= 0");
    if (n_frames < 1) throw ParameterError("n_frames must be >= 1");
    if (!std::isfinite(temperature)) throw ParameterError("temperature must be finite");
}

AcquisitionConfig AcquisitionConfig::golden(double ref_temp, std::uint64_t rng_seed) {
    return AcquisitionConfig{ref_temp, 1.0, 100, rng_seed};
}

ChipModel new_chip(std::string chip_id, std::uint64_t seed, const ChipParams& params) {
    params.validate();
    const std::size_t n = params.array_dim;
    ChipModel chip{std::move(chip_id), seed, params, Matrix<double>(n, n), Matrix<double>(n, n)};

    auto dcr_rng = make_engine(seed, Stream::dcr);
    std::normal_distribution<double> unit(0.0, 1.0);
    for (double& v : chip.dcr_ref.data()) {
        v = params.dcr_median * std::exp(params.dcr_sigma * unit(dcr_rng));
    }

    auto dt_rng = make_engine(seed, Stream::doubling);
    const double floor = 0.5 * params.doubling_temp_mean;
    for (double& v : chip.doubling_temp.data()) {
        const double draw = params.doubling_temp_mean + params.doubling_temp_jitter * unit(dt_rng);
        v = std::max(draw, floor);
    }
    return chip;
}

double dcr_at(const ChipModel& chip, std::size_t row, std::size_t col, double temperature) {
    const double ref = chip.dcr_ref.at(row, col);
    const double doubling = chip.doubling_temp(row, col);
    return ref * std::exp2((temperature - chip.params.ref_temp) / doubling);
}

DarkCountMap acquire_dcm(const ChipModel& chip, const AcquisitionConfig& cfg) {
    cfg.validate();
    const std::size_t n = chip.dim();
    DarkCountMap dcm{CountMatrix(n, n, 0), cfg, chip.chip_id};
    if (cfg.exposure == 0.0) return dcm;

    auto rng = make_engine(cfg.rng_seed, Stream::acquisition, chip.seed);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c) {
            const double mean = dcr_at(chip, r, c, cfg.temperature) * cfg.exposure;
            std::poisson_distribution<std::uint64_t> frame(mean);
            std::uint64_t total = 0;
            for (std::uint32_t f = 0; f < cfg.n_frames; ++f) total += frame(rng);
            dcm.counts(r, c) = total;
        }
    }
    return dcm;
}

std::string chip_to_json(const ChipModel& chip) {
    nlohmann::json j{{"chip_id", chip.chip_id}, {"seed", chip.seed}, {"params", chip.params}};
    return j.dump(2) + "\n";
}

ChipModel chip_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
        return new_chip(j.at("chip_id").get<std::string>(), j.at("seed").get<std::uint64_t>(),
                        j.at("params").get<ChipParams>());
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("invalid chip record: ") + e.what(), 0);
    }
}

std::filesystem::path chip_file_name(const std::string& chip_id) {
    return chip_id + ".chip.json";
}

}  // namespace spadwm
