#include "spadwm/verifier.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <random>

namespace spadwm {

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::authentic: return "authentic";
        case Verdict::tampered: return "tampered";
        case Verdict::unknown_source: return "unknown-source";
    }
    return "unknown-source";
}

void Thresholds::validate() const {
    for (double t : {tau_fingerprint, tau_challenge, tau_response}) {
        if (!(t >= 0.0 && t < 1.0)) throw ParameterError("thresholds must lie in [0, 1)");
    }
}

Watermark generate_watermark(const GrayImage& img, const EnrollmentRecord& record, const FeatureConfig& cfg,
                             const WatermarkLayout& layout) {
    layout.validate();
    if (record.dim() != layout.puf_dim) {
        throw LayoutError("enrollment for " + record.chip_id + " is " + std::to_string(record.dim()) +
                          " wide, layout expects " + std::to_string(layout.puf_dim));
    }
    const ChallengeMatrix challenge = challenge_from_image(img, layout.grid_dim, cfg);
    const ResponsePair response = puf_query(record, challenge);
    Watermark wm = assemble(challenge, response, record.fingerprint, layout);
    wm.provenance = Provenance{record.chip_id, image_digest(img)};
    return wm;
}

std::size_t hamming_distance(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b) {
    if (a.size() != b.size()) {
        throw LengthError("bit strings differ in length (" + std::to_string(a.size()) + " vs " +
                          std::to_string(b.size()) + ")");
    }
    std::size_t d = 0;
    for (std::size_t i = 0; i < a.size(); ++i) d += (a[i] != b[i]);
    return d;
}

double hamming_frac(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b) {
    const std::size_t d = hamming_distance(a, b);
    if (a.empty()) throw LengthError("cannot compare empty bit strings");
    return static_cast<double>(d) / static_cast<double>(a.size());
}

std::optional<SourceMatch> identify_source(const Fingerprint& fp, std::span<const EnrollmentRecord> db,
                                           const Thresholds& thresholds) {
    std::optional<SourceMatch> best;
    for (const auto& record : db) {
        if (!record.fingerprint.bits.same_shape(fp.bits)) continue;
        const double d = hamming_frac(fp.bits.data(), record.fingerprint.bits.data());
        if (!best || d < best->distance_frac) best = SourceMatch{record.chip_id, d};
    }
    if (best && best->distance_frac < thresholds.tau_fingerprint) return best;
    return std::nullopt;
}

namespace {

unsigned address_code(Address a) { return (static_cast<unsigned>(a.row) << 4) | a.col; }

}  // namespace

VerifyReport verify(const GrayImage& img, std::span<const EnrollmentRecord> db, const FeatureConfig& cfg,
                    const WatermarkLayout& layout, const Thresholds& thresholds) {
    thresholds.validate();
    const WatermarkBlocks embedded = disassemble(extract_lsb(img, layout));
    const ChallengeMatrix recomputed = challenge_from_image(img, layout.grid_dim, cfg);

    VerifyReport report;
    std::size_t challenge_diff = 0;
    for (std::size_t r = 0; r < layout.grid_dim; ++r) {
        for (std::size_t c = 0; c < layout.grid_dim; ++c) {
            const unsigned x = address_code(embedded.challenge.addrs(r, c)) ^ address_code(recomputed.addrs(r, c));
            if (x != 0) {
                report.tamper_cells.push_back(Cell{r, c});
                challenge_diff += static_cast<std::size_t>(std::popcount(x));
            }
        }
    }
    const auto challenge_bits = layout.challenge_block().size();
    report.challenge_match_frac = 1.0 - static_cast<double>(challenge_diff) / static_cast<double>(challenge_bits);

    report.fingerprint_best_match = identify_source(embedded.fingerprint, db, thresholds);
    if (!report.fingerprint_best_match) {
        report.verdict = Verdict::unknown_source;
        return report;
    }

    const auto& id = report.fingerprint_best_match->chip_id;
    const auto record = std::ranges::find_if(db, [&id](const auto& r) { return r.chip_id == id; });
    const ResponsePair expected = puf_query(*record, recomputed);
    std::size_t response_diff = 0;
    if (layout.response_map != ResponseMap::v)
        response_diff += hamming_distance(embedded.response.r_h.data(), expected.r_h.data());
    if (layout.response_map != ResponseMap::h)
        response_diff += hamming_distance(embedded.response.r_v.data(), expected.r_v.data());
    const auto response_bits = layout.response_block().size();
    report.response_match_frac = 1.0 - static_cast<double>(response_diff) / static_cast<double>(response_bits);

    const bool challenge_ok = report.challenge_match_frac >= 1.0 - thresholds.tau_challenge;
    const bool response_ok = report.response_match_frac >= 1.0 - thresholds.tau_response;
    report.verdict = challenge_ok && response_ok ? Verdict::authentic : Verdict::tampered;
    return report;
}

double sensitivity(double img_change_frac, double wm_change_frac) {
    if (!(img_change_frac > 0.0)) throw UndefinedSensitivityError("sensitivity needs a nonzero image change");
    return wm_change_frac / img_change_frac;
}

double pixel_change_frac(const GrayImage& a, const GrayImage& b) {
    if (!a.pixels().same_shape(b.pixels())) throw ShapeError("images differ in size");
    std::size_t changed = 0;
    for (std::size_t i = 0; i < a.pixel_count(); ++i) changed += (a.data()[i] != b.data()[i]);
    return static_cast<double>(changed) / static_cast<double>(a.pixel_count());
}

GrayImage add_gaussian_noise(const GrayImage& img, double sigma, std::uint64_t seed) {
    if (!(sigma >= 0.0)) throw ParameterError("noise sigma must be >= 0");
    GrayImage out = img;
    if (sigma == 0.0) return out;
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), 0x6e6f6973u};
    std::mt19937_64 rng(seq);
    std::normal_distribution<double> noise(0.0, sigma);
    for (auto& p : out.data()) {
        const double v = std::round(static_cast<double>(p) + noise(rng));
        p = static_cast<std::uint8_t>(std::clamp(v, 0.0, 255.0));
    }
    return out;
}

double psnr(const GrayImage& a, const GrayImage& b) {
    if (!a.pixels().same_shape(b.pixels())) throw ShapeError("images differ in size");
    double sse = 0.0;
    for (std::size_t i = 0; i < a.pixel_count(); ++i) {
        const double d = static_cast<double>(a.data()[i]) - static_cast<double>(b.data()[i]);
        sse += d * d;
    }
    if (sse == 0.0) return std::numeric_limits<double>::infinity();
    const double mse = sse / static_cast<double>(a.pixel_count());
    return 10.0 * std::log10(255.0 * 255.0 / mse);
}

std::vector<SweepPoint> robustness_sweep(const GrayImage& img, const EnrollmentRecord& record,
                                         std::span<const double> sigmas, std::span<const int> overlaps,
                                         std::span<const std::uint64_t> seeds, const WatermarkLayout& layout,
                                         const FeatureConfig& base) {
    if (seeds.empty()) throw ParameterError("robustness sweep needs at least one seed");
    std::vector<FeatureConfig> configs;
    std::vector<BitString> references;
    for (int w : overlaps) {
        FeatureConfig cfg = base;
        cfg.mode = ThresholdMode::dual;
        cfg.overlap = w;
        cfg.validate();
        references.push_back(generate_watermark(img, record, cfg, layout).bits);
        configs.push_back(cfg);
    }

    const auto scored = BitRange{0, layout.response_block().end};
    std::vector<SweepPoint> rows;
    for (double sigma : sigmas) {
        std::vector<double> flips(overlaps.size(), 0.0);
        double psnr_sum = 0.0;
        for (std::uint64_t seed : seeds) {
            const GrayImage noisy = add_gaussian_noise(img, sigma, seed);
            psnr_sum += psnr(img, noisy);
            for (std::size_t k = 0; k < configs.size(); ++k) {
                const BitString bits = generate_watermark(noisy, record, configs[k], layout).bits;
                flips[k] += hamming_frac(std::span(bits).first(scored.size()),
                                         std::span(references[k]).first(scored.size()));
            }
        }
        const double count = static_cast<double>(seeds.size());
        for (std::size_t k = 0; k < configs.size(); ++k) {
            rows.push_back(SweepPoint{sigma, overlaps[k], flips[k] / count, psnr_sum / count});
        }
    }
    return rows;
}

}  // namespace spadwm
