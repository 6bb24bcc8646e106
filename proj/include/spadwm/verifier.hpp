#pragma once

// Watermark generation, source identification, tamper detection and the
// metrics used by the experiments.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "spadwm/feature_extract.hpp"
#include "spadwm/image.hpp"
#include "spadwm/puf_core.hpp"
#include "spadwm/watermark_codec.hpp"

namespace spadwm {

enum class Verdict { authentic, tampered, unknown_source };

std::string to_string(Verdict v);

struct Thresholds {
    double tau_fingerprint = 0.25;
    double tau_challenge = 0.0;
    double tau_response = 0.05;

    void validate() const;
};

struct SourceMatch {
    std::string chip_id;
    double distance_frac = 0.0;
};

struct Cell {
    std::size_t row = 0;
    std::size_t col = 0;

    friend auto operator<=>(const Cell&, const Cell&) = default;
};

struct VerifyReport {
    double challenge_match_frac = 0.0;
    double response_match_frac = 0.0;
    std::optional<SourceMatch> fingerprint_best_match;
    Verdict verdict = Verdict::unknown_source;
    std::vector<Cell> tamper_cells;  // row-major order
};

/// downsample -> feature images -> challenge -> PUF query -> assemble.
Watermark generate_watermark(const GrayImage& img, const EnrollmentRecord& record, const FeatureConfig& cfg,
                             const WatermarkLayout& layout);

/// Closest enrolled fingerprint by fractional Hamming distance, if it is
/// below tau_fingerprint.
std::optional<SourceMatch> identify_source(const Fingerprint& fp, std::span<const EnrollmentRecord> db,
                                           const Thresholds& thresholds);

VerifyReport verify(const GrayImage& img, std::span<const EnrollmentRecord> db, const FeatureConfig& cfg,
                    const WatermarkLayout& layout, const Thresholds& thresholds = {});

/// Percent watermark change per percent image change.
double sensitivity(double img_change_frac, double wm_change_frac);

double hamming_frac(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b);
std::size_t hamming_distance(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b);

/// Fraction of pixels that differ between two equally sized images.
double pixel_change_frac(const GrayImage& a, const GrayImage& b);

GrayImage add_gaussian_noise(const GrayImage& img, double sigma, std::uint64_t seed);

/// 10*log10(255^2 / MSE); +infinity when the images are identical.
double psnr(const GrayImage& a, const GrayImage& b);

struct SweepPoint {
    double sigma = 0.0;
    int overlap = 0;
    double bit_flip_frac = 0.0;  // mean over seeds, challenge + response bits only
    double psnr_db = 0.0;        // mean over seeds
};

/// Flip fraction of the noisy-image watermark against the clean reference
/// for every (sigma, overlap) pair, dual-threshold features throughout.
/// Rows are ordered by sigma, then overlap, as given.
std::vector<SweepPoint> robustness_sweep(const GrayImage& img, const EnrollmentRecord& record,
                                         std::span<const double> sigmas, std::span<const int> overlaps,
                                         std::span<const std::uint64_t> seeds, const WatermarkLayout& layout,
                                         const FeatureConfig& base = {});

}  // namespace spadwm
