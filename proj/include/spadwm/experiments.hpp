#pragma once

// Marking, verification and the three experiment harnesses behind the CLI.
// Every function writes its artifacts into the given output directory and
// is deterministic in its inputs.

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "spadwm/verifier.hpp"
#include "spadwm/workspace.hpp"

namespace spadwm {

/// Bits laid out row-major, `width` per row; 0 -> black, 1 -> white, padding gray.
GrayImage render_bits(std::span<const std::uint8_t> bits, std::size_t width = 256);
/// White where the two bit strings differ.
GrayImage render_bit_diff(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b,
                          std::size_t width = 256);
/// One pixel per challenge cell, white for tampered cells.
GrayImage render_tamper_map(const VerifyReport& report, std::size_t grid_dim);

struct MarkResult {
    std::filesystem::path marked;
    std::filesystem::path sidecar;
    Watermark watermark;
    double psnr_db = 0.0;
};

MarkResult mark_image(const Workspace& ws, const std::filesystem::path& image, const std::string& chip_id,
                      const std::filesystem::path& out_dir);

struct VerifyResult {
    VerifyReport report;
    std::filesystem::path csv;
    std::filesystem::path tamper_map;
};

VerifyResult verify_image(const Workspace& ws, const std::filesystem::path& image,
                          const std::filesystem::path& out_dir);
std::string verify_csv_header();
std::string verify_csv_row(const std::string& image, const VerifyReport& report);

struct BlockDiff {
    double challenge = 0.0;    // differing C bits / total bits
    double response = 0.0;     // differing R bits / total bits
    double fingerprint = 0.0;  // differing F bits / total bits
    double total() const noexcept { return challenge + response + fingerprint; }
};

BlockDiff block_diff(const Watermark& a, const Watermark& b);

struct SourceIdSummary {
    std::size_t watermarks = 0;
    double mean_cross_chip_diff = 0.0;  // R+F mismatch as a fraction of all bits
    double min_cross_chip_diff = 0.0;
    std::filesystem::path csv;
};

/// Watermarks for every chip x image; checks that same-image watermarks
/// share the C block across chips and same-chip watermarks share F.
SourceIdSummary source_id_experiment(const Workspace& ws, const std::vector<std::filesystem::path>& images,
                                     const std::vector<std::string>& chip_ids, const std::filesystem::path& out_dir);

struct TamperRow {
    std::string original;
    std::string edited;
    double img_change_frac = 0.0;
    double wm_change_frac = 0.0;
    double sensitivity = 0.0;
    BlockDiff diff;
    std::size_t flip_spread = 0;  // max - min flipped bit index
    Verdict verdict = Verdict::unknown_source;
    std::size_t tamper_cells = 0;
};

/// For each (original, edited) pair: watermark change, sensitivity, and the
/// verdict on the marked original carrying the same edit.
std::vector<TamperRow> tamper_experiment(const Workspace& ws,
                                         const std::vector<std::pair<std::filesystem::path, std::filesystem::path>>& pairs,
                                         const std::string& chip_id, const std::filesystem::path& out_dir);

struct RobustnessSummary {
    std::vector<SweepPoint> table;
    bool monotone_in_overlap = false;
    bool monotone_in_sigma = false;
    std::filesystem::path csv;
};

bool flips_nonincreasing_in_overlap(const std::vector<SweepPoint>& table);
bool flips_nondecreasing_in_sigma(const std::vector<SweepPoint>& table);

RobustnessSummary robustness_experiment(const Workspace& ws, const std::filesystem::path& image,
                                        const std::string& chip_id, const std::vector<double>& sigmas,
                                        const std::vector<int>& overlaps, const std::vector<std::uint64_t>& seeds,
                                        const std::filesystem::path& out_dir);

}  // namespace spadwm
