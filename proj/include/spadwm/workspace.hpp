#pragma once

// Flat-file chip and enrollment store. The enrollment directory plays the
// part of the trusted verifier database: verification only ever loads
// `.enroll.json` records, never chip ground truth.

#include <filesystem>
#include <string>
#include <vector>

#include "spadwm/feature_extract.hpp"
#include "spadwm/imager_sim.hpp"
#include "spadwm/puf_core.hpp"
#include "spadwm/verifier.hpp"
#include "spadwm/watermark_codec.hpp"

namespace spadwm {

struct WorkspaceConfig {
    std::filesystem::path db_dir = ".";
    FeatureConfig features;
    WatermarkLayout layout;
    AcquisitionConfig acquisition = AcquisitionConfig::golden();
    Thresholds thresholds;
    std::uint64_t rng_seed = 1;

    void validate() const;
};

class Workspace {
public:
    /// Creates db_dir when missing.
    explicit Workspace(WorkspaceConfig config);

    const WorkspaceConfig& config() const noexcept { return config_; }
    const std::filesystem::path& db_dir() const noexcept { return config_.db_dir; }

    /// Fails with WorkspaceError when the chip id is already taken.
    ChipModel create_chip(const std::string& chip_id, std::uint64_t seed, const ChipParams& params);
    ChipModel load_chip(const std::string& chip_id) const;

    /// Acquires, derives the PUF bits and (over)writes the enrollment record.
    EnrollmentRecord enroll_chip(const std::string& chip_id, const AcquisitionConfig& cfg);
    EnrollmentRecord load_enrollment(const std::string& chip_id) const;

    /// Every enrollment record in the directory, sorted by chip id.
    std::vector<EnrollmentRecord> load_database() const;

    /// Layout for watermarks made against this database's PUF size.
    WatermarkLayout layout_for(std::size_t puf_dim) const;

private:
    WorkspaceConfig config_;
};

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace spadwm
