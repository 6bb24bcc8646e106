#include "spadwm/workspace.hpp"

#include <algorithm>
#include <fstream>
#include <iterator>

namespace spadwm {

namespace fs = std::filesystem;

void WorkspaceConfig::validate() const {
    if (db_dir.empty()) throw ParameterError("database directory must be set");
    features.validate();
    acquisition.validate();
    thresholds.validate();
}

std::string read_text_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_text_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + path.string());
    out << text;
    if (!out) throw IoError("write failed for " + path.string());
}

Workspace::Workspace(WorkspaceConfig config) : config_(std::move(config)) {
    config_.validate();
    std::error_code ec;
    fs::create_directories(config_.db_dir, ec);
    if (ec || !fs::is_directory(config_.db_dir)) {
        throw WorkspaceError("cannot use database directory " + config_.db_dir.string());
    }
}

ChipModel Workspace::create_chip(const std::string& chip_id, std::uint64_t seed, const ChipParams& params) {
    if (chip_id.empty() || chip_id.find_first_of("/\\") != std::string::npos) {
        throw WorkspaceError("invalid chip id '" + chip_id + "'");
    }
    const fs::path path = db_dir() / chip_file_name(chip_id);
    if (fs::exists(path)) throw WorkspaceError("chip '" + chip_id + "' already exists");
    ChipModel chip = new_chip(chip_id, seed, params);
    write_text_file(path, chip_to_json(chip));
    return chip;
}

ChipModel Workspace::load_chip(const std::string& chip_id) const {
    const fs::path path = db_dir() / chip_file_name(chip_id);
    if (!fs::exists(path)) throw WorkspaceError("no chip '" + chip_id + "' in " + db_dir().string());
    return chip_from_json(read_text_file(path));
}

EnrollmentRecord Workspace::enroll_chip(const std::string& chip_id, const AcquisitionConfig& cfg) {
    const ChipModel chip = load_chip(chip_id);
    EnrollmentRecord record = enroll(chip, cfg);
    write_text_file(db_dir() / enrollment_file_name(chip_id), enrollment_to_json(record));
    return record;
}

EnrollmentRecord Workspace::load_enrollment(const std::string& chip_id) const {
    const fs::path path = db_dir() / enrollment_file_name(chip_id);
    if (!fs::exists(path)) throw WorkspaceError("chip '" + chip_id + "' is not enrolled");
    return enrollment_from_json(read_text_file(path));
}

std::vector<EnrollmentRecord> Workspace::load_database() const {
    static constexpr std::string_view suffix = ".enroll.json";
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(db_dir())) {
        const std::string name = entry.path().filename().string();
        if (entry.is_regular_file() && name.size() > suffix.size() && name.ends_with(suffix)) {
            files.push_back(entry.path());
        }
    }
    std::ranges::sort(files);
    std::vector<EnrollmentRecord> db;
    db.reserve(files.size());
    for (const auto& f : files) db.push_back(enrollment_from_json(read_text_file(f)));
    return db;
}

WatermarkLayout Workspace::layout_for(std::size_t puf_dim) const {
    WatermarkLayout layout = config_.layout;
    layout.puf_dim = puf_dim;
    if (layout.grid_dim == 0) layout.grid_dim = puf_dim;
    return layout;
}

}  // namespace spadwm
