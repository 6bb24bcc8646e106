#pragma once

// Relative dark count maps, the XOR fingerprint, enrollment and the
// challenge -> response lookup.

#include <filesystem>
#include <string>
#include <vector>

#include "spadwm/feature_extract.hpp"
#include "spadwm/imager_sim.hpp"
#include "spadwm/matrix.hpp"

namespace spadwm {

enum class Direction { horizontal, vertical };

/// Which relative maps feed the response block.
enum class ResponseMap { h, v, both };

struct RelativeDCM {
    BitMatrix bits;
    Direction direction = Direction::horizontal;
    std::string chip_id;
};

struct Fingerprint {
    BitMatrix bits;
    std::string chip_id;
};

struct EnrollmentRecord {
    std::string chip_id;
    RelativeDCM rdcm_h;
    RelativeDCM rdcm_v;
    Fingerprint fingerprint;
    AcquisitionConfig enrollment_cfg;

    std::size_t dim() const noexcept { return rdcm_h.bits.rows(); }
};

struct ResponsePair {
    BitMatrix r_h;
    BitMatrix r_v;

    friend bool operator==(const ResponsePair&, const ResponsePair&) = default;
};

/// bit(r,c) = 1 iff counts(r,c) exceeds its right (horizontal) or lower
/// (vertical) neighbor, wrapping at the array edge. Ties give 0.
RelativeDCM rdcm(const DarkCountMap& dcm, Direction direction);

/// Same comparison on a bare count matrix.
BitMatrix relative_bits(const CountMatrix& counts, Direction direction);

Fingerprint fingerprint(const RelativeDCM& h, const RelativeDCM& v);

EnrollmentRecord enroll(const ChipModel& chip, const AcquisitionConfig& cfg);

/// Reads both relative maps at every challenge address.
ResponsePair puf_query(const EnrollmentRecord& record, const ChallengeMatrix& challenge);

// Enrollment database: `<chip_id>.enroll.json` per chip, bit matrices as
// row-major hex strings, most significant bit first in each digit.
std::string enrollment_to_json(const EnrollmentRecord& record);
EnrollmentRecord enrollment_from_json(const std::string& text);
std::filesystem::path enrollment_file_name(const std::string& chip_id);

std::string bits_to_hex(std::span<const std::uint8_t> bits);
/// Decodes exactly n_bits; whitespace is ignored, trailing pad bits must be 0.
BitString hex_to_bits(std::string_view hex, std::size_t n_bits);

}  // namespace spadwm
