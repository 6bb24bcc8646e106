#pragma once

// Watermark bit layout, LSB-plane embedding and the hex sidecar format.
//
// Layout, in serialization order:
//   C    D*D cells, row-major, 8 bits each: row nibble then column nibble, MSB first
//   R_H  D*D bits, row-major (omitted when the response map is `v`)
//   R_V  D*D bits, row-major (omitted when the response map is `h`)
//   F    P*P bits, row-major

#include <cstdint>
#include <filesystem>
#include <string>
#include <tuple>

#include "spadwm/feature_extract.hpp"
#include "spadwm/image.hpp"
#include "spadwm/puf_core.hpp"

namespace spadwm {

struct BitRange {
    std::size_t begin = 0;
    std::size_t end = 0;

    std::size_t size() const noexcept { return end - begin; }
    bool contains(std::size_t i) const noexcept { return i >= begin && i < end; }
};

struct WatermarkLayout {
    std::size_t grid_dim = 64;   // D
    std::size_t puf_dim = 64;    // P
    std::size_t levels = kAddressLevels;
    ResponseMap response_map = ResponseMap::both;

    std::size_t cells() const noexcept { return grid_dim * grid_dim; }
    std::size_t response_blocks() const noexcept { return response_map == ResponseMap::both ? 2 : 1; }
    std::size_t total_bits() const noexcept {
        return cells() * levels + response_blocks() * cells() + puf_dim * puf_dim;
    }

    BitRange challenge_block() const noexcept { return {0, cells() * levels}; }
    /// Both response blocks together.
    BitRange response_block() const noexcept {
        const auto c = challenge_block().end;
        return {c, c + response_blocks() * cells()};
    }
    BitRange fingerprint_block() const noexcept {
        const auto r = response_block().end;
        return {r, r + puf_dim * puf_dim};
    }

    void validate() const;

    friend bool operator==(const WatermarkLayout&, const WatermarkLayout&) = default;
};

struct Provenance {
    std::string chip_id;
    std::uint64_t image_digest = 0;
};

struct Watermark {
    BitString bits;
    WatermarkLayout layout;
    Provenance provenance;  // metadata only, never embedded
};

struct WatermarkBlocks {
    ChallengeMatrix challenge;
    ResponsePair response;  // the map excluded by the layout is left empty
    Fingerprint fingerprint;
};

Watermark assemble(const ChallengeMatrix& challenge, const ResponsePair& response, const Fingerprint& fp,
                   const WatermarkLayout& layout);
WatermarkBlocks disassemble(const Watermark& wm);

/// Replaces the LSB of the first total_bits pixels (row-major) with the
/// watermark. Remaining pixels are untouched.
GrayImage embed_lsb(const GrayImage& host, const Watermark& wm);
Watermark extract_lsb(const GrayImage& img, const WatermarkLayout& layout);

/// FNV-1a over the pixel bytes, with the dimensions mixed in.
std::uint64_t image_digest(const GrayImage& img);

// Sidecar: header line `wm v1 D=<D> P=<P> L=<L>` (plus ` resp=h|v` when a
// single response map is used), then the bits as hex, 128 digits per line.
std::string sidecar_text(const Watermark& wm);
Watermark parse_sidecar(const std::string& text);
void write_sidecar(const Watermark& wm, const std::filesystem::path& path);
Watermark read_sidecar(const std::filesystem::path& path);

std::string to_string(ResponseMap map);
ResponseMap parse_response_map(std::string_view text);

}  // namespace spadwm
