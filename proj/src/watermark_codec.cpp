#include "spadwm/watermark_codec.hpp"

#include <fstream>
#include <iterator>
#include <sstream>

namespace spadwm {

void WatermarkLayout::validate() const {
    if (grid_dim == 0) throw LayoutError("grid dimension must be positive");
    if (puf_dim < 2) throw LayoutError("PUF dimension must be >= 2");
    if (levels != kAddressLevels) throw LayoutError("layout requires 8 feature images");
}

std::string to_string(ResponseMap map) {
    switch (map) {
        case ResponseMap::h: return "h";
        case ResponseMap::v: return "v";
        case ResponseMap::both: return "both";
    }
    return "both";
}

ResponseMap parse_response_map(std::string_view text) {
    if (text == "h") return ResponseMap::h;
    if (text == "v") return ResponseMap::v;
    if (text == "both") return ResponseMap::both;
    throw ParameterError("response map must be h, v or both");
}

Watermark assemble(const ChallengeMatrix& challenge, const ResponsePair& response, const Fingerprint& fp,
                   const WatermarkLayout& layout) {
    layout.validate();
    const std::size_t D = layout.grid_dim;
    const std::size_t P = layout.puf_dim;
    if (challenge.addrs.rows() != D || challenge.addrs.cols() != D) {
        throw LayoutError("challenge matrix is not " + std::to_string(D) + "x" + std::to_string(D));
    }
    const bool use_h = layout.response_map != ResponseMap::v;
    const bool use_v = layout.response_map != ResponseMap::h;
    if ((use_h && (response.r_h.rows() != D || response.r_h.cols() != D)) ||
        (use_v && (response.r_v.rows() != D || response.r_v.cols() != D))) {
        throw LayoutError("response block does not match the challenge grid");
    }
    if (fp.bits.rows() != P || fp.bits.cols() != P) {
        throw LayoutError("fingerprint is not " + std::to_string(P) + "x" + std::to_string(P));
    }

    Watermark wm{{}, layout, {fp.chip_id, 0}};
    wm.bits.reserve(layout.total_bits());
    for (const Address a : challenge.addrs.data()) {
        for (int k = 3; k >= 0; --k) wm.bits.push_back(static_cast<std::uint8_t>((a.row >> k) & 1u));
        for (int k = 3; k >= 0; --k) wm.bits.push_back(static_cast<std::uint8_t>((a.col >> k) & 1u));
    }
    if (use_h) wm.bits.insert(wm.bits.end(), response.r_h.data().begin(), response.r_h.data().end());
    if (use_v) wm.bits.insert(wm.bits.end(), response.r_v.data().begin(), response.r_v.data().end());
    wm.bits.insert(wm.bits.end(), fp.bits.data().begin(), fp.bits.data().end());
    return wm;
}

WatermarkBlocks disassemble(const Watermark& wm) {
    const auto& layout = wm.layout;
    layout.validate();
    if (wm.bits.size() != layout.total_bits()) {
        throw LayoutError("watermark holds " + std::to_string(wm.bits.size()) + " bits, layout needs " +
                          std::to_string(layout.total_bits()));
    }
    const std::size_t D = layout.grid_dim;
    const std::size_t P = layout.puf_dim;
    WatermarkBlocks out{ChallengeMatrix{Matrix<Address>(D, D)}, {}, Fingerprint{BitMatrix(P, P), wm.provenance.chip_id}};

    auto it = wm.bits.begin();
    for (Address& a : out.challenge.addrs.data()) {
        unsigned row = 0;
        unsigned col = 0;
        for (int k = 0; k < 4; ++k) row = (row << 1) | *it++;
        for (int k = 0; k < 4; ++k) col = (col << 1) | *it++;
        a = Address{static_cast<std::uint8_t>(row), static_cast<std::uint8_t>(col)};
    }
    auto take = [&it](BitMatrix& m) {
        std::copy(it, it + static_cast<std::ptrdiff_t>(m.size()), m.data().begin());
        it += static_cast<std::ptrdiff_t>(m.size());
    };
    if (layout.response_map != ResponseMap::v) {
        out.response.r_h = BitMatrix(D, D);
        take(out.response.r_h);
    }
    if (layout.response_map != ResponseMap::h) {
        out.response.r_v = BitMatrix(D, D);
        take(out.response.r_v);
    }
    take(out.fingerprint.bits);
    return out;
}

GrayImage embed_lsb(const GrayImage& host, const Watermark& wm) {
    if (host.pixel_count() < wm.bits.size()) {
        throw CapacityError("host has " + std::to_string(host.pixel_count()) + " pixels, watermark needs " +
                            std::to_string(wm.bits.size()));
    }
    GrayImage out = host;
    auto px = out.data();
    for (std::size_t i = 0; i < wm.bits.size(); ++i) {
        px[i] = static_cast<std::uint8_t>((px[i] & 0xFEu) | (wm.bits[i] & 1u));
    }
    return out;
}

Watermark extract_lsb(const GrayImage& img, const WatermarkLayout& layout) {
    layout.validate();
    const std::size_t n = layout.total_bits();
    if (img.pixel_count() < n) {
        throw CapacityError("image has " + std::to_string(img.pixel_count()) + " pixels, layout needs " +
                            std::to_string(n));
    }
    Watermark wm{BitString(n), layout, {"", image_digest(img)}};
    const auto px = img.data();
    for (std::size_t i = 0; i < n; ++i) wm.bits[i] = px[i] & 1u;
    return wm;
}

std::uint64_t image_digest(const GrayImage& img) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    auto mix = [&h](std::uint8_t byte) {
        h ^= byte;
        h *= 0x100000001b3ULL;
    };
    for (std::uint64_t dim : {static_cast<std::uint64_t>(img.width()), static_cast<std::uint64_t>(img.height())}) {
        for (int k = 0; k < 8; ++k) mix(static_cast<std::uint8_t>(dim >> (8 * k)));
    }
    for (std::uint8_t p : img.data()) mix(p);
    return h;
}

std::string sidecar_text(const Watermark& wm) {
    const auto& l = wm.layout;
    std::string out = "wm v1 D=" + std::to_string(l.grid_dim) + " P=" + std::to_string(l.puf_dim) +
                      " L=" + std::to_string(l.levels);
    if (l.response_map != ResponseMap::both) out += " resp=" + to_string(l.response_map);
    out += "\n";
    const std::string hex = bits_to_hex(wm.bits);
    for (std::size_t i = 0; i < hex.size(); i += 128) {
        out.append(hex, i, 128);
        out += "\n";
    }
    return out;
}

Watermark parse_sidecar(const std::string& text) {
    const auto eol = text.find('\n');
    if (eol == std::string::npos) throw ParseError("sidecar has no header line", text.size());
    std::istringstream header(text.substr(0, eol));
    std::string magic;
    std::string version;
    header >> magic >> version;
    if (magic != "wm" || version != "v1") throw ParseError("sidecar header must start with 'wm v1'", 0);

    WatermarkLayout layout;
    bool have_d = false, have_p = false, have_l = false;
    for (std::string field; header >> field;) {
        const auto eq = field.find('=');
        if (eq == std::string::npos) throw ParseError("malformed sidecar field '" + field + "'", 0);
        const std::string key = field.substr(0, eq);
        const std::string value = field.substr(eq + 1);
        try {
            if (key == "D") layout.grid_dim = std::stoul(value), have_d = true;
            else if (key == "P") layout.puf_dim = std::stoul(value), have_p = true;
            else if (key == "L") layout.levels = std::stoul(value), have_l = true;
            else if (key == "resp") layout.response_map = parse_response_map(value);
            else throw ParseError("unknown sidecar field '" + key + "'", 0);
        } catch (const std::logic_error&) {
            throw ParseError("bad value in sidecar field '" + field + "'", 0);
        } catch (const ParameterError&) {
            throw ParseError("bad value in sidecar field '" + field + "'", 0);
        }
    }
    if (!have_d || !have_p || !have_l) throw ParseError("sidecar header needs D, P and L", 0);
    try {
        layout.validate();
    } catch (const LayoutError& e) {
        throw ParseError(e.what(), 0);
    }
    Watermark wm{hex_to_bits(std::string_view(text).substr(eol + 1), layout.total_bits()), layout, {}};
    return wm;
}

void write_sidecar(const Watermark& wm, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + path.string());
    out << sidecar_text(wm);
    if (!out) throw IoError("write failed for " + path.string());
}

Watermark read_sidecar(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    return parse_sidecar(std::string{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()});
}

}  // namespace spadwm
