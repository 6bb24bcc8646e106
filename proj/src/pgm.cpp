#include "spadwm/pgm.hpp"

#include <cctype>
#include <fstream>
#include <iterator>
#include <limits>

namespace spadwm {

namespace {

class HeaderReader {
public:
    HeaderReader(std::string_view bytes, std::size_t start) : bytes_(bytes), pos_(start) {}

    std::size_t offset() const noexcept { return pos_; }

    void skip_space_and_comments() {
        while (pos_ < bytes_.size()) {
            const char ch = bytes_[pos_];
            if (ch == '#') {
                while (pos_ < bytes_.size() && bytes_[pos_] != '\n' && bytes_[pos_] != '\r') ++pos_;
            } else if (std::isspace(static_cast<unsigned char>(ch))) {
                ++pos_;
            } else {
                return;
            }
        }
    }

    std::size_t read_uint(const char* field) {
        skip_space_and_comments();
        const std::size_t start = pos_;
        std::size_t value = 0;
        while (pos_ < bytes_.size() && std::isdigit(static_cast<unsigned char>(bytes_[pos_]))) {
            const std::size_t digit = static_cast<std::size_t>(bytes_[pos_] - '0');
            if (value > (std::numeric_limits<std::size_t>::max() - digit) / 10) {
                throw ParseError(std::string("PGM ") + field + " overflows", start);
            }
            value = value * 10 + digit;
            ++pos_;
        }
        if (pos_ == start) {
            if (pos_ >= bytes_.size()) throw ParseError(std::string("PGM header truncated before ") + field, pos_);
            throw ParseError(std::string("expected PGM ") + field, pos_);
        }
        return value;
    }

    // Exactly one whitespace byte separates maxval from the raster.
    void expect_single_space() {
        if (pos_ >= bytes_.size() || !std::isspace(static_cast<unsigned char>(bytes_[pos_]))) {
            throw ParseError("expected whitespace after PGM maxval", pos_);
        }
        ++pos_;
    }

private:
    std::string_view bytes_;
    std::size_t pos_;
};

}  // namespace

GrayImage parse_pgm(std::string_view bytes) {
    if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != '5') {
        throw ParseError("not a binary PGM (missing P5 magic)", 0);
    }
    HeaderReader header(bytes, 2);
    const std::size_t width = header.read_uint("width");
    const std::size_t height = header.read_uint("height");
    header.skip_space_and_comments();
    const std::size_t maxval_at = header.offset();
    const std::size_t maxval = header.read_uint("maxval");
    if (width == 0 || height == 0) throw ParseError("PGM dimensions must be nonzero", 2);
    if (maxval != 255) {
        throw UnsupportedDepthError("unsupported PGM maxval " + std::to_string(maxval) + " (only 255)", maxval_at);
    }
    header.expect_single_space();

    const std::size_t raster = header.offset();
    if (height > std::numeric_limits<std::size_t>::max() / width) throw ParseError("PGM dimensions overflow", 2);
    const std::size_t needed = width * height;
    if (bytes.size() - raster < needed) {
        throw ParseError("PGM payload truncated: " + std::to_string(bytes.size() - raster) + " of " +
                             std::to_string(needed) + " bytes",
                         bytes.size());
    }
    GrayImage img(width, height);
    const auto* src = reinterpret_cast<const std::uint8_t*>(bytes.data() + raster);
    std::copy(src, src + needed, img.data().begin());
    return img;
}

std::string encode_pgm(const GrayImage& img) {
    std::string out = "P5\n" + std::to_string(img.width()) + " " + std::to_string(img.height()) + "\n255\n";
    const auto px = img.data();
    out.append(reinterpret_cast<const char*>(px.data()), px.size());
    return out;
}

GrayImage read_pgm(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    const std::string bytes{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    return parse_pgm(bytes);
}

void write_pgm(const GrayImage& img, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + path.string());
    const std::string bytes = encode_pgm(img);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace spadwm
