#include "spadwm/puf_core.hpp"

#include <algorithm>
#include <cctype>

#include "json_io.hpp"

namespace spadwm {

BitMatrix relative_bits(const CountMatrix& counts, Direction direction) {
    if (!counts.is_square()) throw ShapeError("dark count map must be square");
    const std::size_t n = counts.rows();
    if (n < 2) throw ShapeError("dark count map side must be >= 2");
    BitMatrix bits(n, n, 0);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c) {
            const auto neighbor = direction == Direction::horizontal ? counts(r, (c + 1) % n)
                                                                     : counts((r + 1) % n, c);
            bits(r, c) = counts(r, c) > neighbor ? 1 : 0;
        }
    }
    return bits;
}

RelativeDCM rdcm(const DarkCountMap& dcm, Direction direction) {
    return RelativeDCM{relative_bits(dcm.counts, direction), direction, dcm.chip_id};
}

Fingerprint fingerprint(const RelativeDCM& h, const RelativeDCM& v) {
    if (h.chip_id != v.chip_id) throw ConsistencyError("relative maps come from different chips");
    if (!h.bits.same_shape(v.bits)) throw ConsistencyError("relative maps differ in shape");
    Fingerprint fp{BitMatrix(h.bits.rows(), h.bits.cols()), h.chip_id};
    std::ranges::transform(h.bits.data(), v.bits.data(), fp.bits.data().begin(),
                           [](std::uint8_t a, std::uint8_t b) { return static_cast<std::uint8_t>(a ^ b); });
    return fp;
}

EnrollmentRecord enroll(const ChipModel& chip, const AcquisitionConfig& cfg) {
    const DarkCountMap dcm = acquire_dcm(chip, cfg);
    auto h = rdcm(dcm, Direction::horizontal);
    auto v = rdcm(dcm, Direction::vertical);
    auto fp = fingerprint(h, v);
    return EnrollmentRecord{chip.chip_id, std::move(h), std::move(v), std::move(fp), cfg};
}

ResponsePair puf_query(const EnrollmentRecord& record, const ChallengeMatrix& challenge) {
    const std::size_t n = record.dim();
    const auto& addrs = challenge.addrs;
    ResponsePair out{BitMatrix(addrs.rows(), addrs.cols()), BitMatrix(addrs.rows(), addrs.cols())};
    for (std::size_t i = 0; i < addrs.rows(); ++i) {
        for (std::size_t j = 0; j < addrs.cols(); ++j) {
            const Address a = addrs(i, j);
            if (a.row >= n || a.col >= n) {
                throw AddressError("challenge address (" + std::to_string(a.row) + "," + std::to_string(a.col) +
                                   ") outside the " + std::to_string(n) + "x" + std::to_string(n) + " PUF array");
            }
            out.r_h(i, j) = record.rdcm_h.bits(a.row, a.col);
            out.r_v(i, j) = record.rdcm_v.bits(a.row, a.col);
        }
    }
    return out;
}

std::string bits_to_hex(std::span<const std::uint8_t> bits) {
    static constexpr char digits[] = "0123456789abcdef";
    std::string out;
    out.reserve((bits.size() + 3) / 4);
    for (std::size_t i = 0; i < bits.size(); i += 4) {
        unsigned nibble = 0;
        for (std::size_t k = 0; k < 4; ++k) {
            nibble <<= 1;
            if (i + k < bits.size()) nibble |= bits[i + k] & 1u;
        }
        out.push_back(digits[nibble]);
    }
    return out;
}

BitString hex_to_bits(std::string_view hex, std::size_t n_bits) {
    BitString bits;
    bits.reserve(n_bits + 3);
    for (std::size_t pos = 0; pos < hex.size(); ++pos) {
        const char ch = hex[pos];
        if (std::isspace(static_cast<unsigned char>(ch))) continue;
        int value;
        if (ch >= '0' && ch <= '9') value = ch - '0';
        else if (ch >= 'a' && ch <= 'f') value = ch - 'a' + 10;
        else if (ch >= 'A' && ch <= 'F') value = ch - 'A' + 10;
        else throw ParseError(std::string("invalid hex digit '") + ch + "'", pos);
        for (int k = 3; k >= 0; --k) bits.push_back(static_cast<std::uint8_t>((value >> k) & 1));
    }
    if (bits.size() < n_bits || bits.size() >= n_bits + 4) {
        throw ParseError("hex payload holds " + std::to_string(bits.size()) + " bits, expected " +
                             std::to_string(n_bits),
                         hex.size());
    }
    if (std::any_of(bits.begin() + static_cast<std::ptrdiff_t>(n_bits), bits.end(), [](auto b) { return b != 0; })) {
        throw ParseError("nonzero padding bits in hex payload", hex.size());
    }
    bits.resize(n_bits);
    return bits;
}

namespace {

BitMatrix matrix_from_hex(const std::string& hex, std::size_t n) {
    BitMatrix m(n, n);
    const BitString bits = hex_to_bits(hex, n * n);
    std::ranges::copy(bits, m.data().begin());
    return m;
}

}  // namespace

std::string enrollment_to_json(const EnrollmentRecord& record) {
    nlohmann::json j{{"chip_id", record.chip_id},
                     {"array_dim", record.dim()},
                     {"bit_order", "row-major, msb-first per hex digit"},
                     {"rdcm_h", bits_to_hex(record.rdcm_h.bits.data())},
                     {"rdcm_v", bits_to_hex(record.rdcm_v.bits.data())},
                     {"fingerprint", bits_to_hex(record.fingerprint.bits.data())},
                     {"acquisition", record.enrollment_cfg}};
    return j.dump(2) + "\n";
}

EnrollmentRecord enrollment_from_json(const std::string& text) {
    try {
        const auto j = nlohmann::json::parse(text);
        const auto id = j.at("chip_id").get<std::string>();
        const auto n = j.at("array_dim").get<std::size_t>();
        if (n < 2) throw ParseError("array_dim must be >= 2", 0);
        RelativeDCM h{matrix_from_hex(j.at("rdcm_h").get<std::string>(), n), Direction::horizontal, id};
        RelativeDCM v{matrix_from_hex(j.at("rdcm_v").get<std::string>(), n), Direction::vertical, id};
        Fingerprint fp{matrix_from_hex(j.at("fingerprint").get<std::string>(), n), id};
        if (fp.bits != fingerprint(h, v).bits) {
            throw ConsistencyError("enrollment fingerprint does not match its relative maps");
        }
        return EnrollmentRecord{id, std::move(h), std::move(v), std::move(fp),
                                j.at("acquisition").get<AcquisitionConfig>()};
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("invalid enrollment record: ") + e.what(), e.byte);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("invalid enrollment record: ") + e.what(), 0);
    }
}

std::filesystem::path enrollment_file_name(const std::string& chip_id) {
    return chip_id + ".enroll.json";
}

}  // namespace spadwm
