#include "spadwm/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>

#include "spadwm/pgm.hpp"

namespace spadwm {

namespace fs = std::filesystem;

namespace {

std::string fixed(double v, int digits = 6) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

fs::path ensure_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) throw IoError("cannot create output directory " + dir.string());
    return dir;
}

std::size_t flip_spread(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b) {
    std::size_t lo = a.size(), hi = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] != b[i]) {
            lo = std::min(lo, i);
            hi = std::max(hi, i);
        }
    }
    return lo > hi ? 0 : hi - lo;
}

WatermarkLayout database_layout(const Workspace& ws, const std::vector<EnrollmentRecord>& db) {
    if (db.empty()) return ws.layout_for(ws.config().layout.puf_dim);
    const std::size_t dim = db.front().dim();
    for (const auto& r : db) {
        if (r.dim() != dim) throw WorkspaceError("enrollment database mixes PUF sizes");
    }
    return ws.layout_for(dim);
}

}  // namespace

GrayImage render_bits(std::span<const std::uint8_t> bits, std::size_t width) {
    const std::size_t height = std::max<std::size_t>(1, (bits.size() + width - 1) / width);
    GrayImage img(width, height, 128);
    for (std::size_t i = 0; i < bits.size(); ++i) img.data()[i] = bits[i] ? 255 : 0;
    return img;
}

GrayImage render_bit_diff(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b, std::size_t width) {
    if (a.size() != b.size()) throw LengthError("bit strings differ in length");
    BitString diff(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) diff[i] = a[i] != b[i];
    return render_bits(diff, width);
}

GrayImage render_tamper_map(const VerifyReport& report, std::size_t grid_dim) {
    GrayImage img(grid_dim, grid_dim, 0);
    for (const Cell& c : report.tamper_cells) img(c.row, c.col) = 255;
    return img;
}

MarkResult mark_image(const Workspace& ws, const fs::path& image, const std::string& chip_id, const fs::path& out_dir) {
    const GrayImage host = read_pgm(image);
    const EnrollmentRecord record = ws.load_enrollment(chip_id);
    const WatermarkLayout layout = ws.layout_for(record.dim());
    if (host.pixel_count() < layout.total_bits()) {
        throw CapacityError(image.string() + " has " + std::to_string(host.pixel_count()) +
                            " pixels, the watermark needs " + std::to_string(layout.total_bits()));
    }
    Watermark wm = generate_watermark(host, record, ws.config().features, layout);
    const GrayImage marked = embed_lsb(host, wm);

    ensure_dir(out_dir);
    const std::string stem = image.stem().string();
    MarkResult result{out_dir / (stem + ".marked.pgm"), out_dir / (stem + ".wm.txt"), std::move(wm), 0.0};
    write_pgm(marked, result.marked);
    write_sidecar(result.watermark, result.sidecar);
    result.psnr_db = psnr(host, marked);
    return result;
}

std::string verify_csv_header() {
    return "image,verdict,challenge_match_frac,response_match_frac,chip_id,fingerprint_distance,tamper_cells\n";
}

std::string verify_csv_row(const std::string& image, const VerifyReport& report) {
    const auto& m = report.fingerprint_best_match;
    return image + "," + to_string(report.verdict) + "," + fixed(report.challenge_match_frac) + "," +
           fixed(report.response_match_frac) + "," + (m ? m->chip_id : "") + "," + (m ? fixed(m->distance_frac) : "") +
           "," + std::to_string(report.tamper_cells.size()) + "\n";
}

VerifyResult verify_image(const Workspace& ws, const fs::path& image, const fs::path& out_dir) {
    const GrayImage img = read_pgm(image);
    const auto db = ws.load_database();
    const WatermarkLayout layout = database_layout(ws, db);
    VerifyReport report = verify(img, db, ws.config().features, layout, ws.config().thresholds);

    ensure_dir(out_dir);
    const std::string stem = image.stem().string();
    VerifyResult result{std::move(report), out_dir / (stem + ".verify.csv"), out_dir / (stem + ".tamper.pgm")};
    write_text_file(result.csv, verify_csv_header() + verify_csv_row(image.filename().string(), result.report));
    write_pgm(render_tamper_map(result.report, layout.grid_dim), result.tamper_map);
    return result;
}

BlockDiff block_diff(const Watermark& a, const Watermark& b) {
    if (!(a.layout == b.layout)) throw LayoutError("watermarks use different layouts");
    const auto& l = a.layout;
    const double total = static_cast<double>(l.total_bits());
    auto count = [&](BitRange range) {
        return static_cast<double>(hamming_distance(std::span(a.bits).subspan(range.begin, range.size()),
                                                    std::span(b.bits).subspan(range.begin, range.size()))) /
               total;
    };
    return BlockDiff{count(l.challenge_block()), count(l.response_block()), count(l.fingerprint_block())};
}

SourceIdSummary source_id_experiment(const Workspace& ws, const std::vector<fs::path>& images,
                                     const std::vector<std::string>& chip_ids, const fs::path& out_dir) {
    if (chip_ids.size() < 3) throw WorkspaceError("source identification needs at least 3 enrolled chips");
    if (images.empty()) throw WorkspaceError("source identification needs at least one image");

    std::vector<EnrollmentRecord> records;
    for (const auto& id : chip_ids) records.push_back(ws.load_enrollment(id));
    const WatermarkLayout layout = database_layout(ws, records);
    std::vector<GrayImage> hosts;
    for (const auto& p : images) hosts.push_back(read_pgm(p));

    ensure_dir(out_dir);
    // wms[chip][image]
    std::vector<std::vector<Watermark>> wms(records.size());
    for (std::size_t c = 0; c < records.size(); ++c) {
        for (std::size_t i = 0; i < hosts.size(); ++i) {
            wms[c].push_back(generate_watermark(hosts[i], records[c], ws.config().features, layout));
            write_pgm(render_bits(wms[c][i].bits),
                      out_dir / ("wm_" + chip_ids[c] + "_" + images[i].stem().string() + ".pgm"));
        }
    }

    SourceIdSummary summary;
    summary.watermarks = records.size() * hosts.size();
    summary.min_cross_chip_diff = 1.0;
    std::string csv = "kind,image_a,image_b,chip_a,chip_b,c_diff_frac,r_diff_frac,f_diff_frac,total_diff_frac\n";
    auto emit = [&](const char* kind, std::size_t ia, std::size_t ib, std::size_t ca, std::size_t cb,
                    const BlockDiff& d) {
        csv += std::string(kind) + "," + images[ia].stem().string() + "," + images[ib].stem().string() + "," +
               chip_ids[ca] + "," + chip_ids[cb] + "," + fixed(d.challenge) + "," + fixed(d.response) + "," +
               fixed(d.fingerprint) + "," + fixed(d.total()) + "\n";
    };

    std::size_t cross_pairs = 0;
    double cross_sum = 0.0;
    for (std::size_t i = 0; i < hosts.size(); ++i) {
        for (std::size_t a = 0; a < records.size(); ++a) {
            for (std::size_t b = a + 1; b < records.size(); ++b) {
                const BlockDiff d = block_diff(wms[a][i], wms[b][i]);
                if (d.challenge != 0.0) {
                    throw ConsistencyError("challenge blocks differ across chips for " + images[i].string());
                }
                emit("cross-chip", i, i, a, b, d);
                write_pgm(render_bit_diff(wms[a][i].bits, wms[b][i].bits),
                          out_dir / ("diff_" + chip_ids[a] + "_" + chip_ids[b] + "_" + images[i].stem().string() +
                                     ".pgm"));
                cross_sum += d.total();
                summary.min_cross_chip_diff = std::min(summary.min_cross_chip_diff, d.total());
                ++cross_pairs;
            }
        }
    }
    for (std::size_t c = 0; c < records.size(); ++c) {
        for (std::size_t i = 0; i < hosts.size(); ++i) {
            for (std::size_t j = i + 1; j < hosts.size(); ++j) {
                const BlockDiff d = block_diff(wms[c][i], wms[c][j]);
                if (d.fingerprint != 0.0) {
                    throw ConsistencyError("fingerprint blocks differ across images for chip " + chip_ids[c]);
                }
                emit("cross-image", i, j, c, c, d);
            }
        }
    }
    summary.mean_cross_chip_diff = cross_sum / static_cast<double>(cross_pairs);
    summary.csv = out_dir / "source_id.csv";
    write_text_file(summary.csv, csv);
    return summary;
}

std::vector<TamperRow> tamper_experiment(const Workspace& ws, const std::vector<std::pair<fs::path, fs::path>>& pairs,
                                         const std::string& chip_id, const fs::path& out_dir) {
    if (pairs.empty()) throw WorkspaceError("tamper experiment needs at least one original/edited pair");
    const EnrollmentRecord record = ws.load_enrollment(chip_id);
    const auto db = ws.load_database();
    const WatermarkLayout layout = ws.layout_for(record.dim());
    const auto& features = ws.config().features;
    ensure_dir(out_dir);

    std::vector<TamperRow> rows;
    std::string csv =
        "original,edited,img_change_frac,wm_change_frac,sensitivity,c_diff_frac,r_diff_frac,f_diff_frac,"
        "flip_spread,verdict,tamper_cells\n";
    for (std::size_t k = 0; k < pairs.size(); ++k) {
        const GrayImage original = read_pgm(pairs[k].first);
        const GrayImage edited = read_pgm(pairs[k].second);
        if (!original.pixels().same_shape(edited.pixels())) {
            throw ShapeError("edited image differs in size from " + pairs[k].first.string());
        }
        const Watermark ref = generate_watermark(original, record, features, layout);
        const Watermark alt = generate_watermark(edited, record, features, layout);

        TamperRow row;
        row.original = pairs[k].first.filename().string();
        row.edited = pairs[k].second.filename().string();
        row.img_change_frac = pixel_change_frac(original, edited);
        row.wm_change_frac = hamming_frac(ref.bits, alt.bits);
        row.sensitivity = row.img_change_frac > 0.0 ? sensitivity(row.img_change_frac, row.wm_change_frac) : 0.0;
        row.diff = block_diff(ref, alt);
        row.flip_spread = flip_spread(ref.bits, alt.bits);

        // Carry the edit onto the marked original, as an adversary would.
        GrayImage tampered = embed_lsb(original, ref);
        for (std::size_t i = 0; i < original.pixel_count(); ++i) {
            if (original.data()[i] != edited.data()[i]) tampered.data()[i] = edited.data()[i];
        }
        const VerifyReport report = verify(tampered, db, features, layout, ws.config().thresholds);
        row.verdict = report.verdict;
        row.tamper_cells = report.tamper_cells.size();

        const std::string tag = "tamper_" + std::to_string(k + 1);
        write_pgm(render_bit_diff(ref.bits, alt.bits), out_dir / (tag + "_wmdiff.pgm"));
        write_pgm(render_tamper_map(report, layout.grid_dim), out_dir / (tag + "_cells.pgm"));
        csv += row.original + "," + row.edited + "," + fixed(row.img_change_frac) + "," + fixed(row.wm_change_frac) +
               "," + fixed(row.sensitivity) + "," + fixed(row.diff.challenge) + "," + fixed(row.diff.response) + "," +
               fixed(row.diff.fingerprint) + "," + std::to_string(row.flip_spread) + "," + to_string(row.verdict) +
               "," + std::to_string(row.tamper_cells) + "\n";
        rows.push_back(std::move(row));
    }
    write_text_file(out_dir / "tamper.csv", csv);
    return rows;
}

bool flips_nonincreasing_in_overlap(const std::vector<SweepPoint>& table) {
    std::map<double, std::map<int, double>> by_sigma;
    for (const auto& p : table) by_sigma[p.sigma][p.overlap] = p.bit_flip_frac;
    for (const auto& [sigma, row] : by_sigma) {
        double prev = 2.0;
        for (const auto& [overlap, flips] : row) {
            if (flips > prev) return false;
            prev = flips;
        }
    }
    return true;
}

bool flips_nondecreasing_in_sigma(const std::vector<SweepPoint>& table) {
    std::map<int, std::map<double, double>> by_overlap;
    for (const auto& p : table) by_overlap[p.overlap][p.sigma] = p.bit_flip_frac;
    for (const auto& [overlap, row] : by_overlap) {
        double prev = -1.0;
        for (const auto& [sigma, flips] : row) {
            if (flips < prev) return false;
            prev = flips;
        }
    }
    return true;
}

RobustnessSummary robustness_experiment(const Workspace& ws, const fs::path& image, const std::string& chip_id,
                                        const std::vector<double>& sigmas, const std::vector<int>& overlaps,
                                        const std::vector<std::uint64_t>& seeds, const fs::path& out_dir) {
    if (sigmas.empty() || overlaps.empty()) throw WorkspaceError("robustness sweep needs sigmas and overlaps");
    const GrayImage img = read_pgm(image);
    const EnrollmentRecord record = ws.load_enrollment(chip_id);
    const WatermarkLayout layout = ws.layout_for(record.dim());

    RobustnessSummary summary;
    summary.table = robustness_sweep(img, record, sigmas, overlaps, seeds, layout, ws.config().features);
    summary.monotone_in_overlap = flips_nonincreasing_in_overlap(summary.table);
    summary.monotone_in_sigma = flips_nondecreasing_in_sigma(summary.table);

    ensure_dir(out_dir);
    std::string csv = "sigma,overlap,psnr_db,bit_flip_frac\n";
    for (const auto& p : summary.table) {
        csv += fixed(p.sigma, 3) + "," + std::to_string(p.overlap) + "," + fixed(p.psnr_db, 3) + "," +
               fixed(p.bit_flip_frac) + "\n";
    }
    summary.csv = out_dir / "robustness.csv";
    write_text_file(summary.csv, csv);
    return summary;
}

}  // namespace spadwm
