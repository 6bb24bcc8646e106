// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "spadwm/cli.hpp"
#include "spadwm/experiments.hpp"
#include "spadwm/pgm.hpp"
#include "spadwm/verifier.hpp"
#include "spadwm/workspace.hpp"

using namespace spadwm;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = true;
    std::vector<std::string> notes;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            notes.push_back("violated: " + what);
        }
    }
    void note(const std::string& text) { notes.push_back(text); }
};

std::string fmt(double v, int digits = 4) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

fs::path scratch(const std::string& name) {
    const auto dir = fs::temp_directory_path() / "spadwm_acceptance" / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

const WatermarkLayout kLayout{};

// 1. Literal sign recurrence vs band membership, single mode popcount.
Outcome band_equivalence() {
    Outcome o;
    FeatureConfig cfg{};
    cfg.lsb_mask = false;
    GrayImage ramp(256, 1);
    for (int i = 0; i < 256; ++i) ramp(0, static_cast<std::size_t>(i)) = static_cast<std::uint8_t>(i);
    const auto stack = feature_images(ramp, cfg);
    for (int intensity = 0; intensity < 256; ++intensity) {
        const auto literal = oracle::literal_feature_bits(intensity);
        const int band = oracle::band_index(intensity);
        int popcount = 0;
        for (int i = 0; i < 8; ++i) {
            const int expected = (i + 1 == band) ? 1 : 0;
            const int got = stack.planes[static_cast<std::size_t>(i)](0, static_cast<std::size_t>(intensity));
            popcount += got;
            if (literal[static_cast<std::size_t>(i)] != expected || got != expected) {
                o.require(false, "intensity " + std::to_string(intensity) + " plane " + std::to_string(i + 1));
            }
        }
        if (popcount != 1) o.require(false, "popcount at intensity " + std::to_string(intensity));
    }
    o.note("256 intensities checked");
    return o;
}

// 2. verify(embed(generate)) on 3 chips x 3 hosts through PGM files.
Outcome authenticity() {
    Outcome o;
    const auto& db = fixture::enrolled_chips(3);
    const auto dir = scratch("authenticity");
    for (std::size_t c = 0; c < 3; ++c) {
        for (std::size_t i = 0; i < 3; ++i) {
            const auto& host = fixture::scene(i);
            const auto path = dir / ("marked_" + std::to_string(c) + "_" + std::to_string(i) + ".pgm");
            write_pgm(embed_lsb(host, generate_watermark(host, db[c], FeatureConfig{}, kLayout)), path);
            const auto rep = verify(read_pgm(path), db, FeatureConfig{}, kLayout);
            const std::string tag = db[c].chip_id + " x scene" + std::to_string(i);
            o.require(rep.challenge_match_frac == 1.0, tag + " challenge match " + fmt(rep.challenge_match_frac));
            o.require(rep.response_match_frac == 1.0, tag + " response match " + fmt(rep.response_match_frac));
            o.require(rep.verdict == Verdict::authentic, tag + " verdict " + to_string(rep.verdict));
        }
    }
    o.note("9 chip/image pairs");
    return o;
}

// 3. Block structure of cross-chip watermarks, fingerprint uniqueness and reliability.
Outcome source_identification() {
    Outcome o;
    const auto& db = fixture::enrolled_chips(10);
    const auto c_end = kLayout.challenge_block().end;

    double mismatch_sum = 0.0;
    int mismatch_n = 0;
    for (std::size_t i = 0; i < 3; ++i) {
        std::vector<Watermark> wms;
        for (std::size_t c = 0; c < 3; ++c)
            wms.push_back(generate_watermark(fixture::scene(i), db[c], FeatureConfig{}, kLayout));
        for (std::size_t a = 0; a < 3; ++a) {
            for (std::size_t b = a + 1; b < 3; ++b) {
                const std::span<const std::uint8_t> x(wms[a].bits), y(wms[b].bits);
                const auto c_diff = hamming_distance(x.first(c_end), y.first(c_end));
                const auto rf_diff = hamming_distance(x.subspan(c_end), y.subspan(c_end));
                o.require(c_diff == 0, "C block differs across chips");
                o.require(rf_diff > 0, "R+F blocks identical across chips");
                mismatch_sum += static_cast<double>(rf_diff) / static_cast<double>(x.size());
                ++mismatch_n;
            }
        }
    }

    double inter_min = 1.0, inter_max = 0.0, inter_sum = 0.0;
    int pairs = 0;
    for (std::size_t a = 0; a < db.size(); ++a) {
        for (std::size_t b = a + 1; b < db.size(); ++b) {
            const double d = hamming_frac(db[a].fingerprint.bits.data(), db[b].fingerprint.bits.data());
            inter_min = std::min(inter_min, d);
            inter_max = std::max(inter_max, d);
            inter_sum += d;
            ++pairs;
        }
    }
    o.require(pairs >= 10, "at least 10 chip pairs");
    o.require(inter_min >= 0.45 && inter_max <= 0.55, "inter-chip distance in 0.50 +/- 0.05");

    double intra_max = 0.0;
    for (std::size_t c = 0; c < db.size(); ++c) {
        const auto chip = new_chip(db[c].chip_id, c + 1);
        const auto again = enroll(chip, AcquisitionConfig::golden(25.0, 5000 + c));
        intra_max = std::max(intra_max, hamming_frac(db[c].fingerprint.bits.data(), again.fingerprint.bits.data()));
    }
    o.require(intra_max <= 0.02, "intra-chip re-enrollment distance " + fmt(intra_max) + " <= 0.02");

    o.note("inter-chip distance [" + fmt(inter_min) + ", " + fmt(inter_max) + "] over " + std::to_string(pairs) +
           " pairs, mean " + fmt(inter_sum / pairs) + " (xor of iid neighbor comparisons predicts " +
           fmt(oracle::kInterChipFingerprintDistance) + ")");
    o.note("intra-chip max " + fmt(intra_max));
    o.note("mean cross-chip watermark mismatch " + fmt(mismatch_sum / mismatch_n) + " of all bits");
    return o;
}

// 4. rDCM flips between 25 C enrollment and re-derivation at other temperatures.
Outcome temperature_resilience() {
    Outcome o;
    const auto& db = fixture::enrolled_chips(5);
    std::string line = "worst flip fraction per T:";
    for (double t : {0.0, 40.0, 60.0, 80.0}) {
        double worst = 0.0;
        for (std::size_t c = 0; c < db.size(); ++c) {
            const auto chip = new_chip(db[c].chip_id, c + 1);
            const auto hot = enroll(chip, AcquisitionConfig::golden(t, 7000 + c));
            const std::size_t flips = hamming_distance(db[c].rdcm_h.bits.data(), hot.rdcm_h.bits.data()) +
                                      hamming_distance(db[c].rdcm_v.bits.data(), hot.rdcm_v.bits.data());
            worst = std::max(worst, static_cast<double>(flips) / (2.0 * 4096.0));
        }
        o.require(worst <= 0.02, "flips at " + fmt(t, 0) + " C = " + fmt(worst));
        line += " " + fmt(t, 0) + "C=" + fmt(worst);
    }
    o.note(line);
    return o;
}

// 5. A band-crossing edit is flagged, localized, and flips only C+R bits.
Outcome tamper_detection() {
    Outcome o;
    const auto& db = fixture::enrolled_chips(3);
    const auto& host = fixture::scene(1);
    const auto reference = generate_watermark(host, db[0], FeatureConfig{}, kLayout);
    const auto marked = embed_lsb(host, reference);

    const std::size_t r0 = 40, c0 = 20, n = 3;
    const auto edited = fixture::band_shift_patch(marked, r0, c0, n);
    const auto rep = verify(edited, db, FeatureConfig{}, kLayout);
    o.require(rep.verdict == Verdict::tampered, "verdict " + to_string(rep.verdict));
    const std::set<Cell> flagged(rep.tamper_cells.begin(), rep.tamper_cells.end());
    for (std::size_t r = r0; r < r0 + n; ++r)
        for (std::size_t c = c0; c < c0 + n; ++c)
            o.require(flagged.count(Cell{r, c}) == 1, "cell " + std::to_string(r) + "," + std::to_string(c));

    const auto altered = generate_watermark(edited, db[0], FeatureConfig{}, kLayout);
    const auto f = kLayout.fingerprint_block();
    std::size_t lo = reference.bits.size(), hi = 0, f_flips = 0;
    for (std::size_t i = 0; i < reference.bits.size(); ++i) {
        if (reference.bits[i] == altered.bits[i]) continue;
        lo = std::min(lo, i);
        hi = std::max(hi, i);
        if (i >= f.begin) ++f_flips;
    }
    o.require(f_flips == 0, "fingerprint block flipped");
    const std::size_t spread = lo > hi ? 0 : hi - lo;
    const std::size_t first_bit = (r0 * kLayout.grid_dim + c0) * 8;
    const std::size_t last_bit = ((r0 + n - 1) * kLayout.grid_dim + (c0 + n - 1)) * 8 + 7;
    const std::size_t extent = last_bit - first_bit;
    o.require(spread > extent, "flip spread " + std::to_string(spread) + " > patch extent " + std::to_string(extent));

    const double img_change = pixel_change_frac(marked, edited);
    const double wm_change = hamming_frac(reference.bits, altered.bits);
    o.note(std::to_string(flagged.size()) + " cells flagged; S = " + fmt(sensitivity(img_change, wm_change)) +
           " (image " + fmt(img_change) + ", watermark " + fmt(wm_change) + ")");
    o.note("flip spread " + std::to_string(spread) + " bits vs patch extent " + std::to_string(extent));
    return o;
}

// 6. Flip fraction against sigma and overlap.
Outcome robustness() {
    Outcome o;
    const auto& rec = fixture::enrolled_chips(1)[0];
    const std::vector<double> sigmas{2.0, 4.0, 8.0, 16.0};
    const std::vector<int> overlaps{0, 6, 12};
    const std::vector<std::uint64_t> seeds{1, 2, 3};
    std::vector<SweepPoint> table;
    for (std::size_t i = 0; i < 3; ++i) {
        const auto part = robustness_sweep(fixture::scene(i), rec, sigmas, overlaps, seeds, kLayout);
        if (table.empty()) {
            table = part;
        } else {
            for (std::size_t k = 0; k < table.size(); ++k) table[k].bit_flip_frac += part[k].bit_flip_frac;
        }
    }
    for (auto& p : table) p.bit_flip_frac /= 3.0;

    for (double s : sigmas) {
        std::string row = "sigma " + fmt(s, 0) + ":";
        for (const auto& p : table)
            if (p.sigma == s) row += " w" + std::to_string(p.overlap) + "=" + fmt(p.bit_flip_frac);
        o.note(row);
    }
    o.require(flips_nondecreasing_in_sigma(table), "flip fraction non-decreasing in sigma");
    o.require(flips_nonincreasing_in_overlap(table), "flip fraction non-increasing in overlap");
    return o;
}

// 7. Codec round trips and embedding distortion.
Outcome codec_exactness() {
    Outcome o;
    const auto host = oracle::random_image(512, 512, 11);
    double worst_psnr = 1e9;
    for (std::uint64_t seed = 1; seed <= 1000; ++seed) {
        const Watermark wm{oracle::random_bits(kLayout.total_bits(), seed), kLayout, {}};
        const auto marked = embed_lsb(host, wm);
        if (extract_lsb(marked, kLayout).bits != wm.bits) o.require(false, "round trip seed " + std::to_string(seed));
        worst_psnr = std::min(worst_psnr, psnr(host, marked));
    }
    const auto all_ones = embed_lsb(GrayImage(512, 512, 0), Watermark{BitString(kLayout.total_bits(), 1), kLayout, {}});
    worst_psnr = std::min(worst_psnr, psnr(GrayImage(512, 512, 0), all_ones));
    o.require(worst_psnr >= 55.77, "PSNR " + fmt(worst_psnr) + " >= 55.77");

    const auto dir = scratch("codec");
    const auto path = dir / "marked.pgm";
    const auto marked = embed_lsb(fixture::scene(0), Watermark{oracle::random_bits(kLayout.total_bits(), 5), kLayout, {}});
    write_pgm(marked, path);
    const std::string bytes = read_text_file(path);
    o.require(read_pgm(path) == marked, "PGM read back differs");
    o.require(encode_pgm(parse_pgm(bytes)) == bytes, "PGM bytes differ after re-encoding");
    o.note("1000 watermarks; worst PSNR " + fmt(worst_psnr, 2) + " dB");
    return o;
}

std::map<std::string, std::string> tree_contents(const fs::path& root) {
    std::map<std::string, std::string> files;
    for (const auto& entry : fs::recursive_directory_iterator(root)) {
        if (entry.is_regular_file()) files[fs::relative(entry.path(), root).string()] = read_text_file(entry.path());
    }
    return files;
}

std::string run_session(const fs::path& dir, int& failures) {
    std::ostringstream log;
    auto wm = [&](std::vector<std::string> args) {
        std::ostringstream out, err;
        const int code = run_cli(args, out, err);
        std::string text = out.str() + err.str();
        for (std::size_t at; (at = text.find(dir.string())) != std::string::npos;) text.replace(at, dir.string().size(), "<dir>");
        if (code == kExitError) ++failures;
        log << code << " " << text;
    };
    const std::string db = (dir / "db").string();
    const auto p = [&](const std::string& name) { return (dir / name).string(); };
    for (int s = 1; s <= 3; ++s) {
        const std::string id = "chip" + std::to_string(s);
        wm({"chip", "new", id, "--db-dir", db, "--seed", std::to_string(s)});
        wm({"chip", "enroll", id, "--db-dir", db, "--seed", std::to_string(100 + s)});
    }
    for (int s = 1; s <= 2; ++s) wm({"synth", p("img" + std::to_string(s) + ".pgm"), "--seed", std::to_string(s)});
    wm({"mark", p("img1.pgm"), "--chip", "chip2", "--db-dir", db, "--out-dir", p("marked")});
    wm({"verify", p("marked/img1.marked.pgm"), "--db-dir", db});
    write_pgm(fixture::band_shift_patch(read_pgm(p("marked/img1.marked.pgm")), 30, 30, 2), p("marked/edit.pgm"));
    wm({"verify", p("marked/edit.pgm"), "--db-dir", db});
    wm({"experiment", "source-id", "--db-dir", db, "--chips", "chip1,chip2,chip3", "--images",
        p("img1.pgm") + "," + p("img2.pgm"), "--out-dir", p("sid")});
    write_pgm(fixture::band_shift_patch(read_pgm(p("img2.pgm")), 10, 10, 3), p("img2_edit.pgm"));
    wm({"experiment", "tamper", "--db-dir", db, "--chip", "chip1", "--original", p("img2.pgm"), "--edited",
        p("img2_edit.pgm"), "--out-dir", p("tamper")});
    wm({"experiment", "robustness", "--db-dir", db, "--chip", "chip3", "--image", p("img1.pgm"), "--sigmas", "2,8",
        "--overlaps", "0,12", "--seeds", "2", "--seed", "9", "--out-dir", p("rob")});
    return log.str();
}

// 8. Identical commands produce identical artifacts.
Outcome determinism() {
    Outcome o;
    const auto a = scratch("determinism_a");
    const auto b = scratch("determinism_b");
    int failures = 0;
    const std::string log_a = run_session(a, failures);
    const std::string log_b = run_session(b, failures);
    o.require(log_a == log_b, "console output differs between runs");
    const auto files_a = tree_contents(a);
    const auto files_b = tree_contents(b);
    o.require(files_a.size() == files_b.size(), "artifact sets differ");
    for (const auto& [name, bytes] : files_a) {
        const auto it = files_b.find(name);
        o.require(it != files_b.end() && it->second == bytes, name + " differs");
    }
    o.require(failures == 0, std::to_string(failures) + " commands failed");
    o.note(std::to_string(files_a.size()) + " artifacts compared byte for byte");
    return o;
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"1 band equivalence", band_equivalence},
        {"2 end-to-end authenticity", authenticity},
        {"3 source identification", source_identification},
        {"4 temperature resilience", temperature_resilience},
        {"5 tamper detection", tamper_detection},
        {"6 robustness monotonicity", robustness},
        {"7 codec exactness", codec_exactness},
        {"8 determinism", determinism},
    };
    int failed = 0;
    for (const auto& [name, check] : criteria) {
        Outcome o;
        try {
            o = check();
        } catch (const std::exception& e) {
            o.require(false, std::string("exception: ") + e.what());
        }
        std::printf("%s: %s\n", o.pass ? "PASS" : "FAIL", name.c_str());
        for (const auto& n : o.notes) std::printf("    %s\n", n.c_str());
        std::fflush(stdout);
        failed += o.pass ? 0 : 1;
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
