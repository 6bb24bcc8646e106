#include "spadwm/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <numeric>

#include "spadwm/experiments.hpp"
#include "spadwm/pgm.hpp"
#include "spadwm/synth.hpp"

namespace spadwm {

namespace fs = std::filesystem;

namespace {

std::string fmt_frac(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

struct GlobalOptions {
    std::string db_dir = ".";
    std::uint64_t seed = 1;
    int overlap = 0;
    std::string mode;  // empty: single unless overlap > 0
    std::size_t grid_dim = 0;  // 0: match the PUF size
    std::string response_map = "both";
    double tau_fingerprint = Thresholds{}.tau_fingerprint;
    double tau_challenge = Thresholds{}.tau_challenge;
    double tau_response = Thresholds{}.tau_response;

    WorkspaceConfig workspace() const {
        WorkspaceConfig cfg;
        cfg.db_dir = db_dir;
        cfg.rng_seed = seed;
        cfg.features.overlap = overlap;
        if (mode == "dual" || (mode.empty() && overlap > 0)) cfg.features.mode = ThresholdMode::dual;
        else if (mode.empty() || mode == "single") cfg.features.mode = ThresholdMode::single;
        else throw ParameterError("mode must be single or dual");
        cfg.layout.grid_dim = grid_dim;
        cfg.layout.response_map = parse_response_map(response_map);
        cfg.thresholds = Thresholds{tau_fingerprint, tau_challenge, tau_response};
        cfg.acquisition = AcquisitionConfig::golden(25.0, seed);
        return cfg;
    }
};

struct ChipNewOptions {
    std::string chip_id;
    ChipParams params;
};

struct EnrollOptions {
    std::string chip_id;
    std::optional<double> temperature;
    double exposure = AcquisitionConfig::golden().exposure;
    std::uint32_t frames = AcquisitionConfig::golden().n_frames;
};

struct MarkOptions {
    std::string image;
    std::string chip_id;
    std::string out_dir;
};

struct VerifyOptions {
    std::string image;
    std::string out_dir;
};

struct ExperimentOptions {
    std::string out_dir;
    std::vector<std::string> chips;
    std::vector<std::string> images;
    std::string chip;
    std::vector<std::string> originals;
    std::vector<std::string> edited;
    std::string image;
    std::vector<double> sigmas{2.0, 4.0, 8.0, 16.0};
    std::vector<int> overlaps{0, 6, 12};
    std::size_t n_seeds = 3;
};

struct SynthOptions {
    std::string output;
    std::size_t width = 512;
    std::size_t height = 512;
};

fs::path out_dir_or(const std::string& requested, const fs::path& fallback) {
    if (!requested.empty()) return requested;
    return fallback.empty() ? fs::path(".") : fallback;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Dark-count PUF watermarking toolkit for simulated SPAD imagers", "wm"};
    app.fallthrough();
    app.require_subcommand(1);

    GlobalOptions g;
    app.add_option("--db-dir", g.db_dir, "Chip and enrollment database directory")->capture_default_str();
    app.add_option("--seed", g.seed, "Chip seed, acquisition seed or first noise seed")->capture_default_str();
    app.add_option("--overlap", g.overlap, "Dual-threshold overlap width (intensity units)")->capture_default_str();
    app.add_option("--mode", g.mode, "Feature thresholding: single or dual")->check(CLI::IsMember({"single", "dual"}));
    app.add_option("--grid-dim", g.grid_dim, "Challenge grid side (default: PUF array side)");
    app.add_option("--response-map", g.response_map, "Relative maps in the response block")
        ->check(CLI::IsMember({"h", "v", "both"}))
        ->capture_default_str();
    app.add_option("--tau-fingerprint", g.tau_fingerprint)->capture_default_str();
    app.add_option("--tau-challenge", g.tau_challenge)->capture_default_str();
    app.add_option("--tau-response", g.tau_response)->capture_default_str();

    auto* chip = app.add_subcommand("chip", "Create and enroll simulated chips");
    chip->require_subcommand(1);

    ChipNewOptions chip_new;
    auto* chip_new_cmd = chip->add_subcommand("new", "Create a chip record (<id>.chip.json)");
    chip_new_cmd->add_option("chip_id", chip_new.chip_id)->required();
    chip_new_cmd->add_option("--array-dim", chip_new.params.array_dim)->capture_default_str();
    chip_new_cmd->add_option("--dcr-median", chip_new.params.dcr_median)->capture_default_str();
    chip_new_cmd->add_option("--dcr-sigma", chip_new.params.dcr_sigma)->capture_default_str();
    chip_new_cmd->add_option("--doubling-temp", chip_new.params.doubling_temp_mean)->capture_default_str();
    chip_new_cmd->add_option("--doubling-jitter", chip_new.params.doubling_temp_jitter)->capture_default_str();
    chip_new_cmd->add_option("--ref-temp", chip_new.params.ref_temp)->capture_default_str();

    EnrollOptions enroll_opts;
    auto* enroll_cmd = chip->add_subcommand("enroll", "Acquire and store a chip's PUF (<id>.enroll.json)");
    enroll_cmd->add_option("chip_id", enroll_opts.chip_id)->required();
    enroll_cmd->add_option("--temperature", enroll_opts.temperature, "degC (default: chip reference)");
    enroll_cmd->add_option("--exposure", enroll_opts.exposure, "seconds per frame")->capture_default_str();
    enroll_cmd->add_option("--frames", enroll_opts.frames)->capture_default_str();

    MarkOptions mark_opts;
    auto* mark_cmd = app.add_subcommand("mark", "Watermark a PGM image with an enrolled chip");
    mark_cmd->add_option("image", mark_opts.image)->required();
    mark_cmd->add_option("--chip", mark_opts.chip_id)->required();
    mark_cmd->add_option("--out-dir", mark_opts.out_dir, "default: next to the image");

    VerifyOptions verify_opts;
    auto* verify_cmd = app.add_subcommand("verify", "Verify a marked PGM image against the database");
    verify_cmd->add_option("image", verify_opts.image)->required();
    verify_cmd->add_option("--out-dir", verify_opts.out_dir, "default: next to the image");

    auto* experiment = app.add_subcommand("experiment", "Source-id, tamper and robustness experiments");
    experiment->require_subcommand(1);
    ExperimentOptions ex;

    auto* source_cmd = experiment->add_subcommand("source-id", "Watermark differences across chips and images");
    source_cmd->add_option("--chips", ex.chips)->required()->delimiter(',');
    source_cmd->add_option("--images", ex.images)->required()->delimiter(',');
    source_cmd->add_option("--out-dir", ex.out_dir)->default_str("wm-source-id");

    auto* tamper_cmd = experiment->add_subcommand("tamper", "Watermark change and sensitivity for edited images");
    tamper_cmd->add_option("--chip", ex.chip)->required();
    tamper_cmd->add_option("--original", ex.originals)->required();
    tamper_cmd->add_option("--edited", ex.edited)->required();
    tamper_cmd->add_option("--out-dir", ex.out_dir)->default_str("wm-tamper");

    auto* robust_cmd = experiment->add_subcommand("robustness", "Bit flips under Gaussian noise vs overlap");
    robust_cmd->add_option("--image", ex.image)->required();
    robust_cmd->add_option("--chip", ex.chip)->required();
    robust_cmd->add_option("--sigmas", ex.sigmas)->delimiter(',')->capture_default_str();
    robust_cmd->add_option("--overlaps", ex.overlaps)->delimiter(',')->capture_default_str();
    robust_cmd->add_option("--seeds", ex.n_seeds, "Noise realizations per point")->capture_default_str();
    robust_cmd->add_option("--out-dir", ex.out_dir)->default_str("wm-robustness");

    SynthOptions synth_opts;
    auto* synth_cmd = app.add_subcommand("synth", "Write a synthetic test scene as PGM");
    synth_cmd->add_option("output", synth_opts.output)->required();
    synth_cmd->add_option("--width", synth_opts.width)->capture_default_str();
    synth_cmd->add_option("--height", synth_opts.height)->capture_default_str();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : kExitError;
    }

    try {
        Workspace ws(g.workspace());

        if (chip_new_cmd->parsed()) {
            const ChipModel chip_model = ws.create_chip(chip_new.chip_id, g.seed, chip_new.params);
            out << "created " << (ws.db_dir() / chip_file_name(chip_model.chip_id)).string() << "\n";
            return 0;
        }
        if (enroll_cmd->parsed()) {
            const ChipModel chip_model = ws.load_chip(enroll_opts.chip_id);
            const AcquisitionConfig acq{enroll_opts.temperature.value_or(chip_model.params.ref_temp),
                                        enroll_opts.exposure, enroll_opts.frames, g.seed};
            const EnrollmentRecord record = ws.enroll_chip(enroll_opts.chip_id, acq);
            out << "enrolled " << record.chip_id << " (" << record.dim() << "x" << record.dim() << ") -> "
                << (ws.db_dir() / enrollment_file_name(record.chip_id)).string() << "\n";
            return 0;
        }
        if (mark_cmd->parsed()) {
            const fs::path image = mark_opts.image;
            const MarkResult r = mark_image(ws, image, mark_opts.chip_id, out_dir_or(mark_opts.out_dir, image.parent_path()));
            out << "marked " << r.marked.string() << " (" << r.watermark.bits.size() << " bits, PSNR "
                << fmt_frac(r.psnr_db) << " dB)\n"
                << "sidecar " << r.sidecar.string() << "\n";
            return 0;
        }
        if (verify_cmd->parsed()) {
            const fs::path image = verify_opts.image;
            const VerifyResult r = verify_image(ws, image, out_dir_or(verify_opts.out_dir, image.parent_path()));
            const auto& rep = r.report;
            out << "verdict: " << to_string(rep.verdict) << "\n"
                << "challenge match: " << fmt_frac(rep.challenge_match_frac) << "\n"
                << "response match: " << fmt_frac(rep.response_match_frac) << "\n";
            if (rep.fingerprint_best_match) {
                out << "source: " << rep.fingerprint_best_match->chip_id << " (fingerprint distance "
                    << fmt_frac(rep.fingerprint_best_match->distance_frac) << ")\n";
            } else {
                out << "source: none in database\n";
            }
            out << "tampered cells: " << rep.tamper_cells.size() << "\n"
                << verify_csv_row(image.filename().string(), rep);
            switch (rep.verdict) {
                case Verdict::authentic: return kExitAuthentic;
                case Verdict::tampered: return kExitTampered;
                case Verdict::unknown_source: return kExitUnknownSource;
            }
        }
        if (source_cmd->parsed()) {
            std::vector<fs::path> images(ex.images.begin(), ex.images.end());
            const SourceIdSummary s =
                source_id_experiment(ws, images, ex.chips, out_dir_or(ex.out_dir, "wm-source-id"));
            out << s.watermarks << " watermarks; challenge blocks identical across chips for every image\n"
                << "mean cross-chip R+F mismatch: " << fmt_frac(s.mean_cross_chip_diff) << " of all bits\n"
                << "report " << s.csv.string() << "\n";
            return 0;
        }
        if (tamper_cmd->parsed()) {
            if (ex.originals.size() != ex.edited.size()) {
                throw ParameterError("--original and --edited must be given the same number of times");
            }
            std::vector<std::pair<fs::path, fs::path>> pairs;
            for (std::size_t i = 0; i < ex.originals.size(); ++i) pairs.emplace_back(ex.originals[i], ex.edited[i]);
            const fs::path dir = out_dir_or(ex.out_dir, "wm-tamper");
            for (const auto& row : tamper_experiment(ws, pairs, ex.chip, dir)) {
                out << row.edited << ": image change " << fmt_frac(row.img_change_frac) << ", watermark change "
                    << fmt_frac(row.wm_change_frac) << ", S = " << fmt_frac(row.sensitivity) << ", verdict "
                    << to_string(row.verdict) << " (" << row.tamper_cells << " cells)\n";
            }
            out << "report " << (dir / "tamper.csv").string() << "\n";
            return 0;
        }
        if (robust_cmd->parsed()) {
            std::vector<std::uint64_t> seeds(ex.n_seeds);
            std::iota(seeds.begin(), seeds.end(), g.seed);
            const RobustnessSummary s = robustness_experiment(ws, ex.image, ex.chip, ex.sigmas, ex.overlaps, seeds,
                                                              out_dir_or(ex.out_dir, "wm-robustness"));
            for (const auto& p : s.table) {
                out << "sigma " << p.sigma << " overlap " << p.overlap << ": flips " << fmt_frac(p.bit_flip_frac)
                    << "\n";
            }
            out << "non-increasing in overlap: " << (s.monotone_in_overlap ? "yes" : "no") << "\n"
                << "non-decreasing in sigma: " << (s.monotone_in_sigma ? "yes" : "no") << "\n"
                << "report " << s.csv.string() << "\n";
            return 0;
        }
        if (synth_cmd->parsed()) {
            write_pgm(synthetic_scene(synth_opts.width, synth_opts.height, g.seed), synth_opts.output);
            out << "wrote " << synth_opts.output << "\n";
            return 0;
        }
    } catch (const std::exception& e) {
        err << "wm: " << e.what() << "\n";
        return kExitError;
    }
    return kExitError;
}

}  // namespace spadwm
