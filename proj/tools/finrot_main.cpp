// finrot: unitary rotation of pixellated images on finite oscillator screens.
//
// Subcommands: rotate, kernel, pattern, analyze, selftest.
// Exit codes: 0 success, 2 usage, 3 I/O, 4 file format, 5 numerical
// consistency.

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "finrot/analysis.hpp"
#include "finrot/image.hpp"
#include "finrot/image_io.hpp"
#include "finrot/oscillator.hpp"
#include "finrot/parallel.hpp"
#include "finrot/polar_basis.hpp"
#include "finrot/rotation_kernel.hpp"

namespace fs = std::filesystem;
using namespace finrot;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;
constexpr int kExitFormat = 4;
constexpr int kExitConsistency = 5;

/// Everything one invocation needs; populated by the CLI layer.
struct RunConfig {
    fs::path input;
    fs::path output;
    fs::path raw_csv;
    std::string angle_text = "0";
    std::string mode = "normalize-joint";
    fs::path cache_dir;
    bool no_cache = false;
    unsigned threads = 0;
};

/// Angle grammar: exact pi fractions ("pi", "pi/8", "3pi/4", "-pi/2", "2pi"),
/// degrees with a deg suffix ("45deg"), plain or rad-suffixed radians
/// ("0.785", "1.2rad"). Pi fractions evaluate as k*pi/d in double arithmetic
/// so angles like pi/8 are reproducible without decimal rounding.
double parse_angle(const std::string& text) {
    std::string s;
    for (char c : text) {
        if (!std::isspace(static_cast<unsigned char>(c))) s += static_cast<char>(std::tolower(c));
    }
    if (s.empty()) throw DomainError("empty angle");

    double sign = 1.0;
    std::size_t pos = 0;
    if (s[pos] == '+' || s[pos] == '-') {
        sign = s[pos] == '-' ? -1.0 : 1.0;
        ++pos;
    }
    const auto pi_at = s.find("pi", pos);
    if (pi_at != std::string::npos) {
        double num = 1.0;
        if (pi_at > pos) {
            const std::string head = s.substr(pos, pi_at - pos);
            std::size_t used = 0;
            try {
                num = std::stod(head, &used);
            } catch (const std::exception&) {
                throw DomainError("bad angle syntax: '" + text + "'");
            }
            if (used != head.size()) throw DomainError("bad angle syntax: '" + text + "'");
        }
        double den = 1.0;
        const std::size_t rest = pi_at + 2;
        if (rest < s.size()) {
            if (s[rest] != '/') throw DomainError("bad angle syntax: '" + text + "'");
            const std::string tail = s.substr(rest + 1);
            std::size_t used = 0;
            try {
                den = std::stod(tail, &used);
            } catch (const std::exception&) {
                throw DomainError("bad angle syntax: '" + text + "'");
            }
            if (used != tail.size() || den == 0.0) {
                throw DomainError("bad angle syntax: '" + text + "'");
            }
        }
        return sign * num * M_PI / den;
    }

    std::string body = s.substr(pos);
    double unit = 1.0;
    if (body.size() > 3 && body.compare(body.size() - 3, 3, "deg") == 0) {
        unit = M_PI / 180.0;
        body = body.substr(0, body.size() - 3);
    } else if (body.size() > 3 && body.compare(body.size() - 3, 3, "rad") == 0) {
        body = body.substr(0, body.size() - 3);
    }
    std::size_t used = 0;
    double value = 0.0;
    try {
        value = std::stod(body, &used);
    } catch (const std::exception&) {
        throw DomainError("bad angle syntax: '" + text + "'");
    }
    if (used != body.size()) throw DomainError("bad angle syntax: '" + text + "'");
    return sign * value * unit;
}

/// Half-integer spin from "3", "2.5", or "5/2".
int parse_two_j(const std::string& text) {
    const auto slash = text.find('/');
    double j = 0.0;
    try {
        if (slash != std::string::npos) {
            j = std::stod(text.substr(0, slash)) / std::stod(text.substr(slash + 1));
        } else {
            j = std::stod(text);
        }
    } catch (const std::exception&) {
        throw DomainError("bad spin label: '" + text + "'");
    }
    const double two_j = 2.0 * j;
    if (two_j < 0 || std::abs(two_j - std::lround(two_j)) > 1e-9) {
        throw DomainError("spin label must be a non-negative integer or half-integer");
    }
    return static_cast<int>(std::lround(two_j));
}

fs::path default_cache_dir() {
    if (const char* env = std::getenv("FINROT_CACHE_DIR")) return fs::path(env);
    if (const char* home = std::getenv("HOME")) return fs::path(home) / ".cache" / "finrot";
    return fs::path(".finrot-cache");
}

fs::path resolve_cache_dir(const RunConfig& cfg) {
    return cfg.cache_dir.empty() ? default_cache_dir() : cfg.cache_dir;
}

std::unique_ptr<KernelProvider> make_provider(const RunConfig& cfg) {
    if (cfg.no_cache) return std::make_unique<DirectKernelProvider>(cfg.threads);
    return std::make_unique<CachingKernelProvider>(resolve_cache_dir(cfg), cfg.threads);
}

fs::path derived_output(const fs::path& input, const char* tag, const char* forced_ext) {
    fs::path out = input;
    const std::string ext = forced_ext ? std::string(forced_ext) : out.extension().string();
    out.replace_extension();
    out += tag;
    out += ext;
    return out;
}

// ---------------------------------------------------------------------------
// rotate
// ---------------------------------------------------------------------------

int run_rotate(const RunConfig& cfg) {
    const double theta = parse_angle(cfg.angle_text);
    if (cfg.mode != "normalize-joint" && cfg.mode != "normalize-per-channel" &&
        cfg.mode != "clip" && cfg.mode != "raw") {
        throw DomainError("unknown display mode: " + cfg.mode);
    }

    fs::path out = cfg.output;
    if (out.empty()) {
        out = derived_output(cfg.input, "-rot", cfg.mode == "raw" ? ".csv" : nullptr);
    }
    if (cfg.mode == "raw" && out.extension() != ".csv") {
        throw DomainError("raw mode writes full-precision data; use a .csv output path");
    }

    const AnyImage input = read_image(cfg.input);
    auto provider = make_provider(cfg);

    const auto t0 = std::chrono::steady_clock::now();
    AnyImage data = std::holds_alternative<MonoImage>(input)
                        ? AnyImage(rotate_mono(std::get<MonoImage>(input), theta, *provider,
                                               cfg.threads))
                        : AnyImage(rotate_rgb(std::get<RgbImage>(input), theta, *provider,
                                              cfg.threads));
    const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - t0;

    if (!cfg.raw_csv.empty()) {
        write_image(cfg.raw_csv, data);
        std::printf("raw data-image written to %s\n", cfg.raw_csv.string().c_str());
    }

    ImageMetadata meta{cfg.mode, std::nullopt};
    if (cfg.mode == "raw") {
        write_image(out, data);
    } else if (std::holds_alternative<MonoImage>(data)) {
        const auto& mono = std::get<MonoImage>(data);
        if (cfg.mode == "clip") {
            write_image(out, AnyImage(clip_mono(mono)), &meta);
        } else {
            auto [screen, st] = normalize_mono(mono);
            meta.stats = st;
            std::printf("normalize: data extrema s=%.12g S=%.12g\n", st.s, st.S);
            write_image(out, AnyImage(std::move(screen)), &meta);
        }
    } else {
        const auto& rgb = std::get<RgbImage>(data);
        if (cfg.mode == "clip") {
            write_image(out,
                        AnyImage(RgbImage(clip_mono(rgb.r()), clip_mono(rgb.g()),
                                          clip_mono(rgb.b()))),
                        &meta);
        } else if (cfg.mode == "normalize-joint") {
            auto [screen, st] = normalize_rgb_joint(rgb);
            meta.stats = st;
            std::printf("normalize-joint: data extrema s=%.12g S=%.12g (one map, all channels)\n",
                        st.s, st.S);
            write_image(out, AnyImage(std::move(screen)), &meta);
        } else {
            auto [screen, sts] = normalize_rgb_per_channel(rgb);
            std::printf("normalize-per-channel: R s=%.12g S=%.12g | G s=%.12g S=%.12g | "
                        "B s=%.12g S=%.12g\n",
                        sts[0].s, sts[0].S, sts[1].s, sts[1].S, sts[2].s, sts[2].S);
            write_image(out, AnyImage(std::move(screen)), &meta);
        }
    }

    std::printf("rotated %s by %.17g rad (mode %s) in %.3f s -> %s\n",
                cfg.input.string().c_str(), theta, cfg.mode.c_str(), elapsed.count(),
                out.string().c_str());
    return kExitOk;
}

// ---------------------------------------------------------------------------
// kernel
// ---------------------------------------------------------------------------

int run_kernel(const RunConfig& cfg, int n_side) {
    const double theta = parse_angle(cfg.angle_text);
    const OscillatorRep rep = OscillatorRep::from_size(n_side);
    const unsigned threads = effective_threads(cfg.threads);

    const auto t0 = std::chrono::steady_clock::now();
    const WavefunctionTable table(rep);
    const RotationKernel kernel = build_kernel_cartesian(rep, theta, table, cfg.threads);
    const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - t0;

    fs::path out = cfg.output;
    if (out.empty()) {
        const fs::path dir = resolve_cache_dir(cfg);
        std::error_code ec;
        fs::create_directories(dir, ec);
        out = dir / CachingKernelProvider::cache_file_name(rep, theta);
    }
    save_kernel(kernel, out);

    std::printf("kernel N=%d (2j=%d) theta=%.17g built in %.3f s with %u threads\n", n_side,
                rep.two_j(), theta, elapsed.count(), threads);
    std::printf("payload checksum %016llx -> %s\n",
                static_cast<unsigned long long>(kernel_payload_checksum(kernel)),
                out.string().c_str());
    return kExitOk;
}

// ---------------------------------------------------------------------------
// pattern
// ---------------------------------------------------------------------------

int run_pattern(const std::string& kind, int n_side, fs::path png_out, fs::path csv_out) {
    const PatternKind kind_enum = kind == "delta" ? PatternKind::delta : PatternKind::step;
    const MonoImage img = make_pattern(kind_enum, n_side);
    if (png_out.empty()) {
        png_out = fs::path("pattern-" + kind + "-N" + std::to_string(n_side) + ".png");
    }
    if (csv_out.empty()) {
        csv_out = fs::path("pattern-" + kind + "-N" + std::to_string(n_side) + ".csv");
    }
    ImageMetadata meta{"pattern-" + kind, std::nullopt};
    write_png(png_out, img, &meta);
    write_csv_image(csv_out, img);
    std::printf("pattern %s N=%d -> %s, %s\n", kind.c_str(), n_side, png_out.string().c_str(),
                csv_out.string().c_str());
    return kExitOk;
}

// ---------------------------------------------------------------------------
// analyze
// ---------------------------------------------------------------------------

void print_report(const char* label, const OvershootReport& rep) {
    std::printf("%s: s=%.12g at (%d,%d)  S=%.12g at (%d,%d)  undershoot=%.12g overshoot=%.12g\n",
                label, rep.s, rep.s_pos[0], rep.s_pos[1], rep.S, rep.S_pos[0], rep.S_pos[1],
                std::abs(rep.s), rep.S - 1.0);
}

int run_analyze_sweep(const RunConfig& cfg, const std::string& kind, std::vector<int> sizes,
                      fs::path out, bool with_profiles) {
    const double theta = parse_angle(cfg.angle_text);
    const PatternKind kind_enum = kind == "delta" ? PatternKind::delta : PatternKind::step;
    if (out.empty()) out = fs::path("gibbs-" + kind + ".csv");

    auto provider = make_provider(cfg);
    std::vector<SweepRow> rows;
    rows.reserve(sizes.size());
    for (int n : sizes) {
        const MonoImage pattern = make_pattern(kind_enum, n);
        const MonoImage rotated = rotate_mono(pattern, theta, *provider, cfg.threads);
        const OvershootReport rep = overshoot_stats(rotated);
        rows.push_back({n, rep.s, rep.S, std::abs(rep.s), rep.S - 1.0});

        char label[64];
        std::snprintf(label, sizeof(label), "N=%d", n);
        print_report(label, rep);
        const auto [elo, ehi] = edge_stats(rotated);
        std::printf("N=%d edge pixels: min=%.12g max=%.12g (reported, no claims attached)\n", n,
                    elo, ehi);
        if (with_profiles) {
            fs::path ppath = out;
            ppath.replace_extension();
            ppath += "-N" + std::to_string(n) + "-profile.csv";
            write_profile_csv(ppath, rep.profile);
            std::printf("N=%d anti-diagonal profile -> %s\n", n, ppath.string().c_str());
        }
    }
    write_sweep_csv(out, rows);

    auto strictly_decreasing = [&](auto field) {
        for (std::size_t i = 1; i < rows.size(); ++i) {
            if (!(field(rows[i]) < field(rows[i - 1]))) return false;
        }
        return rows.size() > 1;
    };
    std::printf("sweep table -> %s\n", out.string().c_str());
    std::printf("overshoot S-1 strictly decreasing in N: %s\n",
                strictly_decreasing([](const SweepRow& r) { return r.overshoot; }) ? "yes" : "no");
    std::printf("undershoot |s| strictly decreasing in N: %s\n",
                strictly_decreasing([](const SweepRow& r) { return r.undershoot; }) ? "yes" : "no");
    return kExitOk;
}

int run_analyze_file(const fs::path& input, bool with_profile) {
    const AnyImage img = read_image(input);
    if (!std::holds_alternative<MonoImage>(img)) {
        throw DomainError("analyze expects a single-channel image; rotate writes per-channel "
                          "CSVs for RGB data");
    }
    const auto& mono = std::get<MonoImage>(img);
    const OvershootReport rep = overshoot_stats(mono);
    print_report(input.string().c_str(), rep);
    const auto [elo, ehi] = edge_stats(mono);
    std::printf("edge pixels: min=%.12g max=%.12g\n", elo, ehi);
    if (with_profile) {
        fs::path out = input;
        out.replace_extension();
        out += "-profile.csv";
        write_profile_csv(out, rep.profile);
        std::printf("anti-diagonal profile -> %s\n", out.string().c_str());
    }
    return kExitOk;
}

// ---------------------------------------------------------------------------
// selftest
// ---------------------------------------------------------------------------

struct SuiteResult {
    bool ok = true;
    void check(const char* name, double residual, double tolerance) {
        const bool pass = residual < tolerance;
        std::printf("%s %s (max residual %.3e, tolerance %.0e)\n", pass ? "PASS" : "FAIL", name,
                    residual, tolerance);
        ok = ok && pass;
    }
};

double max_abs(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

// ||A * A^T - I||_max for a dim x dim row-major matrix.
double orthogonality_residual(const std::vector<double>& a, std::size_t dim) {
    double worst = 0.0;
    for (std::size_t r = 0; r < dim; ++r) {
        for (std::size_t c = 0; c < dim; ++c) {
            double acc = 0.0;
            for (std::size_t k = 0; k < dim; ++k) acc += a[r * dim + k] * a[c * dim + k];
            worst = std::max(worst, std::abs(acc - (r == c ? 1.0 : 0.0)));
        }
    }
    return worst;
}

int run_selftest(const std::string& j_text, unsigned threads, bool inject) {
    const int two_j_max = j_text.empty() ? 8 : parse_two_j(j_text);
    if (two_j_max < 1 || two_j_max > 12) {
        throw DomainError("selftest supports 1/2 <= j <= 6");
    }
    const double thetas[] = {M_PI / 8, M_PI / 4, 0.7, 1.9};
    SuiteResult result;

    // little-d orthogonality and group property at the largest block order
    // a kernel of this j ever needs
    {
        const int two_jd = 2 * two_j_max;
        double worst_o = 0.0, worst_g = 0.0;
        for (double beta : thetas) {
            const auto d = wigner_d_matrix(two_jd, beta);
            worst_o = std::max(worst_o, orthogonality_residual(d, two_jd + 1));
            const auto half = wigner_d_matrix(two_jd, beta / 2);
            const std::size_t dim = two_jd + 1;
            double g = 0.0;
            for (std::size_t r = 0; r < dim; ++r) {
                for (std::size_t c = 0; c < dim; ++c) {
                    double acc = 0.0;
                    for (std::size_t k = 0; k < dim; ++k) acc += half[r * dim + k] * half[k * dim + c];
                    g = std::max(g, std::abs(acc - d[r * dim + c]));
                }
            }
            worst_g = std::max(worst_g, g);
        }
        result.check("little-d orthogonality", worst_o, 1e-10);
        result.check("little-d group property", worst_g, 1e-10);
    }

    // wavefunction orthonormality
    {
        double worst = 0.0;
        for (int two_j = 1; two_j <= two_j_max; ++two_j) {
            const WavefunctionTable table(OscillatorRep::from_two_j(two_j));
            worst = std::max(worst, orthogonality_residual(table.values(), table.size()));
        }
        result.check("wavefunction orthonormality", worst, 1e-10);
    }

    // polar basis orthonormality + completeness
    {
        double worst = 0.0;
        for (int two_j = 1; two_j <= two_j_max; ++two_j) {
            const OscillatorRep rep = OscillatorRep::from_two_j(two_j);
            const WavefunctionTable table(rep);
            const auto modes = build_polar_basis(rep, table, threads);
            const std::size_t dim = static_cast<std::size_t>(rep.size()) * rep.size();
            for (std::size_t a = 0; a < modes.size(); ++a) {
                for (std::size_t b = a; b < modes.size(); ++b) {
                    std::complex<double> acc = 0.0;
                    for (std::size_t p = 0; p < dim; ++p) {
                        acc += modes[a].values[p] * std::conj(modes[b].values[p]);
                    }
                    worst = std::max(worst, std::abs(acc - (a == b ? 1.0 : 0.0)));
                }
            }
            for (std::size_t p = 0; p < dim; ++p) {
                for (std::size_t q = p; q < dim; ++q) {
                    std::complex<double> acc = 0.0;
                    for (const auto& mode : modes) {
                        acc += mode.values[p] * std::conj(mode.values[q]);
                    }
                    worst = std::max(worst, std::abs(acc - (p == q ? 1.0 : 0.0)));
                }
            }
        }
        result.check("polar basis orthonormality/completeness", worst, 1e-10);
    }

    // kernel suites
    {
        double worst_unitary = 0.0, worst_compose = 0.0, worst_dual = 0.0, worst_imag = 0.0,
               worst_id = 0.0;
        bool injected = inject;
        for (int two_j = 1; two_j <= two_j_max; ++two_j) {
            const OscillatorRep rep = OscillatorRep::from_two_j(two_j);
            const WavefunctionTable table(rep);
            for (double theta : thetas) {
                RotationKernel cart = build_kernel_cartesian(rep, theta, table, threads);
                if (injected) {
                    cart.matrix[cart.matrix.size() / 2] += 1e-5;  // test hook
                    injected = false;
                }
                worst_unitary =
                    std::max(worst_unitary, orthogonality_residual(cart.matrix, cart.dim()));
                double imag = 0.0;
                const RotationKernel polar =
                    build_kernel_polar(rep, theta, table, threads, &imag);
                worst_imag = std::max(worst_imag, imag);
                double dual = 0.0;
                for (std::size_t i = 0; i < cart.matrix.size(); ++i) {
                    dual = std::max(dual, std::abs(cart.matrix[i] - polar.matrix[i]));
                }
                worst_dual = std::max(worst_dual, dual);
            }
            const RotationKernel k8 = build_kernel_cartesian(rep, M_PI / 8, table, threads);
            worst_compose = std::max(worst_compose, compose_check(k8, k8, threads));

            const RotationKernel k0 = build_kernel_cartesian(rep, 0.0, table, threads);
            std::vector<double> idres(k0.matrix.size());
            for (std::size_t r = 0; r < k0.dim(); ++r) {
                for (std::size_t c = 0; c < k0.dim(); ++c) {
                    idres[r * k0.dim() + c] =
                        k0.matrix[r * k0.dim() + c] - (r == c ? 1.0 : 0.0);
                }
            }
            worst_id = std::max(worst_id, max_abs(idres));
        }
        result.check("kernel unitarity", worst_unitary, 1e-9);
        result.check("kernel composition", worst_compose, 1e-9);
        result.check("dual-formula agreement", worst_dual, 1e-9);
        result.check("polar imaginary residue", worst_imag, 1e-9);
        result.check("zero-angle identity", worst_id, 1e-10);
    }

    std::printf("%s\n", result.ok ? "selftest: all suites passed" : "selftest: FAILURES present");
    return result.ok ? kExitOk : kExitConsistency;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"unitary rotation of pixellated images (finite oscillator model)"};
    app.require_subcommand(1);

    RunConfig cfg;

    auto add_common = [&](CLI::App* cmd, bool with_cache) {
        cmd->add_option("--threads", cfg.threads, "worker threads (0 = hardware)");
        if (with_cache) {
            cmd->add_option("--cache-dir", cfg.cache_dir,
                            "kernel cache directory (default: $FINROT_CACHE_DIR or "
                            "~/.cache/finrot)");
        }
    };

    // rotate
    auto* rotate_cmd = app.add_subcommand("rotate", "rotate an image by a given angle");
    rotate_cmd->add_option("input", cfg.input, "input image (.png/.pgm/.ppm/.csv)")->required();
    rotate_cmd->add_option("--angle", cfg.angle_text, "rotation angle (pi/8, 45deg, 0.7)")
        ->required();
    rotate_cmd->add_option("-o,--output", cfg.output, "output path (default: <input>-rot.<ext>)");
    rotate_cmd->add_option("--mode", cfg.mode,
                           "display mode: normalize-joint | normalize-per-channel | clip | raw");
    rotate_cmd->add_option("--raw-csv", cfg.raw_csv,
                           "also write the raw data-image as full-precision CSV");
    rotate_cmd->add_flag("--no-cache", cfg.no_cache, "build the kernel without touching the cache");
    add_common(rotate_cmd, true);

    // kernel
    int kernel_n = 0;
    auto* kernel_cmd = app.add_subcommand("kernel", "precompute and cache a rotation kernel");
    kernel_cmd->add_option("--N", kernel_n, "screen side length")->required();
    kernel_cmd->add_option("--angle", cfg.angle_text, "rotation angle")->required();
    kernel_cmd->add_option("-o,--output", cfg.output, "explicit output file (default: cache dir)");
    add_common(kernel_cmd, true);

    // pattern
    std::string pattern_kind;
    int pattern_n = 0;
    fs::path pattern_png, pattern_csv;
    auto* pattern_cmd = app.add_subcommand("pattern", "generate delta/step test patterns");
    pattern_cmd->add_option("kind", pattern_kind, "delta (odd N) or step (even N)")
        ->required()
        ->check(CLI::IsMember({"delta", "step"}));
    pattern_cmd->add_option("--N", pattern_n, "screen side length")->required();
    pattern_cmd->add_option("--png", pattern_png, "PNG output path");
    pattern_cmd->add_option("--csv", pattern_csv, "CSV output path");

    // analyze
    std::string analyze_kind;
    std::vector<int> analyze_sizes;
    fs::path analyze_out, analyze_input;
    bool analyze_profile = false;
    auto* analyze_cmd = app.add_subcommand("analyze", "overshoot statistics and N-sweeps");
    analyze_cmd->add_option("--pattern", analyze_kind, "sweep pattern: delta or step")
        ->check(CLI::IsMember({"delta", "step"}));
    analyze_cmd->add_option("--Ns", analyze_sizes, "comma-separated screen sizes")
        ->delimiter(',');
    analyze_cmd->add_option("--angle", cfg.angle_text, "rotation angle");
    analyze_cmd->add_option("--out", analyze_out, "sweep CSV path (default gibbs-<kind>.csv)");
    analyze_cmd->add_option("--input", analyze_input, "analyze one image file instead of sweeping");
    analyze_cmd->add_flag("--profile", analyze_profile, "write anti-diagonal profile CSVs");
    analyze_cmd->add_flag("--no-cache", cfg.no_cache, "do not use the kernel cache");
    add_common(analyze_cmd, true);

    // selftest
    std::string selftest_j;
    bool inject = false;
    auto* selftest_cmd = app.add_subcommand("selftest", "run the numerical invariant suites");
    selftest_cmd->add_option("--j", selftest_j, "largest spin label (default 4, max 6)");
    selftest_cmd->add_flag("--inject-perturbation", inject,
                           "test hook: corrupt one kernel entry to prove failure detection");
    add_common(selftest_cmd, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (rotate_cmd->parsed()) return run_rotate(cfg);
        if (kernel_cmd->parsed()) return run_kernel(cfg, kernel_n);
        if (pattern_cmd->parsed()) return run_pattern(pattern_kind, pattern_n, pattern_png,
                                                      pattern_csv);
        if (analyze_cmd->parsed()) {
            if (!analyze_input.empty()) return run_analyze_file(analyze_input, analyze_profile);
            if (analyze_kind.empty() || analyze_sizes.empty()) {
                throw DomainError("analyze needs either --input FILE or --pattern KIND --Ns ...");
            }
            return run_analyze_sweep(cfg, analyze_kind, analyze_sizes, analyze_out,
                                     analyze_profile);
        }
        if (selftest_cmd->parsed()) return run_selftest(selftest_j, cfg.threads, inject);
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const FormatError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitFormat;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const ConsistencyError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConsistency;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return kExitUsage;
}
