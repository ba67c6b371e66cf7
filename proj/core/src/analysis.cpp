#include "finrot/analysis.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "finrot/rotation_kernel.hpp"

namespace finrot {

std::vector<double> antidiagonal_profile(const MonoImage& image) {
    const int n = image.size();
    std::vector<double> out(n);
    for (int i = 0; i < n; ++i) out[i] = image.at(i, n - 1 - i);
    return out;
}

OvershootReport overshoot_stats(const MonoImage& image) {
    const int n = image.size();
    OvershootReport rep;
    rep.s = image.at(0, 0);
    rep.S = image.at(0, 0);
    rep.s_pos = {0, 0};
    rep.S_pos = {0, 0};
    for (int ix = 0; ix < n; ++ix) {
        for (int iy = 0; iy < n; ++iy) {
            const double v = image.at(ix, iy);
            if (v < rep.s) {
                rep.s = v;
                rep.s_pos = {ix, iy};
            }
            if (v > rep.S) {
                rep.S = v;
                rep.S_pos = {ix, iy};
            }
        }
    }
    rep.profile = antidiagonal_profile(image);
    return rep;
}

std::pair<double, double> edge_stats(const MonoImage& image) {
    const int n = image.size();
    double lo = image.at(0, 0), hi = image.at(0, 0);
    auto visit = [&](int ix, int iy) {
        const double v = image.at(ix, iy);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    };
    for (int i = 0; i < n; ++i) {
        visit(i, 0);
        visit(i, n - 1);
        visit(0, i);
        visit(n - 1, i);
    }
    return {lo, hi};
}

MonoImage make_pattern(PatternKind kind, int n) {
    return kind == PatternKind::delta ? pattern_delta(n) : pattern_step(n);
}

std::vector<SweepRow> gibbs_sweep(PatternKind kind, std::span<const int> sizes, double theta,
                                  unsigned threads) {
    std::vector<SweepRow> rows;
    rows.reserve(sizes.size());
    for (int n : sizes) {
        const MonoImage pattern = make_pattern(kind, n);
        const WavefunctionTable table(pattern.rep());
        const RotationKernel kernel =
            build_kernel_cartesian(pattern.rep(), theta, table, threads);
        const MonoImage rotated = apply_kernel(kernel, pattern, threads);
        const OvershootReport report = overshoot_stats(rotated);
        rows.push_back({n, report.s, report.S, std::abs(report.s), report.S - 1.0});
    }
    return rows;
}

void write_sweep_csv(const std::filesystem::path& path, const std::vector<SweepRow>& rows) {
    std::ofstream os(path);
    if (!os) throw IoError("cannot open " + path.string() + " for writing");
    os << "N,s,S,undershoot,overshoot\n";
    char buf[160];
    for (const SweepRow& r : rows) {
        std::snprintf(buf, sizeof(buf), "%d,%.17g,%.17g,%.17g,%.17g\n", r.n, r.s, r.S,
                      r.undershoot, r.overshoot);
        os << buf;
    }
    if (!os) throw IoError("write to " + path.string() + " failed");
}

void write_profile_csv(const std::filesystem::path& path, std::span<const double> profile) {
    std::ofstream os(path);
    if (!os) throw IoError("cannot open " + path.string() + " for writing");
    os << "i,value\n";
    char buf[64];
    for (std::size_t i = 0; i < profile.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%zu,%.17g\n", i, profile[i]);
        os << buf;
    }
    if (!os) throw IoError("write to " + path.string() + " failed");
}

}  // namespace finrot
