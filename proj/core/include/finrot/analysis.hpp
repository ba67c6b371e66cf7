#pragma once

#include <array>
#include <filesystem>
#include <span>
#include <vector>

#include "finrot/image.hpp"

namespace finrot {

/// Extremal pixel values of an image together with their locations and the
/// main anti-diagonal profile. For rotated binary patterns the over- and
/// undershoots are generally asymmetric, so both ends are reported
/// separately.
struct OvershootReport {
    double s;                     // most negative (global minimum)
    double S;                     // largest (global maximum)
    std::array<int, 2> s_pos;     // (i_x, i_y) of the minimum
    std::array<int, 2> S_pos;     // (i_x, i_y) of the maximum
    std::vector<double> profile;  // anti-diagonal values, length N
};

/// Pixels at (i, N-1-i) for i = 0..N-1, i.e. along q_y = -q_x. A pattern
/// rotated by pi/4 lies along this line.
std::vector<double> antidiagonal_profile(const MonoImage& image);

/// Global extrema with argmin/argmax (ties broken by the smallest flattened
/// index) plus the anti-diagonal profile.
OvershootReport overshoot_stats(const MonoImage& image);

/// Extrema over the boundary pixels only. The behavior near screen edges and
/// vertices is reported as-is; no monotonicity or range claims attach to it.
std::pair<double, double> edge_stats(const MonoImage& image);

enum class PatternKind { delta, step };

struct SweepRow {
    int n;
    double s;           // global minimum of the rotated pattern
    double S;           // global maximum
    double undershoot;  // |s|
    double overshoot;   // S - 1
};

/// Rotates the pattern at each N by theta and collects extrema, one row per
/// N. Parity violations (even N for delta, odd for step) throw DomainError.
/// Monotonicity of the overshoot across N is for the caller to inspect; the
/// sweep only reports.
std::vector<SweepRow> gibbs_sweep(PatternKind kind, std::span<const int> sizes, double theta,
                                  unsigned threads = 0);

MonoImage make_pattern(PatternKind kind, int n);

/// CSV writers. The sweep table has the fixed header N,s,S,undershoot,overshoot;
/// profiles are written as i,value rows.
void write_sweep_csv(const std::filesystem::path& path, const std::vector<SweepRow>& rows);
void write_profile_csv(const std::filesystem::path& path, std::span<const double> profile);

}  // namespace finrot
