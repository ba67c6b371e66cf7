#pragma once

#include <array>
#include <utility>
#include <vector>

#include "finrot/oscillator.hpp"

namespace finrot {

/// Data-images hold the unbounded real values the unitary map produces;
/// screen-images are display-ready with every value in [0, 1]. Carrying the
/// distinction as state (rather than convention) blocks double-normalization.
enum class PixelDomain { data, screen };

/// Square N x N single-channel image. Pixels are stored row-major with i_x
/// major: pixel (i_x, i_y) lives at flat index i_x * N + i_y, matching the
/// rotation-kernel flattening. i_x indexes q_x = i_x - j, likewise i_y.
class MonoImage {
public:
    MonoImage(OscillatorRep rep, PixelDomain domain);
    MonoImage(OscillatorRep rep, PixelDomain domain, std::vector<double> pixels);

    OscillatorRep rep() const { return rep_; }
    PixelDomain domain() const { return domain_; }
    int size() const { return rep_.size(); }

    double at(int ix, int iy) const { return pixels_[static_cast<std::size_t>(ix) * size() + iy]; }
    double& at(int ix, int iy) { return pixels_[static_cast<std::size_t>(ix) * size() + iy]; }
    const std::vector<double>& pixels() const { return pixels_; }
    std::vector<double>& pixels() { return pixels_; }

private:
    OscillatorRep rep_;
    PixelDomain domain_;
    std::vector<double> pixels_;
};

/// Three channels sharing one representation.
class RgbImage {
public:
    RgbImage(MonoImage r, MonoImage g, MonoImage b);

    OscillatorRep rep() const { return r_.rep(); }
    PixelDomain domain() const { return r_.domain(); }
    int size() const { return r_.size(); }

    const MonoImage& r() const { return r_; }
    const MonoImage& g() const { return g_; }
    const MonoImage& b() const { return b_; }
    MonoImage& r() { return r_; }
    MonoImage& g() { return g_; }
    MonoImage& b() { return b_; }
    const MonoImage& channel(int c) const;

private:
    MonoImage r_, g_, b_;
};

/// Raw extrema of the data values the normalization map was derived from.
struct NormalizationStats {
    double s;  // global minimum
    double S;  // global maximum
};

/// Lossless affine rescale into [0, 1] using the widened bounds
/// s' = min(0, s), S' = max(1, S); an image already inside [0, 1] comes back
/// bit-identical.
std::pair<MonoImage, NormalizationStats> normalize_mono(const MonoImage& image);

/// Lossy truncation v -> min(1, max(0, v)).
MonoImage clip_mono(const MonoImage& image);

/// One affine map for all three channels, derived from the extreme values
/// across the channels; preserves relative channel structure (hue ordering).
std::pair<RgbImage, NormalizationStats> normalize_rgb_joint(const RgbImage& image);

/// Independent per-channel maps; shifts hue where channel ranges differ.
std::pair<RgbImage, std::array<NormalizationStats, 3>> normalize_rgb_per_channel(
    const RgbImage& image);

/// Kronecker line pattern for odd N: ones along the q_y = 0 row.
MonoImage pattern_delta(int n);

/// Step pattern for even N: zeros for q_y <= -1/2, ones for q_y >= 1/2.
MonoImage pattern_step(int n);

}  // namespace finrot
