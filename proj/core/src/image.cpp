#include "finrot/image.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace finrot {
namespace {

void check_screen_range(const std::vector<double>& px) {
    for (double v : px) {
        if (!(v >= 0.0 && v <= 1.0)) {
            throw DomainError("screen-image pixel value " + std::to_string(v) +
                              " outside [0, 1]");
        }
    }
}

NormalizationStats extrema(const std::vector<double>& px) {
    double lo = px[0], hi = px[0];
    for (double v : px) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    return {lo, hi};
}

std::vector<double> affine_map(const std::vector<double>& px, double s, double S) {
    // widened bounds keep in-range images fixed
    const double lo = std::min(0.0, s);
    const double hi = std::max(1.0, S);
    std::vector<double> out(px.size());
    if (lo == 0.0 && hi == 1.0) {
        out = px;  // identity, bit-exact
    } else {
        // direct division so the extrema land on 0 and 1 exactly; monotone
        // rounding keeps every interior value inside [0, 1]
        const double span = hi - lo;
        for (std::size_t i = 0; i < px.size(); ++i) out[i] = (px[i] - lo) / span;
    }
    return out;
}

}  // namespace

MonoImage::MonoImage(OscillatorRep rep, PixelDomain domain)
    : rep_(rep),
      domain_(domain),
      pixels_(static_cast<std::size_t>(rep.size()) * rep.size(), 0.0) {}

MonoImage::MonoImage(OscillatorRep rep, PixelDomain domain, std::vector<double> pixels)
    : rep_(rep), domain_(domain), pixels_(std::move(pixels)) {
    if (pixels_.size() != static_cast<std::size_t>(rep.size()) * rep.size()) {
        throw DomainError("MonoImage: pixel buffer size does not match N x N");
    }
    if (domain_ == PixelDomain::screen) check_screen_range(pixels_);
}

RgbImage::RgbImage(MonoImage r, MonoImage g, MonoImage b)
    : r_(std::move(r)), g_(std::move(g)), b_(std::move(b)) {
    if (g_.rep() != r_.rep() || b_.rep() != r_.rep()) {
        throw DomainError("RgbImage: channels must share one representation");
    }
    if (g_.domain() != r_.domain() || b_.domain() != r_.domain()) {
        throw DomainError("RgbImage: channels must share one pixel domain");
    }
}

const MonoImage& RgbImage::channel(int c) const {
    switch (c) {
        case 0: return r_;
        case 1: return g_;
        case 2: return b_;
        default: throw DomainError("RgbImage: channel index out of range");
    }
}

std::pair<MonoImage, NormalizationStats> normalize_mono(const MonoImage& image) {
    const auto st = extrema(image.pixels());
    auto px = affine_map(image.pixels(), st.s, st.S);
    return {MonoImage(image.rep(), PixelDomain::screen, std::move(px)), st};
}

MonoImage clip_mono(const MonoImage& image) {
    std::vector<double> px(image.pixels().size());
    for (std::size_t i = 0; i < px.size(); ++i) {
        px[i] = std::clamp(image.pixels()[i], 0.0, 1.0);
    }
    return MonoImage(image.rep(), PixelDomain::screen, std::move(px));
}

std::pair<RgbImage, NormalizationStats> normalize_rgb_joint(const RgbImage& image) {
    NormalizationStats st = extrema(image.r().pixels());
    for (int c : {1, 2}) {
        const auto e = extrema(image.channel(c).pixels());
        st.s = std::min(st.s, e.s);
        st.S = std::max(st.S, e.S);
    }
    auto map_channel = [&](const MonoImage& ch) {
        return MonoImage(ch.rep(), PixelDomain::screen, affine_map(ch.pixels(), st.s, st.S));
    };
    return {RgbImage(map_channel(image.r()), map_channel(image.g()), map_channel(image.b())),
            st};
}

std::pair<RgbImage, std::array<NormalizationStats, 3>> normalize_rgb_per_channel(
    const RgbImage& image) {
    auto [r, sr] = normalize_mono(image.r());
    auto [g, sg] = normalize_mono(image.g());
    auto [b, sb] = normalize_mono(image.b());
    return {RgbImage(std::move(r), std::move(g), std::move(b)), {sr, sg, sb}};
}

MonoImage pattern_delta(int n) {
    if (n < 1 || n % 2 == 0) {
        throw DomainError("pattern_delta: N must be odd (center row undefined otherwise)");
    }
    MonoImage img(OscillatorRep::from_size(n), PixelDomain::screen);
    const int center = (n - 1) / 2;  // i_y with q_y = 0
    for (int ix = 0; ix < n; ++ix) img.at(ix, center) = 1.0;
    return img;
}

MonoImage pattern_step(int n) {
    if (n < 2 || n % 2 != 0) {
        throw DomainError("pattern_step: N must be even");
    }
    MonoImage img(OscillatorRep::from_size(n), PixelDomain::screen);
    for (int ix = 0; ix < n; ++ix) {
        for (int iy = n / 2; iy < n; ++iy) img.at(ix, iy) = 1.0;  // q_y >= 1/2
    }
    return img;
}

}  // namespace finrot
