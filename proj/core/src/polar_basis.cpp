#include "finrot/polar_basis.hpp"

#include <algorithm>
#include <cmath>

#include "finrot/parallel.hpp"

namespace finrot {

bool is_valid_polar_index(OscillatorRep rep, PolarIndex idx) {
    const int four_j = 2 * rep.two_j();
    if (idx.n < 0 || idx.n > four_j) return false;
    const int mmax = std::min(idx.n, four_j - idx.n);
    if (std::abs(idx.m) > mmax) return false;
    return (idx.n - idx.m) % 2 == 0;
}

std::vector<PolarIndex> enumerate_polar_indices(OscillatorRep rep) {
    const int four_j = 2 * rep.two_j();
    std::vector<PolarIndex> out;
    out.reserve(static_cast<std::size_t>(rep.size()) * rep.size());
    for (int n = 0; n <= four_j; ++n) {
        const int mmax = std::min(n, four_j - n);
        for (int m = -mmax; m <= mmax; m += 2) {
            out.push_back({n, m});
        }
    }
    return out;
}

PolarMode polar_wavefunction(OscillatorRep rep, PolarIndex idx, const WavefunctionTable& table) {
    if (table.rep() != rep) {
        throw DomainError("polar_wavefunction: wavefunction table built for a different representation");
    }
    if (!is_valid_polar_index(rep, idx)) {
        throw DomainError("polar_wavefunction: invalid (n, m) pair");
    }
    const int n_side = rep.size();
    const int two_j = rep.two_j();
    const int lo = std::max(0, idx.n - two_j);
    const int hi = std::min(idx.n, two_j);
    const int block = hi - lo + 1;  // = min(n, 4j-n) + 1

    // d^(jhat)_{mu, m/2}(pi/2) with 2*jhat = block-1; row r of the column
    // corresponds to n_x = lo + r. |m| <= block-1 for any valid index.
    const auto dcol = wigner_d_column(block - 1, idx.m, M_PI_2);

    const double prefactor = ((std::abs(idx.m) - idx.m) / 2) % 2 ? -1.0 : 1.0;
    // (-i)^(n_y) cycles with period 4.
    static const std::complex<double> kPow[4] = {{1, 0}, {0, -1}, {-1, 0}, {0, 1}};

    PolarMode mode{idx, std::vector<std::complex<double>>(
                            static_cast<std::size_t>(n_side) * n_side, {0.0, 0.0})};
    for (int r = 0; r < block; ++r) {
        const int nx = lo + r;
        const int ny = idx.n - nx;
        const std::complex<double> coef =
            prefactor * kPow[ny % 4] * dcol[r];
        const double* wx = table.row(nx);
        const double* wy = table.row(ny);
        for (int ix = 0; ix < n_side; ++ix) {
            const std::complex<double> cx = coef * wx[ix];
            std::complex<double>* dst = mode.values.data() + static_cast<std::size_t>(ix) * n_side;
            for (int iy = 0; iy < n_side; ++iy) {
                dst[iy] += cx * wy[iy];
            }
        }
    }
    return mode;
}

std::vector<PolarMode> build_polar_basis(OscillatorRep rep, const WavefunctionTable& table,
                                         unsigned threads) {
    const auto indices = enumerate_polar_indices(rep);
    std::vector<PolarMode> modes(indices.size());
    parallel_for(indices.size(), threads, [&](std::size_t begin, std::size_t end) {
        for (std::size_t k = begin; k < end; ++k) {
            modes[k] = polar_wavefunction(rep, indices[k], table);
        }
    });
    return modes;
}

}  // namespace finrot
