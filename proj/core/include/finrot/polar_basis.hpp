#pragma once

#include <complex>
#include <vector>

#include "finrot/oscillator.hpp"

namespace finrot {

/// Label of one polar (angular-momentum) mode. Valid pairs satisfy
/// |m| <= min(n, 4j - n) and m = n (mod 2); the enumeration for a fixed j has
/// exactly N^2 of them.
struct PolarIndex {
    int n;  // total mode, 0..4j
    int m;  // angular label, same parity as n

    friend bool operator==(PolarIndex a, PolarIndex b) { return a.n == b.n && a.m == b.m; }
};

bool is_valid_polar_index(OscillatorRep rep, PolarIndex idx);

/// All valid (n, m) pairs in deterministic order: n ascending, m ascending.
std::vector<PolarIndex> enumerate_polar_indices(OscillatorRep rep);

/// One 2D polar oscillator mode: its label and the N x N complex screen
/// values Lambda^j_{n,m}(q_x, q_y), stored row-major as [i_x * N + i_y].
struct PolarMode {
    PolarIndex index;
    std::vector<std::complex<double>> values;
};

/// Lambda^j_{n,m} as the phase-weighted sum of Cartesian product modes
/// Psi_{n_x}(q_x) Psi_{n_y}(q_y) over n_x + n_y = n, with n_x clamped to the
/// valid 1D range. The little-d factor inside the sum has effective order
/// min(n, 4j-n)/2: the mode count of the block. Throws DomainError for an
/// invalid index or a table built for a different representation.
PolarMode polar_wavefunction(OscillatorRep rep, PolarIndex idx, const WavefunctionTable& table);

/// Eagerly computes every polar mode in enumeration order (the default
/// strategy for N <= 64 screens; memory grows as N^4).
std::vector<PolarMode> build_polar_basis(OscillatorRep rep, const WavefunctionTable& table,
                                         unsigned threads = 0);

}  // namespace finrot
