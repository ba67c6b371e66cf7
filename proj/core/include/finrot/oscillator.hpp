#pragma once

#include <complex>
#include <vector>

#include "finrot/errors.hpp"

namespace finrot {

/// Finite-oscillator representation label. The spin j may be a half-integer,
/// so it is stored doubled (two_j = 2j) and all mode/position labels are
/// handled as integer offsets. Screen side N = 2j + 1; pixel index
/// i in [0, N) maps to position q = i - j.
class OscillatorRep {
public:
    static OscillatorRep from_two_j(int two_j);
    static OscillatorRep from_size(int n);  // N = 2j + 1

    int two_j() const { return two_j_; }
    int size() const { return two_j_ + 1; }
    double j() const { return 0.5 * two_j_; }
    bool integral_j() const { return two_j_ % 2 == 0; }
    double position(int index) const { return index - 0.5 * two_j_; }

    friend bool operator==(OscillatorRep a, OscillatorRep b) { return a.two_j_ == b.two_j_; }
    friend bool operator!=(OscillatorRep a, OscillatorRep b) { return !(a == b); }

private:
    explicit OscillatorRep(int two_j) : two_j_(two_j) {}
    int two_j_;
};

/// The three su(2) generator matrices in the position basis, N x N with rows
/// and columns ordered by ascending q. Q is real diagonal, P is imaginary
/// tridiagonal, K is real tridiagonal; all are self-adjoint.
struct Su2Matrices {
    OscillatorRep rep;
    std::vector<double> q;                  // N*N row-major
    std::vector<std::complex<double>> p;    // N*N row-major
    std::vector<double> k;                  // N*N row-major
};

Su2Matrices su2_generators(OscillatorRep rep);

/// Wigner little-d value d^j_{m',m}(beta) in the standard (Biedenharn-Louck)
/// convention: d^{1/2}_{1/2,1/2}(beta) = cos(beta/2),
/// d^{1/2}_{1/2,-1/2}(beta) = -sin(beta/2). Arguments are doubled so
/// half-integer labels stay exact. Projections must lie in {-j,...,j} in unit
/// steps (same parity as two_j) or a DomainError is thrown.
///
/// Evaluation runs a three-term recurrence in m' at fixed (j, m, beta),
/// inward from both edge rows (closed-form seeds in log space) to the
/// classical peak row, spliced and renormalized. Stable for dimensions well
/// past the N <= 64 screens this library targets; never forms factorials.
double wigner_little_d(int two_j, int two_mp, int two_m, double beta);

/// One column of d^j(beta) at fixed m: entry r holds d^j_{m',m} with
/// m' = -j + r. This is the workhorse the single-value and matrix forms wrap.
std::vector<double> wigner_d_column(int two_j, int two_m, double beta);

/// Full (two_j+1)^2 matrix, row-major, entry [(mp+j)*(two_j+1) + (m+j)].
std::vector<double> wigner_d_matrix(int two_j, double beta);

/// 1D finite-oscillator (Kravchuk) wavefunction Psi_n(q) = d^j_{n-j,q}(pi/2),
/// addressed by mode n in [0, 2j] and position index in [0, N).
double kravchuk_psi(OscillatorRep rep, int n, int position_index);

/// All Psi_n(q) for one representation, stored row-major with entry
/// (n, i = q+j). Rows and columns are orthonormal; the table satisfies the
/// exact sign-carrying transpose symmetry
///     psi(n, i) == (-1)^(n-i) * psi(i, n)
/// which the constructor enforces bitwise.
class WavefunctionTable {
public:
    explicit WavefunctionTable(OscillatorRep rep);

    OscillatorRep rep() const { return rep_; }
    int size() const { return rep_.size(); }
    double psi(int n, int position_index) const {
        return values_[static_cast<std::size_t>(n) * rep_.size() + position_index];
    }
    const double* row(int n) const { return values_.data() + static_cast<std::size_t>(n) * rep_.size(); }
    const std::vector<double>& values() const { return values_; }

private:
    OscillatorRep rep_;
    std::vector<double> values_;
};

}  // namespace finrot
