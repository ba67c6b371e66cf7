#include "finrot/oscillator.hpp"

#include <cmath>
#include <cstdlib>
#include <string>

namespace finrot {
namespace {

constexpr double kRescaleLimit = 1e280;
constexpr double kRescaleInv = 1e-280;

// |delta| below this is treated as an exact multiple of pi; the identity
// column is exact there and the O(j*delta) error stays below 1e-11 for the
// supported sizes.
constexpr double kSnapDelta = 1e-13;

void check_projection(int two_j, int two_m, const char* name) {
    if (std::abs(two_m) > two_j || (two_j - two_m) % 2 != 0) {
        throw DomainError(std::string("wigner_little_d: projection ") + name +
                          " = " + std::to_string(0.5 * two_m) +
                          " invalid for j = " + std::to_string(0.5 * two_j));
    }
}

// d^j(pi) is the signed antidiagonal permutation d(pi)_{m',mu} =
// (-1)^(j-mu) delta_{m',-mu}; left-composing it onto a column vector.
void apply_pi_rotation(std::vector<double>& col, int two_j) {
    const int dim = two_j + 1;
    std::vector<double> out(dim);
    for (int r = 0; r < dim; ++r) {
        int two_mu = two_j - 2 * r;  // mu = -m'
        int src = (two_mu + two_j) / 2;
        int sign = ((two_j - two_mu) / 2) % 2 ? -1 : 1;
        out[r] = sign * col[src];
    }
    col.swap(out);
}

}  // namespace

OscillatorRep OscillatorRep::from_two_j(int two_j) {
    if (two_j < 0) throw DomainError("OscillatorRep: 2j must be non-negative");
    return OscillatorRep(two_j);
}

OscillatorRep OscillatorRep::from_size(int n) {
    if (n < 1) throw DomainError("OscillatorRep: screen side N must be positive");
    return OscillatorRep(n - 1);
}

Su2Matrices su2_generators(OscillatorRep rep) {
    const int n = rep.size();
    const double j = rep.j();
    Su2Matrices out{rep,
                    std::vector<double>(static_cast<std::size_t>(n) * n, 0.0),
                    std::vector<std::complex<double>>(static_cast<std::size_t>(n) * n, 0.0),
                    std::vector<double>(static_cast<std::size_t>(n) * n, 0.0)};
    for (int i = 0; i < n; ++i) {
        const double q = rep.position(i);
        out.q[static_cast<std::size_t>(i) * n + i] = q;
        if (i + 1 < n) {
            // entry (q, q+1)
            const double up = 0.5 * std::sqrt((j - q) * (j + q + 1.0));
            out.p[static_cast<std::size_t>(i) * n + i + 1] = std::complex<double>(0.0, -up);
            out.k[static_cast<std::size_t>(i) * n + i + 1] = up;
        }
        if (i - 1 >= 0) {
            // entry (q, q-1)
            const double dn = 0.5 * std::sqrt((j + q) * (j - q + 1.0));
            out.p[static_cast<std::size_t>(i) * n + i - 1] = std::complex<double>(0.0, dn);
            out.k[static_cast<std::size_t>(i) * n + i - 1] = dn;
        }
    }
    return out;
}

std::vector<double> wigner_d_column(int two_j, int two_m, double beta) {
    if (two_j < 0) throw DomainError("wigner_d_column: 2j must be non-negative");
    check_projection(two_j, two_m, "m");

    const int dim = two_j + 1;
    if (two_j == 0) return {1.0};

    const double k_real = std::floor(beta / M_PI + 0.5);
    const int k = static_cast<int>(k_real);
    const double delta = beta - k_real * M_PI;
    const double j = 0.5 * two_j;
    const double m = 0.5 * two_m;

    std::vector<double> col(dim, 0.0);
    if (std::abs(delta) < kSnapDelta) {
        col[(two_m + two_j) / 2] = 1.0;
    } else {
        const double c2 = std::cos(0.5 * delta);
        const double s2 = std::sin(0.5 * delta);
        const double cb = std::cos(delta);
        const double sb = std::sin(delta);
        const double logbin = 0.5 * (std::lgamma(two_j + 1.0) -
                                     std::lgamma(0.5 * (two_j + two_m) + 1.0) -
                                     std::lgamma(0.5 * (two_j - two_m) + 1.0));

        int rpk = static_cast<int>(std::lround(m * cb + j));
        rpk = std::max(0, std::min(dim - 1, rpk));

        // Downward sweep, rows top..rpk. Seed d_{j,m} = sqrt(C(2j,j+m))
        // (cos d/2)^(j+m) (-sin d/2)^(j-m), evaluated in log space; if it
        // underflows, a unit mantissa with the analytic sign is enough since
        // the column is renormalized at the end.
        std::vector<double> down(dim, 0.0);
        {
            double sgn = 1.0;
            if (delta > 0 && ((two_j - two_m) / 2) % 2 != 0) sgn = -1.0;
            double ls = logbin + (j + m) * std::log(std::abs(c2)) +
                        (j - m) * std::log(std::abs(s2));
            double v_curr = sgn * (ls > -280.0 ? std::exp(ls) : 1.0);
            double v_prev = 0.0;
            down[dim - 1] = v_curr;
            for (int r = dim - 1; r > rpk; --r) {
                const double mp = -j + r;
                const double ap = std::sqrt((j - mp) * (j + mp + 1.0));
                const double am = std::sqrt((j + mp) * (j - mp + 1.0));
                double v_next = (2.0 * (m - mp * cb) / sb * v_curr - ap * v_prev) / am;
                if (std::abs(v_next) > kRescaleLimit) {
                    for (int t = r; t < dim; ++t) down[t] *= kRescaleInv;
                    v_next *= kRescaleInv;
                    v_curr *= kRescaleInv;
                }
                down[r - 1] = v_next;
                v_prev = v_curr;
                v_curr = v_next;
            }
        }

        // Upward sweep, rows 0..rpk, seeded by d_{-j,m}.
        std::vector<double> up(dim, 0.0);
        {
            double sgn = 1.0;
            if (((two_j + two_m) / 2) % 2 != 0 && s2 < 0) sgn = -1.0;
            double ls = logbin + (j - m) * std::log(std::abs(c2)) +
                        (j + m) * std::log(std::abs(s2));
            double v_curr = sgn * (ls > -280.0 ? std::exp(ls) : 1.0);
            double v_prev = 0.0;
            up[0] = v_curr;
            for (int r = 0; r < rpk; ++r) {
                const double mp = -j + r;
                const double ap = std::sqrt((j - mp) * (j + mp + 1.0));
                const double am = std::sqrt((j + mp) * (j - mp + 1.0));
                double v_next = (2.0 * (m - mp * cb) / sb * v_curr - am * v_prev) / ap;
                if (std::abs(v_next) > kRescaleLimit) {
                    for (int t = 0; t <= r; ++t) up[t] *= kRescaleInv;
                    v_next *= kRescaleInv;
                    v_curr *= kRescaleInv;
                }
                up[r + 1] = v_next;
                v_prev = v_curr;
                v_curr = v_next;
            }
        }

        // Junction at the peak row; if the column happens to pass through a
        // near-zero there, extend the down sweep a couple of rows (cheap, and
        // only reached in the oscillatory regime where that is stable).
        int rj = rpk;
        {
            double wd = 0.0, wu = 0.0;
            for (int r = rpk; r < std::min(rpk + 4, dim); ++r) wd = std::max(wd, std::abs(down[r]));
            for (int r = std::max(0, rpk - 3); r <= rpk; ++r) wu = std::max(wu, std::abs(up[r]));
            if (wd > 0.0 && wu > 0.0 &&
                (std::abs(down[rpk]) < 1e-3 * wd || std::abs(up[rpk]) < 1e-3 * wu)) {
                double v_prev = rpk + 1 < dim ? down[rpk + 1] : 0.0;
                double v_curr = down[rpk];
                double best = std::min(std::abs(down[rpk]) / wd, std::abs(up[rpk]) / wu);
                for (int r = rpk; r > std::max(rpk - 2, 0); --r) {
                    const double mp = -j + r;
                    const double ap = std::sqrt((j - mp) * (j + mp + 1.0));
                    const double am = std::sqrt((j + mp) * (j - mp + 1.0));
                    double v_next = (2.0 * (m - mp * cb) / sb * v_curr - ap * v_prev) / am;
                    down[r - 1] = v_next;
                    v_prev = v_curr;
                    v_curr = v_next;
                    double score = std::min(std::abs(down[r - 1]) / std::max(wd, std::abs(down[r - 1])),
                                            std::abs(up[r - 1]) / wu);
                    if (score > best) {
                        best = score;
                        rj = r - 1;
                    }
                }
            }
        }

        double md = 0.0, mu = 0.0;
        for (int r = rj; r < dim; ++r) md = std::max(md, std::abs(down[r]));
        for (int r = 0; r <= rj; ++r) mu = std::max(mu, std::abs(up[r]));
        if (mu == 0.0 || up[rj] == 0.0) {
            for (int r = 0; r < dim; ++r) col[r] = md > 0.0 ? down[r] / md : down[r];
        } else if (md == 0.0 || down[rj] == 0.0) {
            for (int r = 0; r < dim; ++r) col[r] = up[r] / mu;
        } else {
            const double g = (down[rj] / md) / (up[rj] / mu);
            for (int r = rj; r < dim; ++r) col[r] = down[r] / md;
            for (int r = 0; r < rj; ++r) col[r] = (up[r] / mu) * g;
        }
        double norm2 = 0.0;
        for (double v : col) norm2 += v * v;
        const double inv = 1.0 / std::sqrt(norm2);
        for (double& v : col) v *= inv;
    }

    int km = ((k % 4) + 4) % 4;
    for (int t = 0; t < km; ++t) apply_pi_rotation(col, two_j);
    return col;
}

double wigner_little_d(int two_j, int two_mp, int two_m, double beta) {
    if (two_j < 0) throw DomainError("wigner_little_d: 2j must be non-negative");
    check_projection(two_j, two_mp, "m'");
    check_projection(two_j, two_m, "m");
    return wigner_d_column(two_j, two_m, beta)[(two_mp + two_j) / 2];
}

std::vector<double> wigner_d_matrix(int two_j, double beta) {
    const int dim = two_j + 1;
    std::vector<double> out(static_cast<std::size_t>(dim) * dim);
    for (int c = 0; c < dim; ++c) {
        const auto col = wigner_d_column(two_j, -two_j + 2 * c, beta);
        for (int r = 0; r < dim; ++r) out[static_cast<std::size_t>(r) * dim + c] = col[r];
    }
    return out;
}

double kravchuk_psi(OscillatorRep rep, int n, int position_index) {
    if (n < 0 || n > rep.two_j()) {
        throw DomainError("kravchuk_psi: mode number n out of range");
    }
    if (position_index < 0 || position_index >= rep.size()) {
        throw DomainError("kravchuk_psi: position index out of range");
    }
    // Psi_n(q) = d^j_{n-j, q}(pi/2): row n of the column at m = q.
    const int two_j = rep.two_j();
    return wigner_d_column(two_j, 2 * position_index - two_j, M_PI_2)[n];
}

WavefunctionTable::WavefunctionTable(OscillatorRep rep)
    : rep_(rep), values_(static_cast<std::size_t>(rep.size()) * rep.size()) {
    const int n = rep.size();
    const int two_j = rep.two_j();
    for (int i = 0; i < n; ++i) {
        const auto col = wigner_d_column(two_j, 2 * i - two_j, M_PI_2);
        for (int row = 0; row < n; ++row) {
            values_[static_cast<std::size_t>(row) * n + i] = col[row];
        }
    }
    // Enforce the signed transpose symmetry psi(n,i) = (-1)^(n-i) psi(i,n)
    // exactly: average the two evaluations once and store both entries from
    // the same sum.
    for (int a = 0; a < n; ++a) {
        for (int b = a + 1; b < n; ++b) {
            const double sign = (b - a) % 2 ? -1.0 : 1.0;
            const double v = 0.5 * (values_[static_cast<std::size_t>(a) * n + b] +
                                    sign * values_[static_cast<std::size_t>(b) * n + a]);
            values_[static_cast<std::size_t>(a) * n + b] = v;
            values_[static_cast<std::size_t>(b) * n + a] = sign * v;
        }
    }
}

}  // namespace finrot
