#pragma once

// Test-only oracle: the defining alternating factorial sum for the Wigner
// little-d functions, evaluated in 50-digit multiprecision so cancellation
// cannot eat the digits we compare against. Independent of the recurrence
// path in the library.

#include <boost/multiprecision/cpp_bin_float.hpp>

namespace finrot_test {

using mp50 = boost::multiprecision::cpp_bin_float_50;

inline mp50 mp_factorial(int n) {
    mp50 acc = 1;
    for (int i = 2; i <= n; ++i) acc *= i;
    return acc;
}

/// d^j_{m',m}(beta) via the direct sum; doubled-integer arguments.
inline double wigner_little_d_direct(int two_j, int two_mp, int two_m, double beta) {
    const mp50 half_beta = mp50(beta) / 2;
    const mp50 c = cos(half_beta);
    const mp50 s = sin(half_beta);
    const int k_min = std::max(0, (two_m - two_mp) / 2);
    const int k_max = std::min((two_j + two_m) / 2, (two_j - two_mp) / 2);

    const mp50 prefactor = sqrt(mp_factorial((two_j + two_m) / 2) *
                                mp_factorial((two_j - two_m) / 2) *
                                mp_factorial((two_j + two_mp) / 2) *
                                mp_factorial((two_j - two_mp) / 2));
    mp50 total = 0;
    for (int k = k_min; k <= k_max; ++k) {
        const int sign = (k - (two_m - two_mp) / 2) % 2 ? -1 : 1;
        const mp50 denom = mp_factorial((two_j + two_m) / 2 - k) * mp_factorial(k) *
                           mp_factorial((two_j - two_mp) / 2 - k) *
                           mp_factorial(k - (two_m - two_mp) / 2);
        const int c_pow = two_j - 2 * k + (two_m - two_mp) / 2;
        const int s_pow = 2 * k - (two_m - two_mp) / 2;
        total += sign * pow(c, c_pow) * pow(s, s_pow) / denom;
    }
    return static_cast<double>(prefactor * total);
}

}  // namespace finrot_test
