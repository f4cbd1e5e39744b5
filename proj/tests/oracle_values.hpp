#pragma once

// Reference values from tests/oracles/oracles.py (mpmath, 40 digits).

#include <complex>

namespace oracle {

using C = std::complex<double>;

inline const C gamma_1_plus_i{0.49801566811835604271, -0.15494982830181068512};
inline const C gamma_03_m27i{0.028059879610273222993, 0.0094330718364571208619};
inline const C gamma_m35_025i{0.19321609924019879514, 0.069955781151855204843};

inline constexpr double j_155_at_1 = 0.22441456562924634736;
inline const C j_155_at_m1{0.035106172521446933696, -0.22165164993172895458};
inline const C j_03p2i_at_m75p1i{0.012372089120826150704, 0.010219306341193513999};
inline const C j_105p105i_at_m25{0.011503604850886921812, 0.009515108711366834183};

// lambda = -2.1i, Omega0 = 2
inline const C w0{0.0, 0.72984378812835756568};
inline const C coeff_alpha1{1.0702130642102242955, 0.34773330372767395116};
inline const C coeff_alpha1000{-1.3511604289630314326, -0.0089142002530795831724};
inline const C w_at_5{0.0, 0.006148103781897707261};
inline const C z_at_5{-0.45681685782373878278, 0.0};
inline const C z_at_40{-0.45683754362717440617, 0.0};

} // namespace oracle
