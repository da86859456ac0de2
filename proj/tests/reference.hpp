#pragma once

// Generated by tests/make_reference.py (mpmath, 60 significant digits).
// Do not edit by hand; regenerate instead.

namespace dyadic::ref {

// low-precision targets the suite must reproduce
inline constexpr double gamma_target  = 0.917576296;
inline constexpr double radius_target = 0.885765931;
inline constexpr double d0_target     = 0.8155665;
inline constexpr double ga_at_m1      = 3.170;
inline constexpr double ga_at_p1      = -0.092;
inline constexpr double ga_at_m45     = 2.650;
inline constexpr double ga_at_p45     = 0.040;
inline constexpr double gb_cap_r1     = 0.062;
inline constexpr double gb_cap_r45    = 0.031;

// high-precision values, rounded to nearest double
inline constexpr double beta = 7.93700525984099792e-01;
inline constexpr double alpha_0_0 = 1.89434929980133088e-01;
inline constexpr double alpha_1_0 = 8.04199649343933509e-01;
inline constexpr double alpha_2_1 = 1.03151953602446156e+00;
inline constexpr double alpha_5_2 = 1.01269924926272381e+00;
inline constexpr double big_m = 5.15759768012230779e-01;
inline constexpr double big_a = 8.16353521805096682e-01;
inline constexpr double z1 = 8.32090902908167673e-01;
inline constexpr double d0 = 8.15566506644287537e-01;
inline constexpr double d1 = 6.30012012400744809e-02;
inline constexpr double d2 = 4.13211206828758768e-02;
inline constexpr double d3 = 3.20468858225842687e-02;
inline constexpr double d10 = 1.96953352665430008e-02;
inline constexpr double d_prime_1 = -2.69573162139908840e-01;
inline constexpr double d_prime_2 = -1.00605489268854164e-02;
inline constexpr double big_d5 = 4.03830789108351948e-02;
inline constexpr double radius = 8.85765929317110512e-01;
inline constexpr double gamma = 9.17576298757732167e-01;
inline constexpr double h_beta8_r = 6.34323202374260386e+00;
inline constexpr double k_contraction = 3.42351659807332009e-01;
inline constexpr double a_tilde_3 = 3.68389252808387813e+00;
inline constexpr double a_tilde_4 = 6.34323202374260386e+00;
inline constexpr double gb_max_r1 = 3.43933124687212308e-02;
inline constexpr double gb_max_r45 = 1.51195523375924849e-02;
inline constexpr double sum_a_sq_n0_0 = 1.14208848879854075e+00;
inline constexpr double profile_a1 = 4.58788149378866084e-01;
inline constexpr double profile_a2 = 5.00000000000000000e-01;
inline constexpr double profile_a3 = 4.60486566010484766e-01;
inline constexpr double profile_a4 = 3.96452001483912742e-01;
inline constexpr double profile_a5 = 3.29931967403919169e-01;
inline constexpr double profile_a6 = 2.69441816812009460e-01;
inline constexpr double profile_a28 = 1.75011659102067719e-03;
inline constexpr double profile_a40 = 1.09382476085944814e-04;
inline constexpr double budget_c_l1 = 3.56533457625978167e+00;

// empirical: which index family of the rescaled sequence blows up
inline constexpr bool even_indices_diverge_below_gamma = true;
inline constexpr bool odd_indices_diverge_above_gamma  = true;

}  // namespace dyadic::ref
