#pragma once

// Reference values from an independent integration of the same reduced ODE
// (adaptive 8th-order Dormand-Prince, rtol = atol = 1e-13, eps = 1e-6, roots
// by Brent's method, energies by Simpson on the dense output). Values with
// fewer digits were only recorded to that precision.

namespace frozen {

struct Pair {
  double lambda;
  double s_min;
  double s_mp;
  double e_min;
  double e_mp;
  double s_tol;  // recorded precision of s
  double e_tol;  // recorded precision of the energies (0: not recorded)
};

// Dirichlet, J.
inline constexpr double kDirichletZeroRoot = 22.436470882109;
inline constexpr double kDirichletZeroEnergy = 125.8488064;
inline constexpr double kDirichletZeroHeight = 9.3184;  // u(eps) of the nontrivial shot

inline constexpr Pair kDirichlet100{100, 13.655901482302943, 30.180083827475837,
                                    -14.347052, 19.990565, 1e-9, 1e-5};
inline constexpr Pair kDirichlet150{150, 22.489765, 31.670243, -34.90867, -29.90686, 1e-5, 1e-4};
inline constexpr Pair kDirichlet165{165, 26.511563870650956, 30.697551179818838,
                                    -43.824626, -43.371712, 1e-9, 1e-5};
inline constexpr double kDirichlet100HeightMin = 1.8892;
inline constexpr double kDirichlet100HeightMp = 7.9994;

// Navier with w(1) = w'(1) = s, energies I.
inline constexpr double kNavierZeroRoot = -5.480254493051678;
inline constexpr double kNavierZeroEnergy = 21.22409;
inline constexpr Pair kNavier5{5, -0.7128488552476252, -4.815872169423862, 0.005976, 13.94396,
                               1e-9, 1e-5};
inline constexpr Pair kNavier10{10, -1.843537, -3.732629, 0.0, 0.0, 1e-5, 0.0};
inline constexpr Pair kNavier11{11, -2.3164457961711524, -3.2690910194016762, 1.246461, 3.939333,
                                1e-9, 1e-5};

// Navier with w(1) = s, w'(1) = 0, energies I.
inline constexpr Pair kNavierZeroSlope5{5, -0.324645, -6.662896, -0.13372, 20.82054, 1e-5, 1e-4};

}  // namespace frozen
