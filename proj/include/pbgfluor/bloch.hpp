// bloch.hpp: frequency-domain solution of the linearized generalized Bloch equations
//
// Unknowns are ordered (sigma_-(omega + delta), sigma_+(omega - delta), sigma_z(omega)),
// noise channels likewise (n_-, n_+, n_z). A constant mean c transforms to 2 pi c delta(omega).

#pragma once

#include <Eigen/Dense>

#include "pbgfluor/errors.hpp"
#include "pbgfluor/params.hpp"

namespace pbgfluor {

using Matrix3c = Eigen::Matrix3cd;
using Vector3c = Eigen::Vector3cd;

// Channel indices into Matrix3c / Vector3c.
enum Channel : int { kMinus = 0, kPlus = 1, kZ = 2 };

// f = -i omega - i delta + G(omega), g = -i omega + i delta + Gc(omega),
// h = -i omega + G(omega) + Gc(omega).
struct Shorthand {
    double omega = 0.0;
    Complex f, g, h;
};

Shorthand shorthand(double omega, const PhysicalParams& params);

inline constexpr double kConditioningTolerance = 1e-10;

// D(omega) = rabi^2 (f + g) + 2 f g h, flagged when
// |D| < tol (rabi^3 + |omega|^3 + unit^3).
struct Denominator {
    Complex value;
    bool ill_conditioned = false;
};

Denominator denominator(double omega, const PhysicalParams& params,
                        double tol = kConditioningTolerance);

// M(omega) X(omega) = noise(omega) + delta_source delta(omega).
struct SystemMatrix {
    double omega = 0.0;
    Matrix3c matrix;
    Vector3c delta_source; // coefficient of delta(omega) on the right-hand side
};

// Zero-th order system; det(matrix) == D(omega) / 2.
SystemMatrix system_matrix(double omega, const PhysicalParams& params);

struct SteadyState {
    double sz = 0.0;
    Complex sm;
    Complex sp;
    double sz_imag = 0.0; // imaginary residual of the closed form for sigma_z
    Complex denominator;  // D(0)
};

// Means from the delta(omega) coefficients of the closed-form solution:
//   <sigma_z> = -2 f0 g0 G'0 / D0, <sigma_-> = -i g0 rabi G'0 / D0, <sigma_+> = i f0 rabi G'0 / D0.
// Throws ConditioningError when D(0) is flagged.
SteadyState steady_state(const PhysicalParams& params, double tol = kConditioningTolerance);

// Generic route: solve M(0) m = delta_source / (2 pi). Works for any SystemMatrix.
SteadyState steady_state_from_system(const SystemMatrix& at_zero);

// Maps (n'_-, n'_+, n_z) to (sigma_-, sigma_+, sigma_z) at frequency omega.
struct TransferMatrix {
    double omega = 0.0;
    Matrix3c coefficients;
    Complex denominator;
    bool ill_conditioned = false;
};

// Rational closed form in f, g, h, rabi over D(omega).
TransferMatrix solution_coefficients(double omega, const PhysicalParams& params,
                                     double tol = kConditioningTolerance);

// Cross-check path: numerical inverse of system.matrix.
TransferMatrix invert_system(const SystemMatrix& system, double conditioning_scale,
                             double tol = kConditioningTolerance);

} // namespace pbgfluor
