#pragma once

// Complex dielectric constants and the dispersion models used for
// frequency-dependent components.
//
// Sign convention: exp(-i omega t). Loss enters with a positive imaginary
// part, e.g. eps = eps_inf + d_eps / (1 - i omega tau) + i s / (omega eps_vac).
// Every complex quantity in this library follows that convention.

#include <complex>
#include <numbers>
#include <string_view>
#include <variant>

namespace mtinv {

using Complex = std::complex<double>;

/// Vacuum permittivity in F/m.
inline constexpr double kVacuumPermittivity = 8.854187817e-12;

inline constexpr double angular_frequency(double hz) noexcept
{
    return 2.0 * std::numbers::pi * hz;
}

namespace dispersion {

struct Constant {
    Complex eps;
};

/// Single Debye relaxation with conductivity s (S/m).
struct Debye {
    double eps_inf;
    double delta_eps;
    double tau;
    double s;
};

struct ColeCole {
    double eps_inf;
    double delta_eps;
    double tau;
    double beta;
    double s_dc;
};

/// Cole-Cole with DC conductivity plus a universal dielectric response
/// term A * omega^s_exp added to the conductivity.
struct ColeColeUdr {
    double eps_inf;
    double delta_eps;
    double tau;
    double beta;
    double s_dc;
    double a;
    double s_exp;
};

} // namespace dispersion

using DispersionModel = std::variant<dispersion::Constant, dispersion::Debye, dispersion::ColeCole,
                                     dispersion::ColeColeUdr>;

/// Throws ValidationError when a parameter is outside its physical range.
void validate(const DispersionModel& model);

/// eps(omega) for angular frequency omega in rad/s.
///
/// Throws NonPositiveFrequency for omega < 0, and for omega == 0 when the
/// model carries a non-zero conductivity term.
Complex evaluate(const DispersionModel& model, double omega);

inline Complex evaluate_hz(const DispersionModel& model, double hz)
{
    return evaluate(model, angular_frequency(hz));
}

/// Config discriminator: "constant", "debye", "cole_cole" or "cole_cole_udr".
std::string_view type_name(const DispersionModel& model);

bool is_dispersive(const DispersionModel& model);

} // namespace mtinv
