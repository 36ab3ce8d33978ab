#include "mtinv/permittivity.hpp"

#include "mtinv/errors.hpp"

#include <cmath>
#include <string>

namespace mtinv {
namespace {

using namespace std::complex_literals;

void require(bool ok, const char* what)
{
    if (!ok) {
        throw ValidationError(std::string("dispersion model: ") + what);
    }
}

void check_relaxation(double eps_inf, double delta_eps, double tau)
{
    require(std::isfinite(eps_inf) && eps_inf > 0.0, "eps_inf must be finite and > 0");
    require(std::isfinite(delta_eps) && delta_eps >= 0.0, "delta_eps must be finite and >= 0");
    require(std::isfinite(tau) && tau > 0.0, "tau must be finite and > 0");
}

void check_frequency(double omega, bool conducting)
{
    if (!std::isfinite(omega) || omega < 0.0 || (conducting && omega == 0.0)) {
        throw NonPositiveFrequency("angular frequency must be > 0 for a conducting dispersion model, got " +
                                   std::to_string(omega));
    }
}

// d_eps / (1 + (-i omega tau)^(1 - beta)), principal branch.
Complex cole_cole_term(double delta_eps, double tau, double beta, double omega)
{
    if (omega == 0.0) {
        return delta_eps;
    }
    const Complex base{0.0, -omega * tau};
    return delta_eps / (1.0 + std::pow(base, 1.0 - beta));
}

Complex conduction_term(double sigma, double omega)
{
    if (sigma == 0.0) {
        return 0.0;
    }
    return 1i * sigma / (omega * kVacuumPermittivity);
}

struct Validator {
    void operator()(const dispersion::Constant& m) const
    {
        require(std::isfinite(m.eps.real()) && std::isfinite(m.eps.imag()), "constant eps must be finite");
        require(m.eps.real() > 0.0, "constant eps must have a positive real part");
        require(m.eps.imag() >= 0.0, "constant eps must have a non-negative imaginary part");
    }
    void operator()(const dispersion::Debye& m) const
    {
        check_relaxation(m.eps_inf, m.delta_eps, m.tau);
        require(std::isfinite(m.s) && m.s >= 0.0, "s must be finite and >= 0");
    }
    void operator()(const dispersion::ColeCole& m) const
    {
        check_relaxation(m.eps_inf, m.delta_eps, m.tau);
        require(m.beta >= 0.0 && m.beta < 1.0, "beta must lie in [0, 1)");
        require(std::isfinite(m.s_dc) && m.s_dc >= 0.0, "s_dc must be finite and >= 0");
    }
    void operator()(const dispersion::ColeColeUdr& m) const
    {
        check_relaxation(m.eps_inf, m.delta_eps, m.tau);
        require(m.beta >= 0.0 && m.beta < 1.0, "beta must lie in [0, 1)");
        require(std::isfinite(m.s_dc) && m.s_dc >= 0.0, "s_dc must be finite and >= 0");
        require(std::isfinite(m.a) && m.a >= 0.0, "A must be finite and >= 0");
        require(m.s_exp > 0.0 && m.s_exp < 1.0, "s_exp must lie in (0, 1)");
    }
};

struct Evaluator {
    double omega;

    Complex operator()(const dispersion::Constant& m) const
    {
        check_frequency(omega, false);
        return m.eps;
    }
    Complex operator()(const dispersion::Debye& m) const
    {
        check_frequency(omega, m.s != 0.0);
        return m.eps_inf + m.delta_eps / Complex{1.0, -omega * m.tau} + conduction_term(m.s, omega);
    }
    Complex operator()(const dispersion::ColeCole& m) const
    {
        check_frequency(omega, m.s_dc != 0.0);
        return m.eps_inf + cole_cole_term(m.delta_eps, m.tau, m.beta, omega) + conduction_term(m.s_dc, omega);
    }
    Complex operator()(const dispersion::ColeColeUdr& m) const
    {
        check_frequency(omega, m.s_dc != 0.0 || m.a != 0.0);
        const double sigma = m.s_dc + (m.a == 0.0 ? 0.0 : m.a * std::pow(omega, m.s_exp));
        return m.eps_inf + cole_cole_term(m.delta_eps, m.tau, m.beta, omega) + conduction_term(sigma, omega);
    }
};

} // namespace

void validate(const DispersionModel& model)
{
    std::visit(Validator{}, model);
}

Complex evaluate(const DispersionModel& model, double omega)
{
    return std::visit(Evaluator{omega}, model);
}

std::string_view type_name(const DispersionModel& model)
{
    static constexpr std::string_view names[] = {"constant", "debye", "cole_cole", "cole_cole_udr"};
    return names[model.index()];
}

bool is_dispersive(const DispersionModel& model)
{
    return !std::holds_alternative<dispersion::Constant>(model);
}

} // namespace mtinv
