#include "mtinv/forward_model.hpp"

#include "mtinv/errors.hpp"

#include <cmath>
#include <string>

namespace mtinv {

double depolarization_q(SpheroidShape shape)
{
    const double a = shape.alpha;
    if (!(a > 0.0) || !std::isfinite(a)) {
        throw ValidationError("spheroid aspect ratio must be finite and > 0, got " + std::to_string(a));
    }
    if (std::abs(a - 1.0) < kSphereAlphaTolerance) {
        return 1.0 / 3.0;
    }
    if (a > 1.0) {
        // prolate
        const double e2 = a * a - 1.0;
        const double e = std::sqrt(e2);
        return a / (2.0 * e2 * e) * (a * e - std::acosh(a));
    }
    // oblate
    const double e2 = 1.0 - a * a;
    const double e = std::sqrt(e2);
    return a / (2.0 * e2 * e) * (std::acos(a) - a * e);
}

Complex concentration_r(Complex eps_i, Complex eps_0, SpheroidShape shape)
{
    if (eps_0 == Complex{}) {
        throw ValidationError("matrix permittivity must be non-zero");
    }
    const double q = depolarization_q(shape);
    const Complex contrast = (eps_i - eps_0) / eps_0;
    const double diag[3] = {q, q, 1.0 - 2.0 * q};
    Complex sum{};
    for (double a_jj : diag) {
        const Complex bracket = 1.0 + a_jj * contrast;
        if (std::abs(bracket) == 0.0) {
            throw SingularDenominator("concentration factor bracket vanished");
        }
        sum += 1.0 / bracket;
    }
    return sum / 3.0;
}

void validate_fractions(const Eigen::VectorXd& phi, double tol)
{
    if (phi.size() < 1) {
        throw ValidationError("volume fractions: empty vector");
    }
    for (Eigen::Index i = 0; i < phi.size(); ++i) {
        if (!std::isfinite(phi[i]) || phi[i] < -tol || phi[i] > 1.0 + tol) {
            throw ValidationError("volume fractions: phi_" + std::to_string(i) + " = " + std::to_string(phi[i]) +
                                  " is outside [0, 1]");
        }
    }
    const double sum = phi.sum();
    if (std::abs(sum - 1.0) > tol) {
        throw ValidationError("volume fractions: entries must sum to 1, got sum = " + std::to_string(sum));
    }
}

Complex effective_permittivity(std::span<const Complex> eps, const Eigen::VectorXd& phi,
                               std::span<const SpheroidShape> shapes)
{
    const auto n = eps.size();
    if (n == 0 || static_cast<std::size_t>(phi.size()) != n) {
        throw ValidationError("effective_permittivity: " + std::to_string(phi.size()) + " fractions for " +
                              std::to_string(n) + " components");
    }
    if (!shapes.empty() && shapes.size() != n) {
        throw ValidationError("effective_permittivity: shapes must be empty or one per component");
    }
    Complex num = phi[0] * eps[0];
    Complex den = phi[0];
    for (std::size_t i = 1; i < n; ++i) {
        const SpheroidShape shape = shapes.empty() ? SpheroidShape::sphere() : shapes[i];
        const Complex r = concentration_r(eps[i], eps[0], shape);
        num += phi[static_cast<Eigen::Index>(i)] * eps[i] * r;
        den += phi[static_cast<Eigen::Index>(i)] * r;
    }
    if (std::abs(den) == 0.0) {
        throw SingularDenominator("effective_permittivity: sum(phi_i R_i) vanished");
    }
    return num / den;
}

std::vector<Complex> contrasts(std::span<const Complex> eps)
{
    if (eps.size() < 2) {
        throw ValidationError("contrasts: need at least two components");
    }
    if (eps[0] == Complex{}) {
        throw ValidationError("contrasts: matrix permittivity must be non-zero");
    }
    std::vector<Complex> r;
    r.reserve(eps.size() - 1);
    for (std::size_t i = 1; i < eps.size(); ++i) {
        r.push_back(eps[i] / eps[0] - 1.0);
    }
    return r;
}

Complex PQVectors::ratio(const Eigen::VectorXd& phi) const
{
    const Complex num = linear_form(p, phi);
    const Complex den = linear_form(q, phi);
    if (std::abs(den) == 0.0) {
        throw SingularDenominator("q . phi vanished");
    }
    return num / den;
}

PQVectors build_pq(std::span<const Complex> r, double frequency_hz)
{
    const auto n = r.size() + 1;
    if (n < 2) {
        throw ValidationError("build_pq: need at least one inclusion contrast");
    }
    PQVectors pq;
    pq.frequency_hz = frequency_hz;
    pq.p.resize(static_cast<Eigen::Index>(n));
    pq.q.resize(static_cast<Eigen::Index>(n));

    // Products are formed directly (no division by 3 + r_i, which may vanish).
    Complex all{1.0};
    for (const Complex& rk : r) {
        all *= 3.0 + rk;
    }
    pq.p[0] = all;
    pq.q[0] = all;
    for (std::size_t i = 1; i < n; ++i) {
        Complex others{1.0};
        for (std::size_t j = 1; j < n; ++j) {
            if (j != i) {
                others *= 3.0 + r[j - 1];
            }
        }
        const auto idx = static_cast<Eigen::Index>(i);
        pq.q[idx] = 3.0 * others;
        pq.p[idx] = 3.0 * (1.0 + r[i - 1]) * others;
    }
    return pq;
}

} // namespace mtinv
