#include "mtinv/material_system.hpp"

#include "mtinv/errors.hpp"

#include <cmath>
#include <numeric>

namespace mtinv {

void MaterialSystem::validate() const
{
    const auto n = components.size();
    if (n < 2) {
        throw ValidationError("material system '" + name + "': need at least two components");
    }
    for (const auto& c : components) {
        try {
            mtinv::validate(c.model);
        } catch (const ValidationError& e) {
            throw ValidationError("component '" + c.label + "': " + e.what());
        }
        if (!(c.shape.alpha > 0.0) || !std::isfinite(c.shape.alpha)) {
            throw ValidationError("component '" + c.label + "': aspect ratio must be finite and > 0");
        }
    }
    if (normalizer_index >= n) {
        throw ValidationError("material system '" + name + "': normalizer_index out of range");
    }
    if (!(band.f_low_hz > 0.0) || !(band.f_high_hz >= band.f_low_hz) || !std::isfinite(band.f_high_hz)) {
        throw ValidationError("material system '" + name + "': band must satisfy 0 < f_low <= f_high");
    }
    if (!(single_frequency_hz > 0.0) || !std::isfinite(single_frequency_hz)) {
        throw ValidationError("material system '" + name + "': single_frequency_hz must be > 0");
    }
    if (!sample_floor.empty()) {
        if (sample_floor.size() != n) {
            throw ValidationError("material system '" + name + "': sample_floor needs one entry per component");
        }
        for (double f : sample_floor) {
            if (!(f >= 0.0) || !std::isfinite(f)) {
                throw ValidationError("material system '" + name + "': sample_floor entries must be >= 0");
            }
        }
        if (std::accumulate(sample_floor.begin(), sample_floor.end(), 0.0) > 1.0 + 1e-12) {
            throw ValidationError("material system '" + name + "': sample_floor sums to more than 1");
        }
    }
}

bool MaterialSystem::all_spherical() const
{
    for (std::size_t i = 1; i < components.size(); ++i) {
        if (std::abs(components[i].shape.alpha - 1.0) >= kSphereAlphaTolerance) {
            return false;
        }
    }
    return true;
}

std::vector<Complex> MaterialSystem::permittivities(double f_hz) const
{
    std::vector<Complex> eps;
    eps.reserve(components.size());
    for (const auto& c : components) {
        eps.push_back(evaluate_hz(c.model, f_hz));
    }
    return eps;
}

Complex MaterialSystem::normalizer_permittivity(double f_hz) const
{
    return evaluate_hz(components.at(normalizer_index).model, f_hz);
}

Complex forward_permittivity(const MaterialSystem& system, const Eigen::VectorXd& phi, double f_hz)
{
    const auto eps = system.permittivities(f_hz);
    std::vector<SpheroidShape> shapes;
    shapes.reserve(system.size());
    for (const auto& c : system.components) {
        shapes.push_back(c.shape);
    }
    return effective_permittivity(eps, phi, shapes);
}

PQVectors system_pq(const MaterialSystem& system, double f_hz)
{
    if (!system.all_spherical()) {
        throw ValidationError("material system '" + system.name +
                              "': the linear-fractional form requires spherical inclusions");
    }
    const auto eps = system.permittivities(f_hz);
    auto pq = build_pq(contrasts(eps), f_hz);
    if (system.normalizer_index != 0) {
        pq.p *= eps[0] / eps[system.normalizer_index];
    }
    return pq;
}

namespace {

Component glass()
{
    return {"glass", dispersion::Constant{{5.5, 0.05}}, {}};
}

Component pores()
{
    return {"pores", dispersion::Constant{{1.0006, 0.0}}, {}};
}

} // namespace

MaterialSystem ms1()
{
    MaterialSystem s;
    s.name = "ms1";
    s.components = {
        {"epoxy", dispersion::Debye{2.90, 0.6, 1.5e-10, 1e-12}, {}},
        glass(),
        pores(),
    };
    s.band = {0.4e9, 3.0e9};
    s.single_frequency_hz = 2.0e9;
    s.sample_floor = {0.65, 0.1, 0.02};
    return s;
}

MaterialSystem ms2()
{
    MaterialSystem s;
    s.name = "ms2";
    s.components = {
        {"aggregate", dispersion::Constant{{5.5, 0.05}}, {}},
        {"cement_paste", dispersion::ColeCole{4.2, 0.8, 2.0e-10, 0.35, 2.0e-3}, {}},
        pores(),
    };
    s.band = {0.4e9, 3.0e9};
    s.single_frequency_hz = 2.0e9;
    s.sample_floor = {0.65, 0.1, 0.02};
    return s;
}

MaterialSystem ms3()
{
    MaterialSystem s;
    s.name = "ms3";
    s.components = {
        {"carbon_epoxy", dispersion::ColeColeUdr{3.0, 150.0, 2.0e-5, 0.35, 3.0e-4, 1.0e-9, 0.8}, {}},
        glass(),
        pores(),
    };
    s.band = {0.5e6, 1.0e6};
    s.single_frequency_hz = 0.5e6;
    s.sample_floor = {0.65, 0.1, 0.02};
    return s;
}

MaterialSystem builtin_system(std::string_view name)
{
    if (name == "ms1") {
        return ms1();
    }
    if (name == "ms2") {
        return ms2();
    }
    if (name == "ms3") {
        return ms3();
    }
    throw ValidationError("unknown built-in material system '" + std::string(name) + "' (expected ms1, ms2, ms3)");
}

} // namespace mtinv
