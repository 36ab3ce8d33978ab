#pragma once

#include "mtinv/forward_model.hpp"
#include "mtinv/permittivity.hpp"

#include <Eigen/Core>

#include <string>
#include <string_view>
#include <vector>

namespace mtinv {

struct Component {
    std::string label;
    DispersionModel model;
    SpheroidShape shape;
};

struct FrequencyBand {
    double f_low_hz = 0.0;
    double f_high_hz = 0.0;
};

/// Ordered component list (index 0 is the matrix) plus the measurement and
/// sampling setup used by the validation harness.
struct MaterialSystem {
    std::string name;
    std::vector<Component> components;
    /// Component whose permittivity normalizes contrasts and measurements.
    std::size_t normalizer_index = 0;
    FrequencyBand band;
    /// Frequency used when only one measurement is taken.
    double single_frequency_hz = 0.0;
    /// Per-component lower bounds on sampled true fractions.
    std::vector<double> sample_floor;

    [[nodiscard]] std::size_t size() const noexcept { return components.size(); }

    /// Throws ValidationError on any broken invariant.
    void validate() const;

    [[nodiscard]] bool all_spherical() const;

    /// Component permittivities at frequency `f_hz`.
    [[nodiscard]] std::vector<Complex> permittivities(double f_hz) const;

    [[nodiscard]] Complex normalizer_permittivity(double f_hz) const;
};

/// Un-normalized effective permittivity of the composite at `f_hz`
/// (general spheroid form).
Complex forward_permittivity(const MaterialSystem& system, const Eigen::VectorXd& phi, double f_hz);

/// p, q at `f_hz` such that (p . phi) / (q . phi) equals the effective
/// permittivity divided by the normalizer's permittivity. Contrasts are
/// taken against the matrix; when the normalizer is not the matrix, p is
/// scaled by eps_0 / eps_norm. Spherical inclusions only.
PQVectors system_pq(const MaterialSystem& system, double f_hz);

/// MS-1: epoxy (Debye) / glass / pores, 0.4-3.0 GHz.
MaterialSystem ms1();
/// MS-2: aggregate / Portland cement paste (Cole-Cole) / pores, 0.4-3.0 GHz.
MaterialSystem ms2();
/// MS-3: carbon-loaded epoxy (Cole-Cole + UDR) / glass / pores, 0.5-1.0 MHz.
MaterialSystem ms3();

/// Lookup by name ("ms1", "ms2", "ms3"); throws ValidationError otherwise.
MaterialSystem builtin_system(std::string_view name);

} // namespace mtinv
