#pragma once

// Monte Carlo validation: sample true splits, synthesize noisy measurements
// with the forward model, invert, and aggregate error statistics.

#include "mtinv/inverse.hpp"
#include "mtinv/material_system.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <iosfwd>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace mtinv {

/// Seedable generator with a portable output sequence. Each (seed, stream,
/// substream) triple yields an independent mt19937_64 stream, so per-sample
/// results do not depend on how samples are distributed over workers.
class SampleRng {
public:
    SampleRng(std::uint64_t seed, std::uint64_t stream, std::uint64_t substream = 0);

    /// Uniform on [0, 1), 53 random bits.
    double uniform();
    double uniform(double lo, double hi);
    /// Standard exponential.
    double exponential();

private:
    std::mt19937_64 engine_;
};

struct NoiseSpec {
    double delta_r = 0.0;
    double delta_i = 0.0;
    std::uint64_t seed = 0;
};

/// floor + (1 - sum(floor)) w with w uniform on the standard simplex.
Eigen::VectorXd sample_phi_true(std::span<const double> floor, SampleRng& rng);

/// m == 1: the system's single frequency; m >= 2: m equally spaced points
/// spanning the band, both endpoints included.
std::vector<double> select_frequencies(const MaterialSystem& system, std::size_t m);

/// Forward value at each frequency, plus U(-dR, dR) + i U(-dI, dI), then
/// divided by the normalizer permittivity at that frequency.
MeasurementSet synthesize_measurement(const MaterialSystem& system, const Eigen::VectorXd& phi_true,
                                      std::span<const double> frequencies_hz, const NoiseSpec& noise,
                                      SampleRng& rng);

struct RunResult {
    std::size_t sample_id = 0;
    std::size_t m = 0;
    std::vector<double> frequencies_hz;
    Eigen::VectorXd phi_true;
    Eigen::VectorXd phi_star;
    double t_star = 0.0;
    double sigma_min = 0.0;
    double bound = 0.0;
    double err_inf = 0.0;
    LPStatus status = LPStatus::NumericalFailure;
};

struct Aggregate {
    std::string system;
    std::size_t m = 0;
    std::size_t samples = 0;
    double max_err_inf = 0.0;
    double max_t_star = 0.0;
    double min_sigma_min = 0.0;
    std::size_t failures = 0;
    /// Non-failed samples with err_inf > bound + 1e-8.
    std::size_t bound_violations = 0;
};

struct CampaignOptions {
    std::vector<std::size_t> m_values{1, 2, 3, 4, 5};
    std::size_t samples = 1000;
    NoiseSpec noise{0.1, 0.1, 42};
    /// 0 selects std::thread::hardware_concurrency().
    unsigned workers = 0;
    bool enforce_dominance = false;
};

struct CampaignResult {
    std::string system;
    /// Ordered by m (as given) then sample id.
    std::vector<RunResult> runs;
    std::vector<Aggregate> aggregates;
};

/// One sample: phi_true from stream (seed, sample_id), noise from stream
/// (seed, sample_id, m).
RunResult run_sample(const MaterialSystem& system, std::size_t m, std::size_t sample_id, const NoiseSpec& noise,
                     bool enforce_dominance = false);

CampaignResult run_campaign(const MaterialSystem& system, const CampaignOptions& options);

/// Header: sample_id,m,f1..fM,phi_true_0..,phi_star_0..,t_star,sigma_min,bound,err_inf,status
/// where M is the largest m in the campaign; unused frequency cells are empty.
/// Numbers use 17 significant digits.
void write_csv(std::ostream& os, const CampaignResult& result);

} // namespace mtinv
