#include "mtinv/harness.hpp"

#include "mtinv/diagnostics.hpp"
#include "mtinv/errors.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <thread>

namespace mtinv {

using Eigen::Index;
using Eigen::VectorXd;

namespace {

std::seed_seq make_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t substream)
{
    auto lo = [](std::uint64_t v) { return static_cast<std::uint32_t>(v & 0xffffffffu); };
    auto hi = [](std::uint64_t v) { return static_cast<std::uint32_t>(v >> 32); };
    return std::seed_seq{lo(seed), hi(seed), lo(stream), hi(stream), lo(substream), hi(substream)};
}

std::string format_number(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace

SampleRng::SampleRng(std::uint64_t seed, std::uint64_t stream, std::uint64_t substream)
{
    auto seq = make_seed(seed, stream, substream);
    engine_.seed(seq);
}

double SampleRng::uniform()
{
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double SampleRng::uniform(double lo, double hi)
{
    return lo + (hi - lo) * uniform();
}

double SampleRng::exponential()
{
    return -std::log1p(-uniform());
}

VectorXd sample_phi_true(std::span<const double> floor, SampleRng& rng)
{
    const auto n = static_cast<Index>(floor.size());
    if (n < 1) {
        throw ValidationError("sample_phi_true: empty floor");
    }
    double floor_sum = 0.0;
    for (double f : floor) {
        if (!(f >= 0.0)) {
            throw ValidationError("sample_phi_true: floors must be >= 0");
        }
        floor_sum += f;
    }
    const double slack = 1.0 - floor_sum;
    if (slack < -1e-12) {
        throw ValidationError("sample_phi_true: floors sum to more than 1");
    }
    VectorXd w(n);
    for (Index i = 0; i < n; ++i) {
        w[i] = rng.exponential();
    }
    w /= w.sum();
    VectorXd phi(n);
    for (Index i = 0; i < n; ++i) {
        phi[i] = floor[static_cast<std::size_t>(i)] + std::max(slack, 0.0) * w[i];
    }
    return phi;
}

std::vector<double> select_frequencies(const MaterialSystem& system, std::size_t m)
{
    if (m == 0) {
        throw ValidationError("select_frequencies: m must be >= 1");
    }
    if (m == 1) {
        return {system.single_frequency_hz};
    }
    std::vector<double> out(m);
    const double lo = system.band.f_low_hz;
    const double hi = system.band.f_high_hz;
    for (std::size_t k = 0; k < m; ++k) {
        out[k] = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(m - 1);
    }
    out.back() = hi;
    return out;
}

MeasurementSet synthesize_measurement(const MaterialSystem& system, const VectorXd& phi_true,
                                      std::span<const double> frequencies_hz, const NoiseSpec& noise,
                                      SampleRng& rng)
{
    if (noise.delta_r < 0.0 || noise.delta_i < 0.0) {
        throw ValidationError("noise half-widths must be >= 0");
    }
    MeasurementSet set;
    set.normalizer_index = system.normalizer_index;
    for (double f : frequencies_hz) {
        Complex value = forward_permittivity(system, phi_true, f);
        // Both draws are always taken so the stream layout does not depend on
        // which half-widths are zero.
        const double nr = rng.uniform(-noise.delta_r, noise.delta_r);
        const double ni = rng.uniform(-noise.delta_i, noise.delta_i);
        value += Complex{nr, ni};
        set.frequencies_hz.push_back(f);
        set.eps_hat.push_back(value / system.normalizer_permittivity(f));
    }
    return set;
}

RunResult run_sample(const MaterialSystem& system, std::size_t m, std::size_t sample_id, const NoiseSpec& noise,
                     bool enforce_dominance)
{
    RunResult r;
    r.sample_id = sample_id;
    r.m = m;
    r.frequencies_hz = select_frequencies(system, m);

    SampleRng phi_rng(noise.seed, sample_id);
    r.phi_true = sample_phi_true(system.sample_floor, phi_rng);

    SampleRng noise_rng(noise.seed, sample_id, m);
    const MeasurementSet meas = synthesize_measurement(system, r.phi_true, r.frequencies_hz, noise, noise_rng);

    std::vector<Complex> truth;
    truth.reserve(m);
    for (double f : r.frequencies_hz) {
        truth.push_back(forward_permittivity(system, r.phi_true, f) / system.normalizer_permittivity(f));
    }
    r.sigma_min = sensitivity_at(system, r.frequencies_hz, truth).sigma_min;

    InvertOptions opts;
    opts.enforce_dominance = enforce_dominance;
    std::vector<PQVectors> pq;
    for (double f : r.frequencies_hz) {
        pq.push_back(system_pq(system, f));
    }
    const RecoveryReport rep = solve_multifreq(assemble_multifreq(pq, meas, enforce_dominance), opts.lp);
    r.status = rep.status;
    r.phi_star = rep.phi_star;
    r.t_star = rep.t_star;
    r.err_inf = (r.phi_star - r.phi_true).cwiseAbs().maxCoeff();
    if (r.sigma_min > 1e-14) {
        r.bound = error_bound(r.t_star, r.sigma_min, m, noise.delta_r, noise.delta_i,
                              normalizer_modulus(system, r.frequencies_hz));
    } else {
        r.bound = kInf;
    }
    return r;
}

CampaignResult run_campaign(const MaterialSystem& system, const CampaignOptions& options)
{
    system.validate();
    if (options.samples == 0) {
        throw ValidationError("run_campaign: samples must be >= 1");
    }
    if (options.m_values.empty()) {
        throw ValidationError("run_campaign: no m values");
    }
    if (system.sample_floor.size() != system.size()) {
        throw ValidationError("run_campaign: material system has no sampling floor");
    }

    CampaignResult out;
    out.system = system.name;
    const std::size_t per_m = options.samples;
    const std::size_t total = per_m * options.m_values.size();
    out.runs.resize(total);

    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t job = next.fetch_add(1); job < total; job = next.fetch_add(1)) {
            const std::size_t m = options.m_values[job / per_m];
            const std::size_t id = job % per_m;
            try {
                out.runs[job] = run_sample(system, m, id, options.noise, options.enforce_dominance);
            } catch (const Error&) {
                RunResult failed;
                failed.sample_id = id;
                failed.m = m;
                failed.frequencies_hz = select_frequencies(system, m);
                failed.status = LPStatus::NumericalFailure;
                out.runs[job] = std::move(failed);
            }
        }
    };
    unsigned workers = options.workers ? options.workers : std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, total));
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back(work);
        }
    }

    for (std::size_t mi = 0; mi < options.m_values.size(); ++mi) {
        Aggregate agg;
        agg.system = system.name;
        agg.m = options.m_values[mi];
        agg.samples = per_m;
        agg.min_sigma_min = kInf;
        for (std::size_t id = 0; id < per_m; ++id) {
            const RunResult& r = out.runs[mi * per_m + id];
            if (r.status != LPStatus::Optimal) {
                ++agg.failures;
                continue;
            }
            agg.max_err_inf = std::max(agg.max_err_inf, r.err_inf);
            agg.max_t_star = std::max(agg.max_t_star, r.t_star);
            agg.min_sigma_min = std::min(agg.min_sigma_min, r.sigma_min);
            if (r.err_inf > r.bound + 1e-8) {
                ++agg.bound_violations;
            }
        }
        out.aggregates.push_back(agg);
    }
    return out;
}

void write_csv(std::ostream& os, const CampaignResult& result)
{
    std::size_t max_m = 0;
    Index n = 0;
    for (const auto& r : result.runs) {
        max_m = std::max(max_m, r.m);
        n = std::max(n, r.phi_true.size());
    }
    os << "sample_id,m";
    for (std::size_t k = 1; k <= max_m; ++k) {
        os << ",f" << k;
    }
    for (Index i = 0; i < n; ++i) {
        os << ",phi_true_" << i;
    }
    for (Index i = 0; i < n; ++i) {
        os << ",phi_star_" << i;
    }
    os << ",t_star,sigma_min,bound,err_inf,status\n";

    auto cell = [&](const VectorXd& v, Index i) {
        os << ',';
        if (i < v.size()) {
            os << format_number(v[i]);
        }
    };
    for (const auto& r : result.runs) {
        os << r.sample_id << ',' << r.m;
        for (std::size_t k = 0; k < max_m; ++k) {
            os << ',';
            if (k < r.frequencies_hz.size()) {
                os << format_number(r.frequencies_hz[k]);
            }
        }
        for (Index i = 0; i < n; ++i) {
            cell(r.phi_true, i);
        }
        for (Index i = 0; i < n; ++i) {
            cell(r.phi_star, i);
        }
        os << ',' << format_number(r.t_star) << ',' << format_number(r.sigma_min) << ',' << format_number(r.bound)
           << ',' << format_number(r.err_inf) << ',' << to_string(r.status) << '\n';
    }
}

} // namespace mtinv
