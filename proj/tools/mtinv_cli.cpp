#include "mtinv/config.hpp"
#include "mtinv/diagnostics.hpp"
#include "mtinv/errors.hpp"
#include "mtinv/harness.hpp"
#include "mtinv/inverse.hpp"
#include "mtinv/minimizers.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace mtinv;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitInfeasible = 3;
constexpr int kExitNumerical = 4;

struct SystemArgs {
    std::string config;
    std::string system;
};

void add_system_options(CLI::App* cmd, SystemArgs& args)
{
    auto* cfg = cmd->add_option("--config", args.config, "Config JSON file")->check(CLI::ExistingFile);
    auto* sys = cmd->add_option("--system", args.system, "Builtin system: ms1, ms2 or ms3");
    cfg->excludes(sys);
}

Config resolve_config(const SystemArgs& args)
{
    if (!args.config.empty()) {
        return load_config(args.config);
    }
    if (!args.system.empty()) {
        Config cfg;
        cfg.system = builtin_system(args.system);
        return cfg;
    }
    throw ValidationError("one of --config or --system is required");
}

Eigen::VectorXd to_vector(const std::vector<double>& v)
{
    return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

std::vector<double> default_frequencies(const MaterialSystem& system)
{
    return {system.single_frequency_hz};
}

void print(const Json& j)
{
    std::cout << j.dump(2) << '\n';
}

void write_text(const std::string& path, const std::string& content)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw ValidationError("cannot write '" + path + "'");
    }
    out << content;
}

int cmd_forward(const SystemArgs& sa, const std::vector<double>& phi_in, std::vector<double> freqs)
{
    const Config cfg = resolve_config(sa);
    const Eigen::VectorXd phi = to_vector(phi_in);
    if (static_cast<std::size_t>(phi.size()) != cfg.system.size()) {
        throw ValidationError("phi: expected " + std::to_string(cfg.system.size()) + " fractions, got " +
                              std::to_string(phi.size()));
    }
    validate_fractions(phi);
    if (freqs.empty()) {
        freqs = default_frequencies(cfg.system);
    }
    std::vector<RawMeasurement> out;
    for (double f : freqs) {
        if (!(f > 0.0)) {
            throw NonPositiveFrequency("freqs: frequencies must be > 0");
        }
        out.push_back({f, forward_permittivity(cfg.system, phi, f)});
    }
    print(to_json(std::span<const RawMeasurement>(out)));
    return kExitOk;
}

int cmd_invert(const SystemArgs& sa, const std::string& meas_path, bool dominance, std::optional<double> noise)
{
    const Config cfg = resolve_config(sa);
    const auto raw = measurements_from_json(read_json_file(meas_path));
    const MeasurementSet meas = normalize(cfg.system, raw);
    InvertOptions opts;
    opts.enforce_dominance = dominance;
    const RecoveryReport rep = invert(cfg.system, meas, opts);

    SensitivityReport sens = sensitivity_at(cfg.system, meas.frequencies_hz, meas.eps_hat);
    if (noise && sens.identifiable) {
        sens.bound = error_bound(rep.t_star, sens.sigma_min, meas.size(), *noise, *noise,
                                 normalizer_modulus(cfg.system, meas.frequencies_hz));
    }
    Json out = to_json(rep);
    out["rank"] = sens.rank;
    out["sigma_min"] = sens.sigma_min;
    out["identifiable"] = sens.identifiable;
    out["bound"] = sens.bound ? Json(*sens.bound) : Json(nullptr);
    print(out);
    return sens.identifiable ? kExitOk : kExitInfeasible;
}

int cmd_minimizers(const SystemArgs& sa, const std::vector<double>& u_in, std::optional<double> freq,
                   const std::vector<double>& eps_hat_in, const std::string& domain)
{
    Eigen::VectorXd u;
    if (!u_in.empty()) {
        if (!sa.config.empty() || !sa.system.empty()) {
            throw ValidationError("--u cannot be combined with --config or --system");
        }
        u = to_vector(u_in);
    } else {
        if (eps_hat_in.empty() || eps_hat_in.size() > 2) {
            throw ValidationError("eps-hat: expected re or re,im");
        }
        const Config cfg = resolve_config(sa);
        const double f = freq.value_or(cfg.system.single_frequency_hz);
        const Complex eps_hat{eps_hat_in[0], eps_hat_in.size() > 1 ? eps_hat_in[1] : 0.0};
        u = build_u(system_pq(cfg.system, f), eps_hat).u.real();
    }
    const MinimizerSet set = domain == "ordered" ? ordered_simplex_minimizers(u) : simplex_minimizers(u);
    print(to_json(set));
    return kExitOk;
}

int cmd_diagnose(const SystemArgs& sa, std::size_t m, std::vector<double> freqs, const std::vector<double>& phi_in,
                 const std::string& meas_path, std::optional<double> t_star, std::optional<double> noise)
{
    const Config cfg = resolve_config(sa);
    const MaterialSystem& sys = cfg.system;
    std::vector<Complex> eps_hat;
    if (!meas_path.empty()) {
        const MeasurementSet meas = normalize(sys, measurements_from_json(read_json_file(meas_path)));
        freqs = meas.frequencies_hz;
        eps_hat = meas.eps_hat;
    } else {
        if (freqs.empty()) {
            freqs = select_frequencies(sys, m);
        }
        Eigen::VectorXd phi;
        if (!phi_in.empty()) {
            phi = to_vector(phi_in);
            if (static_cast<std::size_t>(phi.size()) != sys.size()) {
                throw ValidationError("phi: wrong number of fractions");
            }
            validate_fractions(phi);
        } else {
            phi = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(sys.size()), 1.0 / static_cast<double>(sys.size()));
            if (sys.sample_floor.size() == sys.size()) {
                double floor_sum = 0.0;
                for (double fl : sys.sample_floor) {
                    floor_sum += fl;
                }
                for (std::size_t i = 0; i < sys.size(); ++i) {
                    phi[static_cast<Eigen::Index>(i)] =
                        sys.sample_floor[i] + (1.0 - floor_sum) / static_cast<double>(sys.size());
                }
            }
        }
        for (double f : freqs) {
            eps_hat.push_back(forward_permittivity(sys, phi, f) / sys.normalizer_permittivity(f));
        }
    }
    SensitivityReport rep = sensitivity_at(sys, freqs, eps_hat);
    if (t_star && noise && rep.identifiable) {
        rep.bound = error_bound(*t_star, rep.sigma_min, freqs.size(), *noise, *noise, normalizer_modulus(sys, freqs));
    }
    Json out = to_json(rep);
    out["frequencies_hz"] = freqs;
    print(out);
    return rep.identifiable ? kExitOk : kExitInfeasible;
}

struct ValidateArgs {
    std::vector<std::size_t> m_values;
    std::optional<std::size_t> samples;
    std::optional<double> noise;
    std::optional<std::uint64_t> seed;
    std::optional<unsigned> workers;
    bool dominance = false;
    std::string csv;
    std::string summary;
};

int cmd_validate(const SystemArgs& sa, const ValidateArgs& va)
{
    Config cfg = resolve_config(sa);
    CampaignOptions& opt = cfg.campaign;
    if (!va.m_values.empty()) {
        opt.m_values = va.m_values;
    }
    if (va.samples) {
        opt.samples = *va.samples;
    }
    if (va.noise) {
        if (*va.noise < 0.0) {
            throw ValidationError("noise: must be >= 0");
        }
        opt.noise.delta_r = opt.noise.delta_i = *va.noise;
    }
    if (va.seed) {
        opt.noise.seed = *va.seed;
    }
    if (va.workers) {
        opt.workers = *va.workers;
    }
    if (va.dominance) {
        opt.enforce_dominance = true;
    }
    for (std::size_t m : opt.m_values) {
        if (m == 0) {
            throw ValidationError("m: values must be >= 1");
        }
    }
    const std::string csv_path = va.csv.empty() ? cfg.output.csv : va.csv;
    const std::string summary_path = va.summary.empty() ? cfg.output.summary : va.summary;

    const CampaignResult result = run_campaign(cfg.system, opt);
    if (!csv_path.empty()) {
        std::ostringstream os;
        write_csv(os, result);
        write_text(csv_path, os.str());
    }
    const Json summary = to_json(std::span<const Aggregate>(result.aggregates));
    if (!summary_path.empty()) {
        write_text(summary_path, summary.dump(2) + "\n");
    }
    print(summary);
    return kExitOk;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Volume-fraction recovery for dielectric composites"};
    app.require_subcommand(1);

    SystemArgs sa;

    auto* forward = app.add_subcommand("forward", "Effective permittivity of a composite");
    add_system_options(forward, sa);
    std::vector<double> phi;
    std::vector<double> freqs;
    forward->add_option("--phi", phi, "Volume fractions, comma separated")->delimiter(',')->required();
    forward->add_option("--freqs", freqs, "Frequencies in Hz, comma separated")->delimiter(',');

    auto* inv = app.add_subcommand("invert", "Recover volume fractions from measurements");
    add_system_options(inv, sa);
    std::string meas_path;
    bool dominance = false;
    std::optional<double> noise;
    inv->add_option("--measurements", meas_path, "Measurement JSON file")->required()->check(CLI::ExistingFile);
    inv->add_flag("--dominance", dominance, "Require phi_0 >= phi_i");
    inv->add_option("--noise", noise, "Noise half-width for the error bound");

    auto* mins = app.add_subcommand("minimizers", "Analytic minimizer set");
    add_system_options(mins, sa);
    std::vector<double> u;
    std::optional<double> freq;
    std::vector<double> eps_hat;
    std::string domain = "simplex";
    mins->add_option("--u", u, "Real u vector, comma separated")->delimiter(',');
    mins->add_option("--freq", freq, "Frequency in Hz");
    mins->add_option("--eps-hat", eps_hat, "Normalized measurement re[,im]")->delimiter(',');
    mins->add_option("--domain", domain, "simplex or ordered")->check(CLI::IsMember({"simplex", "ordered"}));

    auto* diag = app.add_subcommand("diagnose", "Constraint sensitivity and identifiability");
    add_system_options(diag, sa);
    std::size_t m = 1;
    std::optional<double> t_star;
    diag->add_option("--m", m, "Number of frequencies")->check(CLI::PositiveNumber);
    diag->add_option("--freqs", freqs, "Frequencies in Hz, comma separated")->delimiter(',');
    diag->add_option("--phi", phi, "Evaluation point, comma separated")->delimiter(',');
    diag->add_option("--measurements", meas_path, "Measurement JSON file")->check(CLI::ExistingFile);
    diag->add_option("--t-star", t_star, "Optimal objective for the error bound");
    diag->add_option("--noise", noise, "Noise half-width for the error bound");

    auto* val = app.add_subcommand("validate", "Monte Carlo validation campaign");
    add_system_options(val, sa);
    ValidateArgs va;
    val->add_option("--m", va.m_values, "Frequency counts, comma separated")->delimiter(',');
    val->add_option("--samples", va.samples, "Samples per m");
    val->add_option("--noise", va.noise, "Noise half-width (real and imaginary)");
    val->add_option("--seed", va.seed, "RNG seed");
    val->add_option("--workers", va.workers, "Worker threads (0 = all cores)");
    val->add_flag("--dominance", va.dominance, "Require phi_0 >= phi_i");
    val->add_option("--csv", va.csv, "Per-sample CSV output");
    val->add_option("--summary", va.summary, "Aggregate JSON output");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitValidation;
    }

    try {
        if (*forward) {
            return cmd_forward(sa, phi, freqs);
        }
        if (*inv) {
            return cmd_invert(sa, meas_path, dominance, noise);
        }
        if (*mins) {
            return cmd_minimizers(sa, u, freq, eps_hat, domain);
        }
        if (*diag) {
            return cmd_diagnose(sa, m, freqs, phi, meas_path, t_star, noise);
        }
        return cmd_validate(sa, va);
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const InfeasibleMeasurement& e) {
        std::cerr << "infeasible: " << e.what() << '\n';
        return kExitInfeasible;
    } catch (const EmptyMinimizerSet& e) {
        std::cerr << "empty minimizer set: " << e.what() << '\n';
        return kExitInfeasible;
    } catch (const Error& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    }
}
