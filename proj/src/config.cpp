#include "mtinv/config.hpp"

#include "mtinv/errors.hpp"

#include <algorithm>
#include <fstream>
#include <initializer_list>
#include <set>
#include <type_traits>

namespace mtinv {

namespace {

using Eigen::Index;

std::string where(std::string_view ctx, std::string_view key)
{
    return std::string(ctx) + "." + std::string(key);
}

void require_object(const Json& j, std::string_view ctx)
{
    if (!j.is_object()) {
        throw ValidationError(std::string(ctx) + ": expected an object");
    }
}

void check_keys(const Json& j, std::string_view ctx, std::initializer_list<std::string_view> allowed)
{
    require_object(j, ctx);
    for (const auto& item : j.items()) {
        if (std::find(allowed.begin(), allowed.end(), item.key()) == allowed.end()) {
            throw ValidationError(std::string(ctx) + ": unknown field '" + item.key() + "'");
        }
    }
}

const Json& field(const Json& j, std::string_view ctx, std::string_view key)
{
    const auto it = j.find(std::string(key));
    if (it == j.end()) {
        throw ValidationError(where(ctx, key) + ": missing");
    }
    return *it;
}

double number(const Json& j, std::string_view ctx, std::string_view key)
{
    const Json& v = field(j, ctx, key);
    if (!v.is_number()) {
        throw ValidationError(where(ctx, key) + ": expected a number");
    }
    return v.get<double>();
}

double number_or(const Json& j, std::string_view ctx, std::string_view key, double fallback)
{
    return j.contains(std::string(key)) ? number(j, ctx, key) : fallback;
}

std::size_t count(const Json& v, const std::string& ctx)
{
    if (!v.is_number_integer() || v.get<long long>() < 0) {
        throw ValidationError(ctx + ": expected a non-negative integer");
    }
    return v.get<std::size_t>();
}

std::string text(const Json& j, std::string_view ctx, std::string_view key)
{
    const Json& v = field(j, ctx, key);
    if (!v.is_string()) {
        throw ValidationError(where(ctx, key) + ": expected a string");
    }
    return v.get<std::string>();
}

bool flag(const Json& v, const std::string& ctx)
{
    if (!v.is_boolean()) {
        throw ValidationError(ctx + ": expected a boolean");
    }
    return v.get<bool>();
}

Json vector_json(const Eigen::VectorXd& v)
{
    Json out = Json::array();
    for (Index i = 0; i < v.size(); ++i) {
        out.push_back(v[i]);
    }
    return out;
}

Json number_or_null(double v)
{
    return std::isfinite(v) ? Json(v) : Json(nullptr);
}

} // namespace

DispersionModel dispersion_from_json(const Json& j)
{
    constexpr std::string_view ctx = "dispersion";
    require_object(j, ctx);
    const std::string type = text(j, ctx, "type");
    DispersionModel model;
    if (type == "constant") {
        check_keys(j, ctx, {"type", "re", "im"});
        model = dispersion::Constant{Complex{number(j, ctx, "re"), number_or(j, ctx, "im", 0.0)}};
    } else if (type == "debye") {
        check_keys(j, ctx, {"type", "eps_inf", "delta_eps", "tau", "s"});
        model = dispersion::Debye{number(j, ctx, "eps_inf"), number(j, ctx, "delta_eps"), number(j, ctx, "tau"),
                                  number_or(j, ctx, "s", 0.0)};
    } else if (type == "cole_cole") {
        check_keys(j, ctx, {"type", "eps_inf", "delta_eps", "tau", "beta", "s_dc"});
        model = dispersion::ColeCole{number(j, ctx, "eps_inf"), number(j, ctx, "delta_eps"), number(j, ctx, "tau"),
                                     number(j, ctx, "beta"), number_or(j, ctx, "s_dc", 0.0)};
    } else if (type == "cole_cole_udr") {
        check_keys(j, ctx, {"type", "eps_inf", "delta_eps", "tau", "beta", "s_dc", "A", "s_exp"});
        model = dispersion::ColeColeUdr{number(j, ctx, "eps_inf"), number(j, ctx, "delta_eps"),
                                        number(j, ctx, "tau"),     number(j, ctx, "beta"),
                                        number_or(j, ctx, "s_dc", 0.0), number(j, ctx, "A"),
                                        number(j, ctx, "s_exp")};
    } else {
        throw ValidationError("dispersion.type: unknown model '" + type + "'");
    }
    validate(model);
    return model;
}

Json to_json(const DispersionModel& model)
{
    return std::visit(
        [](const auto& m) -> Json {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, dispersion::Constant>) {
                return {{"type", "constant"}, {"re", m.eps.real()}, {"im", m.eps.imag()}};
            } else if constexpr (std::is_same_v<T, dispersion::Debye>) {
                return {{"type", "debye"}, {"eps_inf", m.eps_inf}, {"delta_eps", m.delta_eps}, {"tau", m.tau},
                        {"s", m.s}};
            } else if constexpr (std::is_same_v<T, dispersion::ColeCole>) {
                return {{"type", "cole_cole"}, {"eps_inf", m.eps_inf}, {"delta_eps", m.delta_eps},
                        {"tau", m.tau},        {"beta", m.beta},       {"s_dc", m.s_dc}};
            } else {
                return {{"type", "cole_cole_udr"}, {"eps_inf", m.eps_inf}, {"delta_eps", m.delta_eps},
                        {"tau", m.tau},            {"beta", m.beta},       {"s_dc", m.s_dc},
                        {"A", m.a},                {"s_exp", m.s_exp}};
            }
        },
        model);
}

MaterialSystem system_from_json(const Json& j)
{
    if (j.is_string()) {
        return builtin_system(j.get<std::string>());
    }
    constexpr std::string_view ctx = "system";
    check_keys(j, ctx,
               {"name", "components", "matrix_index", "normalizer_index", "band", "single_frequency_hz",
                "sample_floor"});
    MaterialSystem sys;
    sys.name = j.contains("name") ? text(j, ctx, "name") : std::string("custom");

    const Json& comps = field(j, ctx, "components");
    if (!comps.is_array()) {
        throw ValidationError("system.components: expected an array");
    }
    for (std::size_t i = 0; i < comps.size(); ++i) {
        const std::string cctx = "system.components[" + std::to_string(i) + "]";
        check_keys(comps[i], cctx, {"label", "dispersion", "aspect_ratio"});
        Component c;
        c.label = text(comps[i], cctx, "label");
        c.model = dispersion_from_json(field(comps[i], cctx, "dispersion"));
        c.shape.alpha = number_or(comps[i], cctx, "aspect_ratio", 1.0);
        sys.components.push_back(std::move(c));
    }
    if (j.contains("matrix_index") && count(j["matrix_index"], "system.matrix_index") != 0) {
        throw ValidationError("system.matrix_index: the matrix must be component 0");
    }
    if (j.contains("normalizer_index")) {
        sys.normalizer_index = count(j["normalizer_index"], "system.normalizer_index");
    }
    if (j.contains("band")) {
        check_keys(j["band"], "system.band", {"f_low_hz", "f_high_hz"});
        sys.band.f_low_hz = number(j["band"], "system.band", "f_low_hz");
        sys.band.f_high_hz = number(j["band"], "system.band", "f_high_hz");
    }
    sys.single_frequency_hz = number_or(j, ctx, "single_frequency_hz", sys.band.f_low_hz);
    if (j.contains("sample_floor")) {
        const Json& fl = j["sample_floor"];
        if (!fl.is_array()) {
            throw ValidationError("system.sample_floor: expected an array");
        }
        for (const auto& v : fl) {
            if (!v.is_number()) {
                throw ValidationError("system.sample_floor: expected numbers");
            }
            sys.sample_floor.push_back(v.get<double>());
        }
    }
    sys.validate();
    return sys;
}

Json to_json(const MaterialSystem& system)
{
    Json comps = Json::array();
    for (const auto& c : system.components) {
        Json cj{{"label", c.label}, {"dispersion", to_json(c.model)}};
        if (c.shape.alpha != 1.0) {
            cj["aspect_ratio"] = c.shape.alpha;
        }
        comps.push_back(std::move(cj));
    }
    return {{"name", system.name},
            {"components", std::move(comps)},
            {"matrix_index", 0},
            {"normalizer_index", system.normalizer_index},
            {"band", {{"f_low_hz", system.band.f_low_hz}, {"f_high_hz", system.band.f_high_hz}}},
            {"single_frequency_hz", system.single_frequency_hz},
            {"sample_floor", system.sample_floor}};
}

Config config_from_json(const Json& j)
{
    check_keys(j, "config", {"system", "campaign", "output"});
    Config cfg;
    cfg.system = system_from_json(field(j, "config", "system"));
    if (j.contains("campaign")) {
        const Json& c = j["campaign"];
        constexpr std::string_view ctx = "campaign";
        check_keys(c, ctx, {"m_values", "samples", "noise", "seed", "workers", "enforce_dominance"});
        if (c.contains("m_values")) {
            if (!c["m_values"].is_array() || c["m_values"].empty()) {
                throw ValidationError("campaign.m_values: expected a non-empty array");
            }
            cfg.campaign.m_values.clear();
            for (const auto& v : c["m_values"]) {
                const std::size_t m = count(v, "campaign.m_values");
                if (m == 0) {
                    throw ValidationError("campaign.m_values: m must be >= 1");
                }
                cfg.campaign.m_values.push_back(m);
            }
        }
        if (c.contains("samples")) {
            cfg.campaign.samples = count(c["samples"], "campaign.samples");
            if (cfg.campaign.samples == 0) {
                throw ValidationError("campaign.samples: must be >= 1");
            }
        }
        if (c.contains("noise")) {
            const Json& nz = c["noise"];
            if (nz.is_number()) {
                cfg.campaign.noise.delta_r = cfg.campaign.noise.delta_i = nz.get<double>();
            } else {
                check_keys(nz, "campaign.noise", {"delta_r", "delta_i"});
                cfg.campaign.noise.delta_r = number(nz, "campaign.noise", "delta_r");
                cfg.campaign.noise.delta_i = number(nz, "campaign.noise", "delta_i");
            }
            if (cfg.campaign.noise.delta_r < 0.0 || cfg.campaign.noise.delta_i < 0.0) {
                throw ValidationError("campaign.noise: half-widths must be >= 0");
            }
        }
        if (c.contains("seed")) {
            if (!c["seed"].is_number_integer() || c["seed"].get<long long>() < 0) {
                throw ValidationError("campaign.seed: expected a non-negative integer");
            }
            cfg.campaign.noise.seed = c["seed"].get<std::uint64_t>();
        }
        if (c.contains("workers")) {
            cfg.campaign.workers = static_cast<unsigned>(count(c["workers"], "campaign.workers"));
        }
        if (c.contains("enforce_dominance")) {
            cfg.campaign.enforce_dominance = flag(c["enforce_dominance"], "campaign.enforce_dominance");
        }
    }
    if (j.contains("output")) {
        check_keys(j["output"], "output", {"csv", "summary"});
        if (j["output"].contains("csv")) {
            cfg.output.csv = text(j["output"], "output", "csv");
        }
        if (j["output"].contains("summary")) {
            cfg.output.summary = text(j["output"], "output", "summary");
        }
    }
    return cfg;
}

Json to_json(const Config& config)
{
    Json out{{"system", to_json(config.system)},
             {"campaign",
              {{"m_values", config.campaign.m_values},
               {"samples", config.campaign.samples},
               {"noise", {{"delta_r", config.campaign.noise.delta_r}, {"delta_i", config.campaign.noise.delta_i}}},
               {"seed", config.campaign.noise.seed},
               {"workers", config.campaign.workers},
               {"enforce_dominance", config.campaign.enforce_dominance}}}};
    Json output = Json::object();
    if (!config.output.csv.empty()) {
        output["csv"] = config.output.csv;
    }
    if (!config.output.summary.empty()) {
        output["summary"] = config.output.summary;
    }
    out["output"] = std::move(output);
    return out;
}

Json read_json_file(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw ValidationError("cannot open '" + path.string() + "'");
    }
    try {
        return Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw ValidationError("'" + path.string() + "': " + e.what());
    }
}

Config load_config(const std::filesystem::path& path)
{
    return config_from_json(read_json_file(path));
}

std::vector<RawMeasurement> measurements_from_json(const Json& j)
{
    if (!j.is_array() || j.empty()) {
        throw ValidationError("measurements: expected a non-empty array");
    }
    std::vector<RawMeasurement> out;
    for (std::size_t k = 0; k < j.size(); ++k) {
        const std::string ctx = "measurements[" + std::to_string(k) + "]";
        check_keys(j[k], ctx, {"frequency_hz", "eps_re", "eps_im"});
        out.push_back({number(j[k], ctx, "frequency_hz"),
                       Complex{number(j[k], ctx, "eps_re"), number(j[k], ctx, "eps_im")}});
    }
    return out;
}

Json to_json(std::span<const RawMeasurement> raw)
{
    Json out = Json::array();
    for (const auto& r : raw) {
        out.push_back({{"frequency_hz", r.frequency_hz}, {"eps_re", r.eps.real()}, {"eps_im", r.eps.imag()}});
    }
    return out;
}

Json to_json(const RecoveryReport& report)
{
    return {{"phi_star", vector_json(report.phi_star)},
            {"t_star", report.t_star},
            {"status", std::string(to_string(report.status))},
            {"formulation", std::string(to_string(report.formulation))},
            {"iterations", report.iterations}};
}

Json to_json(const SensitivityReport& report)
{
    Json g = Json::array();
    for (Index r = 0; r < report.g.rows(); ++r) {
        g.push_back(vector_json(report.g.row(r).transpose()));
    }
    Json out{{"G", std::move(g)},
             {"singular_values", vector_json(report.singular_values)},
             {"rank", report.rank},
             {"sigma_min", report.sigma_min},
             {"sigma_max", report.sigma_max},
             {"identifiable", report.identifiable}};
    out["bound"] = report.bound ? number_or_null(*report.bound) : Json(nullptr);
    return out;
}

Json to_json(const MinimizerSet& set)
{
    Json gens = Json::array();
    for (const auto& g : set.generators) {
        gens.push_back(vector_json(g));
    }
    return {{"domain", set.domain == Domain::Simplex ? "simplex" : "ordered_simplex"},
            {"generators", std::move(gens)}};
}

Json to_json(const Aggregate& a)
{
    return {{"system", a.system},
            {"m", a.m},
            {"samples", a.samples},
            {"max_err_inf", a.max_err_inf},
            {"max_t_star", a.max_t_star},
            {"min_sigma_min", number_or_null(a.min_sigma_min)},
            {"failures", a.failures},
            {"bound_violations", a.bound_violations}};
}

Json to_json(std::span<const Aggregate> aggregates)
{
    Json out = Json::array();
    for (const auto& a : aggregates) {
        out.push_back(to_json(a));
    }
    return out;
}

} // namespace mtinv
