#pragma once

// JSON (de)serialization for material systems, campaigns, measurements and
// reports. Parsing is strict: unknown or missing fields raise ValidationError.

#include "mtinv/diagnostics.hpp"
#include "mtinv/harness.hpp"
#include "mtinv/inverse.hpp"
#include "mtinv/material_system.hpp"
#include "mtinv/minimizers.hpp"

#include <json.hpp>

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace mtinv {

using Json = nlohmann::json;

struct OutputPaths {
    std::string csv;
    std::string summary;
};

struct Config {
    MaterialSystem system;
    CampaignOptions campaign;
    OutputPaths output;
};

/// {"type": ..., fields}; see README for the field names of each type.
DispersionModel dispersion_from_json(const Json& j);
Json to_json(const DispersionModel& model);

/// Either a builtin name ("ms1") or a full object.
MaterialSystem system_from_json(const Json& j);
Json to_json(const MaterialSystem& system);

/// {"system": ..., "campaign": {...}?, "output": {...}?}
Config config_from_json(const Json& j);
Json to_json(const Config& config);

Json read_json_file(const std::filesystem::path& path);
Config load_config(const std::filesystem::path& path);

/// JSON array of {frequency_hz, eps_re, eps_im}.
std::vector<RawMeasurement> measurements_from_json(const Json& j);
Json to_json(std::span<const RawMeasurement> raw);

Json to_json(const RecoveryReport& report);
Json to_json(const SensitivityReport& report);
Json to_json(const MinimizerSet& set);
Json to_json(const Aggregate& aggregate);
Json to_json(std::span<const Aggregate> aggregates);

} // namespace mtinv
