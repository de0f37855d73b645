#pragma once

// Scenario files: JSON parsing of specs, CSV/JSON writers, and the schema.

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "annulus/lebedev.hpp"
#include "annulus/verifier.hpp"

namespace annulus::io {

using nlohmann::json;

/// Malformed or inconsistent scenario input.
class InputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

enum class ScenarioKind { kernel_probe, evolve, verify, lebedev };
enum class OutputFormat { csv, json };

const char* to_string(ScenarioKind k);

struct Scenario {
    std::string id;
    ScenarioKind kind;
    json payload;
    std::filesystem::path output_path;
    OutputFormat format = OutputFormat::csv;
};

Driver parse_driver(const json& j);
/// Measure whose atom angles may be drivers; masses are constant.
std::function<CircleMeasure(double)> parse_measure_path(const json& j, std::vector<double>& jumps);
CircleMeasure parse_measure(const json& j);
RadiusPath parse_radius(const json& j);
FieldSpec parse_field(const json& j);
IntegratorConfig parse_integrator(const json& j);
ProbePlan parse_plan(const json& j);
LebedevSpec parse_lebedev(const json& j);
Complex parse_complex(const json& j);

Scenario parse_scenario(const json& j);
/// A single scenario object or {"scenarios": [...]}; ids must be unique.
std::vector<Scenario> parse_scenario_file(const json& j);
std::vector<Scenario> load_scenario_file(const std::filesystem::path& path);

/// 17 significant digits.
std::string format_double(double x);

/// Header t,re_w,im_w,abs_w,r_t.
void write_trajectory_csv(std::ostream& os, const Trajectory& tr, const DomainSystem& ds);
json trajectory_json(const Trajectory& tr, const DomainSystem& ds);
json report_json(const VerificationReport& rep);
/// Header t,m_t,r_t.
void write_mt_csv(std::ostream& os, const MtPath& path, const LebedevSpec& spec);

/// JSON schema for scenario files.
const json& scenario_schema();

}  // namespace annulus::io
