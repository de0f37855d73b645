#include "annulus/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>

namespace annulus::io {

namespace {

[[noreturn]] void fail(const std::string& what) { throw InputError(what); }

const json& need(const json& j, const char* key) {
    if (!j.is_object()) fail(std::string("expected an object holding '") + key + "'");
    auto it = j.find(key);
    if (it == j.end()) fail(std::string("missing key '") + key + "'");
    return *it;
}

double num(const json& j, const char* what) {
    if (!j.is_number()) fail(std::string("'") + what + "' must be a number");
    return j.get<double>();
}

double num_at(const json& j, const char* key) { return num(need(j, key), key); }

double num_or(const json& j, const char* key, double fallback) {
    auto it = j.find(key);
    return it == j.end() ? fallback : num(*it, key);
}

std::vector<double> nums(const json& j, const char* what) {
    if (!j.is_array()) fail(std::string("'") + what + "' must be an array of numbers");
    std::vector<double> out;
    for (const auto& x : j) out.push_back(num(x, what));
    return out;
}

std::string str_at(const json& j, const char* key) {
    const json& v = need(j, key);
    if (!v.is_string()) fail(std::string("'") + key + "' must be a string");
    return v.get<std::string>();
}

MeasurePair static_pair(const CircleMeasure& a, const CircleMeasure& b) { return {a, b}; }

}  // namespace

const char* to_string(ScenarioKind k) {
    switch (k) {
        case ScenarioKind::kernel_probe: return "kernel_probe";
        case ScenarioKind::evolve: return "evolve";
        case ScenarioKind::verify: return "verify";
        case ScenarioKind::lebedev: return "lebedev";
    }
    return "?";
}

Complex parse_complex(const json& j) {
    if (j.is_number()) return {j.get<double>(), 0.0};
    if (j.is_array() && j.size() == 2) return {num(j[0], "re"), num(j[1], "im")};
    fail("complex numbers are written as [re, im]");
}

Driver parse_driver(const json& j) {
    if (j.is_number()) return Driver::constant(j.get<double>());
    const std::string kind = str_at(j, "kind");
    if (kind == "constant") return Driver::constant(num_at(j, "value"));
    if (kind == "linear") return Driver::linear(num_or(j, "value0", 0.0), num_at(j, "slope"));
    if (kind == "cosine" || kind == "sine") {
        const double shift = kind == "sine" ? -0.5 * kPi : 0.0;
        return Driver::cosine(num_or(j, "offset", 0.0), num_at(j, "amplitude"), num_or(j, "frequency", 1.0),
                              num_or(j, "phase", 0.0) + shift);
    }
    if (kind == "piecewise_constant") {
        try {
            return Driver::piecewise_constant(nums(need(j, "times"), "times"), nums(need(j, "values"), "values"));
        } catch (const InputError&) {
            throw;
        } catch (const std::invalid_argument& e) {
            fail(e.what());
        }
    }
    fail("unknown driver kind '" + kind + "'");
}

std::function<CircleMeasure(double)> parse_measure_path(const json& j, std::vector<double>& jumps) {
    if (!j.is_object()) fail("a measure is an object with 'atoms' and/or 'uniform'");
    struct MovingAtom {
        Driver angle;
        double mass;
    };
    std::vector<MovingAtom> atoms;
    if (auto it = j.find("atoms"); it != j.end()) {
        if (!it->is_array()) fail("'atoms' must be an array");
        for (const auto& a : *it) {
            Driver angle = parse_driver(need(a, "angle"));
            jumps.insert(jumps.end(), angle.jumps().begin(), angle.jumps().end());
            const double mass = num_at(a, "mass");
            if (!(mass >= 0.0)) fail("atom masses must be >= 0");
            atoms.push_back({std::move(angle), mass});
        }
    }
    const double uniform = num_or(j, "uniform", 0.0);
    if (!(uniform >= 0.0)) fail("'uniform' must be >= 0");
    return [atoms, uniform](double t) {
        std::vector<Atom> now;
        now.reserve(atoms.size());
        for (const auto& a : atoms) now.push_back({a.angle(t), a.mass});
        return CircleMeasure(now, uniform);
    };
}

CircleMeasure parse_measure(const json& j) {
    std::vector<double> jumps;
    return parse_measure_path(j, jumps)(0.0);
}

RadiusPath parse_radius(const json& j) {
    const std::string kind = str_at(j, "kind");
    if (kind == "constant") return RadiusPath::constant(num_at(j, "r"));
    if (kind == "exponential") return RadiusPath::exponential(num_at(j, "r0"), num_at(j, "rate"));
    if (kind == "linear") return RadiusPath::linear(num_at(j, "r0"), num_at(j, "slope"));
    if (kind == "piecewise_exponential") {
        try {
            return RadiusPath::piecewise_exponential(num_at(j, "r0"), nums(need(j, "knots"), "knots"),
                                                     nums(need(j, "rates"), "rates"));
        } catch (const InputError&) {
            throw;
        } catch (const std::invalid_argument& e) {
            fail(e.what());
        }
    }
    fail("unknown radius kind '" + kind + "'");
}

FieldSpec parse_field(const json& j) {
    const std::string kind = str_at(j, "kind");
    const Driver C = j.contains("C") ? parse_driver(j["C"]) : Driver();
    FieldSpec f = [&]() -> FieldSpec {
        if (kind == "rotation") return rotation_field(num_at(j, "r"), C);
        if (kind == "fixed_points") {
            const json& n = need(j, "N");
            if (!n.is_number_integer() || n.get<int>() < 1) fail("'N' must be a positive integer");
            return fixed_point_field(n.get<int>(), num_at(j, "r0"), num_at(j, "r_star"),
                                     num_or(j, "alpha_offset", 0.0), C);
        }
        if (kind == "degenerate") {
            std::vector<double> jumps;
            auto q = parse_measure_path(need(j, "q"), jumps);
            const Driver alpha = parse_driver(need(j, "alpha"));
            return degenerate_field(C, alpha, q, jumps);
        }
        if (kind == "non_degenerate") {
            auto ds = validate(parse_radius(need(j, "domain")), num_or(j, "horizon", 10.0));
            const json& m = need(j, "measures");
            const std::string type = str_at(m, "type");
            if (type == "atoms") {
                std::vector<double> jumps;
                auto mu1 = parse_measure_path(need(m, "mu1"), jumps);
                auto mu2 = parse_measure_path(need(m, "mu2"), jumps);
                const double mass = mu1(0.0).total_mass() + mu2(0.0).total_mass();
                if (std::abs(mass - 1.0) > 1e-12)
                    fail("measures: mu1 and mu2 must have total mass 1, got " + format_double(mass));
                MeasurePath path = [mu1, mu2](double t) { return static_pair(mu1(t), mu2(t)); };
                return FieldSpec::non_degenerate(std::move(ds), C, std::move(path), jumps);
            }
            if (type == "blend") {
                const Driver lambda = parse_driver(need(m, "lambda"));
                const Driver th1 = parse_driver(need(m, "theta1"));
                const Driver th2 = parse_driver(need(m, "theta2"));
                auto jumps = merge_jumps({&lambda.jumps(), &th1.jumps(), &th2.jumps()});
                return FieldSpec::non_degenerate(std::move(ds), C, blend_measures(lambda, th1, th2), jumps);
            }
            fail("unknown measures type '" + type + "'");
        }
        fail("unknown field kind '" + kind + "'");
    }();
    if (auto it = j.find("label"); it != j.end() && it->is_string()) f.label = it->get<std::string>();
    return f;
}

IntegratorConfig parse_integrator(const json& j) {
    IntegratorConfig c;
    if (j.is_null()) return c;
    c.rel_tol = num_or(j, "rel_tol", c.rel_tol);
    c.abs_tol = num_or(j, "abs_tol", c.abs_tol);
    c.h_init = num_or(j, "h_init", c.h_init);
    c.h_min = num_or(j, "h_min", c.h_min);
    c.h_max = num_or(j, "h_max", c.h_max);
    c.boundary_guard = num_or(j, "boundary_guard", c.boundary_guard);
    try {
        c.validate();
    } catch (const std::invalid_argument& e) {
        fail(e.what());
    }
    return c;
}

ProbePlan parse_plan(const json& j) {
    ProbePlan p;
    if (j.is_null()) return p;
    p.t0 = num_or(j, "t0", p.t0);
    p.horizon = num_or(j, "horizon", p.horizon);
    p.points = static_cast<int>(num_or(j, "points", p.points));
    p.triples = static_cast<int>(num_or(j, "triples", p.triples));
    p.partition = static_cast<int>(num_or(j, "partition", p.partition));
    p.ef2_tol = num_or(j, "ef2_tol", p.ef2_tol);
    if (!(p.horizon > 0.0 && p.t0 >= 0.0 && p.points >= 1 && p.triples >= 1 && p.partition >= 1))
        fail("plan: need horizon > 0, t0 >= 0 and positive counts");
    return p;
}

LebedevSpec parse_lebedev(const json& j) {
    LebedevSpec s;
    s.m = num_at(j, "m");
    s.M = num_at(j, "M");
    s.lambda = parse_driver(need(j, "lambda"));
    s.kappa1 = j.contains("kappa1") ? parse_driver(j["kappa1"]) : Driver();
    s.kappa2 = j.contains("kappa2") ? parse_driver(j["kappa2"]) : Driver();
    try {
        s.validate();
    } catch (const DomainError& e) {
        fail(e.what());
    }
    return s;
}

Scenario parse_scenario(const json& j) {
    Scenario sc;
    sc.id = str_at(j, "id");
    if (sc.id.empty()) fail("scenario id must not be empty");
    const std::string kind = str_at(j, "kind");
    if (kind == "kernel_probe") sc.kind = ScenarioKind::kernel_probe;
    else if (kind == "evolve") sc.kind = ScenarioKind::evolve;
    else if (kind == "verify") sc.kind = ScenarioKind::verify;
    else if (kind == "lebedev") sc.kind = ScenarioKind::lebedev;
    else fail("unknown scenario kind '" + kind + "'");
    sc.payload = need(j, "payload");
    if (!sc.payload.is_object()) fail("payload must be an object");
    if (auto it = j.find("output"); it != j.end()) {
        sc.output_path = str_at(*it, "path");
        const std::string fmt = it->value("format", std::string("csv"));
        if (fmt == "csv") sc.format = OutputFormat::csv;
        else if (fmt == "json") sc.format = OutputFormat::json;
        else fail("output format must be csv or json");
    } else {
        sc.output_path = sc.id + (sc.kind == ScenarioKind::verify ? ".json" : ".csv");
        sc.format = sc.kind == ScenarioKind::verify ? OutputFormat::json : OutputFormat::csv;
    }
    return sc;
}

std::vector<Scenario> parse_scenario_file(const json& j) {
    std::vector<Scenario> out;
    if (j.is_object() && j.contains("scenarios")) {
        const json& list = j["scenarios"];
        if (!list.is_array() || list.empty()) fail("'scenarios' must be a non-empty array");
        for (const auto& s : list) out.push_back(parse_scenario(s));
    } else {
        out.push_back(parse_scenario(j));
    }
    std::set<std::string> ids;
    for (const auto& s : out)
        if (!ids.insert(s.id).second) fail("duplicate scenario id '" + s.id + "'");
    return out;
}

std::vector<Scenario> load_scenario_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) fail("cannot read " + path.string());
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        fail(path.string() + ": " + e.what());
    }
    return parse_scenario_file(j);
}

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void write_trajectory_csv(std::ostream& os, const Trajectory& tr, const DomainSystem& ds) {
    os << "t,re_w,im_w,abs_w,r_t\n";
    for (const auto& s : tr.samples)
        os << format_double(s.t) << ',' << format_double(s.w.real()) << ',' << format_double(s.w.imag()) << ','
           << format_double(std::abs(s.w)) << ',' << format_double(ds.r(s.t)) << '\n';
}

json trajectory_json(const Trajectory& tr, const DomainSystem& ds) {
    json samples = json::array();
    for (const auto& s : tr.samples) samples.push_back({s.t, s.w.real(), s.w.imag(), std::abs(s.w), ds.r(s.t)});
    return {{"s", tr.s},
            {"z0", {tr.z0.real(), tr.z0.imag()}},
            {"status", to_string(tr.status)},
            {"validity_end", tr.validity_end},
            {"columns", {"t", "re_w", "im_w", "abs_w", "r_t"}},
            {"samples", samples}};
}

json report_json(const VerificationReport& rep) {
    json checks = json::array();
    for (const auto& c : rep.checks) {
        json e = {{"name", c.name}, {"pass", c.pass}, {"residual", c.residual}, {"tol", c.tol}};
        if (!c.detail.empty()) e["detail"] = c.detail;
        checks.push_back(e);
    }
    return {{"scenario", rep.scenario}, {"seed", rep.seed}, {"all_pass", rep.all_pass()}, {"checks", checks}};
}

void write_mt_csv(std::ostream& os, const MtPath& path, const LebedevSpec& spec) {
    os << "t,m_t,r_t\n";
    for (std::size_t i = 0; i < path.times().size(); ++i)
        os << format_double(path.times()[i]) << ',' << format_double(path.values()[i]) << ','
           << format_double(spec.r(path.times()[i])) << '\n';
}

const json& scenario_schema() {
    static const json schema = json::parse(R"json(
{
  "$schema": "http://json-schema.org/draft-07/schema#",
  "$id": "annulus-loewner/scenario.schema.json",
  "title": "annulus-loewner scenario file",
  "oneOf": [
    {"$ref": "#/definitions/scenario"},
    {
      "type": "object",
      "required": ["scenarios"],
      "properties": {"scenarios": {"type": "array", "minItems": 1, "items": {"$ref": "#/definitions/scenario"}}},
      "additionalProperties": false
    }
  ],
  "definitions": {
    "complex": {
      "oneOf": [{"type": "number"}, {"type": "array", "items": {"type": "number"}, "minItems": 2, "maxItems": 2}]
    },
    "driver": {
      "oneOf": [
        {"type": "number"},
        {"type": "object", "required": ["kind", "value"], "additionalProperties": false,
         "properties": {"kind": {"const": "constant"}, "value": {"type": "number"}}},
        {"type": "object", "required": ["kind", "slope"], "additionalProperties": false,
         "properties": {"kind": {"const": "linear"}, "value0": {"type": "number"}, "slope": {"type": "number"}}},
        {"type": "object", "required": ["kind", "amplitude"], "additionalProperties": false,
         "properties": {"kind": {"enum": ["cosine", "sine"]}, "offset": {"type": "number"},
                        "amplitude": {"type": "number"}, "frequency": {"type": "number"},
                        "phase": {"type": "number"}}},
        {"type": "object", "required": ["kind", "times", "values"], "additionalProperties": false,
         "properties": {"kind": {"const": "piecewise_constant"},
                        "times": {"type": "array", "items": {"type": "number"}},
                        "values": {"type": "array", "items": {"type": "number"}, "minItems": 1}}}
      ]
    },
    "measure": {
      "type": "object",
      "additionalProperties": false,
      "properties": {
        "atoms": {
          "type": "array",
          "items": {
            "type": "object", "required": ["angle", "mass"], "additionalProperties": false,
            "properties": {"angle": {"$ref": "#/definitions/driver"}, "mass": {"type": "number", "minimum": 0}}
          }
        },
        "uniform": {"type": "number", "minimum": 0}
      }
    },
    "radius": {
      "type": "object",
      "required": ["kind"],
      "properties": {
        "kind": {"enum": ["constant", "exponential", "linear", "piecewise_exponential"]},
        "r": {"type": "number"}, "r0": {"type": "number"}, "rate": {"type": "number"},
        "slope": {"type": "number"},
        "knots": {"type": "array", "items": {"type": "number"}},
        "rates": {"type": "array", "items": {"type": "number"}}
      },
      "additionalProperties": false
    },
    "field": {
      "type": "object",
      "required": ["kind"],
      "properties": {"label": {"type": "string"}, "C": {"$ref": "#/definitions/driver"}},
      "oneOf": [
        {"properties": {"kind": {"const": "rotation"}, "r": {"type": "number"}}, "required": ["r"]},
        {"properties": {"kind": {"const": "fixed_points"}, "N": {"type": "integer", "minimum": 1},
                        "r0": {"type": "number"}, "r_star": {"type": "number"},
                        "alpha_offset": {"type": "number"}},
         "required": ["N", "r0", "r_star"]},
        {"properties": {"kind": {"const": "degenerate"}, "alpha": {"$ref": "#/definitions/driver"},
                        "q": {"$ref": "#/definitions/measure"}},
         "required": ["alpha", "q"]},
        {"properties": {"kind": {"const": "non_degenerate"}, "domain": {"$ref": "#/definitions/radius"},
                        "horizon": {"type": "number", "exclusiveMinimum": 0},
                        "measures": {"$ref": "#/definitions/measure_path"}},
         "required": ["domain", "measures"]}
      ]
    },
    "measure_path": {
      "type": "object",
      "required": ["type"],
      "oneOf": [
        {"properties": {"type": {"const": "atoms"}, "mu1": {"$ref": "#/definitions/measure"},
                        "mu2": {"$ref": "#/definitions/measure"}},
         "required": ["mu1", "mu2"]},
        {"properties": {"type": {"const": "blend"}, "lambda": {"$ref": "#/definitions/driver"},
                        "theta1": {"$ref": "#/definitions/driver"}, "theta2": {"$ref": "#/definitions/driver"}},
         "required": ["lambda", "theta1", "theta2"]}
      ]
    },
    "integrator": {
      "type": "object",
      "additionalProperties": false,
      "properties": {
        "rel_tol": {"type": "number"}, "abs_tol": {"type": "number"}, "h_init": {"type": "number"},
        "h_min": {"type": "number"}, "h_max": {"type": "number"}, "boundary_guard": {"type": "number"}
      }
    },
    "plan": {
      "type": "object",
      "additionalProperties": false,
      "properties": {
        "t0": {"type": "number", "minimum": 0}, "horizon": {"type": "number", "exclusiveMinimum": 0},
        "points": {"type": "integer", "minimum": 1}, "triples": {"type": "integer", "minimum": 1},
        "partition": {"type": "integer", "minimum": 1}, "ef2_tol": {"type": "number", "exclusiveMinimum": 0}
      }
    },
    "output": {
      "type": "object",
      "required": ["path"],
      "additionalProperties": false,
      "properties": {"path": {"type": "string"}, "format": {"enum": ["csv", "json"]}}
    },
    "scenario": {
      "type": "object",
      "required": ["id", "kind", "payload"],
      "properties": {"id": {"type": "string", "minLength": 1}, "output": {"$ref": "#/definitions/output"}},
      "oneOf": [
        {"properties": {"kind": {"const": "kernel_probe"}, "payload": {
          "type": "object", "required": ["r", "points"], "additionalProperties": false,
          "properties": {"r": {"type": "number"}, "points": {"type": "array", "items": {"$ref": "#/definitions/complex"}},
                         "rel_tol": {"type": "number"}}}}},
        {"properties": {"kind": {"const": "evolve"}, "payload": {
          "type": "object", "required": ["field", "t_end", "points"], "additionalProperties": false,
          "properties": {"field": {"$ref": "#/definitions/field"}, "s": {"type": "number", "minimum": 0},
                         "t_end": {"type": "number"},
                         "points": {"type": "array", "minItems": 1, "items": {"$ref": "#/definitions/complex"}},
                         "integrator": {"$ref": "#/definitions/integrator"}}}}},
        {"properties": {"kind": {"const": "verify"}, "payload": {
          "type": "object", "required": ["field"], "additionalProperties": false,
          "properties": {"field": {"$ref": "#/definitions/field"}, "plan": {"$ref": "#/definitions/plan"},
                         "seed": {"type": "integer", "minimum": 0},
                         "integrator": {"$ref": "#/definitions/integrator"},
                         "fixed_points": {"type": "object", "required": ["N", "r0", "r_star"],
                                          "additionalProperties": false,
                                          "properties": {"N": {"type": "integer", "minimum": 1},
                                                         "r0": {"type": "number"}, "r_star": {"type": "number"}}}}}}},
        {"properties": {"kind": {"const": "lebedev"}, "payload": {
          "type": "object", "required": ["m", "M", "lambda", "horizon", "seeds"], "additionalProperties": false,
          "properties": {"m": {"type": "number"}, "M": {"type": "number"},
                         "lambda": {"$ref": "#/definitions/driver"}, "kappa1": {"$ref": "#/definitions/driver"},
                         "kappa2": {"$ref": "#/definitions/driver"},
                         "horizon": {"type": "number", "minimum": 0},
                         "seeds": {"type": "array", "minItems": 1, "items": {"$ref": "#/definitions/complex"}},
                         "monitor": {"type": "array", "items": {"type": "number"}},
                         "integrator": {"$ref": "#/definitions/integrator"}}}}}
      ]
    }
  }
}
)json");
    return schema;
}

}  // namespace annulus::io
