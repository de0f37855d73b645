#include <cmath>
#include <sstream>

#include "annulus/io.hpp"
#include "doctest.h"

using namespace annulus;
using io::json;

TEST_CASE("drivers from json") {
    CHECK(io::parse_driver(json(2.5))(7.0) == 2.5);
    CHECK(io::parse_driver(json::parse(R"({"kind":"constant","value":-1})"))(3.0) == -1.0);
    const Driver lin = io::parse_driver(json::parse(R"({"kind":"linear","value0":0.5,"slope":2})"));
    CHECK(lin(1.5) == doctest::Approx(3.5));
    const Driver cs = io::parse_driver(json::parse(R"({"kind":"cosine","offset":1,"amplitude":2,"frequency":3,"phase":0.5})"));
    CHECK(cs(0.7) == doctest::Approx(1.0 + 2.0 * std::cos(3.0 * 0.7 + 0.5)).epsilon(1e-14));
    const Driver sn = io::parse_driver(json::parse(R"({"kind":"sine","amplitude":1})"));
    for (double t : {0.0, 0.4, 2.0}) CHECK(sn(t) == doctest::Approx(std::sin(t)).epsilon(1e-14));
    const Driver pc = io::parse_driver(json::parse(R"({"kind":"piecewise_constant","times":[1,2],"values":[3,4,5]})"));
    CHECK(pc(0.5) == 3.0);
    CHECK(pc(1.0) == 4.0);
    CHECK(pc(2.5) == 5.0);
    CHECK(pc.jumps() == std::vector<double>{1.0, 2.0});

    CHECK_THROWS_AS(io::parse_driver(json::parse(R"({"kind":"quadratic"})")), io::InputError);
    CHECK_THROWS_AS(io::parse_driver(json::parse(R"({"kind":"linear"})")), io::InputError);
    CHECK_THROWS_AS(io::parse_driver(json::parse(R"({"kind":"piecewise_constant","times":[1],"values":[1]})")),
                    io::InputError);
    CHECK_THROWS_AS(io::parse_driver(json("x")), io::InputError);
}

TEST_CASE("measures and radii from json") {
    const CircleMeasure m = io::parse_measure(json::parse(R"({"atoms":[{"angle":1.0,"mass":0.25}],"uniform":0.5})"));
    CHECK(m.total_mass() == doctest::Approx(0.75));
    CHECK(m.atoms().size() == 1);
    CHECK_THROWS_AS(io::parse_measure(json::parse(R"({"atoms":[{"angle":1.0,"mass":-1}]})")), io::InputError);

    std::vector<double> jumps;
    auto path = io::parse_measure_path(
        json::parse(R"({"atoms":[{"angle":{"kind":"piecewise_constant","times":[0.5],"values":[0,1]},"mass":1}]})"),
        jumps);
    CHECK(jumps == std::vector<double>{0.5});
    CHECK(path(0.2).atoms()[0].angle == 0.0);
    CHECK(path(0.7).atoms()[0].angle == 1.0);

    const RadiusPath rp = io::parse_radius(json::parse(R"({"kind":"exponential","r0":0.4,"rate":0.5})"));
    CHECK(rp.r(2.0) == doctest::Approx(0.4 * std::exp(-1.0)));
    const RadiusPath pw =
        io::parse_radius(json::parse(R"({"kind":"piecewise_exponential","r0":0.4,"knots":[1],"rates":[1,0]})"));
    CHECK(pw.r(3.0) == doctest::Approx(0.4 * std::exp(-1.0)));
    CHECK_THROWS_AS(io::parse_radius(json::parse(R"({"kind":"spiral"})")), io::InputError);
}

TEST_CASE("fields from json") {
    const FieldSpec rot = io::parse_field(json::parse(R"({"kind":"rotation","r":0.3,"C":1.0})"));
    const Complex z(0.5, 0.1);
    CHECK(std::abs(field_eval(rot, z, 0.4) - Complex(0.0, 1.0) * z) < 1e-14);

    const FieldSpec fp = io::parse_field(json::parse(R"({"kind":"fixed_points","N":3,"r0":0.2,"r_star":0.5})"));
    const FieldSpec direct = fixed_point_field(3, 0.2, 0.5);
    CHECK(std::abs(field_eval(fp, {0.1, 0.6}, 0.3) - field_eval(direct, {0.1, 0.6}, 0.3)) < 1e-15);

    const FieldSpec blend = io::parse_field(json::parse(R"({
        "kind":"non_degenerate","domain":{"kind":"exponential","r0":0.3,"rate":0.5},"horizon":4,"C":0,
        "measures":{"type":"blend","lambda":0.3,"theta1":0.2,"theta2":2.0},"label":"b"})"));
    CHECK(blend.label == "b");
    const MeasurePair mp = blend.measures(1.0);
    CHECK(mp.mu1.total_mass() == doctest::Approx(0.7));
    CHECK(mp.mu2.total_mass() == doctest::Approx(0.3));

    const FieldSpec atoms = io::parse_field(json::parse(R"({
        "kind":"non_degenerate","domain":{"kind":"constant","r":0.3},"C":0,
        "measures":{"type":"atoms","mu1":{"uniform":0.4},"mu2":{"atoms":[{"angle":1,"mass":0.6}]}}})"));
    CHECK(atoms.measures(0.0).mu1.uniform_mass() == doctest::Approx(0.4));

    const FieldSpec deg = io::parse_field(json::parse(R"({"kind":"degenerate","alpha":1,"q":{"uniform":1}})"));
    CHECK(deg.is_degenerate());
    CHECK(std::abs(field_eval(deg, z, 0.5) + z) < 1e-14);

    // masses that do not add up to one
    CHECK_THROWS(io::parse_field(json::parse(R"({
        "kind":"non_degenerate","domain":{"kind":"constant","r":0.3},
        "measures":{"type":"atoms","mu1":{"uniform":0.4},"mu2":{"uniform":0.4}}})")));
    CHECK_THROWS_AS(io::parse_field(json::parse(R"({"kind":"fixed_points","N":0,"r0":0.2,"r_star":0.5})")),
                    io::InputError);
    CHECK_THROWS_AS(io::parse_field(json::parse(R"({"kind":"vortex"})")), io::InputError);
}

TEST_CASE("integrator, plan and lebedev payloads") {
    const IntegratorConfig c = io::parse_integrator(json::parse(R"({"rel_tol":1e-8,"h_max":0.1})"));
    CHECK(c.rel_tol == 1e-8);
    CHECK(c.h_max == 0.1);
    CHECK(c.abs_tol == IntegratorConfig{}.abs_tol);
    CHECK_THROWS_AS(io::parse_integrator(json::parse(R"({"rel_tol":-1})")), io::InputError);

    const ProbePlan p = io::parse_plan(json::parse(R"({"horizon":2,"points":5})"));
    CHECK(p.horizon == 2.0);
    CHECK(p.points == 5);
    CHECK_THROWS_AS(io::parse_plan(json::parse(R"({"horizon":-1})")), io::InputError);

    const LebedevSpec s = io::parse_lebedev(json::parse(R"({"m":0.4,"M":3,"lambda":0.5,"kappa1":1})"));
    CHECK(s.m == 0.4);
    CHECK(s.kappa1(0.0) == 1.0);
    CHECK(s.kappa2(0.0) == 0.0);
    CHECK_THROWS_AS(io::parse_lebedev(json::parse(R"({"m":1.4,"M":3,"lambda":0.5})")), io::InputError);
}

TEST_CASE("scenario files") {
    const json one = json::parse(R"({"id":"a","kind":"verify","payload":{}})");
    const auto v = io::parse_scenario_file(one);
    REQUIRE(v.size() == 1);
    CHECK(v[0].kind == io::ScenarioKind::verify);
    CHECK(v[0].format == io::OutputFormat::json);
    CHECK(v[0].output_path == "a.json");

    const json batch = json::parse(R"({"scenarios":[
        {"id":"a","kind":"evolve","payload":{},"output":{"path":"x/a.json","format":"json"}},
        {"id":"b","kind":"lebedev","payload":{}}]})");
    const auto w = io::parse_scenario_file(batch);
    REQUIRE(w.size() == 2);
    CHECK(w[0].output_path == "x/a.json");
    CHECK(w[1].format == io::OutputFormat::csv);

    const json dup = json::parse(R"({"scenarios":[{"id":"a","kind":"evolve","payload":{}},
                                                   {"id":"a","kind":"evolve","payload":{}}]})");
    CHECK_THROWS_AS(io::parse_scenario_file(dup), io::InputError);
    CHECK_THROWS_AS(io::parse_scenario_file(json::parse(R"({"id":"a","kind":"plot","payload":{}})")), io::InputError);
    CHECK_THROWS_AS(io::parse_scenario_file(json::parse(R"({"id":"a","kind":"evolve"})")), io::InputError);
    CHECK_THROWS_AS(io::parse_scenario_file(json::parse(R"({"scenarios":[]})")), io::InputError);
    CHECK_THROWS_AS(io::load_scenario_file("/nonexistent/file.json"), io::InputError);
}

TEST_CASE("number formatting round-trips") {
    for (double x : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, std::nextafter(1.0, 2.0)}) {
        const std::string s = io::format_double(x);
        CHECK(std::stod(s) == x);
    }
}

TEST_CASE("writers") {
    const FieldSpec rot = rotation_field(0.3, Driver::constant(1.0));
    const Trajectory tr = integrate(rot, 0.0, {0.5, 0.0}, 1.0);
    std::ostringstream os;
    io::write_trajectory_csv(os, tr, rot.domain());
    std::istringstream in(os.str());
    std::string line;
    std::getline(in, line);
    CHECK(line == "t,re_w,im_w,abs_w,r_t");
    std::size_t rows = 0;
    while (std::getline(in, line)) ++rows;
    CHECK(rows == tr.samples.size());

    const json j = io::trajectory_json(tr, rot.domain());
    CHECK(j["status"] == "complete");
    CHECK(j["samples"].size() == tr.samples.size());
    CHECK(j["samples"].back()[0].get<double>() == 1.0);

    VerificationReport rep;
    rep.scenario = "s";
    rep.add({"x", true, 0.0, 1.0, ""});
    rep.add({"y", false, 2.0, 1.0, "bad"});
    const json r = io::report_json(rep);
    CHECK(r["all_pass"] == false);
    CHECK(r["checks"].size() == 2);
    CHECK(r["checks"][1]["detail"] == "bad");
}

TEST_CASE("schema is a draft-07 document") {
    const json& s = io::scenario_schema();
    CHECK(s["$schema"] == "http://json-schema.org/draft-07/schema#");
    CHECK(s["definitions"].contains("scenario"));
    CHECK(s.dump() == io::scenario_schema().dump());
}
