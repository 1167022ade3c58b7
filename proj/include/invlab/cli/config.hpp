#pragma once
#include <cstdint>
#include <string>

namespace invlab {

/// Run configuration; every field has a default and unknown keys are
/// rejected on parse. See README for the schema.
struct RunConfig {
    struct Geometry {
        std::string profile = "cosine";  // flat | cosine | tabulated
        double amplitude = 0.1;
        double period = 6.283185307179586;
        double delta = 0.05;
        double alpha = 3.0;
        std::string table_file;
        int table_n = 0;
        double table_extent = 0.0;
    } geometry;

    struct Viscosity {
        double eta = 0.05;
        double nu = 1.25e-4;
        double lambda = 0.7;
        std::string kind = "checkerboard";  // diagonal | checkerboard
        double perturbation = 0.1;
        int cell_factor = 8;
    } viscosity;

    struct Params {
        double k0 = 1.0;
        double delta0 = 0.2;
        double epsilon = 0.1;
        std::string beta = "default";
    } params;

    struct Flow {
        std::string kind = "shear";  // shear | vortex
        double amplitude = 0.5;
        double decay = 1.0;
        double pulse_amplitude = 0.3;
        double pulse_omega = 3.141592653589793;
        double q_amplitude = 0.0;
    } flow;

    struct GridCfg {
        int n1 = 48;
        int n2 = 48;
        int n3 = 96;
        double height = 1.0;
        std::string grading = "auto";  // auto | uniform
        double wall_factor = 8.0;
        bool strict = true;
    } grid;

    struct Time {
        double t_end = 0.5;
        double dt = 2.0e-3;
        int snapshot_cadence = 10;
        int audit_cadence = 5;
    } time;

    struct Init {
        double perturbation = 0.0;
    } init;

    struct Sweep {
        double eta_start = 0.1;
        double eta_ratio = 0.5;
        int count = 6;
        double nu_power = 3.0;
        std::string delta_mode = "eta";  // eta | fixed
    } sweep;

    struct Output {
        std::string dir = "out";
    } output;

    std::uint64_t seed = 12345;

    static RunConfig load(const std::string& path);
    static RunConfig from_json_text(const std::string& text);
    std::string to_json_text() const;
    void save(const std::string& path) const;
};

} // namespace invlab
