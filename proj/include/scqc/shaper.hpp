#pragma once

#include <string>
#include <vector>

#include "scqc/dynamics.hpp"

namespace scqc {

struct GateTarget {
    std::string name; // "H" | "X" | "SX" | "I" | "custom"
    Mat2c u = Mat2c::Identity();

    static GateTarget named(const std::string& name);
    static GateTarget custom(const Mat2c& u, const std::string& name = "custom");
    void validate() const;
};

enum class RobustnessMode { doubly, detuning_only };

const char* mode_name(RobustnessMode mode);
RobustnessMode mode_from_name(const std::string& name);

struct CostWeights {
    double w_gate = 10.0;
    double w_closure = 1.0;
    double w_area = 4.0;
    double w_detuning = 0.02;
    double w_drivecap = 2e-4;
    double w_rise = 1.0;
    double w_smooth = 0.05;
    RobustnessMode mode = RobustnessMode::doubly;

    static CostWeights defaults(RobustnessMode mode);
    // w_gate > 0; detuning_only forces w_area = 0.
    void validate() const;
    CostWeights normalized() const;
};

struct Certificates {
    double gate_infidelity = 1.0;
    double closure_norm = 0.0;  // |r(Tg) - r(0)|
    double area_norm = 0.0;     // |integral of T x dT|
    double tg_delta = 0.0;
    double omega_max = 0.0;     // dimensionless
};

struct OptimIterate {
    long evals = 0;
    double cost = 0.0;
    double gate_infidelity = 0.0; // after projection: always <= 1e-8
};

struct OptimTrace {
    std::vector<OptimIterate> accepted;
    long total_evals = 0;
    double final_cost = 0.0;
    int winning_restart = -1;
};

struct SynthesisResult {
    GateTarget target;
    RobustnessMode mode = RobustnessMode::doubly;
    SpaceCurve curve;     // closed, unit length, oriented so the pulse's error curve is the curve
    PulseWaveform pulse;  // dimensionless
    Certificates cert;
    OptimTrace trace;
};

struct SynthesisOptions {
    int order = 16;
    uint64_t seed = 0;
    int restarts = 4;
    long eval_budget = 50000; // total cost evaluations across restarts
    int trace_samples = 4096; // final resolution
    int opt_samples = 768;    // resolution during search
    int opt_panels = 512;
    int jobs = 0;             // 0: hardware concurrency
};

// Optimize interior control points of a closed Bezier curve (w_n tied to w_0)
// so the extracted pulse fixes the target gate (phase-insensitive, <= 1e-8)
// and satisfies the selected robustness terms. Deterministic given the seed.
SynthesisResult synthesize(const GateTarget& target, const CostWeights& weights,
                           const SynthesisOptions& options = {});

struct CertificateReport {
    struct Line {
        std::string name;
        double value = 0.0;
        double threshold = 0.0;
        bool constrained = true; // unconstrained lines are reported, not judged
        bool pass = true;
    };
    std::vector<Line> lines;
    Certificates measured;
    bool all_pass = true;
};

// Recompute all certificates from the stored pulse via magnus_pi1 / propagate /
// gate_fidelity (independent of the optimizer's cached values).
CertificateReport certify(const SynthesisResult& result);
CertificateReport certify_pulse(const PulseWaveform& pulse, const GateTarget& target,
                                RobustnessMode mode);

} // namespace scqc
