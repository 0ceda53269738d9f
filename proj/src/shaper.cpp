#include "scqc/shaper.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <random>
#include <thread>

#include <json.hpp>

#include "optim_detail.hpp"
#include "scqc/errors.hpp"

namespace scqc {

GateTarget GateTarget::named(const std::string& name) {
    GateTarget t;
    t.name = name;
    if (name == "H") t.u = gate_hadamard();
    else if (name == "X") t.u = gate_x();
    else if (name == "SX") t.u = gate_sqrt_x();
    else if (name == "I") t.u = gate_identity();
    else raise(errc::config, "unknown gate target '" + name + "' (use H | X | SX | I)");
    return t;
}

GateTarget GateTarget::custom(const Mat2c& u, const std::string& name) {
    GateTarget t;
    t.name = name;
    t.u = u;
    t.validate();
    return t;
}

void GateTarget::validate() const {
    if (!is_unitary(u, 1e-12)) raise(errc::input, "GateTarget: matrix not unitary to 1e-12");
}

const char* mode_name(RobustnessMode mode) {
    return mode == RobustnessMode::doubly ? "doubly" : "detuning_only";
}

RobustnessMode mode_from_name(const std::string& name) {
    if (name == "doubly") return RobustnessMode::doubly;
    if (name == "detuning_only") return RobustnessMode::detuning_only;
    raise(errc::config, "unknown robustness mode '" + name + "'");
}

CostWeights CostWeights::defaults(RobustnessMode mode) {
    CostWeights w;
    w.mode = mode;
    if (mode == RobustnessMode::doubly) {
        w.w_drivecap = 3e-3;
        w.w_smooth = 0.03;
    } else {
        w.w_area = 0.0;
        w.w_drivecap = 0.2; // heavy: trade amplitude robustness for drive economy
        w.w_smooth = 0.03;
    }
    return w;
}

void CostWeights::validate() const {
    const double all[] = {w_gate, w_closure, w_area, w_detuning, w_drivecap, w_rise, w_smooth};
    for (double v : all)
        if (!(v >= 0.0) || !std::isfinite(v))
            raise(errc::config, "CostWeights: weights must be finite and >= 0");
    if (!(w_gate > 0.0)) raise(errc::config, "CostWeights: w_gate must be > 0");
}

CostWeights CostWeights::normalized() const {
    validate();
    CostWeights w = *this;
    if (w.mode == RobustnessMode::detuning_only) w.w_area = 0.0;
    return w;
}

namespace {

constexpr double kGateTol = 1e-8;
constexpr double kClosureTol = 1e-7;
constexpr double kAreaTol = 1e-5;
constexpr double kDynMagnusTol = 1e-5; // quadrature-limited dynamics recomputation

struct Su2Parts {
    cd alpha, beta; // top row of the SU(2) representative
};

Su2Parts su2_parts(const Mat2c& u) {
    const Mat2c s = to_su2(u);
    return {s(0, 0), s(0, 1)};
}

struct GaugeSolution {
    double delta = 0.0; // dimensionless: Tg = 1, so Tg*Delta = delta
    double phi0 = 0.0;
    double mismatch = 1.0; // 1 - (|alpha_b||alpha_t| + |beta_b||beta_t|), 0 iff matchable
    double best_infidelity = 1.0;
};

// U(Tg) = Rz(Delta*Tg + phi0) U_base(Tg) Rz(-phi0): the drive-frame gauge
// identity. Maximizing |tr(Rz(a) U_b Rz(b) U_t^dag)| over (a, b) has the
// closed form below with u = (a+b)/2, v = (a-b)/2.
GaugeSolution solve_gauge(const Su2Parts& base, const Su2Parts& target) {
    const cd a_term = base.alpha * std::conj(target.alpha);
    const cd b_term = base.beta * std::conj(target.beta);
    const double q = std::abs(a_term) + std::abs(b_term);
    const double u_star = std::abs(a_term) < 1e-14 ? 0.0 : std::arg(a_term);
    const double v_star = std::abs(b_term) < 1e-14 ? 0.0 : std::arg(b_term);
    GaugeSolution g;
    g.delta = 2.0 * u_star;
    g.phi0 = v_star - u_star;
    g.mismatch = 1.0 - q;
    g.best_infidelity = (2.0 / 3.0) * (1.0 - q * q);
    return g;
}

Mat3 rotation_about_z(double angle) {
    Mat3 r;
    r << std::cos(angle), -std::sin(angle), 0.0,
         std::sin(angle), std::cos(angle), 0.0,
         0.0, 0.0, 1.0;
    return r;
}

// Everything derived from one parameter vector.
struct Evaluation {
    bool valid = false;
    SpaceCurve curve; // unit length, starts at origin, T(0) = +z
    GeometryTrace trace;
    PulseWaveform base_pulse; // Delta = 0, Phi0 = 0
    Su2Parts base{};
    GaugeSolution gauge{};
    double omega_max = 0.0;
    double cost = 1e6;
};

class SynthWorker {
public:
    SynthWorker(const GateTarget& target, const CostWeights& weights,
                const SynthesisOptions& options)
        : target_(target), weights_(weights.normalized()), options_(options),
          target_parts_(su2_parts(target.u)) {
        dims_ = 3 * (options.order - 2);
        opt_frenet_.quad_panels = options.opt_panels;
        full_frenet_.quad_panels = 2048;
    }

    long evals() const { return evals_; }

    SpaceCurve build_curve(const Eigen::VectorXd& p) const {
        const int n = options_.order;
        std::vector<Vec3> w(n + 1, Vec3::Zero());
        w[1] = Vec3(0.0, 0.0, p(0));
        w[2] = Vec3(0.0, p(1), p(2));
        for (int j = 3; j <= n - 1; ++j)
            w[j] = Vec3(p(3 * (j - 2)), p(3 * (j - 2) + 1), p(3 * (j - 2) + 2));
        SpaceCurve c;
        c.control_points = std::move(w);
        c.closed = true;
        return c;
    }

    Evaluation evaluate(const Eigen::VectorXd& p, bool full_res) {
        ++evals_;
        Evaluation ev;
        if (p(0) < 1e-4) return ev; // tangent must start along +z
        try {
            SpaceCurve raw = build_curve(p);
            const FrenetOptions& fopt = full_res ? full_frenet_ : opt_frenet_;
            raw = normalized_arclength(raw, fopt.quad_panels);
            const int samples = full_res ? options_.trace_samples : options_.opt_samples;
            ev.trace = frenet_trace(raw, samples, fopt);
            ev.curve = raw;
            ev.base_pulse = fields_from_geometry(ev.trace, 0.0);
            ev.base = su2_parts(propagate(ev.base_pulse).u);
            ev.gauge = solve_gauge(ev.base, target_parts_);
            ev.omega_max = ev.base_pulse.omega_max;
            ev.cost = cost_terms(ev);
            ev.valid = true;
        } catch (const error&) {
            ev.valid = false;
            ev.cost = 1e6;
        }
        return ev;
    }

    double cost_terms(const Evaluation& ev) const {
        const CostWeights& w = weights_;
        const double omega = std::max(ev.omega_max, 1e-9);
        const GeometryTrace& tr = ev.trace;
        const double circle_rate = 2.0 * M_PI; // kappa of the unit-length circle

        double smooth = 0.0;
        const double dt = tr.total_length / (tr.samples - 1);
        for (int k = 0; k + 1 < tr.samples; ++k) {
            const double dk = (tr.curvature[k + 1] - tr.curvature[k]) / dt;
            smooth += dk * dk;
        }
        smooth /= (tr.samples - 1) * std::pow(circle_rate, 4);

        const double rise_cap = 0.05 * omega;
        const double r0 = std::max(0.0, tr.curvature.front() - rise_cap);
        const double r1 = std::max(0.0, tr.curvature.back() - rise_cap);
        const double rise = (r0 * r0 + r1 * r1) / (circle_rate * circle_rate);

        return w.w_gate * ev.gauge.mismatch +
               w.w_closure * tr.closure_residual.squaredNorm() +
               w.w_area * tr.tangent_area.squaredNorm() +
               w.w_detuning * ev.gauge.delta * ev.gauge.delta +
               w.w_drivecap * (omega / circle_rate) * (omega / circle_rate) +
               w.w_rise * rise + w.w_smooth * smooth;
    }

    // Equality constraints for the projection stages: tangent area (doubly
    // mode) plus the gate-fixing condition in a smooth parameterization.
    Eigen::VectorXd constraints(const Eigen::VectorXd& p, bool full_res, bool include_area) {
        const Evaluation ev = evaluate(p, full_res);
        const bool doubly = include_area && weights_.mode == RobustnessMode::doubly;
        const int gate_dims = gate_constraint_dims();
        Eigen::VectorXd c(doubly ? 3 + gate_dims : gate_dims);
        if (!ev.valid) {
            c.setConstant(1e3);
            return c;
        }
        int at = 0;
        if (doubly) {
            c(0) = ev.trace.tangent_area.x();
            c(1) = ev.trace.tangent_area.y();
            c(2) = ev.trace.tangent_area.z();
            at = 3;
        }
        const double ta = std::abs(target_parts_.alpha);
        if (ta < 1e-9) {
            c(at) = std::real(ev.base.alpha);
            c(at + 1) = std::imag(ev.base.alpha);
        } else if (std::abs(target_parts_.beta) < 1e-9) {
            c(at) = std::real(ev.base.beta);
            c(at + 1) = std::imag(ev.base.beta);
        } else {
            c(at) = std::norm(ev.base.alpha) - ta * ta;
        }
        return c;
    }

    int gate_constraint_dims() const {
        const double ta = std::abs(target_parts_.alpha);
        const double tb = std::abs(target_parts_.beta);
        return (ta < 1e-9 || tb < 1e-9) ? 2 : 1;
    }

    // Two half-circle lobes joined along the y-axis chord with dihedral angle
    // chi. The composite loop realizes a net rotation by 2*chi about an
    // equatorial axis, so |alpha(U_base)| = cos(chi): matching chi to the
    // target's |alpha| starts every restart in the right gate class
    // (chi = 0 is the plain circle).
    static Vec3 folded_loop(double u, double radius, double chi) {
        if (u <= 0.5) {
            const double th = 2.0 * M_PI * u;
            return Vec3(0.0, radius * (1.0 - std::cos(th)), radius * std::sin(th));
        }
        const double th = 2.0 * M_PI * (u - 0.5);
        const Vec3 local(0.0, -radius * (1.0 - std::cos(th)), -radius * std::sin(th));
        const Vec3 rotated(std::sin(chi) * local.z(), local.y(), std::cos(chi) * local.z());
        return Vec3(0.0, 2.0 * radius, 0.0) + rotated;
    }

    Eigen::VectorXd initial_params(uint64_t seed, int restart) const {
        std::seed_seq seq{seed, static_cast<uint64_t>(restart), uint64_t{0xBE21}};
        std::mt19937_64 rng(seq);
        std::normal_distribution<double> gauss(0.0, 1.0);
        std::uniform_real_distribution<double> jitter(-1.0, 1.0);

        const int n = options_.order;
        const double radius = 1.0 / (2.0 * M_PI);
        const double chi_base = std::acos(std::clamp(std::abs(target_parts_.alpha), 0.0, 1.0));
        const double chi = chi_base * (1.0 + 0.15 * jitter(rng));
        SpaceCurve c =
            fit_bezier([&](double u) { return folded_loop(u, radius, chi); }, n, 16 * n);
        const double scale = radius * (0.08 + 0.1 * (restart % 4));
        for (int j = 1; j < n; ++j)
            c.control_points[j] +=
                scale * Vec3(gauss(rng), gauss(rng), gauss(rng)) / std::sqrt(double(n));

        Eigen::VectorXd p(dims_);
        p(0) = std::max(0.02 * radius, c.control_points[1].z());
        p(1) = c.control_points[2].y();
        p(2) = c.control_points[2].z();
        for (int j = 3; j <= n - 1; ++j) {
            p(3 * (j - 2)) = c.control_points[j].x();
            p(3 * (j - 2) + 1) = c.control_points[j].y();
            p(3 * (j - 2) + 2) = c.control_points[j].z();
        }
        return p;
    }

    int dims() const { return dims_; }

private:
    GateTarget target_;
    CostWeights weights_;
    SynthesisOptions options_;
    Su2Parts target_parts_;
    FrenetOptions opt_frenet_, full_frenet_;
    int dims_ = 0;
    long evals_ = 0;
};

struct RestartOutcome {
    bool ok = false;
    double cost = 1e9;
    Certificates cert;
    OptimTrace trace;
    SpaceCurve curve;
    PulseWaveform pulse;
    std::string failure;
};

// Final gauge polish: 2D simplex on (delta, phi0) against the stored waveform,
// so the shipped samples themselves realize the gate to machine precision.
std::pair<double, double> polish_gauge(const PulseWaveform& base, double delta0, double phi0,
                                       const Mat2c& target) {
    PulseWaveform work = base;
    auto infid = [&](const Eigen::VectorXd& g) {
        const size_t m = base.phi.size();
        for (size_t k = 0; k < m; ++k) {
            const double t = base.dt * static_cast<double>(k);
            work.phi[k] = base.phi[k] + g(0) * t + g(1);
        }
        work.delta = g(0);
        return 1.0 - gate_fidelity(propagate(work).u, target);
    };
    Eigen::VectorXd g0(2);
    g0 << delta0, phi0;
    const auto res = detail::nelder_mead(infid, g0, 1e-3, 220);
    return {res.best(0), res.best(1)};
}

PulseWaveform assemble_pulse(const GeometryTrace& trace, double delta, double phi0,
                             const std::string& name) {
    PulseWaveform p = fields_from_geometry(trace, delta, name);
    for (double& ph : p.phi) ph += phi0;
    return p;
}

bool synth_debug() {
    static const bool on = std::getenv("SCQC_SYNTH_DEBUG") != nullptr;
    return on;
}

RestartOutcome run_restart(const GateTarget& target, const CostWeights& weights,
                           const SynthesisOptions& options, int restart, long budget) {
    SynthWorker worker(target, weights, options);
    RestartOutcome out;

    const Eigen::VectorXd p0 = worker.initial_params(options.seed, restart);
    const double radius = 1.0 / (2.0 * M_PI);

    long counter = 0;
    auto project = [&](const Eigen::VectorXd& start, bool full_res, bool with_area, double tol,
                       int iters) {
        return detail::gauss_newton(
            [&](const Eigen::VectorXd& p) { return worker.constraints(p, full_res, with_area); },
            start, tol, iters, 1e-6, &counter, budget + 4000);
    };

    // stage 0: walk onto the gate-fixing manifold (the initial ansatz can be far
    // from it for off-diagonal targets)
    auto pre = project(p0, false, false, 1e-10, 25);
    const Eigen::VectorXd start = pre.converged ? pre.x : p0;
    if (synth_debug())
        fprintf(stderr, "[synth r%d] stage0: conv=%d |c|=%.3g evals=%ld\n", restart,
                pre.converged, pre.residual.norm(), pre.evals);

    // stage 1: simplex search on the weighted cost, in two rounds so the
    // simplex cannot stay collapsed along stale directions
    counter = worker.evals();
    const long nm_budget = std::max<long>(200, static_cast<long>(0.8 * budget));
    auto cost_fn = [&](const Eigen::VectorXd& p) { return worker.evaluate(p, false).cost; };
    auto nm = detail::nelder_mead(cost_fn, start, 0.2 * radius, nm_budget / 2);
    const auto nm2 = detail::nelder_mead(cost_fn, nm.best, 0.05 * radius, nm_budget / 2);
    if (nm2.best_value < nm.best_value) {
        nm.best = nm2.best;
        nm.best_value = nm2.best_value;
    }
    nm.evals += nm2.evals;

    OptimTrace trace;
    trace.accepted.push_back({nm.evals, nm.best_value, -1.0});
    if (synth_debug()) {
        const Evaluation dbg = worker.evaluate(nm.best, false);
        fprintf(stderr,
                "[synth r%d] stage1: cost=%.4g mismatch=%.3g |area|=%.3g omax=%.3g evals=%ld\n",
                restart, nm.best_value, dbg.gauge.mismatch, dbg.trace.tangent_area.norm(),
                dbg.omega_max, nm.evals);
    }

    // stage 2: Gauss-Newton projection onto the full constraint manifold
    counter = worker.evals();
    auto proj = project(nm.best, false, true, 5e-9, 18);
    if (synth_debug())
        fprintf(stderr, "[synth r%d] stage2: conv=%d |c|=%.3g evals=%ld\n", restart,
                proj.converged, proj.residual.norm(), proj.evals);
    if (!proj.converged) {
        out.failure = "projection did not converge at search resolution";
        out.cost = nm.best_value;
        out.trace = trace;
        return out;
    }
    // stage 3: re-verify and re-project at full resolution
    auto proj_full = project(proj.x, true, true, 5e-9, 8);
    if (!proj_full.converged) {
        out.failure = "projection did not converge at full resolution";
        out.cost = nm.best_value;
        out.trace = trace;
        return out;
    }

    Evaluation fin = worker.evaluate(proj_full.x, true);
    if (!fin.valid) {
        out.failure = "final evaluation invalid";
        out.trace = trace;
        return out;
    }

    // stage 4: orient, solve the z-gauge exactly, polish on the stored samples
    const SpaceCurve canon = canonicalized(fin.curve);
    GeometryTrace tr_canon = frenet_trace(canon, options.trace_samples);
    PulseWaveform base = fields_from_geometry(tr_canon, 0.0);
    const GaugeSolution gauge =
        solve_gauge(su2_parts(propagate(base).u), su2_parts(to_su2(target.u)));
    const auto [delta, phi0] = polish_gauge(base, gauge.delta, gauge.phi0, target.u);

    // orient the stored curve so its initial normal matches Phi(0) = phi0;
    // the pulse's error curve then coincides with the stored curve
    const SpaceCurve oriented = rotated(canon, rotation_about_z(phi0));
    GeometryTrace tr_oriented = frenet_trace(oriented, options.trace_samples);
    PulseWaveform pulse = assemble_pulse(tr_oriented, delta, phi0, target.name);

    Certificates cert;
    cert.gate_infidelity = 1.0 - gate_fidelity(propagate(pulse).u, target.u);
    cert.closure_norm = tr_oriented.closure_residual.norm();
    cert.area_norm = tr_oriented.tangent_area.norm();
    cert.tg_delta = delta * pulse.tg;
    cert.omega_max = pulse.omega_max;

    trace.accepted.push_back({counter, fin.cost, cert.gate_infidelity});
    trace.total_evals = counter;
    trace.final_cost = fin.cost;

    const bool area_ok = weights.mode != RobustnessMode::doubly || cert.area_norm <= kAreaTol;
    out.ok = cert.gate_infidelity <= kGateTol && cert.closure_norm <= kClosureTol && area_ok;
    if (!out.ok) out.failure = "certificates above tolerance";
    out.cost = fin.cost;
    out.cert = cert;
    out.trace = trace;
    out.curve = oriented;
    out.pulse = pulse;
    return out;
}

nlohmann::json cert_json(const Certificates& c) {
    return {{"gate_infidelity", c.gate_infidelity},
            {"closure_norm", c.closure_norm},
            {"area_norm", c.area_norm},
            {"tg_delta", c.tg_delta},
            {"omega_max", c.omega_max}};
}

} // namespace

SynthesisResult synthesize(const GateTarget& target, const CostWeights& weights,
                           const SynthesisOptions& options) {
    target.validate();
    const CostWeights w = weights.normalized();
    if (options.order < 5) raise(errc::domain_error, "synthesize: order must be >= 5");
    if (w.mode == RobustnessMode::doubly && options.order < 8)
        raise(errc::domain_error, "synthesize: doubly-robust targets need order >= 8");
    if (options.restarts < 1 || options.eval_budget < 100)
        raise(errc::config, "synthesize: need restarts >= 1 and eval_budget >= 100");

    const int restarts = options.restarts;
    const long per_restart = options.eval_budget / restarts;
    unsigned jobs = options.jobs > 0 ? static_cast<unsigned>(options.jobs)
                                     : std::thread::hardware_concurrency();
    if (jobs == 0) jobs = 1;

    std::vector<RestartOutcome> outcomes(restarts);
    for (int base = 0; base < restarts; base += static_cast<int>(jobs)) {
        std::vector<std::future<RestartOutcome>> wave;
        const int end = std::min(restarts, base + static_cast<int>(jobs));
        for (int r = base; r < end; ++r)
            wave.push_back(std::async(std::launch::async, [&, r]() {
                return run_restart(target, w, options, r, per_restart);
            }));
        for (int r = base; r < end; ++r) outcomes[r] = wave[r - base].get();
    }

    // lowest cost wins; ties by smaller omega_max, then smaller |Tg delta|
    int winner = -1;
    for (int r = 0; r < restarts; ++r) {
        if (!outcomes[r].ok) continue;
        if (winner < 0) { winner = r; continue; }
        const auto key = [](const RestartOutcome& o) {
            return std::make_tuple(o.cost, o.cert.omega_max, std::abs(o.cert.tg_delta));
        };
        if (key(outcomes[r]) < key(outcomes[winner])) winner = r;
    }

    if (winner < 0) {
        int best = 0;
        for (int r = 1; r < restarts; ++r)
            if (outcomes[r].cost < outcomes[best].cost) best = r;
        nlohmann::json payload = {{"best_certificates", cert_json(outcomes[best].cert)},
                                  {"failure", outcomes[best].failure},
                                  {"restarts", restarts}};
        raise(errc::convergence, "synthesize: no restart met the certificate tolerances",
              payload.dump());
    }

    RestartOutcome& win = outcomes[winner];
    SynthesisResult result;
    result.target = target;
    result.mode = w.mode;
    result.curve = win.curve;
    result.pulse = win.pulse;
    result.cert = win.cert;
    result.trace = win.trace;
    result.trace.winning_restart = winner;
    long total = 0;
    for (const auto& o : outcomes) total += o.trace.total_evals;
    result.trace.total_evals = total;
    return result;
}

CertificateReport certify_pulse(const PulseWaveform& pulse, const GateTarget& target,
                                RobustnessMode mode) {
    target.validate();
    pulse.validate();

    const MagnusBlocks blocks = magnus_pi1(pulse);
    const double gate_infid = 1.0 - gate_fidelity(propagate(pulse).u, target.u);
    const double dephasing = operator_norm(blocks.dephasing);
    const double amplitude = operator_norm(blocks.amplitude);

    CertificateReport report;
    report.measured.gate_infidelity = gate_infid;
    report.measured.closure_norm = dephasing; // |closure| via the Magnus identity
    report.measured.area_norm = amplitude;
    report.measured.tg_delta = pulse.delta * pulse.tg;
    report.measured.omega_max = pulse.omega_max * pulse.tg / pulse.dimless_tg;

    const bool doubly = mode == RobustnessMode::doubly;
    report.lines.push_back({"gate_infidelity", gate_infid, kGateTol, true, gate_infid <= kGateTol});
    report.lines.push_back(
        {"dephasing_block_norm", dephasing, kDynMagnusTol, true, dephasing <= kDynMagnusTol});
    report.lines.push_back({"amplitude_block_norm", amplitude, kDynMagnusTol, doubly,
                            !doubly || amplitude <= kDynMagnusTol});
    report.all_pass = true;
    for (const auto& line : report.lines)
        if (line.constrained && !line.pass) report.all_pass = false;
    return report;
}

CertificateReport certify(const SynthesisResult& result) {
    return certify_pulse(result.pulse, result.target, result.mode);
}

} // namespace scqc
