#include "flock/planner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "flock/constraints.hpp"

namespace flock {

namespace {

// Linearized separation constraint at one knot: l(p) = c0 - n.p <= 0.
// Built so that l(p) <= 0 implies ||p - q|| >= 2R (inner approximation).
struct SafetyRow {
    int knot = 0;
    Vec2 normal;
    double c0 = 0.0;
    double feas_tol = 0.0; ///< feasibility tolerance in this row's units
};

struct ProblemData {
    int M = 0;
    double dt = 0.0;
    double u_max = 0.0;
    double v_max = 0.0;
    double alpha = 0.0;
    double flock_radius_sq = 0.0;
    double contact_sq = 0.0; // 4R^2
    BoidState x0;
    bool has_task = false;
    std::optional<BoidState> pinned;
    std::vector<Vec2> centers;                    // knots 0..M
    std::vector<std::vector<Vec2>> neighbor_pos;  // per neighbor, knots 0..M
};

struct Multipliers {
    std::vector<double> safety; // per SafetyRow
    std::vector<double> vel;    // knots 1..M
    std::vector<double> task;   // knots 1..M
    Vec2 eq_p, eq_v;
    double rho = 10.0;
};

void forward(const ProblemData& d, const std::vector<Vec2>& u, std::vector<Vec2>& p,
             std::vector<Vec2>& v) {
    p[0] = d.x0.position;
    v[0] = d.x0.velocity;
    for (int k = 0; k < d.M; ++k) {
        p[k + 1] = p[k] + v[k] * d.dt + u[k] * (0.5 * d.dt * d.dt);
        v[k + 1] = v[k] + u[k] * d.dt;
    }
}

// Augmented Lagrangian value and gradient w.r.t. the controls. Slack
// variables are minimized out in closed form per knot; their optimum given
// the task residual g is max(0, lambda/rho + g - alpha*dt/(2 rho)).
double al_value_grad(const ProblemData& d, const std::vector<SafetyRow>& rows,
                     const Multipliers& mult, const std::vector<Vec2>& u,
                     std::vector<Vec2>& p, std::vector<Vec2>& v, std::vector<Vec2>& gp,
                     std::vector<Vec2>& gv, std::vector<Vec2>& grad) {
    const double rho = mult.rho;
    forward(d, u, p, v);
    std::fill(gp.begin(), gp.end(), Vec2{});
    std::fill(gv.begin(), gv.end(), Vec2{});

    double value = 0.0;
    for (int k = 0; k < d.M; ++k) value += 0.5 * d.dt * u[k].norm_sq();

    if (d.has_task) {
        const double slack_price = 0.5 * d.alpha * d.dt;
        for (int k = 1; k <= d.M; ++k) {
            const Vec2 s = p[k] - d.centers[k];
            const double g = s.norm_sq() - d.flock_radius_sq;
            const double w = mult.task[k - 1] / rho;
            const double slack = std::max(0.0, w + g - slack_price / rho);
            const double resid = std::max(0.0, w + g - slack);
            value += slack_price * slack + 0.5 * rho * (resid * resid - w * w);
            if (resid > 0.0) gp[k] += s * (2.0 * rho * resid);
        }
    }
    for (std::size_t r = 0; r < rows.size(); ++r) {
        const SafetyRow& row = rows[r];
        const double l = row.c0 - row.normal.dot(p[row.knot]);
        const double w = mult.safety[r] / rho;
        const double active = std::max(0.0, w + l);
        value += 0.5 * rho * (active * active - w * w);
        if (active > 0.0) gp[row.knot] -= row.normal * (rho * active);
    }
    const double vmax_sq = d.v_max * d.v_max;
    for (int k = 1; k <= d.M; ++k) {
        const double h = v[k].norm_sq() - vmax_sq;
        const double w = mult.vel[k - 1] / rho;
        const double active = std::max(0.0, w + h);
        value += 0.5 * rho * (active * active - w * w);
        if (active > 0.0) gv[k] += v[k] * (2.0 * rho * active);
    }
    if (d.pinned) {
        const Vec2 hp = p[d.M] - d.pinned->position;
        const Vec2 hv = v[d.M] - d.pinned->velocity;
        value += mult.eq_p.dot(hp) + 0.5 * rho * hp.norm_sq();
        value += mult.eq_v.dot(hv) + 0.5 * rho * hv.norm_sq();
        gp[d.M] += mult.eq_p + hp * rho;
        gv[d.M] += mult.eq_v + hv * rho;
    }

    // Discrete adjoint: accumulate knot gradients back onto the controls.
    Vec2 adj_p = gp[d.M];
    Vec2 adj_v = gv[d.M];
    for (int k = d.M - 1; k >= 0; --k) {
        grad[k] = u[k] * d.dt + adj_p * (0.5 * d.dt * d.dt) + adj_v * d.dt;
        const Vec2 adj_p_next = adj_p;
        adj_p = gp[k] + adj_p_next;
        adj_v = gv[k] + adj_p_next * d.dt + adj_v;
    }
    return value;
}

Vec2 project_control(const Vec2& u, double u_max) {
    const double n = u.norm();
    return n <= u_max ? u : u * (u_max / n);
}

struct FistaScratch {
    std::vector<Vec2> p, v, gp, gv, grad, grad_z, y, z, prev;
};

// Accelerated projected gradient with backtracking and function-value
// restart. Returns the reached gradient-mapping norm.
double fista(const ProblemData& d, const std::vector<SafetyRow>& rows,
             const Multipliers& mult, std::vector<Vec2>& x, FistaScratch& ws,
             double tol_mapping, int max_iters) {
    const int M = d.M;
    ws.y = x;
    ws.prev = x;
    double t_momentum = 1.0;
    double lipschitz = std::max(d.dt, 1e-8);
    double mapping_norm = 0.0;

    double fy = al_value_grad(d, rows, mult, ws.y, ws.p, ws.v, ws.gp, ws.gv, ws.grad);
    for (int it = 0; it < max_iters; ++it) {
        // Backtrack until the quadratic model majorizes F at the candidate.
        double fz = 0.0;
        while (true) {
            for (int k = 0; k < M; ++k) {
                ws.z[k] = project_control(ws.y[k] - ws.grad[k] / lipschitz, d.u_max);
            }
            fz = al_value_grad(d, rows, mult, ws.z, ws.p, ws.v, ws.gp, ws.gv, ws.grad_z);
            double lin = 0.0, quad = 0.0;
            for (int k = 0; k < M; ++k) {
                const Vec2 step = ws.z[k] - ws.y[k];
                lin += ws.grad[k].dot(step);
                quad += step.norm_sq();
            }
            if (fz <= fy + lin + 0.5 * lipschitz * quad + 1e-12 * (1.0 + std::fabs(fy)) ||
                lipschitz > 1e16) {
                break;
            }
            lipschitz *= 2.0;
        }

        mapping_norm = 0.0;
        for (int k = 0; k < M; ++k) {
            mapping_norm =
                std::max(mapping_norm, (ws.z[k] - ws.y[k]).norm() * lipschitz);
        }
        if (mapping_norm <= tol_mapping) {
            x = ws.z;
            return mapping_norm;
        }

        // Momentum with gradient-scheme restart.
        double restart_dot = 0.0;
        for (int k = 0; k < M; ++k) {
            restart_dot += (ws.y[k] - ws.z[k]).dot(ws.z[k] - ws.prev[k]);
        }
        if (restart_dot > 0.0) {
            t_momentum = 1.0;
            ws.y = ws.z;
        } else {
            const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t_momentum * t_momentum));
            const double beta = (t_momentum - 1.0) / t_next;
            for (int k = 0; k < M; ++k) {
                ws.y[k] = ws.z[k] + (ws.z[k] - ws.prev[k]) * beta;
            }
            t_momentum = t_next;
        }
        ws.prev = ws.z;
        lipschitz = std::max(lipschitz * 0.9, 1e-8);
        fy = al_value_grad(d, rows, mult, ws.y, ws.p, ws.v, ws.gp, ws.gv, ws.grad);
    }
    x = ws.prev;
    return mapping_norm;
}

struct Violations {
    double safety_rel = 0.0; ///< worst row violation over its tolerance
    double vel = 0.0;        ///< squared-speed units
    double eq = 0.0;         ///< state units
    double worst_rel = 0.0;  ///< worst family violation over its tolerance
};

Violations measure(const ProblemData& d, const std::vector<SafetyRow>& rows,
                   const std::vector<Vec2>& p, const std::vector<Vec2>& v) {
    Violations out;
    for (const SafetyRow& row : rows) {
        const double l = row.c0 - row.normal.dot(p[row.knot]);
        out.safety_rel = std::max(out.safety_rel, l / row.feas_tol);
    }
    const double vmax_sq = d.v_max * d.v_max;
    for (int k = 1; k <= d.M; ++k) {
        out.vel = std::max(out.vel, v[k].norm_sq() - vmax_sq);
    }
    if (d.pinned) {
        out.eq = std::max((p[d.M] - d.pinned->position).norm(),
                          (v[d.M] - d.pinned->velocity).norm());
    }
    const double tol_vel = 1e-8 * vmax_sq;
    const double tol_eq = 1e-9 * (1.0 + std::sqrt(d.flock_radius_sq));
    out.worst_rel = std::max({out.safety_rel, out.vel / tol_vel, out.eq / tol_eq});
    return out;
}

// Solves the convex subproblem for fixed safety linearization.
void solve_subproblem(const ProblemData& d, const std::vector<SafetyRow>& rows,
                      Multipliers& mult, std::vector<Vec2>& u, FistaScratch& ws) {
    // Multipliers warm-start across convexification iterations, but a
    // runaway penalty weight would wreck the inner conditioning; clamp it.
    mult.rho = std::clamp(mult.rho, 10.0, 1e4);

    double prev_worst = std::numeric_limits<double>::infinity();
    const int max_outer = 40;
    for (int outer = 0; outer < max_outer; ++outer) {
        const double tol_mapping = std::max(1e-12, 1e-9 * d.dt * std::max(1.0, d.u_max)) *
                                   (outer < 3 ? 100.0 : 1.0);
        fista(d, rows, mult, u, ws, tol_mapping, 2500);

        forward(d, u, ws.p, ws.v);
        const Violations vio = measure(d, rows, ws.p, ws.v);

        // Multiplier updates at the inner solution.
        const double rho = mult.rho;
        for (std::size_t r = 0; r < rows.size(); ++r) {
            const double l = rows[r].c0 - rows[r].normal.dot(ws.p[rows[r].knot]);
            mult.safety[r] = std::max(0.0, mult.safety[r] + rho * l);
        }
        const double vmax_sq = d.v_max * d.v_max;
        for (int k = 1; k <= d.M; ++k) {
            const double h = ws.v[k].norm_sq() - vmax_sq;
            mult.vel[k - 1] = std::max(0.0, mult.vel[k - 1] + rho * h);
        }
        if (d.has_task) {
            const double slack_price = 0.5 * d.alpha * d.dt;
            for (int k = 1; k <= d.M; ++k) {
                const double g = (ws.p[k] - d.centers[k]).norm_sq() - d.flock_radius_sq;
                const double w = mult.task[k - 1] / rho;
                const double slack = std::max(0.0, w + g - slack_price / rho);
                mult.task[k - 1] = std::max(0.0, mult.task[k - 1] + rho * (g - slack));
            }
        }
        if (d.pinned) {
            mult.eq_p += (ws.p[d.M] - d.pinned->position) * rho;
            mult.eq_v += (ws.v[d.M] - d.pinned->velocity) * rho;
        }

        if (vio.worst_rel <= 1.0 && outer >= 1) break;
        if (vio.worst_rel > 0.25 * prev_worst) {
            mult.rho = std::min(mult.rho * 6.0, 1e8);
        }
        prev_worst = std::max(vio.worst_rel, 1e-300);
    }
}

// True (non-linearized) penalty-free cost plus weighted constraint residuals
// used for step acceptance across convexification iterations.
double merit(const ProblemData& d, const std::vector<Vec2>& u, std::vector<Vec2>& p,
             std::vector<Vec2>& v) {
    forward(d, u, p, v);
    double cost = 0.0;
    for (int k = 0; k < d.M; ++k) cost += 0.5 * d.dt * u[k].norm_sq();
    if (d.has_task) {
        for (int k = 1; k <= d.M; ++k) {
            const double g = (p[k] - d.centers[k]).norm_sq() - d.flock_radius_sq;
            cost += 0.5 * d.alpha * d.dt * std::max(0.0, g);
        }
    }
    const double penalty = 1e6 * std::max(1.0, d.u_max);
    const double tol_safety = 0.5 * 1e-6 * d.contact_sq;
    double vio = 0.0;
    for (std::size_t j = 0; j < d.neighbor_pos.size(); ++j) {
        for (int k = 1; k <= d.M; ++k) {
            const double margin = (p[k] - d.neighbor_pos[j][k]).norm_sq() - d.contact_sq;
            vio += std::max(0.0, -margin - tol_safety);
        }
    }
    const double vmax_sq = d.v_max * d.v_max;
    for (int k = 1; k <= d.M; ++k) {
        vio += std::max(0.0, v[k].norm_sq() - vmax_sq - 1e-8 * vmax_sq);
    }
    if (d.pinned) {
        vio += std::max(0.0, (p[d.M] - d.pinned->position).norm() - 1e-9);
        vio += std::max(0.0, (v[d.M] - d.pinned->velocity).norm() - 1e-9);
    }
    return cost + penalty * vio;
}

// Cold-start seed. A ballistic guess that passes through a neighbor makes
// the linearization side-inconsistent (the required side flips mid-horizon),
// so when ballistic contact is predicted the seed instead brakes the
// relative velocity against the earliest-colliding neighbor, with a fixed
// lateral component when braking alone cannot clear the contact disk.
std::vector<Vec2> make_seed(const ProblemData& d) {
    std::vector<Vec2> u(d.M, Vec2{});
    std::vector<Vec2> p(d.M + 1), v(d.M + 1);
    forward(d, u, p, v);

    int hit_knot = -1;
    std::size_t hit_neighbor = 0;
    for (int k = 1; k <= d.M && hit_knot < 0; ++k) {
        for (std::size_t j = 0; j < d.neighbor_pos.size(); ++j) {
            if ((p[k] - d.neighbor_pos[j][k]).norm_sq() < d.contact_sq) {
                hit_knot = k;
                hit_neighbor = j;
                break;
            }
        }
    }
    if (hit_knot < 0) return u;

    const auto& q = d.neighbor_pos[hit_neighbor];
    const Vec2 v_neighbor = (q[1] - q[0]) / d.dt; // knot-rate estimate
    const Vec2 v_rel = d.x0.velocity - v_neighbor;
    const double rel_speed = v_rel.norm();

    Vec2 brake;
    double brake_time = 0.0;
    if (rel_speed > 1e-12) {
        brake = v_rel * (-0.9 * d.u_max / rel_speed);
        brake_time = rel_speed / (0.9 * d.u_max);
    }

    // Re-check under the braking seed; add the lateral escape if contact
    // persists (imminent or unavoidable-by-braking geometry).
    for (int k = 0; k < d.M; ++k) u[k] = (k + 0.5) * d.dt < brake_time ? brake : Vec2{};
    forward(d, u, p, v);
    bool still_hit = false;
    for (int k = 1; k <= d.M && !still_hit; ++k) {
        still_hit = (p[k] - q[k]).norm_sq() < d.contact_sq;
    }
    if (still_hit) {
        Vec2 rel_pos = d.x0.position - q[0];
        if (rel_pos.norm() < 1e-12) rel_pos = {1.0, 0.0};
        const Vec2 lateral = Vec2{-rel_pos.y, rel_pos.x} * (1.0 / rel_pos.norm());
        for (int k = 0; k < d.M; ++k) {
            if ((k + 0.5) * d.dt < std::max(brake_time, 4.0 * d.dt)) {
                u[k] = project_control(u[k] + lateral * (0.5 * d.u_max), d.u_max);
            }
        }
    }
    return u;
}

std::vector<SafetyRow> linearize_safety(const ProblemData& d,
                                        const std::vector<Vec2>& p) {
    const double contact = std::sqrt(d.contact_sq);
    std::vector<SafetyRow> rows;
    rows.reserve(d.neighbor_pos.size() * d.M);
    for (const auto& q : d.neighbor_pos) {
        for (int k = 1; k <= d.M; ++k) {
            const Vec2 diff = p[k] - q[k];
            const double dist_sq = diff.norm_sq();
            SafetyRow row;
            row.knot = k;
            if (dist_sq >= d.contact_sq) {
                // Outside contact: linearize the squared form,
                // ||pbar-q||^2 + 2(pbar-q).(p - pbar) >= 4R^2, so
                // l(p) = 4R^2 - ||pbar-q||^2 + n.pbar - n.p with n = 2(pbar-q).
                row.normal = diff * 2.0;
                row.c0 = d.contact_sq - dist_sq + row.normal.dot(p[k]);
                row.feas_tol = 0.25 * 1e-6 * d.contact_sq;
            } else {
                // Inside contact the squared-form gradient collapses; use the
                // signed-distance linearization n_hat.(p - q) >= 2R, which is
                // conservative everywhere and keeps a unit gradient.
                const double dist = std::sqrt(dist_sq);
                const Vec2 n_hat = dist > 1e-12 ? diff / dist : Vec2{1.0, 0.0};
                row.normal = n_hat;
                row.c0 = contact + n_hat.dot(q[k]);
                row.feas_tol = 0.25 * 1e-6 * contact;
            }
            rows.push_back(row);
        }
    }
    return rows;
}

} // namespace

PlanSolution plan(const PlanProblem& problem, const std::optional<Trajectory>& warm_start) {
    const FlockConfig& cfg = problem.config;
    const int M = cfg.plan_steps;
    if (M < 1) throw ValidationError("plan_steps", "must be at least 1");
    const double horizon = problem.tf - problem.t0;
    if (horizon <= 0.0) throw std::invalid_argument("plan: tf must exceed t0");
    if (std::fabs(horizon - cfg.horizon) > 1e-9 * std::max(1.0, cfg.horizon)) {
        throw std::invalid_argument("plan: tf - t0 must equal config.horizon");
    }
    if (!problem.x0.is_finite()) throw std::invalid_argument("plan: non-finite x0");

    ProblemData d;
    d.M = M;
    d.dt = horizon / M;
    d.u_max = cfg.u_max;
    d.v_max = cfg.v_max;
    d.alpha = cfg.alpha;
    d.flock_radius_sq = cfg.flock_radius * cfg.flock_radius;
    d.contact_sq = 4.0 * cfg.body_radius * cfg.body_radius;
    d.x0 = problem.x0;
    d.pinned = problem.pinned_terminal;
    d.has_task = !problem.neighbor_trajectories.empty();

    // Neighbor plans sampled at the knot times; the sampler extends
    // ballistically past each plan's end.
    d.neighbor_pos.reserve(problem.neighbor_trajectories.size());
    std::vector<Vec2> center_accum(M + 1);
    for (const auto& [id, traj] : problem.neighbor_trajectories) {
        std::vector<Vec2> samples(M + 1);
        for (int k = 0; k <= M; ++k) {
            const BoidState s = traj.state_at(problem.t0 + k * d.dt);
            samples[k] = s.position;
            center_accum[k] += s.position;
        }
        d.neighbor_pos.push_back(std::move(samples));
    }
    if (d.has_task) {
        d.centers.resize(M + 1);
        const double inv = 1.0 / static_cast<double>(d.neighbor_pos.size());
        for (int k = 0; k <= M; ++k) d.centers[k] = center_accum[k] * inv;
    }

    // Initial iterate: warm start when its discretization matches and it
    // stays clear of every neighbor. An iterate that passes through a
    // neighbor makes the linearization side-inconsistent, so contact demotes
    // the warm start to the braking seed.
    std::vector<Vec2> u;
    if (warm_start && warm_start->steps() == M &&
        std::fabs(warm_start->dt - d.dt) < 1e-12 * std::max(1.0, d.dt)) {
        u.resize(M);
        for (int k = 0; k < M; ++k) {
            u[k] = project_control(warm_start->control_at(problem.t0 + (k + 0.5) * d.dt),
                                   d.u_max);
        }
        // Shallow grazing linearizes fine; only deep penetration (where the
        // side assignment of the rows becomes meaningless) is disqualifying.
        const double deep_sq = 0.36 * d.contact_sq;
        std::vector<Vec2> p(M + 1), v(M + 1);
        forward(d, u, p, v);
        for (const auto& q : d.neighbor_pos) {
            for (int k = 1; k <= M; ++k) {
                if ((p[k] - q[k]).norm_sq() < deep_sq) {
                    u.clear();
                    break;
                }
            }
            if (u.empty()) break;
        }
    }
    if (u.empty()) u = make_seed(d);

    Multipliers mult;
    mult.safety.assign(d.neighbor_pos.size() * M, 0.0);
    mult.vel.assign(M, 0.0);
    mult.task.assign(M, 0.0);
    mult.rho = 10.0;

    FistaScratch ws;
    ws.p.resize(M + 1);
    ws.v.resize(M + 1);
    ws.gp.resize(M + 1);
    ws.gv.resize(M + 1);
    ws.grad.resize(M);
    ws.grad_z.resize(M);
    ws.y.resize(M);
    ws.z.resize(M);
    ws.prev.resize(M);

    const double tol_conv = 1e-6 * d.u_max;
    const int max_iters = 30;
    std::vector<Vec2> p(M + 1), v(M + 1);
    double merit_prev = merit(d, u, p, v);

    int iterations = 0;
    bool scp_converged = false;
    for (int it = 0; it < max_iters; ++it) {
        ++iterations;
        forward(d, u, p, v);
        const std::vector<SafetyRow> rows = linearize_safety(d, p);
        if (mult.safety.size() != rows.size()) mult.safety.assign(rows.size(), 0.0);

        std::vector<Vec2> u_new = u;
        solve_subproblem(d, rows, mult, u_new, ws);

        // Trust region: cap the per-knot control update at u_max.
        double step_inf = 0.0;
        for (int k = 0; k < M; ++k) step_inf = std::max(step_inf, (u_new[k] - u[k]).norm());
        double scale = step_inf > d.u_max ? d.u_max / step_inf : 1.0;

        // Accept the largest damped step that does not increase the merit.
        double accepted_step = 0.0;
        for (int half = 0; half < 12; ++half) {
            std::vector<Vec2> candidate(M);
            for (int k = 0; k < M; ++k) {
                candidate[k] = project_control(u[k] + (u_new[k] - u[k]) * scale, d.u_max);
            }
            const double m = merit(d, candidate, p, v);
            if (m <= merit_prev + 1e-10 * (1.0 + std::fabs(merit_prev))) {
                double change = 0.0;
                for (int k = 0; k < M; ++k) {
                    change = std::max(change, (candidate[k] - u[k]).norm());
                }
                u = std::move(candidate);
                merit_prev = m;
                accepted_step = change;
                break;
            }
            scale *= 0.5;
        }
        if (accepted_step < tol_conv) {
            scp_converged = true;
            break;
        }
    }

    forward(d, u, p, v);
    std::vector<double> slacks(M, 0.0);
    if (d.has_task) {
        for (int k = 0; k < M; ++k) {
            slacks[k] = std::max(0.0, (p[k + 1] - d.centers[k + 1]).norm_sq() -
                                          d.flock_radius_sq);
        }
    }

    PlanSolution sol;
    sol.trajectory = make_trajectory(problem.x0, problem.t0, d.dt, u, slacks);
    sol.cost = evaluate_objective(sol.trajectory, d.alpha);
    sol.iterations = iterations;

    double worst_violation = 0.0;
    for (const auto& q : d.neighbor_pos) {
        for (int k = 1; k <= M; ++k) {
            worst_violation =
                std::max(worst_violation, d.contact_sq - (p[k] - q[k]).norm_sq());
        }
    }
    sol.max_safety_violation = std::max(0.0, worst_violation);

    const Violations vio = measure(d, linearize_safety(d, p), p, v);
    const double tol_hard = hard_safety_tol(cfg.body_radius);
    bool bounds_ok = vio.vel <= 1e-6 * d.v_max * d.v_max;
    bool terminal_ok = !d.pinned || vio.eq <= 1e-6 * (1.0 + std::sqrt(d.flock_radius_sq));
    sol.converged =
        scp_converged && sol.max_safety_violation <= tol_hard && bounds_ok && terminal_ok;
    return sol;
}

double evaluate_objective(const Trajectory& trajectory, double alpha) {
    double acc = 0.0;
    for (int k = 0; k < trajectory.steps(); ++k) {
        acc += trajectory.controls[k].norm_sq() + alpha * trajectory.slacks[k];
    }
    return 0.5 * acc * trajectory.dt;
}

} // namespace flock
