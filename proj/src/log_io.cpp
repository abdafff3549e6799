#include "flock/log_io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace flock {

namespace {

void append_real(std::string& out, double v) {
    char buffer[64];
    std::snprintf(buffer, sizeof buffer, "%.15g", v);
    out += buffer;
}

std::string format_real(double v) {
    char buffer[64];
    std::snprintf(buffer, sizeof buffer, "%.15g", v);
    return buffer;
}

struct EventLine {
    double time = 0.0;
    std::string text;
};

} // namespace

std::string trajectory_csv(const SimulationLog& log) {
    std::string out = kTrajectoryCsvHeader;
    out += "\n";
    for (int ti = 0; ti < log.n_times(); ++ti) {
        for (int i = 0; i < log.n_agents(); ++i) {
            append_real(out, log.times[ti]);
            out += ",";
            out += std::to_string(i);
            out += ",";
            append_real(out, log.states[ti][i].position.x);
            out += ",";
            append_real(out, log.states[ti][i].position.y);
            out += ",";
            append_real(out, log.states[ti][i].velocity.x);
            out += ",";
            append_real(out, log.states[ti][i].velocity.y);
            out += ",";
            append_real(out, log.applied_controls[ti][i].x);
            out += ",";
            append_real(out, log.applied_controls[ti][i].y);
            out += ",";
            append_real(out, log.task_residuals[ti][i]);
            out += ",";
            append_real(out, log.slack_values[ti][i]);
            out += ",";
            append_real(out, log.min_safety_margins[ti][i]);
            out += "\n";
        }
    }
    return out;
}

std::vector<TrajectoryCsvRow> parse_trajectory_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != kTrajectoryCsvHeader) {
        throw ValidationError("csv", "unexpected trajectory header");
    }
    std::vector<TrajectoryCsvRow> rows;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        TrajectoryCsvRow row;
        long long agent = 0;
        const int matched =
            std::sscanf(line.c_str(), "%lf,%lld,%lf,%lf,%lf,%lf,%lf,%lf,%lf,%lf,%lf",
                        &row.t, &agent, &row.px, &row.py, &row.vx, &row.vy, &row.ux,
                        &row.uy, &row.g, &row.eta_sq, &row.min_safety);
        if (matched != 11 || agent < 0) {
            throw ValidationError("csv", "malformed row at line " + std::to_string(line_no));
        }
        row.agent = static_cast<AgentId>(agent);
        rows.push_back(row);
    }
    return rows;
}

std::string event_log_text(const SimulationLog& log) {
    std::vector<EventLine> lines;
    lines.reserve(log.switch_events.size() + log.replan_events.size() +
                  log.safety_failures.size());

    for (const SwitchEvent& ev : log.switch_events) {
        std::string detail = "removed=";
        for (std::size_t m = 0; m < ev.removed.size(); ++m) {
            if (m) detail += "|";
            detail += std::to_string(ev.removed[m]);
        }
        detail += ";added=";
        for (std::size_t m = 0; m < ev.added.size(); ++m) {
            if (m) detail += "|";
            detail += std::to_string(ev.added[m]);
        }
        detail += ";symmetric=";
        detail += ev.symmetric ? "1" : "0";
        lines.push_back({ev.time, format_real(ev.time) + "," + std::to_string(ev.agent) +
                                      ",switch," + detail});
    }
    for (const ReplanEvent& ev : log.replan_events) {
        const char* cause = ev.cause == ReplanCause::Initial    ? "initial"
                            : ev.cause == ReplanCause::Periodic ? "periodic"
                                                                : "switch";
        lines.push_back({ev.time, format_real(ev.time) + "," + std::to_string(ev.agent) +
                                      ",replan," + cause +
                                      (ev.converged ? ";converged=1" : ";converged=0")});
    }
    for (const SafetyFailure& f : log.safety_failures) {
        lines.push_back({f.time, format_real(f.time) + "," + std::to_string(f.a) +
                                     ",safety,partner=" + std::to_string(f.b) +
                                     ";margin=" + format_real(f.margin)});
    }
    std::stable_sort(lines.begin(), lines.end(),
                     [](const EventLine& a, const EventLine& b) { return a.time < b.time; });
    std::string out;
    for (const EventLine& l : lines) {
        out += l.text;
        out += "\n";
    }
    return out;
}

std::string report_text(const RunReport& report) {
    std::ostringstream out;
    out << "consensus_time: "
        << (report.consensus_time ? format_real(*report.consensus_time) : "none") << "\n";
    out << "final_velocity_disagreement: "
        << format_real(report.final_velocity_disagreement) << "\n";
    out << "min_safety_margin: " << format_real(report.min_safety_margin) << "\n";
    out << "max_task_residual: " << format_real(report.max_task_residual) << "\n";
    out << "flock_diameter_final: " << format_real(report.flock_diameter_final) << "\n";
    out << "diameter_bound: " << format_real(report.diameter_bound) << "\n";
    out << "control_continuity_ok: " << (report.control_continuity_ok ? "true" : "false")
        << "\n";
    out << "safety_failures: " << report.safety_failures << "\n";
    for (std::size_t i = 0; i < report.total_energy.size(); ++i) {
        out << "total_energy[" << i << "]: " << format_real(report.total_energy[i]) << "\n";
    }
    for (std::size_t i = 0; i < report.integrated_slack.size(); ++i) {
        out << "integrated_slack[" << i
            << "]: " << format_real(report.integrated_slack[i]) << "\n";
    }
    return out.str();
}

void write_run_outputs(const std::filesystem::path& out_dir, const SimulationLog& log,
                       const RunReport& report) {
    std::filesystem::create_directories(out_dir);
    {
        std::ofstream out(out_dir / "trajectory.csv", std::ios::binary);
        if (!out) throw ValidationError((out_dir / "trajectory.csv").string(), "cannot write");
        out << trajectory_csv(log);
    }
    {
        std::ofstream out(out_dir / "events.log", std::ios::binary);
        if (!out) throw ValidationError((out_dir / "events.log").string(), "cannot write");
        out << event_log_text(log);
    }
    {
        std::ofstream out(out_dir / "report.txt", std::ios::binary);
        if (!out) throw ValidationError((out_dir / "report.txt").string(), "cannot write");
        out << report_text(report);
    }
}

} // namespace flock
