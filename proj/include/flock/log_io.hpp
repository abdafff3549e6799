#pragma once
/**
 * @file log_io.hpp
 * @brief Serialization of run artifacts: trajectory CSV, event log and the
 *        run summary. Data-only output; rendering is external tooling's job.
 */

#include <filesystem>
#include <string>
#include <vector>

#include "flock/metrics.hpp"
#include "flock/simulator.hpp"

namespace flock {

/// One parsed trajectory CSV record.
struct TrajectoryCsvRow {
    double t = 0.0;
    AgentId agent = 0;
    double px = 0.0, py = 0.0, vx = 0.0, vy = 0.0;
    double ux = 0.0, uy = 0.0;
    double g = 0.0;
    double eta_sq = 0.0;
    double min_safety = 0.0;
};

/// Column header; downstream plotting scripts depend on this exact string.
inline constexpr const char* kTrajectoryCsvHeader =
    "t,agent,px,py,vx,vy,ux,uy,g,eta_sq,min_safety";

/// Rows sorted by (t, agent), 15 significant digits.
std::string trajectory_csv(const SimulationLog& log);

/// Parses CSV produced by trajectory_csv; throws ValidationError on a bad
/// header or malformed row.
std::vector<TrajectoryCsvRow> parse_trajectory_csv(const std::string& text);

/// Event log, one line per event: `t,agent,kind,detail`, sorted by time.
std::string event_log_text(const SimulationLog& log);

/// Summary document, `key: value` lines mirroring RunReport.
std::string report_text(const RunReport& report);

/// Writes trajectory.csv, events.log and report.txt under out_dir.
void write_run_outputs(const std::filesystem::path& out_dir, const SimulationLog& log,
                       const RunReport& report);

} // namespace flock
