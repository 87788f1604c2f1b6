#pragma once

#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "fricflow/timestepper.hpp"

namespace fricflow {

inline constexpr const char* kTimeseriesHeader = "t,energy,j,j_eps,max_defect,delta,newton_iters,h1_norm";

std::string format_timeseries_row(const DiagnosticsRow& row);
std::string format_timeseries(const std::vector<DiagnosticsRow>& rows);

// Header lines `# t`, `# dt`, `# eps`, `# mesh_hash`, then one `x y ux uy`
// row per velocity node and one `x y side p` row per pressure dof.
std::string format_snapshot(const Discretization& disc, const State& state, double dt, double eps);

std::string mesh_hash_hex(const Mesh& mesh);

// Streams timeseries.csv and snapshots while a run progresses. The
// constructor creates the directory and probes that it is writable, so a bad
// path fails before any stepping. Rows are flushed as they arrive; a run
// that aborts leaves everything written so far.
class OutputWriter {
public:
    OutputWriter(const std::filesystem::path& directory, const Discretization& disc, const RunConfig& cfg);
    ~OutputWriter();
    OutputWriter(const OutputWriter&) = delete;
    OutputWriter& operator=(const OutputWriter&) = delete;

    void observe(const State& state, const DiagnosticsRow& row);
    void write_mesh_dump() const;

    const std::filesystem::path& directory() const { return dir_; }
    const std::vector<std::filesystem::path>& snapshots() const { return snapshots_; }

private:
    std::filesystem::path dir_;
    const Discretization& disc_;
    RunConfig cfg_;
    std::FILE* csv_ = nullptr;
    int count_ = 0;
    std::vector<std::filesystem::path> snapshots_;
};

// Writes a finished (or partial) trajectory in one go.
void write_outputs(const Trajectory& traj, const Discretization& disc, const RunConfig& cfg,
                   const std::filesystem::path& directory);

}  // namespace fricflow
