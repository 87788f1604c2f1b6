#include "fricflow/output.hpp"

#include <cinttypes>
#include <fstream>
#include <stdexcept>

namespace fricflow {

namespace {

void append(std::string& s, const char* fmt, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, fmt, v);
    s += buf;
}

bool snapshot_due(int k, int n, int stride) { return stride > 0 && (k == 0 || k == n || k % stride == 0); }

std::string snapshot_name(int k) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "snapshot_%06d.txt", k);
    return buf;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    f << content;
    if (!f) throw std::runtime_error("cannot write '" + path.string() + "'");
}

}  // namespace

std::string format_timeseries_row(const DiagnosticsRow& r) {
    std::string s;
    append(s, "%.16e", r.t);
    for (double v : {r.energy, r.j, r.j_eps, r.max_defect, r.delta}) append(s, ",%.16e", v);
    s += "," + std::to_string(r.newton_iters);
    append(s, ",%.16e", r.h1_norm);
    return s;
}

std::string format_timeseries(const std::vector<DiagnosticsRow>& rows) {
    std::string s = std::string(kTimeseriesHeader) + "\n";
    for (const auto& r : rows) s += format_timeseries_row(r) + "\n";
    return s;
}

std::string mesh_hash_hex(const Mesh& mesh) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%016" PRIx64, mesh.hash());
    return buf;
}

std::string format_snapshot(const Discretization& disc, const State& st, double dt, double eps) {
    std::string s;
    append(s, "# t %.16e\n", st.t);
    append(s, "# dt %.16e\n", dt);
    append(s, "# eps %.16e\n", eps);
    s += "# mesh_hash " + mesh_hash_hex(disc.mesh) + "\n";
    const auto& vm = disc.vmap;
    s += "# velocity " + std::to_string(vm.num_nodes()) + "\n# x y ux uy\n";
    char buf[160];
    for (int i = 0; i < vm.num_nodes(); ++i) {
        const Vec2 x = vm.node_coords[i];
        std::snprintf(buf, sizeof buf, "%.16e %.16e %.16e %.16e\n", x.x, x.y, st.u[VelocityDofMap::dof(i, 0)],
                      st.u[VelocityDofMap::dof(i, 1)]);
        s += buf;
    }
    const auto& pm = disc.pmap;
    s += "# pressure " + std::to_string(pm.num_dofs()) + "\n# x y side p\n";
    for (int i = 0; i < pm.num_dofs(); ++i) {
        const Vec2 x = pm.dof_coords[i];
        std::snprintf(buf, sizeof buf, "%.16e %.16e %s %.16e\n", x.x, x.y,
                      pm.dof_side[i] == Subdomain::In ? "in" : "out", st.p[i]);
        s += buf;
    }
    return s;
}

OutputWriter::OutputWriter(const std::filesystem::path& directory, const Discretization& disc, const RunConfig& cfg)
    : dir_(directory), disc_(disc), cfg_(cfg) {
    std::error_code ec;
    std::filesystem::create_directories(dir_, ec);
    if (ec) throw std::runtime_error("cannot create output directory '" + dir_.string() + "': " + ec.message());
    const auto csv = dir_ / "timeseries.csv";
    csv_ = std::fopen(csv.string().c_str(), "wb");
    if (!csv_) throw std::runtime_error("output directory '" + dir_.string() + "' is not writable");
    std::fprintf(csv_, "%s\n", kTimeseriesHeader);
    std::fflush(csv_);
}

OutputWriter::~OutputWriter() {
    if (csv_) std::fclose(csv_);
}

void OutputWriter::observe(const State& state, const DiagnosticsRow& row) {
    const int k = count_++;
    std::fprintf(csv_, "%s\n", format_timeseries_row(row).c_str());
    std::fflush(csv_);
    if (snapshot_due(k, cfg_.num_steps(), cfg_.output.snapshot_stride)) {
        const auto path = dir_ / snapshot_name(k);
        write_file(path, format_snapshot(disc_, state, cfg_.dt, cfg_.eps));
        snapshots_.push_back(path);
    }
}

void OutputWriter::write_mesh_dump() const {
    std::ofstream f(dir_ / "mesh.txt", std::ios::binary);
    write_mesh(f, disc_.mesh);
    if (!f) throw std::runtime_error("cannot write mesh dump");
}

void write_outputs(const Trajectory& traj, const Discretization& disc, const RunConfig& cfg,
                   const std::filesystem::path& directory) {
    OutputWriter w(directory, disc, cfg);
    for (std::size_t k = 0; k < traj.states.size() && k < traj.rows.size(); ++k) w.observe(traj.states[k], traj.rows[k]);
}

}  // namespace fricflow
