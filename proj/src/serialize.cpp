#include "stagewise/serialize.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "stagewise/errors.hpp"

namespace stagewise {

using nlohmann::json;

std::string fnv1a_hex(const std::string& bytes) {
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw UsageError("cannot open output file: " + path);
    out << content;
    if (!out) throw UsageError("write failed: " + path);
}

std::string hash_file(const std::string& path) { return fnv1a_hex(read_text_file(path)); }

std::string dump_json(const json& j) { return j.dump(2) + "\n"; }

json matrix_to_json(const Eigen::MatrixXd& m) {
    json j;
    j["rows"] = m.rows();
    j["cols"] = m.cols();
    json data = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index k = 0; k < m.cols(); ++k) data.push_back(m(i, k));
    j["data"] = std::move(data);
    return j;
}

Eigen::MatrixXd matrix_from_json(const json& j) {
    const Eigen::Index rows = j.at("rows").get<Eigen::Index>();
    const Eigen::Index cols = j.at("cols").get<Eigen::Index>();
    const auto& data = j.at("data");
    if (static_cast<Eigen::Index>(data.size()) != rows * cols)
        throw SchemaError("matrix_from_json: data length != rows*cols");
    Eigen::MatrixXd m(rows, cols);
    Eigen::Index at = 0;
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index k = 0; k < cols; ++k) m(i, k) = data[at++].get<double>();
    return m;
}

json basis_to_json(const StationaryBasis& b) {
    json j;
    j["whitener"] = matrix_to_json(b.whitener);
    j["rotation"] = matrix_to_json(b.rotation);
    j["d"] = b.d;
    j["projector"] = matrix_to_json(b.projector);
    j["objective_value"] = b.objective_value;
    j["converged"] = b.converged;
    return j;
}

StationaryBasis basis_from_json(const json& j) {
    StationaryBasis b;
    b.whitener = matrix_from_json(j.at("whitener"));
    b.rotation = matrix_from_json(j.at("rotation"));
    b.d = j.at("d").get<int>();
    b.projector = matrix_from_json(j.at("projector"));
    b.objective_value = j.at("objective_value").get<double>();
    b.converged = j.at("converged").get<bool>();
    return b;
}

json monitor_to_json(const MonitoringModel& m) {
    json j;
    json center = json::array();
    for (Eigen::Index i = 0; i < m.center.size(); ++i) center.push_back(m.center[i]);
    j["center"] = std::move(center);
    j["loadings"] = matrix_to_json(m.loadings);
    j["score_cov"] = matrix_to_json(m.score_cov);
    j["t2_limit"] = m.t2_limit;
    j["n_components"] = m.n_components;
    j["alpha"] = m.alpha;
    j["n_train"] = m.n_train;
    return j;
}

MonitoringModel monitor_from_json(const json& j) {
    MonitoringModel m;
    const auto& c = j.at("center");
    m.center.resize(static_cast<Eigen::Index>(c.size()));
    for (Eigen::Index i = 0; i < m.center.size(); ++i)
        m.center[i] = c[static_cast<size_t>(i)].get<double>();
    m.loadings = matrix_from_json(j.at("loadings"));
    m.score_cov = matrix_from_json(j.at("score_cov"));
    Eigen::LLT<Eigen::MatrixXd> llt(m.score_cov);
    if (llt.info() != Eigen::Success)
        throw SchemaError("monitor_from_json: score covariance not positive definite");
    m.score_cov_inv = llt.solve(
        Eigen::MatrixXd::Identity(m.score_cov.rows(), m.score_cov.cols()));
    m.t2_limit = j.at("t2_limit").get<double>();
    m.n_components = j.at("n_components").get<int>();
    m.alpha = j.at("alpha").get<double>();
    m.n_train = j.at("n_train").get<Eigen::Index>();
    return m;
}

json config_to_json(const SegmenterConfig& c) {
    json j;
    j["window"] = c.window;
    j["alpha"] = c.alpha;
    j["variance_target"] = c.variance_target;
    j["consecutive_required"] = c.consecutive_required;
    j["max_lag"] = c.max_lag;
    j["max_r"] = c.max_r;
    j["ssa"] = {{"n_restarts", c.ssa.n_restarts},
                {"max_iters", c.ssa.max_iters},
                {"grad_tol", c.ssa.grad_tol},
                {"seed", c.ssa.seed},
                {"adf_alpha", c.ssa.adf_alpha}};
    return j;
}

SegmenterConfig config_from_json(const json& j) {
    SegmenterConfig c;
    c.window = j.at("window").get<int>();
    c.alpha = j.at("alpha").get<double>();
    c.variance_target = j.at("variance_target").get<double>();
    c.consecutive_required = j.at("consecutive_required").get<int>();
    c.max_lag = j.at("max_lag").get<int>();
    c.max_r = j.at("max_r").get<int>();
    const auto& s = j.at("ssa");
    c.ssa.n_restarts = s.at("n_restarts").get<int>();
    c.ssa.max_iters = s.at("max_iters").get<int>();
    c.ssa.grad_tol = s.at("grad_tol").get<double>();
    c.ssa.seed = s.at("seed").get<std::uint64_t>();
    c.ssa.adf_alpha = s.at("adf_alpha").get<double>();
    return c;
}

json segmentation_to_json(const Segmentation& seg, int n_cycles) {
    json j;
    j["dataset"] = seg.dataset_name;
    j["n_cycles"] = n_cycles;
    j["n_stages"] = seg.stages.size();
    j["config"] = config_to_json(seg.config);
    j["notes"] = seg.notes;
    json stages = json::array();
    for (const StageRange& s : seg.stages) {
        stages.push_back({{"start_cycle", s.start_cycle},
                          {"end_cycle", s.end_cycle},
                          {"tau", s.tau},
                          {"r", s.r},
                          {"d", s.d},
                          {"sync_rows", s.sync_rows},
                          {"n_components", s.n_components},
                          {"objective", s.objective},
                          {"t2_limit", s.t2_limit},
                          {"converged", s.converged},
                          {"short_tail", s.short_tail}});
    }
    j["stages"] = std::move(stages);
    return j;
}

json truth_to_json(const GroundTruth& t) {
    json j;
    j["change_cycles"] = t.change_cycles;
    j["d_true"] = t.d_true;
    j["mixing"] = matrix_to_json(t.mixing);
    j["stationary_subspace"] = matrix_to_json(t.stationary_subspace);
    return j;
}

std::string scores_to_csv(const Segmentation& seg) {
    std::ostringstream out;
    out << "cycle,stage_id,ar,t2_limit\n";
    char buf[160];
    for (const ScoreEvent& e : seg.trace) {
        std::snprintf(buf, sizeof(buf), "%d,%d,%.17g,%.17g\n", e.cycle_index, e.stage_id, e.ar,
                      e.t2_limit);
        out << buf;
    }
    return out.str();
}

} // namespace stagewise
