#pragma once

#include <json.hpp>

#include <cstdint>
#include <string>

#include "stagewise/monitor.hpp"
#include "stagewise/segment.hpp"
#include "stagewise/ssa.hpp"
#include "stagewise/synth.hpp"

namespace stagewise {

// FNV-1a 64-bit content hash, lowercase hex.
std::string fnv1a_hex(const std::string& bytes);
std::string hash_file(const std::string& path);

nlohmann::json matrix_to_json(const Eigen::MatrixXd& m);
Eigen::MatrixXd matrix_from_json(const nlohmann::json& j);

nlohmann::json basis_to_json(const StationaryBasis& basis);
StationaryBasis basis_from_json(const nlohmann::json& j);

nlohmann::json monitor_to_json(const MonitoringModel& model);
MonitoringModel monitor_from_json(const nlohmann::json& j);

nlohmann::json config_to_json(const SegmenterConfig& config);
SegmenterConfig config_from_json(const nlohmann::json& j);

nlohmann::json segmentation_to_json(const Segmentation& seg, int n_cycles);

nlohmann::json truth_to_json(const GroundTruth& truth);

// Canonical text form used for every emitted JSON document: UTF-8, two-space
// indent, keys sorted, trailing newline.
std::string dump_json(const nlohmann::json& j);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

// Flat score trace: header cycle,stage_id,ar,t2_limit; one row per scoring
// event in driver order.
std::string scores_to_csv(const Segmentation& seg);

} // namespace stagewise
