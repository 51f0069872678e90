#pragma once

#include <filesystem>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "mtpattern/appropagation.hpp"
#include "mtpattern/ingest.hpp"
#include "mtpattern/patterns.hpp"
#include "mtpattern/preprocess.hpp"
#include "mtpattern/segtree.hpp"

namespace mtpattern {

// subject,day,t1;t2;...;tp
void write_point_sequences(std::ostream& out, const std::vector<PointSequence>& sequences);
std::vector<PointSequence> read_point_sequences(std::istream& in);

// subject,day,lambda,bitstring
void write_bis(std::ostream& out, const std::vector<Bis>& rows);
std::vector<Bis> read_bis(std::istream& in);

// Header n,w_units,lambda then i,j,value triplets; infinite entries are
// omitted by contract, as is the zero diagonal.
void write_matrix(std::ostream& out, const DistanceMatrix& m, std::int32_t lambda_s);

// index,mode_id
void write_labels(std::ostream& out, const std::vector<int>& labels);
std::vector<int> read_labels(std::istream& in);

// Raw-trace CSV matching the ingest schema (device,subject,timestamp,rssi).
void write_sensor_records(std::ostream& out, const std::vector<SensorRecord>& records);

// cluster_id,exemplar_index,member,member,...
void write_clusters_csv(std::ostream& out, const ClusteringResult& r);
ClusteringResult read_clusters_csv(std::istream& in);
nlohmann::json clustering_summary(const ClusteringResult& r);

nlohmann::json patterns_json(std::int32_t le, std::int32_t ri, std::int32_t lambda_s,
                             const std::vector<Pattern>& patterns);
std::vector<Pattern> patterns_from_json(const nlohmann::json& j);
// pattern_id,exemplar,support,bin,probability
void write_patterns_csv(std::ostream& out, const std::vector<Pattern>& patterns);

// Tree persistence: directory with meta.json, bis.csv, nodes.txt (one line
// per node: node_id,left,right,child_ids) and per-node sparse matrix files
// holding exact sums and counts. Reload is bit-exact.
void save_tree(const SegmentTree& tree, const std::filesystem::path& dir);
SegmentTree load_tree(const std::filesystem::path& dir);

}  // namespace mtpattern
