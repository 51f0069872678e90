#include "mtpattern/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

namespace mtpattern {

namespace {

std::int64_t to_int(std::string_view s, const char* what) {
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
        throw InputError(std::string("bad ") + what + ": '" + std::string(s) + "'");
    return v;
}

std::ofstream open_out(const std::filesystem::path& p) {
    std::ofstream out(p);
    if (!out) throw InputError("cannot write " + p.string());
    return out;
}

std::ifstream open_in(const std::filesystem::path& p) {
    std::ifstream in(p);
    if (!in) throw InputError("cannot read " + p.string());
    return in;
}

bool next_line(std::istream& in, std::string& line) {
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!line.empty()) return true;
    }
    return false;
}

}  // namespace

void write_point_sequences(std::ostream& out, const std::vector<PointSequence>& sequences) {
    for (const auto& ps : sequences) {
        out << ps.subject_id << ',' << format_day(ps.day) << ',';
        for (std::size_t i = 0; i < ps.seconds.size(); ++i) {
            if (i) out << ';';
            out << ps.seconds[i];
        }
        out << '\n';
    }
}

std::vector<PointSequence> read_point_sequences(std::istream& in) {
    std::vector<PointSequence> out;
    std::string line;
    while (next_line(in, line)) {
        const auto fields = split(line, ',');
        if (fields.size() != 3)
            throw InputError("point-sequence line needs subject,day,timestamps: " + line);
        PointSequence ps;
        ps.subject_id = std::string(fields[0]);
        ps.day = parse_day(fields[1]);
        if (!fields[2].empty()) {
            for (const auto part : split(fields[2], ';')) {
                const std::int64_t t = to_int(part, "timestamp");
                if (t < 0 || t >= kSecondsPerDay)
                    throw InputError("timestamp outside day range: " + std::string(part));
                ps.seconds.push_back(static_cast<std::int32_t>(t));
            }
        }
        for (std::size_t i = 1; i < ps.seconds.size(); ++i)
            if (ps.seconds[i] <= ps.seconds[i - 1])
                throw InputError("timestamps must be strictly increasing: " + line);
        out.push_back(std::move(ps));
    }
    return out;
}

void write_bis(std::ostream& out, const std::vector<Bis>& rows) {
    std::string bitstring;
    for (const auto& b : rows) {
        bitstring.assign(b.bits.size(), '0');
        for (std::size_t i = 0; i < b.bits.size(); ++i)
            if (b.bits[i]) bitstring[i] = '1';
        out << b.subject_id << ',' << format_day(b.day) << ',' << b.lambda_s << ','
            << bitstring << '\n';
    }
}

std::vector<Bis> read_bis(std::istream& in) {
    std::vector<Bis> out;
    std::string line;
    while (next_line(in, line)) {
        const auto fields = split(line, ',');
        if (fields.size() != 4)
            throw InputError("BIS line needs subject,day,lambda,bits: " + line);
        Bis b;
        b.subject_id = std::string(fields[0]);
        b.day = parse_day(fields[1]);
        b.lambda_s = static_cast<std::int32_t>(to_int(fields[2], "lambda"));
        if (b.lambda_s <= 0) throw InputError("lambda must be positive: " + line);
        b.bits.reserve(fields[3].size());
        for (const char c : fields[3]) {
            if (c != '0' && c != '1') throw InputError("BIS bits must be 0/1: " + line);
            b.bits.push_back(c == '1');
        }
        out.push_back(std::move(b));
    }
    return out;
}

void write_matrix(std::ostream& out, const DistanceMatrix& m, std::int32_t lambda_s) {
    out << m.size() << ',' << m.w_units() << ',' << lambda_s << '\n';
    out.precision(std::numeric_limits<double>::max_digits10);
    for (int i = 0; i < m.size(); ++i) {
        for (int j = i + 1; j < m.size(); ++j) {
            const auto v = m.value(i, j);
            if (v) out << i << ',' << j << ',' << *v << '\n';
        }
    }
}

void write_labels(std::ostream& out, const std::vector<int>& labels) {
    for (std::size_t i = 0; i < labels.size(); ++i)
        out << i << ',' << labels[i] << '\n';
}

std::vector<int> read_labels(std::istream& in) {
    std::vector<int> out;
    std::string line;
    while (next_line(in, line)) {
        const auto fields = split(line, ',');
        if (fields.size() != 2) throw InputError("labels line needs index,mode: " + line);
        const auto idx = static_cast<std::size_t>(to_int(fields[0], "index"));
        if (idx != out.size()) throw InputError("labels must be dense and ordered: " + line);
        out.push_back(static_cast<int>(to_int(fields[1], "mode")));
    }
    return out;
}

void write_sensor_records(std::ostream& out, const std::vector<SensorRecord>& records) {
    out << "device,subject,timestamp,rssi\n";
    for (const auto& r : records) {
        out << r.device_id << ',' << r.subject_id << ',' << r.timestamp << ',';
        if (r.rssi) out << *r.rssi;
        out << '\n';
    }
}

void write_clusters_csv(std::ostream& out, const ClusteringResult& r) {
    const auto members = r.members();
    for (std::size_t c = 0; c < r.exemplars.size(); ++c) {
        out << c << ',' << r.exemplars[c];
        for (const int m : members[c]) out << ',' << m;
        out << '\n';
    }
}

ClusteringResult read_clusters_csv(std::istream& in) {
    ClusteringResult r;
    std::string line;
    std::vector<std::pair<int, std::vector<int>>> clusters;
    int max_index = -1;
    while (next_line(in, line)) {
        const auto fields = split(line, ',');
        if (fields.size() < 3)
            throw InputError("cluster line needs cluster_id,exemplar,members...: " + line);
        const int exemplar = static_cast<int>(to_int(fields[1], "exemplar"));
        std::vector<int> members;
        for (std::size_t f = 2; f < fields.size(); ++f) {
            members.push_back(static_cast<int>(to_int(fields[f], "member")));
            max_index = std::max(max_index, members.back());
        }
        clusters.emplace_back(exemplar, std::move(members));
    }
    r.assignment.assign(static_cast<std::size_t>(max_index) + 1, -1);
    for (const auto& [exemplar, members] : clusters) {
        r.exemplars.push_back(exemplar);
        for (const int m : members) {
            if (r.assignment[m] != -1) throw InputError("clusters overlap on member");
            r.assignment[m] = exemplar;
        }
    }
    std::sort(r.exemplars.begin(), r.exemplars.end());
    for (std::size_t i = 0; i < r.assignment.size(); ++i)
        if (r.assignment[i] == -1)
            throw InputError("member " + std::to_string(i) + " missing from clusters file");
    return r;
}

nlohmann::json clustering_summary(const ClusteringResult& r) {
    return nlohmann::json{{"clusters", r.exemplars.size()},
                          {"net_sim", r.net_sim},
                          {"iterations", r.iterations},
                          {"converged", r.converged}};
}

nlohmann::json patterns_json(std::int32_t le, std::int32_t ri, std::int32_t lambda_s,
                             const std::vector<Pattern>& patterns) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& p : patterns) {
        arr.push_back({{"exemplar", p.exemplar},
                       {"support", p.support},
                       {"probabilities", p.probabilities()}});
    }
    return nlohmann::json{{"window", {{"le", le}, {"ri", ri}, {"lambda", lambda_s}}},
                          {"patterns", arr}};
}

std::vector<Pattern> patterns_from_json(const nlohmann::json& j) {
    std::vector<Pattern> out;
    const auto& window = j.at("window");
    const std::int32_t le = window.at("le").get<std::int32_t>();
    const std::int32_t ri = window.at("ri").get<std::int32_t>();
    for (const auto& pj : j.at("patterns")) {
        Pattern p;
        p.le = le;
        p.ri = ri;
        p.exemplar = pj.at("exemplar").get<int>();
        p.support = pj.at("support").get<int>();
        const auto probs = pj.at("probabilities").get<std::vector<double>>();
        p.bin_counts.reserve(probs.size());
        for (const double v : probs)
            p.bin_counts.push_back(static_cast<std::int64_t>(std::llround(v * p.support)));
        out.push_back(std::move(p));
    }
    return out;
}

void write_patterns_csv(std::ostream& out, const std::vector<Pattern>& patterns) {
    out.precision(std::numeric_limits<double>::max_digits10);
    for (std::size_t c = 0; c < patterns.size(); ++c) {
        const auto probs = patterns[c].probabilities();
        for (std::size_t b = 0; b < probs.size(); ++b)
            out << c << ',' << patterns[c].exemplar << ',' << patterns[c].support << ','
                << patterns[c].le + static_cast<std::int32_t>(b) << ',' << probs[b] << '\n';
    }
}

namespace {

void write_node_matrices(const SegmentTree::Node& node, int& next_id,
                         const std::filesystem::path& dir, std::ostream& index) {
    const int id = next_id++;
    const int left_id = node.left ? next_id : -1;
    // children are numbered depth-first, left subtree first
    std::ostringstream deferred;
    int right_id = -1;
    if (node.left) {
        std::ostringstream sub;
        int probe = next_id;
        // write left subtree, then note where the right subtree starts
        write_node_matrices(*node.left, probe, dir, sub);
        right_id = probe;
        write_node_matrices(*node.right, probe, dir, sub);
        next_id = probe;
        deferred << sub.str();
    }
    index << id << ',' << node.begin << ',' << node.end << ',' << left_id << ','
          << right_id << '\n';
    index << deferred.str();

    auto out = open_out(dir / ("node_" + std::to_string(id) + ".txt"));
    const auto& m = node.matrix;
    out << m.size() << ',' << m.w_units() << ',' << m.seg_begin() << ',' << m.seg_end()
        << '\n';
    out << "ones";
    for (int i = 0; i < m.size(); ++i) out << ',' << m.ones(i);
    out << '\n';
    std::vector<std::uint64_t> keys;
    keys.reserve(m.stored_count());
    for (const auto& [key, e] : m.stored()) keys.push_back(key);
    std::sort(keys.begin(), keys.end());
    for (const std::uint64_t key : keys) {
        const auto& e = m.stored().at(key);
        const int i = static_cast<int>(key / static_cast<std::uint64_t>(m.size()));
        const int j = static_cast<int>(key % static_cast<std::uint64_t>(m.size()));
        out << i << ',' << j << ',' << e.sum << ',' << e.cnt << '\n';
    }
}

DistanceMatrix read_node_matrix(const std::filesystem::path& file) {
    auto in = open_in(file);
    std::string line;
    if (!next_line(in, line)) throw InputError("empty matrix file " + file.string());
    auto header = split(line, ',');
    if (header.size() != 4) throw InputError("bad matrix header in " + file.string());
    const int n = static_cast<int>(to_int(header[0], "n"));
    DistanceMatrix m(n, static_cast<std::int32_t>(to_int(header[1], "w_units")),
                     static_cast<std::int32_t>(to_int(header[2], "begin")),
                     static_cast<std::int32_t>(to_int(header[3], "end")));
    if (!next_line(in, line) || !line.starts_with("ones"))
        throw InputError("missing ones row in " + file.string());
    const auto ones = split(line, ',');
    if (static_cast<int>(ones.size()) != n + 1)
        throw InputError("bad ones row in " + file.string());
    for (int i = 0; i < n; ++i) m.set_ones(i, to_int(ones[i + 1], "ones"));
    while (next_line(in, line)) {
        const auto f = split(line, ',');
        if (f.size() != 4) throw InputError("bad matrix entry in " + file.string());
        m.set(static_cast<int>(to_int(f[0], "i")), static_cast<int>(to_int(f[1], "j")),
              DistanceMatrix::Entry{to_int(f[2], "sum"), to_int(f[3], "cnt")});
    }
    return m;
}

}  // namespace

void save_tree(const SegmentTree& tree, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    {
        auto meta = open_out(dir / "meta.json");
        meta << nlohmann::json{{"n", tree.sequence_count()},
                               {"length", tree.length()},
                               {"w_units", tree.w_units()},
                               {"lambda", tree.lambda_s()}}
                    .dump(2)
             << '\n';
    }
    {
        auto bis = open_out(dir / "bis.csv");
        write_bis(bis, tree.sequences());
    }
    auto index = open_out(dir / "nodes.txt");
    int next_id = 0;
    write_node_matrices(tree.root(), next_id, dir, index);
}

SegmentTree load_tree(const std::filesystem::path& dir) {
    nlohmann::json meta;
    {
        auto in = open_in(dir / "meta.json");
        in >> meta;
    }
    std::vector<Bis> rows;
    {
        auto in = open_in(dir / "bis.csv");
        rows = read_bis(in);
    }
    const auto w_units = meta.at("w_units").get<std::int32_t>();

    struct RawNode {
        std::int32_t begin, end;
        int left, right;
    };
    std::map<int, RawNode> raw;
    {
        auto in = open_in(dir / "nodes.txt");
        std::string line;
        while (next_line(in, line)) {
            const auto f = split(line, ',');
            if (f.size() != 5) throw InputError("bad node index line: " + line);
            raw[static_cast<int>(to_int(f[0], "node id"))] =
                RawNode{static_cast<std::int32_t>(to_int(f[1], "begin")),
                        static_cast<std::int32_t>(to_int(f[2], "end")),
                        static_cast<int>(to_int(f[3], "left child")),
                        static_cast<int>(to_int(f[4], "right child"))};
        }
    }
    if (raw.empty()) throw InputError("tree directory has no nodes");

    std::function<std::unique_ptr<SegmentTree::Node>(int)> build = [&](int id) {
        const auto it = raw.find(id);
        if (it == raw.end()) throw InputError("missing node " + std::to_string(id));
        auto node = std::make_unique<SegmentTree::Node>();
        node->begin = it->second.begin;
        node->end = it->second.end;
        node->matrix = read_node_matrix(dir / ("node_" + std::to_string(id) + ".txt"));
        if (it->second.left >= 0) {
            node->left = build(it->second.left);
            node->right = build(it->second.right);
        }
        return node;
    };
    return SegmentTree::from_parts(std::move(rows), w_units, build(0));
}

}  // namespace mtpattern
