// Command-line pipeline: ingest -> preprocess -> tree -> discover -> eval,
// plus synth and sweep. Stages hand off through files; every command drops
// a <out>.run.json sidecar with the resolved configuration and input
// digests so a run can be reproduced byte for byte.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "CLI11.hpp"
#include "mtpattern/evalkit.hpp"
#include "mtpattern/io.hpp"
#include "mtpattern/patterns.hpp"
#include "mtpattern/synth.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace mtpattern;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitNonConvergence = 3;
constexpr int kExitInternal = 4;

class NonConvergence : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Flat key=value config file; '#' starts a comment. Flags beat file values,
// file values beat defaults.
std::map<std::string, std::string> load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot read config file " + path);
    std::map<std::string, std::string> kv;
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        auto trim = [](std::string s) {
            const auto a = s.find_first_not_of(" \t\r");
            if (a == std::string::npos) return std::string();
            const auto b = s.find_last_not_of(" \t\r");
            return s.substr(a, b - a + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (!key.empty()) kv[key] = value;
    }
    return kv;
}

// Applies file values to options the user left untouched.
struct ConfigBinding {
    CLI::App* app;
    std::string config_path;
    std::vector<std::function<void(const std::map<std::string, std::string>&)>> appliers;

    void bind(CLI::Option* opt, const std::string& key, std::function<void(const std::string&)> set) {
        appliers.push_back([opt, key, set = std::move(set)](const auto& kv) {
            if (opt->count() > 0) return;
            const auto it = kv.find(key);
            if (it != kv.end()) set(it->second);
        });
    }

    void apply() {
        if (config_path.empty()) return;
        const auto kv = load_config_file(config_path);
        for (const auto& f : appliers) f(kv);
    }
};

template <typename T>
T parse_value(const std::string& s, const std::string& key) {
    std::istringstream in(s);
    T v;
    in >> v;
    if (in.fail()) throw InputError("bad config value for " + key + ": '" + s + "'");
    return v;
}

json config_json(const std::map<std::string, json>& resolved) {
    json j = json::object();
    for (const auto& [k, v] : resolved) j[k] = v;
    return j;
}

std::string digest_of(const std::string& path) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "fnv64:%016llx",
                  static_cast<unsigned long long>(fnv1a64_file(path)));
    return buf;
}

void write_run_sidecar(const std::string& command, const std::string& out_path,
                       const std::map<std::string, json>& resolved_config,
                       const std::vector<std::string>& inputs,
                       const std::vector<std::string>& outputs) {
    json run;
    run["command"] = command;
    run["config"] = config_json(resolved_config);
    json in = json::object();
    for (const auto& p : inputs) in[p] = digest_of(p);
    run["inputs"] = in;
    run["outputs"] = outputs;
    std::ofstream out(out_path + ".run.json");
    if (!out) throw InputError("cannot write sidecar next to " + out_path);
    out << run.dump(2) << '\n';
}

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot read " + path);
    return in;
}

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write " + path);
    return out;
}

std::vector<Bis> load_bis_file(const std::string& path) {
    auto in = open_input(path);
    auto rows = read_bis(in);
    return rows;
}

PreferenceMode mode_of(const std::string& name) {
    if (name == "minimizing") return PreferenceMode::kMinimizing;
    if (name == "median") return PreferenceMode::kMedian;
    throw InputError("preference mode must be minimizing or median, got '" + name + "'");
}

struct WindowSpec {
    std::int32_t le, ri;
};

WindowSpec parse_window(const std::string& text) {
    const auto colon = text.find(':');
    if (colon == std::string::npos)
        throw InputError("window must be le:ri in unit intervals, got '" + text + "'");
    WindowSpec w;
    w.le = parse_value<std::int32_t>(text.substr(0, colon), "window");
    w.ri = parse_value<std::int32_t>(text.substr(colon + 1), "window");
    return w;
}

// ---- per-command state ----

struct CommonOpts {
    std::string config_path;
    int jobs = 0;
    bool error_json = false;
};

struct IngestCmd {
    std::string input, out;
    std::string col_subject = "subject";
    std::string col_timestamp = "timestamp";
    std::string col_rssi, col_device;
    std::string delimiter;
    int utc_offset = 0;
    double quantile = 0.95;
    std::string per_subject_delta;
};

struct PreprocessCmd {
    std::string input, out;
    std::int64_t delta = 900;
    std::int32_t lambda = 0;  // 0: delta / 2
};

struct TreeCmd {
    std::string input, out;
    std::int64_t omega = 1800;
};

struct DiscoverCmd {
    std::string tree_dir, out;
    std::vector<std::string> windows;
    int alpha = 3;
    std::string mode = "minimizing";
    double damping = 0.9;
    int max_iter = 1000;
    int stable_iters = 50;
    std::string grouping = "pooled";
    std::string clusters_out, summary_out, matrix_out, csv_out;
    bool strict_convergence = false;
    bool minutes = false;
};

struct SynthCmd {
    std::string out, labels_out, modes_file, emit_raw;
    int n = 1000;
    double false_neg = 0.2;
    std::int32_t lambda = 450;
    std::int32_t length = 192;
    std::uint64_t seed = 1;
};

struct EvalCmd {
    std::string bis, clusters, patterns, labels, out;
    double beta = 2.0;
    bool normalize = true;
    bool with_baselines = false;
    std::uint64_t seed = 1;
};

struct SweepCmd {
    std::string bis, labels, out;
    std::string omegas = "900,1800,2700,3600";
    std::string modes = "both";
    int alpha = 3;
    double damping = 0.9;
    int max_iter = 1000;
    int stable_iters = 50;
};

// ---- command implementations ----

int run_ingest(const CommonOpts& common, const IngestCmd& cmd) {
    TraceSchema schema;
    schema.subject_col = cmd.col_subject;
    schema.timestamp_col = cmd.col_timestamp;
    if (!cmd.col_rssi.empty()) schema.rssi_col = cmd.col_rssi;
    if (!cmd.col_device.empty()) schema.device_col = cmd.col_device;
    if (cmd.delimiter == "tab")
        schema.delimiter = '\t';
    else if (cmd.delimiter == "comma")
        schema.delimiter = ',';
    else if (!cmd.delimiter.empty())
        throw InputError("delimiter must be comma or tab");

    auto in = open_input(cmd.input);
    ParseStats stats;
    const auto records = parse_trace(in, schema, &stats);
    SequenceStats seq_stats;
    const auto sequences = build_point_sequences(records, cmd.utc_offset, &seq_stats);

    std::vector<PointSequence> ordered;
    ordered.reserve(sequences.size());
    for (const auto& [key, ps] : sequences) ordered.push_back(ps);
    {
        auto out = open_output(cmd.out);
        write_point_sequences(out, ordered);
    }

    const auto hist = gap_histogram(sequences);
    std::optional<std::int64_t> delta;
    if (!hist.gaps.empty()) delta = estimate_delta(hist, cmd.quantile);

    if (!cmd.per_subject_delta.empty()) {
        std::set<std::string> subjects;
        for (const auto& [key, ps] : sequences) subjects.insert(key.first);
        auto out = open_output(cmd.per_subject_delta);
        out << "subject,delta_s\n";
        for (const auto& s : subjects) {
            const auto h = gap_histogram_for_subject(sequences, s);
            out << s << ',';
            if (!h.gaps.empty()) out << estimate_delta(h, cmd.quantile);
            out << '\n';
        }
    }

    std::map<std::string, json> resolved = {
        {"col.subject", cmd.col_subject},
        {"col.timestamp", cmd.col_timestamp},
        {"col.rssi", cmd.col_rssi},
        {"col.device", cmd.col_device},
        {"utc_offset", cmd.utc_offset},
        {"delta_quantile", cmd.quantile},
        {"jobs", common.jobs},
    };
    if (delta) resolved["estimated_delta_s"] = *delta;
    std::vector<std::string> outputs = {cmd.out};
    if (!cmd.per_subject_delta.empty()) outputs.push_back(cmd.per_subject_delta);
    write_run_sidecar("ingest", cmd.out, resolved, {cmd.input}, outputs);

    std::cout << "rows=" << stats.rows << " skipped=" << stats.skipped
              << " duplicates=" << seq_stats.duplicates << " sequences=" << ordered.size();
    if (delta) std::cout << " estimated_delta_s=" << *delta;
    std::cout << '\n';
    return kExitOk;
}

int run_preprocess(const CommonOpts& common, const PreprocessCmd& cmd) {
    if (cmd.delta <= 0) throw InputError("delta must be positive");
    const std::int32_t lambda =
        cmd.lambda > 0 ? cmd.lambda : static_cast<std::int32_t>(cmd.delta / 2);
    if (lambda <= 0) throw InputError("lambda must be positive");

    auto in = open_input(cmd.input);
    const auto sequences = read_point_sequences(in);
    std::vector<Bis> rows;
    rows.reserve(sequences.size());
    for (const auto& ps : sequences) rows.push_back(discretize(sessionize(ps, cmd.delta), lambda));
    {
        auto out = open_output(cmd.out);
        write_bis(out, rows);
    }
    write_run_sidecar("preprocess", cmd.out,
                      {{"delta", cmd.delta}, {"lambda", lambda}, {"jobs", common.jobs}},
                      {cmd.input}, {cmd.out});
    std::cout << "sequences=" << rows.size() << " lambda=" << lambda
              << " length=" << (rows.empty() ? bis_length(lambda) : static_cast<int>(rows[0].bits.size()))
              << '\n';
    return kExitOk;
}

int run_tree(const CommonOpts& common, const TreeCmd& cmd) {
    const auto rows = load_bis_file(cmd.input);
    if (rows.empty()) throw InputError("BIS file is empty; nothing to index");
    const std::int32_t lambda = rows[0].lambda_s;
    if (cmd.omega <= 0 || cmd.omega % lambda != 0)
        throw InputError("omega must be a positive multiple of lambda (" +
                         std::to_string(lambda) + " s)");
    const auto w_units = static_cast<std::int32_t>(cmd.omega / lambda);
    SegmentTree tree(rows, w_units, common.jobs);
    save_tree(tree, cmd.out);
    write_run_sidecar("tree", (fs::path(cmd.out) / "tree").string(),
                      {{"omega", cmd.omega}, {"w_units", w_units}, {"jobs", common.jobs}},
                      {cmd.input}, {cmd.out});
    std::cout << "sequences=" << tree.sequence_count() << " length=" << tree.length()
              << " w_units=" << w_units << " leaves=" << tree.leaf_count()
              << " nodes=" << tree.node_count() << '\n';
    return kExitOk;
}

json group_discovery(const SegmentTree& tree, const std::vector<int>& rows_in_group,
                     const WindowSpec& window, const DiscoverCmd& cmd,
                     ClusteringResult* clustering_out, DistanceMatrix* matrix_out) {
    const std::int32_t le = tree.snap_left(window.le);
    const std::int32_t ri = tree.snap_right(window.ri);
    DistanceMatrix matrix = tree.window_matrix(le, ri);
    if (rows_in_group.size() != static_cast<std::size_t>(tree.sequence_count()))
        matrix = submatrix(matrix, rows_in_group);

    SimilarityGraph graph = similarity_from_matrix(matrix);
    graph.preference = mode_of(cmd.mode) == PreferenceMode::kMinimizing
                           ? minimizing_preference(graph)
                           : median_preference(graph);
    ApOptions ap;
    ap.damping = cmd.damping;
    ap.max_iter = cmd.max_iter;
    ap.stable_iters = cmd.stable_iters;
    ClusteringResult clustering = cluster(graph, ap);

    std::vector<SegmentView> segments;
    segments.reserve(rows_in_group.size());
    for (const int r : rows_in_group) segments.emplace_back(tree.sequences()[r], le, ri);
    const auto patterns = extract_patterns(clustering, segments);

    json j = patterns_json(le, ri, tree.lambda_s(), patterns);
    j["summary"] = clustering_summary(clustering);
    if (cmd.minutes) {
        // convenience view of the window in minutes
        j["window"]["minutes"] = {{"le", le * tree.lambda_s() / 60.0},
                                  {"ri", ri * tree.lambda_s() / 60.0}};
    }
    if (clustering_out) *clustering_out = std::move(clustering);
    if (matrix_out) *matrix_out = std::move(matrix);
    return j;
}

int run_discover(const CommonOpts& common, const DiscoverCmd& cmd) {
    const SegmentTree tree = load_tree(cmd.tree_dir);
    std::vector<WindowSpec> windows;
    for (const auto& w : cmd.windows) windows.push_back(parse_window(w));
    if (windows.empty()) windows.push_back({0, tree.length()});

    // groups: pooled = all rows; per_subject = rows sharing a subject id
    std::vector<std::pair<std::string, std::vector<int>>> groups;
    if (cmd.grouping == "pooled") {
        std::vector<int> all(tree.sequence_count());
        for (int i = 0; i < tree.sequence_count(); ++i) all[i] = i;
        groups.emplace_back("", std::move(all));
    } else if (cmd.grouping == "per_subject") {
        std::map<std::string, std::vector<int>> by_subject;
        for (int i = 0; i < tree.sequence_count(); ++i)
            by_subject[tree.sequences()[i].subject_id].push_back(i);
        for (auto& [subject, rows] : by_subject) groups.emplace_back(subject, std::move(rows));
    } else {
        throw InputError("grouping must be pooled or per_subject");
    }

    json results = json::array();
    bool any_unconverged = false;
    std::optional<ClusteringResult> first_clustering;
    std::optional<DistanceMatrix> first_matrix;
    std::optional<std::vector<int>> first_rows;

    for (const auto& [subject, rows] : groups) {
        for (const auto& window : windows) {
            ClusteringResult clustering;
            DistanceMatrix matrix;
            json j = group_discovery(tree, rows, window, cmd, &clustering, &matrix);
            if (!subject.empty()) j["subject"] = subject;
            if (!clustering.converged) any_unconverged = true;
            if (!first_clustering) {
                first_clustering = clustering;
                first_matrix = std::move(matrix);
                first_rows = rows;
            }
            results.push_back(std::move(j));
        }
    }

    {
        auto out = open_output(cmd.out);
        if (results.size() == 1)
            out << results[0].dump(2) << '\n';
        else
            out << results.dump(2) << '\n';
    }
    if (!cmd.clusters_out.empty()) {
        // indices are global row numbers even under per-subject grouping
        ClusteringResult global = *first_clustering;
        const auto& rows = *first_rows;
        ClusteringResult remapped;
        remapped.net_sim = global.net_sim;
        remapped.iterations = global.iterations;
        remapped.converged = global.converged;
        remapped.assignment.assign(tree.sequence_count(), -1);
        for (const int e : global.exemplars) remapped.exemplars.push_back(rows[e]);
        std::vector<int> dense;
        for (std::size_t i = 0; i < global.assignment.size(); ++i)
            dense.push_back(rows[global.assignment[i]]);
        // rows not in the first group are absent; exporting clusters is
        // only offered for the first (window, group) result
        ClusteringResult exportable;
        exportable.exemplars = remapped.exemplars;
        exportable.assignment = dense;
        auto out = open_output(cmd.clusters_out);
        write_clusters_csv(out, exportable);
    }
    if (!cmd.summary_out.empty()) {
        auto out = open_output(cmd.summary_out);
        out << clustering_summary(*first_clustering).dump(2) << '\n';
    }
    if (!cmd.matrix_out.empty()) {
        auto out = open_output(cmd.matrix_out);
        write_matrix(out, *first_matrix, tree.lambda_s());
    }
    if (!cmd.csv_out.empty()) {
        auto out = open_output(cmd.csv_out);
        for (const auto& r : results) {
            const auto patterns = patterns_from_json(r);
            write_patterns_csv(out, patterns);
        }
    }

    std::map<std::string, json> resolved = {
        {"alpha", cmd.alpha},          {"mode", cmd.mode},
        {"damping", cmd.damping},      {"max_iter", cmd.max_iter},
        {"stable_iters", cmd.stable_iters}, {"grouping", cmd.grouping},
        {"jobs", common.jobs},
    };
    {
        json ws = json::array();
        for (const auto& w : windows) ws.push_back({{"le", w.le}, {"ri", w.ri}});
        resolved["windows"] = ws;
    }
    std::vector<std::string> outputs = {cmd.out};
    for (const auto& extra : {cmd.clusters_out, cmd.summary_out, cmd.matrix_out, cmd.csv_out})
        if (!extra.empty()) outputs.push_back(extra);
    write_run_sidecar("discover", cmd.out, resolved,
                      {(fs::path(cmd.tree_dir) / "meta.json").string(),
                       (fs::path(cmd.tree_dir) / "bis.csv").string()},
                      outputs);

    std::cout << "windows=" << windows.size() << " groups=" << groups.size()
              << " results=" << results.size() << '\n';
    if (any_unconverged) {
        if (cmd.strict_convergence)
            throw NonConvergence("affinity propagation did not converge for every window");
        std::cerr << "warning: at least one clustering did not converge\n";
    }
    return kExitOk;
}

std::vector<ModeSpec> load_modes_file(const std::string& path) {
    auto in = open_input(path);
    std::vector<ModeSpec> modes;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        const auto fields = split(line, ',');
        if (fields.size() != 4)
            throw InputError("mode line needs mean_start,mean_end,sigma_units,weight: " + line);
        ModeSpec m;
        m.mean_start = parse_value<std::int32_t>(std::string(fields[0]), "mean_start");
        m.mean_end = parse_value<std::int32_t>(std::string(fields[1]), "mean_end");
        m.sigma_units = parse_value<double>(std::string(fields[2]), "sigma_units");
        m.weight = parse_value<double>(std::string(fields[3]), "weight");
        modes.push_back(m);
    }
    return modes;
}

int run_synth(const CommonOpts& common, const SynthCmd& cmd) {
    SynthParams params;
    params.modes = cmd.modes_file.empty() ? default_modes() : load_modes_file(cmd.modes_file);
    params.n = cmd.n;
    params.false_neg_p = cmd.false_neg;
    params.lambda_s = cmd.lambda;
    params.length = cmd.length;
    params.seed = cmd.seed;
    const auto ds = generate(params);

    std::vector<std::string> outputs;
    std::string primary;
    if (!cmd.emit_raw.empty()) {
        // inverse of preprocessing: one detection at the centre of every 1-bin
        std::vector<SensorRecord> records;
        for (std::size_t i = 0; i < ds.sequences.size(); ++i) {
            const auto& b = ds.sequences[i];
            for (std::size_t j = 0; j < b.bits.size(); ++j) {
                if (!b.bits[j]) continue;
                SensorRecord r;
                r.device_id = "synth";
                r.subject_id = b.subject_id;
                r.timestamp = b.day * kSecondsPerDay +
                              static_cast<std::int64_t>(j) * params.lambda_s +
                              params.lambda_s / 2;
                records.push_back(std::move(r));
            }
        }
        auto out = open_output(cmd.emit_raw);
        write_sensor_records(out, records);
        outputs.push_back(cmd.emit_raw);
        primary = cmd.emit_raw;
    } else {
        if (cmd.out.empty()) throw InputError("synth needs --out (or --emit-raw)");
        auto out = open_output(cmd.out);
        write_bis(out, ds.sequences);
        outputs.push_back(cmd.out);
        primary = cmd.out;
    }
    if (!cmd.labels_out.empty()) {
        auto out = open_output(cmd.labels_out);
        write_labels(out, ds.labels);
        outputs.push_back(cmd.labels_out);
    }

    json modes = json::array();
    for (const auto& m : params.modes)
        modes.push_back({{"mean_start", m.mean_start},
                         {"mean_end", m.mean_end},
                         {"sigma_units", m.sigma_units},
                         {"weight", m.weight}});
    write_run_sidecar("synth", primary,
                      {{"n", cmd.n},
                       {"false_neg", cmd.false_neg},
                       {"lambda", cmd.lambda},
                       {"length", cmd.length},
                       {"seed", cmd.seed},
                       {"modes", modes},
                       {"jobs", common.jobs}},
                      {}, outputs);
    std::cout << "sequences=" << ds.sequences.size() << " modes=" << params.modes.size()
              << " seed=" << cmd.seed << '\n';
    return kExitOk;
}

int run_eval(const CommonOpts& common, const EvalCmd& cmd) {
    const auto rows = load_bis_file(cmd.bis);
    auto labels_in = open_input(cmd.labels);
    const auto truth = read_labels(labels_in);
    if (truth.size() != rows.size())
        throw InputError("labels and BIS files disagree on the sequence count");

    auto clusters_in = open_input(cmd.clusters);
    const auto clustering = read_clusters_csv(clusters_in);
    if (clustering.assignment.size() != rows.size())
        throw InputError("clusters file does not cover every sequence");

    LabeledClustering lc{clustering.assignment, truth};
    json report;
    report["beta"] = cmd.beta;
    report["purity"] = purity(lc);
    report["rand_index"] = rand_index(lc);
    report["f_measure"] = f_measure(lc, cmd.beta);

    std::vector<std::string> inputs = {cmd.bis, cmd.clusters, cmd.labels};
    if (!cmd.patterns.empty()) {
        auto pin = open_input(cmd.patterns);
        json pj;
        pin >> pj;
        const json first = pj.is_array() ? pj.at(0) : pj;
        const auto patterns = patterns_from_json(first);
        const std::int32_t le = first.at("window").at("le").get<std::int32_t>();
        const std::int32_t ri = first.at("window").at("ri").get<std::int32_t>();
        std::map<int, int> pattern_of_exemplar;
        for (std::size_t c = 0; c < patterns.size(); ++c)
            pattern_of_exemplar[patterns[c].exemplar] = static_cast<int>(c);
        std::vector<SegmentView> segs;
        std::vector<int> assign;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            segs.emplace_back(rows[i], le, ri);
            const auto it = pattern_of_exemplar.find(clustering.assignment[i]);
            if (it == pattern_of_exemplar.end())
                throw InputError("clusters file references an exemplar missing from patterns");
            assign.push_back(it->second);
        }
        report["accuracy_score"] = accuracy_score(segs, assign, patterns, cmd.normalize);
        report["normalize"] = cmd.normalize;
        inputs.push_back(cmd.patterns);
    }

    json per_method = json::object();
    per_method["mtpattern"] = {{"purity", report["purity"]},
                               {"rand_index", report["rand_index"]},
                               {"f_measure", report["f_measure"]},
                               {"clusters", clustering.exemplars.size()}};
    if (cmd.with_baselines) {
        std::set<int> classes(truth.begin(), truth.end());
        const int k = static_cast<int>(classes.size());
        const auto km = kmeans_baseline(rows, k, cmd.seed);
        const auto hc = hc_baseline(rows, k);
        per_method["kmeans"] = {{"purity", purity({km, truth})},
                                {"rand_index", rand_index({km, truth})},
                                {"f_measure", f_measure({km, truth}, cmd.beta)},
                                {"clusters", k}};
        per_method["hc"] = {{"purity", purity({hc, truth})},
                            {"rand_index", rand_index({hc, truth})},
                            {"f_measure", f_measure({hc, truth}, cmd.beta)},
                            {"clusters", k}};
    }
    report["per_method"] = per_method;

    {
        auto out = open_output(cmd.out);
        out << report.dump(2) << '\n';
    }
    write_run_sidecar("eval", cmd.out,
                      {{"beta", cmd.beta},
                       {"normalize", cmd.normalize},
                       {"with_baselines", cmd.with_baselines},
                       {"seed", cmd.seed},
                       {"jobs", common.jobs}},
                      inputs, {cmd.out});
    std::cout << "purity=" << report["purity"] << " rand_index=" << report["rand_index"]
              << " f_measure=" << report["f_measure"] << '\n';
    return kExitOk;
}

int run_sweep(const CommonOpts& common, const SweepCmd& cmd) {
    const auto rows = load_bis_file(cmd.bis);
    if (rows.empty()) throw InputError("BIS file is empty");
    std::vector<int> truth;
    if (!cmd.labels.empty()) {
        auto in = open_input(cmd.labels);
        truth = read_labels(in);
        if (truth.size() != rows.size())
            throw InputError("labels and BIS files disagree on the sequence count");
    }

    std::vector<std::int64_t> omegas;
    for (const auto part : split(cmd.omegas, ','))
        omegas.push_back(parse_value<std::int64_t>(std::string(part), "omegas"));
    std::vector<std::string> modes;
    if (cmd.modes == "both")
        modes = {"minimizing", "median"};
    else
        modes = {cmd.modes};

    const std::int32_t lambda = rows[0].lambda_s;
    auto out = open_output(cmd.out);
    out << "omega_s,mode,clusters,net_sim,converged,purity,rand_index,f_measure,accuracy_score\n";
    out.precision(10);

    for (const std::int64_t omega : omegas) {
        if (omega <= 0 || omega % lambda != 0)
            throw InputError("omega " + std::to_string(omega) +
                             " is not a multiple of lambda " + std::to_string(lambda));
        const auto w_units = static_cast<std::int32_t>(omega / lambda);
        SegmentTree tree(rows, w_units, common.jobs);
        for (const auto& mode : modes) {
            DiscoverOptions opts;
            opts.alpha = cmd.alpha;
            opts.mode = mode_of(mode);
            opts.ap.damping = cmd.damping;
            opts.ap.max_iter = cmd.max_iter;
            opts.ap.stable_iters = cmd.stable_iters;
            const auto outcome = discover(tree, 0, tree.length(), opts);

            out << omega << ',' << mode << ',' << outcome.clustering.cluster_count() << ','
                << outcome.clustering.net_sim << ','
                << (outcome.clustering.converged ? 1 : 0) << ',';
            if (!truth.empty()) {
                LabeledClustering lc{outcome.clustering.assignment, truth};
                out << purity(lc) << ',' << rand_index(lc) << ',' << f_measure(lc) << ',';
            } else {
                out << ",,,";
            }
            // accuracy score against the discovered patterns
            std::map<int, int> pattern_of_exemplar;
            for (std::size_t c = 0; c < outcome.patterns.size(); ++c)
                pattern_of_exemplar[outcome.patterns[c].exemplar] = static_cast<int>(c);
            std::vector<SegmentView> segs;
            std::vector<int> assign;
            for (std::size_t i = 0; i < rows.size(); ++i) {
                segs.emplace_back(rows[i], outcome.le, outcome.ri);
                assign.push_back(pattern_of_exemplar.at(outcome.clustering.assignment[i]));
            }
            out << accuracy_score(segs, assign, outcome.patterns, true) << '\n';
        }
    }
    out.close();

    write_run_sidecar("sweep", cmd.out,
                      {{"omegas", cmd.omegas},
                       {"modes", cmd.modes},
                       {"alpha", cmd.alpha},
                       {"damping", cmd.damping},
                       {"max_iter", cmd.max_iter},
                       {"stable_iters", cmd.stable_iters},
                       {"jobs", common.jobs}},
                      cmd.labels.empty() ? std::vector<std::string>{cmd.bis}
                                         : std::vector<std::string>{cmd.bis, cmd.labels},
                      {cmd.out});
    std::cout << "omegas=" << omegas.size() << " modes=" << modes.size() << '\n';
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Frequent visiting-behavior pattern mining over presence traces"};
    app.require_subcommand(1);
    app.fallthrough();

    CommonOpts common;
    ConfigBinding binding;
    app.add_option("--config", common.config_path, "flat key=value config file");
    auto* jobs_opt = app.add_option("--jobs", common.jobs, "worker cap (0 = all cores)");
    app.add_flag("--error-json", common.error_json, "emit machine-readable errors");

    IngestCmd ingest;
    auto* ingest_app = app.add_subcommand("ingest", "parse raw traces into point sequences");
    ingest_app->add_option("--input", ingest.input, "raw trace file")->required();
    ingest_app->add_option("--out", ingest.out, "point-sequence file")->required();
    auto* o_subj = ingest_app->add_option("--col-subject", ingest.col_subject, "subject column");
    auto* o_ts = ingest_app->add_option("--col-timestamp", ingest.col_timestamp, "timestamp column");
    auto* o_rssi = ingest_app->add_option("--col-rssi", ingest.col_rssi, "rssi column");
    auto* o_dev = ingest_app->add_option("--col-device", ingest.col_device, "device column");
    ingest_app->add_option("--delimiter", ingest.delimiter, "comma|tab (default: autodetect)");
    auto* o_utc = ingest_app->add_option("--utc-offset", ingest.utc_offset, "seconds east of UTC");
    auto* o_q = ingest_app->add_option("--delta-quantile", ingest.quantile, "gap quantile for delta");
    ingest_app->add_option("--per-subject-delta", ingest.per_subject_delta,
                           "also write per-subject delta estimates");

    PreprocessCmd preprocess;
    auto* pre_app = app.add_subcommand("preprocess", "sessionize and discretize into BIS");
    pre_app->add_option("--input", preprocess.input, "point-sequence file")->required();
    pre_app->add_option("--out", preprocess.out, "BIS file")->required();
    auto* o_delta = pre_app->add_option("--delta", preprocess.delta, "session gap, seconds");
    auto* o_lambda = pre_app->add_option("--lambda", preprocess.lambda,
                                         "unit width, seconds (default delta/2)");

    TreeCmd treecmd;
    auto* tree_app = app.add_subcommand("tree", "build the segment tree index");
    tree_app->add_option("--input", treecmd.input, "BIS file")->required();
    tree_app->add_option("--out", treecmd.out, "tree directory")->required();
    auto* o_omega = tree_app->add_option("--omega", treecmd.omega, "window bound, seconds");

    DiscoverCmd discovercmd;
    auto* disc_app = app.add_subcommand("discover", "cluster a window and emit patterns");
    disc_app->add_option("--tree", discovercmd.tree_dir, "tree directory")->required();
    disc_app->add_option("--out", discovercmd.out, "patterns JSON")->required();
    disc_app->add_option("--window", discovercmd.windows, "le:ri unit intervals (repeatable)");
    auto* o_alpha = disc_app->add_option("--alpha", discovercmd.alpha, "minimum covering size");
    auto* o_mode = disc_app->add_option("--mode", discovercmd.mode, "minimizing|median");
    auto* o_damp = disc_app->add_option("--damping", discovercmd.damping, "message damping");
    auto* o_maxit = disc_app->add_option("--max-iter", discovercmd.max_iter, "iteration cap");
    auto* o_stable = disc_app->add_option("--stable-iters", discovercmd.stable_iters,
                                          "stability horizon");
    auto* o_group = disc_app->add_option("--grouping", discovercmd.grouping,
                                         "pooled|per_subject");
    disc_app->add_option("--clusters-out", discovercmd.clusters_out, "cluster CSV");
    disc_app->add_option("--summary-out", discovercmd.summary_out, "clustering summary JSON");
    disc_app->add_option("--matrix-out", discovercmd.matrix_out, "window matrix triplets");
    disc_app->add_option("--csv-out", discovercmd.csv_out, "patterns as CSV");
    disc_app->add_flag("--strict-convergence", discovercmd.strict_convergence,
                       "non-convergence exits with status 3");
    disc_app->add_flag("--minutes", discovercmd.minutes, "add minute-based window info");

    SynthCmd synthcmd;
    auto* synth_app = app.add_subcommand("synth", "generate a planted dataset");
    synth_app->add_option("--out", synthcmd.out, "BIS file");
    synth_app->add_option("--labels-out", synthcmd.labels_out, "ground-truth labels");
    synth_app->add_option("--modes", synthcmd.modes_file, "modes CSV (default: built-in)");
    synth_app->add_option("--emit-raw", synthcmd.emit_raw,
                          "emit a raw SensorRecord CSV instead of BIS");
    auto* o_n = synth_app->add_option("--n", synthcmd.n, "sequence count");
    auto* o_fn = synth_app->add_option("--false-neg", synthcmd.false_neg, "per-bit miss rate");
    auto* o_slam = synth_app->add_option("--lambda", synthcmd.lambda, "unit width, seconds");
    auto* o_len = synth_app->add_option("--length", synthcmd.length, "BIS length, units");
    auto* o_seed = synth_app->add_option("--seed", synthcmd.seed, "generator seed");

    EvalCmd evalcmd;
    auto* eval_app = app.add_subcommand("eval", "score a clustering against labels");
    eval_app->add_option("--bis", evalcmd.bis, "BIS file")->required();
    eval_app->add_option("--clusters", evalcmd.clusters, "clusters CSV")->required();
    eval_app->add_option("--labels", evalcmd.labels, "labels file")->required();
    eval_app->add_option("--patterns", evalcmd.patterns, "patterns JSON (for accuracy score)");
    eval_app->add_option("--out", evalcmd.out, "report JSON")->required();
    auto* o_beta = eval_app->add_option("--beta", evalcmd.beta, "f-measure beta");
    eval_app->add_flag("--normalize,!--no-normalize", evalcmd.normalize,
                       "unit-normalize patterns for the accuracy score");
    eval_app->add_flag("--with-baselines", evalcmd.with_baselines,
                       "also score k-means and HC at k = class count");
    eval_app->add_option("--seed", evalcmd.seed, "baseline seed");

    SweepCmd sweepcmd;
    auto* sweep_app = app.add_subcommand("sweep", "cluster counts and metrics across omegas");
    sweep_app->add_option("--bis", sweepcmd.bis, "BIS file")->required();
    sweep_app->add_option("--labels", sweepcmd.labels, "labels file (optional)");
    sweep_app->add_option("--out", sweepcmd.out, "sweep CSV")->required();
    auto* o_omegas = sweep_app->add_option("--omegas", sweepcmd.omegas, "comma list, seconds");
    auto* o_modes = sweep_app->add_option("--modes", sweepcmd.modes,
                                          "both|minimizing|median");
    auto* o_salpha = sweep_app->add_option("--alpha", sweepcmd.alpha, "minimum covering size");
    auto* o_sdamp = sweep_app->add_option("--damping", sweepcmd.damping, "message damping");
    auto* o_smaxit = sweep_app->add_option("--max-iter", sweepcmd.max_iter, "iteration cap");
    auto* o_sstable = sweep_app->add_option("--stable-iters", sweepcmd.stable_iters,
                                            "stability horizon");

    // config-file fallbacks for everything with a natural shared key
    binding.bind(jobs_opt, "jobs", [&](const std::string& v) {
        common.jobs = parse_value<int>(v, "jobs");
    });
    binding.bind(o_subj, "col.subject", [&](const std::string& v) { ingest.col_subject = v; });
    binding.bind(o_ts, "col.timestamp", [&](const std::string& v) { ingest.col_timestamp = v; });
    binding.bind(o_rssi, "col.rssi", [&](const std::string& v) { ingest.col_rssi = v; });
    binding.bind(o_dev, "col.device", [&](const std::string& v) { ingest.col_device = v; });
    binding.bind(o_utc, "utc_offset", [&](const std::string& v) {
        ingest.utc_offset = parse_value<int>(v, "utc_offset");
    });
    binding.bind(o_q, "delta_quantile", [&](const std::string& v) {
        ingest.quantile = parse_value<double>(v, "delta_quantile");
    });
    binding.bind(o_delta, "delta", [&](const std::string& v) {
        preprocess.delta = parse_value<std::int64_t>(v, "delta");
    });
    binding.bind(o_lambda, "lambda", [&](const std::string& v) {
        preprocess.lambda = parse_value<std::int32_t>(v, "lambda");
    });
    binding.bind(o_omega, "omega", [&](const std::string& v) {
        treecmd.omega = parse_value<std::int64_t>(v, "omega");
    });
    binding.bind(o_alpha, "alpha", [&](const std::string& v) {
        discovercmd.alpha = parse_value<int>(v, "alpha");
    });
    binding.bind(o_mode, "mode", [&](const std::string& v) { discovercmd.mode = v; });
    binding.bind(o_damp, "damping", [&](const std::string& v) {
        discovercmd.damping = parse_value<double>(v, "damping");
    });
    binding.bind(o_maxit, "max_iter", [&](const std::string& v) {
        discovercmd.max_iter = parse_value<int>(v, "max_iter");
    });
    binding.bind(o_stable, "stable_iters", [&](const std::string& v) {
        discovercmd.stable_iters = parse_value<int>(v, "stable_iters");
    });
    binding.bind(o_group, "grouping", [&](const std::string& v) { discovercmd.grouping = v; });
    binding.bind(o_n, "n", [&](const std::string& v) {
        synthcmd.n = parse_value<int>(v, "n");
    });
    binding.bind(o_fn, "false_neg", [&](const std::string& v) {
        synthcmd.false_neg = parse_value<double>(v, "false_neg");
    });
    binding.bind(o_slam, "lambda", [&](const std::string& v) {
        synthcmd.lambda = parse_value<std::int32_t>(v, "lambda");
    });
    binding.bind(o_len, "length", [&](const std::string& v) {
        synthcmd.length = parse_value<std::int32_t>(v, "length");
    });
    binding.bind(o_seed, "seed", [&](const std::string& v) {
        synthcmd.seed = parse_value<std::uint64_t>(v, "seed");
    });
    binding.bind(o_beta, "beta", [&](const std::string& v) {
        evalcmd.beta = parse_value<double>(v, "beta");
    });
    binding.bind(o_omegas, "omegas", [&](const std::string& v) { sweepcmd.omegas = v; });
    binding.bind(o_modes, "modes", [&](const std::string& v) { sweepcmd.modes = v; });
    binding.bind(o_salpha, "alpha", [&](const std::string& v) {
        sweepcmd.alpha = parse_value<int>(v, "alpha");
    });
    binding.bind(o_sdamp, "damping", [&](const std::string& v) {
        sweepcmd.damping = parse_value<double>(v, "damping");
    });
    binding.bind(o_smaxit, "max_iter", [&](const std::string& v) {
        sweepcmd.max_iter = parse_value<int>(v, "max_iter");
    });
    binding.bind(o_sstable, "stable_iters", [&](const std::string& v) {
        sweepcmd.stable_iters = parse_value<int>(v, "stable_iters");
    });

    try {
        app.parse(argc, argv);
        binding.config_path = common.config_path;
        binding.apply();

        if (ingest_app->parsed()) return run_ingest(common, ingest);
        if (pre_app->parsed()) return run_preprocess(common, preprocess);
        if (tree_app->parsed()) return run_tree(common, treecmd);
        if (disc_app->parsed()) return run_discover(common, discovercmd);
        if (synth_app->parsed()) return run_synth(common, synthcmd);
        if (eval_app->parsed()) return run_eval(common, evalcmd);
        if (sweep_app->parsed()) return run_sweep(common, sweepcmd);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const NonConvergence& e) {
        if (common.error_json)
            std::cout << json{{"error", {{"type", "non_convergence"}, {"message", e.what()}}}}.dump()
                      << '\n';
        else
            std::cerr << "error: " << e.what() << '\n';
        return kExitNonConvergence;
    } catch (const InputError& e) {
        if (common.error_json)
            std::cout << json{{"error", {{"type", "input"}, {"message", e.what()}}}}.dump() << '\n';
        else
            std::cerr << "error: " << e.what() << '\n';
        return kExitInput;
    } catch (const std::exception& e) {
        if (common.error_json)
            std::cout << json{{"error", {{"type", "internal"}, {"message", e.what()}}}}.dump()
                      << '\n';
        else
            std::cerr << "internal error: " << e.what() << '\n';
        return kExitInternal;
    }
}
