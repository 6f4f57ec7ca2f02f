#include <echograph/backbone.hpp>
#include <echograph/bipartite.hpp>
#include <echograph/community.hpp>
#include <echograph/csv.hpp>
#include <echograph/dataset_io.hpp>
#include <echograph/emotion.hpp>
#include <echograph/errors.hpp>
#include <echograph/pipeline.hpp>
#include <echograph/polarization.hpp>
#include <echograph/rng.hpp>
#include <echograph/statfit.hpp>
#include <echograph/synth.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;
using namespace echograph;

namespace {

double parse_double_field(const std::string& field, const std::string& where) {
    double v = 0.0;
    const char* begin = field.data();
    const char* end = begin + field.size();
    auto [ptr, ec] = std::from_chars(begin, end, v);
    if (ec != std::errc() || ptr != end)
        throw ParseError(where + ": '" + field + "' is not a number");
    return v;
}

std::size_t column_index(const std::vector<std::string>& header, const std::string& name,
                         const std::string& where) {
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == name) return i;
    throw ParseError(where + ": missing column '" + name + "'");
}

std::vector<double> read_values_csv(const fs::path& path, const std::string& column) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path.string() + "'");
    std::vector<std::string> fields;
    std::size_t line_no = 0;
    if (!csv_read_record(in, fields, line_no))
        throw ParseError("'" + path.string() + "' is empty");
    std::size_t col = column_index(fields, column, path.string());
    std::vector<double> values;
    while (csv_read_record(in, fields, line_no)) {
        if (col >= fields.size())
            throw ParseError(path.string() + ":" + std::to_string(line_no) + ": short record");
        values.push_back(parse_double_field(fields[col],
                                            path.string() + ":" + std::to_string(line_no)));
    }
    return values;
}

std::vector<CcdfPoint> read_ccdf_csv(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path.string() + "'");
    std::vector<std::string> fields;
    std::size_t line_no = 0;
    if (!csv_read_record(in, fields, line_no))
        throw ParseError("'" + path.string() + "' is empty");
    std::size_t vcol = column_index(fields, "value", path.string());
    std::size_t pcol = column_index(fields, "probability", path.string());
    std::vector<CcdfPoint> points;
    while (csv_read_record(in, fields, line_no)) {
        if (vcol >= fields.size() || pcol >= fields.size())
            throw ParseError(path.string() + ":" + std::to_string(line_no) + ": short record");
        std::string where = path.string() + ":" + std::to_string(line_no);
        points.push_back({parse_double_field(fields[vcol], where),
                          parse_double_field(fields[pcol], where)});
    }
    return points;
}

std::ofstream open_output(const fs::path& path) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParameterError("cannot open '" + path.string() + "' for writing");
    return out;
}

InteractionKind parse_interaction_kind(const std::string& name) {
    if (name == "like") return InteractionKind::like;
    if (name == "comment") return InteractionKind::comment;
    throw ParameterError("unknown interaction kind '" + name + "' (expected like or comment)");
}

CommunityAlgorithm parse_algorithm(const std::string& name) {
    if (name == "fg" || name == "fast_greedy") return CommunityAlgorithm::fast_greedy;
    if (name == "wt" || name == "walktrap") return CommunityAlgorithm::walktrap;
    if (name == "ml" || name == "multilevel" || name == "louvain")
        return CommunityAlgorithm::multilevel;
    if (name == "lp" || name == "label_propagation") return CommunityAlgorithm::label_propagation;
    throw ParameterError("unknown algorithm '" + name + "' (expected fg, wt, ml, or lp)");
}

ordered_json summary_json(const DatasetSummary& s) {
    ordered_json j;
    j["pages"] = s.pages;
    j["posts"] = s.posts;
    j["likes"] = s.likes;
    j["comments"] = s.comments;
    j["likers"] = s.likers;
    j["commenters"] = s.commenters;
    return j;
}

ordered_json fit_json(const FitResult& f) {
    ordered_json j;
    j["model"] = to_string(f.model);
    if (f.model == FitModel::log_normal) {
        j["params"] = {{"mu", f.params[0]}, {"sigma", f.params[1]}};
    } else {
        j["params"] = {{"a", f.params[0]}, {"b", f.params[1]}};
    }
    j["residual_sse"] = f.residual_sse;
    j["log_likelihood"] = f.log_likelihood;
    j["converged"] = f.converged;
    j["iterations"] = f.iterations;
    return j;
}

void emit(const ordered_json& j) { std::cout << j.dump(2) << "\n"; }

void write_histogram(std::ostream& out, const Histogram& h) {
    csv_write_record(out, {"bin_lo", "bin_hi", "bin_center", "count", "density"});
    for (std::size_t i = 0; i < h.bins(); ++i)
        csv_write_record(out, {format_double(h.edge(i)), format_double(h.edge(i + 1)),
                               format_double(h.center(i)), std::to_string(h.counts[i]),
                               format_double(h.density[i])});
}

struct GlobalOptions {
    std::uint64_t seed = 42;
    std::string format = "jsonl";
    std::string out_dir = ".";
    bool lenient = false;

    fs::path out(const std::string& name) const { return fs::path(out_dir) / name; }
};

IngestResult load_dataset(const fs::path& input, const GlobalOptions& g) {
    IngestResult result = ingest(input, parse_data_format(g.format));
    for (const IngestDiagnostic& diag : result.rejected)
        std::cerr << diag.source << ":" << diag.line << ": " << diag.message << "\n";
    if (!result.rejected.empty() && !g.lenient)
        throw ParseError(std::to_string(result.rejected.size()) +
                         " malformed input records (rerun with --lenient to skip them)");
    return result;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Echo-chamber analysis pipeline: interaction datasets to backbone, "
                 "communities, polarization, fits, and emotional distance"};
    app.require_subcommand(1);

    GlobalOptions g;
    app.add_option("--seed", g.seed, "Seed for every randomized stage")->capture_default_str();
    app.add_option("--format", g.format, "Dataset format: jsonl or csv")
        ->check(CLI::IsMember({"jsonl", "csv"}))
        ->capture_default_str();
    app.add_option("--out-dir", g.out_dir, "Directory for output files")->capture_default_str();
    app.add_flag("--lenient", g.lenient, "Skip malformed input records instead of failing");

    int exit_status = 0;

    // ingest
    std::string ingest_input, ingest_to = "jsonl", ingest_out;
    auto* cmd_ingest = app.add_subcommand("ingest", "Validate a dataset, optionally rewrite it");
    cmd_ingest->fallthrough();
    cmd_ingest->add_option("input", ingest_input, "Dataset file (jsonl) or directory (csv)")
        ->required();
    cmd_ingest->add_option("--to", ingest_to, "Rewrite format: jsonl or csv")
        ->check(CLI::IsMember({"jsonl", "csv"}));
    cmd_ingest->add_option("--out", ingest_out, "Rewrite destination (file for jsonl, directory for csv)");
    cmd_ingest->callback([&] {
        IngestResult result = load_dataset(ingest_input, g);
        if (!ingest_out.empty()) {
            if (parse_data_format(ingest_to) == DataFormat::jsonl)
                write_jsonl_file(result.dataset, ingest_out);
            else
                write_csv_dir(result.dataset, ingest_out);
        }
        ordered_json j;
        j["summary"] = summary_json(summarize(result.dataset));
        j["engaged_summary"] = summary_json(summarize(filter_engaged(result.dataset)));
        j["rejected"] = result.rejected.size();
        j["duplicates_dropped"] = result.duplicates_dropped;
        emit(j);
    });

    // summarize
    std::string summarize_input;
    auto* cmd_summarize = app.add_subcommand("summarize", "Print dataset counts");
    cmd_summarize->fallthrough();
    cmd_summarize->add_option("input", summarize_input, "Dataset path")->required();
    cmd_summarize->callback([&] {
        IngestResult result = load_dataset(summarize_input, g);
        ordered_json j;
        j["summary"] = summary_json(summarize(result.dataset));
        j["engaged_summary"] = summary_json(summarize(filter_engaged(result.dataset)));
        emit(j);
    });

    // project
    std::string project_input, project_kind = "like", project_side = "left", project_out;
    auto* cmd_project = app.add_subcommand("project", "Co-occurrence projection of the page-user graph");
    cmd_project->fallthrough();
    cmd_project->add_option("input", project_input, "Dataset path")->required();
    cmd_project->add_option("--kind", project_kind, "Interactions to use: like, comment, or both")
        ->check(CLI::IsMember({"like", "comment", "both"}))
        ->capture_default_str();
    cmd_project->add_option("--side", project_side, "Projection side: left (pages) or right (users)")
        ->check(CLI::IsMember({"left", "right"}))
        ->capture_default_str();
    cmd_project->add_option("--out", project_out, "Output CSV (default <out-dir>/projection.csv)");
    cmd_project->callback([&] {
        IngestResult result = load_dataset(project_input, g);
        InteractionDataset engaged = filter_engaged(result.dataset);
        BipartiteGraph b = build_bipartite(engaged, parse_kind_filter(project_kind));
        WeightedGraph graph = project(b, project_side == "left" ? Side::left : Side::right);
        fs::path out = project_out.empty() ? g.out("projection.csv") : fs::path(project_out);
        write_graph_csv_file(graph, out);
        ordered_json j;
        j["nodes"] = graph.node_count();
        j["edges"] = graph.edges().size();
        j["total_weight"] = graph.total_weight();
        j["out"] = out.string();
        emit(j);
    });

    // backbone
    std::string backbone_in, backbone_rule = "any", backbone_out, backbone_scores;
    double backbone_alpha = kFigureAlpha;
    auto* cmd_backbone = app.add_subcommand("backbone", "Disparity-filter backbone of a weighted graph");
    cmd_backbone->fallthrough();
    cmd_backbone->add_option("--in", backbone_in, "Edge CSV (node_a,node_b,weight)")->required();
    cmd_backbone->add_option("--alpha", backbone_alpha, "Significance level in (0,1)")
        ->capture_default_str();
    cmd_backbone->add_option("--rule", backbone_rule, "Keep rule: any or both endpoints")
        ->check(CLI::IsMember({"any", "both"}))
        ->capture_default_str();
    cmd_backbone->add_option("--out", backbone_out, "Output CSV (default <out-dir>/backbone.csv)");
    cmd_backbone->add_option("--scores", backbone_scores, "Optional per-edge score CSV");
    cmd_backbone->callback([&] {
        WeightedGraph graph = read_graph_csv(backbone_in);
        BackboneResult result =
            disparity_filter(graph, backbone_alpha, parse_backbone_rule(backbone_rule));
        fs::path out = backbone_out.empty() ? g.out("backbone.csv") : fs::path(backbone_out);
        write_graph_csv_file(result.backbone, out);
        if (!backbone_scores.empty()) {
            auto scores = open_output(backbone_scores);
            csv_write_record(scores, {"node_a", "node_b", "weight", "score", "kept"});
            for (std::size_t i = 0; i < graph.edges().size(); ++i) {
                const WeightedEdge& e = graph.edges()[i];
                csv_write_record(scores, {graph.node_id(e.a), graph.node_id(e.b),
                                          format_double(e.weight),
                                          format_double(result.per_edge_alpha[i]),
                                          result.kept[i] ? "true" : "false"});
            }
        }
        ordered_json j;
        j["alpha"] = result.alpha;
        j["rule"] = backbone_rule;
        j["nodes"] = result.backbone.node_count();
        j["edges_total"] = graph.edges().size();
        j["edges_kept"] = result.backbone.edges().size();
        j["out"] = out.string();
        emit(j);
    });

    // communities
    std::string comm_in, comm_algo = "all";
    int comm_steps = 4;
    auto* cmd_comm = app.add_subcommand("communities", "Community detection on a weighted graph");
    cmd_comm->fallthrough();
    cmd_comm->add_option("--in", comm_in, "Edge CSV (node_a,node_b,weight)")->required();
    cmd_comm->add_option("--algo", comm_algo, "fg, wt, ml, lp, or all")->capture_default_str();
    cmd_comm->add_option("--steps", comm_steps, "Walk length for wt")->capture_default_str();
    cmd_comm->callback([&] {
        WeightedGraph graph = read_graph_csv(comm_in);
        std::vector<CommunityAlgorithm> algos;
        if (comm_algo == "all")
            algos = {CommunityAlgorithm::fast_greedy, CommunityAlgorithm::walktrap,
                     CommunityAlgorithm::multilevel, CommunityAlgorithm::label_propagation};
        else
            algos = {parse_algorithm(comm_algo)};

        std::vector<std::pair<CommunityAlgorithm, Partition>> results;
        for (CommunityAlgorithm algo : algos) {
            Partition p;
            switch (algo) {
            case CommunityAlgorithm::fast_greedy: p = fast_greedy(graph); break;
            case CommunityAlgorithm::walktrap: p = walktrap(graph, comm_steps); break;
            case CommunityAlgorithm::multilevel:
                p = multilevel(graph, Rng::derive(g.seed, 1));
                break;
            case CommunityAlgorithm::label_propagation:
                p = label_propagation(graph, Rng::derive(g.seed, 2));
                break;
            case CommunityAlgorithm::external: break;
            }
            results.emplace_back(algo, std::move(p));
        }

        ordered_json j;
        for (const auto& [algo, part] : results) {
            std::string name = to_string(algo);
            write_partition_csv_file(part, g.out("communities_" + name + ".csv"));
            ordered_json a;
            a["communities"] = part.community_count();
            a["modularity"] = part.modularity;
            a["converged"] = part.converged;
            if (part.seed) a["seed"] = *part.seed;
            a["out"] = g.out("communities_" + name + ".csv").string();
            j["algorithms"][name] = std::move(a);
            if (!part.converged) exit_status = 4;
        }
        if (results.size() > 1) {
            ordered_json comparisons = ordered_json::array();
            for (std::size_t i = 0; i < results.size(); ++i) {
                for (std::size_t k = i + 1; k < results.size(); ++k) {
                    PartitionComparison cmp =
                        compare_partitions(results[i].second, results[k].second);
                    ordered_json c;
                    c["first"] = to_string(results[i].first);
                    c["second"] = to_string(results[k].first);
                    c["rand_index"] = cmp.rand_index;
                    c["adjusted_rand"] = cmp.adjusted_rand;
                    comparisons.push_back(std::move(c));
                }
            }
            j["comparisons"] = std::move(comparisons);
        }
        emit(j);
    });

    // polarize
    std::string pol_input, pol_partition, pol_kind = "like";
    double pol_tau = 1.0;
    int pol_bins = kDefaultPolarizationBins;
    auto* cmd_pol = app.add_subcommand("polarize", "User polarization over a two-community partition");
    cmd_pol->fallthrough();
    cmd_pol->add_option("input", pol_input, "Dataset path")->required();
    cmd_pol->add_option("--partition", pol_partition, "Partition CSV (node,community)")->required();
    cmd_pol->add_option("--kind", pol_kind, "like or comment")
        ->check(CLI::IsMember({"like", "comment"}))
        ->capture_default_str();
    cmd_pol->add_option("--tau", pol_tau, "Polarization threshold in (0,1]")->capture_default_str();
    cmd_pol->add_option("--bins", pol_bins, "Histogram bins")->capture_default_str();
    cmd_pol->callback([&] {
        IngestResult result = load_dataset(pol_input, g);
        Partition partition = read_partition_csv(pol_partition);
        auto profiles =
            polarization_profiles(result.dataset, partition, parse_interaction_kind(pol_kind));
        PolarizedUsers classified = classify_polarized(profiles, pol_tau);

        auto profile_csv = open_output(g.out("profiles.csv"));
        csv_write_record(profile_csv, {"user", "x", "y", "rho"});
        std::vector<double> rhos;
        rhos.reserve(profiles.size());
        for (const PolarizationProfile& p : profiles) {
            csv_write_record(profile_csv, {p.user_id, std::to_string(p.first_count),
                                           std::to_string(p.second_count),
                                           format_double(p.rho)});
            rhos.push_back(p.rho);
        }
        Histogram hist = pdf(rhos, pol_bins);
        auto hist_csv = open_output(g.out("polarization_pdf.csv"));
        write_histogram(hist_csv, hist);

        ordered_json j;
        j["kind"] = pol_kind;
        j["tau"] = pol_tau;
        j["profiles"] = profiles.size();
        j["toward_first"] = classified.first_members.size();
        j["toward_second"] = classified.second_members.size();
        j["unaligned"] = classified.unaligned;
        j["profiles_out"] = g.out("profiles.csv").string();
        j["histogram_out"] = g.out("polarization_pdf.csv").string();
        emit(j);
    });

    // ccdf
    std::string ccdf_in, ccdf_column = "value", ccdf_out;
    auto* cmd_ccdf = app.add_subcommand("ccdf", "Empirical CCDF of a value column");
    cmd_ccdf->fallthrough();
    cmd_ccdf->add_option("--in", ccdf_in, "CSV with a numeric column")->required();
    cmd_ccdf->add_option("--column", ccdf_column, "Column name")->capture_default_str();
    cmd_ccdf->add_option("--out", ccdf_out, "Output CSV (default <out-dir>/ccdf.csv)");
    cmd_ccdf->callback([&] {
        std::vector<double> values = read_values_csv(ccdf_in, ccdf_column);
        std::vector<CcdfPoint> points = ccdf(values);
        fs::path out = ccdf_out.empty() ? g.out("ccdf.csv") : fs::path(ccdf_out);
        auto file = open_output(out);
        csv_write_record(file, {"value", "probability"});
        for (const CcdfPoint& pt : points)
            csv_write_record(file, {format_double(pt.value), format_double(pt.probability)});
        ordered_json j;
        j["n"] = values.size();
        j["distinct"] = points.size();
        j["out"] = out.string();
        emit(j);
    });

    // fit
    std::string fit_in, fit_models = "all";
    auto* cmd_fit = app.add_subcommand("fit", "Nonlinear least-squares fits of a CCDF");
    cmd_fit->fallthrough();
    cmd_fit->add_option("--in", fit_in, "CCDF CSV (value,probability)")->required();
    cmd_fit->add_option("--models", fit_models,
                        "all or comma-separated of exponential,power_law,log_normal")
        ->capture_default_str();
    cmd_fit->callback([&] {
        std::vector<CcdfPoint> points = read_ccdf_csv(fit_in);
        std::vector<FitModel> models;
        if (fit_models == "all") {
            models = {FitModel::exponential, FitModel::power_law, FitModel::log_normal};
        } else {
            std::string token;
            for (char ch : fit_models + ",") {
                if (ch == ',') {
                    if (!token.empty()) models.push_back(parse_fit_model(token));
                    token.clear();
                } else {
                    token.push_back(ch);
                }
            }
            if (models.empty()) throw ParameterError("no models requested");
        }
        std::vector<FitResult> fits;
        fits.reserve(models.size());
        for (FitModel m : models) fits.push_back(fit_model(points, m));
        ordered_json j;
        j["candidates"] = ordered_json::array();
        for (const FitResult& f : fits) j["candidates"].push_back(fit_json(f));
        try {
            j["best"] = to_string(select_best(fits).model);
        } catch (const FitError&) {
            j["best"] = nullptr;
            exit_status = 4;
        }
        emit(j);
    });

    // kstest
    std::string ks_a, ks_b, ks_column = "value";
    auto* cmd_ks = app.add_subcommand("kstest", "Two-sample Kolmogorov-Smirnov test");
    cmd_ks->fallthrough();
    cmd_ks->add_option("--a", ks_a, "First sample CSV")->required();
    cmd_ks->add_option("--b", ks_b, "Second sample CSV")->required();
    cmd_ks->add_option("--column", ks_column, "Column name")->capture_default_str();
    cmd_ks->callback([&] {
        KsResult result =
            ks_two_sample(read_values_csv(ks_a, ks_column), read_values_csv(ks_b, ks_column));
        ordered_json j;
        j["d_statistic"] = result.d_statistic;
        j["p_value"] = result.p_value;
        j["n1"] = result.n1;
        j["n2"] = result.n2;
        j["critical_value_05"] = result.critical_value_05;
        emit(j);
    });

    // emotion
    std::string emo_input, emo_partition, emo_weight = "post";
    int emo_top = 100, emo_bins = kDefaultPolarizationBins;
    double emo_threshold = kDefaultDistanceThreshold;
    auto* cmd_emo = app.add_subcommand("emotion", "Concept sentiment distance and response analysis");
    cmd_emo->fallthrough();
    cmd_emo->add_option("input", emo_input, "Dataset path")->required();
    cmd_emo->add_option("--partition", emo_partition, "Partition CSV (node,community)")->required();
    cmd_emo->add_option("--top", emo_top, "Top concepts per community")->capture_default_str();
    cmd_emo->add_option("--threshold", emo_threshold, "Controversy threshold")->capture_default_str();
    cmd_emo->add_option("--weight", emo_weight, "Response averaging: post or comment")
        ->check(CLI::IsMember({"post", "comment"}))
        ->capture_default_str();
    cmd_emo->add_option("--bins", emo_bins, "Sentiment histogram bins")->capture_default_str();
    cmd_emo->callback([&] {
        IngestResult result = load_dataset(emo_input, g);
        Partition partition = read_partition_csv(emo_partition);

        SentimentPdf spdf = sentiment_pdf(result.dataset, partition, emo_bins);
        auto pdf_csv = open_output(g.out("sentiment_pdf.csv"));
        csv_write_record(pdf_csv, {"community", "bin_lo", "bin_hi", "bin_center", "count",
                                   "density"});
        for (const auto& [community, hist] : spdf.per_community)
            for (std::size_t i = 0; i < hist.bins(); ++i)
                csv_write_record(pdf_csv, {std::to_string(community), format_double(hist.edge(i)),
                                           format_double(hist.edge(i + 1)),
                                           format_double(hist.center(i)),
                                           std::to_string(hist.counts[i]),
                                           format_double(hist.density[i])});

        TopConcepts top = top_concepts(result.dataset, partition, emo_top);
        EmotionalDistanceResult dist =
            emotional_distance(result.dataset, partition, top.shared, emo_threshold);
        auto dist_csv = open_output(g.out("distance.csv"));
        csv_write_record(dist_csv,
                         {"concept", "avg_first", "avg_second", "distance", "controversial",
                          "panel"});
        for (const EmotionalDistanceRecord& rec : dist.records) {
            const char* panel = "none";
            if (rec.distance > dist.threshold)
                panel = "a";
            else if (rec.distance < -dist.threshold)
                panel = "b";
            csv_write_record(dist_csv, {rec.concept_name, format_double(rec.first_avg),
                                        format_double(rec.second_avg),
                                        format_double(rec.distance),
                                        rec.controversial ? "true" : "false", panel});
        }

        ResponseResult resp = emotional_response(result.dataset, partition, top.shared,
                                                 parse_response_weight(emo_weight));
        auto resp_csv = open_output(g.out("response.csv"));
        csv_write_record(resp_csv, {"concept", "community", "post_avg", "comment_avg", "gap",
                                    "post_count", "commented_post_count"});
        for (const ResponseRecord& rec : resp.records)
            csv_write_record(resp_csv,
                             {rec.concept_name, std::to_string(rec.community),
                              format_double(rec.post_avg), format_double(rec.comment_avg),
                              format_double(rec.gap), std::to_string(rec.post_count),
                              std::to_string(rec.commented_post_count)});
        auto user_csv = open_output(g.out("user_response.csv"));
        csv_write_record(user_csv, {"user", "community", "comment_avg", "comment_count"});
        for (const UserResponseRecord& rec : resp.per_user)
            csv_write_record(user_csv, {rec.user_id, std::to_string(rec.community),
                                        format_double(rec.comment_avg),
                                        std::to_string(rec.comment_count)});

        ordered_json j;
        j["top_n"] = emo_top;
        j["shared_concepts"] = top.shared.size();
        j["distance_records"] = dist.records.size();
        j["panel_a"] = dist.panel_a.size();
        j["panel_b"] = dist.panel_b.size();
        j["excluded"] = dist.excluded;
        j["response_records"] = resp.records.size();
        j["sign_change_index"] = resp.sign_change_index;
        emit(j);
    });

    // synth
    std::string synth_config_path;
    auto* cmd_synth = app.add_subcommand("synth", "Generate a planted-community dataset");
    cmd_synth->fallthrough();
    cmd_synth->add_option("--config", synth_config_path, "SynthConfig JSON (defaults when omitted)");
    cmd_synth->callback([&] {
        SynthConfig cfg;
        if (!synth_config_path.empty()) {
            std::ifstream in(synth_config_path);
            if (!in) throw ParseError("cannot open '" + synth_config_path + "'");
            std::string text((std::istreambuf_iterator<char>(in)),
                             std::istreambuf_iterator<char>());
            cfg = parse_synth_config(text);
        }
        if (app.count("--seed") > 0) cfg.seed = g.seed;
        SynthOutput out = generate(cfg);

        fs::path data_path;
        if (parse_data_format(g.format) == DataFormat::jsonl) {
            data_path = g.out("dataset.jsonl");
            write_jsonl_file(out.dataset, data_path);
        } else {
            data_path = g.out("dataset");
            write_csv_dir(out.dataset, data_path);
        }
        open_output(g.out("ledger.json")) << ledger_json(out.ledger);
        open_output(g.out("config_used.json")) << synth_config_json(cfg);

        ordered_json j;
        j["seed"] = cfg.seed;
        j["dataset"] = data_path.string();
        j["ledger"] = g.out("ledger.json").string();
        j["summary"] = summary_json(out.ledger.summary);
        emit(j);
    });

    // run
    std::string run_input, run_rule = "any", run_algo = "fg", run_kind = "like",
                run_weight = "post";
    double run_alpha = kFigureAlpha, run_tau = 1.0, run_threshold = kDefaultDistanceThreshold;
    int run_bins = kDefaultPolarizationBins, run_top = 100;
    bool run_on_backbone = false;
    auto* cmd_run = app.add_subcommand("run", "Full pipeline: dataset to report and figure CSVs");
    cmd_run->fallthrough();
    cmd_run->add_option("input", run_input, "Dataset path")->required();
    cmd_run->add_option("--alpha", run_alpha, "Backbone significance level")->capture_default_str();
    cmd_run->add_option("--rule", run_rule, "Backbone keep rule: any or both")
        ->check(CLI::IsMember({"any", "both"}))
        ->capture_default_str();
    cmd_run->add_option("--algo", run_algo, "Partition driving the analysis: fg, wt, ml, lp")
        ->capture_default_str();
    cmd_run->add_flag("--on-backbone", run_on_backbone,
                      "Detect communities on the backbone instead of the full projection");
    cmd_run->add_option("--kind", run_kind, "Polarization interactions: like or comment")
        ->check(CLI::IsMember({"like", "comment"}))
        ->capture_default_str();
    cmd_run->add_option("--tau", run_tau, "Polarization threshold in (0,1]")->capture_default_str();
    cmd_run->add_option("--bins", run_bins, "Histogram bins")->capture_default_str();
    cmd_run->add_option("--top", run_top, "Top concepts per community")->capture_default_str();
    cmd_run->add_option("--threshold", run_threshold, "Controversy threshold")
        ->capture_default_str();
    cmd_run->add_option("--weight", run_weight, "Response averaging: post or comment")
        ->check(CLI::IsMember({"post", "comment"}))
        ->capture_default_str();
    cmd_run->callback([&] {
        PipelineOptions options;
        options.seed = g.seed;
        options.format = parse_data_format(g.format);
        options.lenient = g.lenient;
        options.alpha = run_alpha;
        options.rule = parse_backbone_rule(run_rule);
        options.algorithm = parse_algorithm(run_algo);
        options.on_backbone = run_on_backbone;
        options.polarization_kind = parse_interaction_kind(run_kind);
        options.tau = run_tau;
        options.pdf_bins = run_bins;
        options.top_n = run_top;
        options.distance_threshold = run_threshold;
        options.response_weight = parse_response_weight(run_weight);

        PipelineReport report = run_pipeline_file(run_input, options, g.out_dir);
        for (const std::string& w : report.warnings) std::cerr << "warning: " << w << "\n";
        if (!report.ok())
            std::cerr << "aborted at stage '" << *report.aborted_stage
                      << "': " << report.error_message << "\n";
        ordered_json j;
        j["report"] = (fs::path(g.out_dir) / "report.json").string();
        j["exit_code"] = report.exit_code;
        j["warnings"] = report.warnings.size();
        if (report.aborted_stage) j["aborted_stage"] = *report.aborted_stage;
        emit(j);
        exit_status = report.exit_code;
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const ContractError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return exit_status;
}
