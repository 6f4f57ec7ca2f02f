#include "echograph/pipeline.hpp"

#include "echograph/bipartite.hpp"
#include "echograph/csv.hpp"
#include "echograph/errors.hpp"
#include "echograph/rng.hpp"

#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <map>
#include <utility>

namespace echograph {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

namespace {

int exit_code_for(const Error& e) {
    if (dynamic_cast<const ContractError*>(&e)) return 3;
    return 2;   // parse, integrity, parameter, fit
}

std::ofstream open_output(const fs::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParameterError("cannot open '" + path.string() + "' for writing");
    return out;
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

ordered_json histogram_json(const Histogram& h) {
    ordered_json j;
    j["lo"] = h.lo;
    j["hi"] = h.hi;
    j["bins"] = h.bins();
    j["counts"] = h.counts;
    j["density"] = h.density;
    return j;
}

void write_histogram_csv(std::ostream& out, const Histogram& h,
                         const std::string& label_column = "", const std::string& label = "") {
    std::vector<std::string> header;
    if (!label_column.empty()) header.push_back(label_column);
    for (const char* col : {"bin_lo", "bin_hi", "bin_center", "count", "density"})
        header.emplace_back(col);
    csv_write_record(out, header);
    for (std::size_t i = 0; i < h.bins(); ++i) {
        std::vector<std::string> row;
        if (!label_column.empty()) row.push_back(label);
        row.push_back(format_double(h.edge(i)));
        row.push_back(format_double(h.edge(i + 1)));
        row.push_back(format_double(h.center(i)));
        row.push_back(std::to_string(h.counts[i]));
        row.push_back(format_double(h.density[i]));
        csv_write_record(out, row);
    }
}

ordered_json fit_json(const FitResult& f) {
    ordered_json j;
    j["model"] = to_string(f.model);
    ordered_json params;
    if (f.model == FitModel::log_normal) {
        params["mu"] = f.params[0];
        params["sigma"] = f.params[1];
    } else {
        params["a"] = f.params[0];
        params["b"] = f.params[1];
    }
    j["params"] = std::move(params);
    j["residual_sse"] = f.residual_sse;
    j["log_likelihood"] = f.log_likelihood;
    j["converged"] = f.converged;
    j["iterations"] = f.iterations;
    return j;
}

ordered_json ks_json(const KsResult& k) {
    ordered_json j;
    j["d_statistic"] = k.d_statistic;
    j["p_value"] = k.p_value;
    j["n1"] = k.n1;
    j["n2"] = k.n2;
    j["critical_value_05"] = k.critical_value_05;
    return j;
}

} // namespace

PipelineReport run_pipeline(const InteractionDataset& raw, const PipelineOptions& options,
                            const fs::path& out_dir,
                            const std::optional<IngestStats>& ingest_stats) {
    fs::create_directories(out_dir);

    PipelineReport report;
    ordered_json doc;
    doc["tool"] = {{"name", kToolName}, {"version", kToolVersion}};

    std::uint64_t ml_seed = Rng::derive(options.seed, 1);
    std::uint64_t lp_seed = Rng::derive(options.seed, 2);
    {
        ordered_json p;
        p["seed"] = options.seed;
        p["alpha"] = options.alpha;
        p["rule"] = options.rule == BackboneRule::any ? "any" : "both";
        p["algorithm"] = to_string(options.algorithm);
        p["on_backbone"] = options.on_backbone;
        p["polarization_kind"] = to_string(options.polarization_kind);
        p["tau"] = options.tau;
        p["pdf_bins"] = options.pdf_bins;
        p["top_n"] = options.top_n;
        p["distance_threshold"] = options.distance_threshold;
        p["response_weight"] = options.response_weight == ResponseWeight::post ? "post" : "comment";
        p["derived_seeds"] = {{"multilevel", ml_seed}, {"label_propagation", lp_seed}};
        doc["parameters"] = std::move(p);
    }

    struct Abort {
        std::string stage;
        std::string message;
        int code = 2;
    };
    std::optional<Abort> abort;
    auto stage = [&](const char* name, auto&& body) {
        if (abort) return;
        try {
            body();
        } catch (const Error& e) {
            abort = Abort{name, e.what(), exit_code_for(e)};
        } catch (const std::exception& e) {
            abort = Abort{name, e.what(), 1};
        }
    };
    auto warn = [&](std::string message) { report.warnings.push_back(std::move(message)); };

    InteractionDataset engaged;
    WeightedGraph projection;
    BackboneResult backbone;
    std::vector<std::pair<CommunityAlgorithm, Partition>> partitions;
    Partition selected;
    std::vector<PolarizationProfile> like_profiles, comment_profiles;
    PolarizedUsers polarized;

    stage("ingest", [&] {
        raw.validate();
        doc["dataset"]["provenance"] = raw.provenance;
        if (ingest_stats) {
            doc["dataset"]["ingest"] = {{"rejected", ingest_stats->rejected},
                                        {"duplicates_dropped", ingest_stats->duplicates_dropped}};
            if (ingest_stats->rejected > 0) {
                if (!options.lenient)
                    throw ParseError(std::to_string(ingest_stats->rejected) +
                                     " malformed input records (rerun with --lenient to skip them)");
                warn(std::to_string(ingest_stats->rejected) + " malformed input records skipped");
            }
        }
        doc["dataset"]["summary"] = summary_json(summarize(raw));
    });

    stage("filter", [&] {
        engaged = filter_engaged(raw);
        doc["dataset"]["engaged_summary"] = summary_json(summarize(engaged));
    });

    stage("project", [&] {
        BipartiteGraph b = build_bipartite(engaged, KindFilter::like);
        projection = project(b, Side::left);
        if (projection.node_count() == 0)
            throw ContractError("nothing to project: no engaged pages with liking users");
        write_graph_csv_file(projection, out_dir / "projection.csv");
        ordered_json j;
        j["nodes"] = projection.node_count();
        j["edges"] = projection.edges().size();
        j["total_weight"] = projection.total_weight();
        doc["projection"] = std::move(j);
    });

    stage("backbone", [&] {
        backbone = disparity_filter(projection, options.alpha, options.rule);
        write_graph_csv_file(backbone.backbone, out_dir / "backbone.csv");
        ordered_json j;
        j["alpha"] = backbone.alpha;
        j["rule"] = backbone.rule == BackboneRule::any ? "any" : "both";
        j["nodes"] = backbone.backbone.node_count();
        j["edges_kept"] = backbone.backbone.edges().size();
        j["edges_total"] = projection.edges().size();
        j["kept_fraction"] = projection.edges().empty()
                                 ? 0.0
                                 : static_cast<double>(backbone.backbone.edges().size()) /
                                       static_cast<double>(projection.edges().size());
        doc["backbone"] = std::move(j);
    });

    stage("communities", [&] {
        const WeightedGraph& target = options.on_backbone ? backbone.backbone : projection;
        partitions.emplace_back(CommunityAlgorithm::fast_greedy, fast_greedy(target));
        partitions.emplace_back(CommunityAlgorithm::walktrap, walktrap(target));
        partitions.emplace_back(CommunityAlgorithm::multilevel, multilevel(target, ml_seed));
        partitions.emplace_back(CommunityAlgorithm::label_propagation,
                                label_propagation(target, lp_seed));

        ordered_json per_algo;
        for (const auto& [algo, part] : partitions) {
            ordered_json j;
            j["communities"] = part.community_count();
            j["modularity"] = part.modularity;
            j["converged"] = part.converged;
            if (part.seed) j["seed"] = *part.seed;
            per_algo[to_string(algo)] = std::move(j);
            if (!part.converged)
                warn(std::string(to_string(algo)) + " hit its sweep cap without converging");
        }
        doc["communities"]["algorithms"] = std::move(per_algo);

        ordered_json comparisons = ordered_json::array();
        for (std::size_t i = 0; i < partitions.size(); ++i) {
            for (std::size_t k = i + 1; k < partitions.size(); ++k) {
                PartitionComparison cmp =
                    compare_partitions(partitions[i].second, partitions[k].second);
                ordered_json j;
                j["first"] = to_string(partitions[i].first);
                j["second"] = to_string(partitions[k].first);
                j["rand_index"] = cmp.rand_index;
                j["adjusted_rand"] = cmp.adjusted_rand;
                comparisons.push_back(std::move(j));
            }
        }
        doc["communities"]["comparisons"] = std::move(comparisons);

        bool found_selected = false;
        for (auto& [algo, part] : partitions) {
            if (algo == options.algorithm) {
                selected = part;
                found_selected = true;
            }
        }
        if (!found_selected)
            throw ParameterError("pipeline cannot drive downstream stages with algorithm '" +
                                 std::string(to_string(options.algorithm)) + "'");
        doc["communities"]["selected"] = to_string(options.algorithm);
        ordered_json assignment = ordered_json::object();
        for (std::size_t i = 0; i < selected.node_ids.size(); ++i)
            assignment[selected.node_ids[i]] = selected.community[i];
        doc["communities"]["partition"] = std::move(assignment);

        auto fig1 = open_output(out_dir / "fig1_backbone.csv");
        csv_write_record(fig1, {"node_a", "node_b", "weight", "community_a", "community_b"});
        for (const WeightedEdge& e : backbone.backbone.edges()) {
            const std::string& a = backbone.backbone.node_id(e.a);
            const std::string& b = backbone.backbone.node_id(e.b);
            csv_write_record(fig1, {a, b, format_double(e.weight),
                                    std::to_string(selected.community_of(a)),
                                    std::to_string(selected.community_of(b))});
        }
    });

    stage("polarize", [&] {
        like_profiles = polarization_profiles(engaged, selected, InteractionKind::like);
        comment_profiles = polarization_profiles(engaged, selected, InteractionKind::comment);
        const auto& driving = options.polarization_kind == InteractionKind::like
                                  ? like_profiles
                                  : comment_profiles;
        polarized = classify_polarized(driving, options.tau);

        std::vector<double> rhos;
        rhos.reserve(driving.size());
        for (const PolarizationProfile& p : driving) rhos.push_back(p.rho);
        Histogram hist = pdf(rhos, options.pdf_bins);
        auto fig2 = open_output(out_dir / "fig2_pdf.csv");
        write_histogram_csv(fig2, hist);

        ordered_json j;
        j["kind"] = to_string(options.polarization_kind);
        j["tau"] = options.tau;
        j["profiles"] = driving.size();
        j["toward_first"] = polarized.first_members.size();
        j["toward_second"] = polarized.second_members.size();
        j["unaligned"] = polarized.unaligned;
        j["histogram"] = histogram_json(hist);
        doc["polarization"] = std::move(j);
    });

    stage("activity", [&] {
        std::map<std::string, double> like_total, comment_total;
        for (const PolarizationProfile& p : like_profiles)
            like_total[p.user_id] = static_cast<double>(p.first_count + p.second_count);
        for (const PolarizationProfile& p : comment_profiles)
            comment_total[p.user_id] = static_cast<double>(p.first_count + p.second_count);

        auto collect = [](const std::vector<std::string>& members,
                          const std::map<std::string, double>& totals) {
            std::vector<double> out;
            for (const std::string& user : members) {
                auto it = totals.find(user);
                if (it != totals.end()) out.push_back(it->second);
            }
            return out;
        };
        std::vector<std::pair<std::string, std::vector<double>>> series;
        series.emplace_back("likes_first", collect(polarized.first_members, like_total));
        series.emplace_back("likes_second", collect(polarized.second_members, like_total));
        series.emplace_back("comments_first", collect(polarized.first_members, comment_total));
        series.emplace_back("comments_second", collect(polarized.second_members, comment_total));

        LifetimeResult life_first = lifetimes(engaged, polarized.first_members);
        LifetimeResult life_second = lifetimes(engaged, polarized.second_members);
        auto days_of = [](const LifetimeResult& r) {
            std::vector<double> out;
            out.reserve(r.records.size());
            for (const LifetimeRecord& rec : r.records) out.push_back(rec.lifetime_days);
            return out;
        };
        series.emplace_back("lifetime_first", days_of(life_first));
        series.emplace_back("lifetime_second", days_of(life_second));

        auto fig3 = open_output(out_dir / "fig3_ccdf.csv");
        csv_write_record(fig3, {"series", "value", "probability"});
        ordered_json samples, fits;
        std::map<std::string, std::vector<CcdfPoint>> curves;
        for (const auto& [name, values] : series) {
            samples[name] = values.size();
            if (values.empty()) {
                warn("series " + name + " is empty; skipped");
                continue;
            }
            std::vector<CcdfPoint> points = ccdf(values);
            curves[name] = points;
            for (const CcdfPoint& pt : points)
                csv_write_record(fig3, {name, format_double(pt.value),
                                        format_double(pt.probability)});
        }
        doc["activity"]["samples"] = std::move(samples);

        for (const auto& [name, values] : series) {
            if (name.rfind("lifetime", 0) == 0) continue;   // counts only, per the fit tables
            auto found = curves.find(name);
            if (found == curves.end()) continue;
            ordered_json j;
            ordered_json candidates = ordered_json::array();
            try {
                std::vector<FitResult> all = fit_all_models(found->second);
                for (const FitResult& f : all) candidates.push_back(fit_json(f));
                j["candidates"] = std::move(candidates);
                try {
                    j["best"] = to_string(select_best(all).model);
                } catch (const FitError& e) {
                    j["best"] = nullptr;
                    warn("series " + name + ": " + e.what());
                }
            } catch (const Error& e) {
                j["candidates"] = std::move(candidates);
                j["best"] = nullptr;
                warn("series " + name + " not fittable: " + e.what());
            }
            fits[name] = std::move(j);
        }
        doc["activity"]["fits"] = std::move(fits);

        ordered_json ks = ordered_json::object();
        auto sample_named = [&](const std::string& name) -> const std::vector<double>& {
            for (const auto& [n, values] : series)
                if (n == name) return values;
            throw ContractError("unknown series " + name);
        };
        auto ks_pair = [&](const char* label, const char* first, const char* second) {
            const std::vector<double>& sa = sample_named(first);
            const std::vector<double>& sb = sample_named(second);
            if (sa.empty() || sb.empty()) {
                warn(std::string("KS ") + label + " skipped: empty sample");
                return;
            }
            ks[label] = ks_json(ks_two_sample(sa, sb));
        };
        ks_pair("likes", "likes_first", "likes_second");
        ks_pair("comments", "comments_first", "comments_second");
        doc["activity"]["ks"] = std::move(ks);

        doc["activity"]["lifetimes"] = {
            {"first", life_first.records.size()},
            {"second", life_second.records.size()},
            {"skipped_first", life_first.skipped_users},
            {"skipped_second", life_second.skipped_users}};
    });

    stage("emotion", [&] {
        SentimentPdf spdf = sentiment_pdf(engaged, selected, options.pdf_bins);
        auto fig4 = open_output(out_dir / "fig4_sentiment.csv");
        bool first_block = true;
        for (const auto& [community, hist] : spdf.per_community) {
            if (first_block) {
                write_histogram_csv(fig4, hist, "community", std::to_string(community));
                first_block = false;
            } else {
                for (std::size_t i = 0; i < hist.bins(); ++i)
                    csv_write_record(fig4, {std::to_string(community),
                                            format_double(hist.edge(i)),
                                            format_double(hist.edge(i + 1)),
                                            format_double(hist.center(i)),
                                            std::to_string(hist.counts[i]),
                                            format_double(hist.density[i])});
            }
        }
        for (int c : spdf.omitted)
            warn("community " + std::to_string(c) + " has no scored posts; sentiment PDF omitted");

        TopConcepts top = top_concepts(engaged, selected, options.top_n);
        EmotionalDistanceResult dist =
            emotional_distance(engaged, selected, top.shared, options.distance_threshold);
        auto fig5 = open_output(out_dir / "fig5_distance.csv");
        csv_write_record(fig5, {"concept", "avg_first", "avg_second", "distance",
                                "controversial", "panel"});
        for (const EmotionalDistanceRecord& rec : dist.records) {
            const char* panel = "none";
            if (rec.distance > dist.threshold)
                panel = "a";
            else if (rec.distance < -dist.threshold)
                panel = "b";
            csv_write_record(fig5, {rec.concept_name, format_double(rec.first_avg),
                                    format_double(rec.second_avg), format_double(rec.distance),
                                    rec.controversial ? "true" : "false", panel});
        }

        ResponseResult resp =
            emotional_response(engaged, selected, top.shared, options.response_weight);
        auto fig6 = open_output(out_dir / "fig6_response.csv");
        csv_write_record(fig6, {"concept", "community", "post_avg", "comment_avg", "gap",
                                "post_count", "commented_post_count"});
        for (const ResponseRecord& rec : resp.records)
            csv_write_record(fig6, {rec.concept_name, std::to_string(rec.community),
                                    format_double(rec.post_avg), format_double(rec.comment_avg),
                                    format_double(rec.gap), std::to_string(rec.post_count),
                                    std::to_string(rec.commented_post_count)});
        auto user_csv = open_output(out_dir / "user_response.csv");
        csv_write_record(user_csv, {"user", "community", "comment_avg", "comment_count"});
        for (const UserResponseRecord& rec : resp.per_user)
            csv_write_record(user_csv, {rec.user_id, std::to_string(rec.community),
                                        format_double(rec.comment_avg),
                                        std::to_string(rec.comment_count)});

        ordered_json j;
        j["pdf_bins"] = options.pdf_bins;
        j["top_n"] = options.top_n;
        j["top_first"] = top.first.size();
        j["top_second"] = top.second.size();
        j["shared_concepts"] = top.shared.size();
        ordered_json dj;
        dj["threshold"] = dist.threshold;
        dj["records"] = dist.records.size();
        dj["panel_a"] = dist.panel_a.size();
        dj["panel_b"] = dist.panel_b.size();
        dj["non_controversial"] =
            dist.records.size() - dist.panel_a.size() - dist.panel_b.size();
        dj["excluded"] = dist.excluded;
        j["distance"] = std::move(dj);
        ordered_json rj;
        rj["records"] = resp.records.size();
        rj["sign_change_index"] = resp.sign_change_index;
        rj["posts_without_comments"] = resp.posts_without_comments;
        rj["skipped_concepts"] = resp.skipped_concepts;
        j["response"] = std::move(rj);
        doc["emotion"] = std::move(j);
    });

    doc["warnings"] = report.warnings;
    if (abort) {
        doc["aborted_stage"] = abort->stage;
        doc["error"] = abort->message;
        report.aborted_stage = abort->stage;
        report.error_message = abort->message;
        report.exit_code = abort->code;
    } else {
        report.exit_code = report.warnings.empty() ? 0 : 4;
    }
    report.report_json = doc.dump(2) + "\n";
    open_output(out_dir / "report.json") << report.report_json;
    return report;
}

PipelineReport run_pipeline_file(const fs::path& input, const PipelineOptions& options,
                                 const fs::path& out_dir) {
    try {
        IngestResult result = ingest(input, options.format);
        IngestStats stats{result.rejected.size(), result.duplicates_dropped};
        return run_pipeline(result.dataset, options, out_dir, stats);
    } catch (const Error& e) {
        fs::create_directories(out_dir);
        PipelineReport report;
        report.aborted_stage = "ingest";
        report.error_message = e.what();
        report.exit_code = exit_code_for(e);
        ordered_json doc;
        doc["tool"] = {{"name", kToolName}, {"version", kToolVersion}};
        doc["aborted_stage"] = "ingest";
        doc["error"] = report.error_message;
        report.report_json = doc.dump(2) + "\n";
        open_output(out_dir / "report.json") << report.report_json;
        return report;
    }
}

} // namespace echograph
