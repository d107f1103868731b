#include "invnet/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "invnet/connectivity.hpp"
#include "invnet/cross_validation.hpp"
#include "invnet/csv.hpp"
#include "invnet/error.hpp"
#include "invnet/interpret.hpp"
#include "invnet/metrics.hpp"
#include "invnet/model_io.hpp"
#include "invnet/svg.hpp"
#include "invnet/synthetic.hpp"
#include "invnet/train.hpp"

namespace invnet {

namespace fs = std::filesystem;

namespace {

constexpr int kConfigFormatVersion = 1;

// Effective configuration of a subcommand, embedded in every output file.
std::string provenance(const CLI::App& sub) {
    std::string text = "invnet " + sub.get_name() + "\nformat_version=" +
                       std::to_string(kConfigFormatVersion) + "\n";
    text += sub.config_to_str(true, false);
    while (!text.empty() && text.back() == '\n') text.pop_back();
    return text;
}

std::string fixed(double v, int digits = 4) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
    return buf;
}

void check_dims(const InvNetModel& model, const LabeledDataset& data) {
    if (model.input_dim != data.dim()) {
        throw DimensionError("model expects " + std::to_string(model.input_dim) +
                             " features, dataset has " + std::to_string(data.dim()));
    }
}

// ---------------------------------------------------------------- simulate

struct SimulateArgs {
    std::string kind;
    std::size_t n = 1000;
    double noise = 0.1;
    double separation = 2.0;
    double spread = 1.0;
    std::size_t d = 200;
    std::size_t k = 10;
    std::uint64_t seed = 0;
    std::string out;
};

void run_simulate(const SimulateArgs& a, const CLI::App& sub, std::ostream& out) {
    SeededRng rng(a.seed);
    LabeledDataset data;
    if (a.kind == "two-moons") {
        data = two_moons(a.n, a.noise, rng);
    } else if (a.kind == "diagonal") {
        data = diagonal_clusters(a.n, a.separation, rng, a.spread);
    } else if (a.kind == "axis") {
        data = axis_clusters(a.n, a.separation, rng);
    } else {
        data = sparse_signal_synth(a.n, a.d, a.k, a.noise, rng);
    }
    const std::string prov = provenance(sub);
    write_text_file(a.out, dataset_to_csv(data, prov));
    if (data.ground_truth_support) {
        write_text_file(a.out + ".support", index_list_to_text(*data.ground_truth_support, prov));
    }
    out << "wrote " << a.out << ": n=" << data.size() << " d=" << data.dim()
        << " class0=" << data.count_label(0) << " class1=" << data.count_label(1) << "\n";
    if (data.ground_truth_support) {
        out << "wrote " << a.out << ".support: " << data.ground_truth_support->size()
            << " informative feature indices\n";
    }
}

// ---------------------------------------------------------------- train

struct TrainArgs {
    std::string data;
    std::string model_out;
    std::string loss_out;
    TrainConfig config;
    double holdout = 0.2;
};

void run_train(const TrainArgs& a, const CLI::App& sub, std::ostream& out) {
    const LabeledDataset data = read_dataset_csv(a.data);
    data.validate();
    if (data.size() == 0) throw InputError(a.data + ": dataset has no rows");
    if (!(a.holdout >= 0.0 && a.holdout < 1.0)) throw InputError("--holdout must lie in [0, 1)");

    SeededRng split_rng = SeededRng(a.config.seed).child("holdout");
    const std::vector<std::size_t> perm = split_rng.permutation(data.size());
    const auto n_test = static_cast<std::size_t>(std::floor(a.holdout * static_cast<double>(data.size())));
    if (n_test >= data.size()) throw InputError("--holdout leaves no training rows");
    std::vector<std::size_t> test_rows(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(n_test));
    std::vector<std::size_t> train_rows(perm.begin() + static_cast<std::ptrdiff_t>(n_test), perm.end());
    std::sort(test_rows.begin(), test_rows.end());
    std::sort(train_rows.begin(), train_rows.end());
    const LabeledDataset train_set = data.subset_rows(train_rows);

    const TrainResult result = train(train_set, a.config);
    const double train_acc = accuracy(result.model, train_set);
    std::optional<double> test_acc;
    if (n_test > 0) test_acc = accuracy(result.model, data.subset_rows(test_rows));

    std::string prov = provenance(sub);
    prov += "\ntrain_rows=" + std::to_string(train_rows.size()) +
            "\nheldout_rows=" + std::to_string(n_test) + "\ntrain_accuracy=" + format_double(train_acc);
    if (test_acc) prov += "\nheldout_accuracy=" + format_double(*test_acc);
    save_model(a.model_out, result.model, prov);

    const std::string loss_path = a.loss_out.empty() ? a.model_out + ".loss.csv" : a.loss_out;
    std::string loss = comment_block(prov) + "epoch,mean_loss\n";
    for (std::size_t e = 0; e < result.epoch_loss.size(); ++e) {
        loss += std::to_string(e + 1) + "," + format_double(result.epoch_loss[e]) + "\n";
    }
    write_text_file(loss_path, loss);

    out << "wrote " << a.model_out << " (" << result.model.blocks.size() << " blocks, hidden "
        << result.model.hidden_dim() << ", " << parameter_count(result.model) << " parameters)\n";
    out << "wrote " << loss_path << "\n";
    if (!result.epoch_loss.empty()) out << "final epoch loss: " << fixed(result.epoch_loss.back(), 6) << "\n";
    out << "train accuracy: " << fixed(train_acc) << " (" << train_rows.size() << " rows)\n";
    if (test_acc) out << "held-out accuracy: " << fixed(*test_acc) << " (" << n_test << " rows)\n";
}

// ---------------------------------------------------------------- explain

struct ExplainArgs {
    std::string model;
    std::string data;
    std::string out_dir;
    std::size_t hist_features = 3;
    std::size_t bins = 24;
    std::size_t max_samples = 0;
    unsigned threads = 1;
};

void run_explain(const ExplainArgs& a, const CLI::App& sub, std::ostream& out) {
    const InvNetModel model = load_model(a.model);
    const LabeledDataset data = read_dataset_csv(a.data);
    check_dims(model, data);
    if (data.size() == 0) throw InputError(a.data + ": dataset has no rows");
    const std::string prov = provenance(sub);
    const fs::path dir(a.out_dir);

    const auto explanations = explain_dataset(model, data, a.threads);
    const ImportanceRanking ranking = mean_importance(explanations);
    write_text_file(dir / "ranking.csv", ranking_to_csv(ranking, prov));

    const std::size_t per_sample =
        a.max_samples == 0 ? data.size() : std::min(a.max_samples, data.size());
    for (std::size_t i = 0; i < per_sample; ++i) {
        char name[64];
        std::snprintf(name, sizeof(name), "sample_%06zu.csv", i);
        write_text_file(dir / "samples" / name,
                        explanation_to_csv(explanations[i], prov + "\nsample=" + std::to_string(i) +
                                                                "\nsubject_id=" + data.ids[i] +
                                                                "\nlabel=" + std::to_string(data.labels[i])));
    }

    // Class separation of raw inputs vs explanations, per feature.
    std::string sep = comment_block(prov) + "feature_index,input_smd,explanation_smd\n";
    const bool both_classes = data.count_label(0) > 0 && data.count_label(1) > 0;
    std::vector<double> input_smd(data.dim(), 0.0), expl_smd(data.dim(), 0.0);
    for (std::size_t j = 0; j < data.dim() && both_classes; ++j) {
        Vector xs(data.size()), es(data.size());
        for (std::size_t i = 0; i < data.size(); ++i) {
            xs[i] = explanations[i].x[j];
            es[i] = explanations[i].explanation[j];
        }
        auto smd = [&](const Vector& v) {
            try {
                return standardized_mean_difference(v, data.labels);
            } catch (const DegenerateError&) {
                return 0.0;
            }
        };
        input_smd[j] = smd(xs);
        expl_smd[j] = smd(es);
        sep += std::to_string(j) + "," + format_double(input_smd[j]) + "," +
               format_double(expl_smd[j]) + "\n";
    }
    if (both_classes) write_text_file(dir / "separation.csv", sep);

    const std::size_t hist = std::min(a.hist_features, data.dim());
    for (std::size_t r = 0; r < hist; ++r) {
        const std::size_t j = ranking.order[r];
        Vector xs(data.size()), es(data.size());
        for (std::size_t i = 0; i < data.size(); ++i) {
            xs[i] = explanations[i].x[j];
            es[i] = explanations[i].explanation[j];
        }
        SvgDocument svg(760, 300);
        svg.comment(prov + "\nfeature_index=" + std::to_string(j));
        const std::string label = data.feature_names.empty() ? "x" + std::to_string(j)
                                                             : data.feature_names[j];
        svg.text(380, 20, "feature " + std::to_string(j) + " (" + label + "), importance rank " +
                              std::to_string(r + 1), 14, "middle");
        draw_class_histogram(svg, 40, 60, 320, 190, xs, data.labels, a.bins, "input value");
        draw_class_histogram(svg, 400, 60, 320, 190, es, data.labels, a.bins, "explanation");
        svg.rect(40, 275, 10, 10, kClassColors[0]);
        svg.text(55, 284, "class 0", 10);
        svg.rect(110, 275, 10, 10, kClassColors[1]);
        svg.text(125, 284, "class 1", 10);
        write_text_file(dir / ("hist_feature_" + std::to_string(j) + ".svg"), svg.str());
    }

    out << "explained " << data.size() << " samples; wrote " << (dir / "ranking.csv").string()
        << " and " << per_sample << " per-sample tables\n";
    for (std::size_t r = 0; r < std::min<std::size_t>(10, data.dim()); ++r) {
        const std::size_t j = ranking.order[r];
        out << "  rank " << (r + 1) << ": feature " << j
            << " mean_importance=" << fixed(ranking.mean_importance[j], 6);
        if (both_classes) {
            out << " input_smd=" << fixed(input_smd[j], 3)
                << " explanation_smd=" << fixed(expl_smd[j], 3);
        }
        out << "\n";
    }
}

// ---------------------------------------------------------------- select

struct SelectArgs {
    std::string ranking;
    double fraction = 0.1;
    std::string out;
};

void run_select(const SelectArgs& a, const CLI::App& sub, std::ostream& out) {
    const ImportanceRanking ranking = read_ranking_csv(a.ranking);
    const auto picked = select_top(ranking, a.fraction);
    write_text_file(a.out, index_list_to_text(picked, provenance(sub)));
    out << "selected " << picked.size() << " of " << ranking.order.size() << " features -> "
        << a.out << "\n";
}

// ---------------------------------------------------------------- regress

struct RegressArgs {
    std::string data;
    std::vector<std::string> targets;
    std::string subset;
    std::string out_dir;
    NestedCvOptions cv;
};

void run_regress(RegressArgs a, const CLI::App& sub, std::ostream& out) {
    const LabeledDataset data = read_dataset_csv(a.data);
    data.validate();
    if (data.targets.empty()) throw InputError(a.data + ": dataset has no target_ columns");
    std::vector<std::string> targets = a.targets;
    if (targets.empty()) {
        for (const auto& [name, v] : data.targets) targets.push_back(name);
    }
    for (const auto& t : targets) {
        if (!data.targets.count(t)) throw InputError(a.data + ": unknown target '" + t + "'");
    }
    std::optional<std::vector<std::size_t>> subset;
    if (!a.subset.empty()) subset = read_index_list(a.subset);

    struct Condition {
        std::string name;
        std::optional<std::vector<std::size_t>> features;
    };
    std::vector<Condition> conditions{{"100%", std::nullopt}};
    if (subset) conditions.push_back({"selected", subset});

    const std::string prov = provenance(sub);
    std::string folds = comment_block(prov) +
                        "target,condition,fold,features,lambda,n_test,mse,cor,cor_degenerate\n";
    std::map<std::pair<std::string, std::string>, CvReport> reports;
    for (const auto& target : targets) {
        for (const auto& cond : conditions) {
            const CvReport rep = nested_cv(data, target, cond.features, a.cv);
            for (std::size_t f = 0; f < rep.fold_mse.size(); ++f) {
                folds += target + "," + cond.name + "," + std::to_string(f) + "," +
                         std::to_string(rep.feature_count) + "," +
                         format_double(rep.chosen_lambdas[f]) + "," +
                         std::to_string(rep.fold_sizes[f]) + "," + format_double(rep.fold_mse[f]) +
                         "," + format_double(rep.fold_cor[f]) + "," +
                         (rep.fold_cor_degenerate[f] ? "1" : "0") + "\n";
            }
            folds += target + "," + cond.name + ",mean," + std::to_string(rep.feature_count) +
                     ",,," + format_double(rep.mean_mse) + "," + format_double(rep.mean_cor) + ",\n";
            reports.emplace(std::make_pair(target, cond.name), rep);
        }
    }
    const fs::path dir(a.out_dir);
    write_text_file(dir / "folds.csv", folds);

    std::ostringstream table;
    table << comment_block(prov);
    char line[256];
    std::snprintf(line, sizeof(line), "%-16s %-8s", "target", "metric");
    table << line;
    for (const auto& c : conditions) {
        std::snprintf(line, sizeof(line), " %14s", c.name.c_str());
        table << line;
    }
    table << "\n";
    std::snprintf(line, sizeof(line), "%-16s %-8s", "", "#features");
    table << line;
    for (const auto& c : conditions) {
        std::snprintf(line, sizeof(line), " %14zu", reports.at({targets.front(), c.name}).feature_count);
        table << line;
    }
    table << "\n";
    for (const auto& target : targets) {
        for (const char* metric : {"MSE", "Cor"}) {
            std::snprintf(line, sizeof(line), "%-16s %-8s",
                          std::string(metric) == "MSE" ? target.c_str() : "", metric);
            table << line;
            for (const auto& c : conditions) {
                const CvReport& rep = reports.at({target, c.name});
                const double v = std::string(metric) == "MSE" ? rep.mean_mse : rep.mean_cor;
                std::snprintf(line, sizeof(line), " %14.4f", v);
                table << line;
            }
            table << "\n";
        }
    }
    table << "\nchosen lambda per outer fold:\n";
    for (const auto& target : targets) {
        for (const auto& c : conditions) {
            table << "  " << target << " / " << c.name << ":";
            for (double l : reports.at({target, c.name}).chosen_lambdas) table << " " << format_double(l);
            table << "\n";
        }
    }
    write_text_file(dir / "summary.txt", table.str());
    out << table.str().substr(comment_block(prov).size());
}

// ---------------------------------------------------------------- plot-boundary

struct PlotArgs {
    std::string model;
    std::string data;
    std::string out;
    std::size_t samples = 400;
    std::size_t sample_index = 0;
};

struct Bounds {
    double min0 = std::numeric_limits<double>::infinity();
    double max0 = -std::numeric_limits<double>::infinity();
    double min1 = std::numeric_limits<double>::infinity();
    double max1 = -std::numeric_limits<double>::infinity();

    void add(std::span<const double> p) {
        min0 = std::min(min0, p[0]);
        max0 = std::max(max0, p[0]);
        min1 = std::min(min1, p[1]);
        max1 = std::max(max1, p[1]);
    }
    Bounds padded(double frac) const {
        const double p0 = std::max(1e-9, (max0 - min0) * frac);
        const double p1 = std::max(1e-9, (max1 - min1) * frac);
        return {min0 - p0, max0 + p0, min1 - p1, max1 + p1};
    }
};

void draw_panel(SvgDocument& svg, double ox, double oy, double size, const Bounds& b,
                const std::vector<Vector>& points, std::span<const int> labels,
                const std::vector<Vector>& curve, std::span<const double> x,
                std::span<const double> x_p, const std::string& title) {
    const AxisMap mx{b.min0, b.max0, ox, ox + size};
    const AxisMap my{b.min1, b.max1, oy + size, oy};
    svg.rect(ox, oy, size, size, "none", "#444444");
    svg.text(ox + size / 2, oy - 8, title, 13, "middle");
    svg.begin_clip(ox, oy, size, size);
    for (std::size_t i = 0; i < points.size(); ++i) {
        svg.circle(mx(points[i][0]), my(points[i][1]), 2.0, kClassColors[labels[i] == 1 ? 1 : 0], 0.55);
    }
    Vector cx, cy;
    for (const auto& p : curve) {
        cx.push_back(mx(p[0]));
        cy.push_back(my(p[1]));
    }
    if (!cx.empty()) svg.polyline(cx, cy, "#000000", 2.0);
    svg.line(mx(x[0]), my(x[1]), mx(x_p[0]), my(x_p[1]), "#2ca02c", 1.5, true);
    svg.circle(mx(x[0]), my(x[1]), 4.5, "#2ca02c");
    svg.circle(mx(x_p[0]), my(x_p[1]), 4.5, "#ff7f0e");
    svg.end_clip();
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.3g", b.min0);
    svg.text(ox, oy + size + 14, buf, 10);
    std::snprintf(buf, sizeof(buf), "%.3g", b.max0);
    svg.text(ox + size, oy + size + 14, buf, 10, "end");
    std::snprintf(buf, sizeof(buf), "%.3g", b.min1);
    svg.text(ox - 4, oy + size, buf, 10, "end");
    std::snprintf(buf, sizeof(buf), "%.3g", b.max1);
    svg.text(ox - 4, oy + 10, buf, 10, "end");
}

void run_plot_boundary(const PlotArgs& a, const CLI::App& sub, std::ostream& out) {
    const InvNetModel model = load_model(a.model);
    const LabeledDataset data = read_dataset_csv(a.data);
    check_dims(model, data);
    if (data.dim() != 2) {
        throw DimensionError("plot-boundary supports 2-D data only, dataset has " +
                             std::to_string(data.dim()) + " features");
    }
    if (data.size() == 0) throw InputError(a.data + ": dataset has no rows");
    if (a.sample_index >= data.size()) throw InputError("--sample-index out of range");

    std::vector<Vector> inputs, features;
    Bounds in_b, feat_b;
    std::size_t correct_side = 0;
    for (std::size_t i = 0; i < data.size(); ++i) {
        inputs.emplace_back(data.sample(i).begin(), data.sample(i).end());
        features.push_back(transform(model, inputs.back()));
        in_b.add(inputs.back());
        feat_b.add(features.back());
        if (predict_class(model, inputs.back()) == data.labels[i]) ++correct_side;
    }
    const Bounds in_box = in_b.padded(0.1);
    const Bounds feat_box = feat_b.padded(0.1);
    const FeatureBox fbox{feat_box.min0, feat_box.max0, feat_box.min1, feat_box.max1};

    const LinearBoundary boundary = feature_boundary(model);
    const auto line = boundary_segment(boundary, a.samples, fbox);
    const auto curve = invert_boundary_curve(model, a.samples, fbox);
    double max_residual = 0.0;
    for (const auto& p : curve) max_residual = std::max(max_residual, std::abs(logit(model, p)));

    const Explanation e = explain_network(model, inputs[a.sample_index]);
    const Vector z = features[a.sample_index];
    const Vector z_p = project_to_boundary(boundary, z);

    const double side_rate = static_cast<double>(correct_side) / static_cast<double>(data.size());
    const std::string prov = provenance(sub) + "\nside_rate=" + format_double(side_rate) +
                             "\nmax_curve_logit=" + format_double(max_residual);
    SvgDocument svg(960, 520);
    svg.comment(prov);
    draw_panel(svg, 50, 50, 400, feat_box, features, data.labels, line, z, z_p,
               "feature domain: X, X_p and boundary line");
    draw_panel(svg, 530, 50, 400, in_box, inputs, data.labels, curve, e.x, e.x_p,
               "input domain: x, x_p and inverted boundary");
    svg.text(50, 500, "class 0", 11);
    svg.circle(42, 496, 4, kClassColors[0]);
    svg.text(120, 500, "class 1", 11);
    svg.circle(112, 496, 4, kClassColors[1]);
    svg.text(190, 500, "sample", 11);
    svg.circle(182, 496, 4, "#2ca02c");
    svg.text(260, 500, "projection", 11);
    svg.circle(252, 496, 4, "#ff7f0e");
    write_text_file(a.out, svg.str());

    out << "wrote " << a.out << "\n";
    out << "boundary side agreement: " << fixed(side_rate) << " (" << correct_side << "/"
        << data.size() << ")\n";
    out << "inverted boundary points: " << curve.size()
        << ", max |logit| = " << format_double(max_residual) << "\n";
}

// ---------------------------------------------------------------- ingest

struct IngestArgs {
    std::string input_dir;
    std::string out;
    std::string labels;
    std::size_t copies = 0;
    std::size_t block_len = 10;
    std::uint64_t seed = 0;
};

void run_ingest(const IngestArgs& a, const CLI::App& sub, std::ostream& out,
                std::ostream& err) {
    if (!fs::is_directory(a.input_dir)) throw IoError("'" + a.input_dir + "' is not a directory");
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(a.input_dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".csv") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    if (files.empty()) throw InputError("'" + a.input_dir + "' contains no .csv time-series files");

    std::map<std::string, std::pair<int, std::map<std::string, double>>> label_map;
    std::vector<std::string> target_names;
    if (!a.labels.empty()) {
        const CsvTable t = read_csv(a.labels);
        if (t.header.size() < 2 || t.header[0] != "subject_id" || t.header[1] != "label") {
            throw ParseError(t.source, 1, 1, "labels header must start with subject_id,label");
        }
        for (std::size_t c = 2; c < t.header.size(); ++c) {
            if (t.header[c].rfind(kTargetPrefix, 0) != 0) {
                throw ParseError(t.source, 1, c + 1, "extra label columns must be target_<name>");
            }
            target_names.push_back(t.header[c].substr(std::string(kTargetPrefix).size()));
        }
        for (std::size_t i = 0; i < t.rows.size(); ++i) {
            const long long label = parse_int_field(t, i, 1);
            if (label != 0 && label != 1) {
                throw ParseError(t.source, t.line_numbers[i], 2, "label must be 0 or 1");
            }
            std::map<std::string, double> targets;
            for (std::size_t c = 2; c < t.header.size(); ++c) {
                targets[target_names[c - 2]] = parse_double_field(t, i, c);
            }
            label_map[t.rows[i][0]] = {static_cast<int>(label), std::move(targets)};
        }
    } else {
        err << "warning: no --labels file; every subject gets label 0\n";
    }

    SeededRng rng(a.seed);
    LabeledDataset data;
    std::vector<std::string> roi_names;
    std::vector<Vector> rows;
    for (const auto& file : files) {
        const TimeSeriesTable ts = read_timeseries_csv(file);
        if (roi_names.empty()) {
            roi_names = ts.roi_names;
            if (roi_names.size() < 2) throw InputError(file.string() + ": need at least 2 ROIs");
        } else if (ts.roi_names != roi_names) {
            throw InputError(file.string() + ": ROI columns differ from " + files.front().string());
        }
        const std::string subject = file.stem().string();
        int label = 0;
        std::map<std::string, double> targets;
        if (!a.labels.empty()) {
            const auto it = label_map.find(subject);
            if (it == label_map.end()) throw InputError(a.labels + ": no label for subject '" + subject + "'");
            label = it->second.first;
            targets = it->second.second;
        }
        std::vector<std::pair<std::string, ConnectivityVector>> vectors;
        try {
            if (a.copies == 0) {
                vectors.emplace_back(subject, vectorize_upper(pearson_connectivity(ts)));
            } else {
                SeededRng subject_rng = rng.child(subject);
                auto boot = bootstrap_connectivity(ts, a.copies, a.block_len, subject_rng);
                for (std::size_t c = 0; c < boot.size(); ++c) {
                    vectors.emplace_back(subject + "#" + std::to_string(c), std::move(boot[c]));
                }
            }
        } catch (const DegenerateError& e) {
            throw DegenerateError(file.string() + ": " + e.what());
        }
        for (auto& [id, v] : vectors) {
            data.ids.push_back(id);
            data.labels.push_back(label);
            for (const auto& name : target_names) data.targets[name].push_back(targets.at(name));
            rows.push_back(std::move(v.values));
        }
    }
    const std::size_t d = rows.front().size();
    data.features = Matrix(rows.size(), d);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        std::copy(rows[i].begin(), rows[i].end(), data.features.row(i).begin());
    }
    for (std::size_t k = 0; k < d; ++k) {
        const auto [i, j] = upper_pair(k, roi_names.size());
        data.feature_names.push_back(roi_names[i] + "~" + roi_names[j]);
    }
    const std::string prov =
        provenance(sub) + "\nfeature k is the Pearson correlation of ROI pair (i, j), i < j, in" +
        "\nrow-major upper-triangle order: (0,1), (0,2), ..., (0,R-1), (1,2), ..., (R-2,R-1)" +
        "\nrois=" + std::to_string(roi_names.size()) + " features=" + std::to_string(d);
    write_text_file(a.out, dataset_to_csv(data, prov));
    out << "ingested " << files.size() << " subjects, " << roi_names.size() << " ROIs -> "
        << data.size() << " rows of " << d << " features: " << a.out << "\n";
}

// ---------------------------------------------------------------- eval

struct EvalArgs {
    std::string model;
    std::string data;
    std::string out;
};

void run_eval(const EvalArgs& a, const CLI::App& sub, std::ostream& out) {
    const InvNetModel model = load_model(a.model);
    const LabeledDataset data = read_dataset_csv(a.data);
    check_dims(model, data);
    std::vector<int> predicted(data.size());
    for (std::size_t i = 0; i < data.size(); ++i) predicted[i] = predict_class(model, data.sample(i));
    const MetricsReport m = classification_metrics(predicted, data.labels);
    std::string text = "metric,value\n";
    text += "accuracy," + format_double(m.accuracy) + "\n";
    text += "precision," + format_double(m.precision) + "\n";
    text += "recall," + format_double(m.recall) + "\n";
    text += "f1," + format_double(m.f1) + "\n";
    text += "true_positive," + std::to_string(m.true_positive) + "\n";
    text += "false_positive," + std::to_string(m.false_positive) + "\n";
    text += "true_negative," + std::to_string(m.true_negative) + "\n";
    text += "false_negative," + std::to_string(m.false_negative) + "\n";
    if (!a.out.empty()) write_text_file(a.out, comment_block(provenance(sub)) + text);
    out << "accuracy  " << fixed(m.accuracy) << "\nprecision " << fixed(m.precision)
        << (m.precision_degenerate ? " (no positive predictions)" : "") << "\nrecall    "
        << fixed(m.recall) << (m.recall_degenerate ? " (no positive labels)" : "") << "\nf1        "
        << fixed(m.f1) << "\n";
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Invertible coupling-network classifier with decision-boundary explanations"};
    app.require_subcommand(1);
    app.set_config("--config", "", "TOML/INI file of option values; command-line flags win");
    int format_version = kConfigFormatVersion;
    app.add_option("--format_version", format_version, "Config format version")
        ->check(CLI::Range(kConfigFormatVersion, kConfigFormatVersion));

    SimulateArgs sim;
    auto* simulate = app.add_subcommand("simulate", "Generate a synthetic labeled dataset");
    simulate->add_option("--kind", sim.kind, "two-moons | diagonal | axis | sparse")
        ->required()
        ->check(CLI::IsMember({"two-moons", "diagonal", "axis", "sparse"}));
    simulate->add_option("--n", sim.n, "Number of samples")->capture_default_str();
    simulate->add_option("--noise", sim.noise, "Noise sd (two-moons, sparse)")->capture_default_str();
    simulate->add_option("--separation", sim.separation, "Cluster separation (diagonal, axis)")
        ->capture_default_str();
    simulate->add_option("--spread", sim.spread, "Cluster sd along the boundary (diagonal)")
        ->capture_default_str();
    simulate->add_option("--d", sim.d, "Feature count (sparse)")->capture_default_str();
    simulate->add_option("--k", sim.k, "Informative feature count (sparse)")->capture_default_str();
    simulate->add_option("--seed", sim.seed, "Random seed")->capture_default_str();
    simulate->add_option("--out", sim.out, "Output dataset CSV")->required();

    TrainArgs tr;
    auto* train_cmd = app.add_subcommand("train", "Train an invertible network classifier");
    train_cmd->add_option("--data", tr.data, "Dataset CSV")->required()->check(CLI::ExistingFile);
    train_cmd->add_option("--model-out", tr.model_out, "Model JSON to write")->required();
    train_cmd->add_option("--loss-out", tr.loss_out, "Per-epoch loss CSV (default <model-out>.loss.csv)");
    train_cmd->add_option("--lr", tr.config.learning_rate, "SGD learning rate")->capture_default_str();
    train_cmd->add_option("--epochs", tr.config.epochs, "Epochs")->capture_default_str();
    train_cmd->add_option("--batch-size", tr.config.batch_size, "Minibatch size")->capture_default_str();
    train_cmd->add_option("--hidden", tr.config.hidden_dim, "Subnet hidden width")->capture_default_str();
    train_cmd->add_option("--blocks", tr.config.num_blocks, "Coupling blocks")->capture_default_str();
    train_cmd->add_option("--seed", tr.config.seed, "Random seed")->capture_default_str();
    train_cmd->add_option("--holdout", tr.holdout, "Fraction of rows held out for accuracy")
        ->capture_default_str();

    ExplainArgs ex;
    auto* explain = app.add_subcommand("explain", "Explanations and feature-importance ranking");
    explain->add_option("--model", ex.model, "Model JSON")->required()->check(CLI::ExistingFile);
    explain->add_option("--data", ex.data, "Dataset CSV")->required()->check(CLI::ExistingFile);
    explain->add_option("--out-dir", ex.out_dir, "Output directory")->required();
    explain->add_option("--hist-features", ex.hist_features, "Top features to histogram")
        ->capture_default_str();
    explain->add_option("--bins", ex.bins, "Histogram bins")->capture_default_str()->check(CLI::PositiveNumber);
    explain->add_option("--max-samples", ex.max_samples, "Per-sample tables to write (0 = all)")
        ->capture_default_str();
    explain->add_option("--threads", ex.threads, "Worker threads")->capture_default_str();

    SelectArgs sel;
    auto* select = app.add_subcommand("select", "Select the top fraction of ranked features");
    select->add_option("--ranking", sel.ranking, "ranking.csv from explain")->required()->check(CLI::ExistingFile);
    select->add_option("--fraction", sel.fraction, "Fraction in (0, 1]")->capture_default_str();
    select->add_option("--out", sel.out, "Output index list")->required();

    RegressArgs rg;
    auto* regress = app.add_subcommand("regress", "Nested-CV linear SVR on all vs selected features");
    regress->add_option("--data", rg.data, "Dataset CSV with target_ columns")->required()->check(CLI::ExistingFile);
    regress->add_option("--target", rg.targets, "Target name(s) (default: all)");
    regress->add_option("--subset", rg.subset, "Selected feature index list")->check(CLI::ExistingFile);
    regress->add_option("--out-dir", rg.out_dir, "Output directory")->required();
    regress->add_option("--folds", rg.cv.folds, "Outer folds")->capture_default_str();
    regress->add_option("--inner-folds", rg.cv.inner_folds, "Inner folds")->capture_default_str();
    regress->add_option("--lambdas", rg.cv.lambda_grid, "Penalty grid")->capture_default_str()->delimiter(',');
    regress->add_option("--epsilon", rg.cv.svr.epsilon, "Tube half-width (standardized target units)")
        ->capture_default_str();
    regress->add_option("--iterations", rg.cv.svr.iterations, "Subgradient iterations per fit")
        ->capture_default_str();
    regress->add_option("--step", rg.cv.svr.step, "Initial subgradient step")->capture_default_str();
    regress->add_option("--seed", rg.cv.seed, "Random seed")->capture_default_str();
    regress->add_option("--threads", rg.cv.threads, "Outer folds run concurrently")->capture_default_str();

    PlotArgs pl;
    auto* plot = app.add_subcommand("plot-boundary", "Two-panel SVG of the boundary in both domains");
    plot->add_option("--model", pl.model, "Model JSON")->required()->check(CLI::ExistingFile);
    plot->add_option("--data", pl.data, "2-D dataset CSV")->required()->check(CLI::ExistingFile);
    plot->add_option("--out", pl.out, "Output SVG")->required();
    plot->add_option("--samples", pl.samples, "Points along the boundary")->capture_default_str();
    plot->add_option("--sample-index", pl.sample_index, "Row whose projection is drawn")->capture_default_str();

    IngestArgs in;
    auto* ingest = app.add_subcommand("ingest", "ROI time series -> connectivity feature CSV");
    ingest->add_option("--input-dir", in.input_dir, "Directory of per-subject time-series CSVs")->required();
    ingest->add_option("--out", in.out, "Output dataset CSV")->required();
    ingest->add_option("--labels", in.labels, "subject_id,label[,target_*] CSV")->check(CLI::ExistingFile);
    ingest->add_option("--copies", in.copies, "Bootstrap copies per subject (0 = none)")->capture_default_str();
    ingest->add_option("--block-len", in.block_len, "Bootstrap block length")->capture_default_str();
    ingest->add_option("--seed", in.seed, "Random seed")->capture_default_str();

    EvalArgs ev;
    auto* eval = app.add_subcommand("eval", "Classification metrics of a model on a dataset");
    eval->add_option("--model", ev.model, "Model JSON")->required()->check(CLI::ExistingFile);
    eval->add_option("--data", ev.data, "Dataset CSV")->required()->check(CLI::ExistingFile);
    eval->add_option("--out", ev.out, "Optional metrics CSV");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitInput;
    }

    try {
        if (app.get_option("--config")->count() > 0 &&
            app.get_option("--format_version")->count() == 0) {
            throw InputError("config file must set format_version = " +
                             std::to_string(kConfigFormatVersion));
        }
        if (*simulate) run_simulate(sim, *simulate, out);
        if (*train_cmd) run_train(tr, *train_cmd, out);
        if (*explain) run_explain(ex, *explain, out);
        if (*select) run_select(sel, *select, out);
        if (*regress) run_regress(rg, *regress, out);
        if (*plot) run_plot_boundary(pl, *plot, out);
        if (*ingest) run_ingest(in, *ingest, out, err);
        if (*eval) run_eval(ev, *eval, out);
    } catch (const IoError& e) {
        err << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const DegenerateError& e) {
        err << "error: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kExitInput;
    }
    return kExitOk;
}

int run_cli(int argc, char** argv) { return run_cli(argc, argv, std::cout, std::cerr); }

}  // namespace invnet
