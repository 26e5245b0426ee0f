// faircompass command line: `serve` runs the HTTP API, `audit` runs one
// non-interactive audit and writes the markdown report.
//
// audit exit codes: 0 definition satisfied, 1 violated, 2 error.

#include <CLI11.hpp>

#include <csignal>
#include <fstream>
#include <iostream>
#include <sstream>

#include "faircompass/compass.hpp"
#include "faircompass/error.hpp"
#include "faircompass/serialize.hpp"
#include "faircompass/service.hpp"
#include "faircompass/session.hpp"
#include "faircompass/suggest.hpp"
#include "faircompass/text.hpp"

namespace fc = faircompass;

namespace {

constexpr int kSatisfied = 0;
constexpr int kViolated = 1;
constexpr int kError = 2;

fc::AuditService* g_service = nullptr;

extern "C" void on_signal(int) {
    if (g_service) g_service->stop();
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw fc::Error(fc::ErrorCode::InvalidArgument, "cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << content;
    if (!out) throw fc::Error(fc::ErrorCode::InvalidArgument, "cannot write " + path);
}

std::pair<std::string, std::string> split_once(const std::string& s, char sep, const char* what) {
    const auto pos = s.find(sep);
    if (pos == std::string::npos || pos == 0) {
        throw fc::Error(fc::ErrorCode::InvalidArgument, std::string("expected ") + what + ", got '" + s + "'");
    }
    return {s.substr(0, pos), s.substr(pos + 1)};
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep)) out.push_back(cur);
    return out;
}

double number(const std::string& s) {
    const auto v = fc::parse_number(s);
    if (!v) throw fc::Error(fc::ErrorCode::InvalidArgument, "'" + s + "' is not a number");
    return *v;
}

struct AuditArgs {
    std::string data;
    std::string label = "label";
    std::string pred = "prediction";
    std::string score;
    std::vector<std::string> numeric;
    std::vector<std::string> class_map;
    std::string missing = "?";
    std::vector<std::string> groups;
    std::vector<std::string> points;
    std::vector<std::string> bins;
    std::string definition;
    std::optional<int> favourable;
    std::string sensitive;
    std::vector<std::string> legitimate;
    double threshold = 0.1;
    size_t min_stratum = 20;
    std::uint64_t seed = 42;
    bool suggest = false;
    size_t k = 10;
    std::string tree;
    std::string out;
    std::string json_out;
};

int run_audit(const AuditArgs& a) {
    fc::IngestConfig ingest;
    ingest.label_column = a.label;
    ingest.prediction_column = a.pred;
    if (!a.score.empty()) ingest.score_column = a.score;
    ingest.missing_token = a.missing;
    for (const auto& c : a.numeric) {
        if (std::find(ingest.numeric_columns.begin(), ingest.numeric_columns.end(), c) == ingest.numeric_columns.end()) {
            ingest.numeric_columns.push_back(c);
        }
    }
    for (const auto& entry : a.class_map) {
        // the value is the text after the last '=' so tokens like "<=50K" survive
        const auto pos = entry.rfind('=');
        if (pos == std::string::npos || pos == 0) {
            throw fc::Error(fc::ErrorCode::InvalidArgument, "expected TOKEN=0|1 in --class-map, got '" + entry + "'");
        }
        ingest.class_aliases[entry.substr(0, pos)] = static_cast<int>(number(entry.substr(pos + 1)));
    }
    // binned features must be numeric
    for (const auto* list : {&a.points, &a.bins}) {
        for (const auto& spec : *list) {
            const auto feature = split_once(spec, '=', "FEATURE=...").first;
            if (std::find(ingest.numeric_columns.begin(), ingest.numeric_columns.end(), feature) ==
                ingest.numeric_columns.end()) {
                ingest.numeric_columns.push_back(feature);
            }
        }
    }

    const auto dataset = fc::load_dataset(read_file(a.data), ingest);
    std::shared_ptr<const fc::DecisionTree> tree;
    if (a.tree.empty()) {
        tree = std::shared_ptr<const fc::DecisionTree>(&fc::default_tree(), [](const fc::DecisionTree*) {});
    } else {
        tree = std::make_shared<const fc::DecisionTree>(fc::load_tree(read_file(a.tree)));
    }
    const auto& definition = tree->definition(a.definition);

    fc::AuditSession session("audit", dataset, tree);
    using fc::Stage;
    for (const auto& spec : a.bins) {
        const auto [feature, count] = split_once(spec, '=', "FEATURE=COUNT in --bins");
        session.bin_feature(Stage::Exploration, feature, fc::EqualWidth{static_cast<size_t>(number(count))});
    }
    for (const auto& spec : a.points) {
        const auto [feature, list] = split_once(spec, '=', "FEATURE=P1,P2 in --points");
        std::vector<double> pts;
        for (const auto& p : split(list, ',')) pts.push_back(number(p));
        session.bin_feature(Stage::Exploration, feature,
                            fc::ExplicitEdges{fc::point_bin_edges(session.base_dataset(), feature, pts)});
    }

    std::vector<fc::FeatureSelection> selections;
    for (const auto& g : a.groups) {
        const auto pos = g.find('=');
        if (pos == std::string::npos) {
            selections.push_back({g, {}});
        } else {
            selections.push_back({g.substr(0, pos), split(g.substr(pos + 1), '|')});
        }
    }
    if (!selections.empty()) session.generate_groups(Stage::Exploration, selections);

    if (a.suggest) {
        fc::SuggestOptions opts;
        opts.seed = a.seed;
        opts.k = a.k;
        nlohmann::json top = nlohmann::json::array();
        const auto suggestions = fc::suggest_subgroups(session.dataset(), opts);
        for (size_t i = 0; i < suggestions.size() && i < 5; ++i) {
            top.push_back({{"subgroup", suggestions[i].subgroup.display_name},
                           {"size", suggestions[i].subgroup.size},
                           {"notability", suggestions[i].notability}});
        }
        session.log_stage(Stage::Exploration, "suggest_subgroups", {{"seed", a.seed}, {"k", a.k}, {"top", top}});
    }

    for (const auto& step : fc::find_path_to_definition(*tree, definition.id)) {
        session.navigate(Stage::Guidance, step.node_id, step.answer);
    }

    fc::EvaluationInputs inputs;
    inputs.favourable_class = a.favourable;
    if (!a.sensitive.empty()) inputs.sensitive_attribute = a.sensitive;
    if (!a.legitimate.empty()) inputs.legitimate_attributes = a.legitimate;
    inputs.threshold = a.threshold;
    inputs.min_stratum_size = a.min_stratum;
    const auto& evaluation = session.evaluate(Stage::InformedAnalysis, inputs);

    const auto report = fc::export_session(session);
    if (a.out.empty() || a.out == "-") {
        std::cout << report.markdown;
    } else {
        write_file(a.out, report.markdown);
    }
    if (!a.json_out.empty()) write_file(a.json_out, report.structured.dump(2) + "\n");
    std::cerr << definition.name << ": " << (evaluation.satisfied() ? "satisfied" : "violated") << "\n";
    return evaluation.satisfied() ? kSatisfied : kViolated;
}

int run_serve(const std::string& config_path) {
    fc::AuditService service(fc::load_service_config(config_path));
    g_service = &service;
    std::signal(SIGINT, on_signal);
    std::signal(SIGTERM, on_signal);
    std::cerr << "faircompass listening on " << service.config().host << ":" << service.config().port << "\n";
    const bool ok = service.serve();
    g_service = nullptr;
    if (!ok) {
        std::cerr << "error: could not listen on " << service.config().host << ":" << service.config().port << "\n";
        return kError;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"faircompass: subgroup fairness auditing"};
    app.require_subcommand(1);

    std::string config_path;
    auto* serve = app.add_subcommand("serve", "Run the HTTP API");
    serve->add_option("--config", config_path, "Service config (JSON)")->required()->check(CLI::ExistingFile);

    AuditArgs a;
    auto* audit = app.add_subcommand("audit", "Run one audit and write a markdown report");
    audit->add_option("--data", a.data, "CSV file")->required()->check(CLI::ExistingFile);
    audit->add_option("--label", a.label, "Ground-truth column")->capture_default_str();
    audit->add_option("--pred", a.pred, "Prediction column")->capture_default_str();
    audit->add_option("--score", a.score, "Optional score column");
    audit->add_option("--numeric", a.numeric, "Numeric feature columns")->delimiter(',');
    audit->add_option("--class-map", a.class_map, "Label tokens, e.g. '<=50K=1,>50K=0'")->delimiter(',');
    audit->add_option("--missing", a.missing, "Missing-value token")->capture_default_str();
    audit->add_option("--groups", a.groups, "Features to intersect, FEATURE or FEATURE=V1|V2")->delimiter(',');
    audit->add_option("--points", a.points, "Isolate integer values of a numeric feature, FEATURE=P1,P2");
    audit->add_option("--bins", a.bins, "Equal-width binning, FEATURE=COUNT");
    audit->add_option("--definition", a.definition, "Fairness definition id")->required();
    audit->add_option("--favourable", a.favourable, "Favourable predicted class (0 or 1)");
    audit->add_option("--sensitive", a.sensitive, "Sensitive attribute");
    audit->add_option("--legitimate", a.legitimate, "Legitimate attributes")->delimiter(',');
    audit->add_option("--threshold", a.threshold, "Parity threshold")->capture_default_str();
    audit->add_option("--min-stratum", a.min_stratum, "Minimum rows per stratum")->capture_default_str();
    audit->add_option("--seed", a.seed, "Seed for subgroup suggestions")->capture_default_str();
    audit->add_flag("--suggest", a.suggest, "Record clustering-based subgroup suggestions");
    audit->add_option("--k", a.k, "Clusters for suggestions")->capture_default_str();
    audit->add_option("--tree", a.tree, "Decision tree JSON (defaults to the built-in tree)");
    audit->add_option("--out", a.out, "Markdown report path ('-' for stdout)");
    audit->add_option("--json", a.json_out, "Structured report path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kError;
    }

    try {
        if (*serve) return run_serve(config_path);
        return run_audit(a);
    } catch (const fc::IngestError& e) {
        std::cerr << "error: " << fc::to_string(e.code()) << ": " << e.what() << "\n";
        return kError;
    } catch (const fc::Error& e) {
        std::cerr << "error: " << fc::to_string(e.code()) << ": " << e.what() << "\n";
        return kError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kError;
    }
}
