#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "faircompass/metrics.hpp"

namespace faircompass {

enum class InputKind { favourable_class, sensitive_attribute, legitimate_attributes, rate_kind };

std::string_view to_string(InputKind kind) noexcept;

// Which metric-engine operation a definition runs.
//   demographic_parity              favourable-rate parity over the active subgroups
//   conditional_statistical_parity  demographic parity within strata of legitimate attributes
//   rate_parity                     parity of each listed rate; all must hold (equalized odds = tpr + fpr)
struct EvaluatorBinding {
    enum class Kind { demographic_parity, conditional_statistical_parity, rate_parity };

    Kind kind = Kind::demographic_parity;
    std::vector<RateKind> rates;  // rate_parity only; empty means the rate_kind input chooses

    std::set<InputKind> required_inputs() const;
    bool operator==(const EvaluatorBinding&) const = default;
};

struct FairnessDefinition {
    std::string id;
    std::string name;
    std::string description;  // markdown
    std::set<InputKind> required_inputs;
    EvaluatorBinding evaluator;

    bool operator==(const FairnessDefinition&) const = default;
};

enum class NodeKind { question, leaf };

struct Answer {
    std::string label;
    std::string target;

    bool operator==(const Answer&) const = default;
};

struct DecisionNode {
    std::string id;
    NodeKind kind = NodeKind::question;
    std::string title;  // short name shown on the path, e.g. "Equal base rates"
    std::string text;
    std::vector<Answer> answers;  // questions only
    std::string definition_id;    // leaves only

    bool operator==(const DecisionNode&) const = default;
};

struct DecisionTree {
    std::string version;
    std::string root;
    std::map<std::string, DecisionNode> nodes;
    std::map<std::string, FairnessDefinition> definitions;

    const DecisionNode& node(std::string_view id) const;  // throws UnknownNode
    const FairnessDefinition& definition(std::string_view id) const;  // throws UnknownDefinition
};

// Parses and validates a tree document (JSON). Structural violations raise
// CycleDetected, DanglingAnswer, UnknownDefinition, MultipleRoots,
// UnreachableNode or MalformedTree, naming the node involved.
DecisionTree load_tree(std::string_view document);
std::string tree_to_json(const DecisionTree& tree);

// The tree shipped with the library.
std::string_view default_tree_document();
const DecisionTree& default_tree();

struct NodeDescription {
    std::string id;
    NodeKind kind = NodeKind::question;
    std::string title;
    std::string text;
    std::vector<std::string> answer_labels;
    std::optional<FairnessDefinition> definition;  // leaves
};

NodeDescription describe_node(const DecisionTree& tree, std::string_view node_id);

struct PathStep {
    std::string node_id;
    std::string answer;

    bool operator==(const PathStep&) const = default;
};

// First root-to-leaf answer sequence (depth-first, answers in file order)
// ending at a leaf bound to `definition_id`.
std::vector<PathStep> find_path_to_definition(const DecisionTree& tree, std::string_view definition_id);

// Root-anchored walk through the tree with stack-style backtracking.
class TreeNavigator {
public:
    explicit TreeNavigator(std::shared_ptr<const DecisionTree> tree);

    const DecisionTree& tree() const noexcept { return *tree_; }
    const std::vector<PathStep>& path() const noexcept { return path_; }
    // Node awaiting an answer (or the reached leaf).
    const std::string& frontier() const noexcept { return frontier_; }
    std::optional<std::string> selected_definition() const;

    // Answers the frontier question; returns the next node id.
    const std::string& navigate(std::string_view node_id, std::string_view answer);
    void backtrack(size_t steps = 1);

private:
    std::shared_ptr<const DecisionTree> tree_;
    std::vector<PathStep> path_;
    std::string frontier_;
};

struct EvaluationInputs {
    std::optional<int> favourable_class;
    std::optional<std::string> sensitive_attribute;
    std::optional<std::vector<std::string>> legitimate_attributes;
    std::optional<RateKind> rate_kind;
    double threshold = kDefaultParityThreshold;
    size_t min_stratum_size = kDefaultMinStratumSize;

    bool operator==(const EvaluationInputs&) const = default;
};

// Several rate parities that must all hold.
struct CompositeParity {
    std::vector<ParityAssessment> parts;
    bool satisfied = false;

    bool operator==(const CompositeParity&) const = default;
};

struct Evaluation {
    std::string definition_id;
    EvaluationInputs inputs;
    std::variant<ParityAssessment, StratifiedParity, CompositeParity> result;

    bool satisfied() const;
    bool operator==(const Evaluation&) const = default;
};

// Runs the definition's evaluator over the active subgroups. Conditional
// parity restricts the population to the union of the active subgroups.
Evaluation evaluate_definition(const FairnessDefinition& definition, const Dataset& dataset,
                               const std::vector<Subgroup>& active, const EvaluationInputs& inputs);

}  // namespace faircompass
