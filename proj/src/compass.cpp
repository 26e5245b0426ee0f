#include "faircompass/compass.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <nlohmann/json.hpp>

#include "default_tree_data.hpp"
#include "faircompass/error.hpp"

namespace faircompass {

using nlohmann::json;

namespace {

constexpr std::array<InputKind, 4> kAllInputs = {InputKind::favourable_class, InputKind::sensitive_attribute,
                                                 InputKind::legitimate_attributes, InputKind::rate_kind};

InputKind parse_input_kind(const std::string& text) {
    for (InputKind k : kAllInputs) {
        if (to_string(k) == text) return k;
    }
    throw Error(ErrorCode::MalformedTree, "unknown input '" + text + "'");
}

std::string_view to_string(EvaluatorBinding::Kind kind) {
    switch (kind) {
        case EvaluatorBinding::Kind::demographic_parity: return "demographic_parity";
        case EvaluatorBinding::Kind::conditional_statistical_parity: return "conditional_statistical_parity";
        case EvaluatorBinding::Kind::rate_parity: return "rate_parity";
    }
    return "unknown";
}

EvaluatorBinding::Kind parse_evaluator_kind(const std::string& text) {
    for (auto k : {EvaluatorBinding::Kind::demographic_parity, EvaluatorBinding::Kind::conditional_statistical_parity,
                   EvaluatorBinding::Kind::rate_parity}) {
        if (to_string(k) == text) return k;
    }
    throw Error(ErrorCode::MalformedTree, "unknown evaluator '" + text + "'");
}

const json& field(const json& obj, const char* key, const std::string& where) {
    if (!obj.is_object() || !obj.contains(key)) {
        throw Error(ErrorCode::MalformedTree, where + ": missing field '" + key + "'");
    }
    return obj.at(key);
}

std::string string_field(const json& obj, const char* key, const std::string& where) {
    const auto& v = field(obj, key, where);
    if (!v.is_string()) throw Error(ErrorCode::MalformedTree, where + ": field '" + key + "' must be a string");
    return v.get<std::string>();
}

FairnessDefinition parse_definition(const json& j) {
    FairnessDefinition d;
    d.id = string_field(j, "id", "definition");
    const std::string where = "definition '" + d.id + "'";
    d.name = string_field(j, "name", where);
    d.description = j.value("description", "");
    const auto& inputs = field(j, "required_inputs", where);
    if (!inputs.is_array()) throw Error(ErrorCode::MalformedTree, where + ": required_inputs must be a list");
    for (const auto& i : inputs) d.required_inputs.insert(parse_input_kind(i.get<std::string>()));
    const auto& ev = field(j, "evaluator", where);
    d.evaluator.kind = parse_evaluator_kind(string_field(ev, "kind", where + " evaluator"));
    if (ev.contains("rates")) {
        for (const auto& r : ev.at("rates")) {
            try {
                d.evaluator.rates.push_back(parse_rate_kind(r.get<std::string>()));
            } catch (const Error& e) {
                throw Error(ErrorCode::MalformedTree, where + ": " + e.what());
            }
        }
    }
    if (d.evaluator.kind != EvaluatorBinding::Kind::rate_parity && !d.evaluator.rates.empty()) {
        throw Error(ErrorCode::MalformedTree, where + ": only rate_parity takes rates");
    }
    if (d.evaluator.required_inputs() != d.required_inputs) {
        throw Error(ErrorCode::MalformedTree, where + ": required_inputs do not match its evaluator");
    }
    return d;
}

DecisionNode parse_node(const json& j) {
    DecisionNode n;
    n.id = string_field(j, "id", "node");
    const std::string where = "node '" + n.id + "'";
    const std::string kind = string_field(j, "kind", where);
    if (kind == "question") {
        n.kind = NodeKind::question;
    } else if (kind == "leaf") {
        n.kind = NodeKind::leaf;
    } else {
        throw Error(ErrorCode::MalformedTree, where + ": kind must be 'question' or 'leaf'");
    }
    n.title = j.value("title", n.id);
    n.text = string_field(j, "text", where);
    if (j.contains("answers")) {
        for (const auto& a : j.at("answers")) {
            n.answers.push_back({string_field(a, "label", where + " answer"), string_field(a, "target", where + " answer")});
        }
    }
    n.definition_id = j.value("definition_id", "");
    if (n.kind == NodeKind::question) {
        if (n.answers.size() < 2) throw Error(ErrorCode::MalformedTree, where + ": a question needs at least two answers");
        if (!n.definition_id.empty()) throw Error(ErrorCode::MalformedTree, where + ": a question has no definition");
        for (size_t i = 0; i < n.answers.size(); ++i) {
            for (size_t k = i + 1; k < n.answers.size(); ++k) {
                if (n.answers[i].label == n.answers[k].label) {
                    throw Error(ErrorCode::MalformedTree, where + ": duplicate answer '" + n.answers[i].label + "'");
                }
            }
        }
    } else {
        if (!n.answers.empty()) throw Error(ErrorCode::MalformedTree, where + ": a leaf has no answers");
        if (n.definition_id.empty()) throw Error(ErrorCode::MalformedTree, where + ": a leaf needs a definition_id");
    }
    return n;
}

}  // namespace

std::string_view to_string(InputKind kind) noexcept {
    switch (kind) {
        case InputKind::favourable_class: return "favourable_class";
        case InputKind::sensitive_attribute: return "sensitive_attribute";
        case InputKind::legitimate_attributes: return "legitimate_attributes";
        case InputKind::rate_kind: return "rate_kind";
    }
    return "unknown";
}

std::set<InputKind> EvaluatorBinding::required_inputs() const {
    switch (kind) {
        case Kind::demographic_parity: return {InputKind::favourable_class};
        case Kind::conditional_statistical_parity:
            return {InputKind::favourable_class, InputKind::sensitive_attribute, InputKind::legitimate_attributes};
        case Kind::rate_parity:
            if (rates.empty()) return {InputKind::rate_kind};
            return {};
    }
    return {};
}

const DecisionNode& DecisionTree::node(std::string_view id) const {
    auto it = nodes.find(std::string(id));
    if (it == nodes.end()) throw Error(ErrorCode::UnknownNode, "unknown node '" + std::string(id) + "'");
    return it->second;
}

const FairnessDefinition& DecisionTree::definition(std::string_view id) const {
    auto it = definitions.find(std::string(id));
    if (it == definitions.end()) {
        throw Error(ErrorCode::UnknownDefinition, "unknown definition '" + std::string(id) + "'");
    }
    return it->second;
}

DecisionTree load_tree(std::string_view document) {
    json doc;
    try {
        doc = json::parse(document);
    } catch (const json::exception& e) {
        throw Error(ErrorCode::MalformedTree, std::string("tree document is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw Error(ErrorCode::MalformedTree, "tree document must be an object");

    DecisionTree tree;
    tree.version = doc.value("version", "");
    try {
        for (const auto& d : doc.value("definitions", json::array())) {
            auto def = parse_definition(d);
            const std::string id = def.id;
            if (!tree.definitions.emplace(id, std::move(def)).second) {
                throw Error(ErrorCode::MalformedTree, "duplicate definition '" + id + "'");
            }
        }
        const auto& nodes = field(doc, "nodes", "tree");
        if (!nodes.is_array() || nodes.empty()) throw Error(ErrorCode::MalformedTree, "tree has no nodes");
        for (const auto& n : nodes) {
            auto node = parse_node(n);
            const std::string id = node.id;
            if (!tree.nodes.emplace(id, std::move(node)).second) {
                throw Error(ErrorCode::MalformedTree, "duplicate node '" + id + "'");
            }
        }
    } catch (const json::exception& e) {
        throw Error(ErrorCode::MalformedTree, std::string("tree document has a field of the wrong type: ") + e.what());
    }

    for (const auto& [id, node] : tree.nodes) {
        for (const auto& a : node.answers) {
            if (!tree.nodes.count(a.target)) {
                throw Error(ErrorCode::DanglingAnswer,
                            "node '" + id + "' answer '" + a.label + "' points to missing node '" + a.target + "'");
            }
        }
    }
    for (const auto& [id, node] : tree.nodes) {
        if (node.kind == NodeKind::leaf && !tree.definitions.count(node.definition_id)) {
            throw Error(ErrorCode::UnknownDefinition,
                        "leaf '" + id + "' refers to unknown definition '" + node.definition_id + "'");
        }
    }

    // three-colour DFS
    std::map<std::string, int> colour;
    std::function<void(const std::string&)> visit = [&](const std::string& id) {
        colour[id] = 1;
        for (const auto& a : tree.nodes.at(id).answers) {
            const int c = colour[a.target];
            if (c == 1) {
                throw Error(ErrorCode::CycleDetected, "cycle through node '" + a.target + "' (reached from '" + id +
                                                          "' via '" + a.label + "')");
            }
            if (c == 0) visit(a.target);
        }
        colour[id] = 2;
    };
    for (const auto& [id, node] : tree.nodes) {
        if (colour[id] == 0) visit(id);
    }

    std::set<std::string> targeted;
    for (const auto& [id, node] : tree.nodes) {
        for (const auto& a : node.answers) targeted.insert(a.target);
    }
    std::vector<std::string> candidates;
    for (const auto& [id, node] : tree.nodes) {
        if (!targeted.count(id)) candidates.push_back(id);
    }
    const json root = doc.value("root", json(nullptr));
    if (root.is_array()) {
        if (root.size() != 1) {
            throw Error(ErrorCode::MultipleRoots, "tree declares " + std::to_string(root.size()) + " roots");
        }
        tree.root = root.front().get<std::string>();
    } else if (root.is_string()) {
        tree.root = root.get<std::string>();
    } else if (root.is_null()) {
        if (candidates.size() > 1) {
            std::string names;
            for (const auto& c : candidates) names += (names.empty() ? "" : ", ") + c;
            throw Error(ErrorCode::MultipleRoots, "tree has several nodes without a parent: " + names);
        }
        tree.root = candidates.front();  // acyclic and non-empty, so at least one exists
    } else {
        throw Error(ErrorCode::MalformedTree, "root must be a node id");
    }
    if (!tree.nodes.count(tree.root)) throw Error(ErrorCode::MalformedTree, "root '" + tree.root + "' is not a node");
    if (targeted.count(tree.root)) {
        throw Error(ErrorCode::MultipleRoots, "declared root '" + tree.root + "' is the target of an answer");
    }

    std::set<std::string> reached{tree.root};
    std::deque<std::string> queue{tree.root};
    while (!queue.empty()) {
        const auto id = queue.front();
        queue.pop_front();
        for (const auto& a : tree.nodes.at(id).answers) {
            if (reached.insert(a.target).second) queue.push_back(a.target);
        }
    }
    for (const auto& [id, node] : tree.nodes) {
        if (!reached.count(id)) throw Error(ErrorCode::UnreachableNode, "node '" + id + "' is not reachable from the root");
    }
    return tree;
}

std::string tree_to_json(const DecisionTree& tree) {
    json nodes = json::array();
    for (const auto& [id, n] : tree.nodes) {
        json node = {{"id", n.id}, {"kind", n.kind == NodeKind::leaf ? "leaf" : "question"}, {"title", n.title},
                     {"text", n.text}};
        if (n.kind == NodeKind::question) {
            json answers = json::array();
            for (const auto& a : n.answers) answers.push_back({{"label", a.label}, {"target", a.target}});
            node["answers"] = answers;
        } else {
            node["definition_id"] = n.definition_id;
        }
        nodes.push_back(node);
    }
    json defs = json::array();
    for (const auto& [id, d] : tree.definitions) {
        json inputs = json::array();
        for (auto i : d.required_inputs) inputs.push_back(to_string(i));
        json ev = {{"kind", to_string(d.evaluator.kind)}};
        if (!d.evaluator.rates.empty()) {
            json rates = json::array();
            for (auto r : d.evaluator.rates) rates.push_back(to_string(r));
            ev["rates"] = rates;
        }
        defs.push_back({{"id", d.id}, {"name", d.name}, {"description", d.description},
                        {"required_inputs", inputs}, {"evaluator", ev}});
    }
    return json{{"version", tree.version}, {"root", tree.root}, {"nodes", nodes}, {"definitions", defs}}.dump(2);
}

std::string_view default_tree_document() { return detail::kDefaultTreeDocument; }

const DecisionTree& default_tree() {
    static const DecisionTree tree = load_tree(default_tree_document());
    return tree;
}

NodeDescription describe_node(const DecisionTree& tree, std::string_view node_id) {
    const auto& n = tree.node(node_id);
    NodeDescription d;
    d.id = n.id;
    d.kind = n.kind;
    d.title = n.title;
    d.text = n.text;
    for (const auto& a : n.answers) d.answer_labels.push_back(a.label);
    if (n.kind == NodeKind::leaf) d.definition = tree.definition(n.definition_id);
    return d;
}

std::vector<PathStep> find_path_to_definition(const DecisionTree& tree, std::string_view definition_id) {
    tree.definition(definition_id);
    std::vector<PathStep> path;
    std::function<bool(const std::string&)> search = [&](const std::string& id) {
        const auto& n = tree.nodes.at(id);
        if (n.kind == NodeKind::leaf) return n.definition_id == definition_id;
        for (const auto& a : n.answers) {
            path.push_back({id, a.label});
            if (search(a.target)) return true;
            path.pop_back();
        }
        return false;
    };
    if (!search(tree.root)) {
        throw Error(ErrorCode::UnknownDefinition,
                    "no leaf of the tree leads to definition '" + std::string(definition_id) + "'");
    }
    return path;
}

TreeNavigator::TreeNavigator(std::shared_ptr<const DecisionTree> tree) : tree_(std::move(tree)) {
    frontier_ = tree_->root;
}

std::optional<std::string> TreeNavigator::selected_definition() const {
    const auto& n = tree_->node(frontier_);
    if (n.kind == NodeKind::leaf) return n.definition_id;
    return std::nullopt;
}

const std::string& TreeNavigator::navigate(std::string_view node_id, std::string_view answer) {
    const auto& n = tree_->node(node_id);
    if (n.kind != NodeKind::question) {
        throw Error(ErrorCode::NotAQuestion, "node '" + n.id + "' is a leaf");
    }
    if (n.id != frontier_) {
        throw Error(ErrorCode::OffPath, "node '" + n.id + "' is not on the current path (awaiting '" + frontier_ +
                                            "'); backtrack first");
    }
    auto it = std::find_if(n.answers.begin(), n.answers.end(), [&](const Answer& a) { return a.label == answer; });
    if (it == n.answers.end()) {
        std::string labels;
        for (const auto& a : n.answers) labels += (labels.empty() ? "" : ", ") + a.label;
        throw Error(ErrorCode::UnknownAnswer,
                    "node '" + n.id + "' has no answer '" + std::string(answer) + "' (expected one of: " + labels + ")");
    }
    path_.push_back({n.id, it->label});
    frontier_ = it->target;
    return frontier_;
}

void TreeNavigator::backtrack(size_t steps) {
    if (steps > path_.size()) {
        throw Error(ErrorCode::InvalidArgument, "cannot backtrack " + std::to_string(steps) + " steps from a path of " +
                                                    std::to_string(path_.size()));
    }
    for (size_t i = 0; i < steps; ++i) {
        frontier_ = path_.back().node_id;
        path_.pop_back();
    }
}

bool Evaluation::satisfied() const {
    return std::visit([](const auto& r) { return r.satisfied; }, result);
}

Evaluation evaluate_definition(const FairnessDefinition& definition, const Dataset& dataset,
                               const std::vector<Subgroup>& active, const EvaluationInputs& inputs) {
    auto missing = [&](InputKind k) {
        throw Error(ErrorCode::MissingInput,
                    "definition '" + definition.id + "' needs input '" + std::string(to_string(k)) + "'");
    };
    for (InputKind k : definition.required_inputs) {
        switch (k) {
            case InputKind::favourable_class:
                if (!inputs.favourable_class) missing(k);
                break;
            case InputKind::sensitive_attribute:
                if (!inputs.sensitive_attribute || inputs.sensitive_attribute->empty()) missing(k);
                break;
            case InputKind::legitimate_attributes:
                if (!inputs.legitimate_attributes || inputs.legitimate_attributes->empty()) missing(k);
                break;
            case InputKind::rate_kind:
                if (!inputs.rate_kind) missing(k);
                break;
        }
    }
    if (active.empty()) {
        throw Error(ErrorCode::NoActiveSubgroups, "generate or restore subgroups before evaluating a definition");
    }

    Evaluation out;
    out.definition_id = definition.id;
    out.inputs = inputs;
    switch (definition.evaluator.kind) {
        case EvaluatorBinding::Kind::demographic_parity:
            out.result = demographic_parity(dataset, active, *inputs.favourable_class, inputs.threshold);
            break;
        case EvaluatorBinding::Kind::conditional_statistical_parity: {
            RowMask population(dataset.row_count(), false);
            for (const auto& g : active) {
                const auto m = membership_mask(dataset, g);
                for (size_t r = 0; r < m.size(); ++r) {
                    if (m[r]) population[r] = true;
                }
            }
            out.result = conditional_statistical_parity(dataset, *inputs.sensitive_attribute,
                                                        *inputs.legitimate_attributes, *inputs.favourable_class,
                                                        inputs.threshold, inputs.min_stratum_size, &population);
            break;
        }
        case EvaluatorBinding::Kind::rate_parity: {
            std::vector<RateKind> rates = definition.evaluator.rates;
            if (rates.empty()) rates.push_back(*inputs.rate_kind);
            if (rates.size() == 1) {
                out.result = parity_by_rate(dataset, active, rates.front(), inputs.threshold);
            } else {
                CompositeParity c;
                for (RateKind r : rates) c.parts.push_back(parity_by_rate(dataset, active, r, inputs.threshold));
                c.satisfied = std::all_of(c.parts.begin(), c.parts.end(),
                                          [](const ParityAssessment& p) { return p.satisfied; });
                out.result = std::move(c);
            }
            break;
        }
    }
    return out;
}

}  // namespace faircompass
