#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "faircompass/compass.hpp"
#include "faircompass/dataset.hpp"
#include "faircompass/error.hpp"
#include "faircompass/serialize.hpp"
#include "faircompass/service.hpp"
#include "faircompass/session.hpp"

namespace py = pybind11;
namespace fc = faircompass;
using nlohmann::json;

// Structured values cross the boundary as JSON text; the Python package
// decodes them.

namespace {

std::string dump(const json& j) { return j.dump(); }

fc::Stage stage(const std::string& s) { return fc::parse_stage(s); }

std::optional<std::string> note_arg(const py::object& note) {
    if (note.is_none()) return std::nullopt;
    return note.cast<std::string>();
}

}  // namespace

PYBIND11_MODULE(_faircompass, m) {
    m.doc() = "FairCompass engine bindings";

    // faircompass.Error carries the engine's error code as `.code`.
    static PyObject* error = PyErr_NewException("faircompass._faircompass.Error", PyExc_RuntimeError, nullptr);
    m.attr("Error") = py::handle(error);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const fc::Error& e) {
            const std::string code(fc::to_string(e.code()));
            py::object exc = py::reinterpret_borrow<py::object>(error)(code + ": " + e.what());
            exc.attr("code") = code;
            PyErr_SetObject(error, exc.ptr());
        }
    });

    py::class_<fc::Dataset>(m, "Dataset")
        .def_property_readonly("id", &fc::Dataset::id)
        .def_property_readonly("row_count", &fc::Dataset::row_count)
        .def_property_readonly("feature_names", &fc::Dataset::feature_names)
        .def("summary_json", [](const fc::Dataset& d) { return dump(fc::dataset_summary(d)); })
        .def("distribution_json",
             [](const fc::Dataset& d, const std::string& f) { return dump(json(fc::feature_distribution(d, f))); })
        .def("to_csv", &fc::Dataset::to_csv);

    m.def(
        "load_dataset",
        [](const std::string& csv, const std::string& config) {
            return fc::load_dataset(csv, json::parse(config).get<fc::IngestConfig>());
        },
        py::arg("csv"), py::arg("config_json") = "{}");

    m.def("default_tree_json", [] { return fc::tree_to_json(fc::default_tree()); });
    m.def("validate_tree", [](const std::string& doc) { return fc::tree_to_json(fc::load_tree(doc)); });

    py::class_<fc::AuditSession>(m, "Session")
        .def(py::init([](const std::string& id, const fc::Dataset& ds) {
                 return fc::AuditSession(id, ds, std::make_shared<const fc::DecisionTree>(fc::default_tree()));
             }),
             py::arg("id"), py::arg("dataset"))
        .def_property_readonly("id", &fc::AuditSession::id)
        .def("generate_groups",
             [](fc::AuditSession& s, const std::string& selections, const std::string& st, const py::object& note) {
                 s.generate_groups(stage(st), json::parse(selections).get<std::vector<fc::FeatureSelection>>(),
                                   note_arg(note));
             },
             py::arg("selections_json"), py::arg("stage") = "Exploration", py::arg("note") = py::none())
        .def("pin",
             [](fc::AuditSession& s, const std::optional<std::string>& id, const std::string& st,
                const py::object& note) { s.pin(stage(st), id, note_arg(note)); },
             py::arg("subgroup_id"), py::arg("stage") = "Exploration", py::arg("note") = py::none())
        .def("save_group_set",
             [](fc::AuditSession& s, const std::string& name, const std::string& st, const py::object& note) {
                 return s.save_group_set(stage(st), name, note_arg(note)).id;
             },
             py::arg("name"), py::arg("stage") = "Exploration", py::arg("note") = py::none())
        .def("restore_group_set",
             [](fc::AuditSession& s, const std::string& id, const std::string& st, const py::object& note) {
                 s.restore_group_set(stage(st), id, note_arg(note));
             },
             py::arg("group_set_id"), py::arg("stage") = "Exploration", py::arg("note") = py::none())
        .def("navigate",
             [](fc::AuditSession& s, const std::string& node, const std::string& answer, const std::string& st,
                const py::object& note) { return s.navigate(stage(st), node, answer, note_arg(note)); },
             py::arg("node_id"), py::arg("answer"), py::arg("stage") = "Guidance", py::arg("note") = py::none())
        .def("backtrack",
             [](fc::AuditSession& s, size_t steps, const std::string& st, const py::object& note) {
                 s.backtrack(stage(st), steps, note_arg(note));
             },
             py::arg("steps") = 1, py::arg("stage") = "Guidance", py::arg("note") = py::none())
        .def("evaluate_json",
             [](fc::AuditSession& s, const std::string& inputs, const std::string& st, const py::object& note) {
                 return dump(json(s.evaluate(stage(st), json::parse(inputs).get<fc::EvaluationInputs>(),
                                             note_arg(note))));
             },
             py::arg("inputs_json"), py::arg("stage") = "InformedAnalysis", py::arg("note") = py::none())
        .def("bin_feature",
             [](fc::AuditSession& s, const std::string& feature, const std::string& strategy, const std::string& st,
                const py::object& note) {
                 s.bin_feature(stage(st), feature, fc::bin_strategy_from_json(json::parse(strategy)), note_arg(note));
             },
             py::arg("feature"), py::arg("strategy_json"), py::arg("stage") = "Exploration",
             py::arg("note") = py::none())
        .def("log_stage",
             [](fc::AuditSession& s, const std::string& st, const std::string& action, const std::string& payload,
                const py::object& note) { s.log_stage(stage(st), action, json::parse(payload), note_arg(note)); },
             py::arg("stage"), py::arg("action"), py::arg("payload_json") = "{}", py::arg("note") = py::none())
        .def("metrics_json", [](const fc::AuditSession& s) { return dump(json(s.active_metrics())); })
        .def("compare_json", [](const fc::AuditSession& s, const std::string& id) { return dump(json(s.compare(id))); })
        .def("state_json", [](const fc::AuditSession& s) { return dump(s.state_json()); })
        .def("state_hash", &fc::AuditSession::state_hash)
        .def("report_json", [](const fc::AuditSession& s) { return dump(fc::export_session(s).structured); })
        .def("report_markdown", [](const fc::AuditSession& s) { return fc::export_session(s).markdown; });

    py::class_<fc::AuditService>(m, "Service")
        .def(py::init([](const std::string& config) {
                 return std::make_unique<fc::AuditService>(fc::service_config_from_json(json::parse(config)));
             }),
             py::arg("config_json") = "{}")
        .def(
            "handle",
            [](fc::AuditService& svc, const std::string& method, const std::string& target, const std::string& body) {
                const auto r = svc.handle(method, target, body);
                return py::make_tuple(r.status, r.content_type, r.body);
            },
            py::arg("method"), py::arg("target"), py::arg("body") = "");
}
