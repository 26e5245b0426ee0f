"""Python access to the FairCompass fairness-auditing engine."""

import json

from ._faircompass import Error, Dataset, Session as _Session, Service as _Service
from ._faircompass import load_dataset as _load_dataset, default_tree_json, validate_tree

__all__ = ["Error", "Dataset", "Session", "Service", "load_dataset", "default_tree"]


def load_dataset(csv, config=None):
    """Parse CSV text. `config` follows the service's ingest config fields."""
    return _load_dataset(csv, json.dumps(config or {}))


def default_tree():
    return json.loads(default_tree_json())


class Session:
    """An audit session over one dataset. Every mutating call is logged."""

    def __init__(self, dataset, session_id="py"):
        self._s = _Session(session_id, dataset)

    def generate_groups(self, *selections, stage="Exploration", note=None):
        self._s.generate_groups(json.dumps(list(selections)), stage, note)
        return self.state()["active_subgroups"]

    def pin(self, subgroup_id, stage="Exploration", note=None):
        self._s.pin(subgroup_id, stage, note)

    def save_group_set(self, name, stage="Exploration", note=None):
        return self._s.save_group_set(name, stage, note)

    def restore_group_set(self, group_set_id, stage="Exploration", note=None):
        self._s.restore_group_set(group_set_id, stage, note)

    def navigate(self, node_id, answer, stage="Guidance", note=None):
        return self._s.navigate(node_id, answer, stage, note)

    def backtrack(self, steps=1, stage="Guidance", note=None):
        self._s.backtrack(steps, stage, note)

    def evaluate(self, stage="InformedAnalysis", note=None, **inputs):
        return json.loads(self._s.evaluate_json(json.dumps(inputs), stage, note))

    def bin_feature(self, feature, edges=None, equal_width=None, stage="Exploration", note=None):
        strategy = {"edges": list(edges)} if edges is not None else {"equal_width": equal_width or 10}
        self._s.bin_feature(feature, json.dumps(strategy), stage, note)

    def log(self, stage, action, payload=None, note=None):
        self._s.log_stage(stage, action, json.dumps(payload or {}), note)

    def metrics(self):
        return json.loads(self._s.metrics_json())

    def compare(self, hovered_id):
        return json.loads(self._s.compare_json(hovered_id))

    def state(self):
        return json.loads(self._s.state_json())

    def state_hash(self):
        return self._s.state_hash()

    def report(self, fmt="json"):
        if fmt == "markdown":
            return self._s.report_markdown()
        return json.loads(self._s.report_json())


class Service:
    """In-process audit service; `request` mirrors the HTTP API."""

    def __init__(self, config=None):
        self._svc = _Service(json.dumps(config or {}))

    def request(self, method, target, body=None):
        status, content_type, text = self._svc.handle(method, target, "" if body is None else json.dumps(body))
        if content_type.startswith("application/json"):
            return status, json.loads(text)
        return status, text
