"""Regenerate fixtures/adult/adult.csv from the raw UCI Adult training file.

Usage: python tools/make_adult_predictions.py path/to/adult.data fixtures/adult/adult.csv

The output keeps the 15 original columns (with a header row, original value
spelling, "?" for missing) and appends a `prediction` column holding the class
name predicted by a small two-layer network fitted on the same rows.
"""
import csv
import sys

import numpy as np
from sklearn.neural_network import MLPClassifier
from sklearn.preprocessing import OneHotEncoder, StandardScaler

COLUMNS = [
    "age", "workclass", "fnlwgt", "education", "education-num",
    "marital-status", "occupation", "relationship", "race", "sex",
    "capital-gain", "capital-loss", "hours-per-week", "native-country",
    "income",
]
NUMERIC = ["age", "fnlwgt", "education-num", "capital-gain", "capital-loss",
           "hours-per-week"]
SEED = 0


def read_rows(path):
    rows = []
    with open(path, newline="") as fh:
        for rec in csv.reader(fh, skipinitialspace=True):
            if len(rec) != len(COLUMNS):
                continue
            rows.append([v.strip() for v in rec])
    return rows


def main(src, dst):
    rows = read_rows(src)
    cats = [c for c in COLUMNS[:-1] if c not in NUMERIC]
    idx = {c: i for i, c in enumerate(COLUMNS)}
    num = np.array([[float(r[idx[c]]) for c in NUMERIC] for r in rows])
    cat = np.array([[r[idx[c]] for c in cats] for r in rows])
    x = np.hstack([
        StandardScaler().fit_transform(num),
        OneHotEncoder(sparse_output=False).fit_transform(cat),
    ])
    y = np.array([1 if r[idx["income"]] == "<=50K" else 0 for r in rows])
    model = MLPClassifier(hidden_layer_sizes=(64,), max_iter=200,
                          random_state=SEED)
    model.fit(x, y)
    pred = model.predict(x)
    with open(dst, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(COLUMNS + ["prediction"])
        for r, p in zip(rows, pred):
            w.writerow(r + ["<=50K" if p == 1 else ">50K"])
    print(f"rows={len(rows)} train_accuracy={(pred == y).mean():.4f}")


if __name__ == "__main__":
    main(sys.argv[1], sys.argv[2])
