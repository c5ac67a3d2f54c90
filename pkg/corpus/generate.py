"""Regenerate the example corpus (descriptors, runtime registry, record streams).

    python corpus/generate.py

Everything is seeded; rerunning rewrites byte-identical files. Feature ``f1``
is standard normal in training; the shifted stream moves its mean by two bin
widths (1.0) and lowers prediction accuracy after record 1000.
"""
from __future__ import annotations

import json
import random
from pathlib import Path

HERE = Path(__file__).resolve().parent
EDGES = [-2.0, -1.5, -1.0, -0.5, 0.0, 0.5, 1.0, 1.5, 2.0]
SHIFT = 2 * (EDGES[1] - EDGES[0])
TRAINING_SAMPLES = 20000
OPERATIONAL_SAMPLES = 5000


def counts(values):
    out = [0] * (len(EDGES) - 1)
    for v in values:
        i = 0
        while i < len(out) - 1 and v >= EDGES[i + 1]:
            i += 1
        out[i] += 1
    return out


def normal_sample(rng, n, mean=0.0):
    return [rng.gauss(mean, 1.0) for _ in range(n)]


def hist(values):
    return {"histogram": {"histogram": {"bin_edges": EDGES, "counts": counts(values)}}}


def descriptor(kind, name, provenance, attributes):
    return {"apiVersion": "v1", "kind": kind, "name": name, "provenance": provenance, "attributes": attributes}


MODEL_SCHEMA = [
    {"name": "f1", "dtype": "float"},
    {"name": "age", "dtype": "int"},
    {"name": "distance", "dtype": "float", "unit": "km"},
]


def trained_model():
    return descriptor(
        "TrainedModel",
        "claims-triage-v3",
        "data science team",
        {
            "api": {"input_schema": {"schema": MODEL_SCHEMA}},
            "evaluation": {
                "metrics": ["accuracy", "f1_score"],
                "required_test_suites": ["holdout-2019", "stress-latency"],
                "test_accuracy": 0.92,
            },
            "resources": {"memory_mb": 8192},
        },
    )


def training_data(rng):
    return descriptor(
        "TrainingData",
        "claims-2019-train",
        "data science team",
        {"features": {"f1": hist(normal_sample(rng, TRAINING_SAMPLES))}},
    )


def systems():
    rng = random.Random(20191007)
    model = trained_model()
    train = training_data(rng)
    clean_ops = normal_sample(rng, OPERATIONAL_SAMPLES)
    drifted_ops = normal_sample(rng, OPERATIONAL_SAMPLES, SHIFT)
    clean = {
        "trained_model": model,
        "training_data": train,
        "operational_data": descriptor(
            "OperationalData",
            "claims-feed",
            "operations staff",
            {
                "features": {"f1": hist(clean_ops)},
                "schema": {
                    "schema": [
                        {"name": "id", "dtype": "string"},
                        {"name": "f1", "dtype": "float"},
                        {"name": "age", "dtype": "int"},
                        {"name": "distance", "dtype": "float", "unit": "km"},
                    ]
                },
            },
        ),
        "development_environment": descriptor(
            "DevelopmentEnvironment",
            "ci-cluster",
            "software engineering team",
            {"testing": {"available_suites": ["holdout-2019", "stress-latency", "unit"]}},
        ),
        "production_environment": descriptor(
            "ProductionEnvironment",
            "prod-east",
            "operations staff",
            {
                "resources": {"memory_mb": 16384},
                "monitoring": {"metrics": ["accuracy", "f1_score", "latency"]},
            },
        ),
    }
    mismatched = {
        "trained_model": model,
        "training_data": train,
        "operational_data": descriptor(
            "OperationalData",
            "claims-feed",
            "operations staff",
            {
                "features": {"f1": hist(drifted_ops)},
                "schema": {
                    "schema": [
                        {"name": "f1", "dtype": "float"},
                        {"name": "age", "dtype": "float"},
                        {"name": "distance", "dtype": "float", "unit": "mi"},
                    ]
                },
            },
        ),
        "development_environment": descriptor(
            "DevelopmentEnvironment",
            "ci-cluster",
            "software engineering team",
            {"testing": {"available_suites": ["holdout-2019", "unit"]}},
        ),
        "production_environment": descriptor(
            "ProductionEnvironment",
            "prod-east",
            "operations staff",
            {
                "resources": {"memory_mb": 4096},
                "monitoring": {"metrics": ["latency", "throughput"]},
            },
        ),
    }
    return clean, mismatched


RUNTIME_REGISTRY = {
    "apiVersion": "v1",
    "kind": "MismatchRegistry",
    "name": "runtime",
    "mismatches": [
        {
            "id": "M2-runtime",
            "description": "Live drift: the current window of f1 diverges from the training histogram (PSI above 0.2).",
            "consequence": "poor model accuracy",
            "predicate": "psi(training_data.features.f1.histogram, window.features.f1.histogram) > 0.2",
            "phase": "runtime",
            "metadata": {
                "data_source": "drift monitor (window); data scientist (training histogram)",
                "feasibility": "high: computed from the operational stream",
                "validation_method": "offline PSI on logged records",
                "automatable": True,
            },
        },
        {
            "id": "M5-runtime",
            "description": "Accuracy decay: rolling accuracy falls more than 0.1 below the accuracy measured at test time.",
            "consequence": "diminishing model accuracy goes undetected",
            "predicate": "window.accuracy < trained_model.evaluation.test_accuracy - 0.1",
            "phase": "runtime",
            "metadata": {
                "data_source": "drift monitor (labels); data scientist (test accuracy)",
                "feasibility": "medium: needs delayed ground truth",
                "validation_method": "audit a labeled sample",
                "automatable": True,
            },
        },
    ],
}


def stream(rng, n, start, mean, accuracy, label_rate=0.8):
    lines = []
    for seq in range(start, start + n):
        record = {"seq": seq, "features": {"f1": round(rng.gauss(mean, 1.0), 4)}}
        if rng.random() < label_rate:
            truth = rng.randint(0, 1)
            record["ground_truth"] = truth
            record["prediction"] = truth if rng.random() < accuracy else 1 - truth
        lines.append(json.dumps(record, sort_keys=True))
    return lines


def write_json(path: Path, obj) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(obj, indent=2) + "\n", "utf-8")


def main() -> None:
    clean, mismatched = systems()
    for folder, docs in (("clean-system", clean), ("mismatched-system", mismatched)):
        for stem, doc in docs.items():
            write_json(HERE / folder / f"{stem}.json", doc)
    write_json(HERE / "registries" / "runtime.json", RUNTIME_REGISTRY)

    streams = HERE / "streams"
    streams.mkdir(exist_ok=True)
    rng = random.Random(1007)
    in_dist = stream(rng, 10000, 1, 0.0, 0.95)
    (streams / "in-distribution.jsonl").write_text("\n".join(in_dist) + "\n", "utf-8")
    rng = random.Random(2019)
    shifted = stream(rng, 1000, 1, 0.0, 0.95) + stream(rng, 2000, 1001, SHIFT, 0.6)
    (streams / "shifted.jsonl").write_text("\n".join(shifted) + "\n", "utf-8")


if __name__ == "__main__":
    main()
