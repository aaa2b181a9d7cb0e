"""Acceptance gate: one test per acceptance criterion, all hermetic/offline.

The conftest hook prints one `[ACCEPTANCE] <test>: PASS|FAIL` line per
criterion in the terminal summary.
"""

from __future__ import annotations

import json
import random
import socket
from urllib.parse import quote

import pytest
from fastapi.testclient import TestClient

from metaforge.authorities import validate_orcid_checksum
from metaforge.gateway import build_gateway
from metaforge.gateway.adapters import FixtureAdapter
from metaforge.instance import (
    add_repetition,
    new_instance,
    parse_instance,
    remove_repetition,
    render_plan,
    repetition_count,
    serialize_jsonld,
    set_value,
    validate_instance,
    walk_instance,
)
from metaforge.errors import MetaforgeError
from metaforge.report import generate_report
from metaforge.service import create_app
from metaforge.values import EMPTY, Literal

import instance_gen
from test_gateway import mod11_2_oracle

CORPUS_TEMPLATES = ("rnaseq_assay", "psych_ds", "study_contacts",
                    "kitchen_sink", "multilang")
EN_ONLY_TEMPLATES = ("rnaseq_assay", "psych_ds", "study_contacts", "kitchen_sink")


def test_round_trip_property_over_generated_corpus(templates):
    """>= 1,000 generated instances across >= 5 templates; parse(serialize(x))
    reproduces x modulo Empty omission and timestamps. Zero failures."""
    rng = random.Random(20240810)
    failures = 0
    total = 0
    per_template = 1100 // len(CORPUS_TEMPLATES) + 1
    for name in CORPUS_TEMPLATES:
        t = templates[name]
        for k in range(per_template):
            total += 1
            x = instance_gen.build_random_instance(t, rng)
            first = serialize_jsonld(t, x)
            parsed = parse_instance(t, first)
            if serialize_jsonld(t, parsed) != first:
                failures += 1
                continue
            if parsed.template_id != x.template_id or \
                    parsed.template_fingerprint != x.template_fingerprint:
                failures += 1
                continue
            if k % 3 == 0:
                complete = instance_gen.build_complete_instance(t, rng)
                reparsed = parse_instance(t, serialize_jsonld(t, complete))
                if reparsed != complete:
                    failures += 1
    assert total >= 1000
    assert failures == 0


def test_fig2_required_missing_set_and_membership(fig2_template):
    i = new_instance(fig2_template)
    i = set_value(fig2_template, i, "dataset_type", EMPTY)  # clear the default
    issues = validate_instance(fig2_template, i, strict=True)
    missing = {x.path for x in issues if x.code == "REQUIRED_MISSING"}
    assert missing == {"parent_sample_id", "lab_id", "preparation_protocol_doi",
                       "dataset_type", "analyte_class"}

    i = set_value(fig2_template, i, "parent_sample_id", Literal("HBM296.DXLM.434"))
    issues = validate_instance(fig2_template, i, strict=True)
    assert not [x for x in issues if x.path == "parent_sample_id"]

    i = set_value(fig2_template, i, "analyte_class", Literal("Granite"))
    issues = validate_instance(fig2_template, i, strict=True)
    assert [x.code for x in issues if x.path == "analyte_class"] == \
        ["NOT_IN_ALLOWED_VALUES"]


def test_jsonld_shapes_are_complete_across_corpus(templates):
    rng = random.Random(77)

    def value_objects(node):
        if isinstance(node, dict):
            if "@value" in node or "@id" in node:
                yield node
            else:
                for v in node.values():
                    yield from value_objects(v)
        elif isinstance(node, list):
            for v in node:
                yield from value_objects(v)

    term_like = literal_like = 0
    for name in CORPUS_TEMPLATES:
        t = templates[name]
        for _ in range(60):
            i = instance_gen.build_random_instance(t, rng)
            doc = serialize_jsonld(t, i)
            body = {k: v for k, v in doc.items() if not k.startswith("@")}
            for value in value_objects(body):
                if "@id" in value:
                    term_like += 1
                    assert value.get("@id") and value.get("rdfs:label"), value
                    assert set(value) == {"@id", "rdfs:label"}
                else:
                    literal_like += 1
                    assert "@value" in value and "@type" in value, value
    assert term_like > 50 and literal_like > 500


def test_orcid_checksum_criterion():
    paper_orcid = "0000000222562421"
    assert validate_orcid_checksum(paper_orcid) is True

    for pos in range(16):
        alphabet = "0123456789X" if pos == 15 else "0123456789"
        for replacement in alphabet:
            if replacement == paper_orcid[pos]:
                continue
            mutated = paper_orcid[:pos] + replacement + paper_orcid[pos + 1:]
            assert validate_orcid_checksum(mutated) is False, mutated

    rng = random.Random(7064)
    for _ in range(10_000):
        base = "".join(rng.choice("0123456789") for _ in range(15))
        check = mod11_2_oracle(base)
        candidate = base + rng.choice("0123456789X")
        assert validate_orcid_checksum(candidate) is (candidate[15] == check)


def test_gateway_fixture_criterion(monkeypatch):
    def explode(*_args, **_kwargs):
        raise AssertionError("network touched in offline mode")

    monkeypatch.setattr(socket, "create_connection", explode)
    monkeypatch.setattr(socket.socket, "connect", explode)
    gw = build_gateway(offline=True)
    assert all(isinstance(a, FixtureAdapter) for a in gw.adapters.values())
    results = gw.search_authority("ror", "stanford")
    assert {"Stanford University"} <= {s.label for s in results}
    assert any(s.id == "https://ror.org/00f54p054" for s in results)
    assert gw.resolve_identifier("orcid", "0000-0002-2256-2421").label == "Martin O'Connor"


def test_cardinality_state_machine(templates):
    rng = random.Random(16)
    for name in ("psych_ds", "kitchen_sink"):
        t = templates[name]
        i = new_instance(t)
        for _round in range(300):
            repeats = [s for s in walk_instance(t, i) if s.kind == "repeat"]
            step = rng.choice(repeats)
            node, base, count = step.node, step.path, step.count
            c = node.cardinality
            if rng.random() < 0.5:
                if c.max is not None and count + 1 > c.max:
                    with pytest.raises(MetaforgeError) as exc:
                        add_repetition(t, i, base)
                    assert exc.value.code == "CARDINALITY_OVERFLOW"
                else:
                    i = add_repetition(t, i, base)
            elif count > 0:
                if count - 1 < c.min:
                    with pytest.raises(MetaforgeError) as exc:
                        remove_repetition(t, i, f"{base}[{count - 1}]")
                    assert exc.value.code == "CARDINALITY_UNDERFLOW"
                else:
                    i = remove_repetition(t, i, f"{base}[{rng.randrange(count)}]")
            for check in walk_instance(t, i):
                if check.kind == "repeat":
                    cc = check.node.cardinality
                    assert check.count >= cc.min
                    assert cc.max is None or check.count <= cc.max


def test_i18n_fallback_criterion(templates):
    for name in EN_ONLY_TEMPLATES:
        t = templates[name]
        plan = render_plan(t, new_instance(t), "entry", ["de"])
        assert all(w.label for w in plan.widgets), name
        # exactly one diagnostic per widget (every label fell back from de)
        assert len(plan.fallbacks) == len(plan.widgets), name
        for diag in plan.fallbacks:
            assert diag["requestedTag"] == "de"
            assert diag.get("servedTag") == "en"


def test_view_mode_criterion(templates):
    for name, t in templates.items():
        rng = random.Random(hash(name) % 1000)
        i = instance_gen.build_random_instance(t, rng)
        plan = render_plan(t, i, "view", ["en"])
        assert all(not w.editable for w in plan.widgets), name
        assert all(w.widget_type != "repeat_controls" for w in plan.widgets), name


def test_service_contract_criterion(tmp_path, template_docs, fig2_template):
    fig2_quoted = quote(fig2_template.id, safe="")
    app = create_app(data_dir=tmp_path, offline=True)
    with TestClient(app, raise_server_exceptions=False) as client:
        assert client.get("/v1/healthz").json() == {"status": "ok"}

        created = client.post("/v1/templates",
                              content=json.dumps(template_docs["rnaseq_assay"]))
        assert created.status_code == 201
        fingerprint = created.json()["fingerprint"]

        assert client.post("/v1/templates",
                           content=json.dumps(template_docs["rnaseq_assay"])
                           ).status_code == 200

        listed = client.get("/v1/templates")
        assert listed.status_code == 200
        assert [e["fingerprint"] for e in listed.json()["templates"]] == [fingerprint]

        fetched = client.get(f"/v1/templates/{fig2_quoted}")
        assert fetched.status_code == 200

        plan = client.post(f"/v1/templates/{fig2_quoted}/render-plan",
                           content=json.dumps({"mode": "entry", "language": "en"}))
        assert plan.status_code == 200
        assert plan.json()["widgets"][0]["path"] == "parent_sample_id"

        i = new_instance(fig2_template)
        empty_doc = serialize_jsonld(fig2_template, i)
        validated = client.post(f"/v1/templates/{fig2_quoted}/validate?strict=1",
                                content=json.dumps(empty_doc))
        assert validated.status_code == 200
        assert any(x["code"] == "REQUIRED_MISSING" for x in validated.json()["issues"])

        report = client.post(f"/v1/templates/{fig2_quoted}/quality-report",
                             content=json.dumps(empty_doc))
        assert report.status_code == 200
        assert 0.0 <= report.json()["completeness"] < 1.0

        complete = set_value(fig2_template, i, "parent_sample_id",
                             Literal("HBM296.DXLM.434"))
        complete = set_value(fig2_template, complete, "lab_id", Literal("L1"))
        complete = set_value(fig2_template, complete, "preparation_protocol_doi",
                             Literal("https://doi.org/10.1/x"))
        complete = set_value(fig2_template, complete, "analyte_class", Literal("DNA"))
        body = json.dumps(serialize_jsonld(fig2_template, complete, strict=True)).encode()
        stored = client.post(f"/v1/templates/{fig2_quoted}/instances", content=body)
        assert stored.status_code == 201
        instance_id = stored.json()["instanceId"]
        assert client.get(f"/v1/instances/{instance_id}").content == body

        search = client.get("/v1/search/authority",
                            params={"source": "ror", "q": "stanford"})
        assert search.status_code == 200
        assert any(s["id"] == "https://ror.org/00f54p054"
                   for s in search.json()["suggestions"])
        onto = client.get("/v1/search/ontology", params={"acronym": "ANALYTE", "q": "dna"})
        assert [s["label"] for s in onto.json()["suggestions"]] == ["DNA", "DNA + RNA"]
        resolved = client.get("/v1/resolve/authority",
                              params={"source": "orcid", "id": "0000-0002-2256-2421"})
        assert resolved.json()["label"] == "Martin O'Connor"

        # error-status mapping table
        error_probes = [
            (client.post("/v1/templates", content="{nope"), 400, "MALFORMED_JSON"),
            (client.post(f"/v1/templates/{fig2_quoted}/render-plan",
                         content=json.dumps({"mode": "nope"})), 400, "BAD_MODE"),
            (client.get("/v1/search/authority", params={"source": "ror", "q": " "}),
             400, "QUERY_EMPTY"),
            (client.get("/v1/search/authority", params={"source": "x", "q": "y"}),
             400, "UNKNOWN_SOURCE"),
            (client.get("/v1/resolve/authority",
                        params={"source": "orcid", "id": "0000-0002-2256-2420"}),
             400, "INVALID_IDENTIFIER"),
            (client.get("/v1/templates/https%3A%2F%2Fex.org%2Fmissing"),
             404, "UNKNOWN_TEMPLATE"),
            (client.get("/v1/instances/missing"), 404, "NOT_FOUND"),
            (client.post(f"/v1/templates/{fig2_quoted}/instances",
                         content=json.dumps(empty_doc)), 422, "VALIDATION_FAILED"),
        ]
        for response, status, code in error_probes:
            assert response.status_code == status, (code, response.status_code)
            assert response.json()["code"] == code

    # registry survives a process restart with identical fingerprints
    reborn = create_app(data_dir=tmp_path, offline=True)
    with TestClient(reborn) as client:
        entries = client.get("/v1/templates").json()["templates"]
        assert [e["fingerprint"] for e in entries] == [fingerprint]
        assert client.get(f"/v1/templates/{fig2_quoted}").json() == fetched.json()


def test_quality_report_criterion(fig2_template, psych_template):
    i = new_instance(fig2_template)
    i = set_value(fig2_template, i, "parent_sample_id", Literal("HBM296.DXLM.434"))
    i = set_value(fig2_template, i, "lab_id", Literal("3432_ftR_RNA_A2"))
    i = set_value(fig2_template, i, "preparation_protocol_doi",
                  Literal("https://dx.doi.org/10.17504/protocols.io.4r3l224p3l1y/v1"))
    report = generate_report(fig2_template, i)
    assert report.completeness == 0.8
    assert (report.required_filled, report.required_total) == (4, 5)

    rng = random.Random(88)
    for t in (fig2_template, psych_template):
        for _round in range(8):
            i = new_instance(t)
            required = [s for s in walk_instance(t, i)
                        if s.kind == "slot" and s.node.required]
            rng.shuffle(required)
            last = generate_report(t, i).completeness
            for step in required:
                value = instance_gen.random_value(step.node, rng)
                i = set_value(t, i, step.path, value)
                current = generate_report(t, i).completeness
                assert current >= last
                last = current
            assert last == 1.0
