import json

from quartic_iso.core.reports import render, stringify_ints


def test_stringify_ints_keeps_booleans_and_null():
    data = {"n": 956, "equal": True, "witness": None, "terms": [1, (2, 3)], "nested": {"p": 10**30}}
    assert stringify_ints(data) == {
        "n": "956",
        "equal": True,
        "witness": None,
        "terms": ["1", ["2", "3"]],
        "nested": {"p": "1" + "0" * 30},
    }


def test_json_rendering_is_sorted_and_terminated():
    text = render({"b": 1, "a": [2]})
    assert text == '{\n  "a": [\n    "2"\n  ],\n  "b": "1"\n}\n'
    assert json.loads(text) == {"a": ["2"], "b": "1"}


def test_text_rendering_flattens_keys():
    text = render({"result": {"equal": False, "pairs": [{"m": 2}]}, "empty": [], "none": None}, "text")
    assert text.splitlines() == [
        "empty: []",
        "none: null",
        "result.equal: false",
        "result.pairs[0].m: 2",
    ]
    assert text.endswith("\n")


def test_rendering_is_deterministic():
    report = {"z": {"y": 1, "x": 2}, "a": True}
    assert render(report) == render(dict(reversed(list(report.items()))))
