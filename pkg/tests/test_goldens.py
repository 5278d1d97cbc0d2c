import json

import pytest

from src.casimir import expected_hc_image
from src.exact import MultiPoly
from src.goldens import (
    GOLDEN_FILES,
    GoldenMismatchError,
    compare_golden,
    dump_goldens,
    hc_images_payload,
    load_golden,
    render,
    table_golden_check,
    verify_golden,
)


@pytest.fixture(scope="module")
def dumped(tmp_path_factory):
    path = tmp_path_factory.mktemp("dumped")
    dump_goldens(str(path))
    return path


@pytest.mark.parametrize("name", sorted(GOLDEN_FILES))
def test_shipped_goldens_match_engine(name):
    check = verify_golden(name)
    assert check.status == "pass", check.residual


@pytest.mark.parametrize("name", sorted(GOLDEN_FILES))
def test_dumped_goldens_match_engine(dumped, name):
    assert verify_golden(name, str(dumped)).status == "pass"


@pytest.mark.slow
def test_dump_is_byte_identical(dumped, tmp_path):
    dump_goldens(str(tmp_path))
    for filename in GOLDEN_FILES.values():
        assert (tmp_path / filename).read_bytes() == (dumped / filename).read_bytes()


def test_render_is_canonical():
    text = render({"b": 1, "a": [1, 2]})
    assert text.endswith("\n")
    assert text.index('"a"') < text.index('"b"')
    assert render("raw\n") == "raw\n"


def test_compare_reports_offending_key():
    computed = hc_images_payload()
    stored = dict(computed, C1="Lambda1**2 + Lambda2**2 - 4")
    with pytest.raises(GoldenMismatchError) as info:
        compare_golden("hc_images", stored, computed)
    assert info.value.key == "C1"


def test_compare_ignores_formatting():
    computed = hc_images_payload()
    stored = dict(computed, C1="-5 + Lambda2**2 + Lambda1**2")
    compare_golden("hc_images", stored, computed)


def test_unknown_golden():
    with pytest.raises(KeyError):
        load_golden("nonexistent")


def test_missing_golden_dir_fails(tmp_path):
    check = verify_golden("hc_images", str(tmp_path / "nowhere"))
    assert check.status == "fail"
    assert check.name == "goldens.hc_images"


def test_corrupted_shift_table_names_the_shift(golden_copy):
    path = golden_copy / GOLDEN_FILES["shift_tables"]
    data = json.loads(path.read_text(encoding="utf-8"))
    data["C1"]["0,2"] = "-16*pihat*(v - u)"
    path.write_text(json.dumps(data), encoding="utf-8")
    check = table_golden_check(str(golden_copy))
    assert check.status == "fail"
    assert check.details["table"] == "C1"
    assert check.details["shift"] == [0, 2]


def test_shipped_shift_tables_agree(golden_copy):
    assert table_golden_check(str(golden_copy)).status == "pass"


def test_hc_golden_holds_the_engine_images():
    stored = load_golden("hc_images")
    computed = hc_images_payload()
    assert MultiPoly.parse(stored["C2"]) == MultiPoly.parse(computed["C2"])
    assert MultiPoly.parse(computed["C2"]) == expected_hc_image("C2")
    compare_golden("hc_images", stored, computed)
