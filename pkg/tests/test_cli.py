import io
import json

from app.config import settings
from app.main import build_parser, main
from tests.conftest import FIGURE1_INSTANCE, SHARP_SIMPLEX_INSTANCE, SQUARE_INSTANCE, THIN_BOX_INSTANCE


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out=out)
    return code, out.getvalue()


def records(text):
    return [json.loads(line) for line in text.splitlines() if line.strip()]


def test_volume(write_instance):
    code, text = run("volume", write_instance(FIGURE1_INSTANCE))
    assert code == 0
    (record,) = records(text)
    assert record["proof"] == {"exact": "4"}
    assert record["value"] == record["proof"]
    assert record["discriminant"]["interval"][0].startswith("1.41421356")
    assert record["finite_volume"] == "1"


def test_convention_flag_in_either_position(write_instance):
    path = write_instance(FIGURE1_INSTANCE)
    for argv in (["--convention", "discriminant", "volume", path], ["volume", path, "--convention", "discriminant"]):
        code, text = run(*argv)
        assert code == 0
        record = records(text)[0]
        assert record["convention"] == "discriminant"
        assert record["value"] == record["discriminant"]


def test_count_and_dilation(write_instance):
    path = write_instance(FIGURE1_INSTANCE)
    assert records(run("count", path)[1]) == [{"count": 3, "dilation": "1"}]
    code, text = run("count", path, "--dilation", "2", "--list")
    assert code == 0
    record = records(text)[0]
    assert record["count"] == 7
    assert ["0", "1"] in [p[0] for p in record["points"]]


def test_count_csv(write_instance):
    code, text = run("count", write_instance(FIGURE1_INSTANCE), "--format", "csv")
    assert code == 0
    lines = text.splitlines()
    assert lines[0] == "x1_0,x1_1,rho1,rho2"
    assert len(lines) == 4


def test_check_reports_missing_hypothesis(write_instance):
    code, text = run("check", write_instance(THIN_BOX_INSTANCE))
    assert code == 3
    out = records(text)
    assert {r["bound_name"] for r in out} == {"blichfeldt", "embedded", "blichfeldt_classical"}
    assert all(r["error"] == "HypothesisError" for r in out)
    assert all(r["hypothesis"]["actual"] == 1 for r in out)


def test_check_equality_case(write_instance):
    code, text = run("check", write_instance(SHARP_SIMPLEX_INSTANCE))
    assert code == 0
    out = records(text)
    assert {r["bound_name"] for r in out} == {"blichfeldt_adelic", "blichfeldt_embedded", "blichfeldt_classical"}
    for record in out:
        assert record["lhs"] == 5
        assert record["rhs"] == {"exact": "5"}
        assert record["slack"] == {"exact": "0"}


def test_check_combines_instances(write_instance):
    thin = write_instance(THIN_BOX_INSTANCE, "thin.json")
    sharp = write_instance(SHARP_SIMPLEX_INSTANCE, "sharp.json")
    code, text = run("check", sharp, thin, "--bound", "blichfeldt_classical")
    assert code == 3
    assert {r["instance"] for r in records(text)} == {thin, sharp}


def test_check_csv(write_instance):
    code, text = run("check", write_instance(SHARP_SIMPLEX_INSTANCE), "--format", "csv", "--bound", "blichfeldt")
    assert code == 0
    header, row = text.splitlines()
    assert header.startswith("instance,bound,lhs,rhs_exact")
    assert ",blichfeldt_adelic,5,5," in row


def test_example2_json():
    code, text = run("example", "example2")
    assert code == 0
    record = records(text)[0]
    assert record["pairs_volume_zero"] == 2
    assert record["max_disjoint_selection"] == ["abc", "acd"]
    assert record["every_triple_overlaps"]
    assert record["triangulation"]["k"] == 2


def test_figure_svg_is_deterministic():
    first = run("example", "figure1", "--format", "svg")
    second = run("example", "figure1", "--format", "svg")
    assert first[0] == 0
    assert "<svg" in first[1]
    assert first[1] == second[1]


def test_svg_only_for_the_figure(capsys):
    code, _ = run("example", "example1", "--format", "svg")
    assert code == 2
    assert json.loads(capsys.readouterr().err.splitlines()[-1])["error"] == "ParseError"


def test_missing_file(capsys, tmp_path):
    code, text = run("volume", str(tmp_path / "absent.json"))
    assert code == 2
    assert text == ""
    error = json.loads(capsys.readouterr().err.splitlines()[-1])
    assert error["exit_code"] == 2


def test_unsupported_format(write_instance):
    assert run("growth", write_instance(FIGURE1_INSTANCE), "--format", "svg")[0] == 2


def test_growth_needs_four_dilations(write_instance):
    assert run("growth", write_instance(FIGURE1_INSTANCE), "--k-max", "3")[0] == 2


def test_growth(write_instance):
    code, text = run("growth", write_instance(FIGURE1_INSTANCE), "--k-max", "6")
    assert code == 0
    record = records(text)[0]
    assert record["rows"][:2] == [[1, 3], [2, 7]]
    assert record["target"] == 2


def test_triangulate(write_instance):
    code, text = run("triangulate", write_instance(SQUARE_INSTANCE))
    assert code == 0
    record = records(text)[0]
    assert record["place"] == "v1"
    assert (record["k"], record["m"]) == (2, 2)
    assert record["holds"]
    assert record["volume_bound_holds"]


def test_triangulate_bad_place(write_instance):
    assert run("triangulate", write_instance(SQUARE_INSTANCE), "--place", "3")[0] == 2


def test_triangulate_general_body(write_instance):
    assert run("triangulate", write_instance(FIGURE1_INSTANCE))[0] == 3


def test_overrides_are_restored(write_instance):
    width, cap = settings.EMBED_WIDTH, settings.CANDIDATE_CAP
    code, _ = run("--precision", "1/1000", "--cap", "100000", "count", write_instance(FIGURE1_INSTANCE))
    assert code == 0
    assert (settings.EMBED_WIDTH, settings.CANDIDATE_CAP) == (width, cap)


def test_candidate_cap(write_instance):
    assert run("count", write_instance(FIGURE1_INSTANCE), "--dilation", "40", "--cap", "5")[0] == 3


def test_bad_arguments():
    assert run("frobnicate")[0] == 2
    assert run("count")[0] == 2


def test_parser_lists_subcommands():
    help_text = build_parser().format_help()
    for name in ("volume", "count", "check", "example", "growth", "triangulate"):
        assert name in help_text
