import json
import warnings
from pathlib import Path

import pytest

from commutator_maps import cache as cache_mod
from commutator_maps import __version__
from commutator_maps.cache import CacheWarning, cache_roundtrip, cached_table
from commutator_maps.cli import RunConfig, main, run
from commutator_maps.groups import group_new

GOLDEN = Path(__file__).parent / "golden"

# name -> argv; regenerate with `python tests/test_cli.py`
GOLDEN_RUNS = {
    "info_A5": ["info", "--group", "A5", "--format", "json"],
    "fibers_PSL2_7": ["fibers", "--group", "PSL2(7)", "--format", "json"],
    "fibers_squares_S4": ["fibers", "--group", "S4", "--word", "x1^2x2^2", "--format", "json"],
    "closed_forms_q7": ["closed-forms", "--q", "7", "--format", "json"],
    "zeta_A": ["zeta", "--family", "A", "--params", "5,6,7,8,9", "--s", "2", "--format", "json"],
    "components_A5": ["components", "--group", "A5", "--extended", "--format", "json"],
    "walk_A5": ["walk", "--group", "A5", "--seed", "5", "--steps", "3", "--burn-in", "20",
                "--samples", "8", "--format", "json"],
}


def _run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.mark.parametrize("name", sorted(GOLDEN_RUNS))
def test_golden_reports(name, capsys, monkeypatch):
    monkeypatch.delenv(cache_mod.ENV_VAR, raising=False)
    code, out, _ = _run(GOLDEN_RUNS[name], capsys)
    assert code == 0
    expected = json.loads((GOLDEN / f"{name}.json").read_text())
    got = json.loads(out)
    expected["header"]["version"] = got["header"]["version"]
    assert got == expected


def test_header_fields(capsys, monkeypatch):
    monkeypatch.delenv(cache_mod.ENV_VAR, raising=False)
    _, out, _ = _run(["info", "--group", "S3"], capsys)
    lines = out.splitlines()
    assert lines[0] == "# tool: commutator-maps"
    assert f"# version: {__version__}" in lines
    assert any(x.startswith("# convention: left-to-right") for x in lines)
    assert "# cache: disabled" in lines


@pytest.mark.parametrize("argv,code", [
    (["info", "--group", "Q8"], 2),
    (["info", "--group", "S12"], 2),
    (["fibers", "--group", "A5", "--word", "x1^"], 2),
    (["tsystems", "--group", "A6"], 2),
    (["fibers", "--group", "A6", "--word", "[[x1,x2],[x3,x4]]", "--mode", "brute"], 3),
    (["tsystems", "--group", "PSL2(13)", "--k", "3"], 3),
    (["bound-check", "--group", "A5"], 0),
    (["census", "--group", "PSL2(7)"], 0),
])
def test_exit_codes(argv, code, capsys, monkeypatch):
    monkeypatch.delenv(cache_mod.ENV_VAR, raising=False)
    got, _, err = _run(argv, capsys)
    assert got == code
    if code:
        assert err.startswith("error:")


def test_mismatch_exit(capsys, monkeypatch):
    import commutator_maps.cli as cli
    real = cli.frobenius_fibers

    def broken(table, classes=None):
        f = real(table, classes)
        counts = list(f.counts)
        counts[0] -= f.class_sizes[1]
        counts[1] += 1
        return type(f)(tuple(counts), f.class_sizes, f.domain_size, f.word, f.exhaustive)

    monkeypatch.setattr(cli, "frobenius_fibers", broken)
    monkeypatch.delenv(cache_mod.ENV_VAR, raising=False)
    code, _, err = _run(["fibers", "--group", "A4", "--mode", "both"], capsys)
    assert code == 4 and "mismatch" in err


def test_formats_agree():
    cfg = RunConfig("fibers", group="A5", mode="both")
    text = run(cfg)[0]
    csv = run(RunConfig("fibers", group="A5", mode="both", fmt="csv"))[0]
    js = json.loads(run(RunConfig("fibers", group="A5", mode="both", fmt="json"))[0])
    assert [r["N_brute"] for r in js["rows"]] == [300, 32, 63, 65, 65]
    assert "65" in text and csv.count("\n") > 5


def test_canonical_roundtrip():
    cfg = RunConfig("walk", group="PSL2(7)", k=3, seed=9, steps=4, burn_in=10, samples=100,
                    extended=True, eps="3/4", s=2.0, fmt="csv", cache_dir="/tmp/x")
    back = RunConfig.from_canonical(cfg.canonical(), cache_dir="/tmp/x")
    assert back == cfg
    assert "cache_dir" not in cfg.canonical()


def test_byte_identical_reruns():
    for cfg in (RunConfig("walk", group="A5", k=3, seed=1, steps=5, burn_in=50, samples=500),
                RunConfig("bound-check", group="S4", seed=2, samples=10),
                RunConfig("census", group="A5"),
                RunConfig("fibers", group="A5", word="[[x1,x2],x3]", mode="sampled", seed=4,
                          samples=5000, fmt="csv")):
        assert run(cfg) == run(cfg)


def test_cache_hit_identical_report(tmp_path):
    cfg = RunConfig("info", group="PSL2(8)", cache_dir=str(tmp_path))
    first = run(cfg)
    assert list(tmp_path.glob("*.tsv"))
    assert run(cfg) == first
    assert run(RunConfig("info", group="PSL2(8)", cache_dir=str(tmp_path / "other"))) == first


def test_cache_status(tmp_path):
    G = group_new("A5")
    assert cached_table(G, None)[1] == "disabled"
    assert cached_table(G, tmp_path)[1] == "miss"
    assert cached_table(G, tmp_path)[1] == "hit"


def test_cache_corrupted_record(tmp_path):
    G = group_new("S4")
    cached_table(G, tmp_path)
    path = next(tmp_path.glob("*.tsv"))
    text = path.read_text()
    path.write_text(text.replace("\t24\t", "\t25\t", 1))
    with pytest.warns(CacheWarning, match="checksum"):
        table, status = cached_table(G, tmp_path)
    assert status == "recomputed" and table.group_order == 24
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        assert cached_table(G, tmp_path)[1] == "hit"


def test_cache_truncated_record(tmp_path):
    G = group_new("A4")
    cached_table(G, tmp_path)
    path = next(tmp_path.glob("*.tsv"))
    path.write_text(path.read_text()[:40])
    with pytest.warns(CacheWarning):
        assert cached_table(G, tmp_path)[1] == "recomputed"


def test_cache_version_bump(tmp_path, monkeypatch):
    G = group_new("A5")
    cached_table(G, tmp_path)
    monkeypatch.setattr(cache_mod, "FORMAT_VERSION", "cmtable-next")
    with pytest.warns(CacheWarning, match="format version"):
        assert cached_table(G, tmp_path)[1] == "recomputed"
    assert cached_table(G, tmp_path)[1] == "hit"


def test_cache_other_group_record(tmp_path):
    A5, P4 = group_new("A5"), group_new("PSL2(4)")
    cached_table(A5, tmp_path)
    src = next(tmp_path.glob("A5.tsv"))
    dst = cache_mod._record_path(tmp_path, P4)
    dst.write_text(src.read_text())
    with pytest.warns(CacheWarning, match="digest"):
        assert cached_table(P4, tmp_path)[1] == "recomputed"


@pytest.mark.parametrize("desc", ["S3", "A5", "PSL2(7)", "PSL2(9)", "C12", "S3xC2"])
def test_cache_roundtrip_exact(desc, tmp_path):
    r = cache_roundtrip(group_new(desc), tmp_path)
    assert r == {"exact_equal": True, "mirror_equal": True, "downstream_equal": True}


def test_env_var_cache(tmp_path, monkeypatch, capsys):
    monkeypatch.setenv(cache_mod.ENV_VAR, str(tmp_path))
    code, out, _ = _run(["info", "--group", "A4"], capsys)
    assert code == 0 and "# cache: enabled" in out
    assert (tmp_path / "A4.tsv").exists()


if __name__ == "__main__":
    import contextlib
    import io
    GOLDEN.mkdir(exist_ok=True)
    for name, argv in GOLDEN_RUNS.items():
        buf = io.StringIO()
        with contextlib.redirect_stdout(buf):
            assert main(argv) == 0
        (GOLDEN / f"{name}.json").write_text(buf.getvalue())
