"""Command-line interface: subcommands, exit codes, determinism."""

import json

from click.testing import CliRunner

from geckograph.cli import main


def run(*args, **kw):
    return CliRunner().invoke(main, list(args), color=True, **kw)


class TestRender:
    def test_svg_to_stdout(self):
        result = run("render", "Zero a -> Hero a")
        assert result.exit_code == 0
        assert result.output.startswith("<?xml")
        assert "data-path" in result.output

    def test_byte_identical_across_runs(self):
        a = run("render", "Eq a => Maybe a -> a").output
        b = run("render", "Eq a => Maybe a -> a").output
        assert a == b

    def test_ansi_badges_under_both_occurrences(self):
        result = run("render", "Eq a => a -> a -> Bool", "--format", "ansi")
        assert result.exit_code == 0
        assert result.output.splitlines()[-1].count("■") == 2

    def test_out_file(self, tmp_path):
        target = tmp_path / "out.svg"
        result = run("render", "Maybe a", "--out", str(target))
        assert result.exit_code == 0
        assert target.read_text().startswith("<?xml")

    def test_parse_error_exit_1(self):
        result = run("render", "Zero a ->")
        assert result.exit_code == 1
        assert "offset" in result.output

    def test_compact_mode(self):
        full = run("render", "Maybe a").output
        compact = run("render", "Maybe a", "--mode", "compact").output
        assert "<text" in full and "<text" not in compact


class TestDiff:
    def test_json_fig1(self):
        result = run("diff", "Char", "t0 a0", "--format", "json")
        assert result.exit_code == 0
        report = json.loads(result.output)
        assert [r["kind"] for r in report["regions"]] == ["LeafVsStructure"]

    def test_svg_emits_two_documents(self):
        result = run("diff", "Maybe a", "Maybe (Maybe a)", "--format", "svg")
        assert result.exit_code == 0
        assert result.output.count("<?xml") == 2


class TestVerifyLevels:
    def test_default_levels(self):
        result = run("verify-levels", "--max-depth", "8")
        assert result.exit_code == 0
        out = result.output
        for n in (1, 2, 3, 4, 6, 7, 8, 10):
            assert f"level {n:2}: solution verified" in out
        for n in (5, 9):
            assert f"level {n:2}: solution FLAGGED" in out
        assert "levels [5, 9]" in out
        assert "no witness found" in out  # level 9

    def test_missing_file_exit(self):
        result = run("verify-levels", "--levels", "/nonexistent.json")
        assert result.exit_code == 2  # click usage error: path must exist


class TestPlay:
    def test_scripted_session(self):
        script = "zeroToHero z = f z\n:skip\n:quit\n"
        result = run("play", "--gecko", "off", input=script)
        assert result.exit_code == 0
        assert "Level 1" in result.output
        assert "correct!" in result.output
        assert "skips remaining: 3" in result.output

    def test_wrong_attempt_shows_inferred(self):
        script = "zeroToHero z = f z\nzeroToHero z = runZero z\n:quit\n"
        result = run("play", "--gecko", "off", input=script)
        assert "wrong_signature" in result.output
        assert "inferred" in result.output

    def test_skip_budget_in_play(self):
        script = ":skip\n" * 5 + ":quit\n"
        result = run("play", "--gecko", "off", input=script)
        assert "no skips remaining" in result.output

    def test_gecko_on_shows_ansi(self):
        script = ":quit\n"
        result = run("play", "--gecko", "on", input=script)
        assert "\x1b[38;5;" in result.output


class TestUsage:
    def test_unknown_command_exit_2(self):
        assert run("bogus").exit_code == 2

    def test_missing_argument_exit_2(self):
        assert run("render").exit_code == 2

    def test_help(self):
        result = run("--help")
        assert result.exit_code == 0
        for cmd in ("render", "diff", "play", "serve", "verify-levels"):
            assert cmd in result.output
