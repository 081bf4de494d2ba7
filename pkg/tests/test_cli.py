"""Command-line behavior, output formats, and the exit-code contract."""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np
import pytest

from vbisnr import CaptureFile, CaptureHeader, write_capture
from vbisnr.cli import main

from conftest import DATA_DIR


def synth_args(out, **extra):
    args = ["synth", "--sigma", "2.19", "--seed", "7", "--out", str(out)]
    for key, value in extra.items():
        args += [f"--{key.replace('_', '-')}", str(value)]
    return args


@pytest.fixture()
def clean_file(tmp_path):
    path = tmp_path / "clean.vbi"
    assert main(synth_args(path)) == 0
    return path


@pytest.fixture()
def interferer_file(tmp_path):
    path = tmp_path / "noisy.vbi"
    args = synth_args(path) + ["--interferer", "5.5e6,10,0"]
    assert main(args) == 0
    return path


class TestSynth:
    def test_writes_capture_with_frame_count(self, tmp_path, capsys):
        out = tmp_path / "a.vbi"
        assert main(synth_args(out, frames=30)) == 0
        err = capsys.readouterr().err
        assert "clip_count=0" in err
        from vbisnr import read_capture

        assert read_capture(out).header.frames == 30

    def test_interferer_recorded_in_metadata(self, interferer_file):
        from vbisnr import read_capture

        extra = read_capture(interferer_file).header.extra
        assert extra["interferers"] == "5500000.0,10.0,0.0"

    def test_identical_flags_give_bit_identical_files(self, tmp_path):
        a, b = tmp_path / "a.vbi", tmp_path / "b.vbi"
        flags = ["--interferer", "5.5e6,10,0", "--frames", "10"]
        assert main(synth_args(a) + flags) == 0
        assert main(synth_args(b) + flags) == 0
        assert a.read_bytes() == b.read_bytes()

    def test_bad_interferer_flag(self, tmp_path, capsys):
        assert main(synth_args(tmp_path / "x.vbi") + ["--interferer", "oops"]) == 1
        assert "interferer" in capsys.readouterr().err

    def test_unwritable_output_is_io_failure(self, tmp_path):
        assert main(synth_args(tmp_path / "missing" / "x.vbi")) == 2


class TestMeasure:
    def test_clean_capture_reads_forty_db(self, clean_file, capsys):
        assert main(["measure", "--in", str(clean_file), "--json"]) == 0
        result = json.loads(capsys.readouterr().out)
        assert abs(result["snr_db"] - 40.0) < 0.5
        assert result["frames_used"] == 30
        assert result["filtered"] is False

    def test_text_output_names_fields(self, clean_file, capsys):
        assert main(["measure", "--in", str(clean_file)]) == 0
        out = capsys.readouterr().out
        for key in ("v_ref", "v_n", "snr_db", "error_margin", "n_samples"):
            assert key in out
        assert "snr_db 40.0" in out or "snr_db 39.9" in out

    def test_frame_limit_is_exit_one(self, clean_file, capsys):
        assert main(["measure", "--in", str(clean_file), "--frames", "31"]) == 1
        assert "30-frame limit" in capsys.readouterr().err

    def test_filter_flag_changes_result_under_interference(self, interferer_file, capsys):
        assert main(["measure", "--in", str(interferer_file), "--json"]) == 0
        unfiltered = json.loads(capsys.readouterr().out)
        assert main(
            ["measure", "--in", str(interferer_file), "--filter", "on", "--json"]
        ) == 0
        filtered = json.loads(capsys.readouterr().out)
        assert filtered["snr_db"] - unfiltered["snr_db"] > 5.0

    def test_missing_input_is_io_failure(self, tmp_path):
        assert main(["measure", "--in", str(tmp_path / "nope.vbi")]) == 2

    def test_capture_without_vbi_lines_is_exit_three(self, tmp_path, capsys):
        header = CaptureHeader(
            samples_per_line=64, lines_per_frame=2, frames=1, vbi_line_indices=()
        )
        cap = CaptureFile(header=header, samples=np.zeros((1, 2, 64), dtype=np.int32))
        path = tmp_path / "dead.vbi"
        write_capture(cap, path)
        assert main(["measure", "--in", str(path)]) == 3
        assert "clean blanked lines" in capsys.readouterr().err


def make_captures(directory: Path, designations, frames=5, spl=400):
    for i, designation in enumerate(designations):
        path = directory / f"{designation}.vbi"
        args = [
            "synth", "--sigma", "2.19", "--seed", str(100 + i),
            "--frames", str(frames), "--samples-per-line", str(spl),
            "--label", designation, "--out", str(path),
        ]
        assert main(args) == 0


class TestScan:
    def test_full_plan_scan_sorted_by_frequency(self, tmp_path, plan_text, capsys):
        plan_path = tmp_path / "plan.csv"
        plan_path.write_text(plan_text)
        designations = [line.split(",")[0] for line in plan_text.splitlines()[1:]]
        make_captures(tmp_path, designations)
        assert main(
            ["scan", "--plan", str(plan_path), "--captures-dir", str(tmp_path),
             "--format", "csv"]
        ) == 0
        lines = capsys.readouterr().out.splitlines()
        assert len(lines) == 17
        rows = [line.split(",") for line in lines[1:]]
        assert all(row[-1] == "measured" for row in rows)
        freqs = [float(row[2]) for row in rows]
        assert freqs == sorted(freqs)

    def test_empty_captures_dir_still_exits_zero(self, tmp_path, plan_text, capsys):
        plan_path = tmp_path / "plan.csv"
        plan_path.write_text(plan_text)
        empty = tmp_path / "captures"
        empty.mkdir()
        assert main(
            ["scan", "--plan", str(plan_path), "--captures-dir", str(empty),
             "--format", "csv"]
        ) == 0
        rows = capsys.readouterr().out.splitlines()[1:]
        assert len(rows) == 16
        assert all(row.endswith("no-capture") for row in rows)

    def test_corrupt_capture_downgrades_to_no_capture(self, tmp_path, capsys):
        plan_path = tmp_path / "plan.csv"
        plan_path.write_text(
            "designation,name,video_carrier_mhz\nS02,TVR1,112.25\n"
        )
        (tmp_path / "S02.vbi").write_bytes(b"garbage")
        assert main(
            ["scan", "--plan", str(plan_path), "--captures-dir", str(tmp_path),
             "--format", "csv"]
        ) == 0
        out, err = capsys.readouterr()
        assert "no-capture" in out
        assert "skipping" in err

    def test_bad_plan_is_exit_one(self, tmp_path):
        plan_path = tmp_path / "plan.csv"
        plan_path.write_text("designation,name,video_carrier_mhz\nS02,TVR1,9.0\n")
        assert main(
            ["scan", "--plan", str(plan_path), "--captures-dir", str(tmp_path)]
        ) == 1

    def test_missing_captures_dir_is_io_failure(self, tmp_path, plan_text):
        plan_path = tmp_path / "plan.csv"
        plan_path.write_text(plan_text)
        assert main(
            ["scan", "--plan", str(plan_path), "--captures-dir",
             str(tmp_path / "nowhere")]
        ) == 2

    def test_json_output_round_trips(self, tmp_path, capsys):
        plan_path = tmp_path / "plan.csv"
        plan_path.write_text(
            "designation,name,video_carrier_mhz\nS02,TVR1,112.25\n"
        )
        make_captures(tmp_path, ["S02"])
        assert main(
            ["scan", "--plan", str(plan_path), "--captures-dir", str(tmp_path),
             "--format", "json"]
        ) == 0
        from vbisnr import report_from_json

        report = report_from_json(capsys.readouterr().out)
        assert report.rows[0].channel.designation == "S02"
        assert report.rows[0].snr1 is not None

    def test_csv_schema_matches_golden_file(self, tmp_path, plan_text):
        golden = (DATA_DIR / "golden_scan.csv").read_text()
        plan_path = tmp_path / "plan.csv"
        plan_path.write_text(plan_text)
        designations = [line.split(",")[0] for line in plan_text.splitlines()[1:]]
        make_captures(tmp_path, designations[:12])  # four stay unoccupied
        out_path = tmp_path / "report.csv"
        assert main(
            ["scan", "--plan", str(plan_path), "--captures-dir", str(tmp_path),
             "--format", "csv", "--out", str(out_path)]
        ) == 0
        got_lines = out_path.read_text().splitlines()
        want_lines = golden.splitlines()
        assert got_lines[0] == want_lines[0]
        assert len(got_lines) == len(want_lines)
        for got, want in zip(got_lines[1:], want_lines[1:]):
            g, w = got.split(","), want.split(",")
            assert g[0] == w[0] and g[1] == w[1] and g[-1] == w[-1]
            for g_field, w_field in zip(g[2:8], w[2:8]):
                if w_field == "":
                    assert g_field == ""
                else:
                    assert float(g_field) == pytest.approx(float(w_field), rel=1e-9)


def write_plane(path: Path, array):
    np.asarray(array, dtype=np.uint8).tofile(path)


class TestPsnr:
    def test_identical_planes_saturate(self, tmp_path, capsys):
        path = tmp_path / "img.raw"
        write_plane(path, np.arange(64).reshape(8, 8) % 256)
        assert main(
            ["psnr", "--original", str(path), "--decoded", str(path),
             "--width", "8", "--height", "8"]
        ) == 0
        out = capsys.readouterr().out
        assert "psnr_db 100.0" in out and "saturated true" in out

    def test_peak_error_reads_zero_db(self, tmp_path, capsys):
        a, b = tmp_path / "a.raw", tmp_path / "b.raw"
        write_plane(a, np.zeros((8, 8)))
        write_plane(b, np.full((8, 8), 255))
        assert main(
            ["psnr", "--original", str(a), "--decoded", str(b),
             "--width", "8", "--height", "8", "--bits", "8"]
        ) == 0
        assert "psnr_db 0.0" in capsys.readouterr().out

    def test_unit_mse_displays_one_decimal(self, tmp_path, capsys):
        a, b = tmp_path / "a.raw", tmp_path / "b.raw"
        write_plane(a, np.zeros((10, 10)))
        write_plane(b, np.ones((10, 10)))
        assert main(
            ["psnr", "--original", str(a), "--decoded", str(b),
             "--width", "10", "--height", "10"]
        ) == 0
        out = capsys.readouterr().out
        assert "mse 1.000000" in out and "psnr_db 48.1" in out

    def test_planar_three_channel_with_per_channel(self, tmp_path, capsys):
        a, b = tmp_path / "a.raw", tmp_path / "b.raw"
        orig = np.zeros((3, 4, 4))
        dec = orig.copy()
        dec[1] = 2.0
        write_plane(a, orig)
        write_plane(b, dec)
        assert main(
            ["psnr", "--original", str(a), "--decoded", str(b),
             "--width", "4", "--height", "4", "--per-channel"]
        ) == 0
        out = capsys.readouterr().out
        assert "ch0 100.0" in out and "ch1 " in out and "ch2 100.0" in out

    def test_sidecar_header(self, tmp_path, capsys):
        a = tmp_path / "a.raw"
        write_plane(a, np.zeros((6, 5)))
        (tmp_path / "a.raw.hdr").write_text("width=5\nheight=6\n")
        assert main(["psnr", "--original", str(a), "--decoded", str(a)]) == 0
        assert "saturated true" in capsys.readouterr().out

    def test_shape_mismatch_is_exit_one(self, tmp_path, capsys):
        a, b = tmp_path / "a.raw", tmp_path / "b.raw"
        write_plane(a, np.zeros((8, 8)))
        write_plane(b, np.zeros((4, 4)))
        assert main(
            ["psnr", "--original", str(a), "--decoded", str(b),
             "--width", "8", "--height", "8"]
        ) == 1
        assert "neither" in capsys.readouterr().err


class TestSpectrum:
    def test_dc_line_peaks_at_row_zero(self, tmp_path, capsys):
        path = tmp_path / "flat.vbi"
        assert main(["synth", "--sigma", "0", "--frames", "1", "--out", str(path)]) == 0
        assert main(["spectrum", "--in", str(path)]) == 0
        rows = capsys.readouterr().out.splitlines()[1:]
        values = [float(r.split(",")[1]) for r in rows]
        assert values[0] == max(values)
        assert values[0] - max(values[1:]) >= 60.0

    def test_tone_peaks_at_nearest_bin(self, tmp_path, capsys):
        path = tmp_path / "tone.vbi"
        assert main(
            ["synth", "--sigma", "0", "--frames", "1",
             "--interferer", "2e6,10,0", "--out", str(path)]
        ) == 0
        assert main(["spectrum", "--in", str(path), "--fft-size", "1024"]) == 0
        lines = capsys.readouterr().out.splitlines()
        assert lines[0] == "frequency_hz,magnitude_db"
        rows = lines[1:]
        assert len(rows) == 1024 // 2 + 1
        values = [float(r.split(",")[1]) for r in rows]
        peak_row = 1 + int(np.argmax(values[1:]))
        assert peak_row == round(2e6 / 13.5e6 * 1024)
        freq = float(rows[peak_row].split(",")[0])
        assert freq == pytest.approx(peak_row * 13.5e6 / 1024)

    def test_bad_indices_are_exit_one(self, clean_file):
        assert main(["spectrum", "--in", str(clean_file), "--frame", "99"]) == 1
        assert main(["spectrum", "--in", str(clean_file), "--line", "9"]) == 1


class TestPlanValidate:
    def test_valid_plan(self, tmp_path, plan_text, capsys):
        path = tmp_path / "plan.csv"
        path.write_text(plan_text)
        assert main(["plan-validate", "--plan", str(path)]) == 0
        assert "plan ok: 16 channels" in capsys.readouterr().out

    def test_invalid_plan(self, tmp_path, capsys):
        path = tmp_path / "plan.csv"
        path.write_text("designation,name,video_carrier_mhz\nS02,TVR1,112.25\nS02,X,119.25\n")
        assert main(["plan-validate", "--plan", str(path)]) == 1
        assert "duplicate" in capsys.readouterr().err

    def test_missing_plan_file_is_io_failure(self, tmp_path):
        assert main(["plan-validate", "--plan", str(tmp_path / "nope.csv")]) == 2


def test_unknown_flag_is_exit_one(capsys):
    assert main(["measure", "--in", "x", "--bogus"]) == 1
    assert "error:" in capsys.readouterr().err
