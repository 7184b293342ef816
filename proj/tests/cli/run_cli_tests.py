#!/usr/bin/env python3
"""End-to-end checks of the freev CLI surface (pass the binary path as argv[1])."""

import json
import os
import struct
import subprocess
import sys
import tempfile


def run(binary, *args, expect_fail=False):
    proc = subprocess.run([binary, *args], capture_output=True, text=True)
    if expect_fail:
        assert proc.returncode != 0, f"expected failure: {args}\n{proc.stdout}{proc.stderr}"
    else:
        assert proc.returncode == 0, f"command failed: {args}\n{proc.stdout}{proc.stderr}"
    return proc


def read_fvt_dims(path):
    with open(path, "rb") as f:
        magic = f.read(4)
        assert magic == b"FVT1", magic
        (dtype,) = struct.unpack("<I", f.read(4))
        assert dtype == 1
        (ndim,) = struct.unpack("<I", f.read(4))
        return struct.unpack(f"<{ndim}Q", f.read(8 * ndim))


def main():
    binary = sys.argv[1]
    tmp = tempfile.mkdtemp(prefix="freev_cli_")

    # gen-weights -> vocode pipeline on a synthesized feature file
    weights = os.path.join(tmp, "w.fvw")
    out = run(binary, "gen-weights", "--seed", "7", "--out", weights,
              "--psp-blocks", "1", "--report-params")
    report = json.loads(out.stdout[out.stdout.index("{"):])
    assert report["total_parameters"] < report["apnet2_shaped_total_parameters"]

    # features on a generated wav: synthesize via python (sine, 1 s, 22050)
    import math
    import wave
    wav_path = os.path.join(tmp, "in.wav")
    with wave.open(wav_path, "wb") as w:
        w.setnchannels(1)
        w.setsampwidth(2)
        w.setframerate(22050)
        frames = bytearray()
        for i in range(22050):
            v = int(12000 * math.sin(2 * math.pi * 220 * i / 22050))
            frames += struct.pack("<h", v)
        w.writeframes(bytes(frames))

    prefix = os.path.join(tmp, "feat")
    out = run(binary, "features", "--in", wav_path, "--out-prefix", prefix)
    assert "mel:" in out.stdout
    dims = read_fvt_dims(prefix + ".mel.fvt")
    assert dims == (1 + 22050 // 256, 80), dims    # 87 frames
    assert read_fvt_dims(prefix + ".amp.fvt") == (87, 513)

    # FVT1 rewrite is byte-identical
    before = open(prefix + ".mel.fvt", "rb").read()
    run(binary, "features", "--in", wav_path, "--out-prefix", prefix)
    after = open(prefix + ".mel.fvt", "rb").read()
    assert before == after

    # vocode twice: stable output bytes
    wav_out1 = os.path.join(tmp, "out1.wav")
    wav_out2 = os.path.join(tmp, "out2.wav")
    run(binary, "vocode", "--weights", weights, "--mel", prefix + ".mel.fvt", "--out", wav_out1)
    run(binary, "vocode", "--weights", weights, "--mel", prefix + ".mel.fvt", "--out", wav_out2)
    assert open(wav_out1, "rb").read() == open(wav_out2, "rb").read()
    # duration within one hop of the input duration
    with wave.open(wav_out1, "rb") as w:
        assert abs(w.getnframes() - 22050) <= 256

    # losses on identical files -> zero total
    out = run(binary, "losses", "--pred", wav_path, "--ref", wav_path)
    losses = json.loads(out.stdout)
    assert losses["total"] < 1e-6, losses

    # eval on identical dirs -> MCD 0, STOI 1
    ref_dir = os.path.join(tmp, "ref")
    os.makedirs(ref_dir)
    os.replace(wav_path, os.path.join(ref_dir, "a.wav"))
    out = run(binary, "eval", "--ref", ref_dir, "--deg", ref_dir,
              "--out", os.path.join(tmp, "eval.json"))
    agg = json.load(open(os.path.join(tmp, "eval.json")))["aggregate"]
    assert agg["mcd"] < 1e-6
    assert abs(agg["stoi"] - 1.0) < 1e-6

    # bench-prior on a small fixture set, then plot
    bench_json = os.path.join(tmp, "bench.json")
    out = run(binary, "bench-prior", "--fixtures", "3", "--seconds", "0.6",
              "--methods", "pi,pi-abs", "--reps", "3", "--out", bench_json)
    assert "LAS-RMSE" in out.stdout
    bench = json.load(open(bench_json))
    assert len(bench["methods"]) == 2

    svg_path = os.path.join(tmp, "bench.svg")
    run(binary, "plot", "--report", bench_json, "--out", svg_path)
    svg = open(svg_path).read()
    assert "<svg" in svg and "PI" in svg

    # single-method report has one row
    run(binary, "bench-prior", "--fixtures", "1", "--seconds", "0.4", "--methods", "pi",
        "--reps", "2", "--out", bench_json)
    assert len(json.load(open(bench_json))["methods"]) == 1

    # config propagation: a different n_fft changes feature shapes coherently
    cfg_path = os.path.join(tmp, "alt.toml")
    with open(cfg_path, "w") as f:
        f.write("[spectral]\nn_fft = 512\nwin_length = 512\nhop = 128\n")
    run(binary, "features", "--in", os.path.join(ref_dir, "a.wav"),
        "--out-prefix", prefix + "_alt", "--config", cfg_path)
    assert read_fvt_dims(prefix + "_alt.amp.fvt")[1] == 257

    # malformed config is a loud failure
    with open(cfg_path, "w") as f:
        f.write("[spectral]\nn_fftt = 512\n")
    run(binary, "features", "--in", os.path.join(ref_dir, "a.wav"),
        "--out-prefix", prefix, "--config", cfg_path, expect_fail=True)

    # wrong sample rate is a hard error (no implicit resampling)
    wav48 = os.path.join(tmp, "x48.wav")
    with wave.open(wav48, "wb") as w:
        w.setnchannels(1)
        w.setsampwidth(2)
        w.setframerate(48000)
        w.writeframes(b"\x00\x00" * 48000)
    run(binary, "features", "--in", wav48, "--out-prefix", prefix, expect_fail=True)

    # plot with an empty/malformed report fails nonzero
    bad = os.path.join(tmp, "bad.json")
    with open(bad, "w") as f:
        f.write("{\"methods\": []}")
    run(binary, "plot", "--report", bad, "--out", svg_path, expect_fail=True)

    print("cli tests passed")


if __name__ == "__main__":
    main()
