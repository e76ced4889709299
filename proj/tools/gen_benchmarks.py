#!/usr/bin/env python3
"""Regenerate benchmarks/lut{4,6}/*.blif from benchmarks/verilog/*.v.

Table-driven designs (cavlc, ctrl) are written from a seeded generator first.
Needs yowasp-yosys (pip install yowasp-yosys).
"""

import argparse
import random
import shutil
import subprocess
import sys
import tempfile
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
VERILOG = ROOT / "benchmarks" / "verilog"


def table_module(name, comment, n_in, n_out, seed, density):
    rng = random.Random(seed)
    lines = [f"// {comment}",
             f"module {name}(input [{n_in - 1}:0] x, output reg [{n_out - 1}:0] y);",
             "  always @*",
             "    case (x)"]
    for m in range(1 << n_in):
        if rng.random() < density:
            word = rng.getrandbits(n_out)
            lines.append(f"      {n_in}'d{m}: y = {n_out}'h{word:x};")
    lines += [f"      default: y = {n_out}'h0;", "    endcase", "endmodule", ""]
    return "\n".join(lines)


def write_tables():
    (VERILOG / "cavlc.v").write_text(
        table_module("cavlc", "coefficient-token style lookup: 10 inputs, 11 outputs", 10, 11, 7, 0.35))
    (VERILOG / "ctrl.v").write_text(
        table_module("ctrl", "opcode decoder: 7 inputs, 26 control outputs", 7, 26, 11, 0.6))


def synthesize(src, lut, out, yosys):
    top = src.stem
    with tempfile.TemporaryDirectory(dir=ROOT) as tmp:
        # yowasp runs in a sandbox that only sees paths below the working directory
        local = Path(tmp) / src.name
        shutil.copy(src, local)
        script = (f"read_verilog {local.name}; synth -flatten -top {top}; "
                  f"dfflegalize -cell $_DFF_P_ 01; abc -lut {lut}; opt_clean -purge; setundef -zero; "
                  f"write_blif -buf buf_ A Y {top}.blif")
        run = subprocess.run([yosys, "-q", "-p", script], cwd=tmp, capture_output=True, text=True)
        if run.returncode != 0:
            sys.exit(f"yosys failed on {src.name} (LUT{lut}):\n{run.stderr}")
        text = (Path(tmp) / f"{top}.blif").read_text()
    out.write_text(normalize(text))


def normalize(text):
    """Rewrite yosys buffer cells as single-input covers and drop yosys-only directives."""
    lines = []
    for line in text.splitlines():
        tok = line.split()
        if tok and tok[0] == ".subckt" and tok[1] == "buf_":
            pins = dict(t.split("=", 1) for t in tok[2:])
            lines += [f".names {pins['A']} {pins['Y']}", "1 1"]
        elif tok and tok[0] in (".attr", ".param", ".cname"):
            continue
        else:
            lines.append(line)
    return "\n".join(lines) + "\n"


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--yosys", default="yowasp-yosys")
    ap.add_argument("--only", nargs="*", help="design names to regenerate")
    args = ap.parse_args()
    write_tables()
    for lut in (4, 6):
        (ROOT / "benchmarks" / f"lut{lut}").mkdir(parents=True, exist_ok=True)
    for src in sorted(VERILOG.glob("*.v")):
        if args.only and src.stem not in args.only:
            continue
        for lut in (4, 6):
            out = ROOT / "benchmarks" / f"lut{lut}" / f"{src.stem}.blif"
            synthesize(src, lut, out, args.yosys)
            print(f"{out.relative_to(ROOT)}")


if __name__ == "__main__":
    main()
