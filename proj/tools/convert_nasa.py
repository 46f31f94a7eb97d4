#!/usr/bin/env python3
"""Convert NASA PCoE battery .mat archives to the canonical cycling CSV layout.

Usage:
    python3 tools/convert_nasa.py B0005.mat data/B0005.csv

Keeps discharge cycles only (renumbered 1..N in file order) and emits the
columns `cycle,time_s,voltage_v,current_a,temperature_c`.
Requires scipy and numpy.
"""

import argparse
import csv
import sys

import numpy as np
import scipy.io


def discharge_cycles(mat_path):
    mat = scipy.io.loadmat(mat_path, simplify_cells=True)
    name = next(k for k in mat if not k.startswith("__"))
    cycles = mat[name]["cycle"]
    if isinstance(cycles, dict):  # single-cycle edge case
        cycles = [cycles]
    out = []
    for entry in cycles:
        if str(entry["type"]).strip().lower() != "discharge":
            continue
        data = entry["data"]
        out.append(
            {
                "time_s": np.asarray(data["Time"], dtype=float).ravel(),
                "voltage_v": np.asarray(data["Voltage_measured"], dtype=float).ravel(),
                "current_a": np.asarray(data["Current_measured"], dtype=float).ravel(),
                "temperature_c": np.asarray(data["Temperature_measured"], dtype=float).ravel(),
            }
        )
    return out


def dedupe_time(cycle):
    """Drop rows that do not strictly advance the timestamp."""
    t = cycle["time_s"]
    keep = np.ones(len(t), dtype=bool)
    last = -np.inf
    for i, ti in enumerate(t):
        if np.isfinite(ti) and ti > last:
            last = ti
        else:
            keep[i] = False
    return {k: v[keep] for k, v in cycle.items()}


def main():
    parser = argparse.ArgumentParser(description=__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("mat_path", help="NASA .mat archive (e.g. B0005.mat)")
    parser.add_argument("csv_path", help="output CSV path")
    args = parser.parse_args()

    cycles = [dedupe_time(c) for c in discharge_cycles(args.mat_path)]
    cycles = [c for c in cycles if len(c["time_s"]) >= 2]
    if not cycles:
        sys.exit("no usable discharge cycles found in " + args.mat_path)

    with open(args.csv_path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["cycle", "time_s", "voltage_v", "current_a", "temperature_c"])
        for idx, c in enumerate(cycles, start=1):
            for t, v, i, temp in zip(c["time_s"], c["voltage_v"], c["current_a"],
                                     c["temperature_c"]):
                writer.writerow([idx, repr(float(t)), repr(float(v)), repr(float(i)),
                                 repr(float(temp))])
    print(f"wrote {args.csv_path}: {len(cycles)} discharge cycles")


if __name__ == "__main__":
    main()
