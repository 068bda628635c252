#!/usr/bin/env python3
"""Extract the <=N-crossing prime knot table from the database_knotinfo package.

Usage: pip download database_knotinfo --no-deps; then
    python3 tools/extract_knotinfo.py path/to/knotinfo_data_complete.csv > data/knots_le10.tsv
"""
import argparse
import ast
import csv
import sys


def unknotting(text):
    text = text.strip()
    if text.startswith("["):
        lo, hi = ast.literal_eval(text)
        return f"{lo}..{hi}"
    return text


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("source")
    ap.add_argument("--max-crossings", type=int, default=10)
    args = ap.parse_args()

    csv.field_size_limit(10**9)
    with open(args.source, newline="") as fh:
        reader = csv.reader(fh, delimiter="|")
        header = next(reader)
        next(reader)  # human-readable column titles
        col = {c: i for i, c in enumerate(header)}
        out = csv.writer(sys.stdout, delimiter="\t", lineterminator="\n")
        out.writerow(["name", "crossing_number", "seifert_matrix", "signature",
                      "determinant", "s_invariant", "tau_invariant",
                      "unknotting_number", "alternating", "bridge_index",
                      "symmetry_type"])
        for row in reader:
            cn = row[col["crossing_number"]]
            if not cn.isdigit() or not 0 < int(cn) <= args.max_crossings:
                continue
            matrix = ast.literal_eval(row[col["seifert_matrix"]])
            out.writerow([
                row[col["name"]], cn,
                "[" + ",".join("[" + ",".join(str(v) for v in r) + "]" for r in matrix) + "]",
                row[col["signature"]], row[col["determinant"]],
                row[col["rasmussen_invariant"]],
                row[col["ozsvath_szabo_tau_invariant"]],
                unknotting(row[col["unknotting_number"]]),
                row[col["alternating"]], row[col["bridge_index"]],
                row[col["symmetry_type"]].strip(),
            ])


if __name__ == "__main__":
    main()
