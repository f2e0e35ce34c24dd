"""Stability verdicts and dominant singularities for every model file in a directory."""

import argparse
from pathlib import Path

from aggrec.cli.modelio import load_model
from aggrec.risk import stability_report


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("directory", nargs="?", default=str(Path(__file__).resolve().parent.parent / "models"))
    args = ap.parse_args()
    for path in sorted(Path(args.directory).glob("*.json")):
        rep = stability_report(load_model(str(path)).model).to_json()
        sing = ", ".join(f"{s['point']} (x{s['multiplicity']})" for s in rep["dominant_singularities"]) or "-"
        roots = ""
        if rep["indicial"]:
            roots = " ".join(r for r, _ in rep["indicial"]["rational_roots"]) + " " + \
                " ".join(rep["indicial"]["numeric_roots"])
        kinds = ", ".join(sorted(set(rep["classification"].values())))
        print(f"{path.stem:28s} {rep['verdict']:13s} singularity {sing:28s} {kinds:20s} indicial roots: {roots.strip()}")


if __name__ == "__main__":
    main()
