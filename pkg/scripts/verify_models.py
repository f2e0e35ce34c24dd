"""Cross-check every model file: recurrence against the convolution and Panjer oracles."""

import argparse
import sys
from pathlib import Path

from aggrec.cli import main as cli_main


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("directory", nargs="?", default=str(Path(__file__).resolve().parent.parent / "models"))
    ap.add_argument("--n", type=int, default=200)
    ap.add_argument("--digits", type=int, default=30)
    args = ap.parse_args()
    failed = 0
    for path in sorted(Path(args.directory).glob("*.json")):
        print(f"== {path.stem}", flush=True)
        rc = cli_main(["verify", "--model", str(path), "--n", str(args.n), "--digits", str(args.digits)])
        failed += rc != 0
    sys.exit(1 if failed else 0)


if __name__ == "__main__":
    main()
