#!/usr/bin/env python3
"""Fetch the SNAP com-DBLP dataset used by the reference checks.

Downloads the co-authorship edge list and the ground-truth community
lists into ``data/`` (or ``--dest``).  The files stay gzip-compressed;
every loader in commnet reads ``.gz`` transparently.

The acceptance tests in tests/test_acceptance.py look for the files
under ``$COMMNET_DATA`` or ``<repo>/data`` and skip when absent, so run
this once before exercising the dataset-backed checks.
"""

from __future__ import annotations

import argparse
import sys
import urllib.error
import urllib.request
from pathlib import Path

BASE = "https://snap.stanford.edu/data/bigdata/communities"
FILES = ("com-dblp.ungraph.txt.gz", "com-dblp.all.cmty.txt.gz")
CHUNK = 1 << 20


def fetch(url: str, dest: Path) -> None:
    tmp = dest.with_suffix(dest.suffix + ".part")
    with urllib.request.urlopen(url) as resp, tmp.open("wb") as out:
        while True:
            block = resp.read(CHUNK)
            if not block:
                break
            out.write(block)
    tmp.replace(dest)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument(
        "--dest", type=Path,
        default=Path(__file__).resolve().parents[1] / "data",
        help="target directory (default: <repo>/data)")
    parser.add_argument("--force", action="store_true",
                        help="re-download even if the files exist")
    args = parser.parse_args(argv)

    args.dest.mkdir(parents=True, exist_ok=True)
    for name in FILES:
        target = args.dest / name
        if target.exists() and not args.force:
            print(f"{target} already present, skipping")
            continue
        url = f"{BASE}/{name}"
        print(f"downloading {url}")
        try:
            fetch(url, target)
        except (urllib.error.URLError, OSError) as exc:
            print(f"error: could not fetch {url}: {exc}", file=sys.stderr)
            print("if this host has no internet access, copy the two "
                  f"files into {args.dest} manually", file=sys.stderr)
            return 1
        print(f"wrote {target} ({target.stat().st_size:,} bytes)")
    return 0


if __name__ == "__main__":
    sys.exit(main())
