#!/usr/bin/env python3
"""
TSPLIB Downloader
Fetches the benchmark instances (gzipped .tsp files) from the TSPLIB95 site.
"""

import argparse
import gzip
import sys
from pathlib import Path

import requests

sys.path.insert(0, str(Path(__file__).resolve().parent.parent))

from config import KNOWN_OPTIMA, TSPLIB_DIR, TSPLIB_URL


def download_instance(name, output_path=TSPLIB_DIR):
    """Download <name>.tsp.gz and store it decompressed as <name>.tsp"""
    output_path = Path(output_path)
    output_path.mkdir(parents=True, exist_ok=True)
    target = output_path / f"{name}.tsp"
    if target.exists():
        print(f"✅ {target} already present")
        return True

    url = f"{TSPLIB_URL}/{name}.tsp.gz"
    try:
        print(f"Downloading: {url}")
        response = requests.get(url, timeout=60)
        response.raise_for_status()
        target.write_bytes(gzip.decompress(response.content))
        print(f"📄 Saved {target}")
    except (requests.exceptions.RequestException, OSError) as e:
        print(f"❌ Download of {name} failed: {e}")
        return False
    return True


def main():
    parser = argparse.ArgumentParser(description="Download TSPLIB benchmark instances")
    parser.add_argument("names", nargs="*", default=sorted(KNOWN_OPTIMA),
                        help="instance names (default: all benchmark instances)")
    parser.add_argument("-o", "--output", default=str(TSPLIB_DIR),
                        help=f"output directory (default: {TSPLIB_DIR})")
    args = parser.parse_args()

    failed = [name for name in args.names if not download_instance(name, args.output)]
    if failed:
        print(f"⚠️ Failed: {', '.join(failed)}")
        sys.exit(1)
    print("✅ All instances downloaded")


if __name__ == "__main__":
    main()
