#!/usr/bin/env python3
"""Build the small MNIST / fashion-MNIST IDX subsets stored under data/.

Sources (fetched through the package managers, no direct dataset download):
  * MNIST: the 5000-sample CSV bundled in the `mlxtend` wheel (500 per digit).
  * fashion-MNIST: the per-class JSON dumps bundled in the `fashion-mnist`
    npm package.

Images are written interleaved by class (0,1,2,...,0,1,2,...) so that taking
the first N images of a file yields a class-balanced sample.
"""

import argparse
import gzip
import json
import pathlib
import struct
import subprocess
import sys
import tarfile
import tempfile
import zipfile

ROWS = COLS = 28


def write_idx(path, images, labels):
    path = pathlib.Path(path)
    with open(path.with_name(path.name + "-images-idx3-ubyte"), "wb") as f:
        f.write(struct.pack(">IIII", 2051, len(images), ROWS, COLS))
        for img in images:
            f.write(bytes(img))
    with open(path.with_name(path.name + "-labels-idx1-ubyte"), "wb") as f:
        f.write(struct.pack(">II", 2049, len(labels)))
        f.write(bytes(labels))


def interleave(per_class, classes, start, count):
    images, labels = [], []
    for k in range(start, start + count):
        for c in classes:
            images.append(per_class[c][k])
            labels.append(c)
    return images, labels


def fetch_mnist(tmp):
    subprocess.run([sys.executable, "-m", "pip", "download", "--no-deps",
                    "--dest", tmp, "mlxtend==0.24.0"], check=True)
    wheel = next(pathlib.Path(tmp).glob("mlxtend-*.whl"))
    raw = zipfile.ZipFile(wheel).read("mlxtend/data/data/mnist_5k.csv.gz")
    per_class = {c: [] for c in range(10)}
    for line in gzip.decompress(raw).decode().splitlines():
        values = [int(float(v)) for v in line.split(",")]
        per_class[values[-1]].append(values[:-1])
    return per_class


def fetch_fashion(tmp):
    subprocess.run(["npm", "pack", "fashion-mnist@1.1.0",
                    "--pack-destination", tmp], check=True)
    tgz = next(pathlib.Path(tmp).glob("fashion-mnist-*.tgz"))
    per_class = {}
    with tarfile.open(tgz) as tar:
        for c in range(10):
            member = tar.extractfile(f"package/src/clothes/{c}.json")
            per_class[c] = json.load(member)["data"]
    return per_class


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default=pathlib.Path(__file__).resolve().parents[1] / "data")
    args = parser.parse_args()
    out = pathlib.Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    with tempfile.TemporaryDirectory() as tmp:
        mnist = fetch_mnist(tmp)
        digits = list(range(10))
        write_idx(out / "mnist-train", *interleave(mnist, digits, 0, 60))
        write_idx(out / "mnist-test", *interleave(mnist, digits, 60, 20))

        fashion = fetch_fashion(tmp)
        subset = [0, 2, 3]
        write_idx(out / "fashion-train", *interleave(fashion, subset, 0, 60))
        write_idx(out / "fashion-test", *interleave(fashion, subset, 60, 20))
    print(f"wrote IDX subsets to {out}")


if __name__ == "__main__":
    main()
