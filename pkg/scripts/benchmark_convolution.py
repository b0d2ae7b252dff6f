import argparse
import json
import random
from time import perf_counter
from typing import Any

from qlerch.appell import phi_mock
from qlerch.ring_series import Ring, Series, mul, parse_ring


def parse_args() -> argparse.Namespace:
    parser = argparse.ArgumentParser(prog="benchmark-convolution")
    parser.add_argument(
        "--lengths",
        default="500,1000,2500,5000",
        help="Comma-separated series lengths to benchmark.",
    )
    parser.add_argument(
        "--rings",
        default="mod:5,mod:125,mod:2147483647,int",
        help="Comma-separated ring descriptors (int, rat, mod:M).",
    )
    parser.add_argument("--repeats", type=int, default=3, help="Products timed per length and ring.")
    parser.add_argument("--seed", type=int, default=5, help="Seed for the random coefficients.")
    parser.add_argument(
        "--phi-mock",
        action="store_true",
        help="Also time the full phiMock expansion at each length.",
    )
    return parser.parse_args()


def parse_lengths(raw: str) -> list[int]:
    values = sorted({int(item.strip()) for item in raw.split(",") if item.strip()})
    if not values or any(value <= 0 for value in values):
        raise ValueError("lengths_must_be_positive")
    return values


def parse_rings(raw: str) -> list[Ring]:
    rings = [parse_ring(item) for item in raw.split(",") if item.strip()]
    if not rings:
        raise ValueError("rings_must_not_be_empty")
    return rings


def random_series(rng: random.Random, ring: Ring, length: int) -> Series:
    return Series.build(ring, 0, [rng.randint(-1000, 1000) for _ in range(length)], length)


def benchmark_product(rng: random.Random, ring: Ring, length: int, repeats: int) -> dict[str, Any]:
    f = random_series(rng, ring, length)
    g = random_series(rng, ring, length)
    start = perf_counter()
    for _ in range(repeats):
        mul(f, g)
    elapsed = (perf_counter() - start) / repeats
    return {
        "ring": ring.descriptor,
        "length": length,
        "word_storage": ring.word,
        "seconds_per_product": round(elapsed, 5),
    }


def benchmark_phi_mock(ring: Ring, length: int) -> dict[str, Any]:
    phi_mock.cache_clear()
    start = perf_counter()
    phi_mock(length, ring)
    return {"ring": ring.descriptor, "length": length, "seconds": round(perf_counter() - start, 4)}


def main() -> None:
    args = parse_args()
    lengths = parse_lengths(args.lengths)
    rings = parse_rings(args.rings)
    rng = random.Random(args.seed)

    products: list[dict[str, Any]] = []
    expansions: list[dict[str, Any]] = []
    for ring in rings:
        for length in lengths:
            products.append(benchmark_product(rng, ring, length, args.repeats))
            if args.phi_mock:
                expansions.append(benchmark_phi_mock(ring, length))

    output = {
        "lengths": lengths,
        "repeats": args.repeats,
        "products": products,
        "phi_mock_expansions": expansions,
    }
    print(json.dumps(output, indent=2))


if __name__ == "__main__":
    main()
