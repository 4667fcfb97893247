#!/usr/bin/env python3
"""Regenerate the bundled skin swatch PPMs under data/skin_swatches/.

Each base tone is rendered as a 5x4 swatch of shaded, lightly jittered
variants. The output is deterministic (fixed seed), so re-running this
script reproduces the files byte for byte. The default skin range in
include/headmouse/color.hpp is fitted from these files with
`headmouse calibrate-skin --swatches data/skin_swatches`.
"""
import argparse
import pathlib
import random

# name, (r, g, b)
BASE_TONES = [
    ("light_ffe0bd", (255, 224, 189)),
    ("light_ffdbac", (255, 219, 172)),
    ("light_e6bc98", (230, 188, 152)),
    ("light_f1c27d", (241, 194, 125)),
    ("medium_e0ac69", (224, 172, 105)),
    ("medium_d4aa78", (212, 170, 120)),
    ("medium_c68642", (198, 134, 66)),
    ("medium_a16e4b", (161, 110, 75)),
    ("dark_8d5524", (141, 85, 36)),
    ("dark_6b4423", (107, 68, 35)),
    ("dark_5c3836", (92, 56, 54)),
    ("dark_3b2219", (59, 34, 25)),
]

WIDTH, HEIGHT = 5, 4
SEED = 20240501


def clamp(v):
    return max(0, min(255, int(round(v))))


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--out", default=str(pathlib.Path(__file__).resolve().parent.parent / "data" / "skin_swatches"))
    args = parser.parse_args()
    out = pathlib.Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    rng = random.Random(SEED)
    n = WIDTH * HEIGHT
    for name, (r, g, b) in BASE_TONES:
        data = bytearray()
        for i in range(n):
            shade = 0.75 + 0.30 * i / (n - 1)
            px = [clamp(c * shade + rng.randint(-3, 3)) for c in (r, g, b)]
            data.extend(px)
        header = f"P6\n{WIDTH} {HEIGHT}\n255\n".encode("ascii")
        (out / f"{name}.ppm").write_bytes(header + bytes(data))


if __name__ == "__main__":
    main()
