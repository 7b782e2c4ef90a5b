#!/usr/bin/env python3
"""Regenerate the checked-in test fixtures.

frames12: 168x112 PNG frames at 1 fps. Frames 0-5 are red with a darker
same-hue square sliding right and down; frames 6-11 switch to cyan. The only
hue change sits between frames 5 and 6, so every scoring method must put its
argmax at pair index 5.
"""
import json
import os

from PIL import Image

HERE = os.path.dirname(os.path.abspath(__file__))
OUT = os.path.join(HERE, os.pardir, "tests", "fixtures", "frames12")

W, H = 168, 112
SQUARE = 28


def make_frame(base, square, offset):
    img = Image.new("RGB", (W, H), base)
    px = img.load()
    x0 = 8 + 4 * offset
    y0 = 8 + 4 * offset
    for y in range(y0, min(H, y0 + SQUARE)):
        for x in range(x0, min(W, x0 + SQUARE)):
            px[x, y] = square
    return img


def main():
    os.makedirs(OUT, exist_ok=True)
    for i in range(12):
        if i < 6:
            base, square = (200, 30, 30), (100, 15, 15)
        else:
            base, square = (30, 200, 200), (15, 100, 100)
        frame = make_frame(base, square, i % 6)
        frame.save(os.path.join(OUT, f"frame_{i:06d}.png"))
    with open(os.path.join(OUT, "frames.json"), "w") as fh:
        fh.write(json.dumps({"fps": 1.0, "duration": 12.0}) + "\n")
    print(f"wrote 12 frames to {os.path.normpath(OUT)}")


if __name__ == "__main__":
    main()
