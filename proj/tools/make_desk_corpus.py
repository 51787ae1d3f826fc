#!/usr/bin/env python3
"""Cut the desk corpus of grayscale PGM frames out of the sample photographs
bundled with scikit-image and scikit-learn.

    python3 tools/make_desk_corpus.py --out data/desk --frames 64
"""
import argparse
import os

import numpy as np
import skimage.data
from skimage.color import rgb2gray
from skimage.transform import rescale
from skimage.util import img_as_ubyte
from sklearn.datasets import load_sample_images

FRAME_W, FRAME_H = 192, 128

SKIMAGE_NAMES = [
    "camera", "astronaut", "coffee", "chelsea", "rocket", "coins", "moon",
    "grass", "gravel", "brick", "immunohistochemistry",
    "hubble_deep_field", "retina",
]


def to_gray_u8(img):
    img = np.asarray(img)
    if img.ndim == 3:
        img = rgb2gray(img[..., :3])
    return img_as_ubyte(img)


def sources():
    for name in SKIMAGE_NAMES:
        img = to_gray_u8(getattr(skimage.data, name)())
        yield name, img
    for i, img in enumerate(load_sample_images().images):
        yield "sklearn%d" % i, to_gray_u8(img)


def write_pgm(path, frame):
    with open(path, "wb") as f:
        f.write(b"P5\n%d %d\n255\n" % (frame.shape[1], frame.shape[0]))
        f.write(frame.tobytes())


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default="data/desk")
    ap.add_argument("--frames", type=int, default=64)
    ap.add_argument("--seed", type=int, default=2018)
    # upsampling makes each 64x64 CTU span a smaller scene area, as in high-resolution capture
    ap.add_argument("--scale", type=float, default=1.0)
    args = ap.parse_args()

    rng = np.random.default_rng(args.seed)
    imgs = [(n, img_as_ubyte(rescale(i, args.scale, order=3)) if args.scale != 1 else i)
            for n, i in sources()]
    os.makedirs(args.out, exist_ok=True)
    for k in range(args.frames):
        name, img = imgs[k % len(imgs)]
        y = rng.integers(0, img.shape[0] - FRAME_H + 1)
        x = rng.integers(0, img.shape[1] - FRAME_W + 1)
        crop = np.ascontiguousarray(img[y:y + FRAME_H, x:x + FRAME_W])
        write_pgm(os.path.join(args.out, "frame%03d_%s.pgm" % (k, name)), crop)


if __name__ == "__main__":
    main()
