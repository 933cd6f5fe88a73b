#!/usr/bin/env python3
"""Brute-force reference for the star encoders and the attention fusion.

Writes synthetic clips as raw STRV1 containers plus the expected encoder
outputs into tests/fixtures/. Everything here is plain Python over float64,
evaluated pixel by pixel, and shares no code with the C++ library.

Run from the repository root:  python3 tests/oracle/star_oracle.py
"""

import json
import math
import os
import struct
import sys

EPS_NORM = 1e-12
HERE = os.path.dirname(os.path.abspath(__file__))
FIXTURES = os.path.join(os.path.dirname(HERE), "fixtures")


class Lcg:
    def __init__(self, seed):
        self.state = seed & 0xFFFFFFFFFFFFFFFF

    def next(self):
        self.state = (self.state * 6364136223846793005 + 1442695040888963407) & 0xFFFFFFFFFFFFFFFF
        return self.state >> 33

    def below(self, n):
        return self.next() % n


def make_clip(seed, width, height, n):
    """Moving bright square over a noisy background with some black pixels."""
    rng = Lcg(seed)
    background = []
    for _ in range(width * height):
        if rng.below(7) == 0:
            background.append((0, 0, 0))
        else:
            background.append((rng.below(256), rng.below(256), rng.below(256)))
    frames = []
    for k in range(n):
        frame = []
        cx = (k * max(1, width - 1)) // max(1, n - 1)
        cy = (k * k) % height
        color = (200 + rng.below(56), rng.below(120), 40 + rng.below(200))
        for i in range(height):
            for j in range(width):
                px = background[i * width + j]
                if abs(j - cx) <= width // 6 and abs(i - cy) <= height // 6:
                    px = color
                elif rng.below(5) == 0:
                    px = (rng.below(256), rng.below(256), rng.below(256))
                frame.append(px)
        frames.append(frame)
    return frames


def write_container(path, width, height, frames):
    with open(path, "wb") as f:
        f.write(b"STRV1\n")
        header = {"frame_count": len(frames), "height": height, "width": width}
        f.write(json.dumps(header, sort_keys=True, separators=(",", ":")).encode() + b"\n")
        for frame in frames:
            for c in range(3):
                f.write(bytes(px[c] for px in frame))


def norm(p):
    return math.sqrt(p[0] * p[0] + p[1] * p[1] + p[2] * p[2])


def gray(p):
    return 0.299 * p[0] + 0.587 * p[1] + 0.114 * p[2]


def cosine_scaled(a, b):
    na, nb = norm(a), norm(b)
    if na < EPS_NORM or nb < EPS_NORM:
        lam = 0.0
    else:
        dot = a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
        c = dot / (na * nb)
        c = min(1.0, max(-1.0, c))
        lam = 1.0 - c
    return (1.0 - lam / 2.0) * abs(na - nb)


def euclidean(a, b):
    d = (a[0] - b[0], a[1] - b[1], a[2] - b[2])
    return math.sqrt(d[0] * d[0] + d[1] * d[1] + d[2] * d[2])


def abs_gray(a, b):
    return abs(gray(a) - gray(b))


METRICS = {"abs-gray": abs_gray, "euclidean": euclidean, "cosine": cosine_scaled}


def accumulate(frames, metric, shadow):
    fn = METRICS[metric]
    n = len(frames)
    out = [0.0] * len(frames[0])
    for k in range(2, n + 1):
        w = k / n
        prev, cur = frames[k - 2], frames[k - 1]
        for idx in range(len(out)):
            term = fn(prev[idx], cur[idx])
            if shadow:
                term = term * w
            out[idx] += term
    return out


def sobel(m, width, height):
    def at(i, j):
        i = min(max(i, 0), height - 1)
        j = min(max(j, 0), width - 1)
        return m[i * width + j]

    mx, my = [], []
    for i in range(height):
        for j in range(width):
            gx = (at(i - 1, j + 1) - at(i - 1, j - 1)) + 2.0 * (at(i, j + 1) - at(i, j - 1)) + (
                at(i + 1, j + 1) - at(i + 1, j - 1))
            gy = (at(i + 1, j - 1) - at(i - 1, j - 1)) + 2.0 * (at(i + 1, j) - at(i - 1, j)) + (
                at(i + 1, j + 1) - at(i - 1, j + 1))
            mx.append(gx)
            my.append(gy)
    return mx, my


def segments(n):
    third = n // 3
    return [[1, third], [third + 1, n - third], [n - third + 1, n]]


def round_half_up(x):
    return min(255, max(0, math.floor(x + 0.5)))


def quantize(channels, mode):
    """channels: list of planes. Returns interleaved bytes as list of ints."""
    if mode == "global":
        peak = max(max(c) for c in channels)
        scales = [peak] * len(channels)
    elif mode == "per-channel":
        scales = [max(c) for c in channels]
    else:
        scales = [None] * len(channels)
    planes = []
    for c, s in zip(channels, scales):
        if s is None:
            planes.append([round_half_up(v) for v in c])
        elif s <= 0.0:
            planes.append([0] * len(c))
        else:
            planes.append([round_half_up(v / s * 255.0) for v in c])
    return [planes[ch][idx] for idx in range(len(channels[0])) for ch in range(len(channels))]


def quantize_signed(plane):
    peak = max(abs(v) for v in plane)
    if peak <= 0.0:
        return [128] * len(plane)
    return [min(255, max(0, math.floor(v / peak * 127.0 + 0.5) + 128)) for v in plane]


def sidecar_bytes(header, planes):
    text = json.dumps(header, sort_keys=True, separators=(",", ":")).encode() + b"\n"
    body = b"".join(struct.pack("<%df" % len(p), *p) for p in planes)
    return text + body


FIXTURE_CLIPS = [
    ("fx01", 101, 2, 2, 6),
    ("fx02", 202, 4, 3, 12),
    ("fx03", 303, 8, 8, 10),
    ("fx04", 404, 16, 12, 23),
    ("fx05", 505, 32, 32, 40),
    ("fx06", 606, 5, 7, 9),
]


def encode_fixture(clip_id, seed, width, height, n):
    frames = make_clip(seed, width, height, n)
    write_container(os.path.join(FIXTURES, clip_id + ".strv"), width, height, frames)

    result = {"clip_id": clip_id, "width": width, "height": height, "frames": n}
    result["first_pixel"] = [list(frames[0][0]), list(frames[-1][0])]
    result["abs_gray"] = accumulate(frames, "abs-gray", False)
    result["abs_gray_shadow"] = accumulate(frames, "abs-gray", True)
    result["euclidean"] = accumulate(frames, "euclidean", False)
    result["cosine"] = accumulate(frames, "cosine", False)
    mx, my = sobel(result["abs_gray_shadow"], width, height)
    result["sobel_x"], result["sobel_y"] = mx, my

    bounds = segments(n)
    result["segment_bounds"] = bounds
    rgb = [accumulate(frames[lo - 1:hi], "cosine", False) for lo, hi in bounds]
    result["star_rgb"] = rgb
    rgb_euclid = [accumulate(frames[lo - 1:hi], "euclidean", False) for lo, hi in bounds]
    result["star_rgb_euclidean"] = rgb_euclid

    result["q_rgb_global"] = quantize(rgb, "global")
    result["q_rgb_per_channel"] = quantize(rgb, "per-channel")
    result["q_legacy_m"] = quantize([result["abs_gray_shadow"]], "global")
    result["q_legacy_mx"] = quantize_signed(mx)
    result["q_legacy_my"] = quantize_signed(my)

    header = {
        "channels": 3,
        "clip_id": clip_id,
        "format": "starrgb-f32",
        "height": height,
        "metric": "cosine",
        "mode": "star-rgb",
        "normalization": "global",
        "segment_bounds": bounds,
        "version": 1,
        "weighted_shadow": False,
        "width": width,
    }
    with open(os.path.join(FIXTURES, clip_id + ".golden.f32"), "wb") as f:
        f.write(sidecar_bytes(header, rgb))

    with open(os.path.join(FIXTURES, clip_id + ".expected.json"), "w") as f:
        json.dump(result, f)


# ---------------------------------------------------------------- fusion toy

def fusion_fixture():
    d, hidden = 3, 128
    w1 = [[0.0] * hidden for _ in range(d)]
    w1[0][0], w1[1][0], w1[2][0] = 0.5, -0.25, 1.0
    w1[0][1], w1[1][1], w1[2][1] = -1.0, 0.75, 0.5
    w1[0][2], w1[1][2], w1[2][2] = 0.2, 0.2, -0.6
    b1 = [0.0] * hidden
    b1[0], b1[1], b1[2] = 0.1, -0.2, 0.05
    w2 = [0.0] * hidden
    w2[0], w2[1], w2[2] = 1.5, -0.5, 2.0
    b2 = 0.3
    params = {
        "format_version": 1,
        "d": d,
        "hidden": hidden,
        "w1": [w1[i][h] for i in range(d) for h in range(hidden)],
        "b1": b1,
        "w2": w2,
        "b2": b2,
    }

    def standardize(v):
        mean = sum(v) / len(v)
        var = sum((x - mean) ** 2 for x in v) / len(v)
        s = math.sqrt(var + 1e-5)
        return [(x - mean) / s for x in v]

    def score(v):
        total = b2
        for h in range(hidden):
            pre = b1[h] + sum(v[i] * w1[i][h] for i in range(d))
            total += w2[h] * max(0.0, pre)
        return total

    maps = [[1.0, 2.0, 4.0], [3.0, -1.0, 0.5], [0.0, 0.0, 10.0]]
    scores = [score(standardize(m)) for m in maps]
    top = max(scores)
    ex = [math.exp(s - top) for s in scores]
    weights = [e / sum(ex) for e in ex]
    fused = [sum(weights[i] * maps[i][j] for i in range(len(maps))) for j in range(d)]

    probe = [1.0, -2.0, 0.5]
    expected = {
        "maps": maps,
        "standardized": [standardize(m) for m in maps],
        "scores": scores,
        "weights": weights,
        "fused": fused,
        "probe": probe,
        "probe_score": score(probe),
        "standardize_0_10": standardize([0.0, 10.0]),
    }
    with open(os.path.join(FIXTURES, "fusion_params.json"), "w") as f:
        json.dump(params, f)
    with open(os.path.join(FIXTURES, "fusion_expected.json"), "w") as f:
        json.dump(expected, f, indent=1)
    for i, m in enumerate(maps):
        with open(os.path.join(FIXTURES, "fusion_map%d.json" % i), "w") as f:
            json.dump(m, f)


def main():
    os.makedirs(FIXTURES, exist_ok=True)
    for spec in FIXTURE_CLIPS:
        encode_fixture(*spec)
    fusion_fixture()
    print("fixtures written to", FIXTURES, file=sys.stderr)


if __name__ == "__main__":
    main()
