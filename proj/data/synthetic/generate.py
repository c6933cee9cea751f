#!/usr/bin/env python3
# Copyright 2026 The AIC Toolkit Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Writes the synthetic study bundle: manifest, generating curves, scores."""

import json
import math
import os
import random

HERE = os.path.dirname(os.path.abspath(__file__))
rng = random.Random(20250601)

SOURCES = ["bridge", "candles", "garden", "skyline", "studio"]
TARGETS = [1.20, 0.90, 0.65, 0.45, 0.30]  # level 1 = highest bitrate
CODECS = [
    {"id": "jpegxt", "encode_command":
     "jpeg_xt_enc -q {quality} -profile c -hdr_bits 10 {input} {output}",
     "quality_range": [1, 100]},
    {"id": "jxl", "encode_command":
     "cjxl -x color_space=Rec2100PQ -q {quality} {input} {output}",
     "quality_range": [1, 100]},
    {"id": "jpegai", "encode_command":
     "jpegai_vm --coding_type enc_dec --target_bpps {quality} {input} {output}",
     "quality_range": [1, 400]},
    {"id": "avif", "encode_command":
     "avifenc --autotiling -d 10 --cicp 9/16/9 -q {quality} {input} {output}",
     "quality_range": [0, 100]},
]
XT_OFFSETS = {"bridge": 0.1, "candles": 0.2, "garden": 0.3, "skyline": 0.15, "studio": 0.25}


def adjusted(codec, source, target):
  if codec == "jpegxt":
    return 2 * target + XT_OFFSETS[source]
  return target


manifest = {
    "levels_per_codec": 5,
    "responses_per_triplet_target": 24,
    "sources": [{"id": s, "width": 840, "height": 944, "color_space": "Rec2100PQ",
                 "file": f"sources/{s}.exr"} for s in SOURCES],
    "codecs": [],
    "stimuli": [],
}
for c in CODECS:
  rule = {"scale": 1.0, "offset": 0.0}
  if c["id"] == "jpegxt":
    rule = {"scale": 2.0, "offset": 0.0, "source_offsets": XT_OFFSETS}
  manifest["codecs"].append(dict(c, higher_quality_is_larger=True, bitrate_rule=rule))

truth = {"format": "aic-model-v1", "k": 1.0, "sources": []}
stimulus_jnd = {}
for s in SOURCES:
  codecs = []
  for c in CODECS:
    cid = c["id"]
    ladder = []
    for level, t in enumerate(TARGETS, start=1):
      a = adjusted(cid, s, t)
      actual = round(a * (1 + rng.uniform(-0.04, 0.04)), 4)
      quality = rng.randint(*c["quality_range"])
      ladder.append(actual)
      manifest["stimuli"].append({
          "source": s, "codec": cid, "level": level, "target_bpp": t,
          "actual_bpp": actual, "quality": quality,
          "file": f"stimuli/{s}_{cid}_{level}.avif"})
    # Curve from about 0.2 JND at the top level to about 2.5-4 at the bottom.
    top, bottom = ladder[0], ladder[-1]
    d_top = rng.uniform(0.12, 0.3)
    d_bottom = rng.uniform(2.2, 3.8)
    beta = math.log(d_bottom / d_top) / (top - bottom)
    alpha = d_bottom * math.exp(beta * bottom)
    g1 = rng.uniform(1.6, 2.4)
    g2 = rng.uniform(0.1, 0.4)
    codecs.append({"codec": cid, "alpha": round(alpha, 6), "beta": round(beta, 6),
                   "gamma1": round(g1, 4), "gamma2": round(g2, 4)})
    for level, r in enumerate(ladder, start=1):
      stimulus_jnd[(s, cid, level)] = alpha * math.exp(-beta * r)
  truth["sources"].append({"source": s, "codecs": codecs})

# Metric scores: noisy monotone functions of the generating distortion with
# per-codec and per-source biases.
METRICS = [
    ("pu21_psnr", "higher-is-better", lambda d, b: 48 - 6.5 * math.log1p(2 * d) + b, 1.2),
    ("ms_ssim", "higher-is-better", lambda d, b: 1 - 0.012 * d ** 1.2 + b * 0.002, 0.002),
    ("butteraugli", "higher-is-worse", lambda d, b: 0.6 + 0.9 * d + 0.3 * b, 0.25),
]
for name, polarity, f, noise in METRICS:
  codec_bias = {c["id"]: rng.gauss(0, 1) for c in CODECS}
  source_bias = {s: rng.gauss(0, 1) for s in SOURCES}
  lines = [f"# metric: {name}", f"# polarity: {polarity}",
           "source_id\tcodec_id\tlevel\tscore"]
  for (s, cid, level), d in sorted(stimulus_jnd.items()):
    score = f(d, 0.6 * codec_bias[cid] + 0.4 * source_bias[s]) + rng.gauss(0, noise)
    lines.append(f"{s}\t{cid}\t{level}\t{score:.6f}")
  with open(os.path.join(HERE, "scores", f"{name}.tsv"), "w") as fh:
    fh.write("\n".join(lines) + "\n")

with open(os.path.join(HERE, "manifest.json"), "w") as fh:
  json.dump(manifest, fh, indent=2)
  fh.write("\n")
with open(os.path.join(HERE, "truth.json"), "w") as fh:
  json.dump(truth, fh, indent=2)
  fh.write("\n")
