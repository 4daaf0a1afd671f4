#!/usr/bin/env python3
# Copyright 2026 The Boxgen Authors. All Rights Reserved.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Test double for the feature extractor protocol.

Usage: mock_extractor.py [--short] LIST OUT

Writes {"features": [[mean R, mean G, mean B], ...]} in LIST order.
"""

import argparse
import json
import pathlib

import numpy as np
from PIL import Image


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--short", action="store_true", help="emit 2-wide rows")
    parser.add_argument("list")
    parser.add_argument("out")
    args = parser.parse_args()
    rows = []
    for line in pathlib.Path(args.list).read_text().splitlines():
        pixels = np.asarray(Image.open(line).convert("RGB"), dtype=np.float64) / 255.0
        row = pixels.reshape(-1, 3).mean(axis=0).tolist()
        rows.append(row[:2] if args.short else row)
    pathlib.Path(args.out).write_text(json.dumps({"features": rows}))


if __name__ == "__main__":
    main()
