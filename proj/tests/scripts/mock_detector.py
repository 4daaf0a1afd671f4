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

"""Test double for the detector adapter protocol.

Usage: mock_detector.py [--mode MODE] LIST OUT

Reports one "Car" detection covering the central quarter of every image
listed in LIST plus a "truck" over the whole frame, keyed by file stem.
"""

import argparse
import json
import pathlib

from PIL import Image


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--mode", default="ok", choices=["ok", "fail", "garbage", "missing"])
    parser.add_argument("list")
    parser.add_argument("out")
    args = parser.parse_args()
    if args.mode == "fail":
        raise SystemExit(3)
    if args.mode == "garbage":
        pathlib.Path(args.out).write_text("{not json")
        return
    result = {}
    for line in pathlib.Path(args.list).read_text().splitlines():
        path = pathlib.Path(line)
        w, h = Image.open(path).size
        result[path.stem] = [
            {"box": [w // 4, h // 4, w // 2, h // 2], "confidence": 0.9, "class": "Car"},
            {"box": [0, 0, w, h], "confidence": 1.0, "class": "truck"},
        ]
    if args.mode == "missing" and result:
        result.pop(next(iter(result)))
    pathlib.Path(args.out).write_text(json.dumps(result))


if __name__ == "__main__":
    main()
