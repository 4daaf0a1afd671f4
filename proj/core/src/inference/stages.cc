// Copyright 2026 The Boxgen Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "boxgen/inference/stages.h"

#include "boxgen/imaging/color.h"
#include "boxgen/imaging/transform.h"
#include "boxgen/networks/architectures.h"

namespace boxgen {

Image ColorizerInput(const Image& gray, const Box& box) {
  Image out = ResizeBilinear(CropPatch(gray, box), kColorizerInput, kColorizerInput);
  for (float& v : out.data()) v = 2.0f * v - 1.0f;
  return out;
}

ColorClassMap ColorizerTarget(const Image& rgb, const Box& box, const ColorBinCodec& codec) {
  return codec.CeTarget(RgbToLab(CropPatch(rgb, box)), kColorizerOutput, kColorizerOutput);
}

Image ColorizerSoftTarget(const Image& rgb, const Box& box, const ColorBinCodec& codec) {
  return codec.SoftTarget(RgbToLab(CropPatch(rgb, box)), kColorizerOutput,
                          kColorizerOutput);
}

Image ColorizePatch(const Image& distribution, const Image& gray_patch,
                    const ColorBinCodec& codec) {
  const Image up = ResizeBilinear(distribution, gray_patch.height(), gray_patch.width());
  return LabToRgb(ComposeLab(gray_patch, codec.Decode(up)));
}

Image ToSigned(const Image& image) {
  Image out = image;
  for (float& v : out.data()) v = 2.0f * v - 1.0f;
  return out;
}

Image FromSigned(const Image& image) {
  Image out = image;
  for (float& v : out.data()) v = 0.5f * v + 0.5f;
  return out;
}

}  // namespace boxgen
