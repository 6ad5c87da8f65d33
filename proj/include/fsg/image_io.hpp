// Copyright (c) the fsg Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef FSG_IMAGE_IO_HPP_
#define FSG_IMAGE_IO_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "fsg/image.hpp"

namespace fsg {

// Baseline JPEG round trip, used by the purification evaluator. The codec
// runs on quantized 8-bit data; no gradients are involved.
std::vector<uint8_t> jpeg_encode(const ImageTensor& img, int quality);
ImageTensor jpeg_decode(const std::vector<uint8_t>& bytes,
                        const std::string& tag);

// True if the extension names a lossless raster format we write (.png).
bool is_lossless_image_path(const std::string& path);

}  // namespace fsg

#endif  // FSG_IMAGE_IO_HPP_
