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

#ifndef FSG_DATASET_HPP_
#define FSG_DATASET_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "fsg/image.hpp"

namespace fsg {

// Labeled face set: one directory per identity, lossless images inside.
struct FaceDataset {
  struct Identity {
    std::string name;
    std::vector<ImageTensor> images;
  };
  std::vector<Identity> identities;

  int identity_count() const { return static_cast<int>(identities.size()); }
  int total_images() const;
  // Stable content hash over quantized pixel data and identity names.
  uint64_t content_hash() const;
};

FaceDataset load_dataset(const std::string& dir);
void write_dataset(const FaceDataset& ds, const std::string& dir);

// Deterministic synthetic face corpus: parametric cartoon faces whose
// identity is carried by geometry and coloring and whose per-image variation
// covers background, illumination, pose jitter and expression. Stands in for
// a photo dataset so the whole pipeline runs network-free.
FaceDataset synthesize_faces(int n_identities, int images_per_identity,
                             int size, uint64_t seed);

}  // namespace fsg

#endif  // FSG_DATASET_HPP_
