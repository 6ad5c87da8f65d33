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

#include "fsg/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>

#include "fsg/errors.hpp"
#include "fsg/hash.hpp"
#include "fsg/image_io.hpp"
#include "fsg/rng.hpp"

namespace fsg {

namespace fs = std::filesystem;

int FaceDataset::total_images() const {
  int n = 0;
  for (const auto& id : identities) n += static_cast<int>(id.images.size());
  return n;
}

uint64_t FaceDataset::content_hash() const {
  uint64_t h = 0xcbf29ce484222325ull;
  for (const auto& id : identities) {
    h = fnv1a64(id.name, h);
    for (const auto& img : id.images) {
      for (int64_t i = 0; i < img.data().size(); ++i) {
        unsigned char q =
            static_cast<unsigned char>(quantize_byte(img.data()[i]));
        h = fnv1a64(&q, 1, h);
      }
    }
  }
  return h;
}

FaceDataset load_dataset(const std::string& dir) {
  if (!fs::is_directory(dir)) {
    throw io_error("dataset", "dataset directory missing: " + dir);
  }
  FaceDataset ds;
  std::vector<std::string> id_dirs;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.is_directory()) id_dirs.push_back(e.path().string());
  }
  std::sort(id_dirs.begin(), id_dirs.end());
  for (const auto& id_dir : id_dirs) {
    FaceDataset::Identity id;
    id.name = fs::path(id_dir).filename().string();
    std::vector<std::string> files;
    for (const auto& e : fs::directory_iterator(id_dir)) {
      if (e.is_regular_file() && e.path().extension() == ".png") {
        files.push_back(e.path().string());
      }
    }
    std::sort(files.begin(), files.end());
    for (const auto& f : files) id.images.push_back(load_image(f));
    if (!id.images.empty()) ds.identities.push_back(std::move(id));
  }
  if (ds.identities.empty()) {
    throw io_error("dataset", "no identities found under " + dir);
  }
  return ds;
}

void write_dataset(const FaceDataset& ds, const std::string& dir) {
  fs::create_directories(dir);
  for (const auto& id : ds.identities) {
    const fs::path id_dir = fs::path(dir) / id.name;
    fs::create_directories(id_dir);
    for (size_t i = 0; i < id.images.size(); ++i) {
      char name[32];
      std::snprintf(name, sizeof(name), "img_%03zu.png", i);
      save_image(id.images[i], (id_dir / name).string());
    }
  }
}

namespace {

struct Rgb {
  double r, g, b;
};

struct IdentityParams {
  Rgb skin, hair, iris, lip;
  double face_ay, face_ax;     // face semi-axes, fraction of size
  double eye_dx, eye_y;        // eye half-distance / vertical offset
  double eye_r;
  double brow_h;               // brow vertical offset above eye
  double hair_top;             // how far the hairline reaches down
  double mouth_y, mouth_w;
  double nose_len, nose_w;
};

struct ImageParams {
  Rgb bg_a, bg_b;   // background gradient endpoints
  double shift_y, shift_x;
  double zoom;
  double brightness;
  double smile;     // mouth curvature, [-1, 1]
  double open;      // mouth openness
};

IdentityParams sample_identity(RngStream& r) {
  IdentityParams p;
  const double s = r.uniform(0.45, 0.88);
  p.skin = {std::min(1.0, s * 1.12 + r.uniform(-0.03, 0.03)),
            s * 0.84 + r.uniform(-0.04, 0.04),
            s * 0.66 + r.uniform(-0.04, 0.04)};
  const double hv = r.uniform(0.04, 0.8);
  p.hair = {hv * r.uniform(0.6, 1.3), hv * r.uniform(0.4, 1.0),
            hv * r.uniform(0.2, 0.8)};
  p.hair.r = std::min(p.hair.r, 0.95);
  p.hair.g = std::min(p.hair.g, 0.9);
  p.hair.b = std::min(p.hair.b, 0.85);
  p.iris = {r.uniform(0.02, 0.45), r.uniform(0.05, 0.4), r.uniform(0.05, 0.55)};
  p.lip = {r.uniform(0.45, 0.85), r.uniform(0.1, 0.35), r.uniform(0.15, 0.4)};
  p.face_ay = r.uniform(0.30, 0.40);
  p.face_ax = r.uniform(0.23, 0.33);
  p.eye_dx = r.uniform(0.10, 0.17);
  p.eye_y = r.uniform(-0.12, -0.04);
  p.eye_r = r.uniform(0.030, 0.055);
  p.brow_h = r.uniform(0.05, 0.09);
  p.hair_top = r.uniform(0.10, 0.30);
  p.mouth_y = r.uniform(0.14, 0.24);
  p.mouth_w = r.uniform(0.08, 0.16);
  p.nose_len = r.uniform(0.06, 0.13);
  p.nose_w = r.uniform(0.015, 0.035);
  return p;
}

ImageParams sample_variation(RngStream& r) {
  ImageParams v;
  v.bg_a = {r.uniform(0.2, 0.95), r.uniform(0.2, 0.95), r.uniform(0.2, 0.95)};
  v.bg_b = {r.uniform(0.2, 0.95), r.uniform(0.2, 0.95), r.uniform(0.2, 0.95)};
  v.shift_y = r.uniform(-0.04, 0.04);
  v.shift_x = r.uniform(-0.04, 0.04);
  v.zoom = r.uniform(0.92, 1.08);
  v.brightness = r.uniform(0.88, 1.10);
  v.smile = r.uniform(-0.8, 0.8);
  v.open = r.uniform(0.0, 1.0);
  return v;
}

// Soft-edged ellipse coverage: 1 inside, 0 outside, linear ramp ~1px wide.
double ellipse_alpha(double y, double x, double cy, double cx, double ay,
                     double ax) {
  const double dy = (y - cy) / ay;
  const double dx = (x - cx) / ax;
  const double rr = std::sqrt(dy * dy + dx * dx);
  const double edge = 0.5 * (1.0 / ay + 1.0 / ax);  // ~1px in normalized units
  return std::clamp((1.0 - rr) / edge + 0.5, 0.0, 1.0);
}

void blend(Tensor& img, int y, int x, const Rgb& c, double alpha) {
  if (alpha <= 0.0) return;
  img.at(0, y, x) = (1 - alpha) * img.at(0, y, x) + alpha * c.r;
  img.at(1, y, x) = (1 - alpha) * img.at(1, y, x) + alpha * c.g;
  img.at(2, y, x) = (1 - alpha) * img.at(2, y, x) + alpha * c.b;
}

ImageTensor render_face(const IdentityParams& id, const ImageParams& v,
                        int size, const std::string& tag) {
  const double n = size;
  Tensor img({3, size, size});
  // Background: horizontal gradient between two per-image colors.
  for (int y = 0; y < size; ++y)
    for (int x = 0; x < size; ++x) {
      const double t = static_cast<double>(x) / (size - 1);
      img.at(0, y, x) = (1 - t) * v.bg_a.r + t * v.bg_b.r;
      img.at(1, y, x) = (1 - t) * v.bg_a.g + t * v.bg_b.g;
      img.at(2, y, x) = (1 - t) * v.bg_a.b + t * v.bg_b.b;
    }

  const double cy = n * (0.52 + v.shift_y);
  const double cx = n * (0.50 + v.shift_x);
  const double ay = n * id.face_ay * v.zoom;
  const double ax = n * id.face_ax * v.zoom;

  for (int y = 0; y < size; ++y) {
    for (int x = 0; x < size; ++x) {
      // Hair: larger ellipse behind the face, visible above the hairline.
      const double ah = ellipse_alpha(y, x, cy - 0.06 * n, cx, ay * 1.12,
                                      ax * 1.18);
      if (ah > 0 && y < cy - ay * (1.0 - 2.0 * id.hair_top)) {
        blend(img, y, x, id.hair, ah);
      }
      const double af = ellipse_alpha(y, x, cy, cx, ay, ax);
      if (af > 0) {
        Rgb skin = id.skin;
        // Hairline band at the top of the face.
        if (y < cy - ay * (1.0 - 1.35 * id.hair_top)) {
          blend(img, y, x, skin, af);
          blend(img, y, x, id.hair, af * 0.85);
        } else {
          blend(img, y, x, skin, af);
        }
      }
    }
  }

  // Eyes, brows, nose, mouth.
  const Rgb sclera{0.94, 0.94, 0.92};
  const Rgb brow{id.hair.r * 0.6, id.hair.g * 0.6, id.hair.b * 0.6};
  const double eye_cy = cy + id.eye_y * n * v.zoom;
  const double eye_r = id.eye_r * n * v.zoom;
  for (int side = -1; side <= 1; side += 2) {
    const double ecx = cx + side * id.eye_dx * n * v.zoom;
    for (int y = 0; y < size; ++y)
      for (int x = 0; x < size; ++x) {
        double a = ellipse_alpha(y, x, eye_cy, ecx, eye_r * 0.85, eye_r * 1.25);
        if (a > 0) blend(img, y, x, sclera, a);
        a = ellipse_alpha(y, x, eye_cy, ecx, eye_r * 0.55, eye_r * 0.55);
        if (a > 0) blend(img, y, x, id.iris, a);
        a = ellipse_alpha(y, x, eye_cy - id.brow_h * n, ecx, eye_r * 0.38,
                          eye_r * 1.5);
        if (a > 0) blend(img, y, x, brow, a);
      }
  }
  const Rgb nose{id.skin.r * 0.82, id.skin.g * 0.78, id.skin.b * 0.75};
  for (int y = 0; y < size; ++y)
    for (int x = 0; x < size; ++x) {
      double a = ellipse_alpha(y, x, cy + 0.02 * n, cx, id.nose_len * n,
                               id.nose_w * n);
      if (a > 0) blend(img, y, x, nose, a);
    }
  const double mouth_cy = cy + id.mouth_y * n * v.zoom;
  const double mouth_w = id.mouth_w * n * v.zoom;
  const double mouth_h =
      mouth_w * (0.22 + 0.3 * v.open) * (1.0 + 0.2 * std::fabs(v.smile));
  for (int y = 0; y < size; ++y)
    for (int x = 0; x < size; ++x) {
      // Curvature: shift the mouth center vertically with |dx| for a smile.
      const double dxn = (x - cx) / std::max(mouth_w, 1e-9);
      const double curve = v.smile * 0.35 * mouth_w * (dxn * dxn - 0.5);
      double a = ellipse_alpha(y, x, mouth_cy + curve, cx, mouth_h, mouth_w);
      if (a > 0) blend(img, y, x, id.lip, a);
    }

  // Illumination.
  for (int64_t i = 0; i < img.size(); ++i) {
    img[i] = std::clamp(img[i] * v.brightness, 0.0, 1.0);
  }
  return ImageTensor(std::move(img), tag);
}

}  // namespace

FaceDataset synthesize_faces(int n_identities, int images_per_identity,
                             int size, uint64_t seed) {
  if (n_identities < 1 || images_per_identity < 1 || size < 8) {
    throw config_error("dataset", "invalid synthetic dataset parameters");
  }
  FaceDataset ds;
  RngStream root(seed);
  for (int i = 0; i < n_identities; ++i) {
    RngStream id_stream = root.derive("identity", static_cast<uint64_t>(i));
    IdentityParams idp = sample_identity(id_stream);
    FaceDataset::Identity ident;
    char buf[32];
    std::snprintf(buf, sizeof(buf), "id_%03d", i);
    ident.name = buf;
    for (int j = 0; j < images_per_identity; ++j) {
      RngStream img_stream = id_stream.derive("image", static_cast<uint64_t>(j));
      ImageParams vp = sample_variation(img_stream);
      char tag[64];
      std::snprintf(tag, sizeof(tag), "id_%03d_img_%03d", i, j);
      ident.images.push_back(render_face(idp, vp, size, tag));
    }
    ds.identities.push_back(std::move(ident));
  }
  return ds;
}

}  // namespace fsg
