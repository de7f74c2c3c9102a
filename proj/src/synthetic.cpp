/*
Copyright 2026 The Sphalign Authors.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS-IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

#include "sphalign/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <random>
#include <utility>
#include <vector>

namespace sphalign {

namespace {

constexpr double kPi = std::numbers::pi;

TriMesh icosahedron() {
  const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
  TriMesh m;
  m.vertices = {{-1, phi, 0}, {1, phi, 0},   {-1, -phi, 0}, {1, -phi, 0},
                {0, -1, phi}, {0, 1, phi},   {0, -1, -phi}, {0, 1, -phi},
                {phi, 0, -1}, {phi, 0, 1},   {-phi, 0, -1}, {-phi, 0, 1}};
  for (Vec3& v : m.vertices) v = v.normalized();
  m.faces = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
             {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
             {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
             {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};
  return m;
}

TriMesh subdivide_on_sphere(const TriMesh& in) {
  TriMesh out;
  out.vertices = in.vertices;
  std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint32_t> midpoints;

  auto midpoint = [&](std::uint32_t a, std::uint32_t b) {
    const std::pair<std::uint32_t, std::uint32_t> key = std::minmax(a, b);
    auto it = midpoints.find(key);
    if (it != midpoints.end()) return it->second;
    const Vec3 mid = ((out.vertices[a] + out.vertices[b]) * 0.5).normalized();
    const std::uint32_t idx = static_cast<std::uint32_t>(out.vertices.size());
    out.vertices.push_back(mid);
    midpoints.emplace(key, idx);
    return idx;
  };

  for (const auto& f : in.faces) {
    const std::uint32_t ab = midpoint(f[0], f[1]);
    const std::uint32_t bc = midpoint(f[1], f[2]);
    const std::uint32_t ca = midpoint(f[2], f[0]);
    out.faces.push_back({f[0], ab, ca});
    out.faces.push_back({f[1], bc, ab});
    out.faces.push_back({f[2], ca, bc});
    out.faces.push_back({ab, bc, ca});
  }
  return out;
}

}  // namespace

TriMesh make_icosphere(unsigned subdivisions, double radius) {
  TriMesh m = icosahedron();
  for (unsigned s = 0; s < subdivisions; ++s) m = subdivide_on_sphere(m);
  if (radius != 1.0) {
    for (Vec3& v : m.vertices) v = v * radius;
  }
  return m;
}

TriMesh make_bumpy_sphere(unsigned subdivisions, std::uint64_t seed,
                          double bump_amplitude) {
  TriMesh m = make_icosphere(subdivisions);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);

  // Smooth radial field: a handful of random direction/frequency lobes.
  struct Lobe {
    Vec3 dir;
    double freq, weight;
  };
  std::vector<Lobe> lobes(6);
  for (Lobe& lobe : lobes) {
    lobe.dir = Vec3{uni(rng), uni(rng), uni(rng)}.normalized();
    lobe.freq = 1.0 + 2.5 * std::abs(uni(rng));
    lobe.weight = uni(rng);
  }

  for (Vec3& v : m.vertices) {
    double r = 1.0;
    for (const Lobe& lobe : lobes) {
      r += bump_amplitude / static_cast<double>(lobes.size()) * lobe.weight *
           std::cos(lobe.freq * kPi * lobe.dir.dot(v));
    }
    v = v * r;
  }
  return normalize_mesh(m);
}

TriMesh make_box(double hx, double hy, double hz) {
  TriMesh m;
  for (int i = 0; i < 8; ++i) {
    m.vertices.push_back({(i & 1) ? hx : -hx, (i & 2) ? hy : -hy,
                          (i & 4) ? hz : -hz});
  }
  m.faces = {{0, 2, 1}, {1, 2, 3},  // z = -hz
             {4, 5, 6}, {5, 7, 6},  // z = +hz
             {0, 1, 4}, {1, 5, 4},  // y = -hy
             {2, 6, 3}, {3, 6, 7},  // y = +hy
             {0, 4, 2}, {2, 4, 6},  // x = -hx
             {1, 3, 5}, {3, 7, 5}}; // x = +hx
  return m;
}

TriMesh make_ellipsoid(double ax, double ay, double az, unsigned subdivisions) {
  return anisotropic_scale(make_icosphere(subdivisions), ax, ay, az);
}

TriMesh make_cylinder(double radius, double half_height, unsigned segments) {
  TriMesh m;
  const std::uint32_t top_center = 0;
  const std::uint32_t bot_center = 1;
  m.vertices.push_back({0, 0, half_height});
  m.vertices.push_back({0, 0, -half_height});
  for (unsigned s = 0; s < segments; ++s) {
    const double a = 2.0 * kPi * s / segments;
    m.vertices.push_back({radius * std::cos(a), radius * std::sin(a),
                          half_height});
    m.vertices.push_back({radius * std::cos(a), radius * std::sin(a),
                          -half_height});
  }
  for (unsigned s = 0; s < segments; ++s) {
    const std::uint32_t t0 = 2 + 2 * s;
    const std::uint32_t b0 = 3 + 2 * s;
    const std::uint32_t t1 = 2 + 2 * ((s + 1) % segments);
    const std::uint32_t b1 = 3 + 2 * ((s + 1) % segments);
    m.faces.push_back({top_center, t0, t1});
    m.faces.push_back({bot_center, b1, b0});
    m.faces.push_back({t0, b0, t1});
    m.faces.push_back({t1, b0, b1});
  }
  return m;
}

}  // namespace sphalign
