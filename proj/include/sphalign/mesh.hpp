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

#ifndef SPHALIGN_MESH_HPP_
#define SPHALIGN_MESH_HPP_

#include <array>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "sphalign/rotation.hpp"
#include "sphalign/signal.hpp"

namespace sphalign {

struct TriMesh {
  std::vector<Vec3> vertices;
  std::vector<std::array<std::uint32_t, 3>> faces;

  double max_radius() const;
};

enum class MeshFormat { kOff, kObj };

/// Parse error with the offending line number in the message.
class MeshParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Load an OFF or OBJ file (geometry-only subset of OBJ: v/f records).
/// Polygons with more than 3 sides are fan-triangulated; degenerate faces
/// are dropped. Throws MeshParseError on malformed input,
/// std::invalid_argument on an empty mesh.
TriMesh load_mesh(const std::string& path, MeshFormat format);

/// Format inferred from the file extension (.off / .obj).
TriMesh load_mesh(const std::string& path);

/// Write OFF (used by fixtures and tests).
void save_mesh_off(const TriMesh& mesh, const std::string& path);

/// Translate the bounding-box center to the origin and scale so the
/// maximal vertex radius is 1.
TriMesh normalize_mesh(const TriMesh& mesh);

/// Vertex-wise scaling; caller renormalizes.
TriMesh anisotropic_scale(const TriMesh& mesh, double sx, double sy, double sz);

/// Apply a rotation to all vertices.
TriMesh rotate_mesh(const TriMesh& mesh, const Rotation& r);

/// Axis-aligned BVH over the triangles; immutable after build.
class MeshBvh {
 public:
  explicit MeshBvh(const TriMesh& mesh);

  /// Nearest intersection along origin + t * dir, t in (tmin, tmax);
  /// returns hit distance or a negative value on miss.
  double intersect(const Vec3& origin, const Vec3& dir, double tmax) const;

  /// All-triangles reference path, same intersection routine without the
  /// tree; used by equivalence tests.
  double intersect_brute_force(const Vec3& origin, const Vec3& dir,
                               double tmax) const;

 private:
  struct Node {
    Vec3 lo, hi;
    std::uint32_t left = 0;   // child index, or first triangle for leaves
    std::uint32_t count = 0;  // 0 for inner nodes, else triangle count
    std::uint32_t right = 0;
  };

  const TriMesh* mesh_;
  std::vector<Node> nodes_;
  std::vector<std::uint32_t> tri_order_;

  std::uint32_t build(std::vector<std::uint32_t>& tris, std::size_t begin,
                      std::size_t end, std::vector<Vec3>& centroids);
};

/// Ray-cast map of a normalized mesh: for each grid direction p, cast from
/// the unit sphere at p toward the origin and record the distance to the
/// first surface hit; cells with no hit hold 0. Throws std::invalid_argument
/// if the mesh extends beyond the unit sphere (max radius > 1 + 1e-6).
SphericalSignal ray_cast(const TriMesh& mesh, const SphericalGrid& grid);

/// Reference ray cast without the BVH.
SphericalSignal ray_cast_brute_force(const TriMesh& mesh,
                                     const SphericalGrid& grid);

}  // namespace sphalign

#endif  // SPHALIGN_MESH_HPP_
