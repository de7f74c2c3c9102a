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

#ifndef SPHALIGN_SYNTHETIC_HPP_
#define SPHALIGN_SYNTHETIC_HPP_

#include <cstdint>

#include "sphalign/mesh.hpp"

// Deterministic synthetic watertight meshes for fixtures and evaluation.

namespace sphalign {

/// Subdivided icosahedron projected onto a sphere of the given radius.
TriMesh make_icosphere(unsigned subdivisions, double radius = 1.0);

/// Icosphere with a smooth low-order radial perturbation; breaks all
/// rotational symmetries. Output normalized to max radius 1.
TriMesh make_bumpy_sphere(unsigned subdivisions, std::uint64_t seed,
                          double bump_amplitude = 0.3);

/// Axis-aligned box with the given half-extents, 12 triangles.
TriMesh make_box(double hx, double hy, double hz);

/// Icosphere scaled per axis.
TriMesh make_ellipsoid(double ax, double ay, double az,
                       unsigned subdivisions = 3);

/// Closed cylinder around the z axis (rotationally symmetric up to the
/// tessellation).
TriMesh make_cylinder(double radius, double half_height, unsigned segments);

}  // namespace sphalign

#endif  // SPHALIGN_SYNTHETIC_HPP_
