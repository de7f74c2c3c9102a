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

#include "sphalign/mesh.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace sphalign {

namespace {

constexpr double kRayEpsilon = 1e-12;

[[noreturn]] void parse_fail(const std::string& path, std::size_t line,
                             const std::string& what) {
  std::ostringstream os;
  os << path << ":" << line << ": " << what;
  throw MeshParseError(os.str());
}

double tri_area2(const Vec3& a, const Vec3& b, const Vec3& c) {
  return (b - a).cross(c - a).norm();
}

void push_face(TriMesh* mesh, const std::vector<std::uint32_t>& poly,
               const std::string& path, std::size_t line) {
  if (poly.size() < 3) parse_fail(path, line, "face with fewer than 3 vertices");
  for (std::uint32_t idx : poly) {
    if (idx >= mesh->vertices.size()) {
      parse_fail(path, line, "face index out of range");
    }
  }
  for (std::size_t i = 1; i + 1 < poly.size(); ++i) {
    const std::array<std::uint32_t, 3> f{poly[0], poly[i], poly[i + 1]};
    if (tri_area2(mesh->vertices[f[0]], mesh->vertices[f[1]],
                  mesh->vertices[f[2]]) > 0.0) {
      mesh->faces.push_back(f);
    }
  }
}

TriMesh load_off(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open mesh file: " + path);
  std::string line;
  std::size_t lineno = 0;

  auto next_content_line = [&](std::string* out) {
    while (std::getline(in, line)) {
      ++lineno;
      const std::size_t pos = line.find_first_not_of(" \t\r\n");
      if (pos == std::string::npos || line[pos] == '#') continue;
      *out = line;
      return true;
    }
    return false;
  };

  std::string header;
  if (!next_content_line(&header)) parse_fail(path, lineno, "empty file");
  std::istringstream hs(header);
  std::string magic;
  hs >> magic;
  std::size_t nv = 0, nf = 0, ne = 0;
  if (magic == "OFF") {
    if (!(hs >> nv >> nf >> ne)) {
      // Counts may be on their own line.
      std::string counts;
      if (!next_content_line(&counts)) {
        parse_fail(path, lineno, "missing count line");
      }
      std::istringstream cs(counts);
      if (!(cs >> nv >> nf >> ne)) {
        parse_fail(path, lineno, "malformed count line");
      }
    }
  } else {
    std::istringstream cs(header);
    if (!(cs >> nv >> nf >> ne)) {
      parse_fail(path, lineno, "malformed OFF header");
    }
  }

  TriMesh mesh;
  mesh.vertices.reserve(nv);
  for (std::size_t i = 0; i < nv; ++i) {
    std::string vline;
    if (!next_content_line(&vline)) parse_fail(path, lineno, "missing vertex");
    std::istringstream vs(vline);
    double x, y, z;
    if (!(vs >> x >> y >> z) || !std::isfinite(x) || !std::isfinite(y) ||
        !std::isfinite(z)) {
      parse_fail(path, lineno, "malformed vertex line");
    }
    mesh.vertices.push_back({x, y, z});
  }
  for (std::size_t i = 0; i < nf; ++i) {
    std::string fline;
    if (!next_content_line(&fline)) parse_fail(path, lineno, "missing face");
    std::istringstream fs(fline);
    std::size_t cnt;
    if (!(fs >> cnt)) parse_fail(path, lineno, "malformed face line");
    std::vector<std::uint32_t> poly(cnt);
    for (std::size_t j = 0; j < cnt; ++j) {
      if (!(fs >> poly[j])) parse_fail(path, lineno, "malformed face line");
    }
    push_face(&mesh, poly, path, lineno);
  }
  return mesh;
}

TriMesh load_obj(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open mesh file: " + path);
  TriMesh mesh;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag)) continue;
    if (tag == "v") {
      double x, y, z;
      if (!(ls >> x >> y >> z)) parse_fail(path, lineno, "malformed vertex");
      mesh.vertices.push_back({x, y, z});
    } else if (tag == "f") {
      std::vector<std::uint32_t> poly;
      std::string tok;
      while (ls >> tok) {
        // "i", "i/t", "i/t/n", "i//n"; 1-based, negatives relative.
        const std::string first = tok.substr(0, tok.find('/'));
        long idx;
        try {
          idx = std::stol(first);
        } catch (const std::exception&) {
          parse_fail(path, lineno, "malformed face index '" + tok + "'");
        }
        if (idx < 0) idx = static_cast<long>(mesh.vertices.size()) + idx + 1;
        if (idx <= 0 ||
            static_cast<std::size_t>(idx) > mesh.vertices.size()) {
          parse_fail(path, lineno, "face index out of range");
        }
        poly.push_back(static_cast<std::uint32_t>(idx - 1));
      }
      push_face(&mesh, poly, path, lineno);
    }
    // Materials, normals, texture coords and the rest are ignored.
  }
  return mesh;
}

// Watertight-leaning Moeller-Trumbore; returns t or -1.
double intersect_triangle(const Vec3& orig, const Vec3& dir, const Vec3& v0,
                          const Vec3& v1, const Vec3& v2, double tmax) {
  const Vec3 e1 = v1 - v0;
  const Vec3 e2 = v2 - v0;
  const Vec3 pvec = dir.cross(e2);
  const double det = e1.dot(pvec);
  if (std::abs(det) < kRayEpsilon) return -1.0;
  const double inv_det = 1.0 / det;
  const Vec3 tvec = orig - v0;
  const double u = tvec.dot(pvec) * inv_det;
  if (u < -kRayEpsilon || u > 1.0 + kRayEpsilon) return -1.0;
  const Vec3 qvec = tvec.cross(e1);
  const double v = dir.dot(qvec) * inv_det;
  if (v < -kRayEpsilon || u + v > 1.0 + kRayEpsilon) return -1.0;
  const double t = e2.dot(qvec) * inv_det;
  if (t < 0.0 || t > tmax) return -1.0;
  return t;
}

bool ray_box(const Vec3& orig, const Vec3& inv_dir, const Vec3& lo,
             const Vec3& hi, double tmax) {
  double t0 = 0.0, t1 = tmax;
  for (int axis = 0; axis < 3; ++axis) {
    const double o = axis == 0 ? orig.x : (axis == 1 ? orig.y : orig.z);
    const double id = axis == 0 ? inv_dir.x : (axis == 1 ? inv_dir.y : inv_dir.z);
    const double lo_a = axis == 0 ? lo.x : (axis == 1 ? lo.y : lo.z);
    const double hi_a = axis == 0 ? hi.x : (axis == 1 ? hi.y : hi.z);
    if (std::isinf(id)) {
      // Axis-parallel ray: 0 * inf in the slab formula is NaN, so test
      // containment directly.
      if (o < lo_a || o > hi_a) return false;
      continue;
    }
    double tn = (lo_a - o) * id;
    double tf = (hi_a - o) * id;
    if (tn > tf) std::swap(tn, tf);
    t0 = std::max(t0, tn);
    t1 = std::min(t1, tf);
    if (t0 > t1) return false;
  }
  return true;
}

}  // namespace

double TriMesh::max_radius() const {
  double r = 0.0;
  for (const Vec3& v : vertices) r = std::max(r, v.norm());
  return r;
}

TriMesh load_mesh(const std::string& path, MeshFormat format) {
  TriMesh mesh =
      format == MeshFormat::kOff ? load_off(path) : load_obj(path);
  if (mesh.vertices.empty() || mesh.faces.empty()) {
    throw std::invalid_argument("empty mesh: " + path);
  }
  return mesh;
}

TriMesh load_mesh(const std::string& path) {
  const std::size_t dot = path.find_last_of('.');
  std::string ext = dot == std::string::npos ? "" : path.substr(dot + 1);
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  if (ext == "off") return load_mesh(path, MeshFormat::kOff);
  if (ext == "obj") return load_mesh(path, MeshFormat::kObj);
  throw std::invalid_argument("unknown mesh format: " + path);
}

void save_mesh_off(const TriMesh& mesh, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot write mesh file: " + path);
  out << "OFF\n"
      << mesh.vertices.size() << " " << mesh.faces.size() << " 0\n";
  out.precision(17);
  for (const Vec3& v : mesh.vertices) {
    out << v.x << " " << v.y << " " << v.z << "\n";
  }
  for (const auto& f : mesh.faces) {
    out << "3 " << f[0] << " " << f[1] << " " << f[2] << "\n";
  }
}

TriMesh normalize_mesh(const TriMesh& mesh) {
  if (mesh.vertices.empty()) {
    throw std::invalid_argument("normalize_mesh: empty mesh");
  }
  Vec3 lo = mesh.vertices[0], hi = mesh.vertices[0];
  for (const Vec3& v : mesh.vertices) {
    lo = {std::min(lo.x, v.x), std::min(lo.y, v.y), std::min(lo.z, v.z)};
    hi = {std::max(hi.x, v.x), std::max(hi.y, v.y), std::max(hi.z, v.z)};
  }
  const Vec3 center = (lo + hi) * 0.5;
  TriMesh out = mesh;
  double rmax = 0.0;
  for (Vec3& v : out.vertices) {
    v = v - center;
    rmax = std::max(rmax, v.norm());
  }
  if (rmax > 0.0) {
    for (Vec3& v : out.vertices) v = v * (1.0 / rmax);
  }
  return out;
}

TriMesh anisotropic_scale(const TriMesh& mesh, double sx, double sy,
                          double sz) {
  if (sx <= 0.0 || sy <= 0.0 || sz <= 0.0) {
    throw std::invalid_argument("anisotropic_scale: scales must be positive");
  }
  TriMesh out = mesh;
  for (Vec3& v : out.vertices) v = {v.x * sx, v.y * sy, v.z * sz};
  return out;
}

TriMesh rotate_mesh(const TriMesh& mesh, const Rotation& r) {
  TriMesh out = mesh;
  for (Vec3& v : out.vertices) v = r.apply(v);
  return out;
}

MeshBvh::MeshBvh(const TriMesh& mesh) : mesh_(&mesh) {
  tri_order_.resize(mesh.faces.size());
  for (std::size_t i = 0; i < tri_order_.size(); ++i) {
    tri_order_[i] = static_cast<std::uint32_t>(i);
  }
  std::vector<Vec3> centroids(mesh.faces.size());
  for (std::size_t i = 0; i < mesh.faces.size(); ++i) {
    const auto& f = mesh.faces[i];
    centroids[i] = (mesh.vertices[f[0]] + mesh.vertices[f[1]] +
                    mesh.vertices[f[2]]) *
                   (1.0 / 3.0);
  }
  nodes_.reserve(2 * mesh.faces.size());
  build(tri_order_, 0, tri_order_.size(), centroids);
}

std::uint32_t MeshBvh::build(std::vector<std::uint32_t>& tris,
                             std::size_t begin, std::size_t end,
                             std::vector<Vec3>& centroids) {
  const std::uint32_t index = static_cast<std::uint32_t>(nodes_.size());
  nodes_.emplace_back();

  Vec3 lo{std::numeric_limits<double>::max(),
          std::numeric_limits<double>::max(),
          std::numeric_limits<double>::max()};
  Vec3 hi = lo * -1.0;
  for (std::size_t i = begin; i < end; ++i) {
    const auto& f = mesh_->faces[tris[i]];
    for (int c = 0; c < 3; ++c) {
      const Vec3& v = mesh_->vertices[f[c]];
      lo = {std::min(lo.x, v.x), std::min(lo.y, v.y), std::min(lo.z, v.z)};
      hi = {std::max(hi.x, v.x), std::max(hi.y, v.y), std::max(hi.z, v.z)};
    }
  }

  const std::size_t count = end - begin;
  if (count <= 4) {
    Node& n = nodes_[index];
    n.lo = lo;
    n.hi = hi;
    n.left = static_cast<std::uint32_t>(begin);
    n.count = static_cast<std::uint32_t>(count);
    return index;
  }

  const Vec3 extent = hi - lo;
  int axis = 0;
  if (extent.y > extent.x) axis = 1;
  if (extent.z > (axis == 0 ? extent.x : extent.y)) axis = 2;
  const std::size_t mid = begin + count / 2;
  std::nth_element(
      tris.begin() + static_cast<long>(begin),
      tris.begin() + static_cast<long>(mid),
      tris.begin() + static_cast<long>(end),
      [&](std::uint32_t a, std::uint32_t b) {
        const Vec3& ca = centroids[a];
        const Vec3& cb = centroids[b];
        const double va = axis == 0 ? ca.x : (axis == 1 ? ca.y : ca.z);
        const double vb = axis == 0 ? cb.x : (axis == 1 ? cb.y : cb.z);
        return va < vb;
      });

  const std::uint32_t left = build(tris, begin, mid, centroids);
  const std::uint32_t right = build(tris, mid, end, centroids);
  Node& n = nodes_[index];
  n.lo = lo;
  n.hi = hi;
  n.left = left;
  n.right = right;
  n.count = 0;
  return index;
}

double MeshBvh::intersect(const Vec3& origin, const Vec3& dir,
                          double tmax) const {
  if (nodes_.empty()) return -1.0;
  const Vec3 inv_dir{1.0 / dir.x, 1.0 / dir.y, 1.0 / dir.z};
  double best = -1.0;
  double limit = tmax;

  std::uint32_t stack[64];
  int sp = 0;
  stack[sp++] = 0;
  while (sp > 0) {
    const Node& n = nodes_[stack[--sp]];
    if (!ray_box(origin, inv_dir, n.lo, n.hi, limit)) continue;
    if (n.count > 0) {
      for (std::uint32_t i = 0; i < n.count; ++i) {
        const auto& f = mesh_->faces[tri_order_[n.left + i]];
        const double t = intersect_triangle(origin, dir, mesh_->vertices[f[0]],
                                            mesh_->vertices[f[1]],
                                            mesh_->vertices[f[2]], limit);
        if (t >= 0.0 && (best < 0.0 || t < best)) {
          best = t;
          limit = t;
        }
      }
    } else {
      stack[sp++] = n.left;
      stack[sp++] = n.right;
    }
  }
  return best;
}

double MeshBvh::intersect_brute_force(const Vec3& origin, const Vec3& dir,
                                      double tmax) const {
  double best = -1.0;
  for (const auto& f : mesh_->faces) {
    const double t =
        intersect_triangle(origin, dir, mesh_->vertices[f[0]],
                           mesh_->vertices[f[1]], mesh_->vertices[f[2]], tmax);
    if (t >= 0.0 && (best < 0.0 || t < best)) best = t;
  }
  return best;
}

namespace {

SphericalSignal ray_cast_impl(const TriMesh& mesh, const SphericalGrid& grid,
                              bool brute_force) {
  if (mesh.max_radius() > 1.0 + 1e-6) {
    throw std::invalid_argument("ray_cast: mesh not normalized");
  }
  const MeshBvh bvh(mesh);
  const std::size_t n = grid.resolution();
  SphericalSignal signal(grid, 1);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const Vec3 p = grid.direction_of(i, j).v;
      const double t = brute_force
                           ? bvh.intersect_brute_force(p, -p, 2.0)
                           : bvh.intersect(p, -p, 2.0);
      signal.at(0, i, j) = t >= 0.0 ? t : 0.0;
    }
  }
  return signal;
}

}  // namespace

SphericalSignal ray_cast(const TriMesh& mesh, const SphericalGrid& grid) {
  return ray_cast_impl(mesh, grid, false);
}

SphericalSignal ray_cast_brute_force(const TriMesh& mesh,
                                     const SphericalGrid& grid) {
  return ray_cast_impl(mesh, grid, true);
}

}  // namespace sphalign
