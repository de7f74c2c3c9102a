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

// sphtool: ray-casting, alignment, batch evaluation and equivariance
// audits on spherical signals. Exit codes: 0 success, 1 degenerate-result
// warning, 2 input error.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "sphalign/correlate.hpp"
#include "sphalign/io.hpp"
#include "sphalign/losses.hpp"
#include "sphalign/mesh.hpp"
#include "sphalign/network.hpp"
#include "sphalign/rotation.hpp"
#include "sphalign/sht.hpp"
#include "sphalign/synthetic.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kDegPerRad = 180.0 / kPi;

constexpr int kExitOk = 0;
constexpr int kExitDegenerate = 1;
constexpr int kExitInputError = 2;

bool has_extension(const fs::path& p, const char* ext) {
  std::string e = p.extension().string();
  std::transform(e.begin(), e.end(), e.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return e == ext;
}

bool is_mesh_path(const std::string& path) {
  const fs::path p(path);
  return has_extension(p, ".off") || has_extension(p, ".obj");
}

sphalign::SphericalSignal load_input(const std::string& path,
                                     std::size_t bandwidth) {
  if (is_mesh_path(path)) {
    const sphalign::TriMesh mesh =
        sphalign::normalize_mesh(sphalign::load_mesh(path));
    return sphalign::ray_cast(mesh, sphalign::SphericalGrid(bandwidth));
  }
  return sphalign::load_signal(path);
}

// Stable path hash for per-mesh seeds (FNV-1a 64).
std::uint64_t fnv1a(const std::string& s, std::uint64_t seed) {
  std::uint64_t h = 14695981039346656037ull ^ seed;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string fmt_fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

struct EvalConfig {
  std::size_t bandwidth = 32;
  std::size_t upsample = 1;
  bool refine = true;
  bool sym = false;
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::size_t trials = 3;
  std::size_t workers = 0;
  std::string mesh_dir;
  std::string out_csv;
};

EvalConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config " + path);
  EvalConfig cfg;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      if (line.find_first_not_of(" \t\r") != std::string::npos) {
        throw std::runtime_error("config line " + std::to_string(lineno) +
                                 ": expected key = value");
      }
      continue;
    }
    auto trim = [](std::string s) {
      const auto a = s.find_first_not_of(" \t\r");
      const auto b = s.find_last_not_of(" \t\r");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (key == "bandwidth") {
      cfg.bandwidth = std::stoul(val);
    } else if (key == "upsample") {
      cfg.upsample = std::stoul(val);
    } else if (key == "refine") {
      cfg.refine = std::stoul(val) != 0;
    } else if (key == "sym") {
      cfg.sym = std::stoul(val) != 0;
    } else if (key == "seed") {
      cfg.seed = std::stoull(val);
      cfg.seed_set = true;
    } else if (key == "trials") {
      cfg.trials = std::stoul(val);
    } else if (key == "workers") {
      cfg.workers = std::stoul(val);
    } else if (key == "mesh_dir") {
      cfg.mesh_dir = val;
    } else if (key == "out_csv") {
      cfg.out_csv = val;
    } else {
      throw std::runtime_error("config line " + std::to_string(lineno) +
                               ": unknown key '" + key + "'");
    }
  }
  if (!cfg.seed_set) throw std::runtime_error("config: seed is mandatory");
  if (cfg.mesh_dir.empty()) throw std::runtime_error("config: mesh_dir unset");
  if (cfg.out_csv.empty()) throw std::runtime_error("config: out_csv unset");
  if (cfg.bandwidth == 0 || cfg.bandwidth > 256) {
    throw std::runtime_error("config: bandwidth out of range");
  }
  if (cfg.upsample == 0 || cfg.upsample > 8) {
    throw std::runtime_error("config: upsample out of range");
  }
  if (cfg.trials == 0) throw std::runtime_error("config: trials must be > 0");
  return cfg;
}

int cmd_raycast(const std::string& mesh_path, std::size_t bandwidth,
                const std::string& out_path) {
  const sphalign::TriMesh mesh =
      sphalign::normalize_mesh(sphalign::load_mesh(mesh_path));
  const sphalign::SphericalGrid grid(bandwidth);
  const sphalign::SphericalSignal sig = sphalign::ray_cast(mesh, grid);
  sphalign::save_signal(sig, out_path);
  std::cout << "mesh: " << mesh_path << " (" << mesh.vertices.size()
            << " vertices, " << mesh.faces.size() << " faces)\n"
            << "grid: bandwidth " << grid.bandwidth() << ", "
            << grid.resolution() << "x" << grid.resolution()
            << " samples, 1 channel\n"
            << "out: " << out_path << "\n";
  return kExitOk;
}

int cmd_align(const std::string& path_a, const std::string& path_b,
              std::size_t bandwidth, std::size_t upsample, bool refine,
              bool sym, bool as_json) {
  const sphalign::SphericalSignal a = load_input(path_a, bandwidth);
  const sphalign::SphericalSignal b = load_input(path_b, bandwidth);
  if (!(a.grid() == b.grid()) || a.channels() != b.channels()) {
    throw std::runtime_error("align: incompatible input resolutions");
  }
  const sphalign::PoseEstimate est =
      sphalign::estimate_relative_pose(a, b, upsample, refine);
  const sphalign::EulerZYZ e = est.rotation.euler();
  const sphalign::Mat3& m = est.rotation.matrix();

  if (as_json) {
    json j;
    j["euler_zyz_deg"] = {e.alpha * kDegPerRad, e.beta * kDegPerRad,
                          e.gamma * kDegPerRad};
    j["matrix"] = {{m(0, 0), m(0, 1), m(0, 2)},
                   {m(1, 0), m(1, 1), m(1, 2)},
                   {m(2, 0), m(2, 1), m(2, 2)}};
    j["peak"] = est.peak;
    j["degenerate"] = est.degenerate;
    j["symmetry_metric"] = sym;
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "euler (zyz, deg): alpha " << fmt_fixed(e.alpha * kDegPerRad, 3)
              << "  beta " << fmt_fixed(e.beta * kDegPerRad, 3) << "  gamma "
              << fmt_fixed(e.gamma * kDegPerRad, 3) << "\n";
    for (int r = 0; r < 3; ++r) {
      std::cout << "R[" << r << "]: " << fmt_fixed(m(r, 0), 6) << " "
                << fmt_fixed(m(r, 1), 6) << " " << fmt_fixed(m(r, 2), 6)
                << "\n";
    }
    std::cout << "peak: " << est.peak << "\n"
              << "degenerate: " << (est.degenerate ? "yes" : "no") << "\n";
  }
  return est.degenerate ? kExitDegenerate : kExitOk;
}

struct MeshResult {
  std::string category;
  std::vector<double> errors_rad;
  bool degenerate = false;
};

int cmd_eval(const std::string& config_path) {
  const EvalConfig cfg = parse_config(config_path);

  // Mesh files grouped by category = immediate subdirectory (or "all" for
  // files sitting directly in mesh_dir). Paths sorted for determinism.
  std::vector<std::pair<std::string, fs::path>> inputs;
  if (!fs::is_directory(cfg.mesh_dir)) {
    throw std::runtime_error("eval: mesh_dir is not a directory: " +
                             cfg.mesh_dir);
  }
  for (const auto& entry : fs::recursive_directory_iterator(cfg.mesh_dir)) {
    if (!entry.is_regular_file()) continue;
    if (!is_mesh_path(entry.path().string())) continue;
    const fs::path rel = fs::relative(entry.path(), cfg.mesh_dir);
    const std::string category =
        rel.has_parent_path() ? rel.begin()->string() : std::string("all");
    inputs.emplace_back(category, entry.path());
  }
  std::sort(inputs.begin(), inputs.end(), [](const auto& x, const auto& y) {
    return x.second.string() < y.second.string();
  });
  if (inputs.empty()) throw std::runtime_error("eval: empty mesh set");

  std::vector<MeshResult> results(inputs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      const std::size_t idx = next.fetch_add(1);
      if (idx >= inputs.size()) return;
      const auto& [category, path] = inputs[idx];
      MeshResult& res = results[idx];
      res.category = category;
      const sphalign::TriMesh mesh =
          sphalign::normalize_mesh(sphalign::load_mesh(path.string()));
      const sphalign::SphericalGrid grid(cfg.bandwidth);
      const sphalign::SphericalSignal base = sphalign::ray_cast(mesh, grid);
      const fs::path rel = fs::relative(path, cfg.mesh_dir);
      std::mt19937_64 rng(fnv1a(rel.generic_string(), cfg.seed));
      for (std::size_t t = 0; t < cfg.trials; ++t) {
        const sphalign::Rotation r = sphalign::random_rotation(rng);
        const sphalign::SphericalSignal rotated =
            sphalign::ray_cast(sphalign::rotate_mesh(mesh, r), grid);
        const sphalign::PoseEstimate est = sphalign::estimate_relative_pose(
            base, rotated, cfg.upsample, cfg.refine);
        res.degenerate = res.degenerate || est.degenerate;
        res.errors_rad.push_back(
            sphalign::geodesic_distance(est.rotation, r));
      }
    }
  };
  std::size_t workers = cfg.workers;
  if (workers == 0) {
    workers = std::max(1u, std::thread::hardware_concurrency());
  }
  workers = std::min(workers, inputs.size());
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }

  std::map<std::string, std::vector<double>> by_category;
  std::vector<double> overall;
  bool any_degenerate = false;
  for (const MeshResult& res : results) {
    auto& bucket = by_category[res.category];
    bucket.insert(bucket.end(), res.errors_rad.begin(), res.errors_rad.end());
    overall.insert(overall.end(), res.errors_rad.begin(),
                   res.errors_rad.end());
    any_degenerate = any_degenerate || res.degenerate;
  }

  std::ostringstream csv;
  csv << "category,mode,dof,median_deg,acc15,acc30,n\n";
  auto emit = [&](const std::string& category,
                  const std::vector<double>& errors) {
    const sphalign::PoseErrorStats st =
        sphalign::pose_stats(errors, cfg.sym);
    csv << category << ",instance,3," << fmt_fixed(st.median_deg, 4) << ","
        << fmt_fixed(st.acc_at_15, 4) << "," << fmt_fixed(st.acc_at_30, 4)
        << "," << st.count << "\n";
    std::cout << category << ": median " << fmt_fixed(st.median_deg, 2)
              << " deg, a@15 " << fmt_fixed(st.acc_at_15, 3) << ", a@30 "
              << fmt_fixed(st.acc_at_30, 3) << " (n = " << st.count << ")\n";
  };
  for (const auto& [category, errors] : by_category) emit(category, errors);
  if (by_category.size() > 1) emit("overall", overall);

  std::ofstream out(cfg.out_csv, std::ios::binary);
  if (!out) throw std::runtime_error("eval: cannot open " + cfg.out_csv);
  out << csv.str();
  if (any_degenerate) {
    std::cerr << "warning: degenerate correlation peak on some pairs\n";
    return kExitDegenerate;
  }
  return kExitOk;
}

int cmd_equiv_audit(const std::string& weights_path, std::size_t trials,
                    std::uint64_t seed, bool exact_rotations) {
  if (trials == 0) throw std::invalid_argument("equiv-audit: trials == 0");
  const sphalign::NetworkWeights net = sphalign::load_weights(weights_path);
  const sphalign::LayerSpec& first = net.layers.front();
  const std::size_t bandwidth = first.in_resolution / 2;
  const sphalign::SphericalSignal input = sphalign::random_bandlimited_signal(
      bandwidth, first.in_channels, seed);

  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ull);
  std::vector<sphalign::Rotation> rotations;
  for (std::size_t t = 0; t < trials; ++t) {
    if (exact_rotations) {
      // Azimuthal rotations by whole grid steps: the spatial input
      // rotation is exact, so the audit isolates the network itself.
      const std::size_t n = 2 * bandwidth;
      const std::size_t k = 1 + rng() % (n - 1);
      rotations.push_back(sphalign::Rotation::from_euler(
          2.0 * kPi * static_cast<double>(k) / static_cast<double>(n), 0.0,
          0.0));
    } else {
      rotations.push_back(sphalign::random_rotation(rng));
    }
  }

  for (const sphalign::TapSpec& tap : net.taps) {
    std::vector<double> errors;
    for (const sphalign::Rotation& r : rotations) {
      errors.push_back(
          sphalign::equivariance_error(net, input, r, tap.name));
    }
    std::sort(errors.begin(), errors.end());
    const double median = errors[(errors.size() - 1) / 2];
    const std::size_t ip95 =
        std::min(errors.size() - 1,
                 static_cast<std::size_t>(
                     std::ceil(0.95 * static_cast<double>(errors.size())) - 1));
    std::cout << "tap " << tap.name << ": median " << median << ", p95 "
              << errors[ip95] << " (n = " << errors.size() << ")\n";
  }
  return kExitOk;
}

int cmd_gen_weights(const std::string& out_path, const std::string& topology,
                    std::uint64_t seed) {
  sphalign::NetworkWeights net;
  if (topology == "classifier") {
    net = sphalign::make_classifier_network();
  } else if (topology == "linear") {
    net = sphalign::make_linear_network();
  } else {
    throw std::runtime_error("gen-weights: unknown topology " + topology);
  }
  sphalign::randomize_weights(&net, seed);
  sphalign::save_weights(net, out_path);
  std::cout << "wrote " << topology << " weights (" << net.layers.size()
            << " layers) to " << out_path << "\n";
  return kExitOk;
}

int cmd_gen_mesh(const std::string& out_path, const std::string& kind,
                 std::uint64_t seed, unsigned subdivisions) {
  sphalign::TriMesh mesh;
  if (kind == "bumpy") {
    mesh = sphalign::make_bumpy_sphere(subdivisions, seed);
  } else if (kind == "icosphere") {
    mesh = sphalign::make_icosphere(subdivisions);
  } else if (kind == "box") {
    mesh = sphalign::make_box(0.8, 0.5, 0.3);
  } else if (kind == "ellipsoid") {
    mesh = sphalign::make_ellipsoid(1.0, 0.7, 0.4, subdivisions);
  } else if (kind == "cylinder") {
    mesh = sphalign::make_cylinder(0.5, 0.8, 64);
  } else {
    throw std::runtime_error("gen-mesh: unknown kind " + kind);
  }
  sphalign::save_mesh_off(sphalign::normalize_mesh(mesh), out_path);
  std::cout << "wrote " << kind << " mesh (" << mesh.faces.size()
            << " faces) to " << out_path << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spherical signal alignment toolkit"};
  app.require_subcommand(1);

  std::string mesh_path, out_path, path_a, path_b, config_path, weights_path;
  std::string topology = "classifier";
  std::string mesh_kind = "bumpy";
  std::size_t bandwidth = 32;
  std::size_t upsample = 1;
  std::size_t trials = 20;
  std::uint64_t seed = 0;
  unsigned subdivisions = 3;
  bool no_refine = false, sym = false, as_json = false;
  bool exact_rotations = false;

  CLI::App* raycast = app.add_subcommand("raycast", "ray-cast a mesh");
  raycast->add_option("mesh", mesh_path, "OFF or OBJ file")->required();
  raycast->add_option("--bandwidth", bandwidth, "grid bandwidth");
  raycast->add_option("--out", out_path, "output signal file")->required();

  CLI::App* align = app.add_subcommand("align", "estimate relative rotation");
  align->add_option("a", path_a, "mesh or signal file")->required();
  align->add_option("b", path_b, "mesh or signal file")->required();
  align->add_option("--bandwidth", bandwidth, "grid bandwidth for meshes");
  align->add_option("--upsample", upsample, "bicubic upsampling factor");
  align->add_flag("--no-refine", no_refine, "skip quadratic peak refinement");
  align->add_flag("--sym", sym, "report half-turn symmetry metric");
  align->add_flag("--json", as_json, "machine-readable output");

  CLI::App* eval = app.add_subcommand("eval", "batch instance evaluation");
  eval->add_option("config", config_path, "key = value config file")
      ->required();

  CLI::App* audit =
      app.add_subcommand("equiv-audit", "tap equivariance audit");
  audit->add_option("weights", weights_path, "weight container")->required();
  audit->add_option("--trials", trials, "rotation count");
  audit->add_option("--seed", seed, "random seed")->required();
  audit->add_flag("--exact-rotations", exact_rotations,
                  "grid-aligned azimuthal rotations (exact on the grid)");

  CLI::App* genw = app.add_subcommand("gen-weights", "random weight fixture");
  genw->add_option("out", out_path, "output file")->required();
  genw->add_option("--topology", topology, "classifier or linear");
  genw->add_option("--seed", seed, "random seed")->required();

  CLI::App* genm = app.add_subcommand("gen-mesh", "synthetic mesh fixture");
  genm->add_option("out", out_path, "output OFF file")->required();
  genm->add_option("--kind", mesh_kind,
                   "bumpy, icosphere, box, ellipsoid or cylinder");
  genm->add_option("--seed", seed, "random seed");
  genm->add_option("--subdivisions", subdivisions, "icosphere subdivisions");

  CLI11_PARSE(app, argc, argv);

  try {
    if (raycast->parsed()) return cmd_raycast(mesh_path, bandwidth, out_path);
    if (align->parsed()) {
      return cmd_align(path_a, path_b, bandwidth, upsample, !no_refine, sym,
                       as_json);
    }
    if (eval->parsed()) return cmd_eval(config_path);
    if (audit->parsed()) {
      return cmd_equiv_audit(weights_path, trials, seed, exact_rotations);
    }
    if (genw->parsed()) return cmd_gen_weights(out_path, topology, seed);
    if (genm->parsed()) {
      return cmd_gen_mesh(out_path, mesh_kind, seed, subdivisions);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  }
  return kExitInputError;
}
