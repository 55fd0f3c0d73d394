#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hmls/errors.hpp"
#include "hmls/filter.hpp"
#include "hmls/hmls_surface.hpp"
#include "hmls/mesh.hpp"
#include "hmls/mesh_io.hpp"
#include "hmls/metrics.hpp"
#include "hmls/noise.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitIo = 2;
constexpr int kExitNumeric = 3;

struct FilterCfg {
  std::string input;
  std::string output;
  hmls::FilterParams params;
  bool isotropic_requested = false;
};

int run_filter(FilterCfg& cfg) {
  if (cfg.params.sigma_r_factor > 0.0) {
    if (cfg.params.sigma_s_factor > 0.0)
      throw hmls::ParamError("--sigma-s and --sigma-r are mutually exclusive");
    cfg.params.kernel = hmls::KernelMode::Isotropic;
  }
  hmls::validate(cfg.params);
  const hmls::TriMesh mesh = hmls::load_mesh(cfg.input);
  const double le = hmls::average_edge_length(mesh);
  std::printf("loaded %s: %d vertices, %d faces, average edge length %.6g\n",
              cfg.input.c_str(), mesh.vertex_count(), mesh.face_count(), le);

  hmls::FilterReport report;
  const hmls::TriMesh filtered = hmls::filter_mesh(
      mesh, cfg.params,
      [&](const hmls::IterationStats& s) {
        std::printf("iter %d/%d: max displacement %.6e (%.3f s)\n", s.iteration,
                    cfg.params.iterations, s.max_displacement, s.seconds);
        std::fflush(stdout);
      },
      &report);

  hmls::save_mesh(filtered, cfg.output);
  std::printf("wrote %s (solve failures: %lld, skipped vertices: %lld)\n",
              cfg.output.c_str(), report.solve_failures, report.skipped_vertices);
  return kExitOk;
}

struct NoiseCfg {
  std::string input;
  std::string output;
  std::string model = "gaussian-random";
  hmls::NoiseSpec spec;
};

int run_noise(NoiseCfg& cfg) {
  if (cfg.model == "gaussian-random") {
    cfg.spec.model = hmls::NoiseModel::GaussianRandomDirection;
  } else if (cfg.model == "uniform-normal") {
    cfg.spec.model = hmls::NoiseModel::UniformNormalDirection;
  } else {
    throw hmls::ParamError("unknown noise model '" + cfg.model + "'");
  }
  const hmls::TriMesh mesh = hmls::load_mesh(cfg.input);
  hmls::save_mesh(hmls::add_noise(mesh, cfg.spec), cfg.output);
  std::printf("wrote %s\n", cfg.output.c_str());
  return kExitOk;
}

struct MetricsCfg {
  std::string mesh_a;
  std::string mesh_b;
  std::string report_path;
  std::string signed_colors_path;
  std::string curvature_colors_path;
  bool per_vertex = false;
};

int run_metrics(const MetricsCfg& cfg) {
  const hmls::TriMesh a = hmls::load_mesh(cfg.mesh_a);
  const hmls::TriMesh b = hmls::load_mesh(cfg.mesh_b);
  const hmls::ErrorReport report = hmls::displacement_report(a, b);
  std::printf("displacement: mean %.6e  max %.6e  rms %.6e  (%d vertices)\n",
              report.mean, report.max, report.rms, report.count);

  if (!cfg.report_path.empty()) {
    nlohmann::json j;
    j["count"] = report.count;
    j["mean"] = report.mean;
    j["max"] = report.max;
    j["rms"] = report.rms;
    if (cfg.per_vertex) j["per_vertex"] = report.per_vertex;
    std::ofstream out(cfg.report_path, std::ios::binary | std::ios::trunc);
    if (!out) throw hmls::IoError("cannot open " + cfg.report_path + " for writing");
    out << j.dump(2) << '\n';
  }
  if (!cfg.signed_colors_path.empty()) {
    // distances from the first mesh's vertices to the second mesh's surface,
    // rendered on the first mesh
    const hmls::SignedDistanceMap map = hmls::signed_distance_map(a, b);
    hmls::save_mesh(a, cfg.signed_colors_path, hmls::MeshFormat::PlyAscii, &map.colors);
    std::printf("wrote %s\n", cfg.signed_colors_path.c_str());
  }
  if (!cfg.curvature_colors_path.empty()) {
    const hmls::CurvatureField field = hmls::mean_curvature(b);
    hmls::save_mesh(b, cfg.curvature_colors_path, hmls::MeshFormat::PlyAscii, &field.colors);
    std::printf("wrote %s\n", cfg.curvature_colors_path.c_str());
  }
  return kExitOk;
}

struct SurfaceCfg {
  std::string output;
  double mu = 1.25;
  int major_samples = 20;
  int minor_samples = 10;
  double major_radius = 2.0;
  double minor_radius = 1.0;
  int grid_major = 200;
  int grid_minor = 100;
  std::string kernel = "bspline";
  double gaussian_sigma = 1.0;
};

int run_surface_demo(const SurfaceCfg& cfg) {
  hmls::HermiteSamples samples = hmls::make_torus_samples(
      cfg.major_samples, cfg.minor_samples, cfg.major_radius, cfg.minor_radius,
      cfg.mu);
  if (cfg.kernel == "gaussian") {
    samples.kernel = hmls::SurfaceKernel::Gaussian;
    samples.sigma = cfg.gaussian_sigma;
  } else if (cfg.kernel != "bspline") {
    throw hmls::ParamError("unknown kernel '" + cfg.kernel + "'");
  }
  const hmls::TriMesh mesh = hmls::sample_surface(samples, cfg.grid_major, cfg.grid_minor);
  hmls::save_mesh(mesh, cfg.output);
  std::printf("wrote %s (%d vertices, %d faces)\n", cfg.output.c_str(),
              mesh.vertex_count(), mesh.face_count());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"H-MLS anisotropic mesh filter toolkit"};
  app.require_subcommand(1);

  FilterCfg filter_cfg;
  CLI::App* filter = app.add_subcommand(
      "filter", "Filter a mesh by per-vertex homogeneous MLS fitting");
  filter->add_option("input", filter_cfg.input, "input mesh (.obj/.off/.ply)")->required();
  filter->add_option("output", filter_cfg.output, "output mesh")->required();
  filter->add_option("--radius", filter_cfg.params.radius_factor,
                     "neighborhood radius R as a multiple of the average edge length")
      ->capture_default_str();
  filter->add_option("--sigma-s", filter_cfg.params.sigma_s_factor,
                     "anisotropic kernel width as a multiple of the average edge length");
  filter->add_option("--sigma-r", filter_cfg.params.sigma_r_factor,
                     "isotropic kernel width as a multiple of the average edge length; "
                     "selects the isotropic kernel and sets R = 2 sigma_r");
  filter->add_option("--iters", filter_cfg.params.iterations, "filtering iterations")
      ->capture_default_str();
  filter->add_option("-m,--max-neighbors", filter_cfg.params.neighbor_cap,
                     "cap on neighborhood size")
      ->capture_default_str();
  filter->add_option("--gamma", filter_cfg.params.gamma, "line constraint strength")
      ->capture_default_str();
  filter->add_option("--eta", filter_cfg.params.eta_factor,
                     "plane-distance floor as a multiple of the average edge length")
      ->capture_default_str();
  filter->add_option("--c-floor", filter_cfg.params.c_floor,
                     "floor of the normal agreement term")
      ->capture_default_str();
  filter->add_option("--noise-mag", filter_cfg.params.noise_magnitude_factor,
                     "declared max noise magnitude in average-edge-length units; "
                     "used as 2*sigma_s when --sigma-s is not given");
  std::string constraint = "vertex";
  filter->add_option("--constraint", constraint,
                     "line constraint anchor: vertex | centroid")
      ->check(CLI::IsMember({"vertex", "centroid"}))
      ->capture_default_str();
  filter->add_option("--threads", filter_cfg.params.threads,
                     "worker threads (0 = hardware concurrency); results are "
                     "identical for any setting")
      ->envname("HMLS_THREADS")
      ->capture_default_str();

  NoiseCfg noise_cfg;
  CLI::App* noise = app.add_subcommand("noise", "Corrupt a mesh with synthetic noise");
  noise->add_option("input", noise_cfg.input, "input mesh")->required();
  noise->add_option("output", noise_cfg.output, "output mesh")->required();
  noise->add_option("--model", noise_cfg.model,
                    "noise model: gaussian-random | uniform-normal")
      ->capture_default_str();
  noise->add_option("--mag", noise_cfg.spec.magnitude_factor,
                    "amplitude in average-edge-length units (Gaussian sigma or "
                    "uniform bound)")
      ->required();
  noise->add_option("--seed", noise_cfg.spec.seed, "RNG seed; fully determines the output")
      ->required();

  MetricsCfg metrics_cfg;
  CLI::App* metrics = app.add_subcommand(
      "metrics", "Compare two meshes: displacement report, signed distance, curvature");
  metrics->add_option("mesh_a", metrics_cfg.mesh_a, "first mesh (e.g. noisy)")->required();
  metrics->add_option("mesh_b", metrics_cfg.mesh_b, "second mesh (e.g. filtered)")->required();
  metrics->add_option("--report", metrics_cfg.report_path, "write a JSON displacement report");
  metrics->add_flag("--per-vertex", metrics_cfg.per_vertex,
                    "include per-vertex values in the JSON report");
  metrics->add_option("--signed-colors", metrics_cfg.signed_colors_path,
                      "write mesh A as PLY colored by signed distance to mesh B");
  metrics->add_option("--curvature-colors", metrics_cfg.curvature_colors_path,
                      "write mesh B as PLY colored by mean curvature");

  SurfaceCfg surface_cfg;
  CLI::App* surface = app.add_subcommand(
      "surface-demo", "Evaluate the moving-constant surface on a torus point-normal grid");
  surface->add_option("--out", surface_cfg.output, "output OBJ path")->required();
  surface->add_option("--mu", surface_cfg.mu, "balance parameter (> -1)")->capture_default_str();
  surface->add_option("--major-samples", surface_cfg.major_samples, "samples around the ring")
      ->capture_default_str();
  surface->add_option("--minor-samples", surface_cfg.minor_samples, "samples around the tube")
      ->capture_default_str();
  surface->add_option("--major-radius", surface_cfg.major_radius, "ring radius")
      ->capture_default_str();
  surface->add_option("--minor-radius", surface_cfg.minor_radius, "tube radius")
      ->capture_default_str();
  surface->add_option("--grid-major", surface_cfg.grid_major, "evaluation grid size (ring)")
      ->capture_default_str();
  surface->add_option("--grid-minor", surface_cfg.grid_minor, "evaluation grid size (tube)")
      ->capture_default_str();
  surface->add_option("--kernel", surface_cfg.kernel, "kernel: bspline | gaussian")
      ->capture_default_str();
  surface->add_option("--gaussian-sigma", surface_cfg.gaussian_sigma,
                      "width of the Gaussian kernel in parameter units")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*filter) {
      filter_cfg.params.constraint = constraint == "centroid"
                                         ? hmls::ConstraintMode::Centroid
                                         : hmls::ConstraintMode::Vertex;
      return run_filter(filter_cfg);
    }
    if (*noise) return run_noise(noise_cfg);
    if (*metrics) return run_metrics(metrics_cfg);
    if (*surface) return run_surface_demo(surface_cfg);
  } catch (const hmls::ParamError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  } catch (const hmls::IoError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitIo;
  } catch (const hmls::MeshError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitIo;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitNumeric;
  }
  return kExitUsage;
}
