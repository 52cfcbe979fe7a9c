// kaze: detect, match, draw and benchmark nonlinear scale-space features.

#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"
#include "kaze/commands.hpp"
#include "kaze/parallel.hpp"

namespace {

void add_pipeline_flags(CLI::App* cmd, kaze::ScaleSpaceOptions& opts) {
  const std::map<std::string, kaze::Diffusivity> diffusivities{{"g1", kaze::Diffusivity::kG1},
                                                               {"g2", kaze::Diffusivity::kG2}};
  const std::map<std::string, kaze::ExtremaWindow> windows{{"exact", kaze::ExtremaWindow::kExactSigma},
                                                           {"approx", kaze::ExtremaWindow::kApprox3x3}};
  cmd->add_option("--octaves", opts.num_octaves, "Number of octaves")->capture_default_str();
  cmd->add_option("--sublevels", opts.num_sublevels, "Sublevels per octave")->capture_default_str();
  cmd->add_option("--sigma0", opts.base_sigma, "Base scale in pixels")->capture_default_str();
  cmd->add_option("--diffusivity", opts.diffusivity, "Perona-Malik conductivity {g1|g2}")
      ->transform(CLI::CheckedTransformer(diffusivities, CLI::ignore_case));
  cmd->add_option("--threshold", opts.detector_threshold, "Hessian response threshold")->capture_default_str();
  cmd->add_option("--edge-ratio", opts.edge_ratio, "Edge rejection eigenvalue ratio")->capture_default_str();
  cmd->add_option("--extrema", opts.extrema_window, "Neighbour-level window {exact|approx}")
      ->transform(CLI::CheckedTransformer(windows, CLI::ignore_case));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Nonlinear scale-space (KAZE) feature extraction"};
  app.require_subcommand(1);

  int threads = 0;
  app.add_option("--threads", threads, "Worker thread cap (0 = all cores)");

  kaze::ScaleSpaceOptions opts;
  std::string input, output, features, features_b;
  double ratio = 0.8;
  int repeats = 3;

  auto* detect = app.add_subcommand("detect", "Extract keypoints and descriptors into a feature file");
  detect->add_option("input", input, "PGM or PNG image")->required();
  detect->add_option("-o,--output", output, "Feature file to write")->required();
  add_pipeline_flags(detect, opts);

  auto* match = app.add_subcommand("match", "Match two feature files");
  match->add_option("features_a", features, "First feature file")->required();
  match->add_option("features_b", features_b, "Second feature file")->required();
  match->add_option("--ratio", ratio, "Nearest/second-nearest ratio threshold")->capture_default_str();

  auto* bench = app.add_subcommand("bench", "Time the pipeline stages");
  bench->add_option("input", input, "PGM or PNG image")->required();
  bench->add_option("--repeats", repeats, "Number of runs (median reported)")->capture_default_str();
  add_pipeline_flags(bench, opts);

  auto* draw = app.add_subcommand("draw", "Render keypoints over the image");
  draw->add_option("input", input, "PGM or PNG image")->required();
  draw->add_option("features", features, "Feature file")->required();
  draw->add_option("-o,--output", output, "PNG to write")->required();

  for (auto* sub : {detect, bench}) sub->add_option("--threads", threads, "Worker thread cap (0 = all cores)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kaze::cli::kBadFlags;
  }

  try {
    kaze::validate(opts);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kaze::cli::kBadFlags;
  }
  if (threads < 0) {
    std::cerr << "error: --threads must be >= 0\n";
    return kaze::cli::kBadFlags;
  }
  kaze::set_thread_count(threads);

  if (*detect) return kaze::cli::cmd_detect(input, opts, output, std::cerr);
  if (*match) return kaze::cli::cmd_match(features, features_b, ratio, std::cout, std::cerr);
  if (*bench) return kaze::cli::cmd_bench(input, opts, repeats, threads, std::cout, std::cerr);
  if (*draw) return kaze::cli::cmd_draw(input, features, output, std::cerr);
  return kaze::cli::kBadFlags;
}
